//! Results checked against independent oracles: brute-force enumeration,
//! the plain simplex method, and direct residual computations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xover::approx::sinkhorn;
use xover::colgen::{cnet_crossover_lp, col_bi, ColGenConfig};
use xover::instances::{gen_mcf, gen_ot_random, gen_small_lp, gen_wb};
use xover::ipm::ipm_solve;
use xover::model::{mcf_to_lp, ot_to_lp, ot_to_mcf, wb_to_lp};
use xover::netflow::{max_spanning_forest, push_ot, tree_bi, tree_bi_ot, wb_basis_identification};
use xover::perturb::{enumerate_vertices, perturb_crossover, PerturbConfig};
use xover::simplex::{self, vertex_check, Limits};
use xover::SimplexStatus;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

#[test]
fn simplex_optimum_equals_best_enumerated_vertex() {
    for seed in 0..30 {
        let lp = gen_small_lp(3, 6, seed).unwrap();
        let best = enumerate_vertices(&lp)
            .unwrap()
            .iter()
            .map(|v| lp.objective(v))
            .fold(f64::INFINITY, f64::min);
        let res = simplex::solve(&lp, None, &Limits::default()).unwrap();
        assert_eq!(res.status, SimplexStatus::Optimal);
        assert!(rel(res.objective, best) < 1e-9, "seed {seed}: {} vs {best}", res.objective);
    }
}

/// Union-find free acyclicity test: a set of n−1 edges spans n nodes iff it
/// connects them, checked by graph search.
fn spans(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|s| *s)
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

#[test]
fn max_spanning_forest_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let n = rng.gen_range(3..=12);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        let extra = rng.gen_range(0..=4);
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push((a, b));
            }
        }
        let w: Vec<f64> = edges.iter().map(|_| rng.gen::<f64>()).collect();
        let forest = max_spanning_forest(n, &edges, &w);
        assert_eq!(forest.len(), n - 1);
        let got: f64 = forest.iter().map(|&e| w[e]).sum();
        let mut all = Vec::new();
        subsets(edges.len(), n - 1, 0, &mut Vec::new(), &mut all);
        let best = all
            .iter()
            .filter(|s| spans(n, &s.iter().map(|&e| edges[e]).collect::<Vec<_>>()))
            .map(|s| s.iter().map(|&e| w[e]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((got - best).abs() < 1e-12, "trial {trial}: {got} vs {best}");
    }
}

#[test]
fn tree_flows_satisfy_node_balance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let p = gen_mcf(25, 80, seed).unwrap();
        let approx: Vec<f64> = p.arcs.iter().map(|a| rng.gen::<f64>() * a.capacity).collect();
        let tree = tree_bi(&p, &approx).unwrap();
        let lp = mcf_to_lp(&p).unwrap();
        let scale = 1.0 + p.supply.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        // Tree flows may break capacities, but never node balance.
        let r = lp.residual(&tree.full_flow());
        assert!(r.iter().all(|v| v.abs() / scale < 1e-12), "seed {seed}");
    }
}

#[test]
fn push_on_random_transport_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total_loops = 0;
    for seed in 0..20 {
        let p = gen_ot_random(20, 20, false, seed).unwrap();
        let plan: Vec<f64> = (0..400).map(|_| rng.gen::<f64>()).collect();
        let tree = tree_bi_ot(&p, &plan).unwrap();
        let out = push_ot(&p, &tree).unwrap();
        total_loops += out.loops;
        assert!(out.plan.iter().all(|v| *v >= 0.0));
        assert!(p.marginal_error(&out.plan) <= 1e-10, "seed {seed}");
        assert_eq!(out.tree.len(), 39);
        for k in 0..400 {
            if out.plan[k] != 0.0 {
                assert!(out.tree.contains(&k));
            }
        }
        let lp = ot_to_lp(&p).unwrap();
        assert!(vertex_check(&lp, &out.plan).is_vertex);
    }
    assert!(total_loops > 0, "random ratios should produce some negative tree flows");
}

#[test]
fn barycenter_of_two_measures() {
    for seed in 0..5 {
        let p = gen_wb(2, 4, 5, seed).unwrap();
        let lp = wb_to_lp(&p).unwrap();
        let oracle = simplex::solve(&lp, None, &Limits::default()).unwrap();
        assert_eq!(oracle.status, SimplexStatus::Optimal);
        let plans_of = |x: &[f64]| -> Vec<Vec<f64>> {
            (0..2)
                .map(|k| {
                    let off = p.block_offset(k);
                    x[off..off + p.measures[k].weights.len() * p.support_size].to_vec()
                })
                .collect()
        };
        let w_off = p.weight_offset();
        // From the exact optimum: blocks keep their optimal plans.
        let v = wb_basis_identification(&p, &oracle.x[w_off..], &plans_of(&oracle.x)).unwrap();
        assert!(lp.residual(&v.x).iter().all(|r| r.abs() < 1e-10));
        assert!(v.x.iter().all(|x| *x >= 0.0));
        assert!(rel(lp.objective(&v.x), oracle.objective) < 1e-9, "seed {seed}");
        // From an interior point: still a feasible point, never below the optimum.
        let pt = ipm_solve(&lp, 1e-6).unwrap();
        let v = wb_basis_identification(&p, &pt.x[w_off..], &plans_of(&pt.x)).unwrap();
        assert!(lp.residual(&v.x).iter().all(|r| r.abs() < 1e-9));
        assert!(lp.objective(&v.x) >= oracle.objective - 1e-9);
    }
}

#[test]
fn transport_as_network_keeps_its_optimum() {
    for seed in 0..20 {
        let p = gen_ot_random(5, 5, false, seed).unwrap();
        let a = simplex::solve(&ot_to_lp(&p).unwrap(), None, &Limits::default()).unwrap();
        let b = simplex::solve(&mcf_to_lp(&ot_to_mcf(&p).unwrap()).unwrap(), None, &Limits::default()).unwrap();
        assert!(rel(a.objective, b.objective) < 1e-9);
    }
}

#[test]
fn network_optima_are_integral() {
    for seed in 0..20 {
        let lp = mcf_to_lp(&gen_mcf(30, 100, seed).unwrap()).unwrap();
        let res = simplex::solve(&lp, None, &Limits::default()).unwrap();
        assert!(res.x.iter().all(|v| (v - v.round()).abs() < 1e-7));
    }
}

#[test]
fn warm_start_and_monotone_objective() {
    for seed in 0..10 {
        let lp = mcf_to_lp(&gen_mcf(20, 60, seed).unwrap()).unwrap();
        let limits = Limits {
            record_trace: true,
            ..Limits::default()
        };
        let res = simplex::solve(&lp, None, &limits).unwrap();
        for w in res.trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * (1.0 + w[0].abs()));
        }
        let again = simplex::solve(&lp, Some(&res.basis), &Limits::default()).unwrap();
        assert_eq!(again.iterations, 0);
        assert_eq!(again.objective, res.objective);
    }
}

#[test]
fn col_bi_master_steps_are_monotone() {
    for seed in 0..10 {
        let p = gen_mcf(30, 120, seed).unwrap();
        let lp = mcf_to_lp(&p).unwrap();
        let ordering: Vec<usize> = (0..lp.num_cols()).collect();
        let bi = col_bi(&lp, &ordering, &ColGenConfig::default(), true).unwrap();
        for w in bi.steps.windows(2) {
            assert!(w[1].basic_artificials <= w[0].basic_artificials);
            assert!(w[1].objective <= w[0].objective + 1e-9 * (1.0 + w[0].objective.abs()));
            assert!(w[1].columns >= w[0].columns);
        }
    }
}

#[test]
fn interior_points_stay_interior() {
    for seed in 0..10 {
        let lp = gen_small_lp(4, 9, seed).unwrap();
        let pt = ipm_solve(&lp, 1e-6).unwrap();
        assert!(pt.relative_gap <= 1e-6);
        assert!(pt.x.iter().all(|v| *v > 0.0));
        assert!(pt.s.iter().all(|v| *v > 0.0));
    }
}

#[test]
fn general_lp_crossovers_agree_with_simplex() {
    for seed in 0..20 {
        let lp = gen_small_lp(5, 12, seed).unwrap();
        let oracle = simplex::solve(&lp, None, &Limits::default()).unwrap();
        let pt = ipm_solve(&lp, 1e-3).unwrap();
        let cnet = cnet_crossover_lp(&lp, &pt.x, &ColGenConfig::default()).unwrap();
        assert!(rel(cnet.result.objective, oracle.objective) < 1e-9, "cnet seed {seed}");
        assert!(vertex_check(&lp, &cnet.result.x).is_vertex);

        let pt = ipm_solve(&lp, 1e-8).unwrap();
        let cfg = PerturbConfig {
            seed,
            reoptimize: true,
            ..PerturbConfig::default()
        };
        let out = perturb_crossover(&lp, &pt, &cfg).unwrap();
        let x = &out.result.x;
        assert!(lp.residual(x).iter().all(|r| r.abs() < 1e-9));
        assert!(x.iter().zip(&lp.lower).all(|(v, l)| *v >= l - 1e-12));
        assert!(vertex_check(&lp, x).is_vertex);
        assert!(rel(out.result.objective, oracle.objective) < 1e-9, "perturb seed {seed}");
    }
}

#[test]
fn sinkhorn_plan_is_strictly_positive() {
    for seed in 0..5 {
        let p = gen_ot_random(10, 12, false, seed).unwrap();
        let out = sinkhorn(&p, None, 1e-8, 100_000).unwrap();
        assert!(out.plan.iter().all(|v| *v > 0.0));
        assert!(out.state.marginal_error <= 1e-8);
    }
}
