use proptest::prelude::*;

use xover::approx::sinkhorn;
use xover::instances::{
    gen_mcf, gen_ot_random, read_dimacs, read_mps, read_ot, read_solution, write_dimacs, write_mps, write_ot,
    write_solution, Solution,
};
use xover::linalg::CscMatrix;
use xover::model::{shift_mcf, Arc};
use xover::{McfProblem, SimplexStatus, StandardLp};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 100,
        ..ProptestConfig::default()
    }
}

fn arb_lp() -> impl Strategy<Value = StandardLp> {
    (1usize..5, 1usize..8).prop_flat_map(|(m, n)| {
        (
            proptest::collection::vec(proptest::option::weighted(0.4, -50.0f64..50.0), m * n),
            proptest::collection::vec(-10.0f64..10.0, m),
            proptest::collection::vec(-5.0f64..5.0, n),
            proptest::collection::vec((0u8..5, -3.0f64..3.0, 0.0f64..4.0), n),
        )
            .prop_map(move |(entries, b, c, bounds)| {
                let trip: Vec<(usize, usize, f64)> = entries
                    .iter()
                    .enumerate()
                    .filter_map(|(k, v)| v.map(|v| (k % m, k / m, v)))
                    .collect();
                let (lower, upper): (Vec<f64>, Vec<f64>) = bounds
                    .iter()
                    .map(|&(kind, lo, width)| match kind {
                        0 => (0.0, f64::INFINITY),
                        1 => (lo, lo + width),
                        2 => (f64::NEG_INFINITY, f64::INFINITY),
                        3 => (f64::NEG_INFINITY, lo),
                        _ => (lo, lo),
                    })
                    .unzip();
                StandardLp::new_allow_empty(CscMatrix::from_triplets(m, n, &trip), b, c, lower, upper).unwrap()
            })
    })
}

fn arb_mcf() -> impl Strategy<Value = McfProblem> {
    (2usize..12, any::<u64>(), proptest::bool::ANY).prop_flat_map(|(nodes, seed, inf)| {
        let arcs = nodes - 1 + (seed % 10) as usize;
        let arcs = arcs.min(nodes * (nodes - 1));
        proptest::collection::vec(-1000.0f64..1000.0, arcs).prop_map(move |costs| {
            let base = gen_mcf(nodes, arcs, seed).unwrap();
            let arcs: Vec<Arc> = base
                .arcs
                .iter()
                .zip(&costs)
                .enumerate()
                .map(|(k, (a, &c))| Arc {
                    cost: c,
                    capacity: if inf && k % 3 == 0 { f64::INFINITY } else { a.capacity },
                    ..*a
                })
                .collect();
            McfProblem::new(nodes, arcs, base.supply.clone()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dimacs_round_trip(p in arb_mcf()) {
        prop_assert_eq!(read_dimacs(&write_dimacs(&p)).unwrap(), p);
    }

    #[test]
    fn ot_round_trip(m in 1usize..10, n in 1usize..10, integer: bool, seed: u64) {
        let p = gen_ot_random(m, n, integer, seed).unwrap();
        prop_assert_eq!(read_ot(&write_ot(&p)).unwrap(), p);
    }

    #[test]
    fn mps_round_trip(lp in arb_lp()) {
        prop_assert_eq!(read_mps(&write_mps(&lp, "prop")).unwrap(), lp);
    }

    #[test]
    fn solution_round_trip(
        x in proptest::collection::vec(proptest::option::of(-1e6f64..1e6), 0..20),
        basis in proptest::collection::btree_set(0usize..40, 0..10),
        obj in -1e9f64..1e9,
    ) {
        let sol = Solution {
            status: SimplexStatus::Optimal,
            objective: obj,
            entries: x.iter().enumerate().filter_map(|(k, v)| v.filter(|v| *v != 0.0).map(|v| (k, v))).collect(),
            basis: basis.into_iter().collect(),
        };
        prop_assert_eq!(read_solution(&write_solution(&sol)).unwrap(), sol);
    }

    #[test]
    fn sinkhorn_marginal_error_never_increases(m in 2usize..12, n in 2usize..12, seed: u64, scale in 0.005f64..0.5) {
        let p = gen_ot_random(m, n, false, seed).unwrap();
        let max_c = p.cost.iter().fold(0.0_f64, |a, c| a.max(*c));
        let out = sinkhorn(&p, Some(scale * max_c), 1e-10, 2_000).unwrap();
        for w in out.state.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-14, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn shift_round_trip(p in arb_mcf(), fracs in proptest::collection::vec(0.0f64..1.0, 64)) {
        // Any flow in the box works: shifting ignores balance.
        let flow: Vec<f64> = p.arcs.iter().zip(&fracs).map(|(a, f)| {
            if a.capacity.is_finite() { f * a.capacity } else { 100.0 * f }
        }).collect();
        let (shifted, map) = shift_mcf(&p, &flow).unwrap();
        let sflow = map.shift_flow(&flow);
        prop_assert_eq!(map.unshift_flow(&sflow).unwrap(), flow.clone());
        let lhs = p.objective(&flow);
        let rhs = shifted.objective(&sflow) + map.offset;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }
}
