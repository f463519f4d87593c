//! Browser demo: three crossover runs exposed to JavaScript as JSON strings.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use xover::approx::sinkhorn;
use xover::colgen::{cnet_crossover, tnet_crossover, ColGenConfig};
use xover::instances::{degenerate_transport_lp, gen_mcf, gen_ot_points};
use xover::ipm::ipm_solve;
use xover::model::mcf_to_lp;
use xover::perturb::{perturb_crossover, PerturbConfig};
use xover::simplex::{self, vertex_check};
use xover::StandardLp;

fn js(e: xover::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn oracle(lp: &StandardLp) -> Result<f64, JsError> {
    Ok(simplex::solve(lp, None, &Default::default()).map_err(js)?.objective)
}

/// Transport entries above `tol` as `[i, j, mass]`.
fn sparse_plan(plan: &[f64], n: usize, tol: f64) -> Vec<Value> {
    plan.iter()
        .enumerate()
        .filter(|(_, v)| **v > tol)
        .map(|(k, v)| json!([k / n, k % n, v]))
        .collect()
}

/// Random point clouds: Sinkhorn plan, then the vertex found by TNET.
#[wasm_bindgen]
pub fn ot_demo(m: usize, n: usize, seed: u64, eta: Option<f64>) -> Result<String, JsError> {
    let pc = gen_ot_points(m, n, seed).map_err(js)?;
    let p = &pc.problem;
    let sk = sinkhorn(p, eta, 1e-6, 50_000).map_err(js)?;
    let t = tnet_crossover(p, &sk.plan, &ColGenConfig::default()).map_err(js)?;
    let lp = xover::model::ot_to_lp(p).map_err(js)?;
    let best = oracle(&lp)?;
    let obj = t.crossover.result.objective;
    Ok(json!({
        "sources": pc.sources,
        "targets": pc.targets,
        "supply": p.supply,
        "demand": p.demand,
        "sinkhorn": {
            "plan": sparse_plan(&sk.plan, n, 1e-6),
            "objective": p.objective(&sk.plan),
            "iterations": sk.state.iterations,
            "eta": sk.state.eta,
            "marginal_error": sk.state.marginal_error,
        },
        "vertex": {
            "plan": sparse_plan(&t.crossover.result.x, n, 0.0),
            "objective": obj,
            "push_loops": t.push_loops,
            "reopt_pivots": t.crossover.opt_pivots,
            "is_vertex": vertex_check(&lp, &t.crossover.result.x).is_vertex,
        },
        "oracle_objective": best,
        "relative_error": (obj - best).abs() / best.abs().max(1e-300),
    })
    .to_string())
}

/// Random network: interior point at a loose gap, then CNET.
#[wasm_bindgen]
pub fn mcf_demo(nodes: usize, arcs: usize, seed: u64, gap: f64) -> Result<String, JsError> {
    let p = gen_mcf(nodes, arcs, seed).map_err(js)?;
    let lp = mcf_to_lp(&p).map_err(js)?;
    let pt = ipm_solve(&lp, gap).map_err(js)?;
    let out = cnet_crossover(&p, &pt.x, &ColGenConfig::default()).map_err(js)?;
    let flow = &out.result.x;
    let arcs_json: Vec<Value> = p
        .arcs
        .iter()
        .enumerate()
        .map(|(k, a)| {
            json!({
                "tail": a.tail, "head": a.head, "cost": a.cost, "capacity": a.capacity,
                "approx": pt.x[k], "flow": flow[k],
            })
        })
        .collect();
    Ok(json!({
        "nodes": nodes,
        "supply": p.supply,
        "arcs": arcs_json,
        "ipm_iterations": pt.iterations,
        "approx_objective": p.objective(&pt.x),
        "objective": out.result.objective,
        "oracle_objective": oracle(&lp)?,
        "integral": flow.iter().all(|v| v.fract() == 0.0),
        "bi_master_iterations": out.bi_master_iterations,
        "opt_master_iterations": out.opt_master_iterations,
        "pivots": out.bi_pivots + out.opt_pivots,
    })
    .to_string())
}

/// Degenerate transport LP: the same interior point crossed over with several
/// perturbation seeds, each landing on a (possibly different) optimal vertex.
#[wasm_bindgen]
pub fn perturb_demo(size: usize, face_dim: usize, seed: u64, delta: f64, trials: u64) -> Result<String, JsError> {
    let d = degenerate_transport_lp(size, size, face_dim, seed).map_err(js)?;
    let pt = ipm_solve(&d.lp, 1e-8).map_err(js)?;
    let base = d.lp.num_cols() - d.duplicated.len();
    let mut runs = Vec::new();
    let mut seen: Vec<Vec<f64>> = Vec::new();
    for s in 0..trials {
        let cfg = PerturbConfig {
            delta,
            seed: s,
            ..PerturbConfig::default()
        };
        let out = perturb_crossover(&d.lp, &pt, &cfg).map_err(js)?;
        let x = &out.result.x;
        if !seen.iter().any(|v| v.iter().zip(x).all(|(a, b)| (a - b).abs() < 1e-9)) {
            seen.push(x.clone());
        }
        // How each duplicated pair splits its flow at this vertex.
        let split: Vec<Value> = d
            .duplicated
            .iter()
            .enumerate()
            .map(|(k, &j)| json!([x[j], x[base + k]]))
            .collect();
        runs.push(json!({
            "seed": s,
            "objective": out.result.objective,
            "is_vertex": vertex_check(&d.lp, x).is_vertex,
            "support_size": out.support_size,
            "fallback": out.used_fallback,
            "bound_holds": out.bound.holds,
            "split": split,
        }));
    }
    Ok(json!({
        "rows": d.lp.num_rows(),
        "cols": d.lp.num_cols(),
        "face_dim": face_dim,
        "optimum": d.optimum,
        "ipm_gap": pt.gap,
        "interior_split": d.duplicated.iter().enumerate().map(|(k, &j)| json!([pt.x[j], pt.x[base + k]])).collect::<Vec<_>>(),
        "runs": runs,
        "distinct_vertices": seen.len(),
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ot_demo_reaches_the_optimum() {
        let v: Value = serde_json::from_str(&ot_demo(6, 5, 1, None).unwrap()).unwrap();
        assert!(v["relative_error"].as_f64().unwrap() < 1e-9);
        assert_eq!(v["vertex"]["is_vertex"], true);
    }

    #[test]
    fn mcf_demo_is_integral_and_optimal() {
        let v: Value = serde_json::from_str(&mcf_demo(10, 30, 2, 0.01).unwrap()).unwrap();
        assert_eq!(v["integral"], true);
        assert_eq!(v["objective"], v["oracle_objective"]);
    }

    #[test]
    fn perturb_demo_visits_vertices_of_the_face() {
        let v: Value = serde_json::from_str(&perturb_demo(4, 2, 3, 1e-3, 12).unwrap()).unwrap();
        let runs = v["runs"].as_array().unwrap();
        assert!(runs.iter().all(|r| r["is_vertex"] == true));
        let opt = v["optimum"].as_f64().unwrap();
        for r in runs {
            let o = r["objective"].as_f64().unwrap();
            assert!((o - opt).abs() <= 1e-3 * (1.0 + opt.abs()));
        }
        assert!(v["distinct_vertices"].as_u64().unwrap() >= 1);
    }
}
