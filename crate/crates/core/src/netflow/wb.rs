use super::push::{push_ot, PushOutcome};
use super::tree::tree_bi_ot;
use crate::error::{Error, Result};
use crate::model::{OtProblem, WbProblem};

/// Feasible point of the barycenter LP assembled from per-measure transport
/// vertices.
#[derive(Clone, Debug)]
pub struct WbVertex {
    /// Full LP vector in `wb_to_lp` layout.
    pub x: Vec<f64>,
    /// The barycenter weights that were held fixed.
    pub weights: Vec<f64>,
    pub blocks: Vec<PushOutcome>,
}

/// The transport subproblem of measure `k` once the barycenter is fixed.
pub fn wb_block_problem(p: &WbProblem, k: usize, weights: &[f64]) -> Result<OtProblem> {
    let mk = &p.measures[k];
    OtProblem::new(mk.weights.clone(), weights.to_vec(), mk.cost.clone())
}

/// Fixes the barycenter weights of an approximate solution, then runs Tree-BI
/// and the push phase on every transport block.
///
/// Atoms with zero barycenter weight become zero-demand consumers; their
/// columns stay at zero and may still appear in a block's tree as degenerate
/// basic arcs.
pub fn wb_basis_identification(p: &WbProblem, weights: &[f64], plans: &[Vec<f64>]) -> Result<WbVertex> {
    let m = p.support_size;
    if weights.len() != m || plans.len() != p.measures.len() {
        return Err(Error::Dimension("approximate barycenter solution has the wrong shape".into()));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidInput("barycenter weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidInput("barycenter weights are all zero".into()));
    }
    let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let mut x = vec![0.0; p.weight_offset() + m];
    let mut blocks = Vec::with_capacity(p.measures.len());
    for (k, plan) in plans.iter().enumerate() {
        let ot = wb_block_problem(p, k, &weights)?;
        if plan.len() != ot.cost.len() {
            return Err(Error::Dimension(format!("plan {k} has the wrong size")));
        }
        let clipped: Vec<f64> = plan.iter().map(|v| v.max(0.0)).collect();
        let tree = tree_bi_ot(&ot, &clipped)?;
        let out = push_ot(&ot, &tree)?;
        let off = p.block_offset(k);
        x[off..off + out.plan.len()].copy_from_slice(&out.plan);
        blocks.push(out);
    }
    x[p.weight_offset()..].copy_from_slice(&weights);
    Ok(WbVertex { x, weights, blocks })
}
