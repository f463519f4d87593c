//! Network structure: flow ratios, ratio-guided column orderings, maximum-ratio
//! spanning trees (Tree-BI), the transport push phase and the barycenter
//! decomposition into transport blocks.

mod push;
mod ratio;
mod tree;
mod wb;

pub use push::{push_ot, PushOutcome};
pub use ratio::{flow_ratio_lp, flow_ratio_mcf, FlowRatios};
pub use tree::{
    column_ordering, max_spanning_forest, network_ordering, ratio_ordering, tree_basis, tree_bi, tree_bi_ot,
    tree_bi_with_ratios, tree_flows, TreeSolution,
};
pub use wb::{wb_basis_identification, wb_block_problem, WbVertex};

/// Arc endpoints of an MCF problem, in arc order.
pub fn arc_endpoints(p: &crate::model::McfProblem) -> Vec<(usize, usize)> {
    tree::endpoints(p)
}
