use super::ratio::{flow_ratio_mcf, FlowRatios};
use crate::error::{Error, Result};
use crate::model::{ot_to_mcf, McfProblem, OtProblem};
use crate::simplex::{BasisState, VarStatus};
use serde::{Deserialize, Serialize};

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Indices sorted by descending weight, ties by lower index.
fn descending(weights: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    idx
}

/// Kruskal's algorithm for a maximum-weight spanning forest of an undirected
/// view of `edges`. Returns the chosen edge indices in selection order.
pub fn max_spanning_forest(num_nodes: usize, edges: &[(usize, usize)], weights: &[f64]) -> Vec<usize> {
    let mut sets = DisjointSets::new(num_nodes);
    let mut chosen = Vec::with_capacity(num_nodes.saturating_sub(1));
    for e in descending(weights) {
        let (u, v) = edges[e];
        if sets.union(u, v) {
            chosen.push(e);
            if chosen.len() + 1 == num_nodes {
                break;
            }
        }
    }
    chosen
}

/// Columns by descending flow ratio, ties by lower index.
pub fn ratio_ordering(ratios: &FlowRatios) -> Vec<usize> {
    descending(ratios.as_slice())
}

/// A maximum-ratio spanning forest first, then the remaining arcs by
/// descending ratio.
pub fn network_ordering(num_nodes: usize, edges: &[(usize, usize)], ratios: &FlowRatios) -> Vec<usize> {
    let forest = max_spanning_forest(num_nodes, edges, ratios.as_slice());
    let mut in_forest = vec![false; edges.len()];
    for &e in &forest {
        in_forest[e] = true;
    }
    let mut order = forest;
    order.extend(ratio_ordering(ratios).into_iter().filter(|&e| !in_forest[e]));
    order
}

pub fn column_ordering(p: &McfProblem, ratios: &FlowRatios) -> Vec<usize> {
    network_ordering(p.num_nodes, &endpoints(p), ratios)
}

pub(crate) fn endpoints(p: &McfProblem) -> Vec<(usize, usize)> {
    p.arcs.iter().map(|a| (a.tail, a.head)).collect()
}

/// Spanning-tree solution: the tree arcs and their uniquely determined flows,
/// which may be negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeSolution {
    pub arcs: Vec<usize>,
    pub flows: Vec<f64>,
    pub num_arcs: usize,
    pub num_nodes: usize,
}

impl TreeSolution {
    /// Flow on every arc of the problem (zero off the tree).
    pub fn full_flow(&self) -> Vec<f64> {
        let mut f = vec![0.0; self.num_arcs];
        for (&a, &v) in self.arcs.iter().zip(&self.flows) {
            f[a] = v;
        }
        f
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.flows.iter().all(|f| *f >= -tol)
    }

    /// Basis of the incidence LP: the tree arcs plus the logical of node 0.
    pub fn basis(&self) -> BasisState {
        tree_basis(self.num_arcs, self.num_nodes, &self.arcs)
    }
}

/// Basis made of `tree_arcs` and the logical column of row 0; every other arc
/// is nonbasic at its lower bound.
pub fn tree_basis(num_arcs: usize, num_nodes: usize, tree_arcs: &[usize]) -> BasisState {
    let mut status = vec![VarStatus::NonbasicLower; num_arcs + num_nodes];
    let mut basic = tree_arcs.to_vec();
    basic.push(num_arcs);
    for &j in &basic {
        status[j] = VarStatus::Basic;
    }
    BasisState { status, basic }
}

/// Solves the node balances on a spanning tree by leaf elimination.
pub fn tree_flows(num_nodes: usize, edges: &[(usize, usize)], tree: &[usize], supply: &[f64]) -> Result<Vec<f64>> {
    if tree.len() + 1 != num_nodes {
        return Err(Error::InvalidInput(format!(
            "{} tree arcs cannot span {num_nodes} nodes",
            tree.len()
        )));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_nodes];
    for (k, &e) in tree.iter().enumerate() {
        let (u, v) = edges[e];
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    let mut parent_edge = vec![usize::MAX; num_nodes];
    let mut visited = vec![false; num_nodes];
    let mut order = Vec::with_capacity(num_nodes);
    visited[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &(v, k) in &adj[u] {
            if !visited[v] {
                visited[v] = true;
                parent_edge[v] = k;
                order.push(v);
            }
        }
    }
    if order.len() != num_nodes {
        return Err(Error::InvalidInput("tree arcs do not span all nodes".into()));
    }
    let mut residual = supply.to_vec();
    let mut flows = vec![0.0; tree.len()];
    for &v in order.iter().skip(1).rev() {
        let k = parent_edge[v];
        let (tail, head) = edges[tree[k]];
        if tail == v {
            flows[k] = residual[v];
            residual[head] += flows[k];
        } else {
            flows[k] = -residual[v];
            residual[tail] -= flows[k];
        }
        residual[v] = 0.0;
    }
    Ok(flows)
}

/// Maximum flow-ratio spanning tree of `approx` and its tree solution.
/// `approx` need not be feasible.
pub fn tree_bi(p: &McfProblem, approx: &[f64]) -> Result<TreeSolution> {
    let ratios = flow_ratio_mcf(p, approx)?;
    tree_bi_with_ratios(p, &ratios)
}

pub fn tree_bi_with_ratios(p: &McfProblem, ratios: &FlowRatios) -> Result<TreeSolution> {
    let edges = endpoints(p);
    let tree = max_spanning_forest(p.num_nodes, &edges, ratios.as_slice());
    if tree.len() + 1 != p.num_nodes {
        return Err(Error::InvalidInput("network is not connected".into()));
    }
    let flows = tree_flows(p.num_nodes, &edges, &tree, &p.supply)?;
    Ok(TreeSolution {
        arcs: tree,
        flows,
        num_arcs: p.num_arcs(),
        num_nodes: p.num_nodes,
    })
}

/// Tree-BI on a transport plan (row-major, `m × n`). Arc `i·n + j` joins
/// supplier `i` and consumer `j`.
pub fn tree_bi_ot(p: &OtProblem, plan: &[f64]) -> Result<TreeSolution> {
    let mcf = ot_to_mcf(p)?;
    tree_bi(&mcf, plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Arc;

    #[test]
    fn triangle_ordering() {
        let edges = [(0, 1), (1, 2), (0, 2)];
        let r = FlowRatios(vec![2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(network_ordering(3, &edges, &r), vec![0, 1, 2]);
        assert_eq!(ratio_ordering(&r), vec![0, 1, 2]);
    }

    #[test]
    fn equal_ratios_keep_index_order() {
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3)];
        let r = FlowRatios(vec![0.5; 4]);
        assert_eq!(network_ordering(4, &edges, &r), vec![0, 1, 3, 2]);
        assert_eq!(ratio_ordering(&r), vec![0, 1, 2, 3]);
    }

    #[test]
    fn forest_on_disconnected_support() {
        let edges = [(0, 1), (2, 3)];
        let f = max_spanning_forest(4, &edges, &[0.1, 0.9]);
        assert_eq!(f, vec![1, 0]);
    }

    fn ot(s: Vec<f64>, d: Vec<f64>) -> OtProblem {
        OtProblem::new(s, d, vec![1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    #[test]
    fn leaf_elimination_feasible_tree() {
        let p = ot(vec![3.0, 2.0], vec![4.0, 1.0]);
        let mcf = ot_to_mcf(&p).unwrap();
        let f = tree_flows(4, &endpoints(&mcf), &[0, 1, 2], &mcf.supply).unwrap();
        assert_eq!(f, vec![2.0, 1.0, 2.0]);
    }

    #[test]
    fn leaf_elimination_infeasible_tree() {
        let p = ot(vec![2.0, 2.0], vec![3.0, 1.0]);
        let mcf = ot_to_mcf(&p).unwrap();
        let f = tree_flows(4, &endpoints(&mcf), &[1, 2, 3], &mcf.supply).unwrap();
        assert_eq!(f, vec![2.0, 3.0, -1.0]);
    }

    #[test]
    fn tree_bi_reproduces_spanning_vertex() {
        let p = ot(vec![3.0, 2.0], vec![4.0, 1.0]);
        let vertex = [2.0, 1.0, 2.0, 0.0];
        let t = tree_bi_ot(&p, &vertex).unwrap();
        assert_eq!(t.full_flow(), vertex.to_vec());
        assert!(t.is_feasible(0.0));
    }

    #[test]
    fn disconnected_network_is_rejected() {
        let arc = |tail, head| Arc {
            tail,
            head,
            cost: 1.0,
            capacity: 1.0,
        };
        let p = McfProblem::new(4, vec![arc(0, 1), arc(2, 3)], vec![0.0; 4]).unwrap();
        assert!(tree_bi(&p, &[0.0, 0.0]).is_err());
    }
}
