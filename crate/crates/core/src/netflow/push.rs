use super::tree::{tree_basis, TreeSolution};
use crate::error::{Error, Result};
use crate::model::OtProblem;
use crate::simplex::BasisState;
use serde::{Deserialize, Serialize};

/// Feasible transport plan produced by the push phase, with the spanning tree
/// that supports it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PushOutcome {
    /// Row-major `m × n` plan.
    pub plan: Vec<f64>,
    /// `m + n - 1` arc indices; the plan is zero off this tree.
    pub tree: Vec<usize>,
    /// Number of loop updates performed.
    pub loops: usize,
}

impl PushOutcome {
    /// Basis of the transport LP (`ot_to_lp` layout).
    pub fn basis(&self, p: &OtProblem) -> BasisState {
        let (m, n) = (p.num_suppliers(), p.num_consumers());
        tree_basis(m * n, m + n, &self.tree)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.plan.len()).filter(|&k| self.plan[k] > 0.0).collect()
    }
}

/// Removes negative entries of a transport tree solution by loop updates.
///
/// Each negative cell `(i, j)` is raised along the loop
/// `i → j → i' → j' → i`, where `j'` and `i'` carry the largest flow in row `i`
/// and column `j`, by `θ = min(-f_ij, f_ij', f_i'j)`. Every update preserves
/// both marginals. The spanning tree is updated like a network-simplex pivot
/// so the result stays basic.
pub fn push_ot(p: &OtProblem, tree: &TreeSolution) -> Result<PushOutcome> {
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    if tree.num_arcs != m * n || tree.num_nodes != m + n {
        return Err(Error::Dimension("tree does not belong to this transport problem".into()));
    }
    let mass: f64 = p.supply.iter().sum();
    let tol = 1e-13 * (1.0 + mass);
    let mut plan = tree.full_flow();
    let mut in_tree = vec![false; m * n];
    let mut tree_arcs = tree.arcs.clone();
    for &a in &tree_arcs {
        in_tree[a] = true;
    }
    let cap = 10 * (m + n);
    let mut loops = 0;
    loop {
        let mut negative: Vec<usize> = (0..m * n).filter(|&k| plan[k] < -tol).collect();
        if negative.is_empty() {
            break;
        }
        negative.sort_by(|&a, &b| plan[a].total_cmp(&plan[b]).then(a.cmp(&b)));
        for k in negative {
            if plan[k] >= -tol {
                continue;
            }
            let (i, j) = (k / n, k % n);
            let jp = argmax((0..n).map(|l| plan[i * n + l]));
            let ip = argmax((0..m).map(|r| plan[r * n + j]));
            let (row_cell, col_cell) = (i * n + jp, ip * n + j);
            let theta = (-plan[k]).min(plan[row_cell]).min(plan[col_cell]);
            if !(theta > 0.0) || ip == i || jp == j {
                return Err(Error::PushStalled(loops));
            }
            loops += 1;
            if loops > cap {
                return Err(Error::PushStalled(loops));
            }
            let enter = ip * n + jp;
            plan[k] += theta;
            plan[row_cell] -= theta;
            plan[col_cell] -= theta;
            // Unconditional accumulate: marginals stay intact even if the cell is positive.
            plan[enter] += theta;
            let cycle = [k, row_cell, col_cell];
            for &c in &cycle {
                if plan[c].abs() <= tol {
                    plan[c] = 0.0;
                }
            }
            if !in_tree[enter] {
                let leave = cycle
                    .iter()
                    .copied()
                    .find(|&c| plan[c] == 0.0)
                    .ok_or(Error::PushStalled(loops))?;
                in_tree[leave] = false;
                in_tree[enter] = true;
                let pos = tree_arcs.iter().position(|&a| a == leave).ok_or(Error::PushStalled(loops))?;
                tree_arcs[pos] = enter;
            }
        }
    }
    for v in plan.iter_mut() {
        if v.abs() <= tol {
            *v = 0.0;
        }
    }
    Ok(PushOutcome {
        plan,
        tree: tree_arcs,
        loops,
    })
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, v) in values.enumerate() {
        if v > best.1 {
            best = (k, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ot_to_mcf;
    use crate::netflow::tree::{endpoints, tree_flows};

    fn tree_solution(p: &OtProblem, arcs: &[usize]) -> TreeSolution {
        let mcf = ot_to_mcf(p).unwrap();
        let flows = tree_flows(mcf.num_nodes, &endpoints(&mcf), arcs, &mcf.supply).unwrap();
        TreeSolution {
            arcs: arcs.to_vec(),
            flows,
            num_arcs: mcf.num_arcs(),
            num_nodes: mcf.num_nodes,
        }
    }

    #[test]
    fn hand_traced_two_by_two() {
        let p = OtProblem::new(vec![2.0, 2.0], vec![3.0, 1.0], vec![0.0; 4]).unwrap();
        let t = tree_solution(&p, &[1, 2, 3]);
        assert_eq!(t.full_flow(), vec![0.0, 2.0, 3.0, -1.0]);
        let out = push_ot(&p, &t).unwrap();
        assert_eq!(out.plan, vec![1.0, 1.0, 2.0, 0.0]);
        assert_eq!(out.loops, 1);
        assert_eq!(p.marginal_error(&out.plan), 0.0);
        let mut tree = out.tree.clone();
        tree.sort();
        assert_eq!(tree, vec![0, 1, 2]);
    }

    #[test]
    fn feasible_input_is_untouched() {
        let p = OtProblem::new(vec![3.0, 2.0], vec![4.0, 1.0], vec![0.0; 4]).unwrap();
        let t = tree_solution(&p, &[0, 1, 2]);
        let out = push_ot(&p, &t).unwrap();
        assert_eq!(out.loops, 0);
        assert_eq!(out.plan, vec![2.0, 1.0, 2.0, 0.0]);
        assert_eq!(out.tree, vec![0, 1, 2]);
    }

    #[test]
    fn basis_contains_tree_and_root_logical() {
        let p = OtProblem::new(vec![2.0, 2.0], vec![3.0, 1.0], vec![0.0; 4]).unwrap();
        let out = push_ot(&p, &tree_solution(&p, &[1, 2, 3])).unwrap();
        let b = out.basis(&p);
        assert_eq!(b.basic.len(), 4);
        assert!(b.basic.contains(&4));
    }
}
