use crate::error::{Error, Result};
use crate::model::{McfProblem, StandardLp};
use serde::{Deserialize, Serialize};

/// Per-arc (or per-column) share of the busiest incident node's total flow.
/// Values lie in `[0, 1]` and vanish on zero-flow arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRatios(pub Vec<f64>);

impl FlowRatios {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn share(f: f64, total: f64) -> f64 {
    // A node without flow carries no evidence; 0/0 counts as 0.
    if total > 0.0 {
        f / total
    } else {
        0.0
    }
}

/// `r_ij = max(f_ij / f^i, f_ij / f^j)` where `f^k` sums every flow incident to `k`.
pub fn flow_ratio_mcf(p: &McfProblem, flow: &[f64]) -> Result<FlowRatios> {
    if flow.len() != p.num_arcs() {
        return Err(Error::Dimension(format!(
            "flow has {} entries for {} arcs",
            flow.len(),
            p.num_arcs()
        )));
    }
    if let Some(k) = flow.iter().position(|f| !(*f >= 0.0)) {
        return Err(Error::OutOfBounds {
            index: k,
            value: flow[k],
        });
    }
    let mut node_total = vec![0.0; p.num_nodes];
    for (a, &f) in p.arcs.iter().zip(flow) {
        node_total[a.tail] += f;
        node_total[a.head] += f;
    }
    Ok(FlowRatios(
        p.arcs
            .iter()
            .zip(flow)
            .map(|(a, &f)| share(f, node_total[a.tail]).max(share(f, node_total[a.head])))
            .collect(),
    ))
}

/// General-LP flow ratio: row totals `f^k = Σ_i |A_ki| x_i` and
/// `r_i = max_k |A_ki| x_i / f^k`. Negative entries of `x` are read as zero.
pub fn flow_ratio_lp(lp: &StandardLp, x: &[f64]) -> FlowRatios {
    let mut row_total = vec![0.0; lp.num_rows()];
    for (j, &xj) in x.iter().enumerate() {
        let xj = xj.max(0.0);
        for (r, v) in lp.a.col(j) {
            row_total[r] += v.abs() * xj;
        }
    }
    FlowRatios(
        x.iter()
            .enumerate()
            .map(|(j, &xj)| {
                let xj = xj.max(0.0);
                lp.a.col(j)
                    .map(|(r, v)| share(v.abs() * xj, row_total[r]))
                    .fold(0.0, f64::max)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{mcf_to_lp, Arc};

    fn triangle() -> McfProblem {
        let arc = |tail, head| Arc {
            tail,
            head,
            cost: 1.0,
            capacity: f64::INFINITY,
        };
        McfProblem::new(3, vec![arc(0, 1), arc(1, 2), arc(0, 2)], vec![3.0, 0.0, -3.0]).unwrap()
    }

    #[test]
    fn single_arc_has_ratio_one() {
        let p = McfProblem::new(
            2,
            vec![Arc {
                tail: 0,
                head: 1,
                cost: 1.0,
                capacity: 9.0,
            }],
            vec![5.0, -5.0],
        )
        .unwrap();
        assert_eq!(flow_ratio_mcf(&p, &[5.0]).unwrap().0, vec![1.0]);
    }

    #[test]
    fn triangle_ratios() {
        let r = flow_ratio_mcf(&triangle(), &[2.0, 2.0, 1.0]).unwrap();
        let expect = [2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0];
        for (a, b) in r.0.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_flow_gives_zero_ratios() {
        assert_eq!(flow_ratio_mcf(&triangle(), &[0.0; 3]).unwrap().0, vec![0.0; 3]);
        let lp = mcf_to_lp(&triangle()).unwrap();
        assert_eq!(flow_ratio_lp(&lp, &[0.0; 3]).0, vec![0.0; 3]);
    }

    #[test]
    fn negative_flow_is_rejected() {
        assert!(flow_ratio_mcf(&triangle(), &[1.0, -1.0, 0.0]).is_err());
    }

    #[test]
    fn single_column_lp_ratio_is_one() {
        let a = crate::linalg::CscMatrix::from_triplets(2, 1, &[(0, 0, 2.0), (1, 0, -3.0)]);
        let lp = StandardLp::nonnegative(a, vec![2.0, -3.0], vec![1.0]).unwrap();
        assert_eq!(flow_ratio_lp(&lp, &[0.7]).0, vec![1.0]);
    }

    #[test]
    fn lp_ratio_matches_mcf_ratio_on_triangle() {
        let p = triangle();
        let lp = mcf_to_lp(&p).unwrap();
        let f = [2.0, 2.0, 1.0];
        assert_eq!(flow_ratio_lp(&lp, &f), flow_ratio_mcf(&p, &f).unwrap());
    }
}
