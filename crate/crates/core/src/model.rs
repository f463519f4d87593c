//! Problem representations and the conversions between them.
//!
//! Incidence convention: the column of arc `(i, j)` carries `-1` in row `i`
//! and `+1` in row `j`. Node balance "supply + inflow = outflow" then reads
//! `A f = -b`, so [`mcf_to_lp`] stores the negated supply vector as the
//! right-hand side.

use crate::error::{Error, Result};
use crate::linalg::CscMatrix;
use serde::{Deserialize, Serialize};

const BALANCE_TOL: f64 = 1e-9;

/// `min cᵀx  s.t.  A x = b,  l ≤ x ≤ u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardLp {
    pub a: CscMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl StandardLp {
    /// Validates dimensions, bounds and the absence of empty columns.
    pub fn new(a: CscMatrix, b: Vec<f64>, c: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let lp = Self::new_allow_empty(a, b, c, lower, upper)?;
        if let Some(j) = (0..lp.num_cols()).find(|&j| lp.a.col_nnz(j) == 0) {
            return Err(Error::InvalidInput(format!("column {j} has no nonzero entries")));
        }
        Ok(lp)
    }

    /// Like [`StandardLp::new`] but accepts all-zero columns.
    pub fn new_allow_empty(
        a: CscMatrix,
        b: Vec<f64>,
        c: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        let (m, n) = (a.nrows(), a.ncols());
        if b.len() != m || c.len() != n || lower.len() != n || upper.len() != n {
            return Err(Error::Dimension(format!(
                "A is {m}x{n} but |b|={}, |c|={}, |l|={}, |u|={}",
                b.len(),
                c.len(),
                lower.len(),
                upper.len()
            )));
        }
        for j in 0..n {
            if lower[j].is_nan() || upper[j].is_nan() || lower[j] > upper[j] || lower[j] == f64::INFINITY
                || upper[j] == f64::NEG_INFINITY
            {
                return Err(Error::InvalidInput(format!(
                    "column {j} has bounds [{}, {}]",
                    lower[j], upper[j]
                )));
            }
            if !c[j].is_finite() {
                return Err(Error::InvalidInput(format!("cost of column {j} is not finite")));
            }
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("right-hand side is not finite".into()));
        }
        Ok(StandardLp { a, b, c, lower, upper })
    }

    /// `x ≥ 0` with no upper bounds.
    pub fn nonnegative(a: CscMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let n = a.ncols();
        Self::new(a, b, c, vec![0.0; n], vec![f64::INFINITY; n])
    }

    pub fn num_rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        crate::linalg::dot(&self.c, x)
    }

    /// `b - A x`
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.a.mul_vec(x);
        self.b.iter().zip(ax).map(|(b, v)| b - v).collect()
    }

    /// Largest violation of `Ax = b` or of the bounds.
    pub fn infeasibility(&self, x: &[f64]) -> f64 {
        let row = crate::linalg::norm_inf(&self.residual(x));
        let bound = x
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.lower[j] - v).max(v - self.upper[j]).max(0.0))
            .fold(0.0, f64::max);
        row.max(bound)
    }

    /// Keeps only `cols`, fixing every other column at `fixed[j]` and moving its
    /// contribution to the right-hand side.
    pub fn restrict(&self, cols: &[usize], fixed: &[f64]) -> Result<StandardLp> {
        let mut b = self.b.clone();
        let mut keep = vec![false; self.num_cols()];
        for &j in cols {
            keep[j] = true;
        }
        for j in (0..self.num_cols()).filter(|&j| !keep[j]) {
            if fixed[j] != 0.0 {
                for (r, v) in self.a.col(j) {
                    b[r] -= v * fixed[j];
                }
            }
        }
        StandardLp::new_allow_empty(
            self.a.select_columns(cols),
            b,
            cols.iter().map(|&j| self.c[j]).collect(),
            cols.iter().map(|&j| self.lower[j]).collect(),
            cols.iter().map(|&j| self.upper[j]).collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub cost: f64,
    /// May be `f64::INFINITY`.
    pub capacity: f64,
}

/// Minimum-cost flow problem. `supply[i] > 0` marks a source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McfProblem {
    pub num_nodes: usize,
    pub arcs: Vec<Arc>,
    pub supply: Vec<f64>,
}

impl McfProblem {
    pub fn new(num_nodes: usize, arcs: Vec<Arc>, supply: Vec<f64>) -> Result<Self> {
        if supply.len() != num_nodes {
            return Err(Error::Dimension(format!(
                "{} supplies for {num_nodes} nodes",
                supply.len()
            )));
        }
        for (k, a) in arcs.iter().enumerate() {
            if a.tail >= num_nodes || a.head >= num_nodes {
                return Err(Error::InvalidInput(format!("arc {k} references a missing node")));
            }
            if a.tail == a.head {
                return Err(Error::InvalidInput(format!("arc {k} is a self-loop")));
            }
            if a.capacity.is_nan() || a.capacity < 0.0 {
                return Err(Error::InvalidInput(format!("arc {k} has negative capacity")));
            }
            if !a.cost.is_finite() {
                return Err(Error::InvalidInput(format!("arc {k} has a non-finite cost")));
            }
        }
        let total: f64 = supply.iter().sum();
        let scale: f64 = supply.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
        if total.abs() > BALANCE_TOL * scale {
            let pos = supply.iter().filter(|v| **v > 0.0).sum();
            let neg = -supply.iter().filter(|v| **v < 0.0).sum::<f64>();
            return Err(Error::Unbalanced {
                supply: pos,
                demand: neg,
            });
        }
        Ok(McfProblem {
            num_nodes,
            arcs,
            supply,
        })
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.cost).collect()
    }

    pub fn objective(&self, flow: &[f64]) -> f64 {
        self.arcs.iter().zip(flow).map(|(a, f)| a.cost * f).sum()
    }
}

/// Balanced transportation problem with a dense row-major cost matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtProblem {
    pub supply: Vec<f64>,
    pub demand: Vec<f64>,
    pub cost: Vec<f64>,
}

impl OtProblem {
    /// Demands are rescaled to the supply total when the two totals differ by at
    /// most `1e-9 · Σ supply`; larger imbalances are rejected.
    pub fn new(supply: Vec<f64>, mut demand: Vec<f64>, cost: Vec<f64>) -> Result<Self> {
        let (m, n) = (supply.len(), demand.len());
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("transport problem with an empty side".into()));
        }
        if cost.len() != m * n {
            return Err(Error::Dimension(format!("cost has {} entries, expected {m}x{n}", cost.len())));
        }
        if supply.iter().chain(&demand).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("marginals must be finite and nonnegative".into()));
        }
        if cost.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("cost matrix must be finite".into()));
        }
        let ss: f64 = supply.iter().sum();
        let sd: f64 = demand.iter().sum();
        if (ss - sd).abs() > BALANCE_TOL * ss.max(f64::MIN_POSITIVE) {
            return Err(Error::Unbalanced {
                supply: ss,
                demand: sd,
            });
        }
        // Mismatches within summation rounding are left alone, so building a
        // problem from an already rescaled one is the identity.
        if (ss - sd).abs() > (m + n) as f64 * f64::EPSILON * ss && sd > 0.0 {
            let k = ss / sd;
            demand.iter_mut().for_each(|d| *d *= k);
        }
        Ok(OtProblem { supply, demand, cost })
    }

    pub fn num_suppliers(&self) -> usize {
        self.supply.len()
    }

    pub fn num_consumers(&self) -> usize {
        self.demand.len()
    }

    pub fn cost_at(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.demand.len() + j]
    }

    pub fn objective(&self, plan: &[f64]) -> f64 {
        crate::linalg::dot(&self.cost, plan)
    }

    /// Worst absolute marginal violation of `plan`.
    pub fn marginal_error(&self, plan: &[f64]) -> f64 {
        let (m, n) = (self.num_suppliers(), self.num_consumers());
        let mut err = 0.0_f64;
        for i in 0..m {
            let row: f64 = plan[i * n..(i + 1) * n].iter().sum();
            err = err.max((row - self.supply[i]).abs());
        }
        for j in 0..n {
            let col: f64 = (0..m).map(|i| plan[i * n + j]).sum();
            err = err.max((col - self.demand[j]).abs());
        }
        err
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WbMeasure {
    /// Weights on the measure's own support, summing to one.
    pub weights: Vec<f64>,
    /// `weights.len() × support_size`, row-major, nonnegative.
    pub cost: Vec<f64>,
}

/// Fixed-support Wasserstein barycenter problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WbProblem {
    pub measures: Vec<WbMeasure>,
    pub support_size: usize,
    pub omega: Vec<f64>,
}

impl WbProblem {
    pub fn new(measures: Vec<WbMeasure>, support_size: usize, omega: Vec<f64>) -> Result<Self> {
        if measures.is_empty() || omega.len() != measures.len() || support_size == 0 {
            return Err(Error::Dimension("barycenter needs one weight per measure".into()));
        }
        for (k, mk) in measures.iter().enumerate() {
            if mk.cost.len() != mk.weights.len() * support_size {
                return Err(Error::Dimension(format!("cost matrix of measure {k} has wrong size")));
            }
            let total: f64 = mk.weights.iter().sum();
            if (total - 1.0).abs() > BALANCE_TOL || mk.weights.iter().any(|w| *w < 0.0) {
                return Err(Error::InvalidInput(format!("measure {k} is not a probability vector")));
            }
            if mk.cost.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
                return Err(Error::InvalidInput(format!("measure {k} has a negative cost")));
            }
        }
        let total: f64 = omega.iter().sum();
        if omega.iter().any(|w| *w < 0.0) || (total - 1.0).abs() > BALANCE_TOL {
            return Err(Error::InvalidInput("barycenter weights must sum to one".into()));
        }
        Ok(WbProblem {
            measures,
            support_size,
            omega,
        })
    }

    /// First LP column of transport plan `k`.
    pub fn block_offset(&self, k: usize) -> usize {
        self.measures[..k].iter().map(|mk| mk.weights.len() * self.support_size).sum()
    }

    /// First LP column of the barycenter weight vector.
    pub fn weight_offset(&self) -> usize {
        self.block_offset(self.measures.len())
    }
}

/// Records which arcs were reversed by [`shift_mcf`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftMap {
    pub reversed: Vec<bool>,
    pub capacity: Vec<f64>,
    /// `Σ_{(i,j) reversed} c_ij u_ij`; original objective = shifted objective + offset.
    pub offset: f64,
}

impl ShiftMap {
    pub fn shift_flow(&self, flow: &[f64]) -> Vec<f64> {
        self.map(flow)
    }

    pub fn unshift_flow(&self, flow: &[f64]) -> Result<Vec<f64>> {
        if flow.len() != self.reversed.len() {
            return Err(Error::Dimension(format!(
                "flow has {} arcs, map has {}",
                flow.len(),
                self.reversed.len()
            )));
        }
        Ok(self.map(flow))
    }

    fn map(&self, flow: &[f64]) -> Vec<f64> {
        flow.iter()
            .zip(&self.reversed)
            .zip(&self.capacity)
            .map(|((&f, &rev), &u)| if rev { u - f } else { f })
            .collect()
    }
}

/// Incidence-matrix encoding of an MCF problem (see the module docs for the
/// sign convention).
pub fn mcf_to_lp(p: &McfProblem) -> Result<StandardLp> {
    let p = McfProblem::new(p.num_nodes, p.arcs.clone(), p.supply.clone())?;
    let cols = p
        .arcs
        .iter()
        .map(|a| vec![(a.tail, -1.0), (a.head, 1.0)])
        .collect();
    let a = CscMatrix::from_columns(p.num_nodes, cols);
    StandardLp::new(
        a,
        p.supply.iter().map(|s| -s).collect(),
        p.costs(),
        vec![0.0; p.num_arcs()],
        p.arcs.iter().map(|a| a.capacity).collect(),
    )
}

/// Bipartite MCF with suppliers `0..m`, consumers `m..m+n` and arc `i·n + j`
/// from supplier `i` to consumer `j`.
pub fn ot_to_mcf(p: &OtProblem) -> Result<McfProblem> {
    let p = OtProblem::new(p.supply.clone(), p.demand.clone(), p.cost.clone())?;
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    let mut arcs = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            arcs.push(Arc {
                tail: i,
                head: m + j,
                cost: p.cost_at(i, j),
                capacity: f64::INFINITY,
            });
        }
    }
    let supply = p.supply.iter().copied().chain(p.demand.iter().map(|d| -d)).collect();
    McfProblem::new(m + n, arcs, supply)
}

pub fn ot_to_lp(p: &OtProblem) -> Result<StandardLp> {
    mcf_to_lp(&ot_to_mcf(p)?)
}

/// Reverses every arc whose approximate flow exceeds half its capacity.
pub fn shift_mcf(p: &McfProblem, approx: &[f64]) -> Result<(McfProblem, ShiftMap)> {
    if approx.len() != p.num_arcs() {
        return Err(Error::Dimension(format!(
            "flow has {} arcs, problem has {}",
            approx.len(),
            p.num_arcs()
        )));
    }
    let mut supply = p.supply.clone();
    let mut arcs = Vec::with_capacity(p.num_arcs());
    let mut reversed = Vec::with_capacity(p.num_arcs());
    let mut offset = 0.0;
    for (k, (a, &f)) in p.arcs.iter().zip(approx).enumerate() {
        if !(f >= 0.0 && f <= a.capacity) {
            return Err(Error::OutOfBounds { index: k, value: f });
        }
        if f > a.capacity / 2.0 {
            supply[a.tail] -= a.capacity;
            supply[a.head] += a.capacity;
            offset += a.cost * a.capacity;
            arcs.push(Arc {
                tail: a.head,
                head: a.tail,
                cost: -a.cost,
                capacity: a.capacity,
            });
            reversed.push(true);
        } else {
            arcs.push(*a);
            reversed.push(false);
        }
    }
    let map = ShiftMap {
        reversed,
        capacity: p.arcs.iter().map(|a| a.capacity).collect(),
        offset,
    };
    Ok((McfProblem::new(p.num_nodes, arcs, supply)?, map))
}

/// Barycenter LP: the transport plans `X_k` (row-major, block `k` at
/// [`WbProblem::block_offset`]) followed by the barycenter weights. Rows are
/// the `Σ m_k` plan-row constraints and then the `N · m` coupling constraints.
pub fn wb_to_lp(p: &WbProblem) -> Result<StandardLp> {
    let p = WbProblem::new(p.measures.clone(), p.support_size, p.omega.clone())?;
    let m = p.support_size;
    let n_vars = p.weight_offset() + m;
    let row_total: usize = p.measures.iter().map(|mk| mk.weights.len()).sum();
    let n_rows = row_total + p.measures.len() * m;
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_vars];
    let mut c = vec![0.0; n_vars];
    let mut b = vec![0.0; n_rows];
    let mut row0 = 0;
    for (k, mk) in p.measures.iter().enumerate() {
        let off = p.block_offset(k);
        let couple0 = row_total + k * m;
        for i in 0..mk.weights.len() {
            b[row0 + i] = mk.weights[i];
            for j in 0..m {
                let col = off + i * m + j;
                cols[col].push((row0 + i, 1.0));
                cols[col].push((couple0 + j, 1.0));
                c[col] = p.omega[k] * mk.cost[i * m + j];
            }
        }
        for j in 0..m {
            cols[p.weight_offset() + j].push((couple0 + j, -1.0));
        }
        row0 += mk.weights.len();
    }
    StandardLp::new(
        CscMatrix::from_columns(n_rows, cols),
        b,
        c,
        vec![0.0; n_vars],
        vec![f64::INFINITY; n_vars],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(tail: usize, head: usize, cost: f64, capacity: f64) -> Arc {
        Arc {
            tail,
            head,
            cost,
            capacity,
        }
    }

    #[test]
    fn single_arc_incidence() {
        let p = McfProblem::new(2, vec![arc(0, 1, 3.0, 10.0)], vec![1.0, -1.0]).unwrap();
        let lp = mcf_to_lp(&p).unwrap();
        assert_eq!(lp.a.dense_col(0), vec![-1.0, 1.0]);
        assert_eq!((lp.lower[0], lp.upper[0]), (0.0, 10.0));
        assert_eq!(lp.b, vec![-1.0, 1.0]);
        assert_eq!(lp.infeasibility(&[1.0]), 0.0);
    }

    #[test]
    fn triangle_incidence_structure() {
        let p = McfProblem::new(
            3,
            vec![arc(0, 1, 1.0, 5.0), arc(1, 2, 1.0, 5.0), arc(0, 2, 1.0, 5.0)],
            vec![0.0; 3],
        )
        .unwrap();
        let lp = mcf_to_lp(&p).unwrap();
        for j in 0..3 {
            let col: Vec<f64> = lp.a.col(j).map(|(_, v)| v).collect();
            assert_eq!(col.len(), 2);
            assert_eq!(col.iter().filter(|v| **v == -1.0).count(), 1);
            assert_eq!(col.iter().filter(|v| **v == 1.0).count(), 1);
        }
    }

    #[test]
    fn unbalanced_mcf_is_rejected() {
        let err = McfProblem::new(2, vec![arc(0, 1, 1.0, 1.0)], vec![1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Unbalanced { .. }));
    }

    #[test]
    fn self_loop_is_rejected() {
        assert!(McfProblem::new(2, vec![arc(1, 1, 1.0, 1.0)], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn ot_one_by_one() {
        let p = OtProblem::new(vec![1.0], vec![1.0], vec![7.0]).unwrap();
        let mcf = ot_to_mcf(&p).unwrap();
        assert_eq!(mcf.num_arcs(), 1);
        assert_eq!(mcf.supply, vec![1.0, -1.0]);
    }

    #[test]
    fn ot_two_by_two_supplies() {
        let p = OtProblem::new(vec![3.0, 2.0], vec![4.0, 1.0], vec![1.0; 4]).unwrap();
        let mcf = ot_to_mcf(&p).unwrap();
        assert_eq!(mcf.num_arcs(), 4);
        assert_eq!(mcf.supply, vec![3.0, 2.0, -4.0, -1.0]);
        assert_eq!((mcf.arcs[1].tail, mcf.arcs[1].head), (0, 3));
        assert_eq!((mcf.arcs[2].tail, mcf.arcs[2].head), (1, 2));
    }

    #[test]
    fn ot_two_by_three_is_uncapacitated() {
        let p = OtProblem::new(vec![0.5, 0.5], vec![0.2, 0.3, 0.5], vec![1.0; 6]).unwrap();
        let mcf = ot_to_mcf(&p).unwrap();
        assert_eq!(mcf.num_arcs(), 6);
        assert!(mcf.arcs.iter().all(|a| a.capacity == f64::INFINITY));
    }

    #[test]
    fn ot_tiny_imbalance_is_renormalized_large_is_rejected() {
        let p = OtProblem::new(vec![1.0], vec![1.0 + 1e-12], vec![0.0]).unwrap();
        assert_eq!(p.demand[0], 1.0);
        assert!(OtProblem::new(vec![1.0], vec![1.1], vec![0.0]).is_err());
    }

    #[test]
    fn shift_reverses_heavy_arc() {
        let p = McfProblem::new(2, vec![arc(0, 1, 3.0, 10.0)], vec![8.0, -8.0]).unwrap();
        let (q, map) = shift_mcf(&p, &[8.0]).unwrap();
        assert_eq!((q.arcs[0].tail, q.arcs[0].head), (1, 0));
        assert_eq!(q.arcs[0].cost, -3.0);
        assert_eq!(q.arcs[0].capacity, 10.0);
        assert_eq!(q.supply, vec![-2.0, 2.0]);
        assert_eq!(map.offset, 30.0);
        assert_eq!(map.unshift_flow(&[4.0]).unwrap(), vec![6.0]);
        assert_eq!(q.objective(&[4.0]) + map.offset, p.objective(&[6.0]));
    }

    #[test]
    fn shift_of_zero_flow_is_identity() {
        let p = McfProblem::new(
            3,
            vec![arc(0, 1, 2.0, 4.0), arc(1, 2, 5.0, 4.0)],
            vec![1.0, 0.0, -1.0],
        )
        .unwrap();
        let (q, map) = shift_mcf(&p, &[0.0, 0.0]).unwrap();
        assert_eq!(q, p);
        assert_eq!(map.offset, 0.0);
        assert_eq!(map.unshift_flow(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn shift_rejects_out_of_bounds_flow() {
        let p = McfProblem::new(2, vec![arc(0, 1, 1.0, 2.0)], vec![0.0, 0.0]).unwrap();
        assert!(matches!(shift_mcf(&p, &[3.0]), Err(Error::OutOfBounds { .. })));
    }

    fn two_measure_wb() -> WbProblem {
        let mk = |w: Vec<f64>| WbMeasure {
            weights: w,
            cost: vec![0.0, 1.0, 1.0, 0.0],
        };
        WbProblem::new(vec![mk(vec![0.5, 0.5]), mk(vec![0.25, 0.75])], 2, vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn wb_structure_counts() {
        let p = two_measure_wb();
        let lp = wb_to_lp(&p).unwrap();
        assert_eq!(lp.num_cols(), 2 * 4 + 2);
        assert_eq!(lp.num_rows(), (2 + 2) + 2 * 2);
    }

    #[test]
    fn wb_single_measure_is_transport_in_lp_form() {
        let p = WbProblem::new(
            vec![WbMeasure {
                weights: vec![0.3, 0.7],
                cost: vec![0.0, 2.0, 2.0, 0.0],
            }],
            2,
            vec![1.0],
        )
        .unwrap();
        let lp = wb_to_lp(&p).unwrap();
        // With the barycenter u = (0.3, 0.7) fixed, the plan diag(0.3, 0.7) is feasible.
        let x = vec![0.3, 0.0, 0.0, 0.7, 0.3, 0.7];
        assert!(lp.infeasibility(&x) < 1e-15);
        assert_eq!(lp.objective(&x), 0.0);
    }

    #[test]
    fn wb_rejects_bad_weights() {
        let bad = WbMeasure {
            weights: vec![0.5, 0.6],
            cost: vec![0.0; 4],
        };
        assert!(WbProblem::new(vec![bad], 2, vec![1.0]).is_err());
    }
}
