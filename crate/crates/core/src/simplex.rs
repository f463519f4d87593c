//! Bounded-variable primal revised simplex with warm starts.
//!
//! Every row carries a logical column `e_i` (index `n + i`) fixed at zero, so a
//! basis always exists even when `A` is rank deficient, as network incidence
//! matrices are. Infeasible starting bases are handled by a composite phase 1
//! that minimizes the sum of bound violations of the basic variables; a cold
//! start is simply the all-logical basis.

use crate::error::{Error, Result};
use crate::linalg::{invert, IndependentSet};
use crate::model::StandardLp;
use serde::{Deserialize, Serialize};

const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarStatus {
    Basic,
    NonbasicLower,
    NonbasicUpper,
    /// Free column parked at zero.
    NonbasicFree,
}

/// Column statuses for the `n` structural and `m` logical columns, plus the
/// ordered list of the `m` basic columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisState {
    pub status: Vec<VarStatus>,
    pub basic: Vec<usize>,
}

fn natural_status(lower: f64, upper: f64) -> VarStatus {
    if lower.is_finite() {
        VarStatus::NonbasicLower
    } else if upper.is_finite() {
        VarStatus::NonbasicUpper
    } else {
        VarStatus::NonbasicFree
    }
}

impl BasisState {
    /// All logicals basic, structurals at their natural bound.
    pub fn slack(lp: &StandardLp) -> Self {
        let (m, n) = (lp.num_rows(), lp.num_cols());
        let mut status: Vec<VarStatus> = (0..n).map(|j| natural_status(lp.lower[j], lp.upper[j])).collect();
        status.extend(std::iter::repeat_n(VarStatus::Basic, m));
        BasisState {
            status,
            basic: (n..n + m).collect(),
        }
    }

    /// Makes `cols` basic (indices may include logicals `≥ n`); every other
    /// column sits at its natural bound.
    pub fn from_basic_columns(lp: &StandardLp, cols: &[usize]) -> Result<Self> {
        let (m, n) = (lp.num_rows(), lp.num_cols());
        if cols.len() != m {
            return Err(Error::Dimension(format!("{} basic columns for {m} rows", cols.len())));
        }
        let mut status: Vec<VarStatus> = (0..n).map(|j| natural_status(lp.lower[j], lp.upper[j])).collect();
        status.extend(std::iter::repeat_n(VarStatus::NonbasicLower, m));
        for &j in cols {
            if j >= n + m || status[j] == VarStatus::Basic {
                return Err(Error::InvalidInput(format!("bad or repeated basic column {j}")));
            }
            status[j] = VarStatus::Basic;
        }
        Ok(BasisState {
            status,
            basic: cols.to_vec(),
        })
    }

    pub fn num_rows(&self) -> usize {
        self.basic.len()
    }

    pub fn num_structural(&self) -> usize {
        self.status.len() - self.basic.len()
    }

    pub fn is_basic(&self, j: usize) -> bool {
        self.status[j] == VarStatus::Basic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplexStatus {
    Optimal,
    Unbounded,
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplexResult {
    pub status: SimplexStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub basis: BasisState,
    pub reduced_costs: Vec<f64>,
    pub dual: Vec<f64>,
    pub iterations: usize,
    pub phase_one_iterations: usize,
    /// Phase-2 objective after each iteration, when requested.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub max_iterations: usize,
    pub time_limit: Option<std::time::Duration>,
    /// Optimality tolerance on reduced costs.
    pub dual_tol: f64,
    pub record_trace: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_iterations: 500_000,
            time_limit: None,
            dual_tol: 1e-9,
            record_trace: false,
        }
    }
}

pub fn solve(lp: &StandardLp, start: Option<&BasisState>, limits: &Limits) -> Result<SimplexResult> {
    let mut s = Solver::new(lp, start)?;
    let status = s.run(limits)?;
    Ok(s.finish(status))
}

/// Solves the problem restricted to the columns with `active[j] == true`;
/// inactive columns stay at their starting nonbasic value.
pub fn solve_restricted(
    lp: &StandardLp,
    active: &[bool],
    start: Option<&BasisState>,
    limits: &Limits,
) -> Result<SimplexResult> {
    let mut s = Solver::new(lp, start)?;
    for (j, &on) in active.iter().enumerate() {
        s.set_active(j, on);
    }
    let status = s.run(limits)?;
    Ok(s.finish(status))
}

/// Duals `y` with `Bᵀ y = c_B` and reduced costs `c - Aᵀ y` for the structurals.
pub fn reduced_costs(lp: &StandardLp, basis: &BasisState) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = lp.num_rows();
    let n = lp.num_cols();
    if basis.basic.len() != m || basis.status.len() != n + m {
        return Err(Error::Dimension("basis does not match the problem".into()));
    }
    let mut bmat = vec![0.0; m * m];
    for (i, &j) in basis.basic.iter().enumerate() {
        if j < n {
            for (r, v) in lp.a.col(j) {
                bmat[r * m + i] = v;
            }
        } else {
            bmat[(j - n) * m + i] = 1.0;
        }
    }
    let binv = invert(&bmat, m, 1e-11).ok_or(Error::SingularBasis)?;
    let mut y = vec![0.0; m];
    for (i, &j) in basis.basic.iter().enumerate() {
        let cb = if j < n { lp.c[j] } else { 0.0 };
        if cb != 0.0 {
            for k in 0..m {
                y[k] += cb * binv[i * m + k];
            }
        }
    }
    let d = (0..n).map(|j| lp.c[j] - lp.a.col_dot(j, &y)).collect();
    Ok((y, d))
}

/// Outcome of [`vertex_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCertificate {
    pub is_vertex: bool,
    /// Columns strictly between their bounds.
    pub interior: Vec<usize>,
    /// A maximal linearly independent subset of `interior`.
    pub independent: Vec<usize>,
}

/// A point is a vertex iff its strictly-between-bounds columns are linearly
/// independent.
pub fn vertex_check(lp: &StandardLp, x: &[f64]) -> VertexCertificate {
    let interior: Vec<usize> = (0..lp.num_cols())
        .filter(|&j| {
            let lo = lp.lower[j];
            let up = lp.upper[j];
            let above = !lo.is_finite() || x[j] > lo + 1e-9 * (1.0 + lo.abs());
            let below = !up.is_finite() || x[j] < up - 1e-9 * (1.0 + up.abs());
            above && below
        })
        .collect();
    let mut set = IndependentSet::new(1e-9);
    let independent: Vec<usize> = interior
        .iter()
        .copied()
        .filter(|&j| set.try_add(&lp.a.dense_col(j)))
        .collect();
    VertexCertificate {
        is_vertex: independent.len() == interior.len(),
        interior,
        independent,
    }
}

/// Primal point determined by a basis (nonbasics at their bounds).
pub fn basic_point(lp: &StandardLp, basis: &BasisState) -> Result<Vec<f64>> {
    let s = Solver::new(lp, Some(basis))?;
    Ok(s.x[..lp.num_cols()].to_vec())
}

pub(crate) struct Solver<'a> {
    lp: &'a StandardLp,
    m: usize,
    n: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    active: Vec<bool>,
    status: Vec<VarStatus>,
    basic: Vec<usize>,
    x: Vec<f64>,
    binv: Vec<f64>,
    since_refactor: usize,
    pub(crate) iterations: usize,
    phase_one_iterations: usize,
    degenerate_run: usize,
    bland: bool,
    trace: Vec<f64>,
    /// Phase-two duals kept current across pivots; dropped on refactorization.
    y_cache: Option<Vec<f64>>,
}

impl<'a> Solver<'a> {
    pub(crate) fn new(lp: &'a StandardLp, start: Option<&BasisState>) -> Result<Self> {
        let (m, n) = (lp.num_rows(), lp.num_cols());
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut cost = lp.c.clone();
        lower.extend(std::iter::repeat_n(0.0, m));
        upper.extend(std::iter::repeat_n(0.0, m));
        cost.extend(std::iter::repeat_n(0.0, m));
        let basis = match start {
            Some(b) => {
                if b.status.len() != n + m || b.basic.len() != m {
                    return Err(Error::Dimension(format!(
                        "start basis has {} columns / {} basics, problem has {} / {m}",
                        b.status.len(),
                        b.basic.len(),
                        n + m
                    )));
                }
                b.clone()
            }
            None => BasisState::slack(lp),
        };
        let mut s = Solver {
            lp,
            m,
            n,
            lower,
            upper,
            cost,
            active: vec![true; n + m],
            status: basis.status,
            basic: basis.basic,
            x: vec![0.0; n + m],
            binv: vec![0.0; m * m],
            since_refactor: 0,
            iterations: 0,
            phase_one_iterations: 0,
            degenerate_run: 0,
            bland: false,
            trace: Vec::new(),
            y_cache: None,
        };
        for j in 0..n + m {
            if s.status[j] != VarStatus::Basic {
                s.status[j] = s.sanitize_nonbasic(j, s.status[j]);
                s.x[j] = s.nonbasic_value(j);
            }
        }
        s.refactor()?;
        Ok(s)
    }

    fn sanitize_nonbasic(&self, j: usize, st: VarStatus) -> VarStatus {
        let (lo, up) = (self.lower[j], self.upper[j]);
        match st {
            VarStatus::NonbasicLower if lo.is_finite() => st,
            VarStatus::NonbasicUpper if up.is_finite() => st,
            VarStatus::NonbasicFree if !lo.is_finite() && !up.is_finite() => st,
            _ => natural_status(lo, up),
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::NonbasicLower => self.lower[j],
            VarStatus::NonbasicUpper => self.upper[j],
            _ => 0.0,
        }
    }

    pub(crate) fn set_active(&mut self, j: usize, on: bool) {
        self.active[j] = on;
    }

    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for (r, v) in self.lp.a.col(j) {
                f(r, v);
            }
        } else {
            f(j - self.n, 1.0);
        }
    }

    fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        if j < self.n {
            self.lp.a.col_dot(j, y)
        } else {
            y[j - self.n]
        }
    }

    fn build_inverse(&self) -> Option<Vec<f64>> {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        for (i, &j) in self.basic.iter().enumerate() {
            self.for_col(j, |r, v| bmat[r * m + i] = v);
        }
        invert(&bmat, m, 1e-11)
    }

    /// Replaces dependent basic columns by logicals of uncovered rows.
    fn repair(&mut self) {
        let m = self.m;
        let mut set = IndependentSet::new(1e-9);
        let mut keep = Vec::with_capacity(m);
        for &j in &self.basic {
            let mut col = vec![0.0; m];
            self.for_col(j, |r, v| col[r] = v);
            if set.try_add(&col) {
                keep.push(j);
            } else {
                self.status[j] = natural_status(self.lower[j], self.upper[j]);
                self.x[j] = self.nonbasic_value(j);
            }
        }
        for i in 0..m {
            if keep.len() == m {
                break;
            }
            let j = self.n + i;
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            if set.try_add(&e) {
                keep.push(j);
                self.status[j] = VarStatus::Basic;
            }
        }
        self.basic = keep;
    }

    fn refactor(&mut self) -> Result<()> {
        let binv = match self.build_inverse() {
            Some(b) => b,
            None => {
                self.repair();
                self.build_inverse().ok_or(Error::SingularBasis)?
            }
        };
        self.binv = binv;
        self.since_refactor = 0;
        self.y_cache = None;
        let m = self.m;
        let mut rhs = self.lp.b.clone();
        for j in 0..self.n + self.m {
            if self.status[j] != VarStatus::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                self.for_col(j, |r, v| rhs[r] -= v * xj);
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x[self.basic[i]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
        Ok(())
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        self.for_col(j, |k, v| {
            for i in 0..m {
                alpha[i] += self.binv[i * m + k] * v;
            }
        });
        alpha
    }

    fn duals(&self, cb: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &c) in cb.iter().enumerate() {
            if c != 0.0 {
                for (k, yk) in y.iter_mut().enumerate() {
                    *yk += c * self.binv[i * m + k];
                }
            }
        }
        y
    }

    /// Phase-1 costs of the basic variables, or `None` when all are feasible.
    fn infeasibility_costs(&self) -> Option<Vec<f64>> {
        let mut any = false;
        let cb = self
            .basic
            .iter()
            .map(|&j| {
                let v = self.x[j];
                if v < self.lower[j] - FEAS_TOL {
                    any = true;
                    -1.0
                } else if v > self.upper[j] + FEAS_TOL {
                    any = true;
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        any.then_some(cb)
    }

    fn sum_infeasibility(&self) -> f64 {
        self.basic
            .iter()
            .map(|&j| (self.lower[j] - self.x[j]).max(self.x[j] - self.upper[j]).max(0.0))
            .sum()
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.lower[j] == self.upper[j]
    }

    fn eligible(&self, j: usize, d: f64, tol: f64) -> bool {
        match self.status[j] {
            VarStatus::NonbasicLower => d < -tol,
            VarStatus::NonbasicUpper => d > tol,
            VarStatus::NonbasicFree => d.abs() > tol,
            VarStatus::Basic => false,
        }
    }

    fn price(&self, y: &[f64], phase_one: bool, tol: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n + self.m {
            if !self.active[j] || self.status[j] == VarStatus::Basic || self.is_fixed(j) {
                continue;
            }
            let cj = if phase_one { 0.0 } else { self.cost[j] };
            let d = cj - self.col_dot(j, y);
            if !self.eligible(j, d, tol) {
                continue;
            }
            if self.bland {
                return Some((j, d));
            }
            if best.is_none_or(|(_, bd)| d.abs() > bd.abs()) {
                best = Some((j, d));
            }
        }
        best
    }

    pub(crate) fn objective(&self) -> f64 {
        (0..self.n).map(|j| self.cost[j] * self.x[j]).sum()
    }

    pub(crate) fn run(&mut self, limits: &Limits) -> Result<SimplexStatus> {
        let started = limits.time_limit.map(|_| std::time::Instant::now());
        loop {
            if self.iterations >= limits.max_iterations {
                return Ok(SimplexStatus::IterationLimit);
            }
            if let (Some(t0), Some(cap)) = (started, limits.time_limit) {
                if self.iterations.is_multiple_of(64) && t0.elapsed() > cap {
                    return Ok(SimplexStatus::IterationLimit);
                }
            }
            let phase_one_costs = self.infeasibility_costs();
            let phase_one = phase_one_costs.is_some();
            let cb = phase_one_costs
                .unwrap_or_else(|| self.basic.iter().map(|&j| self.cost[j]).collect());
            let (y, cached) = match (phase_one, self.y_cache.take()) {
                (false, Some(y)) => (y, true),
                _ => (self.duals(&cb), false),
            };
            let tol = if phase_one { 1e-9 } else { limits.dual_tol };
            let Some((q, d)) = self.price(&y, phase_one, tol) else {
                if phase_one {
                    if self.since_refactor > 0 {
                        self.refactor()?;
                        continue;
                    }
                    return Ok(if self.sum_infeasibility() > FEAS_TOL {
                        SimplexStatus::Infeasible
                    } else {
                        SimplexStatus::Optimal
                    });
                }
                if cached {
                    // Confirm optimality with freshly computed duals.
                    continue;
                }
                return Ok(SimplexStatus::Optimal);
            };
            let dir = if d < 0.0 { 1.0 } else { -1.0 };
            let alpha = self.ftran(q);
            match self.ratio_test(q, dir, &alpha) {
                None => {
                    if phase_one {
                        // Numerical trouble; rebuild and retry once per iteration.
                        self.refactor()?;
                        self.iterations += 1;
                        continue;
                    }
                    return Ok(SimplexStatus::Unbounded);
                }
                Some((step, leave)) => {
                    let before = self.since_refactor;
                    self.apply_step(q, dir, step, &alpha, leave)?;
                    if !phase_one {
                        self.update_duals(y, d, leave.map(|(r, _)| r), before);
                    }
                }
            }
            self.iterations += 1;
            if phase_one {
                self.phase_one_iterations += 1;
            } else if limits.record_trace {
                self.trace.push(self.objective());
            }
        }
    }

    /// Returns the step length and the leaving basis position with the bound it
    /// hits (`None` position means a bound flip of the entering column).
    fn ratio_test(&self, q: usize, dir: f64, alpha: &[f64]) -> Option<(f64, Option<(usize, bool)>)> {
        let flip = self.upper[q] - self.lower[q];
        let mut best_t = f64::INFINITY;
        let mut best: Option<(usize, bool)> = None;
        for (i, &a) in alpha.iter().enumerate() {
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basic[i];
            let delta = -dir * a;
            let v = self.x[j];
            let (lo, up) = (self.lower[j], self.upper[j]);
            let target = if delta < 0.0 {
                if v > up + FEAS_TOL {
                    Some((up, true))
                } else if v >= lo - FEAS_TOL && lo.is_finite() {
                    Some((lo, false))
                } else {
                    None
                }
            } else if v < lo - FEAS_TOL {
                Some((lo, false))
            } else if v <= up + FEAS_TOL && up.is_finite() {
                Some((up, true))
            } else {
                None
            };
            let Some((bound, at_upper)) = target else { continue };
            let t = ((bound - v) / delta).max(0.0);
            let slack = 1e-12 * (1.0 + t.abs());
            match best {
                None => {
                    best_t = t;
                    best = Some((i, at_upper));
                }
                Some((bi, _)) => {
                    if t < best_t - slack {
                        best_t = t;
                        best = Some((i, at_upper));
                    } else if t <= best_t + slack && j < self.basic[bi] {
                        best_t = best_t.min(t);
                        best = Some((i, at_upper));
                    }
                }
            }
        }
        if flip.is_finite() && flip <= best_t {
            return Some((flip, None));
        }
        best.map(|b| (best_t, Some(b)))
    }

    fn apply_step(
        &mut self,
        q: usize,
        dir: f64,
        step: f64,
        alpha: &[f64],
        leave: Option<(usize, bool)>,
    ) -> Result<()> {
        if step > 0.0 {
            self.x[q] += dir * step;
            for (i, &a) in alpha.iter().enumerate() {
                self.x[self.basic[i]] -= dir * step * a;
            }
        }
        if step <= 1e-12 {
            self.degenerate_run += 1;
            if self.degenerate_run > 3 * self.m.max(1) {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
            self.bland = false;
        }
        match leave {
            None => {
                self.status[q] = if dir > 0.0 {
                    VarStatus::NonbasicUpper
                } else {
                    VarStatus::NonbasicLower
                };
                self.x[q] = self.nonbasic_value(q);
                Ok(())
            }
            Some((r, at_upper)) => {
                let out = self.basic[r];
                self.status[out] = if at_upper && !self.is_fixed(out) {
                    VarStatus::NonbasicUpper
                } else {
                    VarStatus::NonbasicLower
                };
                self.x[out] = self.nonbasic_value(out);
                self.pivot(r, q, alpha)
            }
        }
    }

    /// After a pivot on row `r`, `y + d_q · (row r of the new B⁻¹)` prices the
    /// entering column to zero. Skipped when the pivot triggered a refactor.
    fn update_duals(&mut self, mut y: Vec<f64>, d: f64, row: Option<usize>, before: usize) {
        match row {
            None => self.y_cache = Some(y),
            Some(_) if self.since_refactor != before + 1 => self.y_cache = None,
            Some(r) => {
                let m = self.m;
                for (yk, &b) in y.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                    *yk += d * b;
                }
                self.y_cache = Some(y);
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) -> Result<()> {
        let m = self.m;
        self.basic[r] = q;
        self.status[q] = VarStatus::Basic;
        let piv = alpha[r];
        let row: Vec<(usize, f64)> = (0..m)
            .filter(|&k| self.binv[r * m + k] != 0.0)
            .map(|k| (k, self.binv[r * m + k] / piv))
            .collect();
        for &(k, v) in &row {
            self.binv[r * m + k] = v;
        }
        for i in 0..m {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let f = alpha[i];
            let target = &mut self.binv[i * m..(i + 1) * m];
            for &(k, v) in &row {
                target[k] -= f * v;
            }
        }
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor()?;
        }
        Ok(())
    }

    pub(crate) fn basic_position(&self, j: usize) -> Option<usize> {
        self.basic.iter().position(|&b| b == j)
    }

    /// Degenerate exchange: the basic variable at position `r` leaves (at its
    /// lower bound) and nonbasic column `q` enters without changing `x`.
    /// Fails when the pivot element is too small.
    pub(crate) fn exchange(&mut self, r: usize, q: usize) -> Result<bool> {
        let alpha = self.ftran(q);
        if alpha[r].abs() <= 1e-7 {
            return Ok(false);
        }
        let out = self.basic[r];
        self.status[out] = natural_status(self.lower[out], self.upper[out]);
        self.x[out] = self.nonbasic_value(out);
        self.pivot(r, q, &alpha)?;
        self.y_cache = None;
        Ok(true)
    }

    /// Row `r` of `B⁻¹ A` evaluated at column `q`.
    pub(crate) fn tableau_entry(&self, r: usize, q: usize) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        self.for_col(q, |k, v| s += self.binv[r * m + k] * v);
        s
    }

    pub(crate) fn value(&self, j: usize) -> f64 {
        self.x[j]
    }

    pub(crate) fn status_of(&self, j: usize) -> VarStatus {
        self.status[j]
    }

    pub(crate) fn basis_state(&self) -> BasisState {
        BasisState {
            status: self.status.clone(),
            basic: self.basic.clone(),
        }
    }

    pub(crate) fn is_active(&self, j: usize) -> bool {
        self.active[j]
    }

    /// Duals and structural reduced costs under the true costs.
    pub(crate) fn pricing(&self) -> (Vec<f64>, Vec<f64>) {
        let cb: Vec<f64> = self.basic.iter().map(|&j| self.cost[j]).collect();
        let y = self.duals(&cb);
        let d = (0..self.n).map(|j| self.cost[j] - self.col_dot(j, &y)).collect();
        (y, d)
    }

    /// Whether structural column `j` violates optimality by more than `tol`.
    pub(crate) fn violates(&self, j: usize, d: f64, tol: f64) -> bool {
        !self.is_fixed(j) && self.eligible(j, d, tol)
    }

    pub(crate) fn finish(mut self, status: SimplexStatus) -> SimplexResult {
        let (y, d) = self.pricing();
        for j in 0..self.n {
            if self.status[j] != VarStatus::Basic {
                self.x[j] = self.nonbasic_value(j);
            }
        }
        let x = self.x[..self.n].to_vec();
        SimplexResult {
            status,
            objective: self.lp.objective(&x),
            x,
            basis: self.basis_state(),
            reduced_costs: d,
            dual: y,
            iterations: self.iterations,
            phase_one_iterations: self.phase_one_iterations,
            trace: std::mem::take(&mut self.trace),
        }
    }
}
