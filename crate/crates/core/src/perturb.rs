//! Perturbation crossover.
//!
//! An interior primal–dual point predicts which variables stay away from
//! their bounds at optimality (the set `P`). The remaining variables are fixed
//! at the bound they approach, the objective is perturbed by a random `ε`, and
//! the restricted problem is solved by simplex. A random perturbation makes
//! the optimum unique with probability one, so the result is a vertex of the
//! estimated optimal face rather than an arbitrary optimal point.
//!
//! When the restricted problem is infeasible, or its solution fails the
//! objective bound below, the whole problem is solved with the same `ε`.

use crate::colgen::{col_bi, col_opt, ColGenConfig};
use crate::error::{Error, Result};
use crate::ipm::PrimalDualPoint;
use crate::linalg::{dot, invert, norm_inf, IndependentSet};
use crate::model::StandardLp;
use crate::simplex::{self, BasisState, SimplexResult, SimplexStatus, VarStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PartitionCriterion {
    /// `j ∈ P` iff the distance to the nearest bound is at least `τ` times the
    /// bound's dual. `τ = 1` is the plain comparison; smaller values are more
    /// inclusive.
    ValueCompare { tau: f64 },
    /// `j ∉ P` iff the distance to a bound shrank by more than the given
    /// fraction over the last iteration.
    RelativeChange { threshold: f64 },
}

impl Default for PartitionCriterion {
    fn default() -> Self {
        PartitionCriterion::ValueCompare { tau: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Free,
    Lower,
    Upper,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionEstimate {
    /// Per column: `Free` for `j ∈ P`, otherwise the bound it is fixed at.
    pub side: Vec<Side>,
    pub criterion: PartitionCriterion,
    /// Set when the relative-change criterion lacked history and the value
    /// comparison was used instead.
    pub fell_back: bool,
}

impl PartitionEstimate {
    pub fn support(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&j| self.side[j] == Side::Free).collect()
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&j| self.side[j] != Side::Free).collect()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.side[j] == Side::Free
    }

    /// Value of every column outside `P` (zero for columns in `P`).
    pub fn fixed_values(&self, lp: &StandardLp) -> Vec<f64> {
        self.side
            .iter()
            .enumerate()
            .map(|(j, s)| match s {
                Side::Free => 0.0,
                Side::Lower => lp.lower[j],
                Side::Upper => lp.upper[j],
            })
            .collect()
    }

    /// Every column in `P`.
    pub fn full(n: usize) -> Self {
        PartitionEstimate {
            side: vec![Side::Free; n],
            criterion: PartitionCriterion::ValueCompare { tau: 0.0 },
            fell_back: false,
        }
    }
}

fn value_compare(lp: &StandardLp, pt: &PrimalDualPoint, tau: f64) -> Vec<Side> {
    (0..lp.num_cols())
        .map(|j| {
            let lo = if lp.lower[j].is_finite() {
                (pt.x[j] - lp.lower[j]) - tau * pt.s[j]
            } else {
                f64::INFINITY
            };
            let up = if lp.upper[j].is_finite() {
                (lp.upper[j] - pt.x[j]) - tau * pt.s_upper[j]
            } else {
                f64::INFINITY
            };
            // Ties stay in P.
            if lo >= 0.0 && up >= 0.0 {
                Side::Free
            } else if lo <= up {
                Side::Lower
            } else {
                Side::Upper
            }
        })
        .collect()
}

fn relative_change(lp: &StandardLp, pt: &PrimalDualPoint, prev: &crate::ipm::Iterate, threshold: f64) -> Vec<Side> {
    let shrink = |now: f64, before: f64| before > 0.0 && (before - now) / before > threshold;
    (0..lp.num_cols())
        .map(|j| {
            let lower = lp.lower[j].is_finite() && shrink(pt.x[j] - lp.lower[j], prev.x[j] - lp.lower[j]);
            let upper = lp.upper[j].is_finite() && shrink(lp.upper[j] - pt.x[j], lp.upper[j] - prev.x[j]);
            match (lower, upper) {
                (true, false) => Side::Lower,
                (false, true) => Side::Upper,
                (true, true) => {
                    if pt.x[j] - lp.lower[j] <= lp.upper[j] - pt.x[j] {
                        Side::Lower
                    } else {
                        Side::Upper
                    }
                }
                (false, false) => Side::Free,
            }
        })
        .collect()
}

pub fn estimate_partition(lp: &StandardLp, pt: &PrimalDualPoint, criterion: PartitionCriterion) -> Result<PartitionEstimate> {
    let n = lp.num_cols();
    if pt.x.len() != n || pt.s.len() != n || pt.s_upper.len() != n {
        return Err(Error::Dimension("primal-dual point does not match the problem".into()));
    }
    let (side, fell_back) = match criterion {
        PartitionCriterion::ValueCompare { tau } => (value_compare(lp, pt, tau), false),
        PartitionCriterion::RelativeChange { threshold } => match &pt.previous {
            Some(prev) => (relative_change(lp, pt, prev, threshold), false),
            None => (value_compare(lp, pt, 1.0), true),
        },
    };
    Ok(PartitionEstimate {
        side,
        criterion,
        fell_back,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignMode {
    /// `ε ∈ [0, δ]`; enables the objective bound check.
    Nonnegative,
    /// `ε ∈ [−δ, δ]`.
    Symmetric,
}

#[derive(Clone, Debug)]
pub struct PerturbConfig {
    /// Perturbation size relative to `‖c‖∞` (absolute when `c = 0`).
    pub delta: f64,
    pub sign: SignMode,
    pub seed: u64,
    /// Solve the full perturbed problem when the restricted one fails.
    pub fallback: bool,
    pub criterion: PartitionCriterion,
    /// Re-optimize the recovered vertex on the original objective.
    pub reoptimize: bool,
    pub colgen: ColGenConfig,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig {
            delta: 1e-6,
            sign: SignMode::Nonnegative,
            seed: 0,
            fallback: true,
            criterion: PartitionCriterion::default(),
            reoptimize: false,
            colgen: ColGenConfig::default(),
        }
    }
}

/// Draws a perturbation for every column. The stream depends only on the
/// seed and `n`, so any subset of columns sees the same values.
pub fn draw_perturbation(lp: &StandardLp, cfg: &PerturbConfig) -> Result<Vec<f64>> {
    if !(cfg.delta >= 0.0) || !cfg.delta.is_finite() {
        return Err(Error::InvalidInput(format!("perturbation size must be nonnegative, got {}", cfg.delta)));
    }
    let cmax = norm_inf(&lp.c);
    let scale = cfg.delta * if cmax > 0.0 { cmax } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok((0..lp.num_cols())
        .map(|_| {
            let u: f64 = rng.gen();
            match cfg.sign {
                SignMode::Nonnegative => scale * u,
                SignMode::Symmetric => scale * (2.0 * u - 1.0),
            }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct PerturbedProblem {
    /// Restricted problem over `columns` with objective `c + ε`.
    pub lp: StandardLp,
    pub columns: Vec<usize>,
    /// Full-length perturbation, zero outside `P`.
    pub epsilon: Vec<f64>,
    /// Values of the columns outside `P`.
    pub fixed: Vec<f64>,
}

impl PerturbedProblem {
    /// Lifts a point of the restricted problem to the original columns.
    pub fn embed(&self, xr: &[f64]) -> Vec<f64> {
        let mut x = self.fixed.clone();
        for (k, &j) in self.columns.iter().enumerate() {
            x[j] = xr[k];
        }
        x
    }

    /// Lifts a basis of the restricted problem; fixed columns become nonbasic at their bound.
    pub fn embed_basis(&self, original: &StandardLp, basis: &BasisState) -> BasisState {
        let (n, nr, m) = (original.num_cols(), self.columns.len(), original.num_rows());
        let mut status: Vec<VarStatus> = (0..n)
            .map(|j| {
                if self.fixed[j] == original.upper[j] && original.upper[j] != original.lower[j] {
                    VarStatus::NonbasicUpper
                } else {
                    VarStatus::NonbasicLower
                }
            })
            .collect();
        status.extend(std::iter::repeat_n(VarStatus::NonbasicLower, m));
        for (k, &j) in self.columns.iter().enumerate() {
            status[j] = basis.status[k];
        }
        let basic: Vec<usize> = basis
            .basic
            .iter()
            .map(|&k| if k < nr { self.columns[k] } else { n + (k - nr) })
            .collect();
        for &j in &basic {
            status[j] = VarStatus::Basic;
        }
        BasisState { status, basic }
    }
}

pub fn build_perturbed(lp: &StandardLp, est: &PartitionEstimate, cfg: &PerturbConfig) -> Result<PerturbedProblem> {
    let eps = draw_perturbation(lp, cfg)?;
    build_perturbed_with(lp, est, &eps)
}

/// As [`build_perturbed`] with an explicit full-length perturbation.
pub fn build_perturbed_with(lp: &StandardLp, est: &PartitionEstimate, epsilon: &[f64]) -> Result<PerturbedProblem> {
    let n = lp.num_cols();
    if est.side.len() != n || epsilon.len() != n {
        return Err(Error::Dimension("partition or perturbation does not match the problem".into()));
    }
    let columns = est.support();
    if columns.is_empty() {
        return Err(Error::InvalidInput("estimated support is empty".into()));
    }
    let fixed = est.fixed_values(lp);
    let mut restricted = lp.restrict(&columns, &fixed)?;
    for (k, &j) in columns.iter().enumerate() {
        restricted.c[k] += epsilon[j];
    }
    let mut eps = vec![0.0; n];
    for &j in &columns {
        eps[j] = epsilon[j];
    }
    Ok(PerturbedProblem {
        lp: restricted,
        columns,
        epsilon: eps,
        fixed,
    })
}

/// Objective bound for a nonnegative perturbation:
/// `cᵀx̄ − (cᵀxᵏ − gap) ≤ gap + (xᵏ)ᵀε`, up to `slack`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub objective: f64,
    /// `cᵀxᵏ − gap`.
    pub lower_bound: f64,
    pub gap: f64,
    pub x_dot_eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Allowance for the residuals of the interior point.
    pub slack: f64,
    /// Whether the bound applies (nonnegative ε on a nonnegative problem).
    pub checked: bool,
    pub holds: bool,
}

fn bound_report(lp: &StandardLp, pt: &PrimalDualPoint, x: &[f64], eps: &[f64], sign: SignMode) -> BoundReport {
    let objective = lp.objective(x);
    let cxk = lp.objective(&pt.x);
    let lower_bound = cxk - pt.gap;
    let x_dot_eps = dot(&pt.x, eps);
    let lhs = objective - lower_bound;
    let rhs = pt.gap + x_dot_eps;
    // The interior point satisfies Ax = b and the dual equations only up to
    // their residuals; both shift cᵀxᵏ by at most the amounts below.
    let rb = lp.residual(&pt.x);
    let xnorm: f64 = pt.x.iter().map(|v| v.abs()).sum();
    let slack = dot(&pt.y, &rb).abs()
        + pt.dual_residual * (1.0 + norm_inf(&lp.c)) * xnorm
        + 1e-9 * (1.0 + objective.abs());
    let checked = sign == SignMode::Nonnegative && lp.lower.iter().all(|l| *l >= 0.0);
    BoundReport {
        objective,
        lower_bound,
        gap: pt.gap,
        x_dot_eps,
        lhs,
        rhs,
        slack,
        checked,
        holds: lhs <= rhs + slack,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerturbOutcome {
    /// Vertex of the original problem (re-optimized when requested).
    pub result: SimplexResult,
    pub bound: BoundReport,
    pub support_size: usize,
    pub used_fallback: bool,
    /// Objective of the vertex before re-optimization.
    pub perturbed_objective: f64,
    pub reoptimized: bool,
}

/// Columns by descending distance to their nearest finite bound.
fn magnitude_ordering(lp: &StandardLp, x: &[f64]) -> Vec<usize> {
    let dist: Vec<f64> = (0..lp.num_cols())
        .map(|j| (x[j] - lp.lower[j]).min(lp.upper[j] - x[j]))
        .collect();
    let mut idx: Vec<usize> = (0..dist.len()).collect();
    idx.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    idx
}

/// Solves a perturbed problem from a basis identified on the interior point.
/// `None` when the restricted problem has no solution.
fn solve_perturbed(pp: &PerturbedProblem, x: &[f64], cfg: &PerturbConfig) -> Result<Option<SimplexResult>> {
    let xr: Vec<f64> = pp.columns.iter().map(|&j| x[j]).collect();
    let ordering = magnitude_ordering(&pp.lp, &xr);
    let bi = col_bi(&pp.lp, &ordering, &cfg.colgen, false)?;
    if bi.status != SimplexStatus::Optimal {
        return Ok(None);
    }
    let res = simplex::solve(&pp.lp, Some(&bi.basis), &cfg.colgen.limits)?;
    Ok(match res.status {
        SimplexStatus::Optimal => Some(res),
        SimplexStatus::IterationLimit => return Err(Error::IterationLimit(res.iterations)),
        _ => None,
    })
}

/// Re-optimizes a vertex of the perturbed problem on the original objective,
/// pricing columns in order of their distance from the bounds at `approx`.
pub fn reoptimize(lp: &StandardLp, basis: &BasisState, approx: &[f64], colgen: &ColGenConfig) -> Result<SimplexResult> {
    let ordering = magnitude_ordering(lp, approx);
    let opt = col_opt(lp, basis, &ordering, colgen)?;
    match opt.result.status {
        SimplexStatus::Optimal => Ok(opt.result),
        SimplexStatus::Unbounded => Err(Error::Unbounded),
        _ => Err(Error::IterationLimit(opt.result.iterations)),
    }
}

pub fn perturb_crossover(lp: &StandardLp, pt: &PrimalDualPoint, cfg: &PerturbConfig) -> Result<PerturbOutcome> {
    let est = estimate_partition(lp, pt, cfg.criterion)?;
    let eps = draw_perturbation(lp, cfg)?;
    let mut used_fallback = false;
    let mut attempt = None;
    if !est.support().is_empty() {
        let pp = build_perturbed_with(lp, &est, &eps)?;
        if let Some(res) = solve_perturbed(&pp, &pt.x, cfg)? {
            let x = pp.embed(&res.x);
            let report = bound_report(lp, pt, &x, &pp.epsilon, cfg.sign);
            if !report.checked || report.holds || !cfg.fallback {
                attempt = Some((pp, res, report, est.support().len()));
            }
        }
    }
    if attempt.is_none() {
        if !cfg.fallback {
            return Err(Error::Infeasible("restricted perturbed problem has no solution".into()));
        }
        used_fallback = true;
        let pp = build_perturbed_with(lp, &PartitionEstimate::full(lp.num_cols()), &eps)?;
        let res = solve_perturbed(&pp, &pt.x, cfg)?
            .ok_or_else(|| Error::Infeasible("perturbed problem has no solution".into()))?;
        let x = pp.embed(&res.x);
        let report = bound_report(lp, pt, &x, &pp.epsilon, cfg.sign);
        attempt = Some((pp, res, report, lp.num_cols()));
    }
    let (pp, res, bound, support_size) = attempt.expect("set above");
    if bound.checked && !bound.holds {
        return Err(Error::BoundViolation {
            lhs: bound.lhs,
            rhs: bound.rhs + bound.slack,
        });
    }
    let x = pp.embed(&res.x);
    let basis = pp.embed_basis(lp, &res.basis);
    let perturbed_objective = lp.objective(&x);
    let result = if cfg.reoptimize {
        reoptimize(lp, &basis, &pt.x, &cfg.colgen)?
    } else {
        let (dual, reduced_costs) = simplex::reduced_costs(lp, &basis)?;
        SimplexResult {
            status: SimplexStatus::Optimal,
            objective: perturbed_objective,
            x,
            basis,
            reduced_costs,
            dual,
            iterations: res.iterations,
            phase_one_iterations: res.phase_one_iterations,
            trace: Vec::new(),
        }
    };
    Ok(PerturbOutcome {
        result,
        bound,
        support_size,
        used_fallback,
        perturbed_objective,
        reoptimized: cfg.reoptimize,
    })
}

/// All vertices of a small problem, by brute force over column bases and
/// bound assignments. Intended for at most 20 columns.
pub fn enumerate_vertices(lp: &StandardLp) -> Result<Vec<Vec<f64>>> {
    let (m, n) = (lp.num_rows(), lp.num_cols());
    if n > 20 {
        return Err(Error::InvalidInput("vertex enumeration is limited to 20 columns".into()));
    }
    let dense: Vec<f64> = lp.a.to_dense().concat();
    // Independent rows determine every solution of Ax = b.
    let mut rows = IndependentSet::new(1e-10);
    let mut kept = Vec::new();
    for i in 0..m {
        if rows.try_add(&dense[i * n..(i + 1) * n]) {
            kept.push(i);
        }
    }
    let r = kept.len();
    let tol = 1e-9 * (1.0 + norm_inf(&lp.b));
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let basic: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        let nonbasic: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) == 0).collect();
        if nonbasic.iter().any(|&j| !lp.lower[j].is_finite() && !lp.upper[j].is_finite()) {
            continue;
        }
        let mut bmat = vec![0.0; r * r];
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in basic.iter().enumerate() {
                bmat[a * r + b] = dense[i * n + j];
            }
        }
        let Some(inv) = invert(&bmat, r, 1e-10) else { continue };
        let choices: Vec<Vec<f64>> = nonbasic
            .iter()
            .map(|&j| [lp.lower[j], lp.upper[j]].into_iter().filter(|v| v.is_finite()).collect())
            .collect();
        let combos: usize = choices.iter().map(|c| c.len()).product();
        for mut code in 0..combos {
            let mut x = vec![0.0; n];
            for (k, &j) in nonbasic.iter().enumerate() {
                let c = &choices[k];
                x[j] = c[code % c.len()];
                code /= c.len();
            }
            let rhs: Vec<f64> = kept
                .iter()
                .map(|&i| lp.b[i] - nonbasic.iter().map(|&j| dense[i * n + j] * x[j]).sum::<f64>())
                .collect();
            for (a, &j) in basic.iter().enumerate() {
                x[j] = (0..r).map(|b| inv[a * r + b] * rhs[b]).sum();
            }
            if lp.infeasibility(&x) > tol {
                continue;
            }
            if !out.iter().any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-9 * (1.0 + p.abs()))) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub trials: usize,
    /// Trials whose perturbed optimum was unique.
    pub unique: usize,
    /// Trials whose perturbed optimum lay on the original optimal face.
    pub in_face: usize,
    pub face_vertices: usize,
    /// Distinct optimal-face vertices reached across trials.
    pub face_vertices_reached: usize,
    /// Some perturbed optimum left the optimal face: `δ` is too large for this instance.
    pub left_face: bool,
}

/// Perturbs the problem restricted to `support` over many seeds and checks,
/// by enumerating vertices, that the optimum is unique and optimal for the
/// original objective.
pub fn verify_uniqueness_empirically(
    lp: &StandardLp,
    support: &[usize],
    cfg: &PerturbConfig,
    trials: usize,
) -> Result<UniquenessReport> {
    let n = lp.num_cols();
    let vertices = enumerate_vertices(lp)?;
    if vertices.is_empty() {
        return Err(Error::Infeasible("problem has no vertices".into()));
    }
    let objs: Vec<f64> = vertices.iter().map(|v| lp.objective(v)).collect();
    let best = objs.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * (1.0 + best.abs());
    let face: Vec<usize> = (0..vertices.len()).filter(|&k| objs[k] <= best + tol).collect();
    let mut in_support = vec![false; n];
    for &j in support {
        in_support[j] = true;
    }
    let fixed_zero = |v: &Vec<f64>| (0..n).all(|j| in_support[j] || v[j].abs() <= 1e-9);
    let candidates: Vec<usize> = (0..vertices.len()).filter(|&k| fixed_zero(&vertices[k])).collect();
    if candidates.is_empty() {
        return Err(Error::Infeasible("no vertex is supported on the given columns".into()));
    }
    let mut reached = vec![false; vertices.len()];
    let (mut unique, mut in_face) = (0, 0);
    for t in 0..trials {
        let trial_cfg = PerturbConfig {
            seed: cfg.seed.wrapping_add(t as u64),
            ..cfg.clone()
        };
        let mut eps = draw_perturbation(lp, &trial_cfg)?;
        for j in 0..n {
            if !in_support[j] {
                eps[j] = 0.0;
            }
        }
        let value = |k: usize| objs[k] + dot(&eps, &vertices[k]);
        let mut order = candidates.clone();
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
        let win = order[0];
        if order.len() == 1 || value(order[1]) - value(win) > 1e-9 * (1.0 + value(win).abs()) {
            unique += 1;
        }
        if objs[win] <= best + tol {
            in_face += 1;
            reached[win] = true;
        }
    }
    Ok(UniquenessReport {
        trials,
        unique,
        in_face,
        face_vertices: face.len(),
        face_vertices_reached: face.iter().filter(|&&k| reached[k]).count(),
        left_face: in_face < trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipm::{ipm_solve, Iterate};
    use crate::linalg::CscMatrix;

    fn segment(c: Vec<f64>) -> StandardLp {
        let a = CscMatrix::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]);
        StandardLp::nonnegative(a, vec![1.0], c).unwrap()
    }

    fn point(x: Vec<f64>, s: Vec<f64>) -> PrimalDualPoint {
        let n = x.len();
        PrimalDualPoint {
            x,
            y: vec![0.0],
            s,
            s_upper: vec![0.0; n],
            gap: 0.0,
            relative_gap: 0.0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            iterations: 0,
            previous: None,
        }
    }

    /// x1+x2 = 1, x3+x4 = 1, x5+x6 = 1 with only x5 costly: the optimal face is a square.
    fn square_face() -> StandardLp {
        let a = CscMatrix::from_triplets(
            3,
            6,
            &[(0, 0, 1.0), (0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 4, 1.0), (2, 5, 1.0)],
        );
        StandardLp::nonnegative(a, vec![1.0; 3], vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn clear_separation() {
        let lp = segment(vec![0.0, 0.0]);
        let est = estimate_partition(&lp, &point(vec![0.9, 1e-6], vec![1e-6, 0.9]), PartitionCriterion::ValueCompare { tau: 1.0 })
            .unwrap();
        assert_eq!(est.support(), vec![0]);
        assert_eq!(est.complement(), vec![1]);
    }

    #[test]
    fn ties_belong_to_support() {
        let lp = segment(vec![0.0, 0.0]);
        let est = estimate_partition(&lp, &point(vec![0.5, 0.5], vec![0.5, 1.0]), PartitionCriterion::ValueCompare { tau: 1.0 })
            .unwrap();
        assert_eq!(est.support(), vec![0]);
    }

    #[test]
    fn relative_change_needs_history() {
        let lp = segment(vec![0.0, 0.0]);
        let mut pt = point(vec![0.9, 1e-6], vec![1e-6, 0.9]);
        let crit = PartitionCriterion::RelativeChange { threshold: 0.5 };
        let est = estimate_partition(&lp, &pt, crit).unwrap();
        assert!(est.fell_back);
        assert_eq!(est.support(), vec![0]);
        pt.previous = Some(Iterate {
            x: vec![0.8, 1e-4],
            s: vec![1e-5, 0.9],
            s_upper: vec![0.0; 2],
        });
        let est = estimate_partition(&lp, &pt, crit).unwrap();
        assert!(!est.fell_back);
        assert_eq!(est.support(), vec![0]);
    }

    #[test]
    fn zero_delta_keeps_objective() {
        let lp = segment(vec![3.0, 1.0]);
        let cfg = PerturbConfig {
            delta: 0.0,
            ..Default::default()
        };
        let pp = build_perturbed(&lp, &PartitionEstimate::full(2), &cfg).unwrap();
        assert_eq!(pp.lp.c, lp.c);
    }

    #[test]
    fn explicit_perturbation_picks_unique_vertex() {
        let lp = segment(vec![0.0, 0.0]);
        let pp = build_perturbed_with(&lp, &PartitionEstimate::full(2), &[0.001, 0.002]).unwrap();
        let res = simplex::solve(&pp.lp, None, &Default::default()).unwrap();
        assert_eq!(pp.embed(&res.x), vec![1.0, 0.0]);
    }

    #[test]
    fn seed_determines_perturbation() {
        let lp = segment(vec![1.0, 2.0]);
        let cfg = PerturbConfig {
            seed: 42,
            ..Default::default()
        };
        assert_eq!(draw_perturbation(&lp, &cfg).unwrap(), draw_perturbation(&lp, &cfg).unwrap());
        let other = PerturbConfig { seed: 43, ..cfg.clone() };
        assert_ne!(draw_perturbation(&lp, &cfg).unwrap(), draw_perturbation(&lp, &other).unwrap());
    }

    #[test]
    fn segment_crossover_returns_vertex_within_bound() {
        let lp = segment(vec![0.0, 0.0]);
        let pt = ipm_solve(&lp, 1e-8).unwrap();
        let out = perturb_crossover(&lp, &pt, &PerturbConfig::default()).unwrap();
        assert!(simplex::vertex_check(&lp, &out.result.x).is_vertex);
        assert!(out.bound.checked && out.bound.holds);
        assert_eq!(out.result.objective, 0.0);
    }

    #[test]
    fn unique_optimum_is_found_regardless_of_seed() {
        let lp = segment(vec![1.0, 2.0]);
        let pt = ipm_solve(&lp, 1e-8).unwrap();
        for seed in 0..5 {
            let cfg = PerturbConfig {
                seed,
                ..Default::default()
            };
            let out = perturb_crossover(&lp, &pt, &cfg).unwrap();
            assert!((out.result.x[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn enumerates_square_vertices() {
        let v = enumerate_vertices(&square_face()).unwrap();
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn square_face_uniqueness() {
        let lp = square_face();
        let rep = verify_uniqueness_empirically(&lp, &[0, 1, 2, 3, 5], &PerturbConfig::default(), 100).unwrap();
        assert_eq!(rep.unique, 100);
        assert_eq!(rep.in_face, 100);
        assert_eq!(rep.face_vertices, 4);
        assert_eq!(rep.face_vertices_reached, 4);
        assert!(!rep.left_face);
    }

    #[test]
    fn huge_delta_is_flagged() {
        let lp = segment(vec![0.0, 1.0]);
        let cfg = PerturbConfig {
            delta: 10.0,
            ..Default::default()
        };
        let rep = verify_uniqueness_empirically(&lp, &[0, 1], &cfg, 100).unwrap();
        assert!(rep.left_face);
    }

    #[test]
    fn single_vertex_face() {
        let lp = segment(vec![1.0, 2.0]);
        let rep = verify_uniqueness_empirically(&lp, &[0, 1], &PerturbConfig::default(), 20).unwrap();
        assert_eq!(rep.in_face, 20);
        assert_eq!(rep.face_vertices_reached, 1);
    }
}
