//! Column-generation crossover.
//!
//! Col-BI identifies a basis: the problem is augmented with big-M artificial
//! columns, which give a trivial starting basis, and ordered columns are
//! added `θ_k` at a time until every artificial has left the basis. Col-OPT then
//! re-optimizes from that basis, adding columns with negative reduced cost
//! together with the next ordered columns, until a global pricing pass finds
//! no reduced cost below `-ε`.
//!
//! Restricted problems share one simplex instance whose active column set only
//! grows, so every master iteration is warm-started from the previous basis.

use crate::error::{Error, Result};
use crate::model::{mcf_to_lp, ot_to_lp, shift_mcf, McfProblem, OtProblem, StandardLp};
use crate::netflow::{
    column_ordering, flow_ratio_lp, flow_ratio_mcf, network_ordering, push_ot, ratio_ordering, tree_bi_ot,
    FlowRatios,
};
use crate::simplex::{BasisState, Limits, SimplexResult, SimplexStatus, Solver, VarStatus};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct ColGenConfig {
    /// `θ_k = theta_base^k`.
    pub theta_base: usize,
    /// Penalty on artificial columns; derived from the costs when `None`.
    pub big_m: Option<f64>,
    /// Optimality tolerance on reduced costs for Col-OPT.
    pub epsilon: f64,
    pub max_master_iterations: usize,
    pub limits: Limits,
}

impl Default for ColGenConfig {
    fn default() -> Self {
        ColGenConfig {
            theta_base: 2,
            big_m: None,
            epsilon: 1e-9,
            max_master_iterations: 200,
            limits: Limits::default(),
        }
    }
}

impl ColGenConfig {
    fn validate(&self) -> Result<()> {
        if self.theta_base < 2 {
            return Err(Error::InvalidInput("theta base must be at least 2".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        if matches!(self.big_m, Some(m) if !(m > 0.0)) {
            return Err(Error::InvalidInput("big-M must be positive".into()));
        }
        Ok(())
    }

    /// Number of ordered columns present at master iteration `k ≥ 1`, capped at `n`.
    pub fn theta(&self, k: usize, n: usize) -> usize {
        let mut t: usize = 1;
        for _ in 0..k {
            t = t.saturating_mul(self.theta_base);
            if t >= n {
                return n;
            }
        }
        t
    }

    /// `2·n·max|c|` for networks, ten times that for general LPs.
    pub fn penalty(&self, lp: &StandardLp, network: bool) -> f64 {
        if let Some(m) = self.big_m {
            return m;
        }
        let cmax = crate::linalg::norm_inf(&lp.c).max(1.0);
        let m = 2.0 * lp.num_cols() as f64 * cmax;
        if network {
            m
        } else {
            10.0 * m
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MasterStep {
    pub columns: usize,
    pub objective: f64,
    pub basic_artificials: usize,
    pub pivots: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColBiOutcome {
    /// `Optimal` means a basic feasible solution was identified.
    pub status: SimplexStatus,
    pub basis: BasisState,
    pub x: Vec<f64>,
    pub master_iterations: usize,
    pub steps: Vec<MasterStep>,
    pub pivots: usize,
}

fn natural_value(lower: f64, upper: f64) -> f64 {
    if lower.is_finite() {
        lower
    } else if upper.is_finite() {
        upper
    } else {
        0.0
    }
}

/// Big-M augmentation `[A | diag(σ)]` with artificials valued `|b - A x_N|`.
fn augment(lp: &StandardLp, costs: impl Fn(usize) -> f64, artificial_cost: f64) -> Result<(StandardLp, Vec<f64>)> {
    let (m, n) = (lp.num_rows(), lp.num_cols());
    let x0: Vec<f64> = (0..n).map(|j| natural_value(lp.lower[j], lp.upper[j])).collect();
    let r = lp.residual(&x0);
    let sign: Vec<f64> = r.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
    let mut cols: Vec<Vec<(usize, f64)>> = (0..n).map(|j| lp.a.col(j).collect()).collect();
    cols.extend((0..m).map(|i| vec![(i, sign[i])]));
    let mut c: Vec<f64> = (0..n).map(costs).collect();
    c.extend(std::iter::repeat_n(artificial_cost, m));
    let mut lower = lp.lower.clone();
    lower.extend(std::iter::repeat_n(0.0, m));
    let mut upper = lp.upper.clone();
    upper.extend(std::iter::repeat_n(f64::INFINITY, m));
    let aug = StandardLp::new_allow_empty(
        crate::linalg::CscMatrix::from_columns(m, cols),
        lp.b.clone(),
        c,
        lower,
        upper,
    )?;
    Ok((aug, sign))
}

fn check_ordering(ordering: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &j in ordering {
        if j >= n || seen[j] {
            return Err(Error::InvalidInput(format!("ordering entry {j} is out of range or repeated")));
        }
        seen[j] = true;
    }
    if ordering.len() != n {
        return Err(Error::InvalidInput(format!(
            "ordering covers {} of {n} columns",
            ordering.len()
        )));
    }
    Ok(())
}

/// Column-generation basis identification on the big-M problem.
pub fn col_bi(lp: &StandardLp, ordering: &[usize], cfg: &ColGenConfig, network: bool) -> Result<ColBiOutcome> {
    cfg.validate()?;
    let (m, n) = (lp.num_rows(), lp.num_cols());
    check_ordering(ordering, n)?;
    let big_m = cfg.penalty(lp, network);
    let (aug, _) = augment(lp, |j| lp.c[j], big_m)?;
    let artificial = |i: usize| n + i;
    let aug_logical = |i: usize| n + m + i;

    let mut status: Vec<VarStatus> = (0..n).map(|j| natural_status(lp, j)).collect();
    status.extend(std::iter::repeat_n(VarStatus::Basic, m));
    status.extend(std::iter::repeat_n(VarStatus::NonbasicLower, m));
    let start = BasisState {
        status,
        basic: (n..n + m).collect(),
    };
    let mut solver = Solver::new(&aug, Some(&start))?;
    for j in 0..n {
        solver.set_active(j, false);
    }
    for i in 0..m {
        solver.set_active(aug_logical(i), false);
    }

    let tol = 1e-9 * (1.0 + crate::linalg::norm_inf(&lp.b));
    let mut steps = Vec::new();
    let mut prefix = 0;
    let mut k = 0;
    let mut outcome_status = SimplexStatus::Optimal;
    loop {
        k += 1;
        let theta = cfg.theta(k, n);
        for &j in &ordering[prefix..theta.max(prefix)] {
            solver.set_active(j, true);
        }
        prefix = prefix.max(theta);
        let before = solver.iterations;
        let st = solver.run(&cfg.limits)?;
        let basic_art: Vec<usize> = (0..m)
            .filter(|&i| solver.status_of(artificial(i)) == VarStatus::Basic)
            .collect();
        steps.push(MasterStep {
            columns: prefix,
            objective: solver.objective() + (0..m).map(|i| big_m * solver.value(artificial(i))).sum::<f64>(),
            basic_artificials: basic_art.len(),
            pivots: solver.iterations - before,
        });
        match st {
            SimplexStatus::Optimal => {}
            SimplexStatus::Infeasible => {
                return Err(Error::Infeasible("big-M start basis became infeasible".into()))
            }
            other => {
                outcome_status = other;
                break;
            }
        }
        for i in 0..m {
            if solver.status_of(artificial(i)) != VarStatus::Basic {
                solver.set_active(artificial(i), false);
            }
        }
        let positive = basic_art.iter().any(|&i| solver.value(artificial(i)) > tol);
        if !positive {
            break;
        }
        if prefix == n {
            // Every column is present and artificials still carry flow: decide
            // feasibility with a pure phase-1 objective from the current basis.
            let (phase1, _) = augment(lp, |_| 0.0, 1.0)?;
            let basis = solver.basis_state();
            let mut s1 = Solver::new(&phase1, Some(&basis))?;
            for i in 0..m {
                s1.set_active(aug_logical(i), false);
                if basis.status[artificial(i)] != VarStatus::Basic {
                    s1.set_active(artificial(i), false);
                }
            }
            s1.run(&cfg.limits)?;
            let residual: f64 = (0..m).map(|i| s1.value(artificial(i))).sum();
            if residual > tol {
                outcome_status = SimplexStatus::Infeasible;
                let bs = s1.basis_state();
                return Ok(ColBiOutcome {
                    status: outcome_status,
                    basis: map_back(&bs, n, m),
                    x: (0..n).map(|j| s1.value(j)).collect(),
                    master_iterations: k,
                    steps,
                    pivots: solver.iterations + s1.iterations,
                });
            }
            let bs = s1.basis_state();
            let extra = s1.iterations;
            drop(s1);
            solver = Solver::new(&aug, Some(&bs))?;
            solver.iterations = extra;
            for i in 0..m {
                solver.set_active(aug_logical(i), false);
            }
            break;
        }
        if k >= cfg.max_master_iterations {
            outcome_status = SimplexStatus::IterationLimit;
            break;
        }
    }

    if outcome_status == SimplexStatus::Optimal {
        // Zero-valued artificials leave through degenerate exchanges, preferring
        // original columns; a row's own logical always works.
        for i in 0..m {
            let a = artificial(i);
            let Some(r) = solver.basic_position(a) else { continue };
            let candidate = ordering[..prefix]
                .iter()
                .copied()
                .filter(|&j| solver.status_of(j) != VarStatus::Basic && lp.lower[j] != lp.upper[j])
                .find(|&j| solver.tableau_entry(r, j).abs() > 1e-7);
            let exchanged = match candidate {
                Some(j) => solver.exchange(r, j)?,
                None => false,
            };
            if !exchanged && !solver.exchange(r, aug_logical(i))? {
                return Err(Error::SingularBasis);
            }
        }
    }
    let bs = solver.basis_state();
    Ok(ColBiOutcome {
        status: outcome_status,
        basis: map_back(&bs, n, m),
        x: (0..n).map(|j| solver.value(j)).collect(),
        master_iterations: k,
        steps,
        pivots: solver.iterations,
    })
}

fn natural_status(lp: &StandardLp, j: usize) -> VarStatus {
    if lp.lower[j].is_finite() {
        VarStatus::NonbasicLower
    } else if lp.upper[j].is_finite() {
        VarStatus::NonbasicUpper
    } else {
        VarStatus::NonbasicFree
    }
}

/// Translates a basis of the augmented problem to one of the original:
/// artificials and augmented logicals of row `i` both map to logical `n + i`.
fn map_back(aug: &BasisState, n: usize, m: usize) -> BasisState {
    let mut status = aug.status[..n].to_vec();
    status.extend(std::iter::repeat_n(VarStatus::NonbasicLower, m));
    let basic: Vec<usize> = aug
        .basic
        .iter()
        .map(|&j| if j < n + m { j } else { j - m })
        .collect();
    for &j in &basic {
        status[j] = VarStatus::Basic;
    }
    BasisState { status, basic }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColOptOutcome {
    pub result: SimplexResult,
    /// Number of times columns were added after a restricted solve.
    pub master_iterations: usize,
}

/// Column-generation re-optimization from a basic feasible solution to an
/// ε-optimal vertex. The final pricing pass covers every column.
pub fn col_opt(lp: &StandardLp, start: &BasisState, ordering: &[usize], cfg: &ColGenConfig) -> Result<ColOptOutcome> {
    cfg.validate()?;
    let n = lp.num_cols();
    check_ordering(ordering, n)?;
    let mut limits = cfg.limits.clone();
    limits.dual_tol = limits.dual_tol.min(cfg.epsilon);
    let mut solver = Solver::new(lp, Some(start))?;
    for j in 0..n {
        solver.set_active(j, solver.status_of(j) == VarStatus::Basic);
    }
    let mut prefix = cfg.theta(1, n);
    for &j in &ordering[..prefix] {
        solver.set_active(j, true);
    }
    let mut master = 0;
    let mut k = 1;
    loop {
        let st = solver.run(&limits)?;
        if st != SimplexStatus::Optimal {
            return Ok(ColOptOutcome {
                result: solver.finish(st),
                master_iterations: master,
            });
        }
        let (_, d) = solver.pricing();
        let violators: Vec<usize> = (0..n).filter(|&j| solver.violates(j, d[j], cfg.epsilon)).collect();
        if violators.is_empty() {
            break;
        }
        let mut added = 0;
        for j in violators {
            if !solver.is_active(j) {
                solver.set_active(j, true);
                added += 1;
            }
        }
        k += 1;
        let theta = cfg.theta(k, n);
        for &j in &ordering[prefix..theta.max(prefix)] {
            if !solver.is_active(j) {
                solver.set_active(j, true);
                added += 1;
            }
        }
        prefix = prefix.max(theta);
        master += 1;
        if added == 0 {
            // The restricted solve already priced every violator; nothing left to add.
            break;
        }
        if master >= cfg.max_master_iterations {
            return Ok(ColOptOutcome {
                result: solver.finish(SimplexStatus::IterationLimit),
                master_iterations: master,
            });
        }
    }
    Ok(ColOptOutcome {
        result: solver.finish(SimplexStatus::Optimal),
        master_iterations: master,
    })
}

/// Summary of a full crossover run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossoverOutcome {
    /// Optimal vertex of the original problem.
    pub result: SimplexResult,
    pub bi_master_iterations: usize,
    pub bi_pivots: usize,
    pub opt_master_iterations: usize,
    pub opt_pivots: usize,
}

fn require_bfs(bi: &ColBiOutcome) -> Result<()> {
    match bi.status {
        SimplexStatus::Optimal => Ok(()),
        SimplexStatus::Infeasible => Err(Error::Infeasible("artificial columns remain positive".into())),
        SimplexStatus::Unbounded => Err(Error::Unbounded),
        SimplexStatus::IterationLimit => Err(Error::IterationLimit(bi.pivots)),
    }
}

/// CNET on a minimum-cost flow problem: shift heavy arcs, rank arcs by flow
/// ratio, Col-BI, Col-OPT, and shift back.
pub fn cnet_crossover(p: &McfProblem, approx: &[f64], cfg: &ColGenConfig) -> Result<CrossoverOutcome> {
    if approx.len() != p.num_arcs() {
        return Err(Error::Dimension("approximate flow has the wrong length".into()));
    }
    let clamped: Vec<f64> = approx
        .iter()
        .zip(&p.arcs)
        .enumerate()
        .map(|(k, (&f, a))| {
            let slack = 1e-7 * (1.0 + f.abs());
            if f.is_nan() || f < -slack || f > a.capacity + slack {
                Err(Error::OutOfBounds { index: k, value: f })
            } else {
                Ok(f.clamp(0.0, a.capacity))
            }
        })
        .collect::<Result<_>>()?;
    let (shifted, map) = shift_mcf(p, &clamped)?;
    let shifted_flow = map.shift_flow(&clamped);
    let ratios = flow_ratio_mcf(&shifted, &shifted_flow)?;
    let ordering = column_ordering(&shifted, &ratios);
    let lp = mcf_to_lp(&shifted)?;
    let bi = col_bi(&lp, &ordering, cfg, true)?;
    require_bfs(&bi)?;
    let opt = col_opt(&lp, &bi.basis, &ordering, cfg)?;
    let opt_pivots = opt.result.iterations;
    let mut result = opt.result;
    result.x = map.unshift_flow(&result.x)?;
    result.objective = p.objective(&result.x);
    for (j, &rev) in map.reversed.iter().enumerate() {
        if rev {
            result.reduced_costs[j] = -result.reduced_costs[j];
            result.basis.status[j] = match result.basis.status[j] {
                VarStatus::NonbasicLower => VarStatus::NonbasicUpper,
                VarStatus::NonbasicUpper => VarStatus::NonbasicLower,
                s => s,
            };
        }
    }
    Ok(CrossoverOutcome {
        result,
        bi_master_iterations: bi.master_iterations,
        bi_pivots: bi.pivots,
        opt_master_iterations: opt.master_iterations,
        opt_pivots,
    })
}

/// CNET on a general LP: descending flow-ratio ordering, Col-BI, Col-OPT.
pub fn cnet_crossover_lp(lp: &StandardLp, approx: &[f64], cfg: &ColGenConfig) -> Result<CrossoverOutcome> {
    if approx.len() != lp.num_cols() {
        return Err(Error::Dimension("approximate point has the wrong length".into()));
    }
    let ratios = flow_ratio_lp(lp, approx);
    let ordering = ratio_ordering(&ratios);
    let bi = col_bi(lp, &ordering, cfg, false)?;
    require_bfs(&bi)?;
    let opt = col_opt(lp, &bi.basis, &ordering, cfg)?;
    Ok(CrossoverOutcome {
        bi_master_iterations: bi.master_iterations,
        bi_pivots: bi.pivots,
        opt_master_iterations: opt.master_iterations,
        opt_pivots: opt.result.iterations,
        result: opt.result,
    })
}

/// Column ordering of a transport plan: maximum-ratio spanning tree first.
pub fn transport_ordering(p: &OtProblem, plan: &[f64]) -> Result<(FlowRatios, Vec<usize>)> {
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    let mcf = crate::model::ot_to_mcf(p)?;
    let clipped: Vec<f64> = plan.iter().map(|v| v.max(0.0)).collect();
    let ratios = flow_ratio_mcf(&mcf, &clipped)?;
    let edges: Vec<(usize, usize)> = (0..m * n).map(|k| (k / n, m + k % n)).collect();
    let ordering = network_ordering(m + n, &edges, &ratios);
    Ok((ratios, ordering))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TnetOutcome {
    pub crossover: CrossoverOutcome,
    /// Feasible plan after Tree-BI and the push phase, before Col-OPT.
    pub pushed_plan: Vec<f64>,
    pub push_loops: usize,
}

/// TNET on a transport problem: Tree-BI, push phase, then Col-OPT.
pub fn tnet_crossover(p: &OtProblem, plan: &[f64], cfg: &ColGenConfig) -> Result<TnetOutcome> {
    if plan.len() != p.cost.len() {
        return Err(Error::Dimension("plan has the wrong size".into()));
    }
    let clipped: Vec<f64> = plan.iter().map(|v| v.max(0.0)).collect();
    let tree = tree_bi_ot(p, &clipped)?;
    let pushed = push_ot(p, &tree)?;
    let lp = ot_to_lp(p)?;
    let (_, ordering) = transport_ordering(p, &clipped)?;
    let opt = col_opt(&lp, &pushed.basis(p), &ordering, cfg)?;
    Ok(TnetOutcome {
        crossover: CrossoverOutcome {
            bi_master_iterations: 0,
            bi_pivots: 0,
            opt_master_iterations: opt.master_iterations,
            opt_pivots: opt.result.iterations,
            result: opt.result,
        },
        pushed_plan: pushed.plan,
        push_loops: pushed.loops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Arc;

    fn two_node() -> McfProblem {
        McfProblem::new(
            2,
            vec![Arc {
                tail: 0,
                head: 1,
                cost: 4.0,
                capacity: f64::INFINITY,
            }],
            vec![1.0, -1.0],
        )
        .unwrap()
    }

    #[test]
    fn theta_schedule_doubles_and_caps() {
        let cfg = ColGenConfig::default();
        assert_eq!(cfg.theta(1, 100), 2);
        assert_eq!(cfg.theta(3, 100), 8);
        assert_eq!(cfg.theta(10, 100), 100);
    }

    #[test]
    fn col_bi_two_node_single_master_iteration() {
        let lp = mcf_to_lp(&two_node()).unwrap();
        let out = col_bi(&lp, &[0], &ColGenConfig::default(), true).unwrap();
        assert_eq!(out.status, SimplexStatus::Optimal);
        assert_eq!(out.master_iterations, 1);
        assert_eq!(out.x, vec![1.0]);
        assert!(out.basis.is_basic(0));
        assert!(out.basis.basic.iter().all(|&j| j <= 2));
    }

    #[test]
    fn col_bi_reports_infeasibility() {
        // Both nodes demand flow: no feasible flow exists.
        let a = crate::linalg::CscMatrix::from_triplets(2, 1, &[(0, 0, -1.0), (1, 0, 1.0)]);
        let lp = StandardLp::nonnegative(a, vec![1.0, 1.0], vec![1.0]).unwrap();
        let out = col_bi(&lp, &[0], &ColGenConfig::default(), true).unwrap();
        assert_eq!(out.status, SimplexStatus::Infeasible);
    }

    #[test]
    fn col_opt_from_optimal_start_adds_nothing() {
        let lp = mcf_to_lp(&two_node()).unwrap();
        let bi = col_bi(&lp, &[0], &ColGenConfig::default(), true).unwrap();
        let opt = col_opt(&lp, &bi.basis, &[0], &ColGenConfig::default()).unwrap();
        assert_eq!(opt.master_iterations, 0);
        assert_eq!(opt.result.iterations, 0);
        assert_eq!(opt.result.objective, 4.0);
    }

    #[test]
    fn ordering_must_be_a_permutation() {
        let lp = mcf_to_lp(&two_node()).unwrap();
        assert!(col_bi(&lp, &[], &ColGenConfig::default(), true).is_err());
        assert!(col_bi(&lp, &[1], &ColGenConfig::default(), true).is_err());
    }
}
