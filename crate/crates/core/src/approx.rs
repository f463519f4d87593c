//! Entropic-regularized transport by Sinkhorn scaling.
//!
//! The plan is `P = diag(u) K diag(v)` with `K = exp(-C/η)`. Scalings are kept
//! in log form so the same state describes the plain and the log-domain
//! iteration; the latter is used for small `η` or when the kernel underflows.

use crate::error::{Error, Result};
use crate::model::OtProblem;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SinkhornStatus {
    Converged,
    MaxIterations,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SinkhornState {
    /// `ln u`; `-inf` marks a zero-mass supplier.
    pub log_u: Vec<f64>,
    /// `ln v`; `-inf` marks a zero-mass consumer.
    pub log_v: Vec<f64>,
    pub eta: f64,
    pub iterations: usize,
    /// `max(‖P1 − s‖₁, ‖Pᵀ1 − d‖₁)` of the returned plan.
    pub marginal_error: f64,
    pub log_domain: bool,
    pub status: SinkhornStatus,
    /// Marginal error after each iteration.
    pub history: Vec<f64>,
}

impl SinkhornState {
    pub fn u(&self) -> Vec<f64> {
        self.log_u.iter().map(|v| v.exp()).collect()
    }

    pub fn v(&self) -> Vec<f64> {
        self.log_v.iter().map(|v| v.exp()).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SinkhornOutput {
    /// Row-major `m × n` plan.
    pub plan: Vec<f64>,
    pub state: SinkhornState,
}

/// Default regularization: one percent of the largest cost (1 when all costs vanish).
pub fn default_eta(p: &OtProblem) -> f64 {
    let cmax = p.cost.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
    if cmax > 0.0 {
        0.01 * cmax
    } else {
        1.0
    }
}

/// Alternating scaling until the L1 marginal error drops to `tol`.
///
/// Non-convergence is not an error: the last state is returned with
/// [`SinkhornStatus::MaxIterations`].
pub fn sinkhorn(p: &OtProblem, eta: Option<f64>, tol: f64, max_iter: usize) -> Result<SinkhornOutput> {
    if p.cost.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("transport costs must be finite".into()));
    }
    let eta = eta.unwrap_or_else(|| default_eta(p));
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::InvalidInput(format!("regularization must be positive, got {eta}")));
    }
    let cmax = p.cost.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
    if eta >= 0.01 * cmax {
        if let Some(out) = kernel_sinkhorn(p, eta, tol, max_iter) {
            return Ok(out);
        }
    }
    Ok(log_sinkhorn(p, eta, tol, max_iter))
}

fn l1_error(actual: &[f64], target: &[f64]) -> f64 {
    actual.iter().zip(target).map(|(a, t)| (a - t).abs()).sum()
}

/// Plain scaling; `None` if the kernel underflows or scalings overflow.
fn kernel_sinkhorn(p: &OtProblem, eta: f64, tol: f64, max_iter: usize) -> Option<SinkhornOutput> {
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    let k: Vec<f64> = p.cost.iter().map(|c| (-c / eta).exp()).collect();
    let mut u = vec![1.0; m];
    let mut v = vec![1.0; n];
    let mut kv = vec![0.0; m];
    let mut history = Vec::new();
    let mut status = SinkhornStatus::MaxIterations;
    let mut err = f64::INFINITY;
    let mut iterations = 0;
    let scale = |num: f64, den: f64| -> Option<f64> {
        if num == 0.0 {
            Some(0.0)
        } else if den > 0.0 && (num / den).is_finite() {
            Some(num / den)
        } else {
            None
        }
    };
    for (i, kvi) in kv.iter_mut().enumerate() {
        *kvi = (0..n).map(|j| k[i * n + j] * v[j]).sum();
    }
    while iterations < max_iter {
        iterations += 1;
        for i in 0..m {
            u[i] = scale(p.supply[i], kv[i])?;
        }
        for j in 0..n {
            let ktu: f64 = (0..m).map(|i| k[i * n + j] * u[i]).sum();
            v[j] = scale(p.demand[j], ktu)?;
        }
        for (i, kvi) in kv.iter_mut().enumerate() {
            *kvi = (0..n).map(|j| k[i * n + j] * v[j]).sum();
        }
        // Columns are exact after the v-update; only rows carry error.
        let rows: Vec<f64> = (0..m).map(|i| u[i] * kv[i]).collect();
        err = l1_error(&rows, &p.supply);
        history.push(err);
        if err <= tol {
            status = SinkhornStatus::Converged;
            break;
        }
    }
    let plan: Vec<f64> = (0..m * n).map(|idx| u[idx / n] * k[idx] * v[idx % n]).collect();
    if plan.iter().any(|x| !x.is_finite()) {
        return None;
    }
    if iterations > 0 {
        err = marginal_error(p, &plan);
    }
    Some(SinkhornOutput {
        plan,
        state: SinkhornState {
            log_u: u.iter().map(|x| x.ln()).collect(),
            log_v: v.iter().map(|x| x.ln()).collect(),
            eta,
            iterations,
            marginal_error: err,
            log_domain: false,
            status,
            history,
        },
    })
}

fn logsumexp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Log-domain scaling on the dual potentials `f = η ln u`, `g = η ln v`.
fn log_sinkhorn(p: &OtProblem, eta: f64, tol: f64, max_iter: usize) -> SinkhornOutput {
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    let ln = |x: f64| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
    let log_s: Vec<f64> = p.supply.iter().map(|&x| ln(x)).collect();
    let log_d: Vec<f64> = p.demand.iter().map(|&x| ln(x)).collect();
    let c = &p.cost;
    let mut f = vec![0.0; m];
    let mut g = vec![0.0; n];
    let mut history = Vec::new();
    let mut status = SinkhornStatus::MaxIterations;
    let mut iterations = 0;
    let row_lse = |g: &[f64], i: usize| logsumexp((0..n).map(move |j| (g[j] - c[i * n + j]) / eta));
    while iterations < max_iter {
        iterations += 1;
        for i in 0..m {
            f[i] = if log_s[i].is_finite() {
                eta * (log_s[i] - row_lse(&g, i))
            } else {
                f64::NEG_INFINITY
            };
        }
        for j in 0..n {
            g[j] = if log_d[j].is_finite() {
                let lse = logsumexp((0..m).map(|i| (f[i] - c[i * n + j]) / eta));
                eta * (log_d[j] - lse)
            } else {
                f64::NEG_INFINITY
            };
        }
        let rows: Vec<f64> = (0..m)
            .map(|i| if f[i].is_finite() { (f[i] / eta + row_lse(&g, i)).exp() } else { 0.0 })
            .collect();
        let err = l1_error(&rows, &p.supply);
        history.push(err);
        if err <= tol {
            status = SinkhornStatus::Converged;
            break;
        }
    }
    let plan: Vec<f64> = (0..m * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let e = (f[i] + g[j] - c[idx]) / eta;
            if e.is_finite() {
                e.exp()
            } else {
                0.0
            }
        })
        .collect();
    let err = marginal_error(p, &plan);
    SinkhornOutput {
        plan,
        state: SinkhornState {
            log_u: f.iter().map(|x| x / eta).collect(),
            log_v: g.iter().map(|x| x / eta).collect(),
            eta,
            iterations,
            marginal_error: err,
            log_domain: true,
            status,
            history,
        },
    }
}

/// `max(‖P1 − s‖₁, ‖Pᵀ1 − d‖₁)`.
pub fn marginal_error(p: &OtProblem, plan: &[f64]) -> f64 {
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    let rows: Vec<f64> = (0..m).map(|i| plan[i * n..(i + 1) * n].iter().sum()).collect();
    let cols: Vec<f64> = (0..n).map(|j| (0..m).map(|i| plan[i * n + j]).sum()).collect();
    l1_error(&rows, &p.supply).max(l1_error(&cols, &p.demand))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_converges_immediately() {
        let p = OtProblem::new(vec![1.0], vec![1.0], vec![7.5]).unwrap();
        let out = sinkhorn(&p, None, 1e-12, 100).unwrap();
        assert_eq!(out.state.iterations, 1);
        assert!((out.plan[0] - 1.0).abs() < 1e-15);
        assert_eq!(out.state.status, SinkhornStatus::Converged);
    }

    #[test]
    fn two_by_two_is_nearly_diagonal() {
        let p = OtProblem::new(vec![0.5, 0.5], vec![0.5, 0.5], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let out = sinkhorn(&p, Some(0.01), 1e-12, 1000).unwrap();
        for (a, b) in out.plan.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn log_domain_matches_kernel() {
        let p = OtProblem::new(vec![0.3, 0.7], vec![0.6, 0.4], vec![1.0, 2.0, 3.0, 1.5]).unwrap();
        let a = kernel_sinkhorn(&p, 0.5, 1e-13, 10_000).unwrap();
        let b = log_sinkhorn(&p, 0.5, 1e-13, 10_000);
        assert!(b.state.log_domain);
        for (x, y) in a.plan.iter().zip(&b.plan) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn small_eta_uses_log_domain() {
        let p = OtProblem::new(vec![0.5, 0.5], vec![0.5, 0.5], vec![0.0, 900.0, 900.0, 0.0]).unwrap();
        let out = sinkhorn(&p, Some(0.5), 1e-9, 1000).unwrap();
        assert!(out.state.log_domain);
        assert!(out.state.marginal_error <= 1e-9);
        assert!(out.plan.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn zero_mass_supplier_gets_empty_row() {
        let p = OtProblem::new(vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        for eta in [1.0, 0.01] {
            let out = sinkhorn(&p, Some(eta), 1e-10, 1000).unwrap();
            assert_eq!(&out.plan[..2], &[0.0, 0.0]);
            assert!(out.state.marginal_error <= 1e-10);
        }
    }

    #[test]
    fn rejects_bad_regularization() {
        let p = OtProblem::new(vec![1.0], vec![1.0], vec![1.0]).unwrap();
        assert!(sinkhorn(&p, Some(0.0), 1e-6, 10).is_err());
        assert!(sinkhorn(&p, Some(f64::NAN), 1e-6, 10).is_err());
    }

    #[test]
    fn iteration_cap_sets_status() {
        let p = OtProblem::new(vec![0.5, 0.5], vec![0.2, 0.8], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let out = sinkhorn(&p, Some(0.01), 0.0, 3).unwrap();
        assert_eq!(out.state.status, SinkhornStatus::MaxIterations);
        assert_eq!(out.state.iterations, 3);
    }
}
