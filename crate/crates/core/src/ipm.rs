//! Primal–dual predictor–corrector interior-point method.
//!
//! Variables are first mapped to `z ≥ 0` (shifting finite lower bounds,
//! negating upper-only columns, splitting free columns, eliminating fixed
//! ones); finite upper bounds get a slack `w` with `z + w = u`. Each iteration
//! solves the normal equations `A D Aᵀ Δy = r` with a Cholesky factorization
//! whose fill pattern is fixed once by a minimum-degree ordering. Zero pivots
//! are skipped, so rank-deficient incidence matrices need no special handling.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_inf, CscMatrix, NormalFactor, NormalSymbolic};
use crate::model::{OtProblem, StandardLp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Interior primal–dual point in the variables of the original problem.
///
/// `s` holds the duals of the lower bounds and `s_upper` those of the upper
/// bounds; both are zero where the corresponding bound is infinite. For a
/// nonnegative LP without upper bounds, `x` and `s` are strictly positive.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimalDualPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    pub s_upper: Vec<f64>,
    /// Complementarity `Σ (x−l)s + (u−x)s_upper`.
    pub gap: f64,
    /// `gap / (1 + |cᵀx|)`.
    pub relative_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    /// The iterate before the final one.
    pub previous: Option<Iterate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Iterate {
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    pub s_upper: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct IpmConfig {
    pub max_iterations: usize,
    /// Residual tolerance relative to `1 + ‖b‖∞` (primal) and `1 + ‖c‖∞` (dual).
    /// `None` ties it to the target gap, `(gap / 100).clamp(1e-8, 1e-4)`, so a
    /// loose target really stops early instead of waiting for tight feasibility.
    pub feasibility_tol: Option<f64>,
    pub step_fraction: f64,
}

impl Default for IpmConfig {
    fn default() -> Self {
        IpmConfig {
            max_iterations: 200,
            feasibility_tol: None,
            step_fraction: 0.9995,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum ColMap {
    Shift { col: usize, lower: f64 },
    Negate { col: usize, upper: f64 },
    Free { pos: usize, neg: usize },
    Fixed { value: f64 },
}

/// `min cᵀz, Az = b, 0 ≤ z, z ≤ u` (with `u = ∞` allowed).
struct Internal {
    a: CscMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
    upper: Vec<f64>,
    map: Vec<ColMap>,
    offset: f64,
}

fn to_internal(lp: &StandardLp) -> Result<Internal> {
    let m = lp.num_rows();
    let mut cols: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut c = Vec::new();
    let mut upper = Vec::new();
    let mut map = Vec::with_capacity(lp.num_cols());
    let mut b = lp.b.clone();
    let mut offset = 0.0;
    for j in 0..lp.num_cols() {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        let col: Vec<(usize, f64)> = lp.a.col(j).collect();
        let mut shift_rhs = |v: f64| {
            for &(r, a) in &col {
                b[r] -= a * v;
            }
        };
        if l == u {
            shift_rhs(l);
            offset += lp.c[j] * l;
            map.push(ColMap::Fixed { value: l });
        } else if l.is_finite() {
            shift_rhs(l);
            offset += lp.c[j] * l;
            map.push(ColMap::Shift { col: cols.len(), lower: l });
            cols.push(col);
            c.push(lp.c[j]);
            upper.push(u - l);
        } else if u.is_finite() {
            shift_rhs(u);
            offset += lp.c[j] * u;
            map.push(ColMap::Negate { col: cols.len(), upper: u });
            cols.push(col.iter().map(|&(r, a)| (r, -a)).collect());
            c.push(-lp.c[j]);
            upper.push(f64::INFINITY);
        } else {
            map.push(ColMap::Free {
                pos: cols.len(),
                neg: cols.len() + 1,
            });
            cols.push(col.clone());
            cols.push(col.iter().map(|&(r, a)| (r, -a)).collect());
            c.extend([lp.c[j], -lp.c[j]]);
            upper.extend([f64::INFINITY, f64::INFINITY]);
        }
    }
    Ok(Internal {
        a: CscMatrix::from_columns(m, cols),
        b,
        c,
        upper,
        map,
        offset,
    })
}

type Factor<'s> = NormalFactor<'s>;

fn factor<'s>(sym: &'s NormalSymbolic, a: &CscMatrix, d: &[f64]) -> Factor<'s> {
    NormalFactor::new(sym, a, d, 1e-13)
}

/// Largest step in `(0, 1]` keeping `v + α Δv ≥ 0`.
fn max_step(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, d)| **d < 0.0)
        .map(|(x, d)| -x / d)
        .fold(1.0, f64::min)
}

struct Newton {
    dz: Vec<f64>,
    dw: Vec<f64>,
    dy: Vec<f64>,
    ds: Vec<f64>,
    dv: Vec<f64>,
}

struct State<'a> {
    p: &'a Internal,
    bounded: Vec<bool>,
    z: Vec<f64>,
    w: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    v: Vec<f64>,
}

impl State<'_> {
    fn residuals(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let p = self.p;
        let az = p.a.mul_vec(&self.z);
        let rb: Vec<f64> = p.b.iter().zip(&az).map(|(b, a)| b - a).collect();
        let aty = p.a.tr_mul_vec(&self.y);
        let rc: Vec<f64> = (0..p.c.len())
            .map(|j| p.c[j] - aty[j] - self.s[j] + if self.bounded[j] { self.v[j] } else { 0.0 })
            .collect();
        let ru: Vec<f64> = (0..p.c.len())
            .map(|j| {
                if self.bounded[j] {
                    p.upper[j] - self.z[j] - self.w[j]
                } else {
                    0.0
                }
            })
            .collect();
        (rb, rc, ru)
    }

    fn complementarity(&self) -> (f64, usize) {
        let mut gap = dot(&self.z, &self.s);
        let mut count = self.z.len();
        for j in 0..self.z.len() {
            if self.bounded[j] {
                gap += self.w[j] * self.v[j];
                count += 1;
            }
        }
        (gap, count)
    }

    fn scaling(&self) -> Vec<f64> {
        (0..self.z.len())
            .map(|j| {
                let mut t = self.s[j] / self.z[j];
                if self.bounded[j] {
                    t += self.v[j] / self.w[j];
                }
                1.0 / t
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn newton(
        &self,
        f: &Factor,
        d: &[f64],
        rb: &[f64],
        rc: &[f64],
        ru: &[f64],
        rxs: &[f64],
        rwv: &[f64],
    ) -> Newton {
        let n = self.z.len();
        let rhat: Vec<f64> = (0..n)
            .map(|j| {
                let mut r = rc[j] - rxs[j] / self.z[j];
                if self.bounded[j] {
                    r += (rwv[j] - self.v[j] * ru[j]) / self.w[j];
                }
                r
            })
            .collect();
        let drhat: Vec<f64> = d.iter().zip(&rhat).map(|(a, b)| a * b).collect();
        let adr = self.p.a.mul_vec(&drhat);
        let mut dy: Vec<f64> = rb.iter().zip(&adr).map(|(a, b)| a + b).collect();
        f.solve(&mut dy);
        let atdy = self.p.a.tr_mul_vec(&dy);
        let dz: Vec<f64> = (0..n).map(|j| d[j] * (atdy[j] - rhat[j])).collect();
        let dw: Vec<f64> = (0..n).map(|j| if self.bounded[j] { ru[j] - dz[j] } else { 0.0 }).collect();
        let ds: Vec<f64> = (0..n).map(|j| (rxs[j] - self.s[j] * dz[j]) / self.z[j]).collect();
        let dv: Vec<f64> = (0..n)
            .map(|j| {
                if self.bounded[j] {
                    (rwv[j] - self.v[j] * dw[j]) / self.w[j]
                } else {
                    0.0
                }
            })
            .collect();
        Newton { dz, dw, dy, ds, dv }
    }

    fn step_lengths(&self, nt: &Newton) -> (f64, f64) {
        let bz: Vec<usize> = (0..self.z.len()).filter(|&j| self.bounded[j]).collect();
        let w: Vec<f64> = bz.iter().map(|&j| self.w[j]).collect();
        let dw: Vec<f64> = bz.iter().map(|&j| nt.dw[j]).collect();
        let v: Vec<f64> = bz.iter().map(|&j| self.v[j]).collect();
        let dv: Vec<f64> = bz.iter().map(|&j| nt.dv[j]).collect();
        (
            max_step(&self.z, &nt.dz).min(max_step(&w, &dw)),
            max_step(&self.s, &nt.ds).min(max_step(&v, &dv)),
        )
    }
}

fn initial_state(p: &Internal) -> State<'_> {
    let (m, n) = (p.a.nrows(), p.a.ncols());
    let bounded: Vec<bool> = p.upper.iter().map(|u| u.is_finite()).collect();
    let sym = NormalSymbolic::new(&p.a);
    let f = factor(&sym, &p.a, &vec![1.0; n]);
    let mut t = p.b.clone();
    f.solve(&mut t);
    let mut z = p.a.tr_mul_vec(&t);
    let mut y = p.a.mul_vec(&p.c);
    f.solve(&mut y);
    let aty = p.a.tr_mul_vec(&y);
    let mut s: Vec<f64> = (0..n).map(|j| p.c[j] - aty[j]).collect();
    let shift_z = (-1.5 * z.iter().copied().fold(f64::INFINITY, f64::min)).max(0.0);
    let shift_s = (-1.5 * s.iter().copied().fold(f64::INFINITY, f64::min)).max(0.0);
    z.iter_mut().for_each(|v| *v += shift_z);
    s.iter_mut().for_each(|v| *v += shift_s);
    let xs = dot(&z, &s);
    let (sz, ss): (f64, f64) = (z.iter().sum(), s.iter().sum());
    if ss > 0.0 && sz > 0.0 {
        z.iter_mut().for_each(|v| *v += 0.5 * xs / ss);
        s.iter_mut().for_each(|v| *v += 0.5 * xs / sz);
    }
    let scale = 1.0 + norm_inf(&z).max(norm_inf(&s));
    let floor = 1e-2 * scale;
    z.iter_mut().for_each(|v| *v = v.max(floor));
    s.iter_mut().for_each(|v| *v = v.max(floor));
    let mut w = vec![0.0; n];
    let mut v = vec![0.0; n];
    for j in 0..n {
        if bounded[j] {
            let u = p.upper[j];
            if z[j] >= 0.9 * u {
                z[j] = 0.5 * u;
            }
            w[j] = u - z[j];
            v[j] = s[j];
        }
    }
    debug_assert_eq!(y.len(), m);
    State {
        p,
        bounded,
        z,
        w,
        y,
        s,
        v,
    }
}

fn to_original(lp: &StandardLp, p: &Internal, st: &State) -> Iterate {
    let n = lp.num_cols();
    let mut x = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut su = vec![0.0; n];
    for (j, cm) in p.map.iter().enumerate() {
        match *cm {
            ColMap::Shift { col, lower } => {
                x[j] = lower + st.z[col];
                s[j] = st.s[col];
                if st.bounded[col] {
                    su[j] = st.v[col];
                }
            }
            ColMap::Negate { col, upper } => {
                x[j] = upper - st.z[col];
                su[j] = st.s[col];
            }
            ColMap::Free { pos, neg } => x[j] = st.z[pos] - st.z[neg],
            ColMap::Fixed { value } => x[j] = value,
        }
    }
    Iterate { x, s, s_upper: su }
}

/// Runs the interior-point method until `gap / (1 + |cᵀx|) ≤ target_gap` with
/// primal and dual residuals at the feasibility tolerance.
pub fn ipm_solve(lp: &StandardLp, target_gap: f64) -> Result<PrimalDualPoint> {
    ipm_solve_with(lp, target_gap, &IpmConfig::default())
}

pub fn ipm_solve_with(lp: &StandardLp, target_gap: f64, cfg: &IpmConfig) -> Result<PrimalDualPoint> {
    if !(target_gap > 0.0) {
        return Err(Error::InvalidInput("target gap must be positive".into()));
    }
    let p = to_internal(lp)?;
    let n = p.c.len();
    let mut st = initial_state(&p);
    let bnorm = 1.0 + norm_inf(&p.b);
    let cnorm = 1.0 + norm_inf(&p.c);
    let unorm = 1.0 + p.upper.iter().filter(|u| u.is_finite()).fold(0.0_f64, |a, u| a.max(*u));
    let feas_tol = cfg.feasibility_tol.unwrap_or((target_gap / 100.0).clamp(1e-8, 1e-4));
    let sym = NormalSymbolic::new(&p.a);
    let mut previous: Option<Iterate> = None;
    let mut stalls = 0;
    for iter in 0..=cfg.max_iterations {
        let (rb, rc, ru) = st.residuals();
        let (gap, count) = st.complementarity();
        let obj = dot(&p.c, &st.z) + p.offset;
        let primal_res = norm_inf(&rb) / bnorm;
        let bound_res = norm_inf(&ru) / unorm;
        let dual_res = norm_inf(&rc) / cnorm;
        let rel_gap = gap / (1.0 + obj.abs());
        if rel_gap <= target_gap
            && primal_res <= feas_tol
            && bound_res <= feas_tol
            && dual_res <= feas_tol
        {
            let cur = to_original(lp, &p, &st);
            return Ok(PrimalDualPoint {
                x: cur.x,
                y: st.y.clone(),
                s: cur.s,
                s_upper: cur.s_upper,
                gap,
                relative_gap: rel_gap,
                primal_residual: primal_res,
                dual_residual: dual_res,
                iterations: iter,
                previous,
            });
        }
        if iter == cfg.max_iterations {
            break;
        }
        // Divergence: iterates running off to infinity signal an infeasible
        // primal (dual ray) or an unbounded primal (primal ray).
        let big = 1e12;
        if norm_inf(&st.z) > big * (bnorm + unorm) && dual_res < 1e-6 {
            return Err(Error::Unbounded);
        }
        if norm_inf(&st.y).max(norm_inf(&st.s)) > big * cnorm {
            return Err(Error::Infeasible("interior-point dual iterates diverge".into()));
        }
        if norm_inf(&st.z) > big * (bnorm + unorm) {
            return Err(Error::Unbounded);
        }

        let mu = gap / count as f64;
        let d = st.scaling();
        let factor = factor(&sym, &p.a, &d);
        let rxs: Vec<f64> = (0..n).map(|j| -st.z[j] * st.s[j]).collect();
        let rwv: Vec<f64> = (0..n).map(|j| if st.bounded[j] { -st.w[j] * st.v[j] } else { 0.0 }).collect();
        let aff = st.newton(&factor, &d, &rb, &rc, &ru, &rxs, &rwv);
        let (ap, ad) = st.step_lengths(&aff);
        let mut gap_aff = 0.0;
        for j in 0..n {
            gap_aff += (st.z[j] + ap * aff.dz[j]) * (st.s[j] + ad * aff.ds[j]);
            if st.bounded[j] {
                gap_aff += (st.w[j] + ap * aff.dw[j]) * (st.v[j] + ad * aff.dv[j]);
            }
        }
        let sigma = (gap_aff / gap).clamp(0.0, 1.0).powi(3);
        let target = sigma * mu;
        let rxs: Vec<f64> = (0..n).map(|j| target - st.z[j] * st.s[j] - aff.dz[j] * aff.ds[j]).collect();
        let rwv: Vec<f64> = (0..n)
            .map(|j| {
                if st.bounded[j] {
                    target - st.w[j] * st.v[j] - aff.dw[j] * aff.dv[j]
                } else {
                    0.0
                }
            })
            .collect();
        let dir = st.newton(&factor, &d, &rb, &rc, &ru, &rxs, &rwv);
        let (ap, ad) = st.step_lengths(&dir);
        let (ap, ad) = ((cfg.step_fraction * ap).min(1.0), (cfg.step_fraction * ad).min(1.0));
        if ap.min(ad) < 1e-10 {
            stalls += 1;
            if stalls >= 5 {
                return Err(if primal_res > feas_tol {
                    Error::Infeasible("interior-point steps stalled before primal feasibility".into())
                } else {
                    Error::IterationLimit(iter)
                });
            }
        } else {
            stalls = 0;
        }
        previous = Some(to_original(lp, &p, &st));
        for j in 0..n {
            st.z[j] += ap * dir.dz[j];
            st.s[j] += ad * dir.ds[j];
            if st.bounded[j] {
                st.w[j] += ap * dir.dw[j];
                st.v[j] += ad * dir.dv[j];
            }
        }
        for (yi, dyi) in st.y.iter_mut().zip(&dir.dy) {
            *yi += ad * dyi;
        }
    }
    Err(Error::IterationLimit(cfg.max_iterations))
}

/// Projects `v` onto the null space of `a`.
fn null_space_projection(a: &CscMatrix, v: &[f64]) -> Vec<f64> {
    let sym = NormalSymbolic::new(a);
    let f = factor(&sym, a, &vec![1.0; a.ncols()]);
    let mut out = v.to_vec();
    for _ in 0..2 {
        let mut t = a.mul_vec(&out);
        f.solve(&mut t);
        let corr = a.tr_mul_vec(&t);
        out.iter_mut().zip(&corr).for_each(|(o, c)| *o -= c);
    }
    out
}

/// Blends a feasible point toward `center`, then adds null-space noise scaled
/// to stay inside the bounds.
fn blend_with_noise(lp: &StandardLp, x_star: &[f64], center: &[f64], lambda: f64, sigma: f64, seed: u64) -> Vec<f64> {
    let base: Vec<f64> = x_star
        .iter()
        .zip(center)
        .map(|(a, c)| (1.0 - lambda) * a + lambda * c)
        .collect();
    if sigma == 0.0 {
        return base;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = base
        .iter()
        .map(|b| sigma * (1.0 + b.abs()) * rng.gen_range(-1.0..1.0))
        .collect();
    let noise = null_space_projection(&lp.a, &raw);
    // Keep at least half the distance to every bound.
    let mut t: f64 = 1.0;
    for j in 0..base.len() {
        if noise[j] < 0.0 && lp.lower[j].is_finite() {
            t = t.min(0.5 * (base[j] - lp.lower[j]) / -noise[j]);
        }
        if noise[j] > 0.0 && lp.upper[j].is_finite() {
            t = t.min(0.5 * (lp.upper[j] - base[j]) / noise[j]);
        }
    }
    let t = t.max(0.0);
    base.iter().zip(&noise).map(|(b, e)| b + t * e).collect()
}

fn validate_blend(lp: &StandardLp, x_star: &[f64], lambda: f64, sigma: f64) -> Result<()> {
    if x_star.len() != lp.num_cols() {
        return Err(Error::Dimension("point has the wrong length".into()));
    }
    if !(0.0..=1.0).contains(&lambda) || !(sigma >= 0.0) {
        return Err(Error::InvalidInput("blend must lie in [0, 1] and noise must be nonnegative".into()));
    }
    Ok(())
}

/// Cheap inexact solution: `(1−λ)x* + λ·center` plus noise of relative size
/// `σ` kept in the null space of `A` and inside the bounds. The center is the
/// interior-point iterate of the zero-cost problem (an analytic center).
pub fn synthetic_interior(lp: &StandardLp, x_star: &[f64], lambda: f64, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    validate_blend(lp, x_star, lambda, sigma)?;
    if lambda == 0.0 && sigma == 0.0 {
        return Ok(x_star.to_vec());
    }
    let zero_cost = StandardLp::new_allow_empty(
        lp.a.clone(),
        lp.b.clone(),
        vec![0.0; lp.num_cols()],
        lp.lower.clone(),
        lp.upper.clone(),
    )?;
    let center = ipm_solve(&zero_cost, 1e-6)?.x;
    Ok(blend_with_noise(lp, x_star, &center, lambda, sigma, seed))
}

/// Transport version of [`synthetic_interior`] whose center is the product
/// plan `s dᵀ / Σs`.
pub fn synthetic_interior_ot(p: &OtProblem, x_star: &[f64], lambda: f64, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    let lp = crate::model::ot_to_lp(p)?;
    validate_blend(&lp, x_star, lambda, sigma)?;
    let mass: f64 = p.supply.iter().sum();
    let n = p.num_consumers();
    let center: Vec<f64> = (0..x_star.len())
        .map(|k| p.supply[k / n] * p.demand[k % n] / mass)
        .collect();
    Ok(blend_with_noise(&lp, x_star, &center, lambda, sigma, seed))
}
