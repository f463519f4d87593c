use crate::error::{Error, Result};
use crate::linalg::CscMatrix;
use crate::model::{ot_to_lp, Arc, McfProblem, OtProblem, StandardLp, WbMeasure, WbProblem};
use crate::simplex::{self, SimplexStatus};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// What to generate; every kind is reproducible from its seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GenSpec {
    Mcf { nodes: usize, arcs: usize, seed: u64 },
    OtRandom { suppliers: usize, consumers: usize, integer: bool, seed: u64 },
    Wb { measures: usize, support: usize, barycenter_support: usize, seed: u64 },
}

pub const COST_RANGE: (i64, i64) = (1, 100);
pub const CAPACITY_RANGE: (i64, i64) = (10, 1000);

/// Random connected network: a random spanning tree plus distinct extra arcs,
/// integer costs and capacities, and supplies induced by a random integral
/// flow on the tree arcs (so the instance is feasible).
pub fn gen_mcf(nodes: usize, arcs: usize, seed: u64) -> Result<McfProblem> {
    if nodes < 2 {
        return Err(Error::InvalidInput("a network needs at least two nodes".into()));
    }
    if arcs + 1 < nodes {
        return Err(Error::InvalidInput(format!("{arcs} arcs cannot connect {nodes} nodes")));
    }
    if arcs > nodes * (nodes - 1) {
        return Err(Error::InvalidInput(format!("{nodes} nodes admit at most {} distinct arcs", nodes * (nodes - 1))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(&mut rng);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(arcs);
    let mut used = HashSet::new();
    for k in 1..nodes {
        let (u, v) = (order[k], order[rng.gen_range(0..k)]);
        let pair = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        used.insert(pair);
        pairs.push(pair);
    }
    let tree_len = pairs.len();
    let extra = arcs - tree_len;
    if extra > 0 && 2 * arcs > nodes * (nodes - 1) {
        let mut rest: Vec<(usize, usize)> = (0..nodes)
            .flat_map(|u| (0..nodes).filter(move |&v| v != u).map(move |v| (u, v)))
            .filter(|p| !used.contains(p))
            .collect();
        rest.shuffle(&mut rng);
        pairs.extend(rest.into_iter().take(extra));
    } else {
        while pairs.len() < arcs {
            let (u, v) = (rng.gen_range(0..nodes), rng.gen_range(0..nodes));
            if u != v && used.insert((u, v)) {
                pairs.push((u, v));
            }
        }
    }
    let mut supply = vec![0.0; nodes];
    let mut out = Vec::with_capacity(arcs);
    for (k, &(tail, head)) in pairs.iter().enumerate() {
        let cost = rng.gen_range(COST_RANGE.0..=COST_RANGE.1) as f64;
        let capacity = rng.gen_range(CAPACITY_RANGE.0..=CAPACITY_RANGE.1) as f64;
        if k < tree_len {
            let f = rng.gen_range(0..=capacity as i64) as f64;
            supply[tail] += f;
            supply[head] -= f;
        }
        out.push(Arc {
            tail,
            head,
            cost,
            capacity,
        });
    }
    McfProblem::new(nodes, out, supply)
}

fn random_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<(f64, f64)> {
    (0..k).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect()
}

fn sq_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Random transport problem between point clouds in the unit square with
/// squared-distance costs. Masses are positive and sum to one; with
/// `integer`, masses are integers and points lie on a 100×100 integer grid.
pub fn gen_ot_random(m: usize, n: usize, integer: bool, seed: u64) -> Result<OtProblem> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("transport problems need suppliers and consumers".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if integer {
        let grid = |rng: &mut ChaCha8Rng| (rng.gen_range(0..100) as f64, rng.gen_range(0..100) as f64);
        let xs: Vec<(f64, f64)> = (0..m).map(|_| grid(&mut rng)).collect();
        let ys: Vec<(f64, f64)> = (0..n).map(|_| grid(&mut rng)).collect();
        let mut supply: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=9) as f64).collect();
        let total: f64 = supply.iter().sum();
        if total < n as f64 {
            supply[0] += n as f64 - total;
        }
        let total: f64 = supply.iter().sum();
        let mut demand = vec![1.0; n];
        for _ in 0..(total as usize - n) {
            demand[rng.gen_range(0..n)] += 1.0;
        }
        let cost = xs.iter().flat_map(|&a| ys.iter().map(move |&b| sq_dist(a, b))).collect();
        return OtProblem::new(supply, demand, cost);
    }
    Ok(point_clouds(&mut rng, m, n)?.problem)
}

/// A transport problem together with the points that define its costs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloudOt {
    pub problem: OtProblem,
    pub sources: Vec<(f64, f64)>,
    pub targets: Vec<(f64, f64)>,
}

/// Same instance as `gen_ot_random(m, n, false, seed)`, keeping the points.
pub fn gen_ot_points(m: usize, n: usize, seed: u64) -> Result<PointCloudOt> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("transport problems need suppliers and consumers".into()));
    }
    point_clouds(&mut ChaCha8Rng::seed_from_u64(seed), m, n)
}

fn point_clouds(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<PointCloudOt> {
    let xs = random_points(rng, m);
    let ys = random_points(rng, n);
    let weights = |rng: &mut ChaCha8Rng, k: usize| {
        let w: Vec<f64> = (0..k).map(|_| 0.05 + rng.gen::<f64>()).collect();
        let t: f64 = w.iter().sum();
        w.into_iter().map(|v| v / t).collect::<Vec<f64>>()
    };
    let supply = weights(rng, m);
    let demand = weights(rng, n);
    let cost = xs.iter().flat_map(|&a| ys.iter().map(move |&b| sq_dist(a, b))).collect();
    Ok(PointCloudOt {
        problem: OtProblem::new(supply, demand, cost)?,
        sources: xs,
        targets: ys,
    })
}

/// Grayscale image, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

impl Raster {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} pixels for a {width}×{height} raster",
                pixels.len()
            )));
        }
        if pixels.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidInput("pixel values must be finite and nonnegative".into()));
        }
        Ok(Raster { width, height, pixels })
    }

    /// Uniform random raster with roughly `density` nonzero pixels.
    pub fn random(width: usize, height: usize, density: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels = (0..width * height)
            .map(|_| if rng.gen::<f64>() < density { rng.gen_range(1..=255) as f64 } else { 0.0 })
            .collect();
        Raster { width, height, pixels }
    }

    /// Each pixel becomes an `alpha × alpha` block.
    pub fn upscale(&self, alpha: usize) -> Raster {
        let (w, h) = (self.width * alpha, self.height * alpha);
        let pixels = (0..w * h)
            .map(|k| self.pixels[(k / w / alpha) * self.width + (k % w) / alpha])
            .collect();
        Raster {
            width: w,
            height: h,
            pixels,
        }
    }

    /// Nonzero pixels as `((row, col), weight)` with weights summing to one.
    pub fn support(&self) -> Result<Vec<((f64, f64), f64)>> {
        let total: f64 = self.pixels.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput("image has no mass".into()));
        }
        Ok(self
            .pixels
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| (((k / self.width) as f64, (k % self.width) as f64), p / total))
            .collect())
    }
}

/// Transport between the nonzero pixels of two images (after `alpha`-fold
/// upscaling) with cost `‖x − y‖^p`.
pub fn gen_ot_from_images(a: &Raster, b: &Raster, alpha: usize, p: f64) -> Result<OtProblem> {
    if alpha == 0 || !(p > 0.0) {
        return Err(Error::InvalidInput("scale must be positive and the power positive".into()));
    }
    let sa = a.upscale(alpha).support()?;
    let sb = b.upscale(alpha).support()?;
    let cost = sa
        .iter()
        .flat_map(|&(x, _)| sb.iter().map(move |&(y, _)| sq_dist(x, y).sqrt().powf(p)))
        .collect();
    OtProblem::new(
        sa.iter().map(|s| s.1).collect(),
        sb.iter().map(|s| s.1).collect(),
        cost,
    )
}

/// Barycenter problem: `measures` random clouds of `support` atoms and a
/// random barycenter support, squared-distance costs, equal weights `ω`.
pub fn gen_wb(measures: usize, support: usize, barycenter_support: usize, seed: u64) -> Result<WbProblem> {
    if measures == 0 || support == 0 || barycenter_support == 0 {
        return Err(Error::InvalidInput("barycenter problems need measures and atoms".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = random_points(&mut rng, barycenter_support);
    let mut out = Vec::with_capacity(measures);
    for _ in 0..measures {
        let pts = random_points(&mut rng, support);
        let w: Vec<f64> = (0..support).map(|_| 0.05 + rng.gen::<f64>()).collect();
        let t: f64 = w.iter().sum();
        out.push(WbMeasure {
            weights: w.into_iter().map(|v| v / t).collect(),
            cost: pts
                .iter()
                .flat_map(|&a| centers.iter().map(move |&b| sq_dist(a, b)))
                .collect(),
        });
    }
    WbProblem::new(out, barycenter_support, vec![1.0 / measures as f64; measures])
}

/// Small bounded LP `Ax = b, x ≥ 0` with integer data. Row 0 is strictly
/// positive, which bounds the feasible set; `b = A x₀` for a random integral
/// `x₀ ≥ 0`, which makes it nonempty.
pub fn gen_small_lp(rows: usize, cols: usize, seed: u64) -> Result<StandardLp> {
    if rows == 0 || cols < rows {
        return Err(Error::InvalidInput("need at least one row and no more rows than columns".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trip = Vec::new();
    for j in 0..cols {
        trip.push((0, j, rng.gen_range(1..=5) as f64));
        for i in 1..rows {
            let v = rng.gen_range(-4..=4);
            if v != 0 {
                trip.push((i, j, v as f64));
            }
        }
    }
    let a = CscMatrix::from_triplets(rows, cols, &trip);
    let x0: Vec<f64> = (0..cols).map(|_| rng.gen_range(0..=3) as f64).collect();
    let b = a.mul_vec(&x0);
    let c: Vec<f64> = (0..cols).map(|_| rng.gen_range(-5..=5) as f64).collect();
    StandardLp::nonnegative(a, b, c)
}

/// Transport LP whose optimal face has dimension `face_dim`: `face_dim`
/// columns in the support of the (unique) base optimum are duplicated, so
/// their flow can be split freely between the copies.
#[derive(Clone, Debug)]
pub struct DegenerateLp {
    pub lp: StandardLp,
    /// Original column of every appended duplicate.
    pub duplicated: Vec<usize>,
    pub optimum: f64,
    /// Optimal vertex of the base problem, padded with zeros for the duplicates.
    pub base_vertex: Vec<f64>,
}

pub fn degenerate_transport_lp(m: usize, n: usize, face_dim: usize, seed: u64) -> Result<DegenerateLp> {
    let base = gen_ot_random(m, n, false, seed)?;
    let lp = ot_to_lp(&base)?;
    let res = simplex::solve(&lp, None, &Default::default())?;
    if res.status != SimplexStatus::Optimal {
        return Err(Error::Infeasible("base transport problem did not solve".into()));
    }
    let support: Vec<usize> = (0..res.x.len()).filter(|&j| res.x[j] > 1e-12).collect();
    if support.len() < face_dim {
        return Err(Error::InvalidInput(format!(
            "optimal support has {} columns, fewer than the face dimension {face_dim}",
            support.len()
        )));
    }
    let duplicated: Vec<usize> = support[..face_dim].to_vec();
    let mut cols: Vec<Vec<(usize, f64)>> = (0..lp.num_cols()).map(|j| lp.a.col(j).collect()).collect();
    let mut c = lp.c.clone();
    for &j in &duplicated {
        cols.push(lp.a.col(j).collect());
        c.push(lp.c[j]);
    }
    let total = cols.len();
    let a = CscMatrix::from_columns(lp.num_rows(), cols);
    let mut base_vertex = res.x.clone();
    base_vertex.resize(total, 0.0);
    Ok(DegenerateLp {
        lp: StandardLp::nonnegative(a, lp.b.clone(), c)?,
        duplicated,
        optimum: res.objective,
        base_vertex,
    })
}

pub fn generate(spec: &GenSpec) -> Result<super::Instance> {
    Ok(match *spec {
        GenSpec::Mcf { nodes, arcs, seed } => super::Instance::Mcf(gen_mcf(nodes, arcs, seed)?),
        GenSpec::OtRandom {
            suppliers,
            consumers,
            integer,
            seed,
        } => super::Instance::Ot(gen_ot_random(suppliers, consumers, integer, seed)?),
        GenSpec::Wb {
            measures,
            support,
            barycenter_support,
            seed,
        } => super::Instance::Lp(crate::model::wb_to_lp(&gen_wb(measures, support, barycenter_support, seed)?)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_network() {
        let p = gen_mcf(2, 1, 5).unwrap();
        assert_eq!(p.num_arcs(), 1);
        assert_eq!(p.supply[0], -p.supply[1]);
    }

    #[test]
    fn generation_is_reproducible() {
        assert_eq!(gen_mcf(30, 90, 7).unwrap(), gen_mcf(30, 90, 7).unwrap());
        assert_ne!(gen_mcf(30, 90, 7).unwrap(), gen_mcf(30, 90, 8).unwrap());
        assert_eq!(gen_ot_random(5, 6, false, 1).unwrap(), gen_ot_random(5, 6, false, 1).unwrap());
    }

    #[test]
    fn point_clouds_reproduce_the_random_instance() {
        let pc = gen_ot_points(4, 3, 9).unwrap();
        assert_eq!(pc.problem, gen_ot_random(4, 3, false, 9).unwrap());
        let (a, b) = (pc.sources[1], pc.targets[2]);
        let d = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
        assert_eq!(pc.problem.cost_at(1, 2), d);
    }

    #[test]
    fn impossible_sizes_are_rejected() {
        assert!(gen_mcf(5, 3, 0).is_err());
        assert!(gen_mcf(3, 7, 0).is_err());
        assert!(gen_mcf(1, 0, 0).is_err());
    }

    #[test]
    fn complete_digraph() {
        let p = gen_mcf(4, 12, 3).unwrap();
        let pairs: HashSet<(usize, usize)> = p.arcs.iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(pairs.len(), 12);
    }

    #[test]
    fn data_ranges_and_balance() {
        let p = gen_mcf(50, 200, 11).unwrap();
        assert_eq!(p.supply.iter().sum::<f64>(), 0.0);
        for a in &p.arcs {
            assert!((1.0..=100.0).contains(&a.cost) && a.cost.fract() == 0.0);
            assert!((10.0..=1000.0).contains(&a.capacity) && a.capacity.fract() == 0.0);
        }
        assert!(p.supply.iter().all(|b| b.fract() == 0.0));
    }

    #[test]
    fn integer_transport_is_balanced() {
        let p = gen_ot_random(3, 12, true, 4).unwrap();
        assert_eq!(p.supply.iter().sum::<f64>(), p.demand.iter().sum::<f64>());
        assert!(p.demand.iter().all(|d| *d >= 1.0 && d.fract() == 0.0));
    }

    #[test]
    fn identical_single_pixels_cost_nothing() {
        let a = Raster::new(2, 2, vec![0.0, 5.0, 0.0, 0.0]).unwrap();
        let p = gen_ot_from_images(&a, &a, 1, 2.0).unwrap();
        assert_eq!(p.cost, vec![0.0]);
    }

    #[test]
    fn pixels_three_apart_cost_nine() {
        let a = Raster::new(4, 1, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let b = Raster::new(4, 1, vec![0.0, 0.0, 0.0, 2.0]).unwrap();
        let p = gen_ot_from_images(&a, &b, 1, 2.0).unwrap();
        assert_eq!(p.cost, vec![9.0]);
        assert_eq!((p.supply.clone(), p.demand.clone()), (vec![1.0], vec![1.0]));
    }

    #[test]
    fn support_counts_and_upscaling() {
        let a = Raster::random(28, 28, 0.3, 1);
        let b = Raster::random(28, 28, 0.3, 2);
        let nz = |r: &Raster| r.pixels.iter().filter(|p| **p > 0.0).count();
        let p = gen_ot_from_images(&a, &b, 1, 2.0).unwrap();
        assert_eq!((p.num_suppliers(), p.num_consumers()), (nz(&a), nz(&b)));
        let small = Raster::new(2, 1, vec![1.0, 0.0]).unwrap();
        let up = small.upscale(2);
        assert_eq!(up.pixels, vec![1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_image_is_rejected() {
        let a = Raster::new(2, 1, vec![0.0, 0.0]).unwrap();
        assert!(gen_ot_from_images(&a, &a, 1, 2.0).is_err());
        assert!(Raster::new(1, 1, vec![-1.0]).is_err());
    }

    #[test]
    fn small_lp_is_feasible() {
        let lp = gen_small_lp(3, 8, 9).unwrap();
        let res = simplex::solve(&lp, None, &Default::default()).unwrap();
        assert_eq!(res.status, SimplexStatus::Optimal);
    }

    #[test]
    fn degenerate_lp_keeps_optimum() {
        let d = degenerate_transport_lp(4, 5, 3, 2).unwrap();
        assert_eq!(d.lp.num_cols(), 23);
        let res = simplex::solve(&d.lp, None, &Default::default()).unwrap();
        assert!((res.objective - d.optimum).abs() < 1e-12);
    }
}
