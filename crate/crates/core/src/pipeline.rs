//! End-to-end runs: start point → crossover → optional re-optimization, with
//! per-stage wall-clock timings, plus the benchmark suites that compare the
//! runs against a cold simplex solve.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::approx::sinkhorn;
use crate::colgen::{cnet_crossover, cnet_crossover_lp, tnet_crossover, ColGenConfig};
use crate::error::{Error, Result};
use crate::instances::{degenerate_transport_lp, gen_mcf, gen_ot_random, Instance};
use crate::ipm::{ipm_solve, PrimalDualPoint};
use crate::model::StandardLp;
use crate::perturb::{perturb_crossover, reoptimize, PerturbConfig};
use crate::simplex::{self, vertex_check, SimplexResult, SimplexStatus, VertexCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Cnet,
    Tnet,
    Perturb,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Cnet => "cnet",
            Strategy::Tnet => "tnet",
            Strategy::Perturb => "perturb",
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnet" => Ok(Strategy::Cnet),
            "tnet" => Ok(Strategy::Tnet),
            "perturb" => Ok(Strategy::Perturb),
            other => Err(Error::InvalidInput(format!("unknown strategy `{other}`"))),
        }
    }
}

/// Where the approximate solution comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum StartMethod {
    /// A given point in the column space of the problem.
    Point(Vec<f64>),
    /// Entropic transport (transport problems only); `None` picks the default η.
    Sinkhorn { eta: Option<f64> },
    /// Interior-point method stopped at the given relative gap.
    Ipm { gap: f64 },
}

impl StartMethod {
    /// Gap 0.01 for the network strategies, Sinkhorn for transport, and a
    /// tighter gap for perturbation so the partition estimate is meaningful.
    pub fn default_for(strategy: Strategy) -> Self {
        match strategy {
            Strategy::Cnet => StartMethod::Ipm { gap: 0.01 },
            Strategy::Tnet => StartMethod::Sinkhorn { eta: None },
            Strategy::Perturb => StartMethod::Ipm { gap: 1e-6 },
        }
    }

    fn name(&self) -> &'static str {
        match self {
            StartMethod::Point(_) => "file",
            StartMethod::Sinkhorn { .. } => "sinkhorn",
            StartMethod::Ipm { .. } => "ipm",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub strategy: Strategy,
    pub start: StartMethod,
    pub colgen: ColGenConfig,
    /// Perturbation size, seed and re-optimization flag for [`Strategy::Perturb`].
    pub delta: f64,
    pub seed: u64,
    pub reoptimize: bool,
    pub sinkhorn_tol: f64,
    pub sinkhorn_max_iter: usize,
}

impl PipelineConfig {
    pub fn new(strategy: Strategy) -> Self {
        PipelineConfig {
            strategy,
            start: StartMethod::default_for(strategy),
            colgen: ColGenConfig::default(),
            delta: PerturbConfig::default().delta,
            seed: 0,
            reoptimize: false,
            sinkhorn_tol: 1e-6,
            sinkhorn_max_iter: 100_000,
        }
    }

    fn echo(&self) -> ConfigEcho {
        let (gap, eta) = match self.start {
            StartMethod::Ipm { gap } => (Some(gap), None),
            StartMethod::Sinkhorn { eta } => (None, eta),
            StartMethod::Point(_) => (None, None),
        };
        ConfigEcho {
            theta_base: self.colgen.theta_base,
            epsilon: self.colgen.epsilon,
            big_m: self.colgen.big_m,
            delta: self.delta,
            gap,
            eta,
            sinkhorn_tol: self.sinkhorn_tol,
            reoptimize: self.reoptimize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub theta_base: usize,
    pub epsilon: f64,
    pub big_m: Option<f64>,
    pub delta: f64,
    pub gap: Option<f64>,
    pub eta: Option<f64>,
    pub sinkhorn_tol: f64,
    pub reoptimize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub ms: f64,
}

/// Machine-readable summary of one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub strategy: Strategy,
    pub start: String,
    pub stages: Vec<StageTiming>,
    /// Sum of the stage timings.
    pub total_ms: f64,
    pub objective: f64,
    pub vertex: bool,
    pub iterations: BTreeMap<String, usize>,
    pub seed: u64,
    pub config: ConfigEcho,
}

impl RunRecord {
    pub fn stage_ms(&self, stage: &str) -> f64 {
        self.stages.iter().filter(|s| s.stage == stage).fold(0.0, |a, s| a + s.ms)
    }

    /// The record with all timings zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> RunRecord {
        let mut r = self.clone();
        r.stages.iter_mut().for_each(|s| s.ms = 0.0);
        r.total_ms = 0.0;
        r
    }
}

pub struct RunOutput {
    pub record: RunRecord,
    pub result: SimplexResult,
    pub certificate: VertexCertificate,
    pub lp: StandardLp,
}

struct Stages {
    list: Vec<StageTiming>,
}

impl Stages {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let out = f()?;
        self.list.push(StageTiming {
            stage: stage.to_string(),
            ms: t0.elapsed().as_secs_f64() * 1e3,
        });
        Ok(out)
    }
}

enum Start {
    Point(Vec<f64>),
    PrimalDual(PrimalDualPoint),
}

fn compute_start(inst: &Instance, lp: &StandardLp, cfg: &PipelineConfig, iters: &mut BTreeMap<String, usize>) -> Result<Start> {
    match &cfg.start {
        StartMethod::Point(x) => {
            if x.len() != lp.num_cols() {
                return Err(Error::Dimension(format!(
                    "start point has {} entries, problem has {} columns",
                    x.len(),
                    lp.num_cols()
                )));
            }
            Ok(Start::Point(x.clone()))
        }
        StartMethod::Sinkhorn { eta } => {
            let Instance::Ot(p) = inst else {
                return Err(Error::InvalidInput("Sinkhorn starts need a transport problem".into()));
            };
            let out = sinkhorn(p, *eta, cfg.sinkhorn_tol, cfg.sinkhorn_max_iter)?;
            iters.insert("sinkhorn".into(), out.state.iterations);
            Ok(Start::Point(out.plan))
        }
        StartMethod::Ipm { gap } => {
            let pt = ipm_solve(lp, *gap)?;
            iters.insert("ipm".into(), pt.iterations);
            Ok(Start::PrimalDual(pt))
        }
    }
}

/// Runs one crossover pipeline and certifies the result as a vertex.
pub fn run_pipeline(inst: &Instance, cfg: &PipelineConfig) -> Result<RunOutput> {
    let lp = inst.to_lp()?;
    let mut stages = Stages { list: Vec::new() };
    let mut iters = BTreeMap::new();
    let start = stages.time("start", || compute_start(inst, &lp, cfg, &mut iters))?;
    let result = match cfg.strategy {
        Strategy::Cnet | Strategy::Tnet => {
            let x = match start {
                Start::Point(x) => x,
                Start::PrimalDual(pt) => pt.x,
            };
            let out = stages.time("crossover", || match (cfg.strategy, inst) {
                (Strategy::Cnet, Instance::Mcf(p)) => cnet_crossover(p, &x, &cfg.colgen),
                (Strategy::Cnet, _) => cnet_crossover_lp(&lp, &x, &cfg.colgen),
                (_, Instance::Ot(p)) => {
                    let t = tnet_crossover(p, &x, &cfg.colgen)?;
                    iters.insert("push_loops".into(), t.push_loops);
                    Ok(t.crossover)
                }
                _ => Err(Error::InvalidInput("tnet needs a transport problem".into())),
            })?;
            iters.insert("bi_master".into(), out.bi_master_iterations);
            iters.insert("bi_pivots".into(), out.bi_pivots);
            iters.insert("opt_master".into(), out.opt_master_iterations);
            iters.insert("opt_pivots".into(), out.opt_pivots);
            out.result
        }
        Strategy::Perturb => {
            let Start::PrimalDual(pt) = start else {
                return Err(Error::InvalidInput(
                    "perturbation crossover needs a primal-dual start; use an interior-point start".into(),
                ));
            };
            let pcfg = PerturbConfig {
                delta: cfg.delta,
                seed: cfg.seed,
                reoptimize: false,
                colgen: cfg.colgen.clone(),
                ..PerturbConfig::default()
            };
            let out = stages.time("crossover", || perturb_crossover(&lp, &pt, &pcfg))?;
            iters.insert("support".into(), out.support_size);
            iters.insert("fallback".into(), out.used_fallback as usize);
            iters.insert("perturbed_pivots".into(), out.result.iterations);
            if cfg.reoptimize {
                let res = stages.time("reopt", || reoptimize(&lp, &out.result.basis, &pt.x, &cfg.colgen))?;
                iters.insert("reopt_pivots".into(), res.iterations);
                res
            } else {
                out.result
            }
        }
    };
    match result.status {
        SimplexStatus::Optimal => {}
        SimplexStatus::Infeasible => return Err(Error::Infeasible("crossover found no feasible basis".into())),
        SimplexStatus::Unbounded => return Err(Error::Unbounded),
        SimplexStatus::IterationLimit => return Err(Error::IterationLimit(result.iterations)),
    }
    let certificate = vertex_check(&lp, &result.x);
    let total_ms = stages.list.iter().fold(0.0, |a, s| a + s.ms);
    let record = RunRecord {
        instance: inst.kind().to_string(),
        strategy: cfg.strategy,
        start: cfg.start.name().to_string(),
        stages: stages.list,
        total_ms,
        objective: lp.objective(&result.x),
        vertex: certificate.is_vertex,
        iterations: iters,
        seed: cfg.seed,
        config: cfg.echo(),
    };
    Ok(RunOutput {
        record,
        result,
        certificate,
        lp,
    })
}

/// Cold simplex from the slack basis, timed. This is the oracle every bench
/// row is compared against.
pub fn cold_simplex(lp: &StandardLp) -> Result<(SimplexResult, f64)> {
    let t0 = Instant::now();
    let res = simplex::solve(lp, None, &Default::default())?;
    Ok((res, t0.elapsed().as_secs_f64() * 1e3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    McfSmall,
    McfLarge,
    OtSmall,
    PerturbSmall,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::McfSmall, Suite::McfLarge, Suite::OtSmall, Suite::PerturbSmall];

    pub fn name(self) -> &'static str {
        match self {
            Suite::McfSmall => "mcf-small",
            Suite::McfLarge => "mcf-large",
            Suite::OtSmall => "ot-small",
            Suite::PerturbSmall => "perturb-small",
        }
    }

    /// Timing repetitions per instance; rows report medians.
    pub fn repeats(self) -> usize {
        match self {
            Suite::McfLarge => 3,
            _ => 1,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite `{s}`")))
    }
}

/// One instance of a benchmark suite together with the pipeline to run.
#[derive(Clone, Debug)]
pub struct BenchCase {
    pub name: String,
    pub instance: Instance,
    pub config: PipelineConfig,
}

/// Seeded instances of a suite. Sizes: mcf-small 10 × (40 nodes, 160 arcs),
/// mcf-large 5 × (500 nodes, 2000 arcs), ot-small 10 × 20×20, perturb-small
/// 10 degenerate transport LPs with optimal faces of dimension 1–5.
pub fn suite_cases(suite: Suite, seed: u64) -> Result<Vec<BenchCase>> {
    let mut cases = Vec::new();
    match suite {
        Suite::McfSmall | Suite::McfLarge => {
            let (count, nodes, arcs) = if suite == Suite::McfSmall { (10, 40, 160) } else { (5, 500, 2000) };
            for k in 0..count {
                cases.push(BenchCase {
                    name: format!("mcf-{nodes}x{arcs}-s{}", seed + k),
                    instance: Instance::Mcf(gen_mcf(nodes, arcs, seed + k)?),
                    config: PipelineConfig::new(Strategy::Cnet),
                });
            }
        }
        Suite::OtSmall => {
            for k in 0..10 {
                cases.push(BenchCase {
                    name: format!("ot-20x20-s{}", seed + k),
                    instance: Instance::Ot(gen_ot_random(20, 20, false, seed + k)?),
                    config: PipelineConfig::new(Strategy::Tnet),
                });
            }
        }
        Suite::PerturbSmall => {
            for k in 0..10 {
                let face = 1 + (k as usize % 5);
                let d = degenerate_transport_lp(6, 6, face, seed + k)?;
                let mut config = PipelineConfig::new(Strategy::Perturb);
                config.seed = seed + k;
                config.reoptimize = true;
                cases.push(BenchCase {
                    name: format!("degenerate-face{face}-s{}", seed + k),
                    instance: Instance::Lp(d.lp),
                    config,
                });
            }
        }
    }
    Ok(cases)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub suite: String,
    pub instance: String,
    pub rows: usize,
    pub cols: usize,
    pub simplex_ms: f64,
    pub start_ms: f64,
    pub crossover_ms: f64,
    pub reopt_ms: f64,
    pub pipeline_ms: f64,
    pub oracle_objective: f64,
    pub objective: f64,
    pub objective_equal: bool,
    pub vertex: bool,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Relative objective agreement used by the bench tables.
pub fn objectives_agree(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// Runs one case `repeats` times (timings are medians) and compares the
/// pipeline objective with a cold simplex solve.
pub fn run_case(suite: Suite, case: &BenchCase, repeats: usize) -> Result<BenchRow> {
    let repeats = repeats.max(1);
    let lp = case.instance.to_lp()?;
    let mut simplex_ms = Vec::new();
    let mut oracle = None;
    for _ in 0..repeats {
        let (res, ms) = cold_simplex(&lp)?;
        if res.status != SimplexStatus::Optimal {
            return Err(Error::Infeasible(format!("oracle status {:?} on {}", res.status, case.name)));
        }
        simplex_ms.push(ms);
        oracle = Some(res.objective);
    }
    let mut runs = Vec::new();
    for _ in 0..repeats {
        runs.push(run_pipeline(&case.instance, &case.config)?.record);
    }
    let rec = runs.last().expect("at least one run").clone();
    let oracle_objective = oracle.expect("at least one run");
    Ok(BenchRow {
        suite: suite.name().to_string(),
        instance: case.name.clone(),
        rows: lp.num_rows(),
        cols: lp.num_cols(),
        simplex_ms: median(simplex_ms),
        start_ms: median(runs.iter().map(|r| r.stage_ms("start")).collect()),
        crossover_ms: median(runs.iter().map(|r| r.stage_ms("crossover")).collect()),
        reopt_ms: median(runs.iter().map(|r| r.stage_ms("reopt")).collect()),
        pipeline_ms: median(runs.iter().map(|r| r.total_ms).collect()),
        oracle_objective,
        objective: rec.objective,
        objective_equal: objectives_agree(rec.objective, oracle_objective, 1e-9),
        vertex: rec.vertex,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub suite: String,
    pub instances: usize,
    pub median_simplex_ms: f64,
    pub median_pipeline_ms: f64,
    pub all_objectives_equal: bool,
    pub all_vertices: bool,
}

pub fn summarize(suite: Suite, rows: &[BenchRow]) -> BenchSummary {
    BenchSummary {
        suite: suite.name().to_string(),
        instances: rows.len(),
        median_simplex_ms: median(rows.iter().map(|r| r.simplex_ms).collect()),
        median_pipeline_ms: median(rows.iter().map(|r| r.pipeline_ms).collect()),
        all_objectives_equal: rows.iter().all(|r| r.objective_equal),
        all_vertices: rows.iter().all(|r| r.vertex),
    }
}

/// Fixed-width text table of bench rows followed by the summary line.
pub fn format_table(rows: &[BenchRow], summary: &BenchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>5} {:>6} {:>10} {:>9} {:>9} {:>8} {:>10} {:>16} {:>6} {:>6}",
        "instance", "rows", "cols", "simplex", "start", "xover", "reopt", "pipeline", "objective", "equal", "vertex"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<24} {:>5} {:>6} {:>10.2} {:>9.2} {:>9.2} {:>8.2} {:>10.2} {:>16.6} {:>6} {:>6}",
            r.instance,
            r.rows,
            r.cols,
            r.simplex_ms,
            r.start_ms,
            r.crossover_ms,
            r.reopt_ms,
            r.pipeline_ms,
            r.objective,
            r.objective_equal,
            r.vertex
        );
    }
    let _ = writeln!(
        out,
        "{}: {} instances, median simplex {:.2} ms, median pipeline {:.2} ms, objectives equal: {}, vertices: {}",
        summary.suite,
        summary.instances,
        summary.median_simplex_ms,
        summary.median_pipeline_ms,
        summary.all_objectives_equal,
        summary.all_vertices
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_ot_random;

    #[test]
    fn stage_times_sum_to_total() {
        let inst = Instance::Mcf(gen_mcf(10, 30, 3).unwrap());
        let out = run_pipeline(&inst, &PipelineConfig::new(Strategy::Cnet)).unwrap();
        let sum: f64 = out.record.stages.iter().map(|s| s.ms).sum();
        assert!((sum - out.record.total_ms).abs() <= 1.0);
        assert!(out.record.vertex);
        assert!(out.record.iterations.contains_key("ipm"));
    }

    #[test]
    fn tnet_from_sinkhorn_matches_simplex() {
        let p = gen_ot_random(6, 5, false, 2).unwrap();
        let inst = Instance::Ot(p);
        let out = run_pipeline(&inst, &PipelineConfig::new(Strategy::Tnet)).unwrap();
        let (oracle, _) = cold_simplex(&out.lp).unwrap();
        assert!(objectives_agree(out.record.objective, oracle.objective, 1e-9));
    }

    #[test]
    fn perturb_requires_primal_dual_start() {
        let inst = Instance::Ot(gen_ot_random(3, 3, false, 1).unwrap());
        let mut cfg = PipelineConfig::new(Strategy::Perturb);
        cfg.start = StartMethod::Sinkhorn { eta: None };
        assert!(matches!(run_pipeline(&inst, &cfg), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn records_are_deterministic_apart_from_timings() {
        let inst = Instance::Lp(degenerate_transport_lp(4, 4, 2, 5).unwrap().lp);
        let mut cfg = PipelineConfig::new(Strategy::Perturb);
        cfg.seed = 7;
        cfg.reoptimize = true;
        let a = run_pipeline(&inst, &cfg).unwrap();
        let b = run_pipeline(&inst, &cfg).unwrap();
        assert_eq!(a.record.without_timings(), b.record.without_timings());
        assert_eq!(a.result.x, b.result.x);
        assert!(a.record.stages.iter().any(|s| s.stage == "reopt"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
