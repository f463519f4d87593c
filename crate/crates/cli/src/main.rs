use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use xover::approx::sinkhorn;
use xover::colgen::ColGenConfig;
use xover::instances::{
    degenerate_transport_lp, gen_mcf, gen_ot_from_images, gen_ot_random, gen_small_lp, read_instance, read_solution,
    write_solution, Instance, Raster, Solution,
};
use xover::ipm::ipm_solve;
use xover::pipeline::{format_table, run_case, run_pipeline, suite_cases, summarize, PipelineConfig, StartMethod, Strategy, Suite};
use xover::{simplex, Error, SimplexStatus};

/// Crossover from approximate to vertex solutions of linear programs.
#[derive(Parser, Debug)]
#[command(name = "xover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random connected min-cost-flow instance (DIMACS).
    GenMcf {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        arcs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Transport instance: random points in the unit square, or two images.
    GenOt {
        /// Square instance with this many suppliers and consumers.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        suppliers: Option<usize>,
        #[arg(long)]
        consumers: Option<usize>,
        /// Integer masses and grid coordinates.
        #[arg(long)]
        integer: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Source and target images (grayscale intensities become masses).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        images: Option<Vec<PathBuf>>,
        /// Image magnification factor.
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        /// Power of the Euclidean pixel distance.
        #[arg(long, default_value_t = 2.0)]
        power: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Small general LP (MPS); `--face-dim` builds one with a degenerate optimal face.
    GenLp {
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 8)]
        cols: usize,
        #[arg(long)]
        face_dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Entropic transport plan, written as a solution file.
    Sinkhorn {
        input: Option<PathBuf>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve with the simplex method or the interior-point method.
    Solve {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Simplex)]
        method: Method,
        /// Relative duality gap at which the interior-point method stops.
        #[arg(long, default_value_t = 1e-8)]
        gap: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recover an optimal vertex from an approximate solution.
    Crossover(CrossoverArgs),
    /// Compare crossover pipelines against a cold simplex solve.
    Bench {
        /// Suite name, or `all`.
        #[arg(long, default_value = "mcf-small")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the number of timing repetitions per instance.
        #[arg(long)]
        repeats: Option<usize>,
        /// Write the rows and summaries as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Simplex,
    Ipm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Cnet,
    Tnet,
    Perturb,
}

#[derive(Args, Debug)]
struct CrossoverArgs {
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Approximate solution file (solution format).
    #[arg(long, group = "start")]
    from: Option<PathBuf>,
    /// Start from a Sinkhorn plan (transport problems).
    #[arg(long, group = "start")]
    sinkhorn: bool,
    /// Start from the interior-point method stopped at this relative gap.
    #[arg(long, group = "start")]
    ipm_gap: Option<f64>,
    /// Re-optimize the recovered vertex on the original objective (perturb).
    #[arg(long)]
    reopt: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturbation size relative to the largest cost.
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    /// Column batch growth: θ_k = base^k.
    #[arg(long, default_value_t = 2)]
    theta_base: usize,
    /// Reduced-cost tolerance of the re-optimization.
    #[arg(long, default_value_t = 1e-9)]
    epsilon: f64,
    /// Penalty on artificial columns (derived from the costs by default).
    #[arg(long)]
    big_m: Option<f64>,
    /// Entropic regularization for `--sinkhorn` (default 1% of the largest cost).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    sinkhorn_tol: f64,
    /// Write the run record as JSON here.
    #[arg(long)]
    record: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidInput(_) => 1,
            Error::Parse { .. } | Error::Io(_) | Error::Dimension(_) | Error::Unbalanced { .. } => 2,
            Error::Infeasible(_) | Error::Unbounded => 3,
            Error::OutOfBounds { .. }
            | Error::SingularBasis
            | Error::IterationLimit(_)
            | Error::PushStalled(_)
            | Error::BoundViolation { .. } => 4,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_text(path: Option<&Path>) -> CliResult<String> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = fs::read_to_string(p).map_err(|e| Failure {
                code: 2,
                msg: format!("{}: {e}", p.display()),
            })?;
        }
        _ => {
            io::stdin().read_to_string(&mut text).map_err(Error::from)?;
        }
    }
    Ok(text)
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 2,
            msg: format!("{}: {e}", p.display()),
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Error::from(e).into()),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn load_raster(path: &Path) -> CliResult<Raster> {
    let img = image::open(path)
        .map_err(|e| Failure {
            code: 2,
            msg: format!("{}: {e}", path.display()),
        })?
        .to_luma8();
    let (w, h) = img.dimensions();
    let pixels = img.pixels().map(|p| p.0[0] as f64).collect();
    Ok(Raster::new(w as usize, h as usize, pixels)?)
}

fn thread_count() -> CliResult<usize> {
    match std::env::var("XOVER_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| usage(format!("XOVER_THREADS must be a positive integer, got `{v}`"))),
        Err(_) => Ok(1),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::GenMcf {
            nodes,
            arcs,
            seed,
            output,
        } => {
            let p = gen_mcf(nodes, arcs, seed)?;
            write_text(output.as_deref(), &Instance::Mcf(p).write())
        }
        Command::GenOt {
            size,
            suppliers,
            consumers,
            integer,
            seed,
            images,
            alpha,
            power,
            output,
        } => {
            let p = if let Some(paths) = images {
                gen_ot_from_images(&load_raster(&paths[0])?, &load_raster(&paths[1])?, alpha, power)?
            } else {
                let m = suppliers.or(size).ok_or_else(|| usage("give --size, --suppliers/--consumers or --images"))?;
                let n = consumers.or(size).unwrap_or(m);
                gen_ot_random(m, n, integer, seed)?
            };
            write_text(output.as_deref(), &Instance::Ot(p).write())
        }
        Command::GenLp {
            rows,
            cols,
            face_dim,
            seed,
            output,
        } => {
            let lp = match face_dim {
                Some(k) => degenerate_transport_lp(rows, cols, k, seed)?.lp,
                None => gen_small_lp(rows, cols, seed)?,
            };
            write_text(output.as_deref(), &Instance::Lp(lp).write())
        }
        Command::Sinkhorn {
            input,
            eta,
            tol,
            max_iter,
            output,
        } => {
            let Instance::Ot(p) = read_instance(&read_text(input.as_deref())?)? else {
                return Err(usage("sinkhorn needs a transport problem"));
            };
            let out = sinkhorn(&p, eta, tol, max_iter)?;
            eprintln!(
                "sinkhorn: {} iterations, marginal error {:.3e}, eta {}",
                out.state.iterations, out.state.marginal_error, out.state.eta
            );
            let sol = Solution {
                status: if out.state.marginal_error <= tol {
                    SimplexStatus::Optimal
                } else {
                    SimplexStatus::IterationLimit
                },
                objective: p.objective(&out.plan),
                entries: out.plan.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect(),
                basis: Vec::new(),
            };
            write_text(output.as_deref(), &write_solution(&sol))
        }
        Command::Solve {
            input,
            method,
            gap,
            output,
        } => {
            let lp = read_instance(&read_text(input.as_deref())?)?.to_lp()?;
            let sol = match method {
                Method::Simplex => {
                    let res = simplex::solve(&lp, None, &Default::default())?;
                    match res.status {
                        SimplexStatus::Infeasible => return Err(Error::Infeasible("simplex phase 1".into()).into()),
                        SimplexStatus::Unbounded => return Err(Error::Unbounded.into()),
                        SimplexStatus::IterationLimit => return Err(Error::IterationLimit(res.iterations).into()),
                        SimplexStatus::Optimal => Solution::from_result(&res),
                    }
                }
                Method::Ipm => {
                    let pt = ipm_solve(&lp, gap)?;
                    eprintln!("ipm: {} iterations, relative gap {:.3e}", pt.iterations, pt.relative_gap);
                    Solution {
                        status: SimplexStatus::Optimal,
                        objective: lp.objective(&pt.x),
                        entries: pt.x.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect(),
                        basis: Vec::new(),
                    }
                }
            };
            write_text(output.as_deref(), &write_solution(&sol))
        }
        Command::Crossover(args) => crossover(args),
        Command::Bench {
            suite,
            seed,
            repeats,
            json,
        } => bench(&suite, seed, repeats, json.as_deref()),
    }
}

fn crossover(args: CrossoverArgs) -> CliResult<()> {
    let inst = read_instance(&read_text(args.input.as_deref())?)?;
    let strategy = match args.strategy {
        StrategyArg::Cnet => Strategy::Cnet,
        StrategyArg::Tnet => Strategy::Tnet,
        StrategyArg::Perturb => Strategy::Perturb,
    };
    let mut cfg = PipelineConfig::new(strategy);
    cfg.start = if let Some(path) = &args.from {
        let sol = read_solution(&read_text(Some(path))?)?;
        StartMethod::Point(sol.to_dense(inst.to_lp()?.num_cols())?)
    } else if args.sinkhorn {
        StartMethod::Sinkhorn { eta: args.eta }
    } else if let Some(gap) = args.ipm_gap {
        StartMethod::Ipm { gap }
    } else {
        StartMethod::default_for(strategy)
    };
    cfg.colgen = ColGenConfig {
        theta_base: args.theta_base,
        big_m: args.big_m,
        epsilon: args.epsilon,
        ..ColGenConfig::default()
    };
    cfg.delta = args.delta;
    cfg.seed = args.seed;
    cfg.reoptimize = args.reopt;
    cfg.sinkhorn_tol = args.sinkhorn_tol;
    let out = run_pipeline(&inst, &cfg)?;
    if !out.certificate.is_vertex {
        return Err(Failure {
            code: 4,
            msg: format!(
                "result is not a vertex: {} of {} interior columns are independent",
                out.certificate.independent.len(),
                out.certificate.interior.len()
            ),
        });
    }
    if let Some(path) = &args.record {
        let json = serde_json::to_string_pretty(&out.record).map_err(|e| usage(e.to_string()))?;
        write_text(Some(path), &(json + "\n"))?;
    }
    write_text(args.output.as_deref(), &write_solution(&Solution::from_result(&out.result)))
}

fn bench(suite: &str, seed: u64, repeats: Option<usize>, json: Option<&Path>) -> CliResult<()> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| usage(e.to_string()))?;
    let mut records = Vec::new();
    for s in suites {
        let cases = suite_cases(s, seed)?;
        let reps = repeats.unwrap_or(s.repeats());
        let rows = pool
            .install(|| cases.par_iter().map(|c| run_case(s, c, reps)).collect::<Result<Vec<_>, _>>())?;
        let summary = summarize(s, &rows);
        print!("{}", format_table(&rows, &summary));
        println!();
        records.push(serde_json::json!({ "summary": summary, "rows": rows }));
    }
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&records).map_err(|e| usage(e.to_string()))?;
        write_text(Some(path), &(text + "\n"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
