use std::io::Write;
use std::process::{Command, Output, Stdio};

use xover::instances::{read_instance, read_solution, write_mps};
use xover::{simplex, StandardLp};

fn xover(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_xover"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn xover");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn oracle_objective(problem: &str) -> f64 {
    let lp = read_instance(problem).unwrap().to_lp().unwrap();
    simplex::solve(&lp, None, &Default::default()).unwrap().objective
}

#[test]
fn generated_transport_through_tnet_matches_oracle() {
    let gen = xover(&["gen-ot", "--size", "8", "--seed", "1"], "");
    assert!(gen.status.success());
    let problem = stdout(&gen);
    let out = xover(&["crossover", "--strategy", "tnet", "--sinkhorn"], &problem);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sol = read_solution(&stdout(&out)).unwrap();
    let oracle = oracle_objective(&problem);
    assert!((sol.objective - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()));
    assert_eq!(sol.basis.len(), 16);
}

#[test]
fn perturb_with_fixed_seed_is_deterministic() {
    let problem = stdout(&xover(&["gen-lp", "--rows", "4", "--cols", "5", "--face-dim", "3", "--seed", "2"], ""));
    let args = ["crossover", "--strategy", "perturb", "--seed", "7"];
    let a = xover(&args, &problem);
    let b = xover(&args, &problem);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cnet_from_ipm_file_matches_simplex() {
    let problem = stdout(&xover(&["gen-mcf", "--nodes", "12", "--arcs", "40", "--seed", "4"], ""));
    let dir = std::env::temp_dir().join(format!("xover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let start = dir.join("start.sol");
    let ipm = xover(&["solve", "--method", "ipm", "--gap", "0.01", "-o", start.to_str().unwrap()], &problem);
    assert!(ipm.status.success());
    let out = xover(&["crossover", "--strategy", "cnet", "--from", start.to_str().unwrap()], &problem);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sol = read_solution(&stdout(&out)).unwrap();
    assert_eq!(sol.objective, oracle_objective(&problem));
    assert!(sol.entries.iter().all(|(_, v)| v.fract() == 0.0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn record_echoes_configuration() {
    let problem = stdout(&xover(&["gen-mcf", "--nodes", "6", "--arcs", "12", "--seed", "1"], ""));
    let dir = std::env::temp_dir().join(format!("xover-rec-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rec = dir.join("run.json");
    let out = xover(
        &["crossover", "--strategy", "cnet", "--theta-base", "3", "--record", rec.to_str().unwrap()],
        &problem,
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rec).unwrap()).unwrap();
    assert_eq!(v["config"]["theta_base"], 3);
    assert_eq!(v["config"]["gap"], 0.01);
    assert_eq!(v["vertex"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(xover(&["crossover"], "").status.code(), Some(1));
    assert_eq!(xover(&["frobnicate"], "").status.code(), Some(1));
    let ot = stdout(&xover(&["gen-ot", "--size", "3"], ""));
    let mcf = stdout(&xover(&["gen-mcf", "--nodes", "4", "--arcs", "5"], ""));
    assert_eq!(xover(&["crossover", "--strategy", "tnet"], &mcf).status.code(), Some(1));
    assert_eq!(
        xover(&["crossover", "--strategy", "perturb", "--sinkhorn"], &ot).status.code(),
        Some(1)
    );
    // parse
    assert_eq!(xover(&["solve"], "p min 2 1\nn 1 1\n").status.code(), Some(2));
    assert_eq!(xover(&["solve"], "garbage\n").status.code(), Some(2));
    // infeasible: x1 + x2 = -1 with x ≥ 0
    let a = xover::linalg::CscMatrix::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]);
    let lp = StandardLp::nonnegative(a, vec![-1.0], vec![1.0, 1.0]).unwrap();
    let mps = write_mps(&lp, "bad");
    assert_eq!(xover(&["solve"], &mps).status.code(), Some(3));
    assert_eq!(xover(&["crossover", "--strategy", "cnet"], &mps).status.code(), Some(3));
    // success
    assert_eq!(xover(&["solve"], &ot).status.code(), Some(0));
    assert_eq!(xover(&["--help"], "").status.code(), Some(0));
}

#[test]
fn bench_small_suite_reports_equal_objectives() {
    let out = xover(&["bench", "--suite", "perturb-small"], "");
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("degenerate-")).count(), 10);
    assert!(text.contains("objectives equal: true, vertices: true"));
}
