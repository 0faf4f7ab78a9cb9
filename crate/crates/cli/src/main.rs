//! `qsvand`: generate, factor, invert, verify, and benchmark structured
//! polynomial-Vandermonde-like instances from the command line.
//!
//! Exit codes: 0 success, 2 numerical failure (singular matrix or a
//! residual above threshold), 3 input failure (bad arguments or files).
//! The env var `QSVAND_TOL` overrides the inversion residual threshold,
//! which otherwise defaults to `1e-7` times the condition estimate.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qsvand::displacement::{canonical_vq_generators, displacement_residual, materialize};
use qsvand::fast_gepp::{gepp, permuted_product};
use qsvand::instance_gen::{
    jittered_nodes, random_generators, random_nodes, random_system, seeded_rng,
};
use qsvand::inversion_engine::invert;
use qsvand::oracle::{cond_estimate, dense_inverse};
use qsvand::DisplacementInstance;

use qsvand_cli::instance_file::{self, parse_family, read_instance, write_instance};
use qsvand_cli::{dump, CliError, EXIT_INPUT};

#[derive(Parser)]
#[command(
    name = "qsvand",
    version,
    about = "Structured factorization and inversion of polynomial-Vandermonde-like matrices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance file (deterministic for a given seed)
    Gen(GenArgs),
    /// Factor an instance and emit P (swap list), L, and U
    Factor(FactorArgs),
    /// Invert an instance with the fast algorithm
    Invert(InvertArgs),
    /// Run the full residual battery on an instance
    Verify(VerifyArgs),
    /// Time the fast inverse against the dense oracle
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Polynomial family: qs, ss, or wf
    #[arg(long, default_value = "qs")]
    family: String,
    /// Matrix order
    #[arg(long)]
    n: usize,
    /// Displacement rank of the generated pair
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the canonical rank-1 generators of the polynomial Vandermonde
    /// matrix itself instead of random ones
    #[arg(long)]
    canonical: bool,
}

#[derive(Args)]
struct FactorArgs {
    /// Instance file
    input: PathBuf,
    /// Write {prefix}.perm.txt, {prefix}.l.txt, {prefix}.u.txt instead of
    /// printing to stdout
    #[arg(long)]
    out_prefix: Option<PathBuf>,
}

#[derive(Args)]
struct InvertArgs {
    /// Instance file
    input: PathBuf,
    /// Write the inverse as a matrix dump
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compare entrywise against the dense oracle inverse
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Polynomial family: qs, ss, or wf
    #[arg(long, default_value = "qs")]
    family: String,
    /// Comma-separated matrix orders
    #[arg(long, default_value = "64,128,256,512")]
    sizes: String,
    /// Repetitions per size; the median is reported
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Displacement rank
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Factor(a) => cmd_factor(a),
        Cmd::Invert(a) => cmd_invert(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsvand: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Residual threshold: `QSVAND_TOL` when set, else `1e-7 * kappa`.
fn residual_threshold(kappa: f64) -> Result<f64, CliError> {
    match std::env::var("QSVAND_TOL") {
        Ok(s) => s
            .parse::<f64>()
            .map_err(|e| CliError::Input(format!("QSVAND_TOL={s:?} is not a number: {e}"))),
        Err(_) => Ok(1e-7 * kappa),
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    let family = parse_family(&a.family)?;
    if a.n == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    if a.alpha == 0 {
        return Err(CliError::Input("--alpha must be at least 1".into()));
    }
    let mut rng = seeded_rng(a.seed);
    let sys = random_system(family, a.n, &mut rng);
    let nodes = random_nodes(a.n, &mut rng);
    let inst = if a.canonical {
        if a.alpha != 1 {
            return Err(CliError::Input(
                "canonical generators have rank 1; omit --alpha".into(),
            ));
        }
        canonical_vq_generators(&sys, &nodes)?
    } else {
        let (g, b) = random_generators(a.n, a.alpha, &mut rng);
        DisplacementInstance::new(sys, nodes, g, b)?
    };
    match &a.out {
        Some(path) => {
            write_instance(path, &inst)?;
            println!(
                "wrote {} ({} n={} alpha={})",
                path.display(),
                inst.system.family().name(),
                inst.n(),
                inst.alpha_rank()
            );
        }
        None => {
            let file = instance_file::InstanceFile::from_instance(&inst);
            let text = serde_json::to_string_pretty(&file)
                .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
            println!("{text}");
        }
    }
    Ok(())
}

fn cmd_factor(a: FactorArgs) -> Result<(), CliError> {
    let inst = read_instance(&a.input)?;
    let fact = gepp(&inst)?;
    let perm_line = fact
        .perm
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    match &a.out_prefix {
        Some(prefix) => {
            let write = |suffix: &str, text: String| -> Result<(), CliError> {
                let path = with_suffix(prefix, suffix);
                std::fs::write(&path, text)
                    .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
                Ok(())
            };
            write(".perm.txt", perm_line + "\n")?;
            write(".l.txt", dump::format_matrix(&fact.l))?;
            write(".u.txt", dump::format_matrix(&fact.u))?;
        }
        None => {
            println!("P {perm_line}");
            println!("L");
            print!("{}", dump::format_matrix(&fact.l));
            println!("U");
            print!("{}", dump::format_matrix(&fact.u));
        }
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_invert(a: InvertArgs) -> Result<(), CliError> {
    let inst = read_instance(&a.input)?;
    let inv = invert(&inst)?.inverse;
    let r = materialize(&inst);
    let n = inst.n();
    let mut right = r.matmul(&inv);
    for i in 0..n {
        right[(i, i)] -= 1.0;
    }
    let residual = right.inf_norm();
    let kappa = cond_estimate(&r);
    let threshold = residual_threshold(kappa)?;
    println!("n {} alpha {} family {}", n, inst.alpha_rank(), inst.system.family().name());
    println!("condition_estimate {kappa:.3e}");
    println!("right_residual {residual:.3e} (threshold {threshold:.3e})");
    if a.verify {
        let dense = dense_inverse(&r)?;
        let dev = inv.sub(&dense).max_abs() / dense.max_abs().max(f64::MIN_POSITIVE);
        let mut left = inv.matmul(&r);
        for i in 0..n {
            left[(i, i)] -= 1.0;
        }
        println!("left_residual {:.3e}", left.inf_norm());
        println!("oracle_deviation {dev:.3e}");
    }
    if let Some(path) = &a.out {
        std::fs::write(path, dump::format_matrix(&inv))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    if residual <= threshold {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "right residual {residual:.3e} exceeds threshold {threshold:.3e}"
        )))
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let inst = read_instance(&a.input)?;
    let r = materialize(&inst);
    let scale = r.inf_norm().max(1.0);
    let mut failed = false;
    let mut report = |name: &str, value: f64, tol: f64| {
        let ok = value <= tol;
        failed |= !ok;
        println!(
            "{name} {value:.3e} (tol {tol:.3e}) {}",
            if ok { "ok" } else { "FAIL" }
        );
    };

    let disp = displacement_residual(&inst, &r);
    report("displacement_residual", disp / scale, 1e-10);

    let fact = gepp(&inst)?;
    let plu = permuted_product(&fact).sub(&r).inf_norm();
    report("plu_residual", plu / scale, 1e-9);
    let mut lmax: f64 = 0.0;
    for i in 0..inst.n() {
        for j in 0..i {
            lmax = lmax.max(fact.l[(i, j)].abs());
        }
    }
    report("l_subdiagonal_max", lmax, 1.0 + 1e-14);

    let inv = invert(&inst)?.inverse;
    let mut right = r.matmul(&inv);
    for i in 0..inst.n() {
        right[(i, i)] -= 1.0;
    }
    let kappa = cond_estimate(&r);
    println!("condition_estimate {kappa:.3e}");
    let threshold = residual_threshold(kappa)?;
    report("inversion_residual", right.inf_norm(), threshold);

    if failed {
        Err(CliError::Numeric("verification failed".into()))
    } else {
        println!("all checks passed");
        Ok(())
    }
}

fn median_secs(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    xs[xs.len() / 2]
}

fn time_median<F: FnMut()>(reps: usize, mut f: F) -> f64 {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t = Instant::now();
        f();
        times.push(t.elapsed().as_secs_f64());
    }
    median_secs(times)
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let family = parse_family(&a.family)?;
    if a.reps == 0 {
        return Err(CliError::Input("--reps must be at least 1".into()));
    }
    let sizes: Vec<usize> = a
        .sizes
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|e| CliError::Input(format!("bad size {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Input(
            "--sizes must list at least one positive order".into(),
        ));
    }
    if a.alpha == 0 {
        return Err(CliError::Input("--alpha must be at least 1".into()));
    }
    let mut rng = seeded_rng(a.seed);
    let mut rows = Vec::new();
    for &n in &sizes {
        let nodes = jittered_nodes(n, 0.3, 2.0, &mut rng);
        let sys = random_system(family, n, &mut rng);
        let (g, b) = random_generators(n, a.alpha, &mut rng);
        let inst = DisplacementInstance::new(sys, nodes, g, b)?;
        let mut fast_err = None;
        let fast = time_median(a.reps, || {
            if let Err(e) = invert(&inst) {
                fast_err = Some(e);
            }
        });
        if let Some(e) = fast_err {
            return Err(e.into());
        }
        let oracle = if n <= 512 {
            let r = materialize(&inst);
            let mut oracle_err = None;
            let secs = time_median(a.reps, || {
                if let Err(e) = dense_inverse(&r) {
                    oracle_err = Some(e);
                }
            });
            if let Some(e) = oracle_err {
                return Err(e.into());
            }
            Some(secs)
        } else {
            None
        };
        rows.push((n, fast, oracle));
    }
    let exponent = if rows.len() >= 2 {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|&(n, fast, _)| ((n as f64).ln(), fast.ln()))
            .collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
        Some(slope)
    } else {
        None
    };
    println!("n,fast_seconds,oracle_seconds,fitted_exponent");
    for (n, fast, oracle) in rows {
        let oracle_col = oracle.map_or(String::new(), |s| format!("{s:.6}"));
        let exp_col = exponent.map_or(String::new(), |e| format!("{e:.3}"));
        println!("{n},{fast:.6},{oracle_col},{exp_col}");
    }
    Ok(())
}
