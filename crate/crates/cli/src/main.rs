use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tmanifold::harness::{
    append_metrics_line, evaluate_1nn, load_dataset, read_labels, run, synth_gaussian_classes, write_labels,
    Orientation, RunConfig,
};
use tmanifold::manifold::Method;
use tmanifold::tensor::{read_t3b, write_t3b};
use tmanifold::Error;

mod selftest;

/// Tensor manifold learning experiments.
#[derive(Debug, Parser)]
#[command(name = "tmanifold", version, about)]
struct Cli {
    /// Worker threads for per-slice work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a method on a dataset, evaluate 1-NN accuracy and write artifacts.
    Reduce(ReduceArgs),
    /// 1-NN accuracy of precomputed embeddings (samples as mode-1 slices).
    Eval(EvalArgs),
    /// Generate a Gaussian-classes dataset.
    Synth(SynthArgs),
    /// Run the oracle-equivalence and matrix-degeneration checks.
    Selftest,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// mlde, mle or lme.
    #[arg(long)]
    method: Method,
    /// Target dimension.
    #[arg(long)]
    d: usize,
    /// Neighborhood size (mle, lme).
    #[arg(long)]
    k: Option<usize>,
    /// Within-class neighborhood size (mlde).
    #[arg(long)]
    k1: Option<usize>,
    /// Between-class neighborhood size (mlde).
    #[arg(long)]
    k2: Option<usize>,
    /// Heat-kernel width; omit for the median rule, "inf" for binary weights.
    #[arg(long)]
    t: Option<f64>,
    /// Newton tolerance on |Δρ| (mlde).
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    /// Gram regularization (lme).
    #[arg(long, default_value_t = 1e-3)]
    reg_eps: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Training fraction of the seeded split.
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    /// Data tensor in T3B format.
    #[arg(long)]
    input: PathBuf,
    /// Labels file, one integer per line.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// samples-mode1 (n x p x n3) or samples-lateral (p x n x n3).
    #[arg(long, default_value = "samples-mode1")]
    orientation: Orientation,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Append the metrics as one JSON line to this file.
    #[arg(long)]
    results: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    train_labels: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    test_labels: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Number of classes.
    #[arg(long, default_value_t = 2)]
    c: usize,
    #[arg(long, default_value_t = 50)]
    per_class: usize,
    /// Features per sample.
    #[arg(long, default_value_t = 8)]
    p: usize,
    #[arg(long, default_value_t = 3)]
    n3: usize,
    #[arg(long, default_value_t = 10.0)]
    separation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Receives data.t3b and labels.txt.
    #[arg(long, default_value = "data")]
    out_dir: PathBuf,
}

fn reduce(args: ReduceArgs) -> Result<(), Error> {
    let dataset = load_dataset(&args.input, args.labels.as_deref(), args.orientation)?;
    let config = RunConfig {
        method: args.method,
        d: args.d,
        k: args.k,
        k1: args.k1,
        k2: args.k2,
        t: args.t,
        eps: args.eps,
        reg_eps: args.reg_eps,
        max_iter: args.max_iter,
        seed: args.seed,
        split_fraction: args.split,
    };
    let report = run(&config, &dataset, Some(&args.out_dir))?;
    if let Some(path) = &args.results {
        append_metrics_line(path, &report.metrics)?;
    }
    let m = &report.metrics;
    match m.accuracy {
        Some(acc) => println!("{} d={} accuracy={acc:.4} ({})", m.method.name(), config.d, m.evaluation),
        None => println!("{} d={} (no labels, accuracy skipped)", m.method.name(), config.d),
    }
    if let (Some(rho), Some(it)) = (m.rho_star, m.iterations) {
        println!("rho*={rho:.6e} after {it} Newton steps");
    }
    println!("artifacts in {}", args.out_dir.display());
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), Error> {
    let acc = evaluate_1nn(
        &read_t3b(&args.train)?,
        &read_labels(&args.train_labels)?,
        &read_t3b(&args.test)?,
        &read_labels(&args.test_labels)?,
    )?;
    println!("{{\"accuracy\":{acc}}}");
    Ok(())
}

fn synth(args: SynthArgs) -> Result<(), Error> {
    if args.c < 2 || args.per_class == 0 || args.p == 0 || args.n3 == 0 {
        return Err(Error::InvalidParameter(
            "need c >= 2 and positive per-class, p and n3".into(),
        ));
    }
    let ds = synth_gaussian_classes(args.c, args.per_class, args.p, args.n3, args.separation, args.seed);
    std::fs::create_dir_all(&args.out_dir)?;
    write_t3b(args.out_dir.join("data.t3b"), &ds.x)?;
    write_labels(args.out_dir.join("labels.txt"), ds.labels.as_deref().unwrap_or_default())?;
    let (n, p, n3) = ds.x.shape();
    println!("wrote {n}x{p}x{n3} samples-mode1 tensor to {}", args.out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Reduce(a) => reduce(a),
        Command::Eval(a) => eval(a),
        Command::Synth(a) => synth(a),
        Command::Selftest => {
            return if selftest::run_all() { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
