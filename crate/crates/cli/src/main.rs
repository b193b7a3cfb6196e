use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qentropy::estimator::{estimate_entropy_with, folklore_estimate_with, Mode};
use qentropy::lowerbound::{recover_entropy, sample_q_seeded, view_counts};
use qentropy::{
    discrete_oracle_view, entropy_relation_check, Distribution, Family, HardInstance, OracleModel, PolyCache,
};
use qentropy_cli::fit::{fit_scaling_with, Column};
use qentropy_cli::sweep::{rows_from_csv, success_rate};
use qentropy_cli::{certify, rows_to_csv, run_sweep, Axis, CliError, CliResult, SweepConfig, Target};

/// Quantum Shannon entropy estimation, simulated classically.
#[derive(Parser)]
#[command(name = "qentropy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single estimate with its level table and query ledger.
    Run(RunArgs),
    /// Seeded sweep over families, sizes and accuracies; writes CSV.
    Sweep(SweepArgs),
    /// Log-log slope of query counts from a sweep CSV.
    Fit(FitArgs),
    /// Runs an invariant suite: polys, cascade, qae or reduction.
    Certify(CertifyArgs),
    /// Builds or loads a hard instance and checks its entropy identity.
    HardInstance(HardArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Family name (uniform, point, dyadic, zipf[:s], two_point[:mass]).
    #[arg(long, default_value = "uniform")]
    dist: String,
    /// Read the distribution from a file instead, one probability per line.
    #[arg(long)]
    dist_file: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    cost_constant: f64,
    /// Also run the single-polynomial baseline.
    #[arg(long)]
    folklore: bool,
    /// Replace sampled estimates by their true values.
    #[arg(long)]
    exact_qae: bool,
    /// Write the report CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated family names.
    #[arg(long)]
    dist: Option<String>,
    /// Comma-separated support sizes.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated accuracies.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cost_constant: Option<f64>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    folklore: bool,
    #[arg(long)]
    exact_qae: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Sweep CSV to fit.
    #[arg(long)]
    input: PathBuf,
    /// n or inv_eps.
    #[arg(long, default_value = "n")]
    axis: String,
    /// Fit the baseline column instead of the main ledger.
    #[arg(long)]
    folklore: bool,
    /// Fit raw counts without dividing by m^2.
    #[arg(long)]
    no_correction: bool,
}

#[derive(Args)]
struct CertifyArgs {
    what: String,
    /// Coefficient table to certify instead of the default polynomial set.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct HardArgs {
    /// Bit matrix file: n lines of k characters in {0,1}.
    #[arg(long)]
    bits: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 2.0)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw this many samples from the three-step sampler.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Estimate H(q) with eps = c t/k and map it back to H(p).
    #[arg(long)]
    reduce: Option<f64>,
    /// Write the bit matrix here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn write(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn run(a: RunArgs) -> CliResult<()> {
    let dist: Distribution<f64> = match &a.dist_file {
        Some(p) => Distribution::parse(&read(p)?)?,
        None => qentropy::make_distribution(&a.dist.parse::<Family>()?, a.n)?,
    };
    let mode = if a.exact_qae { Mode::Exact } else { Mode::Sampled };
    let cache = PolyCache::new();
    let mut o = OracleModel::new(dist).with_cost_constant(a.cost_constant);
    let rep = estimate_entropy_with(&mut o, a.eps, a.seed, mode, &cache)?;
    print!("{}", rep.to_text());
    let mut csv = rep.to_csv();
    if a.folklore {
        let f = folklore_estimate_with(&mut o, a.eps, a.seed, mode, &cache)?;
        print!("{}", f.to_text());
        println!(
            "folklore/main query ratio {:.4}",
            f.queries() as f64 / rep.queries() as f64
        );
        csv.push_str(&f.to_csv());
    }
    if let Some(p) = &a.out {
        write(p, &csv)?;
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> CliResult<()> {
    let mut cfg = match &a.config {
        Some(p) => SweepConfig::load(p)?,
        None => SweepConfig::default(),
    };
    let overrides = [
        ("families", a.dist),
        ("n_values", a.n),
        ("eps_values", a.eps),
        ("trials", a.trials.map(|v| v.to_string())),
        ("seed0", a.seed.map(|v| v.to_string())),
        ("cost_constant", a.cost_constant.map(|v| v.to_string())),
        ("output_path", a.out),
    ];
    for (k, v) in overrides {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    cfg.folklore |= a.folklore;
    cfg.exact_qae |= a.exact_qae;
    let rows = run_sweep(&cfg)?;
    if cfg.output_path.is_none() {
        print!("{}", rows_to_csv(&rows));
    }
    eprintln!("{} rows, success rate {:.4}", rows.len(), success_rate(&rows));
    Ok(())
}

fn fit(a: FitArgs) -> CliResult<()> {
    let rows = rows_from_csv(&read(&a.input)?)?;
    let axis: Axis = a.axis.parse()?;
    let column = if a.folklore { Column::Folklore } else { Column::Main };
    println!("{}", fit_scaling_with(&rows, axis, column, !a.no_correction)?);
    Ok(())
}

fn cert(a: CertifyArgs) -> CliResult<()> {
    let target: Target = a.what.parse()?;
    let report = certify(target, a.file.as_deref())?;
    print!("{}", report.to_text());
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(CliError::Invariant(format!("{}: {}", c.name, c.detail))),
    }
}

fn hard(a: HardArgs) -> CliResult<()> {
    let inst = match &a.bits {
        Some(p) => HardInstance::parse(&read(p)?)?,
        None => HardInstance::random(a.n, a.k, a.t, a.seed)?,
    };
    println!(
        "n = {}, k = {}, R = {}, t = {}, t/k = {}",
        inst.n(),
        inst.k(),
        inst.total_weight(),
        inst.t(),
        inst.t_over_k()
    );
    let counts = view_counts(&discrete_oracle_view(&inst), inst.n());
    println!(
        "oracle table: {} entries, outcome n+1 appears {} times",
        inst.n() * inst.k(),
        counts[inst.n()]
    );
    let check = entropy_relation_check(&inst)?;
    println!(
        "H(p) = {:.12}, H(q) = {:.12}, recovered = {:.12}, max_dev = {:.3e}",
        check.lhs, check.h_q, check.rhs, check.max_dev
    );
    if a.samples > 0 {
        let mut freq = vec![0usize; inst.n() + 1];
        for s in sample_q_seeded(&inst, a.seed, a.samples) {
            freq[s - 1] += 1;
        }
        let tail = freq[inst.n()] as f64 / a.samples as f64;
        println!("sampled frequency of outcome n+1: {tail:.6}");
    }
    if let Some(c) = a.reduce {
        let tk = inst.t_over_k();
        let eps = c * *tk.numer() as f64 / *tk.denom() as f64;
        let mut o = OracleModel::new(inst.q()?);
        let rep = estimate_entropy_with(&mut o, eps, a.seed, Mode::Sampled, &PolyCache::new())?;
        let h = recover_entropy(&inst, rep.v)?;
        println!(
            "reduction: H(q) estimate {:.6} (eps {eps:.4}) gives H(p) = {h:.6}, error {:.6}, queries {}",
            rep.v,
            (h - check.lhs).abs(),
            rep.queries()
        );
    }
    if let Some(p) = &a.out {
        write(p, &inst.to_text())?;
    }
    if check.max_dev > 1e-10 {
        return Err(CliError::Invariant(format!(
            "entropy relation max_dev {}",
            check.max_dev
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Fit(a) => fit(a),
        Command::Certify(a) => cert(a),
        Command::HardInstance(a) => hard(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
