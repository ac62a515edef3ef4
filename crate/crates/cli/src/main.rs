//! Command-line front end. Exit codes: 0 success, 1 input error, 2 budget
//! exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use listdec_core::codes::GeneratorMatrix;
use listdec_core::harness::{
    records_to_csv, records_to_json, run_experiment, ExperimentConfig, ExperimentRecord,
    RunOptions,
};
use listdec_core::oracle::{list_size_at_radius, real_to_rational_floor, OracleMode};
use listdec_core::rip::{
    phi_lin_sub, rip_constant_exact, rip_constant_sampled, sample_rows, RipReport,
};
use listdec_core::{bounds, chaining, codes, Error, Rational};

#[derive(Parser)]
#[command(
    name = "listdec",
    about = "List-decodability experiments on random linear codes",
    long_about = None,
    after_help = "Experiment CSV columns (fixed per run, never omitted):\n  \
                  experiment,trial,derived_seed,q,ktilde,n,k,l,t_size,s,m,quantity,value,method\n\
                  Values use fixed scientific notation with 12 significant digits.\n\
                  LISTDEC_THREADS caps worker threads (0 or unset = automatic)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form decoding radii and the rate expression
    Bounds(BoundsArgs),
    /// Brute-force maximum list size of a code at a radius
    Oracle(OracleArgs),
    /// RIP constant of an encoded subsampled linear-form matrix
    Rip(RipArgs),
    /// Per-trial reduction audit: encoding, RIP, distance, radius, oracle
    Chain(ChainArgs),
    /// Sample-complexity scan over a (ktilde, k) grid
    Scan(ScanArgs),
    /// Exact Rademacher-chaos moment of a coefficient grid
    Moment(MomentArgs),
    /// Sparsification-error curve in the grouped seminorm
    Covering(CoveringArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Alphabet size
    #[arg(long)]
    q: u16,
    /// Print J_q at this relative distance
    #[arg(long)]
    johnson: Option<f64>,
    /// Print the average-distance bound at this minimum L-subset average
    #[arg(long)]
    avg_dist: Option<f64>,
    /// Print the simplified near-extremal bound at this eps
    #[arg(long)]
    simplified: Option<f64>,
    /// Print the radius implied by order-L RIP with constant 1/2
    #[arg(long)]
    rip_to_ld: bool,
    /// List-size parameter L for the three bounds above
    #[arg(long)]
    l: Option<u64>,
    /// Print the rate expression at this eps (requires --gamma)
    #[arg(long)]
    rate_eps: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Path to a generator matrix ("q ktilde n" header, then rows)
    #[arg(long)]
    gen: PathBuf,
    /// Radius: a rational like 3/8, or a real (floored to a rational)
    #[arg(long)]
    rho: String,
    /// Sample this many centers instead of enumerating all of them
    #[arg(long)]
    sampled_budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RipArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ktilde: usize,
    /// Number of rows to subsample (with replacement)
    #[arg(long)]
    t_size: usize,
    /// RIP order
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random supports with greedy swaps instead of full enumeration
    #[arg(long)]
    sampled: bool,
    /// Supports per sampled evaluation
    #[arg(long, default_value_t = 12)]
    trials: usize,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    io: ConfigIo,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    ktilde: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    io: ConfigIo,
    #[arg(long)]
    q: Option<u64>,
    /// Comma-separated list, e.g. 8,10,12
    #[arg(long, value_delimiter = ',')]
    ktilde_values: Vec<u64>,
    /// Comma-separated list, e.g. 2,3
    #[arg(long, value_delimiter = ',')]
    k_values: Vec<u64>,
    #[arg(long)]
    delta_target: Option<f64>,
    #[arg(long)]
    confidence_trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct MomentArgs {
    /// Grid side length
    #[arg(long)]
    m: usize,
    /// Moment order
    #[arg(long)]
    s: usize,
    /// Use the all-ones coefficient grid
    #[arg(long)]
    all_ones: bool,
    /// Row-major comma-separated coefficients (m*m dyadic values)
    #[arg(long, value_delimiter = ',')]
    grid: Vec<f64>,
}

#[derive(Args)]
struct CoveringArgs {
    #[command(flatten)]
    io: ConfigIo,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    ktilde: Option<u64>,
    #[arg(long)]
    t_size: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    /// Comma-separated Maurey summand counts, e.g. 8,16,32
    #[arg(long, value_delimiter = ',')]
    m_values: Vec<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ConfigIo {
    /// JSON config file; inline flags override nothing when present
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (defaults to the config's `output`, else stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Emit JSON records instead of CSV
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn threads_from_env() -> listdec_core::Result<usize> {
    match std::env::var("LISTDEC_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("LISTDEC_THREADS = `{v}` is not an integer"))),
    }
}

fn run(cli: Cli) -> listdec_core::Result<()> {
    match cli.command {
        Command::Bounds(a) => run_bounds(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Rip(a) => run_rip(a),
        Command::Moment(a) => run_moment(a),
        Command::Chain(a) => {
            let cfg = build_config(&a.io, "reduction_chain", a.seed, |params| {
                set_u64(params, "q", a.q);
                set_u64(params, "ktilde", a.ktilde);
                set_u64(params, "n", a.n);
                set_u64(params, "l", a.l);
                set_u64(params, "trials", a.trials);
            })?;
            run_records(&cfg, &a.io)
        }
        Command::Scan(a) => {
            let cfg = build_config(&a.io, "rip_scan", a.seed, |params| {
                set_u64(params, "q", a.q);
                set_list(params, "ktilde_values", &a.ktilde_values);
                set_list(params, "k_values", &a.k_values);
                if let Some(d) = a.delta_target {
                    params.insert("delta_target".into(), serde_json::json!(d));
                }
                set_u64(params, "confidence_trials", a.confidence_trials);
            })?;
            run_records(&cfg, &a.io)
        }
        Command::Covering(a) => {
            let cfg = build_config(&a.io, "covering_curve", a.seed, |params| {
                set_u64(params, "q", a.q);
                set_u64(params, "ktilde", a.ktilde);
                set_u64(params, "t_size", a.t_size);
                set_u64(params, "k", a.k);
                set_u64(params, "s", a.s);
                set_list(params, "m_values", &a.m_values);
                set_u64(params, "trials", a.trials);
            })?;
            run_records(&cfg, &a.io)
        }
    }
}

type Params = std::collections::BTreeMap<String, serde_json::Value>;

fn set_u64(params: &mut Params, key: &str, v: Option<u64>) {
    if let Some(v) = v {
        params.insert(key.into(), serde_json::json!(v));
    }
}

fn set_list(params: &mut Params, key: &str, v: &[u64]) {
    if !v.is_empty() {
        params.insert(key.into(), serde_json::json!(v));
    }
}

fn build_config(
    io: &ConfigIo,
    experiment: &str,
    seed: Option<u64>,
    fill: impl FnOnce(&mut Params),
) -> listdec_core::Result<ExperimentConfig> {
    if let Some(path) = &io.config {
        let text = std::fs::read_to_string(path)?;
        return ExperimentConfig::from_json(&text);
    }
    let mut params = Params::new();
    fill(&mut params);
    Ok(ExperimentConfig {
        experiment: experiment.to_string(),
        params,
        seed: seed.ok_or_else(|| Error::InvalidParameter("--seed is required".into()))?,
        output: None,
    })
}

fn run_records(cfg: &ExperimentConfig, io: &ConfigIo) -> listdec_core::Result<()> {
    let opts = RunOptions { threads: threads_from_env()? };
    let started = Instant::now();
    let records = run_experiment(cfg, &opts)?;
    let elapsed_ms = started.elapsed().as_millis();
    let body = if io.json {
        records_to_json(&records)
    } else {
        records_to_csv(&records)
    };
    let summary = summarize(cfg, &records, elapsed_ms);
    let dest = io
        .output
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from));
    match dest {
        Some(path) => {
            std::fs::write(&path, body)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn summarize(cfg: &ExperimentConfig, records: &[ExperimentRecord], elapsed_ms: u128) -> String {
    let errors = records.iter().filter(|r| r.quantity == "error").count();
    format!(
        "{}: {} records, {} errors, seed {}, {} ms",
        cfg.experiment,
        records.len(),
        errors,
        cfg.seed,
        elapsed_ms
    )
}

fn require_l(l: Option<u64>, what: &str) -> listdec_core::Result<u64> {
    l.ok_or_else(|| Error::InvalidParameter(format!("--l is required with {what}")))
}

fn run_bounds(a: BoundsArgs) -> listdec_core::Result<()> {
    let mut printed = false;
    if let Some(x) = a.johnson {
        println!("{}", bounds::johnson_radius(a.q, x)?);
        printed = true;
    }
    if let Some(delta) = a.avg_dist {
        let b = bounds::avg_johnson_bound(a.q, delta, require_l(a.l, "--avg-dist")?)?;
        println!("radius {} list_size {}", b.radius, b.list_size);
        printed = true;
    }
    if let Some(eps) = a.simplified {
        let b = bounds::simplified_johnson(a.q, eps, require_l(a.l, "--simplified")?)?;
        println!("radius {} list_size {}", b.radius, b.list_size);
        printed = true;
    }
    if a.rip_to_ld {
        let b = bounds::rip_to_ld_radius(a.q, require_l(a.l, "--rip-to-ld")?)?;
        println!("radius {} list_size {}", b.radius, b.list_size);
        printed = true;
    }
    if let Some(eps) = a.rate_eps {
        let gamma = a
            .gamma
            .ok_or_else(|| Error::InvalidParameter("--gamma is required with --rate-eps".into()))?;
        println!("{}", bounds::main_rate_bound(a.q, eps, gamma)?);
        printed = true;
    }
    if !printed {
        return Err(Error::InvalidParameter(
            "nothing to compute; pass --johnson, --avg-dist, --simplified, --rip-to-ld, or --rate-eps"
                .into(),
        ));
    }
    Ok(())
}

fn parse_rho(text: &str) -> listdec_core::Result<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
        let den: u64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
        if den == 0 {
            return Err(Error::Parse("rational denominator is zero".into()));
        }
        Ok(Rational::new(num, den))
    } else {
        let x: f64 = text
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radius `{text}`")))?;
        Ok(real_to_rational_floor(x))
    }
}

fn run_oracle(a: OracleArgs) -> listdec_core::Result<()> {
    let text = std::fs::read_to_string(&a.gen)?;
    let gen = GeneratorMatrix::parse(&text)?;
    let code = codes::enumerate_codewords(gen)?;
    let rho = parse_rho(&a.rho)?;
    let mode = match a.sampled_budget {
        Some(budget) => OracleMode::Sampled { budget, seed: a.seed },
        None => OracleMode::Exhaustive,
    };
    let r = list_size_at_radius(&code, rho, mode)?;
    let tag = match r.mode {
        OracleMode::Exhaustive => "exact",
        OracleMode::Sampled { .. } => "sampled lower bound",
    };
    println!(
        "max_list_size {} ({tag}, {} centers) witness {:?}",
        r.max_count, r.centers_examined, r.witness_center
    );
    Ok(())
}

fn run_rip(a: RipArgs) -> listdec_core::Result<()> {
    let (p, m) = codes::factor_prime_power(a.q)?;
    let spec = listdec_core::FieldSpec::new(p, m)?;
    let rows = sample_rows(&spec, a.ktilde, a.t_size, a.seed)?;
    let mat = phi_lin_sub(&spec, a.ktilde, &rows.indices)?;
    let normalizer = ((spec.q() as f64 - 1.0) * a.t_size as f64).sqrt();
    let report: RipReport = if a.sampled {
        rip_constant_sampled(&mat, a.k, normalizer, a.trials, a.seed.wrapping_add(1))?
    } else {
        rip_constant_exact(&mat, a.k, normalizer)?
    };
    let tag = match report.method {
        listdec_core::RipMethod::Exact => "exact",
        listdec_core::RipMethod::Sampled => "sampled lower bound",
    };
    println!(
        "delta {} ({tag}, {} supports) witness {:?}",
        report.delta, report.supports_examined, report.witness_support
    );
    Ok(())
}

fn run_moment(a: MomentArgs) -> listdec_core::Result<()> {
    let grid: Vec<f64> = if a.all_ones {
        vec![1.0; a.m * a.m]
    } else if !a.grid.is_empty() {
        a.grid.clone()
    } else {
        return Err(Error::InvalidParameter(
            "pass --all-ones or --grid with m*m coefficients".into(),
        ));
    };
    let moment = chaining::chaos_moment_exact(&grid, a.m, a.s)?;
    let coeff_bound = grid.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let bound = (4.0 * coeff_bound * a.m as f64 * a.s as f64).powi(a.s as i32);
    println!("{moment}");
    println!("bound {bound}");
    Ok(())
}
