//! Command-line front door: listing, integrating, aligning,
//! characterizing, dataset building, and the three benchmark suites.
//! Output is plot-ready CSV/JSON; exit codes are 0 (success),
//! 1 (validation error), 2 (runtime failure).

use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use chaosbench::registry::{self, SystemFilter};
use chaosbench::{align, characterize, datagen, forecast, importance, inference, integrate};
use chaosbench::{ChaosError, Result};

/// Environment variable naming the default dataset directory.
const DATA_DIR_ENV: &str = "CHAOSBENCH_DATA_DIR";

#[derive(Parser)]
#[command(
    name = "chaosbench",
    version,
    about = "Chaotic-systems benchmark: integration, characterization, datasets, and baselines"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Master random seed; every command is bit-reproducible under it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker-pool size for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Emit machine-readable JSON on stdout instead of a human table.
    #[arg(long, global = true)]
    json: bool,
    /// Output path (directory for `dataset`/`bench`, file for `integrate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List registered systems.
    List {
        /// Filter: all, chaotic, nonchaotic, hamiltonian, autonomous,
        /// nonautonomous.
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Show one system's metadata and annotations.
    Info { system: String },
    /// Integrate a system and write the trajectory as CSV.
    Integrate {
        system: String,
        /// Trajectory length in dominant periods.
        #[arg(long, default_value_t = 12)]
        periods: usize,
        /// Output sampling rate, points per period.
        #[arg(long, default_value_t = 100)]
        granularity: usize,
        /// Additive noise amplitude (fraction of the attractor std).
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Skip the transient-settling phase and start at the registry
        /// initial condition.
        #[arg(long)]
        no_settle: bool,
    },
    /// Measure a system's timescales from a surrogate-tested spectrum.
    Align {
        system: String,
        /// Oversampling factor relating dt to the highest significant
        /// frequency.
        #[arg(long, default_value_t = align::DEFAULT_OVERSAMPLE_FACTOR)]
        oversample: usize,
    },
    /// Estimate Lyapunov spectra and derived annotations.
    Characterize {
        /// System name, or "all".
        system: String,
        #[arg(long, default_value_t = 20)]
        replicates: usize,
        #[arg(long, default_value_t = 5)]
        periods: usize,
        /// Convergence tolerance on the residual of the near-zero exponent.
        #[arg(long, default_value_t = characterize::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Build the standardized dataset bundles and manifest.
    Dataset {
        /// System name, or "all".
        #[arg(default_value = "all")]
        system: String,
    },
    /// Run a benchmark suite.
    Bench {
        #[command(subcommand)]
        suite: BenchSuite,
    },
}

#[derive(Subcommand)]
enum BenchSuite {
    /// Baseline forecasters vs chaos annotations (Spearman matrix).
    Forecast {
        /// Sampling rates to test, points per period.
        #[arg(long, value_delimiter = ',', default_values_t = vec![15usize, 100])]
        granularities: Vec<usize>,
        /// Comma-separated model list (default: all five baselines).
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<String>>,
    },
    /// STLSQ sparse recovery over the polynomial systems.
    Sindy {
        #[arg(long, default_value_t = inference::DEFAULT_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = inference::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = inference::DEFAULT_RIDGE)]
        ridge: f64,
    },
    /// Importance-sampled training vs full and random-subset baselines.
    Importance {
        /// Comma-separated training modes.
        #[arg(
            long,
            value_delimiter = ',',
            default_values_t = vec![
                "full".to_string(),
                "random_subset".to_string(),
                "importance_weighted".to_string(),
            ]
        )]
        modes: Vec<String>,
        #[arg(long, default_value_t = 150)]
        tau: usize,
        /// Epochs per meta-epoch in the subset modes.
        #[arg(long, default_value_t = 30)]
        b: usize,
        /// Meta-epochs in the subset modes.
        #[arg(long, default_value_t = 5)]
        nu: usize,
        /// Full-training epoch budget.
        #[arg(long, default_value_t = 400)]
        big_b: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be >= 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: failed to size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Validation problems (bad names, bad arguments) exit 1; numerical and
/// I/O failures exit 2.
fn exit_code_for(e: &ChaosError) -> u8 {
    match e {
        ChaosError::UnknownSystem { .. }
        | ChaosError::InvalidArgument(_)
        | ChaosError::InvalidPlan(_)
        | ChaosError::InvalidHorizon(_)
        | ChaosError::DimensionMismatch { .. } => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::List { filter } => cmd_list(&cli.global, filter),
        Command::Info { system } => cmd_info(&cli.global, system),
        Command::Integrate {
            system,
            periods,
            granularity,
            noise,
            no_settle,
        } => cmd_integrate(&cli.global, system, *periods, *granularity, *noise, *no_settle),
        Command::Align { system, oversample } => cmd_align(&cli.global, system, *oversample),
        Command::Characterize {
            system,
            replicates,
            periods,
            tol,
        } => cmd_characterize(&cli.global, system, *replicates, *periods, *tol),
        Command::Dataset { system } => cmd_dataset(&cli.global, system),
        Command::Bench { suite } => match suite {
            BenchSuite::Forecast {
                granularities,
                models,
            } => cmd_bench_forecast(&cli.global, granularities, models.as_deref()),
            BenchSuite::Sindy {
                degree,
                threshold,
                ridge,
            } => cmd_bench_sindy(&cli.global, *degree, *threshold, *ridge),
            BenchSuite::Importance {
                modes,
                tau,
                b,
                nu,
                big_b,
            } => cmd_bench_importance(&cli.global, modes, *tau, *b, *nu, *big_b),
        },
    }
}

fn parse_filter(s: &str) -> Result<SystemFilter> {
    match s {
        "all" => Ok(SystemFilter::All),
        "chaotic" => Ok(SystemFilter::Chaotic),
        "nonchaotic" => Ok(SystemFilter::Nonchaotic),
        "hamiltonian" => Ok(SystemFilter::Hamiltonian),
        "autonomous" => Ok(SystemFilter::Autonomous),
        "nonautonomous" => Ok(SystemFilter::Nonautonomous),
        other => Err(ChaosError::InvalidArgument(format!(
            "unknown filter '{other}'"
        ))),
    }
}

/// The dataset directory: --out if given, else $CHAOSBENCH_DATA_DIR, else
/// ./chaosbench-data.
fn data_dir(global: &GlobalArgs) -> PathBuf {
    global
        .out
        .clone()
        .or_else(|| std::env::var_os(DATA_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("chaosbench-data"))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_output(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn cmd_list(global: &GlobalArgs, filter: &str) -> Result<()> {
    let filter = parse_filter(filter)?;
    let names = registry::list_systems(filter);
    if global.json {
        return print_json(&names);
    }
    println!("{:<16} {:>3}  {:>9}  {:>8}  flags", "system", "dim", "dt", "period");
    for name in names {
        let spec = registry::lookup(name)?;
        let mut flags = Vec::new();
        if spec.flags.chaotic {
            flags.push("chaotic");
        }
        if spec.flags.hamiltonian {
            flags.push("hamiltonian");
        }
        if spec.flags.nonautonomous {
            flags.push("nonautonomous");
        }
        if spec.flags.transcendental {
            flags.push("transcendental");
        }
        println!(
            "{:<16} {:>3}  {:>9.4}  {:>8.3}  {}",
            spec.name,
            spec.dimension,
            spec.dt,
            spec.period,
            flags.join(",")
        );
    }
    Ok(())
}

fn cmd_info(global: &GlobalArgs, system: &str) -> Result<()> {
    let spec = registry::lookup(system)?;
    let doc = datagen::export_metadata(spec)?;
    if global.json {
        return print_json(&doc);
    }
    println!("{} ({}D)  {}", doc.name, doc.dimension, doc.description);
    println!("  citation: {}", doc.citation);
    println!("  dt = {}, period = {}", doc.dt, doc.period);
    println!("  initial condition: {:?}", doc.initial_condition);
    println!("  parameters: {:?}", doc.parameters);
    println!(
        "  flags: chaotic={} hamiltonian={} nonautonomous={} bounded={} transcendental={}",
        doc.chaotic, doc.hamiltonian, doc.nonautonomous, doc.bounded, doc.transcendental
    );
    println!("  lyapunov spectrum: {:?}", doc.lyapunov_spectrum);
    println!("  largest lyapunov: {:.6}", doc.largest_lyapunov);
    println!("  kaplan-yorke dimension: {:.4}", doc.kaplan_yorke_dimension);
    println!("  correlation dimension: {:.4}", doc.correlation_dimension);
    println!("  multiscale entropy: {:.4}", doc.multiscale_entropy);
    println!("  pesin entropy: {:.6}", doc.pesin_entropy);
    Ok(())
}

fn cmd_integrate(
    global: &GlobalArgs,
    system: &str,
    periods: usize,
    granularity: usize,
    noise: f64,
    no_settle: bool,
) -> Result<()> {
    if periods == 0 || granularity == 0 {
        return Err(ChaosError::InvalidArgument(
            "periods and granularity must be >= 1".into(),
        ));
    }
    let spec = registry::lookup(system)?;
    let ic = if no_settle {
        spec.default_initial_condition.clone()
    } else {
        integrate::settle_on_attractor(
            spec,
            &spec.default_initial_condition,
            integrate::DEFAULT_TRANSIENT_PERIODS,
        )?
    };
    // Integrate at a fine base rate and decimate so fast systems stay
    // inside the RK4 stability region at coarse output rates.
    let base = granularity.max(300);
    let dt = spec.period / base as f64;
    let n = periods * base;
    let fine = if noise > 0.0 {
        integrate::integrate_stochastic(spec, &ic, dt, n, noise, global.seed)?
    } else {
        integrate::integrate_fixed(spec, &ic, dt, n)?
    };
    let traj = integrate::resample(&fine, granularity as f64, spec.period)?;
    let mut buf = Vec::new();
    traj.write_csv(&mut buf)?;
    match &global.out {
        Some(path) => write_output(path, &buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct AlignReport {
    system: String,
    nominal_dt: f64,
    nominal_period: f64,
    measured_dt: f64,
    measured_period: f64,
    oversample_factor: usize,
}

fn cmd_align(global: &GlobalArgs, system: &str, oversample: usize) -> Result<()> {
    let spec = registry::lookup(system)?;
    let (dt, period) = align::select_timescales(spec, oversample, global.seed)?;
    let report = AlignReport {
        system: spec.name.to_string(),
        nominal_dt: spec.dt,
        nominal_period: spec.period,
        measured_dt: dt,
        measured_period: period,
        oversample_factor: oversample,
    };
    if global.json {
        return print_json(&report);
    }
    println!(
        "{}: measured dt = {:.6} (nominal {:.6}), measured period = {:.4} (nominal {:.4})",
        report.system, report.measured_dt, report.nominal_dt, report.measured_period,
        report.nominal_period
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct CharacterizeRow {
    system: String,
    largest_lyapunov: f64,
    lyapunov_spectrum: Vec<f64>,
    kaplan_yorke_dimension: f64,
    pesin_entropy: f64,
    correlation_dimension: f64,
    multiscale_entropy: f64,
}

fn cmd_characterize(
    global: &GlobalArgs,
    system: &str,
    replicates: usize,
    periods: usize,
    tol: f64,
) -> Result<()> {
    let specs: Vec<&registry::SystemSpec> = if system == "all" {
        registry::all_systems().collect()
    } else {
        vec![registry::lookup(system)?]
    };
    let mut rows = Vec::new();
    for spec in specs {
        let ann = characterize::annotate(spec, periods, replicates, global.seed, tol)?;
        rows.push(CharacterizeRow {
            system: spec.name.to_string(),
            largest_lyapunov: ann.largest_lyapunov,
            lyapunov_spectrum: ann.lyapunov_spectrum.clone(),
            kaplan_yorke_dimension: ann.kaplan_yorke_dimension,
            pesin_entropy: ann.pesin_entropy,
            correlation_dimension: ann.correlation_dimension,
            multiscale_entropy: ann.multiscale_entropy,
        });
    }
    if global.json {
        return print_json(&rows);
    }
    println!(
        "{:<16} {:>10} {:>8} {:>8} {:>9} {:>8}",
        "system", "lle", "d_ky", "h_pesin", "d_corr", "mse"
    );
    for r in &rows {
        println!(
            "{:<16} {:>10.6} {:>8.4} {:>8.4} {:>9.4} {:>8.4}",
            r.system,
            r.largest_lyapunov,
            r.kaplan_yorke_dimension,
            r.pesin_entropy,
            r.correlation_dimension,
            r.multiscale_entropy
        );
    }
    Ok(())
}

fn cmd_dataset(global: &GlobalArgs, system: &str) -> Result<()> {
    let dir = data_dir(global);
    fs::create_dir_all(&dir)?;
    // Fail before any work if the target is unwritable.
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)?;
    if system == "all" {
        let (manifest, statuses) = datagen::build_all_bundles(&dir, global.seed)?;
        if global.json {
            print_json(&statuses)?;
        } else {
            for s in &statuses {
                match &s.error {
                    None => println!("{:<16} ok ({} files)", s.system, manifest.systems[&s.system].files.len()),
                    Some(e) => println!("{:<16} FAILED: {e}", s.system),
                }
            }
            println!("manifest: {}", dir.join(datagen::MANIFEST_FILE).display());
        }
        if statuses.iter().any(|s| !s.ok) {
            return Err(ChaosError::InvalidArgument(
                "one or more bundles failed to build".into(),
            ));
        }
        Ok(())
    } else {
        let spec = registry::lookup(system)?;
        let entry = datagen::build_bundle(spec, &dir, global.seed)?;
        // Merge into (or create) the manifest so loaders can verify.
        let mut manifest = datagen::read_manifest(&dir).unwrap_or(datagen::Manifest {
            registry_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: global.seed,
            systems: Default::default(),
        });
        manifest.systems.insert(spec.name.to_string(), entry.clone());
        fs::write(
            dir.join(datagen::MANIFEST_FILE),
            serde_json::to_vec_pretty(&manifest)?,
        )?;
        if global.json {
            print_json(&entry)?;
        } else {
            println!("{:<16} ok ({} files)", spec.name, entry.files.len());
        }
        Ok(())
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_bench_forecast(
    global: &GlobalArgs,
    granularities: &[usize],
    models: Option<&[String]>,
) -> Result<()> {
    let systems: Vec<String> = registry::list_systems(SystemFilter::All)
        .into_iter()
        .map(String::from)
        .collect();
    let models: Vec<forecast::ForecasterKind> = match models {
        Some(names) => names
            .iter()
            .map(|s| forecast::ForecasterKind::from_str(s))
            .collect::<Result<_>>()?,
        None => forecast::ALL_KINDS.to_vec(),
    };
    let report = forecast::run_benchmark(&systems, granularities, &models, global.seed)?;

    let mut csv = String::from(
        "system,granularity,model,timescale,mse,rmse,mae,mape,smape,marre,cv_abs,one_minus_r2,mase\n",
    );
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_escape(&r.system),
            r.granularity,
            r.model,
            r.hyper.timescale,
            r.suite.mse,
            r.suite.rmse,
            r.suite.mae,
            r.suite.mape,
            r.suite.smape,
            r.suite.marre,
            r.suite.cv_abs,
            r.suite.one_minus_r2,
            r.suite.mase,
        ));
    }
    if let Some(dir) = &global.out {
        fs::create_dir_all(dir)?;
        write_output(&dir.join("forecast_rows.csv"), csv.as_bytes())?;
        write_output(
            &dir.join("forecast_summary.json"),
            serde_json::to_string_pretty(&report)?.as_bytes(),
        )?;
    }
    if global.json {
        return print_json(&report);
    }
    if global.out.is_none() {
        print!("{csv}");
    }
    println!("# Spearman (best per-system metric vs annotation):");
    for (metric, row) in &report.correlations {
        for (ann, rho) in row {
            println!("# {metric} vs {ann}: {rho:+.3}");
        }
    }
    for (ctx, err) in &report.failures {
        eprintln!("warning: {ctx}: {err}");
    }
    Ok(())
}

fn cmd_bench_sindy(global: &GlobalArgs, degree: usize, threshold: f64, ridge: f64) -> Result<()> {
    let report = inference::run_sindy_benchmark(degree, threshold, ridge)?;
    let mut csv = String::from("system,train_smape,test_smape,nonzero_terms,library_size\n");
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_escape(&r.system),
            r.train_smape,
            r.test_smape,
            r.nonzero_terms,
            r.library_size
        ));
    }
    if let Some(dir) = &global.out {
        fs::create_dir_all(dir)?;
        write_output(&dir.join("sindy_rows.csv"), csv.as_bytes())?;
        write_output(
            &dir.join("sindy_summary.json"),
            serde_json::to_string_pretty(&report)?.as_bytes(),
        )?;
    }
    if global.json {
        return print_json(&report);
    }
    if global.out.is_none() {
        print!("{csv}");
    }
    if let Some(rho) = report.chaoticity_correlation {
        println!("# Spearman (test sMAPE vs largest Lyapunov exponent): {rho:+.3}");
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct ImportanceReport {
    rows: Vec<importance::ImportanceOutcome>,
    failures: Vec<(String, String)>,
}

fn cmd_bench_importance(
    global: &GlobalArgs,
    modes: &[String],
    tau: usize,
    b: usize,
    nu: usize,
    big_b: usize,
) -> Result<()> {
    let modes: Vec<importance::TrainingMode> = modes
        .iter()
        .map(|s| importance::TrainingMode::from_str(s))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for spec in registry::all_systems() {
        for &mode in &modes {
            let plan = importance::ImportancePlan {
                tau,
                b,
                nu,
                big_b,
                mode,
                seed: global.seed,
                ..Default::default()
            };
            match importance::importance_train(spec, &plan) {
                Ok(outcome) => rows.push(outcome),
                Err(e @ ChaosError::InvalidPlan(_)) => return Err(e),
                Err(e) => failures.push((format!("{}/{mode}", spec.name), e.to_string())),
            }
        }
    }
    let report = ImportanceReport { rows, failures };
    let mut csv = String::from("system,mode,final_smape,runtime_seconds,epochs_trained\n");
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_escape(&r.system),
            r.mode,
            r.final_smape,
            r.runtime_seconds,
            r.epochs_trained
        ));
    }
    if let Some(dir) = &global.out {
        fs::create_dir_all(dir)?;
        write_output(&dir.join("importance_rows.csv"), csv.as_bytes())?;
        write_output(
            &dir.join("importance_summary.json"),
            serde_json::to_string_pretty(&report)?.as_bytes(),
        )?;
    }
    if global.json {
        return print_json(&report);
    }
    if global.out.is_none() {
        print!("{csv}");
    }
    for (ctx, err) in &report.failures {
        eprintln!("warning: {ctx}: {err}");
    }
    Ok(())
}
