//! Command-line front end: config-driven runs, the invariant suite, the
//! RK4 benchmark and figure sweeps. All diagnostics go to stderr, data to
//! files; exit codes are 0 (ok), 1 (failed checks), 2 (config), 3
//! (numeric failure).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdot_cavity::analysis::first_envelope_peak;
use qdot_cavity::bench::run_benchmark;
use qdot_cavity::config::RunConfig;
use qdot_cavity::error::Error;
use qdot_cavity::output::{resolve_output_path, write_trace_file};
use qdot_cavity::propagator::PropagatorConfig;
use qdot_cavity::verify::{all_passed, run_verification, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "qdot-cavity",
    version,
    about = "Driven two-exciton cavity entanglement simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one evolution from a config file; writes the CSV trace and
    /// prints the first-envelope peak report.
    Run {
        /// Flat key-value configuration file.
        config: PathBuf,
    },
    /// Execute the invariant suite and print per-check status.
    Verify {
        /// Reduced subset (same checks, smaller sizes and horizons).
        #[arg(long)]
        quick: bool,
        /// Seed for randomized checks.
        #[arg(long, default_value_t = 20240817)]
        seed: u64,
        /// Fault-injection self test: flips a sign in the spin-flip
        /// transform, which must make the concurrence checks fail.
        #[arg(long, hide = true)]
        fault_spin_flip: bool,
    },
    /// Time the Laguerre stepper against RK4 at matched accuracy.
    Benchmark {
        /// Config file providing model and drive (t_end is fixed at 100).
        config: PathBuf,
    },
    /// Run every *.cfg in a directory concurrently, one CSV each.
    Sweep {
        /// Directory of config files.
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Verify {
            quick,
            seed,
            fault_spin_flip,
        } => cmd_verify(quick, seed, fault_spin_flip),
        Command::Benchmark { config } => cmd_benchmark(&config),
        Command::Sweep { dir } => cmd_sweep(&dir),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn describe_drive(cfg: &RunConfig) -> String {
    match cfg.drive.period() {
        Some(p) => format!(
            "{} (A = {}, P = {})",
            cfg.drive.kind_name(),
            cfg.drive.amplitude(),
            p
        ),
        None => "none".to_string(),
    }
}

fn run_one(path: &Path) -> Result<String, Error> {
    let cfg = RunConfig::from_file(path)?;
    eprintln!("[{}] calibrating and evolving...", path.display());
    let (trace, prop) = cfg.run()?;
    let out = resolve_output_path(&cfg.output);
    write_trace_file(&trace, cfg.entropy_base, &out)?;
    eprintln!(
        "[{}] wrote {} samples to {}",
        path.display(),
        trace.samples().len(),
        out.display()
    );

    let mut text = String::new();
    text.push_str("run:\n");
    text.push_str(&format!("  config          = {}\n", path.display()));
    text.push_str(&format!("  drive           = {}\n", describe_drive(&cfg)));
    text.push_str(&format!("  initial         = |{}>\n", cfg.initial.label()));
    text.push_str(&format!("  stepper         = {}\n", cfg.stepper.name()));
    text.push_str(&format!("  n_fock          = {}\n", cfg.model.n_fock));
    text.push_str(&format!("  t_end           = {}\n", cfg.t_end));
    text.push_str(&format!("  dt              = {}\n", prop.dt));
    text.push_str(&format!("  samples         = {}\n", trace.samples().len()));
    text.push_str(&format!("  csv             = {}\n", out.display()));
    match first_envelope_peak(&trace, cfg.threshold) {
        Some(report) => text.push_str(&format!("{report}\n")),
        None => text.push_str(&format!(
            "peak: threshold {} never reached (max C = {:.6})\n",
            cfg.threshold,
            trace.max_concurrence()
        )),
    }
    Ok(text)
}

fn cmd_run(path: &Path) -> Result<ExitCode, Error> {
    let text = run_one(path)?;
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(quick: bool, seed: u64, fault_spin_flip: bool) -> Result<ExitCode, Error> {
    let opts = VerifyOptions {
        quick,
        seed,
        fault_spin_flip,
    };
    let outcomes = run_verification(&opts);
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {:<32} ({:6.2} s)  {}",
            o.name, o.seconds, o.detail
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} checks passed", outcomes.len());
    if all_passed(&outcomes) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_benchmark(path: &Path) -> Result<ExitCode, Error> {
    let cfg = RunConfig::from_file(path)?;
    let base = PropagatorConfig {
        k_max: cfg.k_max,
        alpha: cfg.alpha,
        sampling: cfg.sampling,
        ..PropagatorConfig::default()
    };
    eprintln!("benchmarking laguerre vs rk4 at matched accuracy...");
    let report = run_benchmark(&cfg.model, &cfg.drive, &base, cfg.initial)?;
    println!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(dir: &Path) -> Result<ExitCode, Error> {
    let mut configs: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "cfg"))
        .collect();
    configs.sort();
    if configs.is_empty() {
        return Err(Error::Config {
            message: format!("no .cfg files in {}", dir.display()),
        });
    }
    eprintln!("sweeping {} configs from {}", configs.len(), dir.display());

    let handles: Vec<_> = configs
        .into_iter()
        .map(|path| std::thread::spawn(move || (path.clone(), run_one(&path))))
        .collect();

    let mut worst: Option<Error> = None;
    for handle in handles {
        let (path, result) = handle.join().expect("sweep worker panicked");
        match result {
            Ok(text) => print!("{text}"),
            Err(e) => {
                eprintln!("[{}] failed: {e}", path.display());
                worst = Some(worst.map_or(e, |w| w));
            }
        }
    }
    match worst {
        None => Ok(ExitCode::SUCCESS),
        Some(e) => Ok(ExitCode::from(e.exit_code() as u8)),
    }
}
