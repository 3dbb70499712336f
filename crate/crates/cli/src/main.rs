use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use urp_core::dynamics::Method;
use urp_core::experiments::{check_acceptance, list_experiments, run_experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "urp", version, about = "Run and check unconventional Rydberg pumping experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegratorArg {
    Fixed,
    Adaptive,
}

#[derive(Subcommand)]
enum Command {
    /// List experiments, their defaults and variants.
    List,
    /// Run one experiment (or variant) and write CSV files plus metadata.json.
    Run {
        /// Experiment or variant name, e.g. `fig4` or `fig10-exp`.
        experiment: Option<String>,
        /// Override a parameter; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output root; files go to `<out>/<experiment>/`.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long, value_enum)]
        integrator: Option<IntegratorArg>,
        #[arg(long)]
        max_step: Option<f64>,
        /// Record every n-th sample only.
        #[arg(long)]
        record_stride: Option<usize>,
        /// Smaller detuning for the QEC experiments; not comparable with the published values.
        #[arg(long)]
        reduced: bool,
        /// JSON configuration file; command-line flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate the acceptance criteria against a results directory.
    Check {
        #[arg(default_value = "results")]
        dir: PathBuf,
    },
}

fn list() {
    for info in list_experiments() {
        let slow = if info.long_running { " [long-running]" } else { "" };
        println!("{:<18} {:<8} {}{slow}", info.name, info.figure, info.description);
        let defaults: Vec<String> = info.defaults.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("    defaults: {}", defaults.join(" "));
        if !info.assumed.is_empty() {
            println!("    assumed defaults: {}", info.assumed.join(", "));
        }
        for v in &info.variants {
            let o: Vec<String> = v.overrides.iter().map(|(k, x)| format!("{k}={x}")).collect();
            println!("  variant {:<10} {} ({})", v.name, v.description, o.join(" "));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    experiment: Option<String>,
    set: Vec<String>,
    out: PathBuf,
    integrator: Option<IntegratorArg>,
    max_step: Option<f64>,
    record_stride: Option<usize>,
    reduced: bool,
    config: Option<PathBuf>,
) -> Result<()> {
    let mut cfg = match (&config, experiment) {
        (Some(path), name) => {
            let mut cfg =
                ExperimentConfig::from_json_file(path).with_context(|| format!("reading {}", path.display()))?;
            if let Some(name) = name {
                cfg.experiment = name;
            }
            cfg
        }
        (None, Some(name)) => ExperimentConfig::new(name),
        (None, None) => bail!("give an experiment name or --config"),
    };
    for s in &set {
        cfg.set(s)?;
    }
    if let Some(m) = integrator {
        cfg.integrator.method = Some(match m {
            IntegratorArg::Fixed => Method::Fixed,
            IntegratorArg::Adaptive => Method::Adaptive,
        });
    }
    if max_step.is_some() {
        cfg.integrator.max_step = max_step;
    }
    if record_stride.is_some() {
        cfg.record_stride = record_stride;
    }
    cfg.reduced |= reduced;
    if config.is_none() || cfg.out_dir.is_none() {
        cfg.out_dir = Some(out);
    }
    let start = std::time::Instant::now();
    let result = run_experiment(&cfg)?;
    log::info!("{} finished in {:.1?}", cfg.experiment, start.elapsed());
    println!("{}", serde_json::to_string_pretty(&result.summary)?);
    if let Some(dir) = &result.output_dir {
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::List => {
            list();
            Ok(true)
        }
        Command::Run { experiment, set, out, integrator, max_step, record_stride, reduced, config } => {
            run(experiment, set, out, integrator, max_step, record_stride, reduced, config).map(|_| true)
        }
        Command::Check { dir } => check_acceptance(&dir).map_err(Into::into).map(|report| {
            println!("{report}");
            report.passed()
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
