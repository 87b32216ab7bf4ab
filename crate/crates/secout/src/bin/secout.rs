//! `secout eval | sweep | verify`
//!
//! Exit codes: 0 success, 1 bad arguments or scenario file, 2 a Monte Carlo
//! check failed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use secout::config::{ScenarioConfig, SweepField};
use secout::oracle::verify;
use secout::sweep::{eval_table, grid, sweep_csv};
use secout::AppError;
use secout_core::{McConfig, Metric};

#[derive(Parser)]
#[command(name = "secout", version, about = "Secrecy outage metrics of fading wiretap links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every metric for one scenario.
    Eval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        mc: McToggle,
    },
    /// Write a CSV sweeping one scenario field over a grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        mc: McToggle,
        /// desired.mean_snr_db, secrecy.rate_bits, eavesdropper.mean_snr_db or eavesdropper.count
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// CSV destination (standard output when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the analytic metrics against Monte Carlo.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Allowed deviation in standard errors
        #[arg(long, default_value_t = 4.0)]
        sigma: f64,
        /// Machine-readable report destination
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file
    #[arg(long)]
    config: PathBuf,
    /// Monte Carlo sample count (overrides [mc] samples)
    #[arg(long)]
    samples: Option<u64>,
    /// Monte Carlo seed (overrides [mc] seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct McToggle {
    /// Add Monte Carlo estimates
    #[arg(long, overrides_with = "no_mc")]
    mc: bool,
    /// Analytic values only
    #[arg(long, overrides_with = "mc")]
    no_mc: bool,
}

impl Common {
    fn load(&self) -> Result<(ScenarioConfig, McConfig), AppError> {
        let cfg = ScenarioConfig::load(&self.config)?;
        let mut mc = cfg.mc;
        mc.samples = self.samples.unwrap_or(mc.samples);
        mc.seed = self.seed.unwrap_or(mc.seed);
        mc.workers = self.workers.unwrap_or(mc.workers);
        mc.validate()?;
        Ok((cfg, mc))
    }
}

impl McToggle {
    fn enabled(&self, file_default: bool) -> bool {
        if self.mc {
            true
        } else if self.no_mc {
            false
        } else {
            file_default
        }
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), AppError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| AppError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Eval { common, mc } => {
            let (cfg, mc_cfg) = common.load()?;
            let sim = mc.enabled(cfg.mc_enabled).then_some(&mc_cfg);
            print!("{}", eval_table(&cfg, sim)?);
        }
        Command::Sweep { common, mc, field, from, to, step, out } => {
            let (cfg, mc_cfg) = common.load()?;
            let field: SweepField = field.parse()?;
            let sim = mc.enabled(cfg.mc_enabled).then_some(&mc_cfg);
            let csv = sweep_csv(&cfg, field, &grid(from, to, step)?, sim)?;
            write_out(&out, &csv)?;
        }
        Command::Verify { common, sigma, out } => {
            let (cfg, mc_cfg) = common.load()?;
            if !(sigma > 0.0) {
                return Err(AppError::Usage("--sigma must be positive".into()));
            }
            let report = verify(&cfg.scenario()?, &Metric::ALL, &mc_cfg, sigma)?;
            println!("{report}");
            for r in report.inconclusive() {
                eprintln!(
                    "warning: {} is below the resolution of {} samples; not judged",
                    r.metric, mc_cfg.samples
                );
            }
            if let Some(path) = &out {
                write_out(&Some(path.clone()), &report.to_csv())?;
            }
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
