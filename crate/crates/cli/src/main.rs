use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vatoms::dynamics::DEFAULT_DT;
use vatoms_cli::*;

#[derive(Debug, Parser)]
#[command(
    name = "vatoms",
    version,
    about = "Dissipative dynamics and entanglement of two V-type atoms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one scenario and export the trajectory
    Evolve {
        /// Initial state, e.g. psi0, horodecki:alpha=3.6, diag:p1,...,p9, basis:3
        #[arg(long)]
        state: Option<String>,
        /// Coupling model: independent, ideal[:omega=5], geometric:R=0.2
        #[arg(long)]
        model: Option<String>,
        /// End time in units of 1/gamma
        #[arg(long)]
        tend: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Integration steps between stored samples
        #[arg(long)]
        sample_every: Option<usize>,
        /// Comma-separated subset of csv, states, plot
        #[arg(long)]
        outputs: Option<String>,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recorded only; times are always in units of 1/gamma
        #[arg(long)]
        gamma: Option<f64>,
        /// key = value file; flags take precedence
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Regenerate one of the delayed-birth figures (CSV + SVG)
    Figure {
        which: FigureArg,
        #[arg(long, default_value_t = 3.6)]
        alpha: f64,
        /// Separation in units of the wavelength
        #[arg(long = "r", default_value_t = 0.2)]
        r_over_lambda: f64,
        #[arg(long, default_value_t = 3.0)]
        tend: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Asymptotic state reached at vanishing separation
    Asymptote {
        #[arg(long)]
        state: String,
    },
    /// tN and tD over a grid of alpha and R/lambda
    Scan {
        /// start:end:count or a single value
        #[arg(long, default_value = "3.6")]
        alpha: String,
        /// start:end:count or a single value
        #[arg(long = "r", default_value = "0.2")]
        r_over_lambda: String,
        #[arg(long, default_value_t = 3.0)]
        tend: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// CSV path; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the coupling coefficients of a model
    Couplings {
        #[arg(long)]
        model: String,
    },
    /// Redraw an SVG chart from a CSV file
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated column names
        #[arg(long)]
        series: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig1 => Figure::Fig1,
            FigureArg::Fig2 => Figure::Fig2,
            FigureArg::Fig3 => Figure::Fig3,
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match cmd {
        Command::Evolve {
            state,
            model,
            tend,
            dt,
            sample_every,
            outputs,
            out,
            gamma,
            config,
        } => {
            let file = match config {
                Some(p) => {
                    let text = fs::read_to_string(&p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                    PartialConfig::from_text(&text)?
                }
                None => PartialConfig::default(),
            };
            let flags = PartialConfig {
                state,
                model,
                t_end: tend,
                dt,
                sample_every,
                outputs,
                out,
                gamma,
            };
            let cfg = ScenarioConfig::resolve(flags.over(file))?;
            cmd_evolve(&cfg, &mut stdout)?;
        }
        Command::Figure {
            which,
            alpha,
            r_over_lambda,
            tend,
            dt,
            out,
        } => {
            let spec = FigureSpec {
                which: which.into(),
                alpha,
                r_over_lambda,
                t_end: tend,
                dt,
                out_dir: out,
            };
            cmd_figure(&spec, &mut stdout)?;
        }
        Command::Asymptote { state } => cmd_asymptote(&state, &mut stdout)?,
        Command::Scan {
            alpha,
            r_over_lambda,
            tend,
            dt,
            out,
        } => {
            let spec = ScanSpec {
                alphas: parse_grid(&alpha)?,
                rs: parse_grid(&r_over_lambda)?,
                t_end: tend,
                dt,
            };
            let csv = cmd_scan(&spec)?;
            match out {
                Some(p) => fs::write(&p, csv).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
                None => stdout
                    .write_all(csv.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string()))?,
            }
        }
        Command::Couplings { model } => cmd_couplings(&model, &mut stdout)?,
        Command::Plot { input, series, out } => {
            let series: Vec<String> = series.split(',').map(|s| s.trim().to_string()).collect();
            cmd_plot(&input, &series, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
