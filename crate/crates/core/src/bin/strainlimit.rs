use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use strainlimit::config::{ConfigBuilder, RunConfig};
use strainlimit::postprocess::{run_sweep, write_csv, SweepParameter};
use strainlimit::runner::{run, run_reproduction_suite, ReproductionOptions};
use strainlimit::Error;

const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "strainlimit",
    version,
    about = "Strain-limiting thermo-elasticity on an edge-cracked plate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration. Any `--key value` pair overrides the file.
    Solve {
        config: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Repeat a solve for several values of `a` or `b`.
    Sweep {
        config: PathBuf,
        /// Swept parameter (defaults to `sweep.parameter`).
        #[arg(long)]
        param: Option<SweepParameter>,
        /// Comma-separated values (defaults to `sweep.values`).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<f64>,
        /// Output CSV (defaults to `outputs.csv_path`, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Run the fiber × load × (b, a) sweep grid and report the trends.
    Reproduce {
        /// Directory for one CSV per cell.
        #[arg(long, default_value = "reproduction")]
        out_dir: PathBuf,
        /// Optional base configuration for mesh, material and loads.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Print the mesh of a configuration as plain text.
    MeshDump {
        config: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
}

fn load(path: Option<&PathBuf>, overrides: &[String], base: RunConfig) -> Result<RunConfig, Error> {
    let mut builder = ConfigBuilder::from(base);
    if let Some(path) = path {
        builder.apply_text(&fs::read_to_string(path)?)?;
    }
    builder.apply_overrides(overrides)?;
    Ok(builder.finish()?)
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Solve { config, overrides } => {
            let cfg = load(Some(&config), &overrides, RunConfig::default())?;
            let outcome = run(&cfg)?;
            print!("{}", outcome.summary());
            if outcome.converged() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("Picard iteration did not reach tol = {:e}", cfg.picard.tol);
                Ok(ExitCode::from(EXIT_NOT_CONVERGED))
            }
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
            overrides,
        } => {
            let cfg = load(Some(&config), &overrides, RunConfig::default())?;
            let param = param
                .or(cfg.sweep.as_ref().map(|s| s.parameter))
                .unwrap_or(SweepParameter::B);
            let values = match (&cfg.sweep, values.is_empty()) {
                (Some(sweep), true) => sweep.values.clone(),
                _ => values,
            };
            if values.is_empty() {
                return Err(strainlimit::ConfigError::InvariantViolation {
                    key: "sweep.values".into(),
                    line: 0,
                    reason: "need at least one value".into(),
                }
                .into());
            }
            let rows = run_sweep(&cfg, param, &values)?;
            match out.or_else(|| cfg.outputs.csv_path.clone()) {
                Some(path) => {
                    write_csv(&rows, &path)?;
                    println!("wrote {}", path.display());
                }
                None => strainlimit::postprocess::write_csv_to(&mut io::stdout().lock(), &rows)?,
            }
            if rows.iter().all(|r| r.converged) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_NOT_CONVERGED))
            }
        }
        Command::Reproduce {
            out_dir,
            config,
            overrides,
        } => {
            let mut opts = ReproductionOptions::default();
            opts.base = load(config.as_ref(), &overrides, opts.base)?;
            opts.out_dir = Some(out_dir);
            let report = run_reproduction_suite(&opts)?;
            print!("{report}");
            let converged = report
                .cells
                .iter()
                .all(|c| c.rows.iter().all(|r| r.converged));
            if !converged {
                Ok(ExitCode::from(EXIT_NOT_CONVERGED))
            } else if report.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::MeshDump { config, overrides } => {
            let cfg = load(Some(&config), &overrides, RunConfig::default())?;
            let mesh = strainlimit::mesh::build_mesh(cfg.mesh.nx, cfg.mesh.ny, cfg.mesh.crack)?;
            mesh.write_dump(io::stdout().lock())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
