use clap::{Parser, Subcommand};
use etp_cli::config::{Engine, ScenarioConfig};
use etp_cli::scenario::run_scenario;
use etp_cli::CliError;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "etp-sim", version, about = "Electron-two-photon interaction simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its output files.
    Run {
        /// Scenario configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir` or `.`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render SVG plots of the tabulated data.
        #[arg(long)]
        svg: bool,
        /// Evolution route: analytic | oracle | both.
        #[arg(long)]
        engine: Option<Engine>,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the tool version.
    Version,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Version => {
            println!("etp-sim {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
        Command::Validate { config } => {
            ScenarioConfig::from_file(&config)?;
            println!("ok: {}", config.display());
            Ok(())
        }
        Command::Run { config, out, svg, engine } => {
            let parsed = ScenarioConfig::from_file(&config)?;
            let base = config.parent().unwrap_or(Path::new(".")).to_path_buf();
            let out_dir = out
                .or_else(|| parsed.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let artifacts = run_scenario(&parsed, &base, engine, svg)?;
            std::fs::create_dir_all(&out_dir)?;
            for (name, body) in &artifacts.csvs {
                std::fs::write(out_dir.join(name), body)?;
            }
            let meta = serde_json::to_string_pretty(&artifacts.meta)
                .map_err(|e| CliError::Io(e.to_string()))?;
            std::fs::write(out_dir.join("run_meta.json"), meta + "\n")?;
            for (name, body) in &artifacts.svgs {
                std::fs::write(out_dir.join(name), body)?;
            }
            for (name, _) in &artifacts.csvs {
                println!("wrote {}", out_dir.join(name).display());
            }
            println!("wrote {}", out_dir.join("run_meta.json").display());
            for (name, _) in &artifacts.svgs {
                println!("wrote {}", out_dir.join(name).display());
            }
            Ok(())
        }
    }
}
