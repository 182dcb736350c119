use clap::{Args, Parser, Subcommand};
use gsp_cli::commands::{self, GraphSource};
use gsp_cli::{CliError, RunConfig};
use gsp_core::simulator::Difficulty;
use gsp_core::spectral::GftKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gsp", version, about = "Graph-frequency classification experiments on simulated multichannel signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a key, e.g. `--set sim.seed=7`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig, CliError> {
        RunConfig::load(self.config.as_deref(), &self.overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a labelled fold (half condition 1, half condition 2).
    Simulate {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Number of samples; must be even.
        #[arg(long, short)]
        n: usize,
        #[arg(long, default_value = "easy")]
        difficulty: String,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the cross-validated experiment and write results.csv.
    Run {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Comma-separated difficulties; defaults to the configuration's list.
        #[arg(long)]
        difficulty: Option<String>,
        /// Output directory; defaults to `output.directory`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export graph Fourier modes of a graph CSV, a fold's training graph,
    /// or a freshly simulated training graph.
    ExportModes {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, conflicts_with = "fold")]
        graph: Option<PathBuf>,
        #[arg(long)]
        fold: Option<PathBuf>,
        /// Difficulty used when simulating.
        #[arg(long, default_value = "easy")]
        difficulty: String,
        /// adjacency or laplacian.
        #[arg(long, default_value = "laplacian")]
        kind: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the identity checks.
    Verify,
}

fn parse_difficulty(s: &str) -> Result<Difficulty, CliError> {
    s.parse().map_err(|e: gsp_core::GspError| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    match cli.command {
        Command::Simulate { cfg, n, difficulty, out } => {
            let cfg = cfg.load()?;
            commands::cmd_simulate(&cfg, n, parse_difficulty(&difficulty)?, &out, &mut stderr)
        }
        Command::Run { cfg, difficulty, out } => {
            let cfg = cfg.load()?;
            let difficulties = match difficulty {
                Some(d) => commands::parse_difficulties(&d)?,
                None => cfg.profiles.difficulties.clone(),
            };
            let out = out.unwrap_or_else(|| cfg.output.directory.clone());
            commands::cmd_run(&cfg, &difficulties, &out, &mut stdout).map(|_| ())
        }
        Command::ExportModes { cfg, graph, fold, difficulty, kind, out } => {
            let cfg = cfg.load()?;
            let kind: GftKind = kind.parse().map_err(|e: gsp_core::GspError| CliError::Config(e.to_string()))?;
            let difficulty = parse_difficulty(&difficulty)?;
            let source = match (&graph, &fold) {
                (Some(g), _) => GraphSource::GraphCsv(g),
                (None, Some(f)) => GraphSource::Fold(f),
                (None, None) => GraphSource::Simulated(difficulty),
            };
            commands::cmd_export_modes(&cfg, source, kind, &out).map(|_| ())
        }
        Command::Verify => commands::cmd_verify(&mut stdout),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gsp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
