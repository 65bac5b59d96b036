use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mls_cli::commands::{bound, inline_bound};
use mls_cli::{run, with_workers, CliError, Command, Outputs, RunConfig};

#[derive(Parser)]
#[command(name = "mls", version, about = "Marked length spectrum experiments from a TOML config")]
struct Cli {
    /// Worker threads; overrides `workers` in the config. Outputs do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Element census of the [census] metric.
    Ball { config: PathBuf },
    /// Conjugacy-class census.
    Conj { config: PathBuf },
    /// Growth rate of filtered counts.
    Growth { config: PathBuf },
    /// Manhattan curve samples.
    Curve { config: PathBuf },
    /// Rigidity constant β with dilation-based bound checks.
    Beta { config: PathBuf },
    /// Census dilations and Thurston distance.
    Dilation { config: PathBuf },
    /// Intersection number and η bracket.
    Tau { config: PathBuf },
    /// Growth of the classes whose normalized lengths agree.
    Correlate { config: PathBuf },
    /// Joint spectral radius sandwich.
    Jsr { config: PathBuf },
    /// Right-hand side of Bochi's inequality.
    Bochi { config: PathBuf },
    /// Joint translation length sandwich.
    Jtl { config: PathBuf },
    /// Evaluate a bound formula from a config, or inline: `bound rigidity-hyperbolic L=4 eta=1 ...`.
    Bound {
        target: String,
        values: Vec<String>,
    },
    /// Named scenario; `acceptance` runs the acceptance suite.
    Scenario { name: String, config: Option<PathBuf> },
}

fn execute(cli: Cli) -> Result<(Outputs, PathBuf), CliError> {
    let (cmd, cfg) = match cli.cmd {
        Cmd::Bound { target, values } => {
            if values.is_empty() && std::path::Path::new(&target).is_file() {
                (Command::Bound, RunConfig::load(target.as_ref())?)
            } else {
                let spec = inline_bound(&target, &values)?;
                let cfg = RunConfig::default();
                let out = with_workers(cli.workers.unwrap_or(0), || bound(&spec))??;
                return Ok((out, cfg.out_dir()));
            }
        }
        Cmd::Scenario { name, config } => {
            let cfg = match config {
                Some(p) => RunConfig::load(&p)?,
                None => RunConfig::default(),
            };
            (Command::Scenario(name), cfg)
        }
        Cmd::Ball { config } => (Command::Ball, RunConfig::load(&config)?),
        Cmd::Conj { config } => (Command::Conj, RunConfig::load(&config)?),
        Cmd::Growth { config } => (Command::Growth, RunConfig::load(&config)?),
        Cmd::Curve { config } => (Command::Curve, RunConfig::load(&config)?),
        Cmd::Beta { config } => (Command::Beta, RunConfig::load(&config)?),
        Cmd::Dilation { config } => (Command::Dilation, RunConfig::load(&config)?),
        Cmd::Tau { config } => (Command::Tau, RunConfig::load(&config)?),
        Cmd::Correlate { config } => (Command::Correlate, RunConfig::load(&config)?),
        Cmd::Jsr { config } => (Command::Jsr, RunConfig::load(&config)?),
        Cmd::Bochi { config } => (Command::Bochi, RunConfig::load(&config)?),
        Cmd::Jtl { config } => (Command::Jtl, RunConfig::load(&config)?),
    };
    let workers = cli.workers.or(cfg.workers).unwrap_or(0);
    let out = with_workers(workers, || run(&cmd, &cfg))??;
    Ok((out, cfg.out_dir()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli).and_then(|(out, dir)| out.write_to(&dir).map(|_| out)) {
        Ok(out) => {
            println!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
