use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use towercalc::cli::{self, Outcome, SpectralArgs, TowerScript};
use towercalc::spectral::DEFAULT_TOL;

#[derive(Parser)]
#[command(name = "towercalc", version, about = "Intersection rings of blowup towers over P3, P2xP1 and P1xP1xP1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print basis, intersection tables, c1 and c2 for every level
    Build {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check every blowup step (1: c1.C against 2g-2, 2: conditions 1-3)
    Check {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve eta.eta = 0 on a single layer of points and curves in P3
    Eta {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an intersection expression
    Eval {
        file: PathBuf,
        #[arg(long)]
        expr: String,
        /// Level X_k to evaluate on (default: top)
        #[arg(long)]
        level: Option<usize>,
    },
    /// Dynamical degrees and entropy of a candidate automorphism action
    Spectral {
        file: PathBuf,
        #[arg(long)]
        m11: PathBuf,
        #[arg(long)]
        m22: PathBuf,
        /// Inverse action on H11, for the duality check
        #[arg(long)]
        inv_m11: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Verify the bundled example towers
    Examples {
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<TowerScript, String> {
    cli::parse_tower_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<(String, Outcome), String> {
    let ok = |s: String| (s, Outcome::Success);
    let err = |e: towercalc::Error| e.to_string();
    match cli.command {
        Command::Build { file, json } => cli::cmd_build(&load(&file)?, json).map(ok).map_err(err),
        Command::Check { theorem, file, json } => cli::cmd_check(&load(&file)?, theorem, json).map_err(err),
        Command::Eta { file, json } => cli::cmd_eta(&load(&file)?, json).map(ok).map_err(err),
        Command::Eval { file, expr, level } => cli::cmd_eval(&load(&file)?, &expr, level).map(ok).map_err(err),
        Command::Spectral {
            file,
            m11,
            m22,
            inv_m11,
            tol,
            level,
            json,
        } => {
            let script = load(&file)?;
            let (m11, m22) = (read(&m11)?, read(&m22)?);
            let inv = inv_m11.as_deref().map(read).transpose()?;
            let args = SpectralArgs {
                m11: &m11,
                m22: &m22,
                inv_m11: inv.as_deref(),
                tol,
                level,
            };
            cli::cmd_spectral(&script, &args, json).map(ok).map_err(err)
        }
        Command::Examples { json } => cli::cmd_examples(json).map_err(err),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, outcome)) => {
            print!("{out}");
            ExitCode::from(outcome.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
