use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use apw_cli::{render, run_request, Command, Overrides, EXIT_OTHER};
use clap::Parser;

/// Almost periodic polynomial factorization and corona solver.
///
/// Reads one JSON request (file or stdin) and writes one JSON report.
/// Exit codes: 0 ok, 2 parse, 3 domain, 4 unsupported rank,
/// 5 not invertible, 6 infeasible, 7 corpus mismatch, 1 other.
#[derive(Debug, Parser)]
#[command(name = "apw", version)]
struct Cli {
    /// analyze, project, factorize, augment, toeplitz, gram, corona,
    /// parametrize, verify or corpus
    command: Option<Command>,

    /// Same as the positional command.
    #[arg(long = "command", value_name = "NAME")]
    command_flag: Option<Command>,

    /// Request file; `-` or absent reads stdin.
    #[arg(long, short)]
    input: Option<PathBuf>,

    /// Report file; absent writes stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Finite-section cutoff (l1 norm of lattice coordinates).
    #[arg(long)]
    cutoff: Option<usize>,

    /// Tail tolerance for truncated inverse series.
    #[arg(long = "tail-tol")]
    tail_tol: Option<f64>,

    /// Sample points for sup-norm and determinant checks.
    #[arg(long = "grid")]
    grid: Option<usize>,

    /// Offset into the sampling sequence.
    #[arg(long)]
    seed: Option<u64>,
}

fn read_input(path: Option<&PathBuf>) -> anyhow::Result<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
    }
    Ok(text)
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let command = match (cli.command, cli.command_flag) {
        (Some(a), Some(b)) if a != b => bail!("conflicting commands `{a}` and `{b}`"),
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => bail!("no command given"),
    };
    let text = read_input(cli.input.as_ref())?;
    let ov = Overrides {
        cutoff: cli.cutoff,
        tail_tol: cli.tail_tol,
        grid_density: cli.grid,
        seed: cli.seed,
    };
    let (report, code) = run_request(command, &text, &ov);
    if let Some(err) = report.get("error") {
        eprintln!("apw {command}: {}", err["message"].as_str().unwrap_or("failed"));
    }
    let out = render(&report);
    match &cli.output {
        Some(p) => std::fs::write(p, out).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(out.as_bytes())?,
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("apw: {e:#}");
            ExitCode::from(EXIT_OTHER as u8)
        }
    }
}
