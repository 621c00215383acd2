//! `bertini`: densities, zeta predictions, smoothness checks and
//! constructions over finite fields, reported as canonical JSON.
//!
//! Exit codes: 0 success, 1 output failure, 2 malformed or inconsistent
//! input, 3 budget exceeded, 4 internal invariant violated.

mod commands;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use ffbertini::sieve::SHARD_COUNT;
use serde_json::json;

use commands::{CliError, Outcome};
use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "bertini", version, about = "Bertini theorems over finite fields")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure the density of a predicate on S_d beside its zeta prediction.
    Density(commands::DensityArgs),
    /// Inverse zeta values ζ_X(s)^{-1}.
    Zeta(commands::ZetaArgs),
    /// Smoothness of H_f ∩ X, validation and node classification.
    SmoothCheck(commands::SmoothCheckArgs),
    /// Rank of the jet map from S_d to a fat-point scheme.
    JetRank(commands::JetRankArgs),
    /// Search for a smooth section with prescribed points and avoidance.
    Find(commands::FindArgs),
    /// Verify or search for hypersurfaces all of whose sections are singular.
    AntiBertini(commands::AntiBertiniArgs),
    /// The Katz hypersurface.
    Katz(commands::KatzArgs),
    /// Squarefree integers and polynomials against their zeta densities.
    Squarefree(commands::SquarefreeArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Density(_) => "density",
            Command::Zeta(_) => "zeta",
            Command::SmoothCheck(_) => "smooth-check",
            Command::JetRank(_) => "jet-rank",
            Command::Find(_) => "find",
            Command::AntiBertini(_) => "anti-bertini",
            Command::Katz(_) => "katz",
            Command::Squarefree(_) => "squarefree",
        }
    }

    fn run(&self) -> Result<Outcome, CliError> {
        match self {
            Command::Density(a) => commands::density(a),
            Command::Zeta(a) => commands::zeta(a),
            Command::SmoothCheck(a) => commands::smooth_check(a),
            Command::JetRank(a) => commands::jet_rank(a),
            Command::Find(a) => commands::find(a),
            Command::AntiBertini(a) => commands::anti_bertini(a),
            Command::Katz(a) => commands::katz(a),
            Command::Squarefree(a) => commands::squarefree(a),
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let outcome = cli.command.run()?;
    let text = RunReport {
        command: cli.command.name(),
        params: outcome.params,
        result: outcome.result,
        seed: outcome.seed,
        wall_time: start.elapsed(),
        shard_count: SHARD_COUNT,
    }
    .render();
    if let Some(path) = &cli.out {
        fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let body = json!({ "error": e.kind(), "message": e.message() });
            eprint!("{}", report::render(&body));
            ExitCode::from(e.exit_code())
        }
    }
}
