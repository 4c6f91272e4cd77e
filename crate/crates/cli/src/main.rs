use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qball::runner::{run, Command, OutputFormat, RunConfig};
use qball::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    CheckRelations,
    CheckSu,
    FockFormulas,
    Diagram,
    LimitSweep,
    NormInequality,
    SeriesChecks,
    CatalogDump,
    RelationMatch,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::CheckRelations => Command::CheckRelations,
            Cmd::CheckSu => Command::CheckSu,
            Cmd::FockFormulas => Command::FockFormulas,
            Cmd::Diagram => Command::Diagram,
            Cmd::LimitSweep => Command::LimitSweep,
            Cmd::NormInequality => Command::NormInequality,
            Cmd::SeriesChecks => Command::SeriesChecks,
            Cmd::CatalogDump => Command::CatalogDump,
            Cmd::RelationMatch => Command::RelationMatch,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Checks for truncated representations of the quantum matrix ball.
#[derive(Debug, Parser)]
#[command(name = "qball", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Truncation per Fock factor.
    #[arg(long, short = 'n', env = "QBALL_N", default_value_t = 12)]
    n: usize,
    /// Values of q, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.3, 0.5, 0.7, 0.9])]
    q: Vec<f64>,
    /// Points of the phase grid on each circle factor.
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Random vectors per residual.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Pass threshold; each command has its own default.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, env = "QBALL_SEED", default_value_t = 2024)]
    seed: u64,
    /// Cut schedule for tail compressions.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 6])]
    cuts: Vec<usize>,
    /// Random elements for norm-inequality.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Family name (Qf, Qc, Q12, ...) or slot code such as `ldww`.
    #[arg(long)]
    diagram: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let cfg = RunConfig {
        command: cli.command.into(),
        n: cli.n,
        qs: cli.q,
        grid: cli.grid,
        trials: cli.trials,
        tol: cli.tol,
        seed: cli.seed,
        cuts: cli.cuts,
        samples: cli.samples,
        diagram: cli.diagram,
        format: match cli.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
    };
    let out = match run(&cfg) {
        Ok(out) => out,
        Err(Error::Config(msg)) => {
            eprintln!("qball: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            println!(
                "{{\"schema\":1,\"command\":\"{}\",\"pass\":false,\"error\":{:?}}}",
                cfg.command,
                e.to_string()
            );
            return ExitCode::from(EXIT_FAILED);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.body) {
                eprintln!("qball: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => print!("{}", out.body),
    }
    if out.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
