use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dyndiv::cli::{emit_report, parse_config, run};
use dyndiv::mub::build_mubs;
use dyndiv::Error;

#[derive(Parser)]
#[command(name = "dyndiv", version, about = "Divisibility analysis of qubit and qudit dynamical maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a dynamical map over a time grid and write JSON/CSV reports.
    Analyze {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        no_oracles: bool,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Print the mutually unbiased bases used for dimension D as JSON.
    Mubs { dim: usize },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config() {
        2
    } else if e.is_numerical() {
        3
    } else {
        1
    }
}

fn analyze(
    config: PathBuf,
    out: PathBuf,
    seed: Option<u64>,
    no_oracles: bool,
    grid: Option<usize>,
) -> Result<(), Error> {
    let text = std::fs::read_to_string(&config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if no_oracles {
        cfg.oracles = false;
    }
    if let Some(n) = grid {
        cfg.grid = n;
    }
    let output = run(&cfg)?;
    let files = emit_report(&output, &out)?;
    let s = &output.report.summary;
    let mut lines = vec![
        format!("CP {}  P {}  D {}", s.cp, s.p, s.d),
        format!(
            "oracle checks {}  disagreements {}",
            s.oracle_checks, s.oracle_disagreements
        ),
        format!("wrote {}", files.report.display()),
        format!("wrote {}", files.timeline.display()),
    ];
    if let Some(p) = files.sweep {
        lines.push(format!("wrote {}", p.display()));
    }
    let mut stdout = std::io::stdout().lock();
    for line in lines {
        if writeln!(stdout, "{line}").is_err() {
            break;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            config,
            out,
            seed,
            no_oracles,
            grid,
        } => analyze(config, out, seed, no_oracles, grid),
        Command::Mubs { dim } => build_mubs(dim).and_then(|m| {
            println!("{}", serde_json::to_string_pretty(&m.to_json())?);
            Ok(())
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
