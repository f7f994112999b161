use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kframe::cli::{run_command, run_selftest, Command, Options, Outcome, EXIT_INPUT};
use kframe::framed::HomotopyMode;

#[derive(Parser)]
#[command(name = "kframe", version, about = "Milnor K-theory symbols, framed correspondences and framing matrices")]
struct Args {
    /// Emit one JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the property suites.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Field descriptor replacing the document's, e.g. "F9 mod y^2+1".
    #[arg(long, global = true, value_name = "DESC")]
    field: Option<String>,
    /// Homotopy mode replacing the document's.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Endpoint,
}

#[derive(Subcommand)]
enum Sub {
    /// Canonical form of a symbol sum.
    Normalize { file: PathBuf },
    /// Residue of a symbol sum at a place of F_q(t).
    Tame { file: PathBuf },
    /// Weil reciprocity report, or the smooth-curve comparison.
    Reciprocity { file: PathBuf },
    /// Symbol class of a framed datum.
    Rho { file: PathBuf },
    /// Compare the ends of a homotopy of framed data.
    Homotopy { file: PathBuf },
    /// Transvection script reducing a framing matrix to [I|0].
    ReduceFraming { file: PathBuf },
    /// Run whatever request the document holds.
    Run { file: PathBuf },
    /// Run the property suites.
    Selftest,
}

fn read_input(path: &PathBuf) -> io::Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    Ok(text)
}

fn emit(out: &Outcome) -> ExitCode {
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = io::stdout().flush();
    ExitCode::from(out.code as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        json: args.json,
        field: args.field,
        mode: args.mode.map(|m| match m {
            Mode::Strict => HomotopyMode::Strict,
            Mode::Endpoint => HomotopyMode::Endpoint,
        }),
    };
    let (command, file) = match args.command {
        Sub::Selftest => return emit(&run_selftest(args.seed, opts.json)),
        Sub::Normalize { file } => (Command::Normalize, file),
        Sub::Tame { file } => (Command::Tame, file),
        Sub::Reciprocity { file } => (Command::Reciprocity, file),
        Sub::Rho { file } => (Command::Rho, file),
        Sub::Homotopy { file } => (Command::Homotopy, file),
        Sub::ReduceFraming { file } => (Command::ReduceFraming, file),
        Sub::Run { file } => (Command::Run, file),
    };
    match read_input(&file) {
        Ok(text) => emit(&run_command(command, &text, &opts)),
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
