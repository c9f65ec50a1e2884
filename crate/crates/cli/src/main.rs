//! `quadgor`: build quadratic Gorenstein rings and certify their invariants.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadgor::{Error, FieldDescriptor, MonomialOrder};

#[derive(Parser, Debug)]
#[command(name = "quadgor", version, about = "Exact computations with quadratic Gorenstein rings")]
struct Cli {
    /// Coefficient field: `q` or `gf:<prime>`.
    #[arg(long, global = true)]
    field: Option<FieldDescriptor>,
    /// Monomial order: `grevlex` or `lex`.
    #[arg(long, global = true)]
    order: Option<MonomialOrder>,
    /// Homological degree bound for residue-field resolutions.
    #[arg(long, global = true, default_value_t = 4)]
    steps: usize,
    /// Internal-degree slack above the diagonal for residue-field resolutions.
    #[arg(long, global = true, default_value_t = 2)]
    slack: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for commands that make random choices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Annihilator of the inverse polynomial F_c and its invariants.
    Family {
        #[arg(long)]
        c: usize,
    },
    /// The codimension-six example (0 : G) over Q.
    #[command(name = "example-g6")]
    ExampleG6,
    /// Deviation-two instance Pf(M) + (random quadrics) in c variables.
    #[command(name = "deviation-two")]
    DeviationTwo {
        #[arg(long)]
        c: usize,
    },
    /// Koszulness status by codimension and regularity.
    Grid {
        #[arg(long, default_value_t = 11)]
        c_max: usize,
        #[arg(long, default_value_t = 11)]
        r_max: usize,
        /// Build each witness and check its invariants.
        #[arg(long)]
        verify: bool,
    },
    /// Minimal generators of the annihilator of inverse polynomials.
    Ann {
        #[arg(long)]
        input: PathBuf,
    },
    /// Minimal free resolution by iterated syzygies.
    Res {
        #[arg(long)]
        ideal: PathBuf,
        /// Number of syzygy steps; defaults to the number of variables.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Graded Betti table.
    Betti {
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Hilbert series data.
    Hilbert {
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Link (L : I) with the h-vector identity check.
    Link {
        #[arg(long)]
        ci: PathBuf,
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Pfaffian (even size) or submaximal Pfaffians (odd size).
    Pfaffian {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Koszul certificate, syzygy obstruction and degree-two bound.
    Koszul {
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Tensor product of two quotients on disjoint variables.
    Tensor {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        with: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Io(_) | Error::Syntax { .. } | Error::UnknownVariable { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            let text = if cli.json { out.json_text() } else { out.text };
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
