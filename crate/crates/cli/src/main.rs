use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use laxcat::Caps;

mod commands;
mod report;

use commands::InputError;
use report::{Report, Status};

/// Decide lax epimorphy and discrete splitting bifibrations on finite
/// categories, preorders, groups and frame-enriched categories.
#[derive(Debug, Parser)]
#[command(name = "laxcat", version)]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on objects of any category searched exhaustively.
    #[arg(long, global = true, value_name = "N")]
    max_objects: Option<usize>,
    /// Cap on morphisms of any category searched exhaustively.
    #[arg(long, global = true, value_name = "N")]
    max_morphisms: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate documents.
    Validate {
        #[arg(required = true)]
        files: Vec<String>,
    },
    /// Is a functor, monotone map or group homomorphism a lax epimorphism?
    Laxepi {
        file: String,
        /// Largest probe codomain order for homomorphisms.
        #[arg(long, value_name = "N", default_value_t = 12)]
        probe_order: usize,
    },
    /// Is a functor a discrete splitting bifibration?
    Dsb { file: String },
    /// Factor a functor as a lax epimorphism followed by a DSB.
    Factorize {
        file: String,
        /// Directory for mid.json, left.json and right.json.
        #[arg(long, short, default_value = ".")]
        out: PathBuf,
    },
    /// Find the diagonal of a square.
    Fillin { file: String },
    /// Inserter of a parallel pair of functors or monotone maps.
    Inserter {
        f: String,
        g: String,
        /// Write the projection here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Coinserter of a parallel pair of monotone maps.
    Coinserter {
        f: String,
        g: String,
        /// Check the universal property against small probe preorders.
        #[arg(long)]
        verify_universal: bool,
        /// Write the coinserter preorder here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Is a V-functor absolutely dense?
    Vlaxepi { file: String },
    /// Emit Graphviz DOT for a category, or for g⇓F with --comma.
    Dot {
        file: String,
        /// Morphism g of the functor's codomain.
        #[arg(long, value_name = "G")]
        comma: Option<String>,
        /// Write to this file instead of standard output.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, value_name = "N", default_value_t = 12)]
        probe_order: usize,
    },
}

fn caps(cli: &Cli) -> Caps {
    let d = Caps::default();
    Caps {
        max_objects: cli.max_objects.unwrap_or(d.max_objects),
        max_morphisms: cli.max_morphisms.unwrap_or(d.max_morphisms),
        ..d
    }
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let caps = caps(cli);
    match &cli.command {
        Command::Validate { files } => commands::validate(files),
        Command::Laxepi { file, probe_order } => commands::laxepi(file, *probe_order, &caps),
        Command::Dsb { file } => commands::dsb(file, &caps),
        Command::Factorize { file, out } => commands::factorize(file, out, &caps),
        Command::Fillin { file } => commands::fillin(file, &caps),
        Command::Inserter { f, g, out } => commands::inserter_cmd(f, g, out.as_deref(), &caps),
        Command::Coinserter {
            f,
            g,
            verify_universal,
            out,
        } => commands::coinserter_cmd(f, g, *verify_universal, out.as_deref()),
        Command::Vlaxepi { file } => commands::vlaxepi(file, &caps),
        Command::Dot { file, comma, out } => {
            let text = commands::dot(file, comma.as_deref(), &caps)?;
            let mut r = Report::new("dot", std::slice::from_ref(file));
            match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                    r.summary = format!("wrote {}", path.display());
                }
                None if !cli.json => {
                    print!("{text}");
                    return Ok(r);
                }
                None => r.summary = "DOT graph".into(),
            }
            r.detail("dot", text);
            Ok(r)
        }
        Command::Selftest {
            seed,
            cases,
            probe_order,
        } => commands::selftest(*seed, *cases, *probe_order, &caps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("reports serialize")
                );
            } else if !report.summary.is_empty() {
                println!("{}", report.to_text());
            }
            report.status
        }
        Err(InputError(message)) => {
            if cli.json {
                let report = serde_json::json!({"exit_code": 2, "error": message});
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            }
            eprintln!("laxcat: {message}");
            Status::InputError
        }
    };
    ExitCode::from(status.code())
}
