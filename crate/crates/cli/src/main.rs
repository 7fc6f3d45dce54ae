use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use gvint::commands::{self, CheckMode, Outcome, Status, TransformArgs};
use gvint_core::InvariantKind;

/// Exact GW / GV / QK invariant transforms over JSON workspaces.
///
/// Exit codes: 0 success, 1 validation failure, 2 math-contract failure,
/// 3 I/O error.
#[derive(Parser, Debug)]
#[command(name = "gvint", version)]
struct Cli {
    /// Suppress human-readable output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print the machine-readable JSON verdict on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every invariant of a workspace file.
    Validate { file: PathBuf },
    /// Transform tables between invariant kinds.
    Transform {
        file: PathBuf,
        #[arg(long, value_parser = parse_kind)]
        from: InvariantKind,
        #[arg(long, value_parser = parse_kind)]
        to: InvariantKind,
        /// Transform only the table with this label.
        #[arg(long)]
        table: Option<String>,
        /// Write the resulting workspace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-class contribution breakdown (JSON if the name ends in .json).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run one consistency check.
    #[command(group(ArgGroup::new("mode").required(true).args(["integrality", "roundtrip", "remark_identity", "arith_identities"])))]
    Check {
        file: Option<PathBuf>,
        #[arg(long)]
        integrality: bool,
        #[arg(long)]
        roundtrip: bool,
        #[arg(long)]
        remark_identity: bool,
        #[arg(long)]
        arith_identities: bool,
        /// Largest r for --arith-identities.
        #[arg(long, default_value_t = 200)]
        limit: u64,
    },
    /// Euler characteristic of O(k) from the ring block.
    Hrr {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        bundle: i64,
        /// Degree-1 basis class to twist by (default: the unique one).
        #[arg(long)]
        class: Option<String>,
    },
}

fn parse_kind(s: &str) -> Result<InvariantKind, String> {
    InvariantKind::parse(s).ok_or_else(|| format!("unknown invariant kind {s:?} (GW, GV, QK)"))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { file } => commands::validate(file),
        Command::Transform {
            file,
            from,
            to,
            table,
            out,
            report,
        } => commands::transform(&TransformArgs {
            path: file,
            from: *from,
            to: *to,
            table: table.as_deref(),
            out: out.as_deref(),
            report: report.as_deref(),
        }),
        Command::Check {
            file,
            integrality,
            roundtrip,
            remark_identity,
            limit,
            ..
        } => {
            let mode = if *integrality {
                CheckMode::Integrality
            } else if *roundtrip {
                CheckMode::Roundtrip
            } else if *remark_identity {
                CheckMode::RemarkIdentity
            } else {
                CheckMode::ArithIdentities
            };
            commands::check(file.as_deref(), mode, *limit)
        }
        Command::Hrr { file, bundle, class } => commands::hrr(file, *bundle, class.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures; 2 is reserved for math contracts
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = run(&cli);
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&outcome.json).expect("verdict serializes"));
    } else if let Some(data) = &outcome.data {
        print!("{data}");
    }
    if !cli.quiet && !outcome.human.is_empty() {
        if outcome.status == Status::Success && outcome.data.is_none() && !cli.json {
            print!("{}", outcome.human);
        } else {
            eprint!("{}", outcome.human);
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
