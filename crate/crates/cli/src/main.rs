//! `provchain`: drive, inspect, and audit provenance ledgers.
//!
//! Exit codes are a stable contract:
//!   0 success · 2 usage or config error · 3 divergence ·
//!   4 product not found · 5 audit failure

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;


#[derive(Parser)]
#[command(name = "provchain", version, about = "Supply-chain provenance ledger tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print extra progress detail.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a keypair and print the private scalar, public point, and address.
    Keygen {
        /// 32-byte hex seed for a reproducible keypair; omit for OS entropy.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Run a scenario: write per-node ledgers, complexity.csv, and gas.csv.
    Run {
        /// Scenario config file (JSON object or key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Override the config's recording mode.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Print a product's journey from a ledger file.
    Trace {
        #[arg(long)]
        ledger: PathBuf,
        /// Product id, 32 bytes of hex.
        #[arg(long)]
        product: String,
        /// Emit the journey as JSON records instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Re-verify a ledger hop by hop.
    Audit {
        #[arg(long)]
        ledger: PathBuf,
        #[command(flatten)]
        target: AuditTarget,
    },
    /// Compare gas series from a storage-mode and an event-mode run.
    Gasreport {
        /// gas.csv from the storage-mode run.
        #[arg(long)]
        storage: PathBuf,
        /// gas.csv from the event-mode run.
        #[arg(long)]
        event: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AuditTarget {
    /// Audit a single product id (hex).
    #[arg(long)]
    product: Option<String>,
    /// Audit every product in the ledger.
    #[arg(long)]
    all: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Keygen { seed } => commands::keygen::run(seed.as_deref()),
        Command::Run { config, out, mode } => {
            commands::run::run(&config, &out, mode.as_deref(), cli.verbose)
        }
        Command::Trace { ledger, product, json } => {
            commands::trace::run(&ledger, &product, json)
        }
        Command::Audit { ledger, target } => {
            commands::audit::run(&ledger, target.product.as_deref(), target.all)
        }
        Command::Gasreport { storage, event } => commands::gasreport::run(&storage, &event),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
