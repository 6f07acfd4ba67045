//! `provchain run --config PATH --out DIR [--mode storage|event]`

use std::fs;
use std::path::Path;

use provchain_core::contract_vm::{gas_report, ContractState, RecordMode};
use provchain_core::ledger_core::write_atomic;
use provchain_core::net_sim::{run_scenario, ScenarioConfig};

use super::CliError;

pub fn run(
    config_path: &Path,
    out_dir: &Path,
    mode_override: Option<&str>,
    verbose: bool,
) -> Result<(), CliError> {
    // Validate everything before touching the output directory.
    let config_text = fs::read_to_string(config_path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", config_path.display())))?;
    let mut cfg = ScenarioConfig::parse(&config_text)
        .map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(mode) = mode_override {
        cfg.mode = mode
            .parse::<RecordMode>()
            .map_err(CliError::Usage)?;
    }

    let out = run_scenario(&cfg).map_err(|e| CliError::usage(e.to_string()))?;

    // Convergence gate: every node must hold identical state and ledgers.
    let bodies = out.ledger_bodies();
    if !out.network.converged() || bodies.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::Divergence(format!(
            "node state hashes diverged after {} submissions",
            out.report.tx_submitted
        )));
    }
    if out.report.divergence_events > 0 {
        eprintln!(
            "warning: {} split vote(s) were rejected globally",
            out.report.divergence_events
        );
    }

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    for (i, body) in bodies.iter().enumerate() {
        let path = out_dir.join(format!("node_{i}.ndjson"));
        write_atomic(&path, body.as_bytes())
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }

    let complexity_path = out_dir.join("complexity.csv");
    write_atomic(&complexity_path, out.report.to_csv().as_bytes())
        .map_err(|e| CliError::usage(format!("cannot write complexity.csv: {e}")))?;
    written.push(complexity_path);

    // Replay the submission sequence on a fresh contract to produce the gas
    // series for the active mode.
    let mut base = ContractState::new(cfg.gas);
    for actor in &out.actors {
        base.register_actor(actor.keypair.address(), actor.role);
    }
    let series = gas_report(&base, &out.submissions, out.network.curve());
    let gas_path = out_dir.join("gas.csv");
    write_atomic(&gas_path, series.to_csv_mode(cfg.mode).as_bytes())
        .map_err(|e| CliError::usage(format!("cannot write gas.csv: {e}")))?;
    written.push(gas_path);

    println!(
        "run complete: {} nodes, {} products, {} committed records, mode {}",
        cfg.n_nodes, cfg.n_products, out.report.tx_committed, cfg.mode
    );
    println!(
        "gas total per node: {} (schedule {})",
        out.network.nodes()[0].contract.gas().total,
        series.schedule_id
    );
    if verbose {
        for path in &written {
            println!("wrote {}", path.display());
        }
        println!(
            "work counters: A={} S={} V={}",
            out.report.total_processed, out.report.total_signed, out.report.total_verified
        );
    }
    Ok(())
}
