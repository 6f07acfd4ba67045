//! `provchain trace --ledger PATH --product HEX [--json]`

use std::path::Path;

use provchain_core::contract_vm::ActorRole;
use provchain_core::ledger_core::{ChainStore, LedgerRecord, ProductId};

use super::CliError;

pub(crate) fn load_store(path: &Path) -> Result<ChainStore, CliError> {
    let records = provchain_core::ledger_core::read_ledger_file(path)
        .map_err(|e| CliError::usage(format!("cannot load {}: {e}", path.display())))?;
    Ok(ChainStore::from_records(records))
}

pub(crate) fn parse_product(hex_id: &str) -> Result<ProductId, CliError> {
    ProductId::from_hex(hex_id)
        .ok_or_else(|| CliError::usage("--product must be 32 bytes of hex"))
}

pub fn run(ledger: &Path, product: &str, json: bool) -> Result<(), CliError> {
    let store = load_store(ledger)?;
    let p_id = parse_product(product)?;
    let hops = store.trace(&p_id);
    if hops.is_empty() {
        return Err(CliError::NotFound("product not found".to_string()));
    }

    if json {
        let records: Vec<LedgerRecord> = hops.iter().map(LedgerRecord::from).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&records).expect("records always serialize")
        );
        return Ok(());
    }

    println!("product {}", p_id.to_hex());
    println!("{:<4} {:<9} {:<42} {:>11} {:>11}  tx_hash", "hop", "stage", "sender", "intime", "outtime");
    for (i, stx) in hops.iter().enumerate() {
        let stage = ActorRole::stage(i).map(|r| r.name()).unwrap_or("?");
        println!(
            "{:<4} {:<9} {:<42} {:>11} {:>11}  {}",
            i,
            stage,
            stx.sender.to_hex(),
            stx.tx.p_intime,
            stx.tx.p_outtime,
            stx.tx_hash.to_hex()
        );
    }
    println!("{} hop(s)", hops.len());
    Ok(())
}
