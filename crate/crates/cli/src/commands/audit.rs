//! `provchain audit --ledger PATH (--product HEX | --all)`

use std::path::Path;

use provchain_core::curve_crypto::SECP256K1;
use provchain_core::ledger_core::{audit_chain, derive_roles, AuditReport};

use super::trace::{load_store, parse_product};
use super::CliError;

fn print_report(report: &AuditReport) {
    println!("product {}", report.p_id.to_hex());
    if let Some(note) = &report.note {
        println!("  note: {note}");
    }
    println!(
        "  {:<4} {:<10} {:<10} {:<14} recovered",
        "hop", "hash-link", "signature", "custody-order"
    );
    for hop in &report.hops {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        println!(
            "  {:<4} {:<10} {:<10} {:<14} {}",
            hop.hop,
            mark(hop.hash_link_ok),
            mark(hop.sig_ok),
            mark(hop.custody_ok),
            hop.recovered
                .map(|a| a.to_hex())
                .unwrap_or_else(|| "-".to_string())
        );
    }
    println!("  verdict: {}", if report.verdict { "PASS" } else { "FAIL" });
}

fn first_failure(report: &AuditReport) -> String {
    match report.first_failing_hop() {
        Some(hop) => format!(
            "audit failed: product {} hop {}: {} check",
            report.p_id.to_hex(),
            hop.hop,
            hop.first_failure().unwrap_or("unknown")
        ),
        None => format!(
            "audit failed: product {}: {}",
            report.p_id.to_hex(),
            report.note.as_deref().unwrap_or("no hops")
        ),
    }
}

pub fn run(ledger: &Path, product: Option<&str>, all: bool) -> Result<(), CliError> {
    let store = load_store(ledger)?;
    let curve = &*SECP256K1;
    let roles = derive_roles(&store);

    if all {
        let products = store.products();
        if products.is_empty() {
            println!("0 products audited");
            return Ok(());
        }
        let mut first_bad: Option<String> = None;
        for p_id in &products {
            let report = audit_chain(&store, p_id, &roles, curve);
            print_report(&report);
            if !report.verdict && first_bad.is_none() {
                first_bad = Some(first_failure(&report));
            }
        }
        println!("{} products audited", products.len());
        match first_bad {
            Some(msg) => Err(CliError::AuditFailed(msg)),
            None => Ok(()),
        }
    } else {
        let p_id = parse_product(product.expect("clap enforces product xor all"))?;
        if store.trace(&p_id).is_empty() {
            return Err(CliError::NotFound("product not found".to_string()));
        }
        let report = audit_chain(&store, &p_id, &roles, curve);
        print_report(&report);
        if report.verdict {
            Ok(())
        } else {
            Err(CliError::AuditFailed(first_failure(&report)))
        }
    }
}
