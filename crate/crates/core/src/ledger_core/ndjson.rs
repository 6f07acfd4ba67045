//! Newline-delimited JSON persistence for signed transactions.
//!
//! One record per line, fixed key order, byte fields in lowercase hex,
//! timestamps in decimal. Loading a file and re-serializing it reproduces
//! the original bytes exactly, which is what makes ledgers diffable and
//! lets the anonymity test reason about the persisted surface.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve_crypto::{ActorAddress, Digest32, Signature};

use super::tx::{ActorId, ProductId, SignedTransaction, Transaction};
use super::LedgerError;

/// Wire form of one ledger line. Field order here is the serialized order.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LedgerRecord {
    pub a_id: String,
    pub p_id: String,
    pub p_inf: String,
    pub p_intime: u64,
    pub p_outtime: u64,
    pub prev_hash: String,
    pub tx_hash: String,
    pub sig: String,
    pub sender: String,
}

impl From<&SignedTransaction> for LedgerRecord {
    fn from(stx: &SignedTransaction) -> LedgerRecord {
        LedgerRecord {
            a_id: stx.tx.a_id.to_hex(),
            p_id: stx.tx.p_id.to_hex(),
            p_inf: hex::encode(&stx.tx.p_inf),
            p_intime: stx.tx.p_intime,
            p_outtime: stx.tx.p_outtime,
            prev_hash: stx.tx.prev_hash.to_hex(),
            tx_hash: stx.tx_hash.to_hex(),
            sig: stx.sig.to_hex(),
            sender: stx.sender.to_hex(),
        }
    }
}

impl LedgerRecord {
    pub fn into_signed_transaction(self) -> Result<SignedTransaction, String> {
        let a_id = ActorId::from_hex(&self.a_id).ok_or("a_id must be 32 hex bytes")?;
        let p_id = ProductId::from_hex(&self.p_id).ok_or("p_id must be 32 hex bytes")?;
        let p_inf = hex::decode(&self.p_inf).map_err(|_| "p_inf must be hex")?;
        let prev_hash =
            Digest32::from_hex(&self.prev_hash).ok_or("prev_hash must be 32 hex bytes")?;
        let tx_hash = Digest32::from_hex(&self.tx_hash).ok_or("tx_hash must be 32 hex bytes")?;
        let sig = Signature::from_hex(&self.sig).ok_or("sig must be 65 hex bytes")?;
        let sender = ActorAddress::from_hex(&self.sender).ok_or("sender must be 20 hex bytes")?;
        Ok(SignedTransaction {
            tx: Transaction {
                a_id,
                p_id,
                p_inf,
                p_intime: self.p_intime,
                p_outtime: self.p_outtime,
                prev_hash,
            },
            tx_hash,
            sig,
            sender,
        })
    }
}

/// One serialized line, without the trailing newline.
pub fn record_to_line(stx: &SignedTransaction) -> String {
    serde_json::to_string(&LedgerRecord::from(stx)).expect("ledger records always serialize")
}

pub fn line_to_record(line: &str, line_no: usize) -> Result<SignedTransaction, LedgerError> {
    let record: LedgerRecord =
        serde_json::from_str(line).map_err(|e| LedgerError::MalformedRecord {
            line: line_no,
            reason: e.to_string(),
        })?;
    record
        .into_signed_transaction()
        .map_err(|reason| LedgerError::MalformedRecord {
            line: line_no,
            reason: reason.to_string(),
        })
}

/// Serialize records to the ndjson wire form, one line each.
pub fn to_ndjson<'a>(records: impl Iterator<Item = &'a SignedTransaction>) -> String {
    let mut out = String::new();
    for stx in records {
        out.push_str(&record_to_line(stx));
        out.push('\n');
    }
    out
}

/// Parse a whole ledger file body. Line numbers in errors are 1-based.
pub fn from_ndjson(body: &str) -> Result<Vec<SignedTransaction>, LedgerError> {
    body.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| line_to_record(line, i + 1))
        .collect()
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp.push(".tmp");
    let tmp_path = dir.join(tmp);
    {
        let mut f = fs::File::create(&tmp_path)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp_path, path)
}

pub fn write_ledger_file(
    path: &Path,
    records: impl Iterator<Item = impl std::borrow::Borrow<SignedTransaction>>,
) -> std::io::Result<()> {
    let mut out = String::new();
    for stx in records {
        out.push_str(&record_to_line(stx.borrow()));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn read_ledger_file(path: &Path) -> Result<Vec<SignedTransaction>, LedgerError> {
    let body = fs::read_to_string(path)?;
    from_ndjson(&body)
}
