//! Transactions, per-product hash chains, persistence, and audit.
//!
//! A product's history is an append-only sequence of signed frames, each
//! linking to the previous frame's keccak hash. Chains are tamper-evident:
//! change any committed field and either a recomputed hash, a recovered
//! signer address, or a custody position stops matching.

mod audit;
mod chain;
pub mod ndjson;
mod tx;

pub use audit::{audit_all, audit_chain, derive_roles, AuditReport, HopAudit};
pub use chain::{ChainStore, ProductChain};
pub use ndjson::{read_ledger_file, write_atomic, write_ledger_file, LedgerRecord};
pub use tx::{
    encode_tx_canonical, sig_h, tx_hash, ActorId, ProductId, SignedTransaction, Transaction,
};

use crate::curve_crypto::CryptoError;

/// Errors from building or loading chains. Audit failures are verdicts,
/// not errors.
#[derive(Debug, thiserror::Error)]
pub enum LedgerError {
    #[error("invalid transaction: {0}")]
    InvalidTransaction(&'static str),
    #[error("record product id {record} does not match chain {chain}")]
    ProductMismatch { chain: String, record: String },
    #[error("previous-hash link broken at hop {hop}")]
    BrokenLink { hop: usize },
    #[error("stored tx_hash does not match the frame at hop {hop}")]
    HashMismatch { hop: usize },
    #[error("malformed ledger record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("signing failed: {0}")]
    Crypto(CryptoError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
