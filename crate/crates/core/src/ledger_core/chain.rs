//! Per-product hash chains and the store that holds them.
//!
//! `append` is the strict path used while building state: it refuses frames
//! whose previous-hash link does not match the chain tip. Loading an
//! untrusted ledger file goes through [`ChainStore::from_records`], which
//! groups records without judging them; the audit pass is what judges.
//!
//! The store is single-writer: appends go through `&mut self`, reads are
//! plain shared borrows.

use std::collections::BTreeMap;

use crate::curve_crypto::Digest32;

use super::tx::{tx_hash, ProductId, SignedTransaction};
use super::LedgerError;

/// The ordered journey of one product id.
#[derive(Clone, Debug)]
pub struct ProductChain {
    p_id: ProductId,
    entries: Vec<SignedTransaction>,
}

impl ProductChain {
    pub fn new(p_id: ProductId) -> ProductChain {
        ProductChain { p_id, entries: Vec::new() }
    }

    pub fn p_id(&self) -> &ProductId {
        &self.p_id
    }

    pub fn entries(&self) -> &[SignedTransaction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Hash the next frame must link to: all-zero for an empty chain.
    pub fn tip_hash(&self) -> Digest32 {
        self.entries
            .last()
            .map(|stx| stx.tx_hash)
            .unwrap_or(Digest32::ZERO)
    }

    /// Link-checked append. The stored hash is also recomputed so a chain
    /// built through this path always satisfies its invariants.
    pub fn append(&mut self, stx: SignedTransaction) -> Result<(), LedgerError> {
        if stx.tx.p_id != self.p_id {
            return Err(LedgerError::ProductMismatch {
                chain: self.p_id.to_hex(),
                record: stx.tx.p_id.to_hex(),
            });
        }
        if stx.tx.prev_hash != self.tip_hash() {
            return Err(LedgerError::BrokenLink { hop: self.entries.len() });
        }
        if tx_hash(&stx.tx) != stx.tx_hash {
            return Err(LedgerError::HashMismatch { hop: self.entries.len() });
        }
        self.entries.push(stx);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, stx: SignedTransaction) {
        self.entries.push(stx);
    }
}

/// All product chains, remembering global commit order so serialized
/// ledgers are reproducible byte-for-byte.
#[derive(Clone, Debug, Default)]
pub struct ChainStore {
    chains: BTreeMap<ProductId, ProductChain>,
    log: Vec<(ProductId, usize)>,
}

impl ChainStore {
    pub fn new() -> ChainStore {
        ChainStore::default()
    }

    /// Group loaded records by product, preserving file order, without
    /// enforcing links. Chains read back this way may be broken; run
    /// [`super::audit_chain`] to find out.
    pub fn from_records(records: Vec<SignedTransaction>) -> ChainStore {
        let mut store = ChainStore::new();
        for stx in records {
            let p_id = stx.tx.p_id;
            let chain = store
                .chains
                .entry(p_id)
                .or_insert_with(|| ProductChain::new(p_id));
            store.log.push((p_id, chain.len()));
            chain.push_unchecked(stx);
        }
        store
    }

    /// Strict append: link and hash checked against the product's chain.
    pub fn append(&mut self, stx: SignedTransaction) -> Result<(), LedgerError> {
        let p_id = stx.tx.p_id;
        let chain = self
            .chains
            .entry(p_id)
            .or_insert_with(|| ProductChain::new(p_id));
        let hop = chain.len();
        chain.append(stx)?;
        self.log.push((p_id, hop));
        Ok(())
    }

    pub fn chain(&self, p_id: &ProductId) -> Option<&ProductChain> {
        self.chains.get(p_id)
    }

    /// Full journey for a product, in append order; empty for unknown ids.
    pub fn trace(&self, p_id: &ProductId) -> &[SignedTransaction] {
        self.chains
            .get(p_id)
            .map(|c| c.entries())
            .unwrap_or(&[])
    }

    pub fn tip_hash(&self, p_id: &ProductId) -> Digest32 {
        self.chains
            .get(p_id)
            .map(|c| c.tip_hash())
            .unwrap_or(Digest32::ZERO)
    }

    /// Product ids in first-commit order.
    pub fn products(&self) -> Vec<ProductId> {
        let mut seen = Vec::new();
        for (p_id, hop) in &self.log {
            if *hop == 0 {
                seen.push(*p_id);
            }
        }
        seen
    }

    /// Records in global commit order, as they appear in a ledger file.
    pub fn records(&self) -> impl Iterator<Item = &SignedTransaction> {
        self.log
            .iter()
            .map(|(p_id, hop)| &self.chains[p_id].entries()[*hop])
    }

    /// Total number of committed records.
    pub fn len(&self) -> usize {
        self.log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.is_empty()
    }
}
