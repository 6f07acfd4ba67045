//! One validating node: a contract replica, a ledger replica, a clock
//! offset, and the counters behind the complexity report.

use crate::contract_vm::{ContractState, GasSchedule, RecordMode, RejectReason, Submission};
use crate::curve_crypto::{keccak256_parts, CurveParams, Digest32};
use crate::ledger_core::ChainStore;

/// Per-node work counters. Monotone non-decreasing by construction.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounters {
    /// Transactions this node has processed (voted on).
    pub processed: u64,
    /// Signatures produced by actors submitting through this node.
    pub signed: u64,
    /// Signature verifications this node has performed.
    pub verified: u64,
}

/// A network participant holding its own copy of everything.
#[derive(Clone, Debug)]
pub struct Node {
    id: u32,
    pub contract: ContractState,
    pub store: ChainStore,
    clock_offset: i64,
    pub counters: OpCounters,
}

impl Node {
    pub fn new(id: u32, schedule: GasSchedule) -> Node {
        Node {
            id,
            contract: ContractState::new(schedule),
            store: ChainStore::new(),
            clock_offset: 0,
            counters: OpCounters::default(),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn clock_offset(&self) -> i64 {
        self.clock_offset
    }

    pub fn set_clock_offset(&mut self, offset: i64) {
        self.clock_offset = offset;
    }

    /// This node's reading of a global timestamp.
    pub fn local_now(&self, global_now: u64) -> u64 {
        if self.clock_offset >= 0 {
            global_now.saturating_add(self.clock_offset as u64)
        } else {
            global_now.saturating_sub(self.clock_offset.unsigned_abs())
        }
    }

    /// Independent validation under the local clock; counts the work but
    /// changes nothing.
    pub fn vote(&mut self, sub: &Submission, curve: &CurveParams) -> Result<(), RejectReason> {
        self.counters.processed += 1;
        self.counters.verified += 1;
        self.contract
            .decide(&sub.stx, &sub.to, self.local_now(sub.now), curve)
    }

    /// Apply a unanimously accepted submission: commit in the contract and
    /// append to the local ledger.
    pub(crate) fn apply(&mut self, sub: &Submission, mode: RecordMode) -> u64 {
        let gas = self.contract.commit(&sub.stx, &sub.to, mode);
        self.store
            .append(sub.stx.clone())
            .expect("accepted submissions extend the chain tip");
        gas
    }

    /// Charge the rejection fee; state is otherwise untouched.
    pub(crate) fn charge_rejection(&mut self) -> u64 {
        let base = self.contract.schedule().base_call;
        self.contract.charge_flat(base);
        base
    }

    /// Hash of everything this node holds: contract state plus ledger
    /// contents. Two nodes with equal hashes are interchangeable.
    pub fn state_hash(&self) -> Digest32 {
        let ledger = crate::ledger_core::ndjson::to_ndjson(self.store.records());
        keccak256_parts(&[&self.contract.state_hash().0, ledger.as_bytes()])
    }
}
