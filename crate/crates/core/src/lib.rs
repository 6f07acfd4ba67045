//! Supply-chain provenance on a simulated permissioned chain.
//!
//! Products move through five fixed roles (supplier, producer, retailer,
//! dealer, customer) and every custody step is a signed, hash-linked
//! transaction. Actors sign off-chain with ECDSA; an in-process contract
//! verifies by recovering the signer's address, enforces the custody order,
//! and charges deterministic gas in either storage or event recording mode.
//! A small network simulator replicates the contract across N nodes with
//! unanimous validation and measures how the work scales.
//!
//! Crate layout mirrors that pipeline:
//!
//! - [`curve_crypto`]: field/curve arithmetic, Keccak-256, ECDSA with
//!   recovery, addresses.
//! - [`ledger_core`]: the transaction frame, canonical hashing, per-product
//!   hash chains, NDJSON persistence, audit.
//! - [`contract_vm`]: the on-chain half: signature/custody validation,
//!   storage vs. event recording, gas accounting.
//! - [`net_sim`]: broadcast, unanimous validation, convergence checks, and
//!   complexity measurements over N replicated nodes.

pub mod contract_vm;
pub mod curve_crypto;
pub mod ledger_core;
pub mod net_sim;

pub use contract_vm::{
    gas_cost, gas_report, sign_actor, verify_actor, ActorRole, ContractState, Event, GasSchedule,
    GasSeries, Receipt, RecordMode, RejectReason, RoleRegistry, Submission,
};
pub use curve_crypto::{
    derive_address, ecdsa_recover, ecdsa_sign, ecdsa_verify, keccak256, keygen, ActorAddress,
    CurveParams, Digest32, KeyPair, Point, SeedEntropy, Signature, U256, SECP256K1, TOY17,
};
pub use ledger_core::{
    audit_chain, encode_tx_canonical, sig_h, tx_hash, ActorId, AuditReport, ChainStore,
    LedgerError, ProductChain, ProductId, SignedTransaction, Transaction,
};
pub use net_sim::{
    measure_complexity, run_scenario, ComplexityReport, Consensus, FitSummary, Network, Node,
    ScenarioConfig, ScenarioError, ScenarioOutput,
};
