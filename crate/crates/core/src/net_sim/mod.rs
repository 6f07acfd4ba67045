//! Simulated permissioned network: N replicated nodes, deterministic
//! broadcast order, unanimous validation, and work accounting.
//!
//! The simulator is a single-threaded event loop; given the same seed and
//! sizes it reproduces ledgers byte-for-byte on any platform.

mod complexity;
mod network;
mod node;
mod scenario;

pub use complexity::{measure_complexity, ComplexityReport, FitSummary};
pub use network::{Consensus, DeliveryRecord, Network};
pub use node::{Node, OpCounters};
pub use scenario::{
    run_scenario, ScenarioActor, ScenarioConfig, ScenarioOutput, BASE_TIME, EVENT_STRIDE,
    VALIDATION_LAG,
};

/// Errors configuring or running a scenario.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario configuration: {0}")]
    Config(String),
    #[error("complexity fit needs at least 3 runs, have {have}")]
    InsufficientData { have: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
