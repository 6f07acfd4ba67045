//! The on-chain component: actor validation, the custody state machine,
//! and deterministic gas accounting in two recording modes.

mod gas;
mod roles;
mod state;

pub use gas::{
    gas_cost, gas_report, GasMeter, GasPoint, GasSchedule, GasSeries, RecordMode, Submission,
};
pub use roles::{ActorRole, RoleRegistry};
pub use state::{
    sign_actor, verify_actor, ContractState, Event, Receipt, RejectReason, TRANSFER_TOPIC,
};
