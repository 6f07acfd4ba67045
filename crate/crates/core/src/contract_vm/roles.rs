//! The five supply-chain roles and the fixed custody order.

use std::collections::BTreeMap;
use std::fmt;

use crate::curve_crypto::ActorAddress;

/// Custody flows SUPPLIER → PRODUCER → RETAILER → DEALER → CUSTOMER.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ActorRole {
    Supplier,
    Producer,
    Retailer,
    Dealer,
    Customer,
}

impl ActorRole {
    /// The custody order: index 0 holds first, index 4 holds last.
    pub const ORDER: [ActorRole; 5] = [
        ActorRole::Supplier,
        ActorRole::Producer,
        ActorRole::Retailer,
        ActorRole::Dealer,
        ActorRole::Customer,
    ];

    /// Position in the custody order.
    pub fn position(self) -> usize {
        Self::ORDER.iter().position(|r| *r == self).unwrap()
    }

    /// The role a product moves to next; `None` for the terminal customer.
    pub fn successor(self) -> Option<ActorRole> {
        Self::ORDER.get(self.position() + 1).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ActorRole::Supplier => "SUPPLIER",
            ActorRole::Producer => "PRODUCER",
            ActorRole::Retailer => "RETAILER",
            ActorRole::Dealer => "DEALER",
            ActorRole::Customer => "CUSTOMER",
        }
    }

    /// Role expected to *sign* hop `i` of a product chain. The supplier
    /// signs both the creation frame and the first transfer, after which
    /// each holder signs the handoff to its successor; the customer never
    /// signs.
    pub fn expected_sender(hop: usize) -> Option<ActorRole> {
        match hop {
            0 | 1 => Some(ActorRole::Supplier),
            2 => Some(ActorRole::Producer),
            3 => Some(ActorRole::Retailer),
            4 => Some(ActorRole::Dealer),
            _ => None,
        }
    }

    /// Role holding custody *after* hop `i` lands: the stage a trace
    /// displays for that hop.
    pub fn stage(hop: usize) -> Option<ActorRole> {
        Self::ORDER.get(hop).copied()
    }
}

impl fmt::Display for ActorRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Who plays which role. Registered once at deployment; queried on every
/// custody decision and during audits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleRegistry {
    map: BTreeMap<ActorAddress, ActorRole>,
}

impl RoleRegistry {
    pub fn new() -> RoleRegistry {
        RoleRegistry::default()
    }

    pub fn register(&mut self, addr: ActorAddress, role: ActorRole) {
        self.map.insert(addr, role);
    }

    pub fn role_of(&self, addr: &ActorAddress) -> Option<ActorRole> {
        self.map.get(addr).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ActorAddress, &ActorRole)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
