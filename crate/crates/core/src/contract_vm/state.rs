//! The on-chain half: validation entry points, the custody state machine,
//! and dual-mode record commitment.
//!
//! `sign_actor` and `verify_actor` are boolean contracts: every failure
//! path returns false rather than raising. `submit` is the full call:
//! verification, custody rules, commitment in the active recording mode,
//! and gas charging. Rejected calls charge the base fee and leave state
//! untouched; `state_hash` makes that checkable.
//!
//! A contract instance processes submissions strictly sequentially; clone
//! one per node and feed every node the same sequence to replicate it.

use std::collections::BTreeMap;

use crate::curve_crypto::{
    derive_address, ecdsa_recover, keccak256, keccak256_parts, ActorAddress, CurveParams,
    Digest32, Signature,
};
use crate::ledger_core::{
    encode_tx_canonical, sig_h, tx_hash, ActorId, ProductId, SignedTransaction, Transaction,
};

use super::gas::{gas_cost, GasMeter, GasSchedule, RecordMode};
use super::roles::{ActorRole, RoleRegistry};

/// Event topic marking a committed custody transfer.
pub const TRANSFER_TOPIC: &[u8] = b"ProductTransfer";

/// The fixed sequence of frame checks behind `sign_actor`.
/// `Some(addr)` when every check passes, where `addr` is the address the
/// signature recovers to.
fn evaluate(
    tx: &Transaction,
    sig: &Signature,
    now: u64,
    curve: &CurveParams,
) -> Option<ActorAddress> {
    if tx.a_id.is_zero() {
        return None;
    }
    if tx.p_id.is_zero() {
        return None;
    }
    let h = tx_hash(tx);
    if tx.p_intime >= now {
        return None;
    }
    if !sig.is_canonical(curve) {
        return None;
    }
    let point = ecdsa_recover(&sig_h(&h), sig, curve).ok()?;
    derive_address(&point).ok()
}

/// True iff the frame passes every check: nonzero ids, `p_intime` strictly
/// before `now`, and a canonical signature that recovers to some address
/// over the frame's signature hash.
pub fn sign_actor(tx: &Transaction, sig: &Signature, now: u64, curve: &CurveParams) -> bool {
    evaluate(tx, sig, now, curve).is_some()
}

/// True iff `sign_actor` holds and the recovered address equals the claimed
/// sender. `verify_actor` true implies `sign_actor` true by construction.
pub fn verify_actor(
    tx: &Transaction,
    sig: &Signature,
    sender: &ActorAddress,
    now: u64,
    curve: &CurveParams,
) -> bool {
    evaluate(tx, sig, now, curve).as_ref() == Some(sender)
}

/// Why a submission was rejected.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RejectReason {
    BadSignature,
    WrongCustodian,
    WrongRoleOrder,
    UnknownRole,
}

impl RejectReason {
    pub fn name(self) -> &'static str {
        match self {
            RejectReason::BadSignature => "bad-signature",
            RejectReason::WrongCustodian => "wrong-custodian",
            RejectReason::WrongRoleOrder => "wrong-role-order",
            RejectReason::UnknownRole => "unknown-role",
        }
    }
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one submission. Rejections are outcomes, not errors.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Receipt {
    pub accepted: bool,
    pub gas_used: u64,
    pub reason: Option<RejectReason>,
}

/// A log entry: up to four topics plus opaque data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Event {
    topics: Vec<Digest32>,
    data: Vec<u8>,
}

impl Event {
    pub fn new(topics: Vec<Digest32>, data: Vec<u8>) -> Event {
        assert!(topics.len() <= 4, "events carry at most 4 topics");
        Event { topics, data }
    }

    pub fn topics(&self) -> &[Digest32] {
        &self.topics
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }
}

/// Full contract state: who plays which role, who holds what, plus the
/// storage slots, event log, and gas meter the recording modes feed.
#[derive(Clone, Debug)]
pub struct ContractState {
    roles: RoleRegistry,
    custody: BTreeMap<ProductId, ActorAddress>,
    hop_counts: BTreeMap<ProductId, u64>,
    tips: BTreeMap<ProductId, Digest32>,
    storage: BTreeMap<Digest32, [u8; 32]>,
    events: Vec<Event>,
    gas: GasMeter,
    schedule: GasSchedule,
}

impl ContractState {
    pub fn new(schedule: GasSchedule) -> ContractState {
        ContractState {
            roles: RoleRegistry::new(),
            custody: BTreeMap::new(),
            hop_counts: BTreeMap::new(),
            tips: BTreeMap::new(),
            storage: BTreeMap::new(),
            events: Vec::new(),
            gas: GasMeter::default(),
            schedule,
        }
    }

    /// Deployment step: enroll an actor. Not metered.
    pub fn register_actor(&mut self, addr: ActorAddress, role: ActorRole) {
        self.roles.register(addr, role);
    }

    pub fn roles(&self) -> &RoleRegistry {
        &self.roles
    }

    pub fn custodian_of(&self, p_id: &ProductId) -> Option<&ActorAddress> {
        self.custody.get(p_id)
    }

    pub fn custody(&self) -> &BTreeMap<ProductId, ActorAddress> {
        &self.custody
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn storage_len(&self) -> usize {
        self.storage.len()
    }

    pub fn storage_get(&self, key: &Digest32) -> Option<&[u8; 32]> {
        self.storage.get(key)
    }

    pub fn gas(&self) -> &GasMeter {
        &self.gas
    }

    pub fn schedule(&self) -> &GasSchedule {
        &self.schedule
    }

    /// The custody decision alone, with no state change and no gas. Used
    /// by nodes to vote before anyone commits.
    pub fn decide(
        &self,
        stx: &SignedTransaction,
        to: &ActorAddress,
        now: u64,
        curve: &CurveParams,
    ) -> Result<(), RejectReason> {
        // Frame integrity: the stored hash must match, the frame must be
        // well-formed, and the previous-hash link must continue this
        // product's chain (all-zero for a product the contract has never
        // seen).
        if tx_hash(&stx.tx) != stx.tx_hash || stx.tx.validate().is_err() {
            return Err(RejectReason::BadSignature);
        }
        let expected_prev = self
            .tips
            .get(&stx.tx.p_id)
            .copied()
            .unwrap_or(Digest32::ZERO);
        if stx.tx.prev_hash != expected_prev {
            return Err(RejectReason::BadSignature);
        }
        if !verify_actor(&stx.tx, &stx.sig, &stx.sender, now, curve) {
            return Err(RejectReason::BadSignature);
        }
        if stx.tx.a_id != ActorId::from(&stx.sender) {
            return Err(RejectReason::WrongCustodian);
        }
        let sender_role = self
            .roles
            .role_of(&stx.sender)
            .ok_or(RejectReason::UnknownRole)?;
        match self.custody.get(&stx.tx.p_id) {
            Some(holder) => {
                if *holder != stx.sender {
                    return Err(RejectReason::WrongCustodian);
                }
                let to_role = self.roles.role_of(to).ok_or(RejectReason::UnknownRole)?;
                if sender_role.successor() != Some(to_role) {
                    return Err(RejectReason::WrongRoleOrder);
                }
            }
            None => {
                // A fresh product id: only a supplier may introduce it,
                // either keeping custody (self-signed genesis) or handing
                // straight to a producer.
                if sender_role != ActorRole::Supplier {
                    return Err(RejectReason::WrongCustodian);
                }
                if to != &stx.sender {
                    let to_role = self.roles.role_of(to).ok_or(RejectReason::UnknownRole)?;
                    if to_role != ActorRole::Producer {
                        return Err(RejectReason::WrongRoleOrder);
                    }
                }
            }
        }
        Ok(())
    }

    /// The full contract call: validate, commit in `mode`, charge gas.
    pub fn submit(
        &mut self,
        stx: &SignedTransaction,
        to: &ActorAddress,
        mode: RecordMode,
        now: u64,
        curve: &CurveParams,
    ) -> Receipt {
        match self.decide(stx, to, now, curve) {
            Ok(()) => {
                let gas_used = self.commit(stx, to, mode);
                Receipt { accepted: true, gas_used, reason: None }
            }
            Err(reason) => {
                self.gas.charge(self.schedule.base_call);
                Receipt {
                    accepted: false,
                    gas_used: self.schedule.base_call,
                    reason: Some(reason),
                }
            }
        }
    }

    /// Apply a decision that already passed [`ContractState::decide`].
    pub(crate) fn commit(
        &mut self,
        stx: &SignedTransaction,
        to: &ActorAddress,
        mode: RecordMode,
    ) -> u64 {
        let p_id = stx.tx.p_id;
        let hop = *self.hop_counts.get(&p_id).unwrap_or(&0);
        let encoding = encode_tx_canonical(&stx.tx);
        let sig_bytes = stx.sig.to_bytes();

        let gas_used = match mode {
            RecordMode::Storage => {
                // Seven fresh slots per record: five for the canonical
                // encoding (v tucked into the sixteen spare bytes of the
                // fifth), then r and s. The transaction hash is not stored;
                // it recomputes from the encoding.
                let mut slots: Vec<[u8; 32]> = Vec::with_capacity(7);
                for chunk in 0..4 {
                    let mut slot = [0u8; 32];
                    slot.copy_from_slice(&encoding[32 * chunk..32 * chunk + 32]);
                    slots.push(slot);
                }
                let mut tail = [0u8; 32];
                tail[..16].copy_from_slice(&encoding[128..144]);
                tail[16] = stx.sig.v;
                slots.push(tail);
                let mut r = [0u8; 32];
                r.copy_from_slice(&sig_bytes[..32]);
                slots.push(r);
                let mut s = [0u8; 32];
                s.copy_from_slice(&sig_bytes[32..64]);
                slots.push(s);

                let mut new_slots = 0usize;
                for (index, value) in slots.into_iter().enumerate() {
                    let key = keccak256_parts(&[
                        &p_id.0,
                        &hop.to_be_bytes(),
                        &[index as u8],
                    ]);
                    if self.storage.insert(key, value).is_none() {
                        new_slots += 1;
                    }
                }
                gas_cost(&self.schedule, mode, 0, 0, new_slots)
            }
            RecordMode::Event => {
                let mut data = Vec::with_capacity(encoding.len() + sig_bytes.len());
                data.extend_from_slice(&encoding);
                data.extend_from_slice(&sig_bytes);
                let size = data.len();
                let topics = vec![keccak256(TRANSFER_TOPIC), Digest32(p_id.0)];
                let n_topics = topics.len();
                self.events.push(Event::new(topics, data));
                gas_cost(&self.schedule, mode, size, n_topics, 0)
            }
        };

        self.custody.insert(p_id, *to);
        self.hop_counts.insert(p_id, hop + 1);
        self.tips.insert(p_id, stx.tx_hash);
        self.gas.charge(gas_used);
        gas_used
    }

    /// Charge gas without touching any other state; the rejection path of
    /// a call whose decision was made elsewhere.
    pub(crate) fn charge_flat(&mut self, amount: u64) {
        self.gas.charge(amount);
    }

    /// Keccak over a canonical serialization of everything observable:
    /// roles, custody, hop counts, storage, events, gas, and the schedule.
    pub fn state_hash(&self) -> Digest32 {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"roles");
        for (addr, role) in self.roles.iter() {
            bytes.extend_from_slice(addr.as_bytes());
            bytes.push(role.position() as u8);
        }
        bytes.extend_from_slice(b"custody");
        for (p_id, addr) in &self.custody {
            bytes.extend_from_slice(&p_id.0);
            bytes.extend_from_slice(addr.as_bytes());
        }
        bytes.extend_from_slice(b"hops");
        for (p_id, count) in &self.hop_counts {
            bytes.extend_from_slice(&p_id.0);
            bytes.extend_from_slice(&count.to_be_bytes());
        }
        bytes.extend_from_slice(b"tips");
        for (p_id, tip) in &self.tips {
            bytes.extend_from_slice(&p_id.0);
            bytes.extend_from_slice(&tip.0);
        }
        bytes.extend_from_slice(b"storage");
        for (key, value) in &self.storage {
            bytes.extend_from_slice(&key.0);
            bytes.extend_from_slice(value);
        }
        bytes.extend_from_slice(b"events");
        for event in &self.events {
            bytes.extend_from_slice(&(event.topics.len() as u32).to_be_bytes());
            for topic in &event.topics {
                bytes.extend_from_slice(&topic.0);
            }
            bytes.extend_from_slice(&(event.data.len() as u64).to_be_bytes());
            bytes.extend_from_slice(&event.data);
        }
        bytes.extend_from_slice(b"gas");
        bytes.extend_from_slice(&self.gas.total.to_be_bytes());
        bytes.extend_from_slice(&self.gas.last_call.to_be_bytes());
        bytes.extend_from_slice(&self.schedule.schedule_id().into_bytes());
        keccak256(&bytes)
    }
}
