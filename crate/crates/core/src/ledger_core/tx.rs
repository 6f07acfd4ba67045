//! The transaction frame and its canonical hash.
//!
//! A frame records one custody step: who acted (`a_id`), which product
//! (`p_id`), free-form product information, the acquire/handoff timestamps,
//! and the hash of the previous frame for the same product. The canonical
//! encoding is a fixed 144-byte layout; `p_inf` enters it through its own
//! keccak digest so arbitrary payload sizes never change the preimage
//! shape.

use crate::curve_crypto::{
    derive_address, ecdsa_recover, ecdsa_sign, keccak256, keccak256_parts, ActorAddress,
    CurveParams, Digest32, KeyPair, Signature,
};

use super::LedgerError;

/// Domain-separation prefix for the digest that is actually signed.
const SIGNED_MESSAGE_PREFIX: &[u8] = b"\x19ProvChain Signed Message:\n32";

/// 32-byte actor identifier: the actor's address, left-padded with zeros,
/// so the nonzero check and the recovered-address comparison name the same
/// party.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ActorId(pub [u8; 32]);

impl ActorId {
    pub const ZERO: ActorId = ActorId([0; 32]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 32]
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<ActorId> {
        let raw = hex::decode(s).ok()?;
        Some(ActorId(raw.try_into().ok()?))
    }

    /// The low-20-byte address form, when the id is a padded address.
    pub fn as_address(&self) -> Option<ActorAddress> {
        if self.0[..12] != [0; 12] {
            return None;
        }
        let mut addr = [0u8; 20];
        addr.copy_from_slice(&self.0[12..]);
        Some(ActorAddress(addr))
    }
}

impl From<&ActorAddress> for ActorId {
    fn from(addr: &ActorAddress) -> ActorId {
        let mut id = [0u8; 32];
        id[12..].copy_from_slice(addr.as_bytes());
        ActorId(id)
    }
}

/// 32-byte product identifier.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProductId(pub [u8; 32]);

impl ProductId {
    pub const ZERO: ProductId = ProductId([0; 32]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 32]
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<ProductId> {
        let raw = hex::decode(s).ok()?;
        Some(ProductId(raw.try_into().ok()?))
    }
}

/// One custody frame. `p_outtime = 0` means the product has not been handed
/// off yet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transaction {
    pub a_id: ActorId,
    pub p_id: ProductId,
    pub p_inf: Vec<u8>,
    pub p_intime: u64,
    pub p_outtime: u64,
    pub prev_hash: Digest32,
}

impl Transaction {
    /// Structural invariants: nonzero ids and a handoff no earlier than the
    /// acquisition.
    pub fn validate(&self) -> Result<(), LedgerError> {
        if self.a_id.is_zero() {
            return Err(LedgerError::InvalidTransaction("a_id must be nonzero"));
        }
        if self.p_id.is_zero() {
            return Err(LedgerError::InvalidTransaction("p_id must be nonzero"));
        }
        if self.p_outtime != 0 && self.p_outtime < self.p_intime {
            return Err(LedgerError::InvalidTransaction(
                "p_outtime must be 0 or >= p_intime",
            ));
        }
        Ok(())
    }
}

/// Canonical 144-byte layout:
/// a_id(32) ‖ p_id(32) ‖ keccak256(p_inf)(32) ‖ p_intime(8, BE) ‖
/// p_outtime(8, BE) ‖ prev_hash(32).
pub fn encode_tx_canonical(tx: &Transaction) -> [u8; 144] {
    let mut out = [0u8; 144];
    out[..32].copy_from_slice(&tx.a_id.0);
    out[32..64].copy_from_slice(&tx.p_id.0);
    out[64..96].copy_from_slice(&keccak256(&tx.p_inf).0);
    out[96..104].copy_from_slice(&tx.p_intime.to_be_bytes());
    out[104..112].copy_from_slice(&tx.p_outtime.to_be_bytes());
    out[112..144].copy_from_slice(&tx.prev_hash.0);
    out
}

/// The transaction hash: keccak256 of the canonical encoding.
pub fn tx_hash(tx: &Transaction) -> Digest32 {
    keccak256(&encode_tx_canonical(tx))
}

/// The signature hash: the transaction hash wrapped in a domain-separated
/// message, so a ledger signature can never be replayed as anything else.
pub fn sig_h(hash: &Digest32) -> Digest32 {
    keccak256_parts(&[SIGNED_MESSAGE_PREFIX, &hash.0])
}

/// A frame plus everything the contract needs to validate it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedTransaction {
    pub tx: Transaction,
    pub tx_hash: Digest32,
    pub sig: Signature,
    pub sender: ActorAddress,
}

impl SignedTransaction {
    /// Off-chain signing step: hash the frame, sign the signature hash,
    /// record the signer's address.
    pub fn sign(
        tx: Transaction,
        keypair: &KeyPair,
        curve: &CurveParams,
    ) -> Result<SignedTransaction, LedgerError> {
        tx.validate()?;
        let hash = tx_hash(&tx);
        let sig = ecdsa_sign(keypair.private_key(), &sig_h(&hash), curve)
            .map_err(LedgerError::Crypto)?;
        Ok(SignedTransaction {
            tx,
            tx_hash: hash,
            sig,
            sender: keypair.address(),
        })
    }

    /// Recomputes the hash and recovers the signer; true only when both
    /// stored fields are consistent with the frame.
    pub fn verify_integrity(&self, curve: &CurveParams) -> bool {
        let recomputed = tx_hash(&self.tx);
        if recomputed != self.tx_hash {
            return false;
        }
        match ecdsa_recover(&sig_h(&recomputed), &self.sig, curve) {
            Ok(point) => match derive_address(&point) {
                Ok(addr) => addr == self.sender,
                Err(_) => false,
            },
            Err(_) => false,
        }
    }
}
