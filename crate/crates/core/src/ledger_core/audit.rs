//! Chain auditing: recompute every hash, recover every signer, and check
//! the custody order hop by hop.
//!
//! The auditor never trusts stored fields. Each hop's transaction hash is
//! recomputed from the frame, the signer address is recovered from the
//! signature over the recomputed signature hash, and the sender's role is
//! checked against the position the hop occupies in the journey. A ledger
//! file carries no role registry, so one can be reconstructed positionally:
//! hop 0 and 1 senders must be suppliers, hop 2 the producer, and so on,
//! consistently across every product in the store.

use std::collections::BTreeMap;

use crate::contract_vm::{ActorRole, RoleRegistry};
use crate::curve_crypto::{derive_address, ecdsa_recover, ActorAddress, CurveParams};

use super::chain::ChainStore;
use super::tx::{sig_h, tx_hash, ActorId, ProductId};

/// Outcome of the checks on one hop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopAudit {
    pub hop: usize,
    /// prev_hash links to the prior hop (zero for hop 0) and the stored
    /// tx_hash matches the recomputed one.
    pub hash_link_ok: bool,
    /// Signature recovers to the recorded sender, and a_id names the same
    /// party.
    pub sig_ok: bool,
    /// Sender plays the role this hop position demands.
    pub custody_ok: bool,
    /// Address the signature actually recovers to, when recovery succeeds.
    pub recovered: Option<ActorAddress>,
}

impl HopAudit {
    pub fn pass(&self) -> bool {
        self.hash_link_ok && self.sig_ok && self.custody_ok
    }

    /// Name of the first failed check, for diagnostics.
    pub fn first_failure(&self) -> Option<&'static str> {
        if !self.hash_link_ok {
            Some("hash-link")
        } else if !self.sig_ok {
            Some("signature")
        } else if !self.custody_ok {
            Some("custody-order")
        } else {
            None
        }
    }
}

/// Per-product audit verdict: true only when every hop passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub p_id: ProductId,
    pub hops: Vec<HopAudit>,
    pub verdict: bool,
    pub note: Option<String>,
}

impl AuditReport {
    pub fn first_failing_hop(&self) -> Option<&HopAudit> {
        self.hops.iter().find(|h| !h.pass())
    }
}

/// Reconstruct a role registry from ledger contents alone: the sender of
/// hop `i` is assigned the role that position demands. Addresses that end
/// up claiming two different roles are dropped, which fails the custody
/// check on every hop they sign.
pub fn derive_roles(store: &ChainStore) -> RoleRegistry {
    let mut candidates: BTreeMap<ActorAddress, ActorRole> = BTreeMap::new();
    let mut conflicted: Vec<ActorAddress> = Vec::new();
    for p_id in store.products() {
        for (hop, stx) in store.trace(&p_id).iter().enumerate() {
            let Some(role) = ActorRole::expected_sender(hop) else {
                continue;
            };
            match candidates.get(&stx.sender) {
                None => {
                    candidates.insert(stx.sender, role);
                }
                Some(existing) if *existing != role => conflicted.push(stx.sender),
                Some(_) => {}
            }
        }
    }
    let mut registry = RoleRegistry::new();
    for (addr, role) in candidates {
        if !conflicted.contains(&addr) {
            registry.register(addr, role);
        }
    }
    registry
}

/// Audit one product chain against a role registry. For ledger-only
/// audits, pass the output of [`derive_roles`].
pub fn audit_chain(
    store: &ChainStore,
    p_id: &ProductId,
    roles: &RoleRegistry,
    curve: &CurveParams,
) -> AuditReport {
    let entries = store.trace(p_id);
    if entries.is_empty() {
        return AuditReport {
            p_id: *p_id,
            hops: Vec::new(),
            verdict: false,
            note: Some("unknown product".to_string()),
        };
    }

    let mut hops = Vec::with_capacity(entries.len());
    let mut prev = None;
    for (hop, stx) in entries.iter().enumerate() {
        let recomputed = tx_hash(&stx.tx);
        let link = match prev {
            None => stx.tx.prev_hash.is_zero(),
            Some(prev_hash) => stx.tx.prev_hash == prev_hash,
        };
        let hash_link_ok = link && recomputed == stx.tx_hash;

        let recovered = ecdsa_recover(&sig_h(&recomputed), &stx.sig, curve)
            .ok()
            .and_then(|point| derive_address(&point).ok());
        let sig_ok = recovered == Some(stx.sender)
            && stx.tx.a_id == ActorId::from(&stx.sender)
            && stx.tx.validate().is_ok();

        let custody_ok = match ActorRole::expected_sender(hop) {
            None => false, // journey longer than the role order allows
            Some(expected) => roles.role_of(&stx.sender) == Some(expected),
        };

        hops.push(HopAudit {
            hop,
            hash_link_ok,
            sig_ok,
            custody_ok,
            recovered,
        });
        prev = Some(stx.tx_hash);
    }

    let verdict = hops.iter().all(|h| h.pass());
    AuditReport {
        p_id: *p_id,
        hops,
        verdict,
        note: None,
    }
}

/// Audit every product in first-commit order.
pub fn audit_all(
    store: &ChainStore,
    roles: &RoleRegistry,
    curve: &CurveParams,
) -> Vec<AuditReport> {
    store
        .products()
        .iter()
        .map(|p_id| audit_chain(store, p_id, roles, curve))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_crypto::{keygen, KeyPair, SeedEntropy, Signature, SECP256K1};
    use crate::ledger_core::ndjson;
    use crate::ledger_core::tx::{SignedTransaction, Transaction};

    /// A full 5-hop journey for one product, signed by one keypair per
    /// sending role, plus the registry that matches.
    pub fn fixture(
        product_seed: u8,
    ) -> (ChainStore, RoleRegistry, Vec<KeyPair>, ProductId) {
        let curve = &*SECP256K1;
        let keypairs: Vec<KeyPair> = (0..5)
            .map(|i| keygen(&mut SeedEntropy::new([i as u8 + 100; 32]), curve).unwrap())
            .collect();
        let mut registry = RoleRegistry::new();
        for (kp, role) in keypairs.iter().zip(ActorRole::ORDER) {
            registry.register(kp.address(), role);
        }
        let p_id = ProductId([product_seed; 32]);
        let mut store = ChainStore::new();
        let base = 1_700_000_000u64;
        for hop in 0..5usize {
            let signer_role = ActorRole::expected_sender(hop).unwrap();
            let kp = &keypairs[signer_role.position()];
            let tx = Transaction {
                a_id: ActorId::from(&kp.address()),
                p_id,
                p_inf: format!("{{\"desc\":\"hop {hop}\",\"pcount\":4}}").into_bytes(),
                p_intime: base + hop as u64 * 60,
                p_outtime: if hop == 0 { 0 } else { base + hop as u64 * 60 + 30 },
                prev_hash: store.tip_hash(&p_id),
            };
            store
                .append(SignedTransaction::sign(tx, kp, curve).unwrap())
                .unwrap();
        }
        (store, registry, keypairs, p_id)
    }

    #[test]
    fn pristine_chain_passes() {
        let (store, registry, _, p_id) = fixture(1);
        let report = audit_chain(&store, &p_id, &registry, &SECP256K1);
        assert!(report.verdict);
        assert_eq!(report.hops.len(), 5);
        assert!(report.hops.iter().all(|h| h.pass()));
        assert!(report.first_failing_hop().is_none());
    }

    #[test]
    fn derived_registry_matches_real_one() {
        let (store, registry, _, p_id) = fixture(2);
        let derived = derive_roles(&store);
        // Customers never sign, so derivation can only see the four
        // sending roles; those must agree with the true registry.
        assert_eq!(derived.len(), 4);
        for (addr, role) in derived.iter() {
            assert_eq!(registry.role_of(addr), Some(*role));
        }
        assert!(audit_chain(&store, &p_id, &derived, &SECP256K1).verdict);
    }

    #[test]
    fn unknown_product_fails_with_note() {
        let (store, registry, _, _) = fixture(3);
        let report = audit_chain(&store, &ProductId([0xff; 32]), &registry, &SECP256K1);
        assert!(!report.verdict);
        assert_eq!(report.note.as_deref(), Some("unknown product"));
        assert!(report.hops.is_empty());
    }

    #[test]
    fn tampering_p_inf_breaks_hop_hash() {
        let (store, registry, _, p_id) = fixture(4);
        let mut records: Vec<SignedTransaction> = store.records().cloned().collect();
        records[2].tx.p_inf[10] ^= 0x20;
        let tampered = ChainStore::from_records(records);
        let report = audit_chain(&tampered, &p_id, &registry, &SECP256K1);
        assert!(!report.verdict);
        let failing = report.first_failing_hop().unwrap();
        assert_eq!(failing.hop, 2);
        assert!(!failing.hash_link_ok);
        assert_eq!(failing.first_failure(), Some("hash-link"));
    }

    #[test]
    fn splicing_a_signature_breaks_sender_match() {
        let (store, registry, _, p_id) = fixture(5);
        let mut records: Vec<SignedTransaction> = store.records().cloned().collect();
        records[1].sig = records[0].sig;
        let spliced = ChainStore::from_records(records);
        let report = audit_chain(&spliced, &p_id, &registry, &SECP256K1);
        assert!(!report.verdict);
        let hop1 = &report.hops[1];
        // The hash still matches; the recovered address does not.
        assert!(hop1.hash_link_ok);
        assert!(!hop1.sig_ok);
        assert_ne!(hop1.recovered, Some(spliced.trace(&p_id)[1].sender));
    }

    #[test]
    fn every_mutated_field_flips_the_verdict() {
        let curve = &*SECP256K1;
        let (store, registry, _, p_id) = fixture(6);
        let pristine: Vec<SignedTransaction> = store.records().cloned().collect();
        // One mutation per field of one record, swept across all hops.
        for hop in 0..pristine.len() {
            for field in 0..9 {
                let mut records = pristine.clone();
                let r = &mut records[hop];
                match field {
                    0 => r.tx.a_id.0[31] ^= 1,
                    1 => r.tx.p_id.0[0] ^= 1,
                    2 => r.tx.p_inf.push(b'!'),
                    3 => r.tx.p_intime ^= 1,
                    4 => r.tx.p_outtime ^= 1,
                    5 => r.tx.prev_hash.0[0] ^= 1,
                    6 => r.tx_hash.0[0] ^= 1,
                    7 => {
                        let mut bytes = r.sig.to_bytes();
                        bytes[5] ^= 1;
                        r.sig = Signature::from_bytes(&bytes);
                    }
                    8 => r.sender.0[0] ^= 1,
                    _ => unreachable!(),
                }
                let mutated = ChainStore::from_records(records);
                // p_id mutations relocate the record; audit each product.
                let all_ok = mutated
                    .products()
                    .iter()
                    .all(|p| audit_chain(&mutated, p, &derive_roles(&mutated), curve).verdict);
                assert!(!all_ok, "hop {hop} field {field} survived mutation");
                // The real registry must catch it too.
                if mutated.trace(&p_id).len() == 5 {
                    assert!(
                        !audit_chain(&mutated, &p_id, &registry, curve).verdict,
                        "hop {hop} field {field} passed under the true registry"
                    );
                }
            }
        }
    }

    #[test]
    fn wrong_keys_cannot_forge_a_hop() {
        // Non-repudiation: signatures from 100 other keys never validate as
        // the recorded sender.
        let curve = &*SECP256K1;
        let (store, registry, _, p_id) = fixture(7);
        let pristine: Vec<SignedTransaction> = store.records().cloned().collect();
        for i in 0..100u32 {
            let mut seed = [0xd0u8; 32];
            seed[..4].copy_from_slice(&i.to_be_bytes());
            let impostor = keygen(&mut SeedEntropy::new(seed), curve).unwrap();
            let mut records = pristine.clone();
            let target = &mut records[2];
            let resigned =
                SignedTransaction::sign(target.tx.clone(), &impostor, curve).unwrap();
            // Keep the recorded sender: the impostor claims to be the producer.
            target.sig = resigned.sig;
            let forged = ChainStore::from_records(records);
            let report = audit_chain(&forged, &p_id, &registry, curve);
            assert!(!report.verdict, "impostor {i} was accepted");
            assert!(!report.hops[2].sig_ok);
        }
    }

    #[test]
    fn persisted_ledger_contains_no_key_material() {
        // The anonymity surface: addresses, signatures, digests only.
        let (store, _, keypairs, _) = fixture(8);
        let body = ndjson::to_ndjson(store.records());
        for kp in &keypairs {
            let private_hex = kp.private_key().to_hex();
            let (x, y) = kp.public_key().coordinates().unwrap();
            assert!(!body.contains(&private_hex), "private scalar leaked");
            assert!(!body.contains(&x.to_hex()), "public x leaked");
            assert!(!body.contains(&y.to_hex()), "public y leaked");
            let uncompressed =
                crate::curve_crypto::encode_point_uncompressed(kp.public_key()).unwrap();
            assert!(!body.contains(&hex::encode(uncompressed)), "public point leaked");
        }
        // Addresses are the one identity artifact that *should* appear: every
        // signing role shows up as a sender; the customer never signs.
        for kp in &keypairs[..4] {
            assert!(body.contains(&kp.address().to_hex()));
        }
        assert!(!body.contains(&keypairs[4].address().to_hex()));
    }

    #[test]
    fn conflicting_role_claims_fail_custody() {
        let curve = &*SECP256K1;
        let (store, _, keypairs, p_id) = fixture(9);
        let mut records: Vec<SignedTransaction> = store.records().cloned().collect();
        // Re-sign hop 3 with the producer's key and claim producer as sender:
        // the producer address now appears at positions 2 and 3.
        let producer = &keypairs[1];
        let mut tx = records[3].tx.clone();
        tx.a_id = ActorId::from(&producer.address());
        records[3] = SignedTransaction::sign(tx, producer, curve).unwrap();
        // Fix the downstream link so only custody (not hashing) is at stake.
        let relink = records[3].tx_hash;
        records[4].tx.prev_hash = relink;
        records[4] = SignedTransaction::sign(records[4].tx.clone(), &keypairs[3], curve).unwrap();

        let forged = ChainStore::from_records(records);
        let derived = derive_roles(&forged);
        // The producer address claimed two roles and is dropped.
        assert_eq!(derived.role_of(&producer.address()), None);
        let report = audit_chain(&forged, &p_id, &derived, curve);
        assert!(!report.verdict);
        assert!(!report.hops[2].custody_ok || !report.hops[3].custody_ok);
    }
}
