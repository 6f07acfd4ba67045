//! Scenario configuration and the deterministic end-to-end runner.
//!
//! A scenario drives `n_products` through the full five-hop journey on an
//! N-node network. Everything (keys, product ids, payload contents,
//! timestamps) derives from the seed, so the same configuration always
//! produces byte-identical ledgers.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;

use crate::contract_vm::{ActorRole, GasSchedule, RecordMode, Submission};
use crate::curve_crypto::{keccak256_parts, Digest32, KeyPair, SeedEntropy, SECP256K1};
use crate::ledger_core::{ndjson, ActorId, ProductId, SignedTransaction, Transaction};

use super::complexity::ComplexityReport;
use super::network::Network;
use super::node::OpCounters;
use super::ScenarioError;

/// Scenario time is synthetic: a fixed epoch plus a fixed stride per event,
/// with validation lagging the event by a constant. Real clocks never enter
/// the simulation, which is what makes reruns byte-identical.
pub const BASE_TIME: u64 = 1_700_000_000;
pub const EVENT_STRIDE: u64 = 60;
pub const VALIDATION_LAG: u64 = 30;

/// Everything a run needs. Parse from JSON or `key = value` lines via
/// [`ScenarioConfig::parse`], or start from `Default` and override.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub n_nodes: u32,
    pub n_products: u32,
    pub rng_seed: u64,
    pub mode: RecordMode,
    pub gas: GasSchedule,
    /// (node id, clock offset seconds) fixtures.
    pub clock_skew: Vec<(u32, i64)>,
    /// One actor set per product instead of a shared pool.
    pub per_product_actors: bool,
}

impl Default for ScenarioConfig {
    fn default() -> ScenarioConfig {
        ScenarioConfig {
            n_nodes: 5,
            n_products: 10,
            rng_seed: 42,
            mode: RecordMode::Event,
            gas: GasSchedule::default(),
            clock_skew: Vec::new(),
            per_product_actors: false,
        }
    }
}

/// JSON shape of the config file; every field optional.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n_nodes: Option<u32>,
    n_products: Option<u32>,
    rng_seed: Option<u64>,
    mode: Option<String>,
    clock_skew: Option<String>,
    per_product_actors: Option<bool>,
    gas_base_call: Option<u64>,
    gas_sstore_new: Option<u64>,
    gas_sstore_update: Option<u64>,
    gas_log_base: Option<u64>,
    gas_log_topic: Option<u64>,
    gas_log_data_byte: Option<u64>,
}

impl ScenarioConfig {
    /// Accepts a JSON object or flat `key = value` lines (`#` comments).
    pub fn parse(text: &str) -> Result<ScenarioConfig, ScenarioError> {
        let trimmed = text.trim_start();
        let file: ConfigFile = if trimmed.starts_with('{') {
            serde_json::from_str(trimmed)
                .map_err(|e| ScenarioError::Config(format!("bad JSON config: {e}")))?
        } else {
            Self::parse_kv(text)?
        };
        let mut cfg = ScenarioConfig::default();
        if let Some(v) = file.n_nodes {
            cfg.n_nodes = v;
        }
        if let Some(v) = file.n_products {
            cfg.n_products = v;
        }
        if let Some(v) = file.rng_seed {
            cfg.rng_seed = v;
        }
        if let Some(v) = file.mode {
            cfg.mode = v.parse().map_err(ScenarioError::Config)?;
        }
        if let Some(v) = file.clock_skew {
            cfg.clock_skew = Self::parse_skew(&v)?;
        }
        if let Some(v) = file.per_product_actors {
            cfg.per_product_actors = v;
        }
        if let Some(v) = file.gas_base_call {
            cfg.gas.base_call = v;
        }
        if let Some(v) = file.gas_sstore_new {
            cfg.gas.sstore_new = v;
        }
        if let Some(v) = file.gas_sstore_update {
            cfg.gas.sstore_update = v;
        }
        if let Some(v) = file.gas_log_base {
            cfg.gas.log_base = v;
        }
        if let Some(v) = file.gas_log_topic {
            cfg.gas.log_topic = v;
        }
        if let Some(v) = file.gas_log_data_byte {
            cfg.gas.log_data_byte = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn parse_kv(text: &str) -> Result<ConfigFile, ScenarioError> {
        let mut file = ConfigFile {
            n_nodes: None,
            n_products: None,
            rng_seed: None,
            mode: None,
            clock_skew: None,
            per_product_actors: None,
            gas_base_call: None,
            gas_sstore_new: None,
            gas_sstore_update: None,
            gas_log_base: None,
            gas_log_topic: None,
            gas_log_data_byte: None,
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ScenarioError::Config(format!("line {}: expected key = value", i + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                ScenarioError::Config(format!("line {}: bad {what}: {value:?}", i + 1))
            };
            match key {
                "n_nodes" => file.n_nodes = Some(value.parse().map_err(|_| bad("n_nodes"))?),
                "n_products" => {
                    file.n_products = Some(value.parse().map_err(|_| bad("n_products"))?)
                }
                "rng_seed" => file.rng_seed = Some(value.parse().map_err(|_| bad("rng_seed"))?),
                "mode" => file.mode = Some(value.to_string()),
                "clock_skew" => file.clock_skew = Some(value.to_string()),
                "per_product_actors" => {
                    file.per_product_actors =
                        Some(value.parse().map_err(|_| bad("per_product_actors"))?)
                }
                "gas_base_call" => {
                    file.gas_base_call = Some(value.parse().map_err(|_| bad("gas_base_call"))?)
                }
                "gas_sstore_new" => {
                    file.gas_sstore_new = Some(value.parse().map_err(|_| bad("gas_sstore_new"))?)
                }
                "gas_sstore_update" => {
                    file.gas_sstore_update =
                        Some(value.parse().map_err(|_| bad("gas_sstore_update"))?)
                }
                "gas_log_base" => {
                    file.gas_log_base = Some(value.parse().map_err(|_| bad("gas_log_base"))?)
                }
                "gas_log_topic" => {
                    file.gas_log_topic = Some(value.parse().map_err(|_| bad("gas_log_topic"))?)
                }
                "gas_log_data_byte" => {
                    file.gas_log_data_byte =
                        Some(value.parse().map_err(|_| bad("gas_log_data_byte"))?)
                }
                other => {
                    return Err(ScenarioError::Config(format!(
                        "line {}: unknown key {other:?}",
                        i + 1
                    )))
                }
            }
        }
        Ok(file)
    }

    /// `"0:-120,3:45"`: node id, colon, signed offset.
    fn parse_skew(text: &str) -> Result<Vec<(u32, i64)>, ScenarioError> {
        let mut out = Vec::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (node, offset) = part
                .split_once(':')
                .ok_or_else(|| ScenarioError::Config(format!("bad clock_skew entry {part:?}")))?;
            let node = node.trim().parse().map_err(|_| {
                ScenarioError::Config(format!("bad clock_skew node id {node:?}"))
            })?;
            let offset = offset.trim().parse().map_err(|_| {
                ScenarioError::Config(format!("bad clock_skew offset {offset:?}"))
            })?;
            out.push((node, offset));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n_nodes < 1 {
            return Err(ScenarioError::Config("n_nodes must be at least 1".into()));
        }
        if self.n_products < 1 {
            return Err(ScenarioError::Config("n_products must be at least 1".into()));
        }
        for (node, _) in &self.clock_skew {
            if *node >= self.n_nodes {
                return Err(ScenarioError::Config(format!(
                    "clock_skew names node {node}, but there are only {} nodes",
                    self.n_nodes
                )));
            }
        }
        Ok(())
    }
}

/// One scenario actor: its role and key material.
#[derive(Clone, Debug)]
pub struct ScenarioActor {
    pub role: ActorRole,
    pub keypair: KeyPair,
}

/// Result of a run: the final network, the measurements, the submission
/// sequence (for gas replays), and every keypair used (for tests that
/// reason about key material).
pub struct ScenarioOutput {
    pub network: Network,
    pub report: ComplexityReport,
    pub submissions: Vec<Submission>,
    pub actors: Vec<ScenarioActor>,
    pub product_ids: Vec<ProductId>,
}

impl ScenarioOutput {
    /// Serialized ledger body per node, in node-id order.
    pub fn ledger_bodies(&self) -> Vec<String> {
        self.network
            .nodes()
            .iter()
            .map(|node| ndjson::to_ndjson(node.store.records()))
            .collect()
    }
}

fn product_id(rng_seed: u64, index: u32) -> ProductId {
    let digest = keccak256_parts(&[b"product", &rng_seed.to_be_bytes(), &index.to_be_bytes()]);
    ProductId(digest.0)
}

/// Drive every product through SUPPLIER → ... → CUSTOMER on a fresh
/// network. Five submissions per product: the supplier's self-signed
/// genesis, then four handoffs.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput, ScenarioError> {
    cfg.validate()?;
    let started = Instant::now();
    let curve = &*SECP256K1;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.rng_seed);
    let mut network = Network::new(cfg.n_nodes, cfg.mode, cfg.gas, curve)?;
    for (node, offset) in &cfg.clock_skew {
        network.set_clock_offset(*node, *offset)?;
    }

    // Actor pool: one keypair per role, or one per (product, role).
    let lanes = if cfg.per_product_actors { cfg.n_products } else { 1 };
    let mut actors = Vec::with_capacity(lanes as usize * 5);
    for _lane in 0..lanes {
        for role in ActorRole::ORDER {
            let mut seed = [0u8; 32];
            rng.fill_bytes(&mut seed);
            let keypair = keygen_from_seed(seed, curve)?;
            network.register_actor(keypair.address(), role);
            actors.push(ScenarioActor { role, keypair });
        }
    }
    let lane_actor = |lane: u32, role: ActorRole| -> &ScenarioActor {
        let base = if cfg.per_product_actors { lane as usize * 5 } else { 0 };
        &actors[base + role.position()]
    };

    let product_ids: Vec<ProductId> =
        (0..cfg.n_products).map(|i| product_id(cfg.rng_seed, i)).collect();
    let payload_counts: Vec<u32> =
        (0..cfg.n_products).map(|_| rng.gen_range(1..100)).collect();

    let mut acquired_at: Vec<u64> = vec![0; cfg.n_products as usize];
    let mut tips: Vec<Digest32> = vec![Digest32::ZERO; cfg.n_products as usize];
    let mut submissions = Vec::with_capacity(cfg.n_products as usize * 5);
    let mut committed = 0u64;
    let mut event_index = 0u64;

    for hop in 0..5usize {
        for product in 0..cfg.n_products {
            let event_time = BASE_TIME + event_index * EVENT_STRIDE;
            let now = event_time + VALIDATION_LAG;
            event_index += 1;

            let sender_role = ActorRole::expected_sender(hop).expect("hop < 5");
            let sender = lane_actor(product, sender_role);
            let receiver_role = ActorRole::stage(hop).expect("hop < 5");
            let receiver = lane_actor(product, receiver_role);

            let idx = product as usize;
            let (p_intime, p_outtime) = if hop == 0 {
                (event_time, 0)
            } else {
                (acquired_at[idx], event_time)
            };
            let tx = Transaction {
                a_id: ActorId::from(&sender.keypair.address()),
                p_id: product_ids[idx],
                p_inf: format!(
                    "{{\"desc\":\"lot-{product}\",\"pcount\":{}}}",
                    payload_counts[idx]
                )
                .into_bytes(),
                p_intime,
                p_outtime,
                prev_hash: tips[idx],
            };
            let stx = SignedTransaction::sign(tx, &sender.keypair, curve)
                .map_err(|e| ScenarioError::Config(format!("scenario built a bad frame: {e}")))?;
            let sub = Submission {
                stx: stx.clone(),
                to: receiver.keypair.address(),
                now,
            };
            network.broadcast(sub.clone());
            let consensus = network.validate_all(&stx, &sub.to);
            if consensus.accepted {
                committed += 1;
                tips[idx] = stx.tx_hash;
                acquired_at[idx] = event_time;
            }
            submissions.push(sub);
        }
    }

    let per_node: Vec<OpCounters> = network.nodes().iter().map(|n| n.counters).collect();
    let report = ComplexityReport {
        n_nodes: cfg.n_nodes,
        tx_submitted: cfg.n_products as u64 * 5,
        tx_committed: committed,
        total_processed: per_node.iter().map(|c| c.processed).sum(),
        total_signed: per_node.iter().map(|c| c.signed).sum(),
        total_verified: per_node.iter().map(|c| c.verified).sum(),
        per_node,
        divergence_events: network.divergence_events(),
        wall_ms: started.elapsed().as_millis() as u64,
    };

    Ok(ScenarioOutput {
        network,
        report,
        submissions,
        actors,
        product_ids,
    })
}

fn keygen_from_seed(seed: [u8; 32], curve: &crate::curve_crypto::CurveParams) -> Result<KeyPair, ScenarioError> {
    crate::curve_crypto::keygen(&mut SeedEntropy::new(seed), curve)
        .map_err(|e| ScenarioError::Config(format!("keygen failed: {e}")))
}
