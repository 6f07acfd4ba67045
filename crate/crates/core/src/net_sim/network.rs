//! Broadcast and unanimous validation across N replicated nodes.
//!
//! Every submission is delivered to every node in node-id order and
//! validated independently under each node's clock. Only a unanimous yes
//! commits; a split vote rejects globally (and is counted), so no state
//! ever applies on some nodes and not others. Determinism is structural:
//! there is one global delivery order and no other source of scheduling.

use std::collections::VecDeque;

use crate::contract_vm::{ActorRole, GasSchedule, RecordMode, RejectReason, Submission};
use crate::curve_crypto::{ActorAddress, CurveParams, Digest32};
use crate::ledger_core::SignedTransaction;

use super::node::Node;
use super::ScenarioError;

/// Receipt of a broadcast: which nodes will process the submission.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeliveryRecord {
    pub seq: u64,
    pub delivered_to: Vec<u32>,
}

/// Outcome of one validation round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Consensus {
    pub seq: u64,
    /// True only when every node voted yes.
    pub accepted: bool,
    /// One vote per node, in node-id order.
    pub votes: Vec<bool>,
    /// Rejection reasons for the nodes that voted no.
    pub reasons: Vec<Option<RejectReason>>,
    /// Gas charged on each node (identical across nodes by construction).
    pub gas_each: u64,
}

impl Consensus {
    /// A split is some-yes-some-no: the divergence signal.
    pub fn split(&self) -> bool {
        self.votes.iter().any(|v| *v) && self.votes.iter().any(|v| !*v)
    }
}

struct PendingSubmission {
    seq: u64,
    sub: Submission,
}

/// N nodes, a pending queue, and the active recording mode.
pub struct Network {
    nodes: Vec<Node>,
    pending: VecDeque<PendingSubmission>,
    next_seq: u64,
    mode: RecordMode,
    divergence_events: u64,
    curve: &'static CurveParams,
}

impl Network {
    pub fn new(
        n_nodes: u32,
        mode: RecordMode,
        schedule: GasSchedule,
        curve: &'static CurveParams,
    ) -> Result<Network, ScenarioError> {
        if n_nodes == 0 {
            return Err(ScenarioError::Config("n_nodes must be at least 1".into()));
        }
        Ok(Network {
            nodes: (0..n_nodes).map(|id| Node::new(id, schedule)).collect(),
            pending: VecDeque::new(),
            next_seq: 0,
            mode,
            divergence_events: 0,
            curve,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn mode(&self) -> RecordMode {
        self.mode
    }

    pub fn curve(&self) -> &'static CurveParams {
        self.curve
    }

    pub fn divergence_events(&self) -> u64 {
        self.divergence_events
    }

    /// Deployment step, mirrored on every node.
    pub fn register_actor(&mut self, addr: ActorAddress, role: ActorRole) {
        for node in &mut self.nodes {
            node.contract.register_actor(addr, role);
        }
    }

    pub fn set_clock_offset(&mut self, node_id: u32, offset: i64) -> Result<(), ScenarioError> {
        self.nodes
            .get_mut(node_id as usize)
            .ok_or_else(|| ScenarioError::Config(format!("no node {node_id}")))?
            .set_clock_offset(offset);
        Ok(())
    }

    /// Enqueue a submission for every node. The signature is attributed to
    /// the node the submitting actor used as its entry point, assigned
    /// round-robin for determinism.
    pub fn broadcast(&mut self, sub: Submission) -> DeliveryRecord {
        let seq = self.next_seq;
        self.next_seq += 1;
        let origin = (seq % self.nodes.len() as u64) as usize;
        self.nodes[origin].counters.signed += 1;
        self.pending.push_back(PendingSubmission { seq, sub });
        DeliveryRecord {
            seq,
            delivered_to: self.nodes.iter().map(|n| n.id()).collect(),
        }
    }

    /// Validate the head-of-queue submission on every node and, on a
    /// unanimous yes, apply it everywhere. The arguments must match the
    /// pending head; they exist so call sites read like the protocol.
    pub fn validate_all(&mut self, stx: &SignedTransaction, to: &ActorAddress) -> Consensus {
        let head = self.pending.front().expect("a broadcast precedes validation");
        assert!(
            head.sub.stx == *stx && head.sub.to == *to,
            "validate_all must follow its broadcast"
        );
        self.step().expect("queue is non-empty")
    }

    /// Process the next pending submission, if any.
    pub fn step(&mut self) -> Option<Consensus> {
        let PendingSubmission { seq, sub } = self.pending.pop_front()?;
        let mut votes = Vec::with_capacity(self.nodes.len());
        let mut reasons = Vec::with_capacity(self.nodes.len());
        for node in &mut self.nodes {
            match node.vote(&sub, self.curve) {
                Ok(()) => {
                    votes.push(true);
                    reasons.push(None);
                }
                Err(reason) => {
                    votes.push(false);
                    reasons.push(Some(reason));
                }
            }
        }
        let accepted = votes.iter().all(|v| *v);
        let consensus_split = votes.iter().any(|v| *v) && !accepted;
        if consensus_split {
            self.divergence_events += 1;
        }
        let gas_each = if accepted {
            let mode = self.mode;
            let mut gas = 0;
            for node in &mut self.nodes {
                gas = node.apply(&sub, mode);
            }
            gas
        } else {
            let mut gas = 0;
            for node in &mut self.nodes {
                gas = node.charge_rejection();
            }
            gas
        };
        Some(Consensus { seq, accepted, votes, reasons, gas_each })
    }

    /// Drain the queue.
    pub fn run_pending(&mut self) -> Vec<Consensus> {
        let mut out = Vec::new();
        while let Some(c) = self.step() {
            out.push(c);
        }
        out
    }

    pub fn state_hashes(&self) -> Vec<Digest32> {
        self.nodes.iter().map(|n| n.state_hash()).collect()
    }

    /// All nodes hold identical state.
    pub fn converged(&self) -> bool {
        let hashes = self.state_hashes();
        hashes.windows(2).all(|w| w[0] == w[1])
    }
}
