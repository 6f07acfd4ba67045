//! Deterministic gas accounting.
//!
//! Constants follow the EVM ledger's published schedule closely enough to
//! reproduce its shape: storage writes dwarf log emissions, and both grow
//! linearly with input count. The schedule is echoed (as a fingerprint)
//! into every report so two CSVs can be checked for comparability.

use std::fmt;
use std::str::FromStr;

use crate::curve_crypto::keccak256_parts;
use crate::curve_crypto::ActorAddress;
use crate::ledger_core::SignedTransaction;

/// How an accepted record is committed on-chain.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RecordMode {
    /// Write the record into contract storage slots.
    Storage,
    /// Emit it as a log event and keep nothing in storage.
    Event,
}

impl RecordMode {
    pub fn name(self) -> &'static str {
        match self {
            RecordMode::Storage => "storage",
            RecordMode::Event => "event",
        }
    }
}

impl fmt::Display for RecordMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RecordMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "storage" => Ok(RecordMode::Storage),
            "event" => Ok(RecordMode::Event),
            other => Err(format!("unknown record mode {other:?} (storage|event)")),
        }
    }
}

/// Gas constants, fixed for the duration of a run.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct GasSchedule {
    pub base_call: u64,
    pub sstore_new: u64,
    pub sstore_update: u64,
    pub log_base: u64,
    pub log_topic: u64,
    pub log_data_byte: u64,
}

impl Default for GasSchedule {
    fn default() -> GasSchedule {
        GasSchedule {
            base_call: 21_000,
            sstore_new: 20_000,
            sstore_update: 5_000,
            log_base: 375,
            log_topic: 375,
            log_data_byte: 8,
        }
    }
}

impl GasSchedule {
    /// Short fingerprint of the constants, recorded in every report row.
    pub fn schedule_id(&self) -> String {
        let parts = [
            self.base_call.to_be_bytes(),
            self.sstore_new.to_be_bytes(),
            self.sstore_update.to_be_bytes(),
            self.log_base.to_be_bytes(),
            self.log_topic.to_be_bytes(),
            self.log_data_byte.to_be_bytes(),
        ];
        let slices: Vec<&[u8]> = parts.iter().map(|p| p.as_slice()).collect();
        hex::encode(&keccak256_parts(&slices).0[..8])
    }
}

/// Cost of committing one record.
///
/// Storage mode pays per fresh slot; event mode pays the log base, one fee
/// per topic, and one per data byte. Rejections charge `base_call` alone,
/// handled by the caller.
pub fn gas_cost(
    schedule: &GasSchedule,
    mode: RecordMode,
    record_size_bytes: usize,
    n_topics: usize,
    n_new_slots: usize,
) -> u64 {
    match mode {
        RecordMode::Storage => {
            schedule.base_call + n_new_slots as u64 * schedule.sstore_new
        }
        RecordMode::Event => {
            schedule.base_call
                + schedule.log_base
                + n_topics as u64 * schedule.log_topic
                + record_size_bytes as u64 * schedule.log_data_byte
        }
    }
}

/// Cumulative gas used plus the cost of the most recent call.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub struct GasMeter {
    pub total: u64,
    pub last_call: u64,
}

impl GasMeter {
    pub(crate) fn charge(&mut self, amount: u64) {
        self.total += amount;
        self.last_call = amount;
    }
}

/// One prepared contract call: the signed frame, the receiving actor, and
/// the clock value the validating contract sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submission {
    pub stx: SignedTransaction,
    pub to: ActorAddress,
    pub now: u64,
}

/// One point of a cost series: cumulative gas after the n-th submission.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GasPoint {
    pub n: u64,
    pub mode: RecordMode,
    pub total_gas: u64,
}

/// Cost series for both recording modes over the same submissions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GasSeries {
    pub schedule_id: String,
    pub points: Vec<GasPoint>,
}

impl GasSeries {
    /// Points for one mode, ordered by n.
    pub fn mode_points(&self, mode: RecordMode) -> Vec<GasPoint> {
        self.points.iter().copied().filter(|p| p.mode == mode).collect()
    }

    /// CSV rows `n,mode,total_gas,schedule_id`, storage series first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mode,total_gas,schedule_id\n");
        for mode in [RecordMode::Storage, RecordMode::Event] {
            for p in self.mode_points(mode) {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    p.n, p.mode, p.total_gas, self.schedule_id
                ));
            }
        }
        out
    }

    /// CSV rows for a single mode, same header.
    pub fn to_csv_mode(&self, mode: RecordMode) -> String {
        let mut out = String::from("n,mode,total_gas,schedule_id\n");
        for p in self.mode_points(mode) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.n, p.mode, p.total_gas, self.schedule_id
            ));
        }
        out
    }

    /// Slope of one mode's series between consecutive points; `None` when
    /// the series has fewer than two points or is not exactly linear.
    pub fn exact_slope(&self, mode: RecordMode) -> Option<u64> {
        let pts = self.mode_points(mode);
        if pts.len() < 2 {
            return None;
        }
        let step = pts[1].total_gas - pts[0].total_gas;
        for w in pts.windows(2) {
            if w[1].total_gas - w[0].total_gas != step || w[1].n != w[0].n + 1 {
                return None;
            }
        }
        Some(step)
    }

    /// Parse rows written by [`GasSeries::to_csv`] / `to_csv_mode`.
    /// Requires a single schedule id across all rows.
    pub fn from_csv(body: &str) -> Result<GasSeries, String> {
        let mut lines = body.lines();
        let header = lines.next().ok_or("empty gas csv")?;
        if header.trim() != "n,mode,total_gas,schedule_id" {
            return Err(format!("unexpected gas csv header: {header:?}"));
        }
        let mut schedule_id: Option<String> = None;
        let mut points = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(format!("gas csv line {}: expected 4 fields", i + 2));
            }
            let n: u64 = fields[0]
                .parse()
                .map_err(|_| format!("gas csv line {}: bad n", i + 2))?;
            let mode: RecordMode = fields[1].parse()?;
            let total_gas: u64 = fields[2]
                .parse()
                .map_err(|_| format!("gas csv line {}: bad total_gas", i + 2))?;
            match &schedule_id {
                None => schedule_id = Some(fields[3].to_string()),
                Some(existing) if existing != fields[3] => {
                    return Err("gas csv mixes schedule ids".to_string());
                }
                Some(_) => {}
            }
            points.push(GasPoint { n, mode, total_gas });
        }
        if points.is_empty() {
            return Err("gas csv has no data rows".to_string());
        }
        Ok(GasSeries {
            schedule_id: schedule_id.unwrap_or_default(),
            points,
        })
    }
}

/// Replay the same submissions from `base` in both recording modes and
/// report cumulative gas after every call. The replays run on clones;
/// `base` is untouched.
pub fn gas_report(
    base: &super::ContractState,
    submissions: &[Submission],
    curve: &crate::curve_crypto::CurveParams,
) -> GasSeries {
    let schedule_id = base.schedule().schedule_id();
    let mut points = Vec::with_capacity(submissions.len() * 2);
    for mode in [RecordMode::Storage, RecordMode::Event] {
        let mut state = base.clone();
        for (i, sub) in submissions.iter().enumerate() {
            state.submit(&sub.stx, &sub.to, mode, sub.now, curve);
            points.push(GasPoint {
                n: (i + 1) as u64,
                mode,
                total_gas: state.gas().total,
            });
        }
    }
    GasSeries { schedule_id, points }
}
