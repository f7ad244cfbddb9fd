//! Versioned JSON reports. Discrepancies serialise as `{"num": .., "den": ..}`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use stsdisc_core::search::ZeroDiscDecision;
use stsdisc_core::stats::RandomStatsReport;
use stsdisc_core::{Order, Provenance, ScaledDiscrepancy};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    #[serde(flatten)]
    pub payload: Payload,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub tool_version: String,
    pub wall_time_seconds: f64,
}

/// The `experiment` tag and its `results`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "results", rename_all = "kebab-case")]
pub enum Payload {
    Enumerate(Vec<EnumerateRow>),
    Delta2Formula(Vec<Delta2Row>),
    ExactSearch(ExactSearchResult),
    ZeroDisc(ZeroDiscResult),
    Basin(BasinResult),
    #[serde(rename = "sa")]
    SA(Vec<SaResultRow>),
    RandomStats(Vec<RandomStatsReport>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateRow {
    pub n: Order,
    pub count: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Row {
    pub n: Order,
    pub blocks: usize,
    pub delta2: ScaledDiscrepancy,
    pub argmins: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSearchResult {
    pub n: Order,
    pub family_size: usize,
    pub best_value: ScaledDiscrepancy,
    pub proved_optimal: bool,
    pub budget_exhausted: bool,
    pub nodes_explored: u64,
    pub parity_lower_bound: ScaledDiscrepancy,
    pub witness: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Infeasible,
    Feasible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDiscResult {
    pub n: Order,
    pub family_size: usize,
    pub decision: Decision,
    pub nodes_explored: u64,
    pub witness: Option<Vec<u8>>,
}

impl ZeroDiscResult {
    pub fn from_decision(n: Order, family_size: usize, decision: ZeroDiscDecision, nodes: u64) -> Self {
        let (decision, witness) = match decision {
            ZeroDiscDecision::Infeasible => (Decision::Infeasible, None),
            ZeroDiscDecision::FeasibleWithWitness(w) => (Decision::Feasible, Some(w.into_colours())),
            ZeroDiscDecision::Unknown => (Decision::Unknown, None),
        };
        ZeroDiscResult {
            n,
            family_size,
            decision,
            nodes_explored: nodes,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinBin {
    pub value: ScaledDiscrepancy,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinResult {
    pub n: Order,
    pub family_size: usize,
    pub cut_size: u32,
    pub base_disc: ScaledDiscrepancy,
    pub histogram: Vec<BasinBin>,
    pub total: u64,
    pub fraction_optimal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaResultRow {
    pub n: Order,
    pub r: u8,
    pub blocks: usize,
    pub family_size: usize,
    pub restarts: u64,
    pub steps_per_restart: u64,
    pub estimate: ScaledDiscrepancy,
    pub ratio: f64,
    pub delta2_formula: ScaledDiscrepancy,
    pub witness: Vec<u8>,
}

impl ExperimentReport {
    pub fn new(payload: Payload, parameters: BTreeMap<String, Value>, seed: u64, wall_time_seconds: f64) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            payload,
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds,
        }
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let report: ExperimentReport = serde_json::from_str(text).context("malformed report")?;
        if report.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                report.schema_version
            );
        }
        Ok(report)
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, self.to_json()? + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }

    /// The report with its timing removed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        ExperimentReport {
            wall_time_seconds: 0.0,
            ..self.clone()
        }
    }
}
