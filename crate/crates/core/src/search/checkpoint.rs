use serde::{Deserialize, Serialize};

use crate::types::{Order, ScaledDiscrepancy};

pub const CHECKPOINT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    ExactMinDisc,
    ZeroDisc,
    DiscAtMost,
}

/// Resumable state of an interrupted search.
///
/// `decided_prefix` is the stack of branching decisions `(triple rank,
/// colour)` at the moment of interruption. Every subtree to its left has been
/// searched; resuming re-enters the subtree it names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub schema_version: u32,
    pub search: SearchKind,
    pub order: Order,
    pub family_size: usize,
    pub decided_prefix: Vec<(usize, u8)>,
    pub incumbent: Option<ScaledDiscrepancy>,
    pub incumbent_witness: Option<Vec<u8>>,
    pub nodes: u64,
}
