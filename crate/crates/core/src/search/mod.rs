//! Exact searches over 2-colourings: the divisibility lower bound,
//! branch-and-bound for `min_χ max_S disc(S, χ)` over a family, the
//! zero-discrepancy decision procedure and the two-flip basin census.

mod basin;
mod checkpoint;
mod engine;

pub use basin::{basin_fraction_optimal, two_flip_basin, BasinHistogram};
pub use checkpoint::{SearchCheckpoint, SearchKind, CHECKPOINT_SCHEMA_VERSION};

use crate::colourings::{conjectured_delta2, cut_colouring_of_size};
use crate::discrepancy::max_disc_over_systems;
use crate::error::{Error, Result};
use crate::sts::LabelledFamily;
use crate::types::{Colouring, Order, ScaledDiscrepancy};
use engine::{EngineLimits, EngineResult, WindowSearch};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_CHECKPOINT_INTERVAL: u64 = 10_000_000;

/// Smallest `max_i |r·c_i − m| / r` over integer counts with `Σ c_i = m`.
///
/// Scans candidate numerators `D = 0, 1, …`; `D` is attainable iff the count
/// interval `{c : |r·c − m| ≤ D}` admits `r` values summing to `m`.
pub fn parity_lower_bound(order: Order, r: u32) -> Result<ScaledDiscrepancy> {
    if r < 2 {
        return Err(Error::Domain(format!("need r >= 2, got {r}")));
    }
    let m = order.blocks() as u64;
    let r64 = r as u64;
    for d in 0.. {
        let lo = m.saturating_sub(d).div_ceil(r64);
        let hi = (m + d) / r64;
        if lo <= hi && r64 * lo <= m && m <= r64 * hi {
            return Ok(ScaledDiscrepancy::new(d, r));
        }
    }
    unreachable!("d = m always admits the all-equal split")
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best_value: ScaledDiscrepancy,
    pub witness: Option<Colouring>,
    pub proved_optimal: bool,
    pub nodes_explored: u64,
    pub budget_exhausted: bool,
    /// Resumable state, present when the budget ran out.
    pub checkpoint: Option<SearchCheckpoint>,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub budget: u64,
    pub checkpoint_interval: u64,
    pub resume: Option<SearchCheckpoint>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_NODE_BUDGET,
            checkpoint_interval: DEFAULT_CHECKPOINT_INTERVAL,
            resume: None,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: u64) -> Self {
        SearchOptions {
            budget,
            ..Default::default()
        }
    }
}

fn check_resume(resume: Option<&SearchCheckpoint>, kind: SearchKind, family: &LabelledFamily) -> Result<()> {
    match resume {
        Some(cp) if cp.search != kind || cp.order != family.order() || cp.family_size != family.len() => {
            Err(Error::Domain(format!(
                "checkpoint is for {:?} at n = {} over {} systems",
                cp.search, cp.order, cp.family_size
            )))
        }
        _ => Ok(()),
    }
}

/// Branch-and-bound for the least `max_S disc(S, χ)` over 2-colourings `χ`,
/// maximising over the systems of `family`.
///
/// The incumbent starts at the best cut colouring. Each round asks the
/// propagation search for a colouring strictly better than the incumbent
/// (numerators move in steps of 2 because they share the parity of `m`);
/// an exhausted round, or an incumbent equal to the divisibility bound,
/// certifies optimality.
pub fn exact_min_disc(family: &LabelledFamily, options: &SearchOptions) -> Result<SearchOutcome> {
    exact_min_disc_with_progress(family, options, &mut |_| {})
}

pub fn exact_min_disc_with_progress(
    family: &LabelledFamily,
    options: &SearchOptions,
    on_checkpoint: &mut dyn FnMut(&SearchCheckpoint),
) -> Result<SearchOutcome> {
    if family.is_empty() {
        return Err(Error::EmptyDomain("exact search needs at least one system"));
    }
    check_resume(options.resume.as_ref(), SearchKind::ExactMinDisc, family)?;
    let order = family.order();
    let m = order.blocks() as u64;
    let floor = parity_lower_bound(order, 2)?;

    let (mut incumbent, mut witness, mut nodes, mut prefix) = match &options.resume {
        Some(cp) => {
            let witness = match &cp.incumbent_witness {
                Some(c) => Colouring::new(order, 2, c.clone())?,
                None => return Err(Error::Domain("checkpoint has no incumbent witness".into())),
            };
            let value = max_disc_over_systems(family.systems(), &witness)?;
            (value, witness, cp.nodes, cp.decided_prefix.clone())
        }
        None => {
            let x = conjectured_delta2(order).argmins[0];
            let witness = cut_colouring_of_size(order, x)?;
            let value = max_disc_over_systems(family.systems(), &witness)?;
            (value, witness, 0, Vec::new())
        }
    };
    let mut spent = 0u64;

    loop {
        if incumbent.numerator() <= floor.numerator() {
            return Ok(SearchOutcome {
                best_value: incumbent,
                witness: Some(witness),
                proved_optimal: true,
                nodes_explored: nodes,
                budget_exhausted: false,
                checkpoint: None,
            });
        }
        // Blue counts b with |2b − m| ≤ target.
        let target = incumbent.numerator() - 2;
        let lo = ((m - target.min(m)) / 2) as u32;
        let hi = ((m + target) / 2).min(m) as u32;
        let mut search = WindowSearch::new(family, lo, hi);
        let limits = EngineLimits {
            budget: options.budget.saturating_sub(spent),
            checkpoint_interval: options.checkpoint_interval,
            resume: &prefix,
        };
        let snapshot = |path: &[(usize, u8)], round_nodes: u64| SearchCheckpoint {
            schema_version: CHECKPOINT_SCHEMA_VERSION,
            search: SearchKind::ExactMinDisc,
            order,
            family_size: family.len(),
            decided_prefix: path.to_vec(),
            incumbent: Some(incumbent),
            incumbent_witness: Some(witness.colours().to_vec()),
            nodes: nodes + round_nodes,
        };
        let result = search.run(&limits, &mut |path, n| on_checkpoint(&snapshot(path, n)));
        let round_nodes = search.nodes;
        match result {
            EngineResult::Found(colours) => {
                let candidate = Colouring::new(order, 2, colours)?;
                let value = max_disc_over_systems(family.systems(), &candidate)?;
                debug_assert!(value.numerator() <= target);
                incumbent = value;
                witness = candidate;
                nodes += round_nodes;
                spent += round_nodes;
                prefix.clear();
            }
            EngineResult::Exhausted => {
                return Ok(SearchOutcome {
                    best_value: incumbent,
                    witness: Some(witness),
                    proved_optimal: true,
                    nodes_explored: nodes + round_nodes,
                    budget_exhausted: false,
                    checkpoint: None,
                });
            }
            EngineResult::OutOfBudget(path) => {
                let checkpoint = snapshot(&path, round_nodes.min(limits.budget));
                on_checkpoint(&checkpoint);
                return Ok(SearchOutcome {
                    best_value: incumbent,
                    witness: Some(witness),
                    proved_optimal: false,
                    nodes_explored: checkpoint.nodes,
                    budget_exhausted: true,
                    checkpoint: Some(checkpoint),
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroDiscDecision {
    /// No 2-colouring splits every system of the family evenly.
    Infeasible,
    FeasibleWithWitness(Colouring),
    /// Budget exhausted before a decision.
    Unknown,
}

#[derive(Debug, Clone)]
pub struct ZeroDiscOutcome {
    pub decision: ZeroDiscDecision,
    pub nodes_explored: u64,
    pub checkpoint: Option<SearchCheckpoint>,
}

/// Decides whether some 2-colouring gives every system of `family` exactly
/// `m/2` blocks of each colour.
pub fn decide_zero_disc(family: &LabelledFamily, options: &SearchOptions) -> Result<ZeroDiscOutcome> {
    decide_zero_disc_with_progress(family, options, &mut |_| {})
}

pub fn decide_zero_disc_with_progress(
    family: &LabelledFamily,
    options: &SearchOptions,
    on_checkpoint: &mut dyn FnMut(&SearchCheckpoint),
) -> Result<ZeroDiscOutcome> {
    decide_disc_at_most_with_progress(family, ScaledDiscrepancy::zero(2), options, on_checkpoint)
}

/// Decides whether some 2-colouring has `disc(S, χ) ≤ bound` for every
/// system of `family`. The checkpoint kind is [`SearchKind::ZeroDisc`]
/// only for a zero bound.
pub fn decide_disc_at_most(
    family: &LabelledFamily,
    bound: ScaledDiscrepancy,
    options: &SearchOptions,
) -> Result<ZeroDiscOutcome> {
    decide_disc_at_most_with_progress(family, bound, options, &mut |_| {})
}

fn decide_disc_at_most_with_progress(
    family: &LabelledFamily,
    bound: ScaledDiscrepancy,
    options: &SearchOptions,
    on_checkpoint: &mut dyn FnMut(&SearchCheckpoint),
) -> Result<ZeroDiscOutcome> {
    if family.is_empty() {
        return Err(Error::EmptyDomain("decision search needs at least one system"));
    }
    let kind = if bound.numerator() == 0 {
        SearchKind::ZeroDisc
    } else {
        SearchKind::DiscAtMost
    };
    check_resume(options.resume.as_ref(), kind, family)?;
    let order = family.order();
    let m = order.blocks() as u64;
    // Largest numerator over 2 not above the bound, with the parity of m.
    let mut target = bound.numerator() * 2 / bound.denominator() as u64;
    if target % 2 != m % 2 {
        if target == 0 {
            return Ok(ZeroDiscOutcome {
                decision: ZeroDiscDecision::Infeasible,
                nodes_explored: 0,
                checkpoint: None,
            });
        }
        target -= 1;
    }
    let target = target.min(m);
    let (prefix, prior) = options
        .resume
        .as_ref()
        .map(|cp| (cp.decided_prefix.clone(), cp.nodes))
        .unwrap_or_default();
    let mut search = WindowSearch::new(family, ((m - target) / 2) as u32, ((m + target) / 2) as u32);
    let limits = EngineLimits {
        budget: options.budget,
        checkpoint_interval: options.checkpoint_interval,
        resume: &prefix,
    };
    let snapshot = |path: &[(usize, u8)], n: u64| SearchCheckpoint {
        schema_version: CHECKPOINT_SCHEMA_VERSION,
        search: kind,
        order,
        family_size: family.len(),
        decided_prefix: path.to_vec(),
        incumbent: None,
        incumbent_witness: None,
        nodes: prior + n,
    };
    let result = search.run(&limits, &mut |path, n| on_checkpoint(&snapshot(path, n)));
    let nodes = prior + search.nodes.min(options.budget);
    Ok(match result {
        EngineResult::Found(colours) => ZeroDiscOutcome {
            decision: ZeroDiscDecision::FeasibleWithWitness(Colouring::new(order, 2, colours)?),
            nodes_explored: nodes,
            checkpoint: None,
        },
        EngineResult::Exhausted => ZeroDiscOutcome {
            decision: ZeroDiscDecision::Infeasible,
            nodes_explored: nodes,
            checkpoint: None,
        },
        EngineResult::OutOfBudget(path) => {
            let checkpoint = snapshot(&path, search.nodes.min(options.budget));
            on_checkpoint(&checkpoint);
            ZeroDiscOutcome {
                decision: ZeroDiscDecision::Unknown,
                nodes_explored: nodes,
                checkpoint: Some(checkpoint),
            }
        }
    })
}
