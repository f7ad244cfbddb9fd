//! Experiment runners. Each returns a finished report; printing and file
//! output are left to the caller.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::Value;
use stsdisc_core::anneal::{sa_table, AnnealConfig};
use stsdisc_core::search::{
    basin_fraction_optimal, decide_zero_disc_with_progress, exact_min_disc_with_progress, parity_lower_bound,
    two_flip_basin, SearchCheckpoint, SearchOptions,
};
use stsdisc_core::stats::mean_max_disc;
use stsdisc_core::sts::{enumerate_all_labelled, seeded_working_family};
use stsdisc_core::{conjectured_delta2, cut_colouring_of_size, Order, Result};

use crate::report::{
    BasinBin, BasinResult, Delta2Row, EnumerateRow, ExactSearchResult, ExperimentReport, Payload, SaResultRow,
    ZeroDiscResult,
};

pub type Parameters = BTreeMap<String, Value>;

fn finish(payload: Payload, parameters: Parameters, seed: u64, started: Instant) -> ExperimentReport {
    ExperimentReport::new(payload, parameters, seed, started.elapsed().as_secs_f64())
}

fn orders_value(orders: &[Order]) -> Value {
    Value::from(orders.iter().map(|o| o.n()).collect::<Vec<_>>())
}

pub fn enumerate(orders: &[Order], seed: u64) -> Result<ExperimentReport> {
    let started = Instant::now();
    let rows = orders
        .iter()
        .map(|&n| {
            let family = enumerate_all_labelled(n)?;
            Ok(EnumerateRow {
                n,
                count: family.len(),
                provenance: family.provenance(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let parameters = Parameters::from([("n".into(), orders_value(orders))]);
    Ok(finish(Payload::Enumerate(rows), parameters, seed, started))
}

pub fn delta2_formula(orders: &[Order], seed: u64) -> Result<ExperimentReport> {
    let started = Instant::now();
    let rows = orders
        .iter()
        .map(|&n| {
            let formula = conjectured_delta2(n);
            Ok(Delta2Row {
                n,
                blocks: n.blocks(),
                delta2: formula.value.to_scaled()?,
                argmins: formula.argmins,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let parameters = Parameters::from([("n".into(), orders_value(orders))]);
    Ok(finish(Payload::Delta2Formula(rows), parameters, seed, started))
}

/// Settings shared by the exact searches.
pub struct ExactArgs<'a> {
    pub order: Order,
    pub labellings: usize,
    pub seed: u64,
    pub options: SearchOptions,
    pub on_checkpoint: &'a mut dyn FnMut(&SearchCheckpoint),
}

fn exact_parameters(args: &ExactArgs) -> Parameters {
    Parameters::from([
        ("n".into(), Value::from(args.order.n())),
        ("labellings".into(), Value::from(args.labellings)),
        ("budget".into(), Value::from(args.options.budget)),
        ("resumed".into(), Value::from(args.options.resume.is_some())),
    ])
}

/// Returns the report and, when the budget ran out, the last checkpoint.
pub fn exact_search(args: ExactArgs) -> Result<(ExperimentReport, Option<SearchCheckpoint>)> {
    let started = Instant::now();
    let family = seeded_working_family(args.order, args.labellings, args.seed)?;
    let out = exact_min_disc_with_progress(&family, &args.options, args.on_checkpoint)?;
    let result = ExactSearchResult {
        n: args.order,
        family_size: family.len(),
        best_value: out.best_value,
        proved_optimal: out.proved_optimal,
        budget_exhausted: out.budget_exhausted,
        nodes_explored: out.nodes_explored,
        parity_lower_bound: parity_lower_bound(args.order, 2)?,
        witness: out.witness.map(|w| w.into_colours()),
    };
    let report = finish(
        Payload::ExactSearch(result),
        exact_parameters(&args),
        args.seed,
        started,
    );
    Ok((report, out.checkpoint))
}

pub fn zero_disc(args: ExactArgs) -> Result<(ExperimentReport, Option<SearchCheckpoint>)> {
    let started = Instant::now();
    let family = seeded_working_family(args.order, args.labellings, args.seed)?;
    let out = decide_zero_disc_with_progress(&family, &args.options, args.on_checkpoint)?;
    let result = ZeroDiscResult::from_decision(args.order, family.len(), out.decision, out.nodes_explored);
    let report = finish(Payload::ZeroDisc(result), exact_parameters(&args), args.seed, started);
    Ok((report, out.checkpoint))
}

/// Two-flip census around the cut colouring with the smallest optimal `|X|`.
pub fn basin(order: Order, labellings: usize, seed: u64) -> Result<ExperimentReport> {
    let started = Instant::now();
    let family = seeded_working_family(order, labellings, seed)?;
    let cut_size = conjectured_delta2(order).argmins[0];
    let hist = two_flip_basin(&cut_colouring_of_size(order, cut_size)?, &family)?;
    let result = BasinResult {
        n: order,
        family_size: family.len(),
        cut_size,
        base_disc: hist.base_disc,
        histogram: hist
            .counts
            .iter()
            .map(|(&value, &count)| BasinBin { value, count })
            .collect(),
        total: hist.total(),
        fraction_optimal: basin_fraction_optimal(&hist)?,
    };
    let parameters = Parameters::from([
        ("n".into(), Value::from(order.n())),
        ("labellings".into(), Value::from(labellings)),
    ]);
    Ok(finish(Payload::Basin(result), parameters, seed, started))
}

pub fn anneal(orders: &[Order], cfg: &AnnealConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let rows = sa_table(orders, cfg)?
        .into_iter()
        .map(|row| {
            Ok(SaResultRow {
                n: row.order,
                r: row.r,
                blocks: row.blocks,
                family_size: row.family_size,
                restarts: cfg.restarts,
                steps_per_restart: cfg.steps_for(row.order),
                estimate: row.estimate,
                ratio: row.ratio,
                delta2_formula: row.delta2_formula.to_scaled()?,
                witness: row.witness.into_colours(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let parameters = Parameters::from([
        ("n".into(), orders_value(orders)),
        ("r".into(), Value::from(cfg.r)),
        ("labellings".into(), Value::from(cfg.labellings)),
        ("restarts".into(), Value::from(cfg.restarts)),
        ("steps".into(), cfg.steps_per_restart.map_or(Value::Null, Value::from)),
        ("t_initial".into(), cfg.t_initial.map_or(Value::Null, Value::from)),
        ("cooling".into(), Value::from(cfg.cooling)),
        ("energy".into(), Value::from(format!("{:?}", cfg.energy).to_lowercase())),
    ]);
    Ok(finish(Payload::SA(rows), parameters, cfg.seed, started))
}

pub fn random_stats(
    orders: &[Order],
    colours: &[u8],
    trials: u64,
    labellings: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    let mut rows = Vec::with_capacity(orders.len() * colours.len());
    for &n in orders {
        for &r in colours {
            rows.push(mean_max_disc(n, r, trials, labellings, seed)?);
        }
    }
    let parameters = Parameters::from([
        ("n".into(), orders_value(orders)),
        ("r".into(), Value::from(colours.to_vec())),
        ("trials".into(), Value::from(trials)),
        ("labellings".into(), Value::from(labellings)),
    ]);
    Ok(finish(Payload::RandomStats(rows), parameters, seed, started))
}
