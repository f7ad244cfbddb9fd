//! The acceptance checks run by `verify-all` and the `acceptance` test target.
//!
//! Quick mode shrinks the stochastic budgets and widens their tolerances:
//!
//! | check | full | quick |
//! |---|---|---|
//! | 3 | 200 relabellings per order | 20 |
//! | 6 | 1000 restarts, best ≤ formula value | 50 restarts, best ≤ formula value + 1 |
//! | 7 | 1000 restarts, ±1/3 (n = 7, 9 exact) | 50 restarts, ±1 (n = 7, 9 within ±1/3) |
//! | 8 | 5000 trials, ±10 % | 500 trials, ±20 % |
//! | 10 | 10⁹ nodes | 10⁶ nodes |

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use stsdisc_core::anneal::{sa_minimise, sa_table_r3, AnnealConfig};
use stsdisc_core::colourings::verify_blue_count_identity;
use stsdisc_core::search::{
    decide_zero_disc, exact_min_disc, parity_lower_bound, two_flip_basin, SearchOptions, ZeroDiscDecision,
    DEFAULT_NODE_BUDGET,
};
use stsdisc_core::stats::{mean_max_disc, random_colouring};
use stsdisc_core::sts::{construct, enumerate_all_labelled, parse_text, random_permutation, seeded_working_family};
use stsdisc_core::{
    conjectured_delta2, cut_colouring_of_size, derive_seed, disc_on_system, max_disc_over_systems, rank_triple,
    unrank_triple, Order, ScaledDiscrepancy, SteinerSystem,
};

use crate::commands;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Inconclusive within budget; does not count as a failure.
    Unknown,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        };
        write!(
            f,
            "[{tag}] {:>2}. {} ({:.1}s)",
            self.id,
            self.title,
            self.elapsed.as_secs_f64()
        )?;
        for d in &self.details {
            write!(f, "\n        {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub seed: u64,
    pub quick: bool,
}

impl Settings {
    pub fn full(seed: u64) -> Self {
        Settings { seed, quick: false }
    }
}

/// Collects per-item findings; any `fail` marks the whole check failed.
struct Tally {
    details: Vec<String>,
    failed: bool,
    started: Instant,
}

impl Tally {
    fn new() -> Self {
        Tally {
            details: Vec::new(),
            failed: false,
            started: Instant::now(),
        }
    }

    fn note(&mut self, ok: bool, detail: String) {
        self.failed |= !ok;
        self.details
            .push(if ok { detail } else { format!("MISMATCH {detail}") });
    }

    fn within(&mut self, limit: Duration) {
        let spent = self.started.elapsed();
        if spent > limit {
            self.note(
                false,
                format!("took {:.1}s, limit {}s", spent.as_secs_f64(), limit.as_secs()),
            );
        }
    }

    fn finish(self, id: u8, title: &'static str) -> CheckResult {
        CheckResult {
            id,
            title,
            status: if self.failed { Status::Fail } else { Status::Pass },
            details: self.details,
            elapsed: self.started.elapsed(),
        }
    }
}

fn order(n: u32) -> Order {
    Order::new(n).expect("admissible order")
}

fn error_result(id: u8, title: &'static str, err: impl fmt::Display) -> CheckResult {
    CheckResult {
        id,
        title,
        status: Status::Fail,
        details: vec![format!("error: {err}")],
        elapsed: Duration::ZERO,
    }
}

macro_rules! guarded {
    ($id:expr, $title:expr, $body:expr) => {
        match (|| -> stsdisc_core::Result<CheckResult> { $body })() {
            Ok(result) => result,
            Err(err) => error_result($id, $title, err),
        }
    };
}

const ORDERS: [u32; 6] = [7, 9, 13, 15, 19, 21];
const SAMPLED_ORDERS: [u32; 4] = [13, 15, 19, 21];

/// Two-colour values (numerators over 2) and optimal cut sizes.
const DELTA2_TABLE: [(u32, u64, &[u32]); 6] = [
    (7, 1, &[1, 6]),
    (9, 2, &[2, 7]),
    (13, 4, &[2, 11]),
    (15, 1, &[3, 12]),
    (19, 3, &[4, 15]),
    (21, 2, &[4, 17]),
];

/// Three-colour annealing estimates, numerators over 3.
const R3_TABLE: [(u32, u64); 6] = [(7, 5), (9, 9), (13, 13), (15, 13), (19, 15), (21, 17)];

/// Mean of `max_S disc` under random colourings, for r = 2, 3, 4.
const RANDOM_TABLE: [(u32, [f64; 3]); 6] = [
    (7, [2.78, 3.09, 3.12]),
    (9, [4.62, 5.01, 5.00]),
    (13, [7.28, 7.62, 7.48]),
    (15, [8.51, 8.90, 8.63]),
    (19, [11.00, 11.31, 10.97]),
    (21, [12.23, 12.50, 12.07]),
];

const BASIN_TABLE: [(u64, u64); 3] = [(2, 1176), (4, 1925), (6, 385)];

pub fn enumeration_counts(settings: &Settings) -> CheckResult {
    const TITLE: &str = "labelled enumeration counts";
    guarded!(1, TITLE, {
        let mut t = Tally::new();
        for (n, expected) in [(7, 30), (9, 840)] {
            let report = commands::enumerate(&[order(n)], settings.seed)?;
            let crate::report::Payload::Enumerate(rows) = report.payload else {
                unreachable!()
            };
            let count = rows[0].count;
            t.note(
                count == expected,
                format!("n={n}: {count} systems (expected {expected})"),
            );
        }
        t.within(Duration::from_secs(60));
        Ok(t.finish(1, TITLE))
    })
}

pub fn delta2_table(_: &Settings) -> CheckResult {
    const TITLE: &str = "cut-colouring formula table";
    guarded!(2, TITLE, {
        let mut t = Tally::new();
        for (n, num, argmins) in DELTA2_TABLE {
            let formula = conjectured_delta2(order(n));
            let value = formula.value.to_scaled()?;
            let expected = ScaledDiscrepancy::new(num, 2);
            t.note(
                value == expected,
                format!("n={n}: delta2 {value} (expected {expected})"),
            );
            t.note(
                formula.argmins == argmins,
                format!("n={n}: optimal |X| {:?} (expected {argmins:?})", formula.argmins),
            );
        }
        Ok(t.finish(2, TITLE))
    })
}

pub fn blue_count_identity(settings: &Settings) -> CheckResult {
    const TITLE: &str = "blue-block count identity";
    guarded!(3, TITLE, {
        let mut t = Tally::new();
        let labellings = if settings.quick { 20 } else { 200 };
        let mut families = vec![enumerate_all_labelled(order(7))?, enumerate_all_labelled(order(9))?];
        for n in SAMPLED_ORDERS {
            families.push(seeded_working_family(order(n), labellings, settings.seed)?);
        }
        for family in &families {
            let n = family.order().n();
            let mut checked = 0usize;
            let mut violations = 0usize;
            for system in family.systems() {
                for x in 0..=n {
                    let cut: Vec<u32> = (0..x).collect();
                    checked += 1;
                    violations += usize::from(!verify_blue_count_identity(system, &cut)?);
                }
            }
            t.note(
                violations == 0,
                format!(
                    "n={n}: {} systems, {checked} (system, x) pairs, {violations} violations",
                    family.len()
                ),
            );
        }
        t.within(Duration::from_secs(300));
        Ok(t.finish(3, TITLE))
    })
}

pub fn certified_optimum(_: &Settings) -> CheckResult {
    const TITLE: &str = "certified two-colour optimum at n=7";
    guarded!(4, TITLE, {
        let mut t = Tally::new();
        let family = enumerate_all_labelled(order(7))?;
        let out = exact_min_disc(&family, &SearchOptions::default())?;
        let expected = ScaledDiscrepancy::new(1, 2);
        t.note(
            out.best_value == expected && out.proved_optimal,
            format!(
                "best {} proved_optimal={} after {} nodes (expected 0.5, proved)",
                out.best_value, out.proved_optimal, out.nodes_explored
            ),
        );
        t.within(Duration::from_secs(60));
        Ok(t.finish(4, TITLE))
    })
}

pub fn basin_census(_: &Settings) -> CheckResult {
    const TITLE: &str = "two-flip basin census at n=9";
    guarded!(5, TITLE, {
        let mut t = Tally::new();
        let family = enumerate_all_labelled(order(9))?;
        let hist = two_flip_basin(&cut_colouring_of_size(order(9), 2)?, &family)?;
        for (num, expected) in BASIN_TABLE {
            let value = ScaledDiscrepancy::new(num, 2);
            let got = hist.count_of(value);
            t.note(got == expected, format!("disc {value}: {got} (expected {expected})"));
        }
        let extra: u64 = hist
            .counts
            .iter()
            .filter(|(v, _)| {
                !BASIN_TABLE
                    .iter()
                    .any(|&(num, _)| **v == ScaledDiscrepancy::new(num, 2))
            })
            .map(|(_, c)| c)
            .sum();
        t.note(extra == 0, format!("{extra} perturbations at other values"));
        t.note(hist.total() == 3486, format!("total {} (expected 3486)", hist.total()));
        let optimal = hist.count_of(hist.base_disc);
        t.note(
            hist.base_disc == ScaledDiscrepancy::new(2, 2) && optimal == 1176,
            format!(
                "fraction at base value {optimal}/{} = {:.4}",
                hist.total(),
                optimal as f64 / hist.total() as f64
            ),
        );
        t.within(Duration::from_secs(600));
        Ok(t.finish(5, TITLE))
    })
}

fn anneal_config(settings: &Settings, r: u8) -> AnnealConfig {
    AnnealConfig {
        restarts: if settings.quick { 50 } else { 1000 },
        seed: settings.seed,
        ..AnnealConfig::new(r)
    }
}

pub fn anneal_two_colours(settings: &Settings) -> CheckResult {
    const TITLE: &str = "two-colour annealing vs. formula";
    guarded!(6, TITLE, {
        let mut t = Tally::new();
        let cfg = anneal_config(settings, 2);
        let slack = if settings.quick { 2 } else { 0 };
        for n in SAMPLED_ORDERS {
            let o = order(n);
            let started = Instant::now();
            let family = seeded_working_family(o, cfg.labellings, cfg.seed)?;
            let out = sa_minimise(&family, &cfg)?;
            let spent = started.elapsed();
            let formula = conjectured_delta2(o).value.to_scaled()?;
            let ceiling = ScaledDiscrepancy::new(formula.numerator() + slack, 2);
            let floor = parity_lower_bound(o, 2)?;
            t.note(
                out.best_value <= ceiling && out.best_value >= floor,
                format!(
                    "n={n}: best {} over {} systems, formula {formula}, parity bound {floor} ({:.1}s)",
                    out.best_value,
                    family.len(),
                    spent.as_secs_f64()
                ),
            );
            if spent > Duration::from_secs(1800) {
                t.note(false, format!("n={n}: exceeded 30 minutes"));
            }
        }
        Ok(t.finish(6, TITLE))
    })
}

pub fn anneal_three_colours(settings: &Settings) -> CheckResult {
    const TITLE: &str = "three-colour annealing table";
    guarded!(7, TITLE, {
        let mut t = Tally::new();
        let cfg = anneal_config(settings, 3);
        let orders: Vec<Order> = R3_TABLE.iter().map(|&(n, _)| order(n)).collect();
        let rows = sa_table_r3(&orders, &cfg)?;
        for (row, &(n, num)) in rows.iter().zip(&R3_TABLE) {
            let exhaustive = n <= 9;
            let tolerance = match (exhaustive, settings.quick) {
                (true, false) => 0,
                (false, true) => 3,
                _ => 1,
            };
            let got = row.estimate.numerator();
            let expected = ScaledDiscrepancy::new(num, 3);
            t.note(
                got.abs_diff(num) <= tolerance,
                format!(
                    "n={n}: estimate {} = {:.2} (expected {} ± {tolerance}/3), ratio {:.2}, {} systems",
                    row.estimate.fraction(),
                    row.estimate.as_f64(),
                    expected.fraction(),
                    row.ratio,
                    row.family_size
                ),
            );
        }
        Ok(t.finish(7, TITLE))
    })
}

pub fn random_colouring_table(settings: &Settings) -> CheckResult {
    const TITLE: &str = "random-colouring statistics table";
    guarded!(8, TITLE, {
        let mut t = Tally::new();
        let (trials, tolerance) = if settings.quick { (500, 0.20) } else { (5000, 0.10) };
        for (n, means) in RANDOM_TABLE {
            for (r, expected) in (2u8..=4).zip(means) {
                let report = mean_max_disc(order(n), r, trials, 200, settings.seed)?;
                let rel = (report.mean_max_disc - expected).abs() / expected;
                t.note(
                    rel <= tolerance,
                    format!(
                        "n={n} r={r}: {:.2} ± {:.3} (expected {expected:.2}, off by {:.1}%)",
                        report.mean_max_disc,
                        report.std_error,
                        rel * 100.0
                    ),
                );
            }
        }
        t.within(Duration::from_secs(3600));
        Ok(t.finish(8, TITLE))
    })
}

/// Every pair of points lies on exactly one block.
fn covers_pairs_once(system: &SteinerSystem) -> bool {
    let n = system.order().n() as usize;
    let mut seen = vec![0u8; n * n];
    for t in system.triples() {
        let [a, b, c] = t.vertices().map(|v| v as usize);
        for (x, y) in [(a, b), (a, c), (b, c)] {
            seen[x * n + y] = seen[x * n + y].saturating_add(1);
        }
    }
    (0..n).all(|x| (x + 1..n).all(|y| seen[x * n + y] == 1))
}

pub fn property_suite(settings: &Settings) -> CheckResult {
    const TITLE: &str = "property suite";
    guarded!(9, TITLE, {
        let mut t = Tally::new();

        let admissible: Vec<Order> = (3..=99).filter_map(|n| Order::new(n).ok()).collect();
        let mut systems: Vec<SteinerSystem> = admissible.iter().map(|&o| construct(o)).collect::<Result<_, _>>()?;
        for n in [7, 9] {
            systems.extend(enumerate_all_labelled(order(n))?.systems().iter().cloned());
        }
        for n in SAMPLED_ORDERS {
            systems.extend(
                seeded_working_family(order(n), 50, settings.seed)?
                    .systems()
                    .iter()
                    .cloned(),
            );
        }
        let bad = systems.iter().filter(|s| !covers_pairs_once(s)).count();
        t.note(
            bad == 0,
            format!("pair coverage: {} systems, {bad} defective", systems.len()),
        );

        let mut checked = 0usize;
        let mut bijective = true;
        for o in admissible.iter().filter(|o| o.n() <= 21) {
            let n = o.n();
            let mut rank = 0usize;
            for c in 2..n {
                for b in 1..c {
                    for a in 0..b {
                        bijective &= rank_triple([a, b, c], *o)?.rank() == rank;
                        bijective &= unrank_triple(rank, *o)?.vertices() == [a, b, c];
                        rank += 1;
                    }
                }
            }
            bijective &= rank == o.triples();
            checked += rank;
        }
        t.note(
            bijective,
            format!("rank/unrank bijection on {checked} triples for n <= 21"),
        );

        let mut invariant = true;
        for i in 0..100u64 {
            let s = derive_seed(settings.seed, i);
            let o = order(ORDERS[(s % 6) as usize]);
            let r = 2 + (s >> 8) as u8 % 3;
            let system = stsdisc_core::sts::relabel(&construct(o)?, &random_permutation(o.n(), s))?;
            let chi = random_colouring(o, r, s)?;
            let perm: Vec<u8> = random_permutation(r as u32, s ^ 0xff)
                .into_iter()
                .map(|c| c as u8)
                .collect();
            invariant &= disc_on_system(&system, &chi)? == disc_on_system(&system, &chi.permute_colours(&perm)?)?;
        }
        t.note(
            invariant,
            "colour relabelling leaves disc unchanged on 100 random instances".into(),
        );

        let stats = |seed| commands::random_stats(&[order(13)], &[3], 200, 50, seed);
        let sa = |seed| {
            let cfg = AnnealConfig {
                restarts: 8,
                steps_per_restart: Some(5_000),
                labellings: 30,
                seed,
                ..AnnealConfig::new(2)
            };
            commands::anneal(&[order(13)], &cfg)
        };
        let mut identical = true;
        for (a, b) in [
            (stats(settings.seed)?, stats(settings.seed)?),
            (sa(settings.seed)?, sa(settings.seed)?),
        ] {
            let (a, b) = (a.without_timing().to_json(), b.without_timing().to_json());
            identical &= matches!((a, b), (Ok(a), Ok(b)) if a == b);
        }
        t.note(
            identical,
            "identical seeded runs give byte-identical reports (timing excluded)".into(),
        );

        let full = enumerate_all_labelled(order(7))?;
        let floor = parity_lower_bound(order(7), 2)?;
        let mut previous = ScaledDiscrepancy::zero(2);
        let mut values = Vec::new();
        let mut monotone = true;
        for size in [1usize, 2, 5, 10, 20, 30] {
            let indices: Vec<usize> = (0..size).collect();
            let out = exact_min_disc(&full.subfamily(&indices)?, &SearchOptions::default())?;
            monotone &= out.proved_optimal && out.best_value >= previous && out.best_value >= floor;
            previous = out.best_value;
            values.push(format!("{size}:{}", out.best_value));
        }
        t.note(
            monotone,
            format!("exact optimum over nested n=7 subfamilies [{}]", values.join(" ")),
        );

        let f9 = enumerate_all_labelled(order(9))?;
        let hist = two_flip_basin(&cut_colouring_of_size(order(9), 2)?, &f9)?;
        let spread = hist
            .counts
            .keys()
            .map(|v| v.numerator().abs_diff(hist.base_disc.numerator()))
            .max()
            .unwrap_or(0);
        t.note(
            spread <= 4,
            format!(
                "basin spread at n=9 is {} (at most 2)",
                ScaledDiscrepancy::new(spread, 2)
            ),
        );

        Ok(t.finish(9, TITLE))
    })
}

pub fn zero_disc_n9(settings: &Settings) -> CheckResult {
    const TITLE: &str = "zero-discrepancy decision at n=9";
    guarded!(10, TITLE, {
        let started = Instant::now();
        let family = enumerate_all_labelled(order(9))?;
        let budget = if settings.quick { 1_000_000 } else { DEFAULT_NODE_BUDGET };
        let out = decide_zero_disc(&family, &SearchOptions::with_budget(budget))?;
        let (status, detail) = match out.decision {
            ZeroDiscDecision::Infeasible => (Status::Pass, "infeasible: no colouring balances all 840 systems".into()),
            ZeroDiscDecision::Unknown => (Status::Unknown, format!("budget of {budget} nodes exhausted")),
            ZeroDiscDecision::FeasibleWithWitness(w) => {
                let value = max_disc_over_systems(family.systems(), &w)?;
                (
                    Status::Fail,
                    format!("feasible: witness has max disc {value} over all 840 systems (expected infeasible)"),
                )
            }
        };
        Ok(CheckResult {
            id: 10,
            title: TITLE,
            status,
            details: vec![detail, format!("{} nodes", out.nodes_explored)],
            elapsed: started.elapsed(),
        })
    })
}

/// Parses and validates a system file.
pub fn sts_file(path: &Path) -> CheckResult {
    const TITLE: &str = "system file";
    let started = Instant::now();
    let (status, detail) = match std::fs::read_to_string(path) {
        Err(err) => (Status::Fail, format!("{}: {err}", path.display())),
        Ok(text) => match parse_text(&text) {
            Ok(s) => (
                Status::Pass,
                format!(
                    "{}: valid STS({}) with {} blocks",
                    path.display(),
                    s.order(),
                    s.blocks().len()
                ),
            ),
            Err(err) => (Status::Fail, format!("{}: {err}", path.display())),
        },
    };
    CheckResult {
        id: 0,
        title: TITLE,
        status,
        details: vec![detail],
        elapsed: started.elapsed(),
    }
}

pub type Check = fn(&Settings) -> CheckResult;

pub const ALL: [Check; 10] = [
    enumeration_counts,
    delta2_table,
    blue_count_identity,
    certified_optimum,
    basin_census,
    anneal_two_colours,
    anneal_three_colours,
    random_colouring_table,
    property_suite,
    zero_disc_n9,
];
