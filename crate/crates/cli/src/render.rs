//! Plain-text tables, computed from report payloads only.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::report::{Decision, ExperimentReport, Payload};

pub fn render(report: &ExperimentReport) -> String {
    let mut out = String::new();
    match &report.payload {
        Payload::Enumerate(rows) => {
            line(&mut out, format_args!("{:>4}  {:>8}  {}", "n", "systems", "source"));
            for row in rows {
                let source = serde_json::to_value(row.provenance).unwrap_or_default();
                let source = source.as_str().unwrap_or_default().to_owned();
                line(&mut out, format_args!("{:>4}  {:>8}  {source}", row.n, row.count));
            }
        }
        Payload::Delta2Formula(rows) => {
            line(
                &mut out,
                format_args!("{:>4}  {:>4}  {:>12}  {:>6}", "n", "m", "x", "delta2"),
            );
            for row in rows {
                let xs = row.argmins.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                line(
                    &mut out,
                    format_args!("{:>4}  {:>4}  {:>12}  {:>6}", row.n, row.blocks, xs, row.delta2),
                );
            }
        }
        Payload::ExactSearch(res) => {
            line(&mut out, format_args!("n = {}, systems = {}", res.n, res.family_size));
            line(
                &mut out,
                format_args!("best value      {} ({})", res.best_value, res.best_value.fraction()),
            );
            line(&mut out, format_args!("parity bound    {}", res.parity_lower_bound));
            line(&mut out, format_args!("proved optimal  {}", res.proved_optimal));
            line(&mut out, format_args!("budget hit      {}", res.budget_exhausted));
            line(&mut out, format_args!("nodes           {}", res.nodes_explored));
        }
        Payload::ZeroDisc(res) => {
            let decision = match res.decision {
                Decision::Infeasible => "infeasible",
                Decision::Feasible => "feasible (witness found)",
                Decision::Unknown => "unknown (budget exhausted)",
            };
            line(&mut out, format_args!("n = {}, systems = {}", res.n, res.family_size));
            line(&mut out, format_args!("zero discrepancy  {decision}"));
            line(&mut out, format_args!("nodes             {}", res.nodes_explored));
        }
        Payload::Basin(res) => {
            line(
                &mut out,
                format_args!("n = {}, |X| = {}, base disc = {}", res.n, res.cut_size, res.base_disc),
            );
            line(&mut out, format_args!("{:>6}  {:>8}", "disc", "count"));
            for bin in &res.histogram {
                line(&mut out, format_args!("{:>6}  {:>8}", bin.value.to_string(), bin.count));
            }
            line(&mut out, format_args!("{:>6}  {:>8}", "total", res.total));
            line(
                &mut out,
                format_args!("fraction at base value {:.4}", res.fraction_optimal),
            );
        }
        Payload::SA(rows) => {
            line(
                &mut out,
                format_args!(
                    "{:>4}  {:>2}  {:>4}  {:>6}  {:>9}  {:>8}  {:>7}",
                    "n", "r", "m", "delta2", "estimate", "exact", "est/n"
                ),
            );
            for row in rows {
                line(
                    &mut out,
                    format_args!(
                        "{:>4}  {:>2}  {:>4}  {:>6}  {:>9.2}  {:>8}  {:>7.2}",
                        row.n,
                        row.r,
                        row.blocks,
                        row.delta2_formula.to_string(),
                        row.estimate.as_f64(),
                        row.estimate.fraction(),
                        row.ratio
                    ),
                );
            }
        }
        Payload::RandomStats(rows) => {
            let orders: BTreeSet<u32> = rows.iter().map(|row| row.n.n()).collect();
            let colours: BTreeSet<u8> = rows.iter().map(|row| row.r).collect();
            let mut header = format!("{:>4}", "n");
            for r in &colours {
                write!(header, "  {:>15}", format!("r={r}")).unwrap();
            }
            line(&mut out, format_args!("{header}"));
            for n in &orders {
                let mut text = format!("{n:>4}");
                for r in &colours {
                    let cell = rows
                        .iter()
                        .find(|row| row.n.n() == *n && row.r == *r)
                        .map(|row| format!("{:.2} ± {:.2}", row.mean_max_disc, row.std_error))
                        .unwrap_or_default();
                    write!(text, "  {cell:>15}").unwrap();
                }
                line(&mut out, format_args!("{text}"));
            }
            let mut predictions = String::from("heuristic");
            for row in rows {
                if let Some(p) = row.heuristic_prediction {
                    write!(predictions, "  n={},r={}: {p:.2}", row.n, row.r).unwrap();
                }
            }
            line(&mut out, format_args!("{predictions}"));
        }
    }
    out
}

fn line(out: &mut String, args: std::fmt::Arguments) {
    out.write_fmt(args).unwrap();
    out.push('\n');
}
