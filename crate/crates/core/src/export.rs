//! CSV and JSON renderings of run results.

use std::fmt::Write as _;

use serde::Serialize;

use crate::comparative::NetworkComparison;
use crate::dynamics::{DiffusionTrace, ThresholdSequence};
use crate::rational::{self, Rational};

/// `period,new_adopters,cumulative_adopters,threshold`. The threshold cell is
/// empty when `thresholds` is `None`.
pub fn trace_csv(trace: &DiffusionTrace, thresholds: Option<&ThresholdSequence>) -> String {
    let mut out = String::from("period,new_adopters,cumulative_adopters,threshold\n");
    for row in trace.rows() {
        let threshold = thresholds
            .and_then(|s| s.at(row.period))
            .map(ToString::to_string)
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            row.period, row.new_adopters, row.cumulative_adopters, threshold
        )
        .expect("writing to a String");
    }
    out
}

pub fn summary_json(trace: &DiffusionTrace) -> String {
    let mut text = serde_json::to_string_pretty(trace.terminal()).expect("terminal serializes");
    text.push('\n');
    text
}

/// One-line human summary, e.g. `2/10 adopt; G_bar=2; certified at t=2`.
pub fn summary_line(trace: &DiffusionTrace) -> String {
    let t = trace.terminal();
    let g_bar = t
        .g_bar
        .map_or_else(|| "none".to_string(), |g| g.to_string());
    let status = match (t.certified, t.stall_period) {
        (true, Some(p)) => format!("certified at t={p}"),
        (true, None) => "certified".to_string(),
        (false, _) => format!("not certified by t={}", trace.horizon()),
    };
    format!(
        "{}/{} adopt; G_bar={}; {}",
        t.asymptotic_adopters,
        trace.population_size(),
        g_bar,
        status
    )
}

/// `value,period,cumulative_adopters` for every swept value, in the given order.
pub fn sweep_csv(runs: &[(Rational, DiffusionTrace)]) -> String {
    let mut out = String::from("value,period,cumulative_adopters\n");
    for (value, trace) in runs {
        let value = rational::format(value);
        for row in trace.rows() {
            writeln!(out, "{},{},{}", value, row.period, row.cumulative_adopters)
                .expect("writing to a String");
        }
    }
    out
}

#[derive(Serialize)]
struct NetworkRow {
    t: u64,
    dn_a: usize,
    dn_b: usize,
}

pub fn network_comparison_json(cmp: &NetworkComparison) -> serde_json::Value {
    let horizon = cmp.trace_a.horizon();
    let rows: Vec<NetworkRow> = (1..=horizon)
        .map(|t| NetworkRow {
            t,
            dn_a: cmp.trace_a.cumulative_at(t),
            dn_b: cmp.trace_b.cumulative_at(t),
        })
        .collect();
    serde_json::json!({
        "verdict": network_verdict(cmp),
        "hypothesis": cmp.hypothesis,
        "asserted": cmp.asserted,
        "containment": cmp.containment,
        "per_period": rows,
        "summary_a": cmp.trace_a.terminal(),
        "summary_b": cmp.trace_b.terminal(),
    })
}

pub fn network_verdict(cmp: &NetworkComparison) -> &'static str {
    if cmp.containment {
        "B contains A"
    } else {
        "no containment"
    }
}
