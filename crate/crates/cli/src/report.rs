//! Key/value reports and 2-decimal comparison tables.

use std::fmt::Write as _;

use quadkit::{Metrics, VerificationReport};
use serde_json::{Map, Value};

/// Ordered `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("plain map");
        s.push('\n');
        s
    }
}

/// Witness as a bit string `x1 x2 ... xn`.
pub fn witness_bits(r: &VerificationReport, n: u32) -> String {
    (0..n)
        .map(|i| match r.witness.get(quadkit::VarId::orig(i)) {
            Some(true) => '1',
            _ => '0',
        })
        .collect()
}

pub fn verification(r: &VerificationReport, n: u32) -> Report {
    let mut rep = Report::default();
    rep.push("perfect", r.ok)
        .push("points", r.points)
        .push("worst_gap", format!("{:e}", r.worst_gap));
    if !r.ok {
        rep.push("witness", witness_bits(r, n));
    }
    rep
}

pub fn metrics_table(rows: &[(&str, Metrics)]) -> String {
    let mut out = format!("{:<10} {:>5} {:>10} {:>10} {:>10}\n", "method", "aux", "new_terms", "min", "max");
    for (name, m) in rows {
        let _ = writeln!(
            out,
            "{:<10} {:>5} {:>10} {:>10.2} {:>10.2}",
            name, m.aux_count, m.new_quadratic_terms, m.coeff_min, m.coeff_max
        );
    }
    out
}
