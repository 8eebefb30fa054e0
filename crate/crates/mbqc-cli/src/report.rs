//! Report types: one struct per command, serialized as JSON or rendered as
//! text. Field order is fixed by the struct definitions and maps are
//! ordered, so identical runs serialize identically.

use anyhow::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

fn histogram_lines(counts: &BTreeMap<String, u64>) -> String {
    let shots: u64 = counts.values().sum();
    let mut entries: Vec<(&str, u64)> = counts.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let width = entries
        .iter()
        .map(|(_, c)| c.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for (key, count) in entries {
        let freq = count as f64 / shots as f64;
        let _ = writeln!(out, "  {key}  {count:>width$}  {freq:.6}");
    }
    out
}

#[derive(Debug, Serialize)]
pub struct GroverReport {
    pub command: &'static str,
    pub oracle: String,
    pub mode: &'static str,
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
    pub marked: String,
    pub pass: bool,
}

impl GroverReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "grover  oracle={}  shots={}  seed={}",
            self.oracle, self.shots, self.seed
        );
        out.push_str(&histogram_lines(&self.counts));
        let _ = writeln!(
            out,
            "marked {} frequency {:.6}",
            self.marked,
            *self.counts.get(&self.marked).unwrap_or(&0) as f64 / self.shots as f64
        );
        let _ = writeln!(out, "pass: {}", self.pass);
        out
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpectedReport {
    ProbZero { value: f64, sample_tolerance: f64 },
    PointMass { bitstring: String },
}

#[derive(Debug, Serialize)]
pub struct GadgetReport {
    pub command: &'static str,
    pub gadget: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_octants: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_radians: Option<f64>,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedReport>,
    pub pass: bool,
}

impl GadgetReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "gadget {}  mode={}  seed={}",
            self.gadget, self.mode, self.seed
        );
        if let Some(counts) = &self.counts {
            out.push_str(&histogram_lines(counts));
        }
        if let Some(probs) = &self.probabilities {
            for (key, p) in probs {
                let _ = writeln!(out, "  {key}  {p:.12}");
            }
        }
        match &self.expected {
            Some(ExpectedReport::ProbZero {
                value,
                sample_tolerance,
            }) => {
                let _ = writeln!(
                    out,
                    "expected P(0) = {value:.6} (±{sample_tolerance} sampled)"
                );
            }
            Some(ExpectedReport::PointMass { bitstring }) => {
                let _ = writeln!(out, "expected point mass on {bitstring}");
            }
            None => {
                let _ = writeln!(out, "custom input: no reference expectation asserted");
            }
        }
        let _ = writeln!(out, "pass: {}", self.pass);
        out
    }
}

#[derive(Debug, Serialize)]
pub struct UniformityReport {
    pub statistic: f64,
    pub p_value: f64,
    pub passes: bool,
}

#[derive(Debug, Serialize)]
pub struct UbqcReport {
    pub command: &'static str,
    pub oracle: String,
    pub protocol: &'static str,
    pub view: &'static str,
    pub shots: u64,
    pub seed: u64,
    pub marked: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub client_counts: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub server_counts: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<UniformityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript_path: Option<String>,
    pub pass: bool,
}

impl UbqcReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "ubqc  oracle={}  protocol={}  view={}  shots={}  seed={}",
            self.oracle, self.protocol, self.view, self.shots, self.seed
        );
        if let Some(counts) = &self.client_counts {
            let _ = writeln!(out, "client view (unmasked):");
            out.push_str(&histogram_lines(counts));
        }
        if let Some(counts) = &self.server_counts {
            let _ = writeln!(out, "server view (raw):");
            out.push_str(&histogram_lines(counts));
        }
        if let Some(u) = &self.uniformity {
            let _ = writeln!(
                out,
                "server-view uniformity: chi2 {:.4}, p {:.4}, passes: {}",
                u.statistic, u.p_value, u.passes
            );
        }
        if let Some(path) = &self.transcript_path {
            let _ = writeln!(out, "transcript: {path}");
        }
        let _ = writeln!(out, "pass: {}", self.pass);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_text_sorted_and_fixed_width() {
        let mut counts = BTreeMap::new();
        counts.insert("00".to_string(), 900u64);
        counts.insert("11".to_string(), 100u64);
        counts.insert("01".to_string(), 24u64);
        let text = histogram_lines(&counts);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("  00  900"));
        assert!(lines[1].contains("11"));
        assert!(lines[2].contains("01"));
        // counts right-aligned to the widest
        assert!(lines[1].contains(" 100 "));
        assert!(lines[2].contains("  24 "));
    }

    #[test]
    fn json_is_stable() {
        let report = GroverReport {
            command: "grover",
            oracle: "00".into(),
            mode: "sample",
            shots: 4,
            seed: 7,
            counts: BTreeMap::from([("00".to_string(), 4u64)]),
            marked: "00".into(),
            pass: true,
        };
        assert_eq!(report.to_json().unwrap(), report.to_json().unwrap());
        assert!(report
            .to_json()
            .unwrap()
            .contains("\"command\": \"grover\""));
    }
}
