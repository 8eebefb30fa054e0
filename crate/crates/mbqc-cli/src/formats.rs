//! File formats: the measurement-pattern description and the protocol
//! transcript export. Schemas for both live under `docs/`.

use anyhow::{bail, Context, Result};
use mbqc_core::pattern::MeasurementPattern;
use mbqc_core::ubqc::SessionRecord;
use mbqc_core::{Angle, OpenGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

/// Angle encoding in pattern files: `{"octants": k}` or `{"radians": x}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum AngleSpec {
    Octants { octants: i64 },
    Radians { radians: f64 },
}

impl From<AngleSpec> for Angle {
    fn from(spec: AngleSpec) -> Angle {
        match spec {
            AngleSpec::Octants { octants } => Angle::octant(octants),
            AngleSpec::Radians { radians } => Angle::radians(radians),
        }
    }
}

/// On-disk measurement pattern. Maps are keyed by node index (JSON object
/// keys are strings); omitted angles default to 0 and omitted correction
/// sets to empty.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    #[serde(default)]
    pub angles: BTreeMap<String, AngleSpec>,
    #[serde(default)]
    pub sx: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub sz: BTreeMap<String, Vec<usize>>,
}

fn parse_node_key(key: &str, nodes: usize) -> Result<usize> {
    let node: usize = key
        .parse()
        .with_context(|| format!("node key {key:?} is not an index"))?;
    if node >= nodes {
        bail!("node key {node} outside 0..{nodes}");
    }
    Ok(node)
}

impl PatternFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("parsing pattern file")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }

    /// Validate against every structural invariant and build the graph and
    /// pattern. Measurement order is ascending node index.
    pub fn into_parts(self) -> Result<(OpenGraph, MeasurementPattern)> {
        let graph = OpenGraph::new(self.nodes, &self.edges, &self.inputs, &self.outputs)?;
        let mut angles = vec![Angle::ZERO; self.nodes];
        for (key, spec) in &self.angles {
            angles[parse_node_key(key, self.nodes)?] = (*spec).into();
        }
        let mut sx = vec![BTreeSet::new(); self.nodes];
        for (key, deps) in &self.sx {
            sx[parse_node_key(key, self.nodes)?] = deps.iter().copied().collect();
        }
        let mut sz = vec![BTreeSet::new(); self.nodes];
        for (key, deps) in &self.sz {
            sz[parse_node_key(key, self.nodes)?] = deps.iter().copied().collect();
        }
        let order: Vec<usize> = (0..self.nodes).collect();
        let pattern = MeasurementPattern::new(angles, sx, sz, &order)?;
        Ok((graph, pattern))
    }
}

/// One transcript round as exported.
#[derive(Debug, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub node: usize,
    pub delta_octants: u8,
    pub s_raw: u8,
}

/// Client-side secrets and unmasked outcomes; stripping this key from the
/// file leaves exactly the server's view of the session.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClientSecretsFile {
    pub r: Vec<u8>,
    pub theta_octants: Vec<u8>,
    pub s_unmasked: Vec<u8>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TranscriptFile {
    pub transcript: Vec<TranscriptEntry>,
    pub client_secrets: ClientSecretsFile,
}

impl TranscriptFile {
    pub fn from_session(session: &SessionRecord) -> Result<Self> {
        let transcript = session
            .rounds
            .iter()
            .map(|round| {
                let delta_octants = round.delta.as_octant().ok_or_else(|| {
                    anyhow::anyhow!("round {} has a non-octant delta", round.node)
                })?;
                Ok(TranscriptEntry {
                    node: round.node,
                    delta_octants,
                    s_raw: round.s_raw,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TranscriptFile {
            transcript,
            client_secrets: ClientSecretsFile {
                r: session.secrets.r.clone(),
                theta_octants: session.secrets.theta_octants.clone(),
                s_unmasked: session.rounds.iter().map(|r| r.s_unmasked).collect(),
            },
        })
    }
}

pub fn write_transcript(path: &Path, session: &SessionRecord) -> Result<()> {
    let file = TranscriptFile::from_session(session)?;
    let text = serde_json::to_string_pretty(&file)? + "\n";
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mbqc_core::pattern::{run_pattern, RunOptions};
    use mbqc_core::{Flow, InputSpec, RngStream};

    const X_GADGET_JSON: &str = r#"{
        "nodes": 3,
        "edges": [[0, 1], [1, 2]],
        "inputs": [0],
        "outputs": [2],
        "angles": {"1": {"octants": 4}},
        "sx": {"1": [0], "2": [1]},
        "sz": {"2": [0]}
    }"#;

    #[test]
    fn loads_and_runs_a_pattern_file() {
        let file = PatternFile::from_json(X_GADGET_JSON).unwrap();
        let (graph, pattern) = file.into_parts().unwrap();
        let flow = Flow::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut rng = RngStream::new(8);
        let run = run_pattern(
            &graph,
            &flow,
            &pattern,
            &[InputSpec::Zero],
            &mut rng,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(run.outputs, vec![1]);
    }

    #[test]
    fn rejects_invalid_structures() {
        // Self-loop edge.
        let bad = r#"{"nodes": 2, "edges": [[0, 0]], "inputs": [0], "outputs": [1]}"#;
        assert!(PatternFile::from_json(bad).unwrap().into_parts().is_err());

        // Correction referencing a later node.
        let bad = r#"{
            "nodes": 2, "edges": [[0, 1]], "inputs": [0], "outputs": [1],
            "sx": {"0": [1]}
        }"#;
        assert!(PatternFile::from_json(bad).unwrap().into_parts().is_err());

        // Angle on an unknown node.
        let bad = r#"{
            "nodes": 2, "edges": [[0, 1]], "inputs": [0], "outputs": [1],
            "angles": {"5": {"octants": 1}}
        }"#;
        assert!(PatternFile::from_json(bad).unwrap().into_parts().is_err());

        // Unknown field.
        let bad = r#"{"nodes": 2, "edges": [], "inputs": [], "outputs": [], "extra": 1}"#;
        assert!(PatternFile::from_json(bad).is_err());
    }

    #[test]
    fn radians_angles_accepted() {
        let file = PatternFile::from_json(
            r#"{
                "nodes": 2, "edges": [[0, 1]], "inputs": [0], "outputs": [1],
                "angles": {"0": {"radians": 0.75}}
            }"#,
        )
        .unwrap();
        let (_, pattern) = file.into_parts().unwrap();
        assert!(pattern.angle(0).approx_eq(Angle::radians(0.75), 1e-12));
    }

    #[test]
    fn transcript_round_trip() {
        let session = mbqc_core::ubqc::ubqc_shot(
            mbqc_core::grover::Oracle::parse("00").unwrap(),
            3,
            0,
            mbqc_core::ubqc::ProtocolMode::Faithful,
            None,
        )
        .unwrap();
        let file = TranscriptFile::from_session(&session).unwrap();
        assert_eq!(file.transcript.len(), 16);
        assert_eq!(file.client_secrets.r.len(), 18);
        for (entry, round) in file.transcript.iter().zip(&session.rounds) {
            assert_eq!(entry.s_raw, round.s_raw);
            assert_eq!(
                file.client_secrets.s_unmasked[entry.node],
                round.s_raw ^ session.secrets.r[entry.node]
            );
        }
        // Serialized text parses back.
        let text = serde_json::to_string(&file).unwrap();
        let parsed: TranscriptFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.transcript.len(), 16);
    }
}
