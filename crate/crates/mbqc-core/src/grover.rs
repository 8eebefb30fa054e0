//! Two-qubit Grover search as an 18-qubit measurement pattern.
//!
//! The layout is a 2-row × 9-column grid, `q_{x,y} = q_{2y+x}` with row
//! `x ∈ {0,1}` and column `y ∈ {0..8}`. Horizontal edges chain each row;
//! vertical edges sit at the two CZ columns, nodes {4,5} (oracle) and
//! {14,15} (diffusion). Inputs are {0,1}, outputs {16,17}, and the flow is
//! `f(i) = i + 2`.
//!
//! Bitstring convention follows the circuit simulator the pattern
//! reproduces: the rightmost character of an oracle or outcome string is
//! row 0 (the `q0 → q16` chain), the leftmost is row 1.

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::graph::{CorrectionSets, Flow, InputSpec, OpenGraph};
use crate::histogram::{render_bits, ShotHistogram};
use crate::pattern::{run_pattern, MeasurementPattern, RunOptions};
use crate::rng::RngStream;
use crate::state::StateVector;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub const NODE_COUNT: usize = 18;
pub const INPUT_NODES: [usize; 2] = [0, 1];
pub const OUTPUT_NODES: [usize; 2] = [16, 17];
/// Nodes carrying a vertical CZ edge: the oracle and diffusion columns.
pub const VERTICAL_CZ_NODES: [usize; 4] = [4, 5, 14, 15];

/// The marked 2-bit string a Grover oracle singles out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    /// `row_bits[x]` is the marked bit carried by row `x`.
    row_bits: [u8; 2],
}

impl Oracle {
    /// Parse `"00" | "01" | "10" | "11"`; the rightmost character is row 0.
    pub fn parse(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 2 || bytes.iter().any(|b| *b != b'0' && *b != b'1') {
            return Err(Error::Usage(format!(
                "oracle must be one of 00, 01, 10, 11; got {s:?}"
            )));
        }
        Ok(Oracle {
            row_bits: [bytes[1] - b'0', bytes[0] - b'0'],
        })
    }

    pub fn all() -> [Oracle; 4] {
        ["00", "01", "10", "11"].map(|s| Oracle::parse(s).unwrap())
    }

    pub fn row_bit(&self, row: usize) -> u8 {
        self.row_bits[row]
    }

    /// The bitstring the search must return, rendered row 1 first.
    pub fn marked_bitstring(&self) -> String {
        render_bits(&self.row_bits)
    }

    /// Index into a `[row0, row1]` little-endian distribution.
    pub fn marked_index(&self) -> usize {
        usize::from(self.row_bits[0]) | (usize::from(self.row_bits[1]) << 1)
    }
}

impl core::str::FromStr for Oracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Oracle::parse(s)
    }
}

/// The 2×9 grid: 16 horizontal edges plus the two vertical CZ pairs.
pub fn grover_graph() -> OpenGraph {
    let mut edges = Vec::with_capacity(18);
    for y in 0..8 {
        for x in 0..2 {
            edges.push((2 * y + x, 2 * (y + 1) + x));
        }
    }
    edges.push((4, 5));
    edges.push((14, 15));
    OpenGraph::new(NODE_COUNT, &edges, &INPUT_NODES, &OUTPUT_NODES)
        .expect("grid layout is well-formed")
}

/// `f(i) = i + 2` with the ascending measurement order.
pub fn grover_flow() -> Flow {
    let assignments: Vec<(usize, usize)> = (0..16).map(|i| (i, i + 2)).collect();
    Flow::new(NODE_COUNT, &assignments).expect("grid flow is well-formed")
}

/// Planned measurement angles for `oracle`.
///
/// The diffusion Z gates always put π on {10, 11}; each row needs its
/// oracle X-framing (π on {2, 6} for row 0, {3, 7} for row 1) exactly when
/// that row's marked bit is 0.
pub fn grover_angles(oracle: Oracle) -> Vec<Angle> {
    let mut angles = vec![Angle::ZERO; NODE_COUNT];
    angles[10] = Angle::PI;
    angles[11] = Angle::PI;
    if oracle.row_bit(0) == 0 {
        angles[2] = Angle::PI;
        angles[6] = Angle::PI;
    }
    if oracle.row_bit(1) == 0 {
        angles[3] = Angle::PI;
        angles[7] = Angle::PI;
    }
    angles
}

/// Closed-form correction sets of the grid.
///
/// `S_X(i) = {i−2}` for `i ∈ [2,17]`; `S_Z(i) = {i−4}` away from the
/// vertical columns, gaining `i−1` (even) or `i−3` (odd) on them.
#[allow(clippy::needless_range_loop)]
pub fn closed_form_correction_sets() -> CorrectionSets {
    let mut sx = vec![BTreeSet::new(); NODE_COUNT];
    let mut sz = vec![BTreeSet::new(); NODE_COUNT];
    for i in 2..NODE_COUNT {
        sx[i].insert(i - 2);
    }
    for i in 4..NODE_COUNT {
        sz[i].insert(i - 4);
        if VERTICAL_CZ_NODES.contains(&i) {
            sz[i].insert(if i % 2 == 0 { i - 1 } else { i - 3 });
        }
    }
    CorrectionSets { sx, sz }
}

/// Graph, flow, and pattern for one oracle.
pub fn build_grover_pattern(oracle: Oracle) -> (OpenGraph, Flow, MeasurementPattern) {
    let graph = grover_graph();
    let flow = grover_flow();
    let pattern = MeasurementPattern::from_flow(&graph, &flow, grover_angles(oracle))
        .expect("grid pattern is well-formed");
    (graph, flow, pattern)
}

fn pattern_options(corrections: bool) -> RunOptions {
    RunOptions {
        corrections,
        ..RunOptions::default()
    }
}

/// One seeded shot; returns the output bits `[q16, q17]`.
pub fn grover_shot(oracle: Oracle, run_seed: u64, shot_index: u64) -> Result<[u8; 2]> {
    grover_shot_opts(oracle, run_seed, shot_index, true)
}

pub fn grover_shot_opts(
    oracle: Oracle,
    run_seed: u64,
    shot_index: u64,
    corrections: bool,
) -> Result<[u8; 2]> {
    let (graph, flow, pattern) = build_grover_pattern(oracle);
    let mut rng = RngStream::for_shot(run_seed, shot_index);
    let run = run_pattern(
        &graph,
        &flow,
        &pattern,
        &[InputSpec::Plus, InputSpec::Plus],
        &mut rng,
        &pattern_options(corrections),
    )?;
    Ok([run.outputs[0], run.outputs[1]])
}

/// Sample the pattern `shots` times. Noiseless and corrected, every shot
/// lands on the marked bitstring.
pub fn run_grover(oracle: Oracle, shots: u64, seed: u64) -> Result<ShotHistogram> {
    run_grover_opts(oracle, shots, seed, true)
}

/// As [`run_grover`], with the conditional corrections optionally disabled
/// to demonstrate they are load-bearing.
pub fn run_grover_opts(
    oracle: Oracle,
    shots: u64,
    seed: u64,
    corrections: bool,
) -> Result<ShotHistogram> {
    let (graph, flow, pattern) = build_grover_pattern(oracle);
    let options = pattern_options(corrections);
    let inputs = [InputSpec::Plus, InputSpec::Plus];
    let mut histogram = ShotHistogram::new(seed);
    for shot in 0..shots {
        let mut rng = RngStream::for_shot(seed, shot);
        let run = run_pattern(&graph, &flow, &pattern, &inputs, &mut rng, &options)?;
        histogram.record(render_bits(&run.outputs));
    }
    Ok(histogram)
}

/// Exact output distribution of the circuit-model two-qubit Grover.
///
/// H⊗H, the X-framed CZ oracle, then the diffusion H,H / Z,Z / CZ / H,H.
/// Entry `k` of the result is the probability of row 0 reading bit 0 of `k`
/// and row 1 reading bit 1.
pub fn reference_circuit_grover(oracle: Oracle) -> Result<Vec<f64>> {
    let mut state = StateVector::new(2)?;
    state.h(0)?;
    state.h(1)?;
    // Oracle: frame the CZ with X on each row whose marked bit is 0.
    for row in 0..2 {
        if oracle.row_bit(row) == 0 {
            state.x(row)?;
        }
    }
    state.cz(0, 1)?;
    for row in 0..2 {
        if oracle.row_bit(row) == 0 {
            state.x(row)?;
        }
    }
    // Diffusion.
    state.h(0)?;
    state.h(1)?;
    state.z(0)?;
    state.z(1)?;
    state.cz(0, 1)?;
    state.h(0)?;
    state.h(1)?;
    state.basis_probabilities(&[0, 1])
}
