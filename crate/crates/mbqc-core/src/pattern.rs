//! Measurement patterns: planned angles plus correction sets, and the
//! machinery that executes them.
//!
//! A node is measured at its corrected angle φ′ = (−1)^{sX} φ + π·sZ, where
//! the parities come from earlier outcomes. Instead of recomputing angles,
//! execution applies the equivalent conditional Z and X gates followed by
//! RZ(−φ), H, and a Z measurement.
//!
//! Two engines run the same pattern: the dense engine holds the whole
//! register (and powers exact branch enumeration), the frontier engine
//! streams through the graph for fast sampling.

use crate::angle::Angle;
use crate::bits::ClassicalBits;
use crate::error::{Error, Result};
use crate::frontier::{ensure_ready, FrontierState};
use crate::graph::{
    derive_correction_sets, entangle_cluster, standard_preps, Flow, InputSpec, OpenGraph,
};
use crate::state::{OutcomeSource, PauliGate, StateVector, MIN_BRANCH_WEIGHT};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Exact mode enumerates both outcomes per measured qubit; past eight the
/// branch tree stops being worth it over sampling.
pub const MAX_EXACT_MEASURED: usize = 8;

/// Planned angle and correction sets per node.
///
/// Output nodes carry correction sets too (their byproducts are fixed at
/// readout); their angles are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPattern {
    angles: Vec<Angle>,
    sx: Vec<BTreeSet<usize>>,
    sz: Vec<BTreeSet<usize>>,
}

impl MeasurementPattern {
    /// Validate and build. Every correction index must precede its node in
    /// the measurement order.
    pub fn new(
        angles: Vec<Angle>,
        sx: Vec<BTreeSet<usize>>,
        sz: Vec<BTreeSet<usize>>,
        order: &[usize],
    ) -> Result<Self> {
        let n = angles.len();
        if sx.len() != n || sz.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: sx.len().max(sz.len()),
            });
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &node) in order.iter().enumerate() {
            if node >= n {
                return Err(Error::Structure(format!("order node {node} out of range")));
            }
            pos[node] = p;
        }
        for node in 0..n {
            for &dep in sx[node].iter().chain(sz[node].iter()) {
                if dep >= n {
                    return Err(Error::Structure(format!(
                        "correction index {dep} of node {node} out of range"
                    )));
                }
                if pos[dep] >= pos[node] {
                    return Err(Error::Structure(format!(
                        "correction index {dep} does not precede node {node} in measurement order"
                    )));
                }
            }
        }
        Ok(MeasurementPattern { angles, sx, sz })
    }

    /// Derive the correction sets from a valid flow.
    pub fn from_flow(graph: &OpenGraph, flow: &Flow, angles: Vec<Angle>) -> Result<Self> {
        if angles.len() != graph.node_count() {
            return Err(Error::SizeMismatch {
                expected: graph.node_count(),
                got: angles.len(),
            });
        }
        let sets = derive_correction_sets(graph, flow)?;
        MeasurementPattern::new(angles, sets.sx, sets.sz, flow.order())
    }

    pub fn node_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angle(&self, node: usize) -> Angle {
        self.angles[node]
    }

    pub fn sx(&self, node: usize) -> &BTreeSet<usize> {
        &self.sx[node]
    }

    pub fn sz(&self, node: usize) -> &BTreeSet<usize> {
        &self.sz[node]
    }
}

/// φ′ = (−1)^{sx}·φ + π·sz, canonicalized; exact for octant φ.
pub fn corrected_angle(phi: Angle, sx_parity: u8, sz_parity: u8) -> Angle {
    let signed = if sx_parity & 1 == 1 { -phi } else { phi };
    if sz_parity & 1 == 1 {
        signed.plus_pi()
    } else {
        signed
    }
}

/// Readout basis for an output qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Z,
    /// Implemented as H followed by a Z measurement.
    X,
}

/// Which state representation executes the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Full register, needed for exact queries and amplitude access.
    Dense,
    /// Lazy activation window; orders of magnitude faster on long patterns.
    Frontier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Apply the conditional X/Z corrections. Disabling this exists to show
    /// they are load-bearing; results become garbage.
    pub corrections: bool,
    /// Also apply Z byproduct corrections on the output qubits. Off by
    /// default: Z-basis readout is insensitive to them.
    pub output_z_corrections: bool,
    /// Readout basis per output (in `graph.outputs()` order); `None` = all Z.
    pub output_bases: Option<Vec<Basis>>,
    pub engine: Engine,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            corrections: true,
            output_z_corrections: false,
            output_bases: None,
            engine: Engine::Frontier,
        }
    }
}

impl RunOptions {
    fn basis(&self, output_index: usize) -> Basis {
        self.output_bases
            .as_ref()
            .map_or(Basis::Z, |b| b[output_index])
    }
}

/// Outcome of one pattern execution.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRun {
    /// Output readouts, in `graph.outputs()` order.
    pub outputs: Vec<u8>,
    /// Full outcome record for every node.
    pub bits: ClassicalBits,
}

fn check_dependencies(
    bits: &ClassicalBits,
    node: usize,
    pattern: &MeasurementPattern,
) -> Result<()> {
    for &dep in pattern.sx(node).iter().chain(pattern.sz(node).iter()) {
        if !bits.is_measured(dep) {
            return Err(Error::DependencyUnmeasured {
                node,
                dependency: dep,
            });
        }
    }
    Ok(())
}

/// Conditional corrections followed by the basis-change gates RZ(−φ), H.
pub(crate) fn apply_measurement_prelude(
    state: &mut StateVector,
    bits: &ClassicalBits,
    node: usize,
    pattern: &MeasurementPattern,
    corrections: bool,
) -> Result<()> {
    if corrections {
        check_dependencies(bits, node, pattern)?;
        for &j in pattern.sz(node) {
            state.apply_conditional(PauliGate::Z, node, j, bits)?;
        }
        for &j in pattern.sx(node) {
            state.apply_conditional(PauliGate::X, node, j, bits)?;
        }
    }
    state.rz(-pattern.angle(node), node)?;
    state.h(node)
}

/// Measure one pattern node with corrections on the dense engine.
pub fn measure_pattern_qubit(
    state: &mut StateVector,
    bits: &mut ClassicalBits,
    node: usize,
    pattern: &MeasurementPattern,
    src: &mut dyn OutcomeSource,
) -> Result<u8> {
    apply_measurement_prelude(state, bits, node, pattern, true)?;
    state.measure_z(node, src, bits)
}

/// Execute a full pattern: measure every non-output node in order, then
/// correct and read out the outputs.
pub fn run_pattern(
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    inputs: &[InputSpec],
    src: &mut dyn OutcomeSource,
    options: &RunOptions,
) -> Result<PatternRun> {
    if pattern.node_count() != graph.node_count() {
        return Err(Error::SizeMismatch {
            expected: graph.node_count(),
            got: pattern.node_count(),
        });
    }
    if let Some(bases) = &options.output_bases {
        if bases.len() != graph.outputs().len() {
            return Err(Error::SizeMismatch {
                expected: graph.outputs().len(),
                got: bases.len(),
            });
        }
    }
    match options.engine {
        Engine::Dense => run_dense(graph, flow, pattern, inputs, src, options),
        Engine::Frontier => run_frontier(graph, flow, pattern, inputs, src, options),
    }
}

fn collect_outputs(graph: &OpenGraph, bits: &ClassicalBits) -> Result<Vec<u8>> {
    graph.outputs().iter().map(|&o| bits.get(o)).collect()
}

fn run_dense(
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    inputs: &[InputSpec],
    src: &mut dyn OutcomeSource,
    options: &RunOptions,
) -> Result<PatternRun> {
    let n = graph.node_count();
    let mut state = StateVector::new(n)?;
    entangle_cluster(&mut state, graph, inputs)?;
    let mut bits = ClassicalBits::new(n);

    for &node in flow.order() {
        if graph.is_output(node) {
            continue;
        }
        apply_measurement_prelude(&mut state, &bits, node, pattern, options.corrections)?;
        state.measure_z(node, src, &mut bits)?;
    }
    for &node in flow.order() {
        if !graph.is_output(node) {
            continue;
        }
        if options.corrections {
            check_dependencies(&bits, node, pattern)?;
            for &j in pattern.sx(node) {
                state.apply_conditional(PauliGate::X, node, j, &bits)?;
            }
            if options.output_z_corrections {
                for &j in pattern.sz(node) {
                    state.apply_conditional(PauliGate::Z, node, j, &bits)?;
                }
            }
        }
        let k = graph.outputs().iter().position(|&o| o == node).unwrap();
        if options.basis(k) == Basis::X {
            state.h(node)?;
        }
        state.measure_z(node, src, &mut bits)?;
    }
    Ok(PatternRun {
        outputs: collect_outputs(graph, &bits)?,
        bits,
    })
}

fn run_frontier(
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    inputs: &[InputSpec],
    src: &mut dyn OutcomeSource,
    options: &RunOptions,
) -> Result<PatternRun> {
    let n = graph.node_count();
    let preps = standard_preps(graph, inputs)?;
    let mut engine = FrontierState::new(n);
    let mut edge_done = vec![false; graph.edges().len()];
    let mut bits = ClassicalBits::new(n);

    for &node in flow.order() {
        if graph.is_output(node) {
            continue;
        }
        ensure_ready(&mut engine, graph, &preps, &mut edge_done, node)?;
        if options.corrections {
            check_dependencies(&bits, node, pattern)?;
            for &j in pattern.sz(node) {
                if bits.get(j)? == 1 {
                    engine.z(node)?;
                }
            }
            for &j in pattern.sx(node) {
                if bits.get(j)? == 1 {
                    engine.x(node)?;
                }
            }
        }
        engine.rz(-pattern.angle(node), node)?;
        engine.h(node)?;
        let s = engine.measure(node, src)?;
        engine.drop_collapsed(node, s)?;
        bits.record(node, s)?;
    }
    for &node in flow.order() {
        if !graph.is_output(node) {
            continue;
        }
        ensure_ready(&mut engine, graph, &preps, &mut edge_done, node)?;
        if options.corrections {
            check_dependencies(&bits, node, pattern)?;
            for &j in pattern.sx(node) {
                if bits.get(j)? == 1 {
                    engine.x(node)?;
                }
            }
            if options.output_z_corrections {
                for &j in pattern.sz(node) {
                    if bits.get(j)? == 1 {
                        engine.z(node)?;
                    }
                }
            }
        }
        let k = graph.outputs().iter().position(|&o| o == node).unwrap();
        if options.basis(k) == Basis::X {
            engine.h(node)?;
        }
        let s = engine.measure(node, src)?;
        engine.drop_collapsed(node, s)?;
        bits.record(node, s)?;
    }
    Ok(PatternRun {
        outputs: collect_outputs(graph, &bits)?,
        bits,
    })
}

/// One leaf of the exact-mode branch tree.
///
/// The state still contains every qubit: measured nodes are collapsed to
/// their recorded outcomes, outputs carry the corrected (unmeasured) state.
#[derive(Debug, Clone)]
pub struct Branch {
    pub weight: f64,
    pub state: StateVector,
    pub bits: ClassicalBits,
}

/// Depth-first enumeration of all measurement branches of a pattern.
///
/// Output corrections (and basis rotations) from `options` are applied to
/// each leaf; outputs are left unmeasured so callers can take exact
/// probabilities or fidelities.
pub fn enumerate_branches(
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    inputs: &[InputSpec],
    options: &RunOptions,
) -> Result<Vec<Branch>> {
    let measured: Vec<usize> = flow
        .order()
        .iter()
        .copied()
        .filter(|&n| !graph.is_output(n))
        .collect();
    if measured.len() > MAX_EXACT_MEASURED {
        return Err(Error::Usage(format!(
            "exact mode supports at most {MAX_EXACT_MEASURED} measured qubits, this pattern has {}",
            measured.len()
        )));
    }
    let mut state = StateVector::new(graph.node_count())?;
    entangle_cluster(&mut state, graph, inputs)?;
    let bits = ClassicalBits::new(graph.node_count());
    let mut branches = Vec::new();
    descend(
        state,
        bits,
        0,
        1.0,
        graph,
        flow,
        pattern,
        &measured,
        options,
        &mut branches,
    )?;
    Ok(branches)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    mut state: StateVector,
    bits: ClassicalBits,
    depth: usize,
    weight: f64,
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    measured: &[usize],
    options: &RunOptions,
    branches: &mut Vec<Branch>,
) -> Result<()> {
    if depth == measured.len() {
        finish_outputs(&mut state, &bits, graph, flow, pattern, options)?;
        branches.push(Branch {
            weight,
            state,
            bits,
        });
        return Ok(());
    }
    let node = measured[depth];
    apply_measurement_prelude(&mut state, &bits, node, pattern, options.corrections)?;
    for outcome in [0u8, 1u8] {
        let mut st = state.clone();
        let mut bs = bits.clone();
        let w = st.project_z(node, outcome, &mut bs)?;
        if weight * w > MIN_BRANCH_WEIGHT {
            descend(
                st,
                bs,
                depth + 1,
                weight * w,
                graph,
                flow,
                pattern,
                measured,
                options,
                branches,
            )?;
        }
    }
    Ok(())
}

fn finish_outputs(
    state: &mut StateVector,
    bits: &ClassicalBits,
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    options: &RunOptions,
) -> Result<()> {
    for &node in flow.order() {
        if !graph.is_output(node) {
            continue;
        }
        if options.corrections {
            check_dependencies(bits, node, pattern)?;
            for &j in pattern.sx(node) {
                state.apply_conditional(PauliGate::X, node, j, bits)?;
            }
            if options.output_z_corrections {
                for &j in pattern.sz(node) {
                    state.apply_conditional(PauliGate::Z, node, j, bits)?;
                }
            }
        }
        let k = graph.outputs().iter().position(|&o| o == node).unwrap();
        if options.basis(k) == Basis::X {
            state.h(node)?;
        }
    }
    Ok(())
}

/// Exact joint distribution over the output qubits.
///
/// Entry `k` is the probability that `graph.outputs()[j]` reads bit `j` of
/// `k`, summed over all measurement branches.
pub fn exact_output_distribution(
    graph: &OpenGraph,
    flow: &Flow,
    pattern: &MeasurementPattern,
    inputs: &[InputSpec],
    options: &RunOptions,
) -> Result<Vec<f64>> {
    let branches = enumerate_branches(graph, flow, pattern, inputs, options)?;
    let mut dist = vec![0.0; 1 << graph.outputs().len()];
    for branch in &branches {
        let probs = branch.state.basis_probabilities(graph.outputs())?;
        for (k, p) in probs.iter().enumerate() {
            dist[k] += branch.weight * p;
        }
    }
    Ok(dist)
}
