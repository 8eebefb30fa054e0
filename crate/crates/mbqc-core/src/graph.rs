//! Open graph states and flow.
//!
//! An open graph `(G, I, O)` carries the cluster topology: every non-input
//! node is initialized `|+⟩` and every edge becomes a CZ. A flow `f` maps
//! each measured node to the neighbour that absorbs its X byproduct; its
//! three conditions make the pattern deterministic under corrections.

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::state::StateVector;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Cluster-state topology with designated inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenGraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl OpenGraph {
    pub fn new(
        node_count: usize,
        edges: &[(usize, usize)],
        inputs: &[usize],
        outputs: &[usize],
    ) -> Result<Self> {
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::Structure(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(Error::Structure(format!("self-loop on node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(Error::Structure(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            normalized.push(e);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        normalized.sort_unstable();
        for list in &mut adjacency {
            list.sort_unstable();
        }
        for (name, set) in [("input", inputs), ("output", outputs)] {
            for (n, &q) in set.iter().enumerate() {
                if q >= node_count {
                    return Err(Error::Structure(format!(
                        "{name} node {q} outside 0..{node_count}"
                    )));
                }
                if set[..n].contains(&q) {
                    return Err(Error::Structure(format!("{name} node {q} listed twice")));
                }
            }
        }
        Ok(OpenGraph {
            node_count,
            edges: normalized,
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Normalized `(low, high)` edge list, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn is_input(&self, node: usize) -> bool {
        self.inputs.contains(&node)
    }

    pub fn is_output(&self, node: usize) -> bool {
        self.outputs.contains(&node)
    }

    /// Position of `node` in the ordered input list.
    pub fn input_position(&self, node: usize) -> Option<usize> {
        self.inputs.iter().position(|&i| i == node)
    }

    /// Measured nodes (the output complement), ascending.
    pub fn measured_nodes(&self) -> Vec<usize> {
        (0..self.node_count)
            .filter(|&n| !self.is_output(n))
            .collect()
    }
}

/// Correction map `f : O^c → I^c` plus the total measurement order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    map: Vec<Option<usize>>,
    order: Vec<usize>,
}

impl Flow {
    /// Flow with the default ascending measurement order.
    pub fn new(node_count: usize, assignments: &[(usize, usize)]) -> Result<Self> {
        Flow::with_order(node_count, assignments, (0..node_count).collect())
    }

    pub fn with_order(
        node_count: usize,
        assignments: &[(usize, usize)],
        order: Vec<usize>,
    ) -> Result<Self> {
        let mut map = vec![None; node_count];
        for &(x, fx) in assignments {
            if x >= node_count || fx >= node_count {
                return Err(Error::Structure(format!(
                    "flow entry {x} -> {fx} outside 0..{node_count}"
                )));
            }
            if map[x].is_some() {
                return Err(Error::Structure(format!("flow defined twice on node {x}")));
            }
            map[x] = Some(fx);
        }
        if order.len() != node_count {
            return Err(Error::SizeMismatch {
                expected: node_count,
                got: order.len(),
            });
        }
        let mut seen = vec![false; node_count];
        for &n in &order {
            if n >= node_count || seen[n] {
                return Err(Error::Structure(format!(
                    "measurement order is not a permutation (node {n})"
                )));
            }
            seen[n] = true;
        }
        Ok(Flow { map, order })
    }

    pub fn successor(&self, node: usize) -> Option<usize> {
        self.map.get(node).copied().flatten()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// order-position lookup table.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &n) in self.order.iter().enumerate() {
            pos[n] = p;
        }
        pos
    }
}

/// Check the three flow conditions.
///
/// Structural defects (domain not equal to the output complement, target in
/// the inputs or out of range) are errors; condition violations return
/// `Ok(false)`.
pub fn validate_flow(graph: &OpenGraph, flow: &Flow) -> Result<bool> {
    let n = graph.node_count();
    if flow.order().len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: flow.order().len(),
        });
    }
    for node in 0..n {
        match (graph.is_output(node), flow.successor(node)) {
            (true, Some(_)) => {
                return Err(Error::Structure(format!(
                    "flow defined on output node {node}"
                )))
            }
            (false, None) => {
                return Err(Error::Structure(format!(
                    "flow undefined on measured node {node}"
                )))
            }
            (false, Some(fx)) => {
                if graph.is_input(fx) {
                    return Err(Error::Structure(format!(
                        "flow target {fx} of node {node} is an input"
                    )));
                }
            }
            (true, None) => {}
        }
    }

    let pos = flow.positions();
    for x in 0..n {
        let Some(fx) = flow.successor(x) else {
            continue;
        };
        // x ~ f(x)
        if !graph.neighbors(x).contains(&fx) {
            return Ok(false);
        }
        // x strictly before f(x)
        if pos[x] >= pos[fx] {
            return Ok(false);
        }
        // every other neighbour of f(x) lies in x's future
        for &y in graph.neighbors(fx) {
            if y != x && pos[x] >= pos[y] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Correction sets for every node, outputs included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionSets {
    pub sx: Vec<BTreeSet<usize>>,
    pub sz: Vec<BTreeSet<usize>>,
}

/// Derive the X/Z correction sets induced by a valid flow.
///
/// `S_X(i)` is the flow preimage of `i`; `S_Z(i)` collects every measured
/// `j ≠ i` whose flow target neighbours `i`.
pub fn derive_correction_sets(graph: &OpenGraph, flow: &Flow) -> Result<CorrectionSets> {
    if !validate_flow(graph, flow)? {
        return Err(Error::Structure(
            "flow conditions do not hold on this graph".into(),
        ));
    }
    let n = graph.node_count();
    let mut sx = vec![BTreeSet::new(); n];
    let mut sz = vec![BTreeSet::new(); n];
    for j in 0..n {
        let Some(fj) = flow.successor(j) else {
            continue;
        };
        sx[fj].insert(j);
        for &y in graph.neighbors(fj) {
            if y != j {
                sz[y].insert(j);
            }
        }
    }
    Ok(CorrectionSets { sx, sz })
}

/// How an input qubit enters the cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputSpec {
    Zero,
    One,
    Plus,
    Minus,
    /// `|+_θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2`.
    PlusTheta(Angle),
    /// Arbitrary normalized single-qubit state `a|0⟩ + b|1⟩`.
    Arbitrary(Complex64, Complex64),
}

impl InputSpec {
    /// Prepare this state on `qubit`, which must still be `|0⟩`.
    pub(crate) fn apply_from_zero(&self, state: &mut StateVector, qubit: usize) -> Result<()> {
        match *self {
            InputSpec::Zero => Ok(()),
            InputSpec::One => state.x(qubit),
            InputSpec::Plus => state.h(qubit),
            InputSpec::Minus => {
                state.x(qubit)?;
                state.h(qubit)
            }
            InputSpec::PlusTheta(theta) => {
                state.h(qubit)?;
                state.rz(theta, qubit)
            }
            InputSpec::Arbitrary(a, b) => {
                let norm = a.norm_sqr() + b.norm_sqr();
                if libm::fabs(norm - 1.0) > 1e-9 {
                    return Err(Error::Usage(format!(
                        "input state not normalized (|a|²+|b|² = {norm})"
                    )));
                }
                state.apply_one_qubit_unitary(qubit, &[[a, -b.conj()], [b, a.conj()]])
            }
        }
    }
}

/// Per-node preparation used by both execution engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePrep {
    pub base: InputSpec,
    pub rotation: Option<Angle>,
}

/// Standard cluster preparation: inputs as specified, everything else `|+⟩`.
pub(crate) fn standard_preps(graph: &OpenGraph, inputs: &[InputSpec]) -> Result<Vec<NodePrep>> {
    if inputs.len() != graph.inputs().len() {
        return Err(Error::SizeMismatch {
            expected: graph.inputs().len(),
            got: inputs.len(),
        });
    }
    Ok((0..graph.node_count())
        .map(|node| NodePrep {
            base: match graph.input_position(node) {
                Some(k) => inputs[k],
                None => InputSpec::Plus,
            },
            rotation: None,
        })
        .collect())
}

/// Build the cluster state in place: prepare every node, then CZ every edge.
pub fn entangle_cluster(
    state: &mut StateVector,
    graph: &OpenGraph,
    inputs: &[InputSpec],
) -> Result<()> {
    if state.num_qubits() != graph.node_count() {
        return Err(Error::SizeMismatch {
            expected: graph.node_count(),
            got: state.num_qubits(),
        });
    }
    let preps = standard_preps(graph, inputs)?;
    for (node, prep) in preps.iter().enumerate() {
        prep.base.apply_from_zero(state, node)?;
        if let Some(theta) = prep.rotation {
            state.rz(theta, node)?;
        }
    }
    for &(a, b) in graph.edges() {
        state.cz(a, b)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::AMPLITUDE_TOLERANCE as TOL;

    fn chain(len: usize) -> OpenGraph {
        let edges: Vec<(usize, usize)> = (0..len - 1).map(|i| (i, i + 1)).collect();
        OpenGraph::new(len, &edges, &[0], &[len - 1]).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(OpenGraph::new(2, &[(0, 2)], &[], &[]).is_err());
        assert!(OpenGraph::new(2, &[(1, 1)], &[], &[]).is_err());
        assert!(OpenGraph::new(3, &[(0, 1), (1, 0)], &[], &[]).is_err());
        assert!(OpenGraph::new(2, &[], &[0, 0], &[]).is_err());
        // Inputs and outputs may overlap (degenerate identity pattern).
        assert!(OpenGraph::new(1, &[], &[0], &[0]).is_ok());
    }

    #[test]
    fn minimal_teleportation_chain_has_flow() {
        let g = chain(2);
        let f = Flow::new(2, &[(0, 1)]).unwrap();
        assert!(validate_flow(&g, &f).unwrap());
    }

    #[test]
    fn flow_target_in_inputs_is_structural() {
        let g = chain(2);
        let f = Flow::new(2, &[(0, 0)]).unwrap();
        assert!(matches!(validate_flow(&g, &f), Err(Error::Structure(_))));
    }

    #[test]
    fn non_neighbor_flow_fails_conditions() {
        let g = chain(4);
        // f(i) = i+2 skips over the chain neighbours.
        let f = Flow::new(4, &[(0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(validate_flow(&g, &f), Err(_) | Ok(false)));
    }

    #[test]
    fn three_chain_correction_sets() {
        // Direct evaluation of the neighbourhood rule on the 0−1−2 chain
        // with f(i) = i+1: the output's X correction comes from node 1 and
        // its Z correction from node 0.
        let g = chain(3);
        let f = Flow::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sets = derive_correction_sets(&g, &f).unwrap();
        assert_eq!(sets.sx[1], BTreeSet::from([0]));
        assert_eq!(sets.sx[2], BTreeSet::from([1]));
        assert_eq!(sets.sz[1], BTreeSet::new());
        assert_eq!(sets.sz[2], BTreeSet::from([0]));
    }

    #[test]
    fn entangle_two_node_chain() {
        let g = chain(2);
        let mut s = StateVector::new(2).unwrap();
        entangle_cluster(&mut s, &g, &[InputSpec::Plus]).unwrap();
        // CZ|++⟩: all amplitudes 1/2, sign on |11⟩.
        let a = s.amplitudes();
        assert!((a[0].re - 0.5).abs() < TOL);
        assert!((a[1].re - 0.5).abs() < TOL);
        assert!((a[2].re - 0.5).abs() < TOL);
        assert!((a[3].re + 0.5).abs() < TOL);
    }

    #[test]
    fn entangle_isolated_node_is_identity() {
        let g = OpenGraph::new(1, &[], &[0], &[0]).unwrap();
        let mut s = StateVector::new(1).unwrap();
        entangle_cluster(&mut s, &g, &[InputSpec::Zero]).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < TOL);
    }

    #[test]
    fn entangle_size_mismatch() {
        let g = chain(3);
        let mut s = StateVector::new(2).unwrap();
        assert!(matches!(
            entangle_cluster(&mut s, &g, &[InputSpec::Plus]),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn minus_prep_matches_h_of_one() {
        let mut s = StateVector::new(1).unwrap();
        InputSpec::Minus.apply_from_zero(&mut s, 0).unwrap();
        assert!((s.amplitudes()[0].re - core::f64::consts::FRAC_1_SQRT_2).abs() < TOL);
        assert!((s.amplitudes()[1].re + core::f64::consts::FRAC_1_SQRT_2).abs() < TOL);
    }

    #[test]
    fn arbitrary_prep_requires_normalization() {
        let mut s = StateVector::new(1).unwrap();
        let bad = InputSpec::Arbitrary(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(matches!(
            bad.apply_from_zero(&mut s, 0),
            Err(Error::Usage(_))
        ));
    }
}
