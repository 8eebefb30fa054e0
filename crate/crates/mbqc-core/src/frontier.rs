//! Sliding-window execution engine for measurement patterns.
//!
//! A pattern touches each qubit only between its first entangling edge and
//! its measurement, so the full register never needs to exist at once. This
//! engine activates qubits on demand and discards them right after they
//! collapse; on the two-row Grover grid the live window never exceeds three
//! qubits, which makes per-shot cost independent of pattern length.
//!
//! Node indices are stable: callers keep addressing graph nodes while the
//! engine maintains the node-to-axis mapping internally.

use crate::angle::{rz_phase, Angle};
use crate::error::{Error, Result};
use crate::graph::{NodePrep, OpenGraph};
use crate::state::{OutcomeSource, MAX_QUBITS};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct FrontierState {
    amps: Vec<Complex64>,
    axis_of_node: Vec<Option<usize>>,
    node_of_axis: Vec<usize>,
}

impl FrontierState {
    pub fn new(node_count: usize) -> Self {
        FrontierState {
            amps: vec![Complex64::new(1.0, 0.0)],
            axis_of_node: vec![None; node_count],
            node_of_axis: Vec::new(),
        }
    }

    pub fn active_qubits(&self) -> usize {
        self.node_of_axis.len()
    }

    pub fn is_active(&self, node: usize) -> bool {
        self.axis_of_node.get(node).copied().flatten().is_some()
    }

    fn axis(&self, node: usize) -> Result<usize> {
        self.axis_of_node
            .get(node)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Usage(alloc::format!("node {node} is not active")))
    }

    /// Bring `node` into the register, prepared from `|0⟩` per `prep`.
    pub fn activate(&mut self, node: usize, prep: &NodePrep) -> Result<()> {
        if node >= self.axis_of_node.len() {
            return Err(Error::TargetOutOfRange {
                target: node,
                num_qubits: self.axis_of_node.len(),
            });
        }
        if self.is_active(node) {
            return Err(Error::Usage(alloc::format!("node {node} already active")));
        }
        if self.active_qubits() == MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                requested: self.active_qubits() + 1,
            });
        }
        // Append |0⟩ as the new top axis.
        let axis = self.node_of_axis.len();
        let len = self.amps.len();
        self.amps.resize(2 * len, Complex64::new(0.0, 0.0));
        self.axis_of_node[node] = Some(axis);
        self.node_of_axis.push(node);

        use crate::graph::InputSpec;
        match prep.base {
            InputSpec::Zero => {}
            InputSpec::One => self.x_axis(axis),
            InputSpec::Plus => self.h_axis(axis),
            InputSpec::Minus => {
                self.x_axis(axis);
                self.h_axis(axis);
            }
            InputSpec::PlusTheta(theta) => {
                self.h_axis(axis);
                self.rz_axis(theta, axis);
            }
            InputSpec::Arbitrary(a, b) => {
                let norm = a.norm_sqr() + b.norm_sqr();
                if libm::fabs(norm - 1.0) > 1e-9 {
                    return Err(Error::Usage(alloc::format!(
                        "input state not normalized (|a|²+|b|² = {norm})"
                    )));
                }
                self.unitary_axis(axis, &[[a, -b.conj()], [b, a.conj()]]);
            }
        }
        if let Some(theta) = prep.rotation {
            self.rz_axis(theta, axis);
        }
        Ok(())
    }

    pub fn h(&mut self, node: usize) -> Result<()> {
        let axis = self.axis(node)?;
        self.h_axis(axis);
        Ok(())
    }

    pub fn x(&mut self, node: usize) -> Result<()> {
        let axis = self.axis(node)?;
        self.x_axis(axis);
        Ok(())
    }

    pub fn z(&mut self, node: usize) -> Result<()> {
        let axis = self.axis(node)?;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> axis) & 1 == 1 {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn rz(&mut self, theta: Angle, node: usize) -> Result<()> {
        let axis = self.axis(node)?;
        self.rz_axis(theta, axis);
        Ok(())
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        let (pa, pb) = (self.axis(a)?, self.axis(b)?);
        if pa == pb {
            return Err(Error::DuplicateTarget { target: a });
        }
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> pa) & 1 == 1 && (i >> pb) & 1 == 1 {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    fn h_axis(&mut self, axis: usize) {
        let step = 1 << axis;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                let i = base + offset;
                let j = i + step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = FRAC_1_SQRT_2 * (a + b);
                self.amps[j] = FRAC_1_SQRT_2 * (a - b);
            }
        }
    }

    fn x_axis(&mut self, axis: usize) {
        let step = 1 << axis;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                self.amps.swap(base + offset, base + offset + step);
            }
        }
    }

    fn rz_axis(&mut self, theta: Angle, axis: usize) {
        let phase = rz_phase(theta);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> axis) & 1 == 1 {
                *amp *= phase;
            }
        }
    }

    fn unitary_axis(&mut self, axis: usize, u: &[[Complex64; 2]; 2]) {
        let step = 1 << axis;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                let i = base + offset;
                let j = i + step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = u[0][0] * a + u[0][1] * b;
                self.amps[j] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    pub fn probability_of_zero(&self, node: usize) -> Result<f64> {
        let axis = self.axis(node)?;
        let mut p0 = 0.0;
        for (i, amp) in self.amps.iter().enumerate() {
            if (i >> axis) & 1 == 0 {
                p0 += amp.norm_sqr();
            }
        }
        Ok(p0)
    }

    /// Measure in the Z basis, collapse, renormalize. The qubit stays in the
    /// register until [`FrontierState::drop_collapsed`].
    pub fn measure(&mut self, node: usize, src: &mut dyn OutcomeSource) -> Result<u8> {
        let axis = self.axis(node)?;
        let mut p0 = 0.0;
        for (i, amp) in self.amps.iter().enumerate() {
            if (i >> axis) & 1 == 0 {
                p0 += amp.norm_sqr();
            }
        }
        let outcome = src.sample_bit(p0);
        let keep = usize::from(outcome);
        let mut norm = 0.0;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> axis) & 1 == keep {
                norm += amp.norm_sqr();
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        let scale = 1.0 / libm::sqrt(norm);
        for amp in &mut self.amps {
            *amp *= scale;
        }
        Ok(outcome)
    }

    /// Remove a collapsed qubit from the register, keeping the `outcome`
    /// sector. Axes above the removed one shift down.
    pub fn drop_collapsed(&mut self, node: usize, outcome: u8) -> Result<()> {
        let axis = self.axis(node)?;
        let keep = usize::from(outcome);
        let half = self.amps.len() / 2;
        let low_mask = (1 << axis) - 1;
        let mut packed = Vec::with_capacity(half);
        for k in 0..half {
            let src = ((k >> axis) << (axis + 1)) | (keep << axis) | (k & low_mask);
            packed.push(self.amps[src]);
        }
        self.amps = packed;
        self.axis_of_node[node] = None;
        self.node_of_axis.remove(axis);
        for (new_axis, &n) in self.node_of_axis.iter().enumerate().skip(axis) {
            self.axis_of_node[n] = Some(new_axis);
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }
}

/// Make `node` measurable: activate it and every not-yet-entangled
/// neighbour, applying the pending CZ edges incident to it.
///
/// `edge_done` tracks applied edges, indexed like `graph.edges()`.
pub fn ensure_ready(
    engine: &mut FrontierState,
    graph: &OpenGraph,
    preps: &[NodePrep],
    edge_done: &mut [bool],
    node: usize,
) -> Result<()> {
    if !engine.is_active(node) {
        engine.activate(node, &preps[node])?;
    }
    for (idx, &(a, b)) in graph.edges().iter().enumerate() {
        if edge_done[idx] || (a != node && b != node) {
            continue;
        }
        let other = if a == node { b } else { a };
        if !engine.is_active(other) {
            engine.activate(other, &preps[other])?;
        }
        engine.cz(a, b)?;
        edge_done[idx] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::ClassicalBits;
    use crate::graph::{entangle_cluster, standard_preps, InputSpec, OpenGraph};
    use crate::rng::RngStream;
    use crate::state::StateVector;
    use crate::AMPLITUDE_TOLERANCE as TOL;

    const PLUS: NodePrep = NodePrep {
        base: InputSpec::Plus,
        rotation: None,
    };

    #[test]
    fn activation_grows_and_drop_shrinks() {
        let mut eng = FrontierState::new(3);
        eng.activate(0, &PLUS).unwrap();
        eng.activate(2, &PLUS).unwrap();
        assert_eq!(eng.active_qubits(), 2);
        eng.cz(0, 2).unwrap();
        let mut rng = RngStream::new(1);
        let s = eng.measure(0, &mut rng).unwrap();
        eng.drop_collapsed(0, s).unwrap();
        assert_eq!(eng.active_qubits(), 1);
        assert!(!eng.is_active(0));
        assert!(eng.is_active(2));
        assert!((eng.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn gates_on_inactive_nodes_fail() {
        let mut eng = FrontierState::new(2);
        assert!(eng.h(0).is_err());
        eng.activate(0, &PLUS).unwrap();
        assert!(eng.cz(0, 1).is_err());
    }

    /// The same seeded measurement schedule on a small cluster must agree
    /// with the dense simulator outcome for outcome.
    #[test]
    fn matches_dense_engine_on_chain() {
        let graph = OpenGraph::new(4, &[(0, 1), (1, 2), (2, 3)], &[0], &[3]).unwrap();
        let inputs = [InputSpec::PlusTheta(crate::angle::Angle::octant(3))];
        let preps = standard_preps(&graph, &inputs).unwrap();

        for seed in [3u64, 17, 92] {
            // Dense run: everything up front.
            let mut dense = StateVector::new(4).unwrap();
            entangle_cluster(&mut dense, &graph, &inputs).unwrap();
            let mut dense_rng = RngStream::new(seed);
            let mut bits = ClassicalBits::new(4);
            let dense_outcomes: Vec<u8> = (0..4)
                .map(|q| {
                    dense.h(q).unwrap();
                    dense.measure_z(q, &mut dense_rng, &mut bits).unwrap()
                })
                .collect();

            // Frontier run: activate lazily, measure, drop.
            let mut eng = FrontierState::new(4);
            let mut edge_done = vec![false; graph.edges().len()];
            let mut frontier_rng = RngStream::new(seed);
            let frontier_outcomes: Vec<u8> = (0..4)
                .map(|q| {
                    ensure_ready(&mut eng, &graph, &preps, &mut edge_done, q).unwrap();
                    eng.h(q).unwrap();
                    let s = eng.measure(q, &mut frontier_rng).unwrap();
                    eng.drop_collapsed(q, s).unwrap();
                    s
                })
                .collect();

            assert_eq!(dense_outcomes, frontier_outcomes, "seed {seed}");
        }
    }
}
