//! The universal gate-gadget library.
//!
//! Each gadget is a small open graph whose measurement pattern teleports the
//! input through while applying one gate. Measuring a qubit at angle α
//! applies J(−α) = H·RZ(−α) to the teleported state, so a 2-chain measured
//! at 0 gives H, a 3-chain at [−θ, 0] composes to RZ(θ), and a 2×3 grid with
//! a vertical edge on the output column gives CZ.

use crate::angle::Angle;
use crate::error::Result;
use crate::graph::{Flow, InputSpec, OpenGraph};
use crate::pattern::{Basis, MeasurementPattern};
use crate::state::StateVector;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GadgetKind {
    H,
    X,
    Z,
    T,
    Rz(Angle),
    Cz,
}

impl GadgetKind {
    /// Number of logical inputs (and outputs).
    pub fn arity(&self) -> usize {
        match self {
            GadgetKind::Cz => 2,
            _ => 1,
        }
    }

    /// Apply the gate directly on a dense state; the reference side of the
    /// gadget-equivalence check.
    pub fn apply_dense(&self, state: &mut StateVector, targets: &[usize]) -> Result<()> {
        match (self, targets) {
            (GadgetKind::H, &[q]) => state.h(q),
            (GadgetKind::X, &[q]) => state.x(q),
            (GadgetKind::Z, &[q]) => state.z(q),
            (GadgetKind::T, &[q]) => state.rz(Angle::octant(1), q),
            (GadgetKind::Rz(theta), &[q]) => state.rz(*theta, q),
            (GadgetKind::Cz, &[a, b]) => state.cz(a, b),
            _ => Err(crate::error::Error::Usage(alloc::format!(
                "gadget {self:?} expects {} target(s)",
                self.arity()
            ))),
        }
    }
}

/// A gadget's graph fragment, flow, and planned angles.
#[derive(Debug, Clone)]
pub struct GateGadget {
    pub kind: GadgetKind,
    pub graph: OpenGraph,
    pub flow: Flow,
    pub pattern: MeasurementPattern,
}

/// Build the measurement pattern realizing `kind`.
pub fn gadget(kind: GadgetKind) -> GateGadget {
    let (graph, flow, angles) = match kind {
        GadgetKind::H => (
            OpenGraph::new(2, &[(0, 1)], &[0], &[1]),
            Flow::new(2, &[(0, 1)]),
            vec![Angle::ZERO; 2],
        ),
        // 3-chain measured at [0, π]: J(−π)·J(0) = X up to a global phase.
        GadgetKind::X => (
            OpenGraph::new(3, &[(0, 1), (1, 2)], &[0], &[2]),
            Flow::new(3, &[(0, 1), (1, 2)]),
            vec![Angle::ZERO, Angle::PI, Angle::ZERO],
        ),
        // RZ(θ) family: 3-chain measured at [−θ, 0]. Z is θ = π, T is θ = π/4.
        GadgetKind::Z => rotation_chain(Angle::PI),
        GadgetKind::T => rotation_chain(Angle::octant(1)),
        GadgetKind::Rz(theta) => rotation_chain(theta),
        // 2×3 grid, row-major columns (0,1), (2,3), (4,5); inputs in the
        // first column, outputs in the last, vertical edge on the outputs.
        GadgetKind::Cz => (
            OpenGraph::new(
                6,
                &[(0, 2), (2, 4), (1, 3), (3, 5), (4, 5)],
                &[0, 1],
                &[4, 5],
            ),
            Flow::new(6, &[(0, 2), (1, 3), (2, 4), (3, 5)]),
            vec![Angle::ZERO; 6],
        ),
    };
    let graph = graph.expect("gadget graph is well-formed");
    let flow = flow.expect("gadget flow is well-formed");
    let pattern = MeasurementPattern::from_flow(&graph, &flow, angles)
        .expect("gadget flow satisfies the flow conditions");
    GateGadget {
        kind,
        graph,
        flow,
        pattern,
    }
}

type GadgetParts = (Result<OpenGraph>, Result<Flow>, Vec<Angle>);

fn rotation_chain(theta: Angle) -> GadgetParts {
    (
        OpenGraph::new(3, &[(0, 1), (1, 2)], &[0], &[2]),
        Flow::new(3, &[(0, 1), (1, 2)]),
        vec![-theta, Angle::ZERO, Angle::ZERO],
    )
}

/// Expected readout of a gadget's verification scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioExpectation {
    /// Single output: exact P(0) plus the allowed sampling deviation.
    ProbZero { value: f64, sample_tol: f64 },
    /// Every shot must land on this bitstring.
    PointMass(String),
}

/// The reference single-gate test: input preparation, readout bases, and
/// the expected outcome.
#[derive(Debug, Clone)]
pub struct GadgetScenario {
    pub kind: GadgetKind,
    pub inputs: Vec<InputSpec>,
    pub output_bases: Vec<Basis>,
    pub expected: ScenarioExpectation,
}

impl GadgetKind {
    pub fn paper_scenario(&self) -> GadgetScenario {
        let (inputs, output_bases, expected) = match *self {
            // H on |0⟩: balanced Z readout.
            GadgetKind::H => (
                vec![InputSpec::Zero],
                vec![Basis::Z],
                ScenarioExpectation::ProbZero {
                    value: 0.5,
                    sample_tol: 0.05,
                },
            ),
            // X on |0⟩ → |1⟩, deterministic.
            GadgetKind::X => (
                vec![InputSpec::Zero],
                vec![Basis::Z],
                ScenarioExpectation::PointMass("1".into()),
            ),
            // Z on |+⟩ → |−⟩, reads 1 in the X basis.
            GadgetKind::Z => (
                vec![InputSpec::Plus],
                vec![Basis::X],
                ScenarioExpectation::PointMass("1".into()),
            ),
            // T on |+⟩ → |+_{π/4}⟩: X-basis P(0) = cos²(π/8) ≈ 0.8536.
            GadgetKind::T => (
                vec![InputSpec::Plus],
                vec![Basis::X],
                ScenarioExpectation::ProbZero {
                    value: plus_theta_prob_zero(Angle::octant(1)),
                    sample_tol: 0.04,
                },
            ),
            GadgetKind::Rz(theta) => (
                vec![InputSpec::Plus],
                vec![Basis::X],
                ScenarioExpectation::ProbZero {
                    value: plus_theta_prob_zero(theta),
                    sample_tol: 0.05,
                },
            ),
            // CZ on |1⟩⊗|+⟩ → |1⟩⊗|−⟩: both read 1 (Z basis on the first
            // output, X basis on the second).
            GadgetKind::Cz => (
                vec![InputSpec::One, InputSpec::Plus],
                vec![Basis::Z, Basis::X],
                ScenarioExpectation::PointMass("11".into()),
            ),
        };
        GadgetScenario {
            kind: *self,
            inputs,
            output_bases,
            expected,
        }
    }
}

/// X-basis P(0) of `|+_θ⟩`, i.e. cos²(θ/2).
fn plus_theta_prob_zero(theta: Angle) -> f64 {
    let c = libm::cos(theta.to_radians() / 2.0);
    c * c
}
