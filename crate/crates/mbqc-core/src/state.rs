//! Dense state-vector simulator.
//!
//! Amplitudes are indexed little-endian: qubit `i` is bit `i` of the basis
//! index, so `|q1 q0⟩ = |10⟩` lives at index 2. The gate set is the cluster
//! set {H, X, Z, RZ(θ), CZ}; measurement is projective in the Z basis with
//! in-place collapse and renormalization.

use crate::angle::{rz_phase, Angle};
use crate::bits::ClassicalBits;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt::Write as _;
use num_complex::Complex64;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Branches lighter than this are treated as impossible by the exact-mode
/// enumerator.
pub const MIN_BRANCH_WEIGHT: f64 = 1e-12;

/// Where a measurement outcome comes from.
///
/// The simulator asks the source for a bit given the Born probability of
/// reading 0. A [`RngStream`] samples; test schedules can replay a fixed
/// outcome sequence instead.
pub trait OutcomeSource {
    fn sample_bit(&mut self, prob_zero: f64) -> u8;
}

impl OutcomeSource for RngStream {
    fn sample_bit(&mut self, prob_zero: f64) -> u8 {
        u8::from(self.next_f64() >= prob_zero)
    }
}

/// A gate from the cluster set, for callers that dispatch dynamically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Z,
    Rz(Angle),
    Cz,
}

/// Pauli applied conditionally on a recorded classical bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliGate {
    X,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                requested: num_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Adopt explicit amplitudes; the caller is responsible for the norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || !(2..=(1 << MAX_QUBITS)).contains(&len) {
            return Err(Error::Usage(alloc::format!(
                "amplitude vector length {len} is not a power of two in range"
            )));
        }
        Ok(StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn check_target(&self, target: usize) -> Result<()> {
        if target >= self.num_qubits {
            return Err(Error::TargetOutOfRange {
                target,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_target(a)?;
        self.check_target(b)?;
        if a == b {
            return Err(Error::DuplicateTarget { target: a });
        }
        Ok(())
    }

    /// Dispatch entry for the cluster gate set.
    pub fn apply_gate(&mut self, gate: Gate, targets: &[usize]) -> Result<()> {
        match (gate, targets) {
            (Gate::H, &[q]) => self.h(q),
            (Gate::X, &[q]) => self.x(q),
            (Gate::Z, &[q]) => self.z(q),
            (Gate::Rz(theta), &[q]) => self.rz(theta, q),
            (Gate::Cz, &[a, b]) => self.cz(a, b),
            _ => Err(Error::Usage(alloc::format!(
                "gate {gate:?} takes {} target(s), got {}",
                if matches!(gate, Gate::Cz) { 2 } else { 1 },
                targets.len()
            ))),
        }
    }

    pub fn h(&mut self, qubit: usize) -> Result<()> {
        self.check_target(qubit)?;
        let step = 1 << qubit;
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
        Ok(())
    }

    pub fn x(&mut self, qubit: usize) -> Result<()> {
        self.check_target(qubit)?;
        let step = 1 << qubit;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                self.amps.swap(base + offset, base + offset + step);
            }
        }
        Ok(())
    }

    pub fn z(&mut self, qubit: usize) -> Result<()> {
        self.check_target(qubit)?;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> qubit) & 1 == 1 {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// RZ(θ) as `diag(1, e^{iθ})`; see `angle::rz_phase` for the phase
    /// convention.
    pub fn rz(&mut self, theta: Angle, qubit: usize) -> Result<()> {
        self.check_target(qubit)?;
        let phase = rz_phase(theta);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> qubit) & 1 == 1 {
                *amp *= phase;
            }
        }
        Ok(())
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_pair(a, b)?;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// Apply an arbitrary 2×2 unitary `[[u00, u01], [u10, u11]]`.
    pub fn apply_one_qubit_unitary(&mut self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<()> {
        self.check_target(qubit)?;
        let step = 1 << qubit;
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
        Ok(())
    }

    /// Apply `gate` to `target` iff the recorded outcome of `control` is 1.
    pub fn apply_conditional(
        &mut self,
        gate: PauliGate,
        target: usize,
        control: usize,
        bits: &ClassicalBits,
    ) -> Result<()> {
        if bits.get(control)? == 1 {
            match gate {
                PauliGate::X => self.x(target)?,
                PauliGate::Z => self.z(target)?,
            }
        } else {
            self.check_target(target)?;
        }
        Ok(())
    }

    /// Σ over basis states with bit `qubit` = 0 of |amplitude|².
    pub fn probability_of_zero(&self, qubit: usize) -> Result<f64> {
        self.check_target(qubit)?;
        let mut p0 = 0.0;
        for (i, amp) in self.amps.iter().enumerate() {
            if (i >> qubit) & 1 == 0 {
                p0 += amp.norm_sqr();
            }
        }
        Ok(p0)
    }

    /// Projective Z-basis measurement with collapse and renormalization.
    ///
    /// Errors if the qubit is already recorded as measured; the blind
    /// protocol's flip-by-remeasure trick goes through
    /// [`StateVector::remeasure_z`] instead.
    pub fn measure_z(
        &mut self,
        qubit: usize,
        src: &mut dyn OutcomeSource,
        bits: &mut ClassicalBits,
    ) -> Result<u8> {
        self.check_target(qubit)?;
        if bits.is_measured(qubit) {
            return Err(Error::AlreadyMeasured { qubit });
        }
        let outcome = self.sample_and_collapse(qubit, src);
        bits.record(qubit, outcome)?;
        Ok(outcome)
    }

    /// Re-measurement override: measure a qubit that already carries an
    /// outcome, overwriting the record.
    pub fn remeasure_z(
        &mut self,
        qubit: usize,
        src: &mut dyn OutcomeSource,
        bits: &mut ClassicalBits,
    ) -> Result<u8> {
        self.check_target(qubit)?;
        if !bits.is_measured(qubit) {
            return Err(Error::NotMeasured { qubit });
        }
        let outcome = self.sample_and_collapse(qubit, src);
        bits.record_again(qubit, outcome)?;
        Ok(outcome)
    }

    fn sample_and_collapse(&mut self, qubit: usize, src: &mut dyn OutcomeSource) -> u8 {
        let mut p0 = 0.0;
        for (i, amp) in self.amps.iter().enumerate() {
            if (i >> qubit) & 1 == 0 {
                p0 += amp.norm_sqr();
            }
        }
        let outcome = src.sample_bit(p0);
        self.collapse(qubit, outcome);
        outcome
    }

    /// Zero the discarded sector and rescale the kept one to unit norm.
    fn collapse(&mut self, qubit: usize, outcome: u8) {
        let keep = usize::from(outcome);
        let mut norm = 0.0;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if (i >> qubit) & 1 == keep {
                norm += amp.norm_sqr();
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        let scale = 1.0 / libm::sqrt(norm);
        for amp in &mut self.amps {
            *amp *= scale;
        }
    }

    /// Force an outcome and return that branch's pre-collapse weight.
    ///
    /// Used by the exact-mode branch enumerator. If the weight is below
    /// [`MIN_BRANCH_WEIGHT`] the state is left untouched and the caller must
    /// prune the branch; otherwise the state collapses and the outcome is
    /// recorded.
    pub fn project_z(
        &mut self,
        qubit: usize,
        outcome: u8,
        bits: &mut ClassicalBits,
    ) -> Result<f64> {
        self.check_target(qubit)?;
        let keep = usize::from(outcome);
        let mut weight = 0.0;
        for (i, amp) in self.amps.iter().enumerate() {
            if (i >> qubit) & 1 == keep {
                weight += amp.norm_sqr();
            }
        }
        if weight < MIN_BRANCH_WEIGHT {
            return Ok(weight);
        }
        self.collapse(qubit, outcome);
        bits.record(qubit, outcome)?;
        Ok(weight)
    }

    /// |⟨self|other⟩|²; insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let mut inner = Complex64::new(0.0, 0.0);
        for (a, b) in self.amps.iter().zip(other.amps.iter()) {
            inner += a.conj() * b;
        }
        Ok(inner.norm_sqr())
    }

    /// Joint distribution over the listed qubits, marginalizing the rest.
    ///
    /// The result has `2^qubits.len()` entries; entry `k` collects the basis
    /// states where `qubits[j]` reads bit `j` of `k`.
    pub fn basis_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for (n, &q) in qubits.iter().enumerate() {
            self.check_target(q)?;
            if qubits[..n].contains(&q) {
                return Err(Error::DuplicateTarget { target: q });
            }
        }
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut key = 0usize;
            for (j, &q) in qubits.iter().enumerate() {
                key |= ((i >> q) & 1) << j;
            }
            out[key] += amp.norm_sqr();
        }
        Ok(out)
    }

    /// Debug dump: one line per basis index, `index bitstring re im`.
    /// The bitstring is the index in binary, highest qubit first.
    pub fn amplitude_dump(&self) -> String {
        let mut out = String::new();
        for (i, amp) in self.amps.iter().enumerate() {
            let mut bitstring = String::with_capacity(self.num_qubits);
            for q in (0..self.num_qubits).rev() {
                bitstring.push(if (i >> q) & 1 == 1 { '1' } else { '0' });
            }
            let _ = writeln!(out, "{} {} {} {}", i, bitstring, amp.re, amp.im);
        }
        out
    }
}

/// Random normalized state, reproducible from the stream. Test support.
#[cfg(test)]
pub(crate) fn random_state(num_qubits: usize, rng: &mut RngStream) -> StateVector {
    let len = 1 << num_qubits;
    let mut amps: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}
