//! Classical measurement record.

use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Per-qubit measurement outcomes, readable only after the qubit was
/// actually measured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalBits {
    measured: Vec<bool>,
    outcomes: Vec<bool>,
}

impl ClassicalBits {
    pub fn new(num_qubits: usize) -> Self {
        ClassicalBits {
            measured: vec![false; num_qubits],
            outcomes: vec![false; num_qubits],
        }
    }

    pub fn len(&self) -> usize {
        self.measured.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measured.is_empty()
    }

    pub fn is_measured(&self, qubit: usize) -> bool {
        self.measured.get(qubit).copied().unwrap_or(false)
    }

    /// The recorded outcome; errors if the qubit has not been measured.
    pub fn get(&self, qubit: usize) -> Result<u8> {
        if !self.is_measured(qubit) {
            return Err(Error::NotMeasured { qubit });
        }
        Ok(u8::from(self.outcomes[qubit]))
    }

    /// Record a first measurement. Errors on double-recording; the
    /// re-measurement override goes through [`ClassicalBits::record_again`].
    pub fn record(&mut self, qubit: usize, outcome: u8) -> Result<()> {
        if qubit >= self.len() {
            return Err(Error::TargetOutOfRange {
                target: qubit,
                num_qubits: self.len(),
            });
        }
        if self.measured[qubit] {
            return Err(Error::AlreadyMeasured { qubit });
        }
        self.measured[qubit] = true;
        self.outcomes[qubit] = outcome != 0;
        Ok(())
    }

    /// Overwrite the record of an already-measured qubit.
    pub fn record_again(&mut self, qubit: usize, outcome: u8) -> Result<()> {
        if !self.is_measured(qubit) {
            return Err(Error::NotMeasured { qubit });
        }
        self.outcomes[qubit] = outcome != 0;
        Ok(())
    }

    /// XOR of the outcomes at `indices`; errors if any is unmeasured.
    pub fn parity<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<u8> {
        let mut acc = 0u8;
        for i in indices {
            acc ^= self.get(i)?;
        }
        Ok(acc)
    }
}
