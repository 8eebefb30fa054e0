//! Outcome histograms over shot runs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Render output bits as a fixed-width string, last output first, so
/// `outputs[0]` is the rightmost character.
pub fn render_bits(bits: &[u8]) -> String {
    bits.iter()
        .rev()
        .map(|&b| if b != 0 { '1' } else { '0' })
        .collect()
}

/// Map from outcome bitstring to how often it occurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotHistogram {
    pub fn new(seed: u64) -> Self {
        ShotHistogram {
            counts: BTreeMap::new(),
            shots: 0,
            seed,
        }
    }

    pub fn record(&mut self, key: String) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.shots += 1;
    }

    /// Counts must always sum to the shot total.
    pub fn is_consistent(&self) -> bool {
        self.counts.values().sum::<u64>() == self.shots
    }

    pub fn frequency(&self, key: &str) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        *self.counts.get(key).unwrap_or(&0) as f64 / self.shots as f64
    }

    /// True iff every shot landed on `key`.
    pub fn is_point_mass_on(&self, key: &str) -> bool {
        self.shots > 0 && self.counts.get(key) == Some(&self.shots)
    }

    /// Entries by descending count, ties broken by bitstring.
    pub fn sorted_entries(&self) -> Vec<(&str, u64)> {
        let mut entries: Vec<(&str, u64)> =
            self.counts.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        entries
    }
}
