//! Sparse n-site pure states with Z/X projective measurement probabilities.
//!
//! Each of the n sites is a two-level system: `|0⟩` (empty) and `|1⟩`
//! (occupied). Basis states of the full system are indexed by machine-word
//! bitmasks, bit k set ⇔ site k occupied. Sign conventions:
//!
//! - Z basis: eigenvalue +1 on `|0⟩`, −1 on `|1⟩`.
//! - X basis: eigenvalue +1 on `|+⟩ = (|0⟩+|1⟩)/√2`, −1 on
//!   `|−⟩ = (|0⟩−|1⟩)/√2`.
//!
//! States with few nonzero amplitudes stay cheap: the single-excitation
//! superposition over n sites stores exactly n entries, and Z projections
//! only ever drop entries. Only X projections can grow the support.

use std::collections::HashMap;
use std::fmt;

pub use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported site count: basis indices are `u64` bitmasks.
pub const MAX_SITES: usize = 64;

/// Amplitudes with modulus below this are treated as structural zeros and
/// dropped from the sparse map. Far below every test tolerance, far above
/// double-precision residue from the ±1/2 projector coefficients.
pub const SPARSITY_THRESHOLD: f64 = 1e-15;

/// Measurement basis of a single site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub const BOTH: [Basis; 2] = [Basis::Z, Basis::X];
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => write!(f, "Z"),
            Basis::X => write!(f, "X"),
        }
    }
}

/// Dichotomic measurement outcome, +1 or −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub fn from_value(value: i64) -> Option<Outcome> {
        match value {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Plus => write!(f, "+1"),
            Outcome::Minus => write!(f, "-1"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = i64::deserialize(deserializer)?;
        Outcome::from_value(value)
            .ok_or_else(|| D::Error::custom(format!("outcome must be 1 or -1, got {value}")))
    }
}

/// One requested single-site measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub site: usize,
    pub basis: Basis,
    pub outcome: Outcome,
}

impl MeasurementRecord {
    pub fn new(site: usize, basis: Basis, outcome: Outcome) -> Self {
        MeasurementRecord {
            site,
            basis,
            outcome,
        }
    }
}

impl fmt::Display for MeasurementRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}={}", self.basis, self.site, self.outcome)
    }
}

/// A set of simultaneous single-site measurement results, one per site at
/// most. All measurements in a spec are space-like separated; there is no
/// ordering semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<MeasurementRecord>", into = "Vec<MeasurementRecord>")]
pub struct MeasurementSpec {
    records: Vec<MeasurementRecord>,
}

impl MeasurementSpec {
    /// Builds a spec from records, rejecting repeated sites.
    pub fn new(records: Vec<MeasurementRecord>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for record in &records {
            if !seen.insert(record.site) {
                return Err(Error::DuplicateSite { site: record.site });
            }
        }
        Ok(MeasurementSpec { records })
    }

    /// The trivial (empty) measurement.
    pub fn empty() -> Self {
        MeasurementSpec {
            records: Vec::new(),
        }
    }

    pub fn single(site: usize, basis: Basis, outcome: Outcome) -> Self {
        MeasurementSpec {
            records: vec![MeasurementRecord::new(site, basis, outcome)],
        }
    }

    pub fn from_triples(
        triples: impl IntoIterator<Item = (usize, Basis, Outcome)>,
    ) -> Result<Self> {
        MeasurementSpec::new(
            triples
                .into_iter()
                .map(|(site, basis, outcome)| MeasurementRecord::new(site, basis, outcome))
                .collect(),
        )
    }

    /// X measurement with the same outcome requested at every one of `n` sites.
    pub fn uniform_x(n: usize, outcome: Outcome) -> Self {
        MeasurementSpec {
            records: (0..n)
                .map(|site| MeasurementRecord::new(site, Basis::X, outcome))
                .collect(),
        }
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checks every site index against a system size.
    pub fn validate_for(&self, n_sites: usize) -> Result<()> {
        for record in &self.records {
            if record.site >= n_sites {
                return Err(Error::SiteOutOfRange {
                    site: record.site,
                    n_sites,
                });
            }
        }
        Ok(())
    }

    /// Merges two specs over disjoint site sets.
    pub fn union(&self, other: &MeasurementSpec) -> Result<MeasurementSpec> {
        let mine: std::collections::HashSet<usize> = self.records.iter().map(|r| r.site).collect();
        for record in &other.records {
            if mine.contains(&record.site) {
                return Err(Error::OverlappingSpecs { site: record.site });
            }
        }
        let mut records = self.records.clone();
        records.extend(other.records.iter().copied());
        MeasurementSpec::new(records)
    }
}

impl TryFrom<Vec<MeasurementRecord>> for MeasurementSpec {
    type Error = Error;

    fn try_from(records: Vec<MeasurementRecord>) -> Result<Self> {
        MeasurementSpec::new(records)
    }
}

impl From<MeasurementSpec> for Vec<MeasurementRecord> {
    fn from(spec: MeasurementSpec) -> Self {
        spec.records
    }
}

impl fmt::Display for MeasurementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.records.is_empty() {
            return write!(f, "(trivial)");
        }
        let parts: Vec<String> = self.records.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Sparse pure state of an n-site system: a map from occupied-site bitmask
/// to complex amplitude. Entries with modulus below [`SPARSITY_THRESHOLD`]
/// are never stored.
///
/// Physical states are normalized; projection results are deliberately left
/// unnormalized, and only [`SparseState::probability`] exposes normalized
/// semantics.
#[derive(Debug, Clone)]
pub struct SparseState {
    n_sites: usize,
    amplitudes: HashMap<u64, Complex64>,
}

fn index_in_range(index: u64, n_sites: usize) -> bool {
    n_sites >= MAX_SITES || index >> n_sites == 0
}

fn check_site_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroSites);
    }
    if n > MAX_SITES {
        return Err(Error::TooManySites { n, max: MAX_SITES });
    }
    Ok(())
}

impl SparseState {
    /// Builds a state from `(basis index, amplitude)` entries. Amplitudes on
    /// repeated indices are summed; sub-threshold results are dropped.
    pub fn from_amplitudes(
        n_sites: usize,
        entries: impl IntoIterator<Item = (u64, Complex64)>,
    ) -> Result<Self> {
        check_site_count(n_sites)?;
        let mut amplitudes: HashMap<u64, Complex64> = HashMap::new();
        for (index, amplitude) in entries {
            if !index_in_range(index, n_sites) {
                return Err(Error::IndexOutOfRange { index, n_sites });
            }
            *amplitudes.entry(index).or_insert(Complex64::new(0.0, 0.0)) += amplitude;
        }
        amplitudes.retain(|_, a| a.norm() >= SPARSITY_THRESHOLD);
        Ok(SparseState {
            n_sites,
            amplitudes,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitude at a basis index, zero if absent.
    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amplitudes
            .get(&index)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&i, &a)| (i, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        // f64 sums fold from −0.0, so an empty support would yield IEEE −0.0;
        // adding +0.0 keeps every other value bit-identical and makes asserted
        // zeros render as "0", not "-0".
        self.amplitudes.values().map(|a| a.norm_sqr()).sum::<f64>() + 0.0
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    /// Applies the rank-1 single-site projector for `basis`/`outcome`.
    ///
    /// The result is generally unnormalized; its squared norm is the
    /// probability of the outcome (for a normalized input). A Z projector
    /// keeps or drops entries by bit value; an X projector mixes each basis
    /// pair with coefficients ±1/2.
    pub fn project(&self, site: usize, basis: Basis, outcome: Outcome) -> Result<SparseState> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        let mask = 1u64 << site;
        let amplitudes = match basis {
            Basis::Z => {
                // +1 keeps the empty (bit clear) component, −1 the occupied one.
                let keep_bit = match outcome {
                    Outcome::Plus => 0,
                    Outcome::Minus => mask,
                };
                self.amplitudes
                    .iter()
                    .filter(|(&index, _)| index & mask == keep_bit)
                    .map(|(&index, &a)| (index, a))
                    .collect()
            }
            Basis::X => {
                // P_± sends the (|0⟩,|1⟩) pair at `site` to
                //   a0' = (a0 ± a1)/2,  a1' = ±a0'.
                let sign = outcome.sign();
                let mut out: HashMap<u64, Complex64> = HashMap::new();
                let mut handled = std::collections::HashSet::new();
                for &index in self.amplitudes.keys() {
                    let low = index & !mask;
                    if !handled.insert(low) {
                        continue;
                    }
                    let a0 = self.amplitude(low);
                    let a1 = self.amplitude(low | mask);
                    let new0 = (a0 + sign * a1) * 0.5;
                    if new0.norm() >= SPARSITY_THRESHOLD {
                        out.insert(low, new0);
                        out.insert(low | mask, sign * new0);
                    }
                }
                out
            }
        };
        Ok(SparseState {
            n_sites: self.n_sites,
            amplitudes,
        })
    }

    /// Applies every projector in a spec. Projectors act on distinct sites
    /// and commute, so the result does not depend on record order; Z records
    /// are applied first because they only shrink the support.
    pub fn project_spec(&self, spec: &MeasurementSpec) -> Result<SparseState> {
        spec.validate_for(self.n_sites)?;
        let mut state = self.clone();
        for basis in [Basis::Z, Basis::X] {
            for record in spec.records().iter().filter(|r| r.basis == basis) {
                if state.amplitudes.is_empty() {
                    return Ok(state);
                }
                state = state.project(record.site, record.basis, record.outcome)?;
            }
        }
        Ok(state)
    }

    /// Probability of observing every outcome in the spec simultaneously.
    /// The empty spec has probability 1.
    pub fn probability(&self, spec: &MeasurementSpec) -> Result<f64> {
        let projected = self.project_spec(spec)?;
        Ok(projected.norm_sqr().clamp(0.0, 1.0))
    }

    /// Probability of `target` conditioned on `given`, for specs over
    /// disjoint site sets. Conditioning on a zero-probability event is an
    /// error, not a silent 0/0.
    pub fn conditional_probability(
        &self,
        given: &MeasurementSpec,
        target: &MeasurementSpec,
    ) -> Result<f64> {
        let joint_spec = given.union(target)?;
        let p_given = self.probability(given)?;
        if p_given == 0.0 {
            return Err(Error::ZeroProbabilityCondition);
        }
        let p_joint = self.probability(&joint_spec)?;
        Ok((p_joint / p_given).clamp(0.0, 1.0))
    }

    /// Probability of one full X-basis outcome string, one outcome per site,
    /// computed by term-wise overlap in O(support × n) without growing any
    /// intermediate state. `outcomes[k]` is the outcome at site k.
    ///
    /// Each stored basis term contributes amplitude × 2^(−n/2) × (−1)^m,
    /// where m counts occupied sites assigned outcome −1.
    pub fn x_string_probability(&self, outcomes: &[Outcome]) -> Result<f64> {
        if outcomes.len() != self.n_sites {
            return Err(Error::OutcomeStringLength {
                got: outcomes.len(),
                expected: self.n_sites,
            });
        }
        let mut minus_mask = 0u64;
        for (site, outcome) in outcomes.iter().enumerate() {
            if *outcome == Outcome::Minus {
                minus_mask |= 1u64 << site;
            }
        }
        let mut overlap = Complex64::new(0.0, 0.0);
        for (&index, &amplitude) in &self.amplitudes {
            let parity = (index & minus_mask).count_ones() & 1;
            overlap += if parity == 0 { amplitude } else { -amplitude };
        }
        let scale = 0.5f64.powi(self.n_sites as i32);
        Ok((overlap.norm_sqr() * scale).clamp(0.0, 1.0))
    }
}

/// Builds the single-excitation equal superposition over `n` sites: one
/// photon spread evenly, amplitude 1/√n on each single-bit index.
///
/// Supports 1 ≤ n ≤ [`MAX_SITES`].
pub fn build_w_state(n: usize) -> Result<SparseState> {
    check_site_count(n)?;
    let amplitude = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    SparseState::from_amplitudes(n, (0..n).map(|k| (1u64 << k, amplitude)))
}
