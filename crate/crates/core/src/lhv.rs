//! Exhaustive census of deterministic local models.
//!
//! A deterministic local model assigns every site a predetermined ±1 value
//! for Z and for X before any measurement; joint outcome probabilities
//! factorize into per-site indicators, so each model either matches a
//! measurement spec exactly (probability 1) or not (probability 0). The
//! model space for n sites is {±1}^(2n): 4^n assignments, each packed into
//! a 2n-bit integer (x word high, z word low; bit k set ⇔ value −1 at
//! site k). Enumeration walks that integer range, so output order is
//! canonical and runs are reproducible; the walk is partitioned across
//! threads and merged back in index order.
//!
//! The point of the census: every assignment that survives the
//! zero-probability constraint families carries the same X value on all
//! sites, so any mixture of survivors predicts the all-X-equal event with
//! probability 1.

use std::fmt;

use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constraints::{constraint_set, ZeroProbConstraint};
use crate::error::{Error, Result};
use crate::statevector::{Basis, MeasurementSpec, Outcome};

/// Default enumeration cap: 4^12 ≈ 16.8M assignments, a seconds-scale run.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Hard bound on the site count for enumeration and encoding: the 2n-bit
/// encoding and the model count 4^n must both fit in a `u64`. Runs anywhere
/// near this bound are impractical (4^n growth); the knob that matters is
/// the cap.
pub const MAX_ENUMERATION_SITES: usize = 31;

/// Above this many survivors a report stores summary counts only.
pub const SURVIVOR_LIST_LIMIT: usize = 100_000;

/// Tolerance on mixture weight sums.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// One deterministic local model: predetermined ±1 values for Z and X at
/// every site. Bit k of a word set ⇔ value −1 at site k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LhvAssignment {
    n_sites: usize,
    z_values: u64,
    x_values: u64,
}

fn word_mask(n_sites: usize) -> u64 {
    (1u64 << n_sites) - 1
}

fn check_enumeration_sites(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroSites);
    }
    if n > MAX_ENUMERATION_SITES {
        return Err(Error::TooManySites {
            n,
            max: MAX_ENUMERATION_SITES,
        });
    }
    Ok(())
}

impl LhvAssignment {
    pub fn new(n_sites: usize, z_values: u64, x_values: u64) -> Result<Self> {
        check_enumeration_sites(n_sites)?;
        for word in [z_values, x_values] {
            if word & !word_mask(n_sites) != 0 {
                return Err(Error::SignWordOutOfRange { word, n_sites });
            }
        }
        Ok(LhvAssignment {
            n_sites,
            z_values,
            x_values,
        })
    }

    /// Builds from explicit per-site outcome lists (`z[k]`, `x[k]` at site k).
    pub fn from_outcomes(z: &[Outcome], x: &[Outcome]) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::OutcomeStringLength {
                got: x.len(),
                expected: z.len(),
            });
        }
        let pack = |outcomes: &[Outcome]| {
            outcomes
                .iter()
                .enumerate()
                .filter(|(_, o)| **o == Outcome::Minus)
                .fold(0u64, |word, (k, _)| word | 1 << k)
        };
        LhvAssignment::new(z.len(), pack(z), pack(x))
    }

    /// Canonical 2n-bit integer: x word high, z word low.
    pub fn encoding(&self) -> u64 {
        (self.x_values << self.n_sites) | self.z_values
    }

    /// Inverse of [`LhvAssignment::encoding`].
    pub fn decode(n_sites: usize, encoding: u64) -> Result<Self> {
        check_enumeration_sites(n_sites)?;
        if n_sites < 32 && encoding >> (2 * n_sites) != 0 {
            return Err(Error::EncodingOutOfRange { encoding, n_sites });
        }
        let mask = word_mask(n_sites);
        Ok(LhvAssignment {
            n_sites,
            z_values: encoding & mask,
            x_values: (encoding >> n_sites) & mask,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Z sign word, bit k set ⇔ Z = −1 at site k.
    pub fn z_values(&self) -> u64 {
        self.z_values
    }

    /// X sign word, bit k set ⇔ X = −1 at site k.
    pub fn x_values(&self) -> u64 {
        self.x_values
    }

    /// Predetermined value at a site for a basis.
    pub fn value(&self, site: usize, basis: Basis) -> Result<Outcome> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        let word = match basis {
            Basis::Z => self.z_values,
            Basis::X => self.x_values,
        };
        Ok(if word >> site & 1 == 1 {
            Outcome::Minus
        } else {
            Outcome::Plus
        })
    }

    /// True iff the X value is the same at every site.
    pub fn x_uniform(&self) -> bool {
        self.x_values == 0 || self.x_values == word_mask(self.n_sites)
    }

    /// True iff Z = +1 at every site (no site occupied).
    pub fn z_all_plus(&self) -> bool {
        self.z_values == 0
    }

    /// Sign string, character k = value at site k ('+' or '-').
    pub fn z_pattern(&self) -> String {
        pattern(self.z_values, self.n_sites)
    }

    pub fn x_pattern(&self) -> String {
        pattern(self.x_values, self.n_sites)
    }

    /// Probability the model assigns to a measurement spec: 1 if every
    /// record matches the predetermined value at its site, else 0. The
    /// empty spec gets 1. This is the locality factorization in its
    /// deterministic form: the joint indicator is the product of the
    /// per-record indicators.
    pub fn assignment_probability(&self, spec: &MeasurementSpec) -> Result<f64> {
        Ok(if self.matches_spec(spec)? { 1.0 } else { 0.0 })
    }

    /// True iff every record in the spec matches this assignment.
    pub fn matches_spec(&self, spec: &MeasurementSpec) -> Result<bool> {
        spec.validate_for(self.n_sites)?;
        for record in spec.records() {
            if self.value(record.site, record.basis)? != record.outcome {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff the model is consistent with a zero-probability constraint,
    /// i.e. assigns its spec probability 0.
    pub fn satisfies(&self, constraint: &ZeroProbConstraint) -> Result<bool> {
        Ok(!self.matches_spec(&constraint.spec)?)
    }
}

fn pattern(word: u64, n_sites: usize) -> String {
    (0..n_sites)
        .map(|k| if word >> k & 1 == 1 { '-' } else { '+' })
        .collect()
}

impl fmt::Display for LhvAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z={} x={}", self.z_pattern(), self.x_pattern())
    }
}

#[derive(Serialize, Deserialize)]
struct AssignmentRepr {
    encoding: u64,
    z_pattern: String,
    x_pattern: String,
}

impl Serialize for LhvAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        AssignmentRepr {
            encoding: self.encoding(),
            z_pattern: self.z_pattern(),
            x_pattern: self.x_pattern(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LhvAssignment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = AssignmentRepr::deserialize(deserializer)?;
        let assignment =
            LhvAssignment::decode(repr.z_pattern.len(), repr.encoding).map_err(D::Error::custom)?;
        if assignment.z_pattern() != repr.z_pattern || assignment.x_pattern() != repr.x_pattern {
            return Err(D::Error::custom(format!(
                "encoding {} does not match patterns z={} x={}",
                repr.encoding, repr.z_pattern, repr.x_pattern
            )));
        }
        Ok(assignment)
    }
}

/// A constraint spec compiled to one mask test over the 2n-bit encoding:
/// the assignment matches the spec iff `enc & mask == want`.
struct CompiledConstraint {
    mask: u64,
    want: u64,
}

fn compile_constraints(
    n: usize,
    constraints: &[ZeroProbConstraint],
) -> Result<Vec<CompiledConstraint>> {
    constraints
        .iter()
        .map(|constraint| {
            constraint.spec.validate_for(n)?;
            let mut mask = 0u64;
            let mut want = 0u64;
            for record in constraint.spec.records() {
                let shift = match record.basis {
                    Basis::Z => record.site,
                    Basis::X => n + record.site,
                };
                mask |= 1 << shift;
                if record.outcome == Outcome::Minus {
                    want |= 1 << shift;
                }
            }
            Ok(CompiledConstraint { mask, want })
        })
        .collect()
}

/// All assignments consistent with every constraint, in ascending encoding
/// order. Enumerates the full 4^n space; `n` above the cap is an explicit
/// resource error, never a truncated run.
pub fn filter_survivors(
    n: usize,
    constraints: &[ZeroProbConstraint],
) -> Result<Vec<LhvAssignment>> {
    filter_survivors_with_cap(n, constraints, DEFAULT_ENUMERATION_CAP)
}

/// [`filter_survivors`] with an explicit cap (still bounded by
/// [`MAX_ENUMERATION_SITES`]).
pub fn filter_survivors_with_cap(
    n: usize,
    constraints: &[ZeroProbConstraint],
    cap: usize,
) -> Result<Vec<LhvAssignment>> {
    check_enumeration_sites(n)?;
    if n > cap {
        return Err(Error::EnumerationCapExceeded {
            n,
            cap: cap.min(MAX_ENUMERATION_SITES),
        });
    }
    let compiled = compile_constraints(n, constraints)?;
    let total = 1u64 << (2 * n);
    let encodings: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&enc| compiled.iter().all(|c| enc & c.mask != c.want))
        .collect();
    encodings
        .into_iter()
        .map(|enc| LhvAssignment::decode(n, enc))
        .collect()
}

/// Census of the survivor set and the theorem verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub n_sites: usize,
    /// 4^n: every deterministic assignment examined.
    pub total_models: u64,
    pub survivor_count: u64,
    /// True iff every survivor carries one X value on all sites.
    pub all_survivors_x_uniform: bool,
    pub completeness_constraint_used: bool,
    /// Survivors with Z = +1 everywhere. With the completeness constraint
    /// this is 0; without it, these assignments escape the occupied-site
    /// partition of the model space, so they are flagged separately.
    pub z_all_plus_survivors: u64,
    /// With completeness: whether the survivor set is exactly
    /// {one site occupied} × {uniform X word}. Absent otherwise.
    pub canonical_survivor_set: Option<bool>,
    /// The survivors themselves, omitted above [`SURVIVOR_LIST_LIMIT`].
    pub survivors: Option<Vec<LhvAssignment>>,
}

/// Runs the census for `n` sites against the pair families (plus the
/// completeness constraint when flagged) and reports whether every survivor
/// predicts the same X outcome at every site.
pub fn verify_theorem(n: usize, use_completeness: bool) -> Result<TheoremReport> {
    verify_theorem_with_cap(n, use_completeness, DEFAULT_ENUMERATION_CAP)
}

/// [`verify_theorem`] with an explicit enumeration cap.
pub fn verify_theorem_with_cap(
    n: usize,
    use_completeness: bool,
    cap: usize,
) -> Result<TheoremReport> {
    let constraints = constraint_set(n, use_completeness)?;
    let survivors = filter_survivors_with_cap(n, &constraints, cap)?;

    let all_survivors_x_uniform = survivors.iter().all(LhvAssignment::x_uniform);
    let z_all_plus_survivors = survivors.iter().filter(|a| a.z_all_plus()).count() as u64;
    let canonical_survivor_set = use_completeness.then(|| {
        let mut expected: Vec<u64> = Vec::with_capacity(2 * n);
        for x_word in [0, word_mask(n)] {
            for site in 0..n {
                expected.push((x_word << n) | 1 << site);
            }
        }
        expected.sort_unstable();
        let actual: Vec<u64> = survivors.iter().map(LhvAssignment::encoding).collect();
        actual == expected
    });

    Ok(TheoremReport {
        n_sites: n,
        total_models: 1u64 << (2 * n),
        survivor_count: survivors.len() as u64,
        all_survivors_x_uniform,
        completeness_constraint_used: use_completeness,
        z_all_plus_survivors,
        canonical_survivor_set,
        survivors: (survivors.len() <= SURVIVOR_LIST_LIMIT).then_some(survivors),
    })
}

/// Prediction of a weighted mixture of deterministic models for one spec:
/// Σᵢ weightᵢ · (0 or 1). Weights must be nonnegative and sum to 1 within
/// [`WEIGHT_SUM_TOLERANCE`].
pub fn mixture_prediction(
    survivors: &[LhvAssignment],
    weights: &[f64],
    spec: &MeasurementSpec,
) -> Result<f64> {
    if weights.len() != survivors.len() {
        return Err(Error::WeightCountMismatch {
            weights: weights.len(),
            survivors: survivors.len(),
        });
    }
    for (index, &weight) in weights.iter().enumerate() {
        if weight < 0.0 {
            return Err(Error::NegativeWeight { index, weight });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::WeightSumMismatch {
            sum,
            tolerance: WEIGHT_SUM_TOLERANCE,
        });
    }
    let mut prediction = 0.0;
    for (assignment, &weight) in survivors.iter().zip(weights) {
        if assignment.matches_spec(spec)? {
            prediction += weight;
        }
    }
    Ok(prediction)
}
