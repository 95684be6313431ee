//! Zero-probability constraint families of the single-excitation state.
//!
//! Three families, all with quantum probability exactly 0 on the W state:
//!
//! 1. **Z pairs** — two sites both found occupied (Z = −1 twice). One photon
//!    cannot be in two places.
//! 2. **X pairs** — opposite X outcomes on two sites while every other site
//!    is empty (Z = +1 elsewhere).
//! 3. **Completeness** — every site empty (Z = +1 everywhere). There is
//!    exactly one photon, so some site must be occupied. Kept as a separate,
//!    toggleable constraint so the local-model census can be run both with
//!    and without it.

use std::fmt;

use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::statevector::{Basis, MeasurementSpec, Outcome, SparseState};

/// Default tolerance for constraint verification. The constraint zeros are
/// structural (projector coefficients cancel exactly), so double-precision
/// noise sits many orders below this.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Sign pattern of an X-pair constraint: the outcomes requested at the
/// lower-indexed site r and the higher-indexed site s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XSignature {
    /// X = +1 at r, X = −1 at s.
    PlusMinus,
    /// X = −1 at r, X = +1 at s.
    MinusPlus,
}

impl XSignature {
    pub const BOTH: [XSignature; 2] = [XSignature::PlusMinus, XSignature::MinusPlus];

    /// Outcomes at (r, s).
    pub fn outcomes(self) -> (Outcome, Outcome) {
        match self {
            XSignature::PlusMinus => (Outcome::Plus, Outcome::Minus),
            XSignature::MinusPlus => (Outcome::Minus, Outcome::Plus),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            XSignature::PlusMinus => "+-",
            XSignature::MinusPlus => "-+",
        }
    }
}

impl fmt::Display for XSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for XSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for XSignature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        match text.as_str() {
            "+-" => Ok(XSignature::PlusMinus),
            "-+" => Ok(XSignature::MinusPlus),
            other => Err(D::Error::custom(format!(
                "x-pair signature must be \"+-\" or \"-+\", got {other:?}"
            ))),
        }
    }
}

/// Structured identity of a constraint. The derived ordering (Z pairs,
/// then X pairs, then completeness) is the canonical list order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstraintLabel {
    ZPair {
        i: usize,
        j: usize,
    },
    XPair {
        r: usize,
        s: usize,
        signature: XSignature,
    },
    Completeness,
}

impl fmt::Display for ConstraintLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintLabel::ZPair { i, j } => write!(f, "Z-pair({i},{j})"),
            ConstraintLabel::XPair { r, s, signature } => write!(f, "X-pair({r},{s},{signature})"),
            ConstraintLabel::Completeness => write!(f, "completeness"),
        }
    }
}

/// A measurement spec asserted to have quantum probability zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroProbConstraint {
    pub label: ConstraintLabel,
    pub spec: MeasurementSpec,
}

impl ZeroProbConstraint {
    /// Checks that the spec fits an `n_sites` system and has the shape its
    /// label promises.
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        self.spec.validate_for(n_sites)?;
        let malformed = |reason: String| Error::MalformedConstraint {
            label: self.label.to_string(),
            reason,
        };
        match self.label {
            ConstraintLabel::ZPair { i, j } => {
                let ok = i < j
                    && self.spec.len() == 2
                    && self.spec.records().iter().all(|r| {
                        r.basis == Basis::Z
                            && r.outcome == Outcome::Minus
                            && (r.site == i || r.site == j)
                    });
                if !ok {
                    return Err(malformed(format!(
                        "expected exactly Z={{-1}} records on sites {i} and {j}"
                    )));
                }
            }
            ConstraintLabel::XPair { r, s, signature } => {
                let (out_r, out_s) = signature.outcomes();
                let mut ok = r < s && self.spec.len() == n_sites;
                for record in self.spec.records() {
                    ok &= if record.site == r {
                        record.basis == Basis::X && record.outcome == out_r
                    } else if record.site == s {
                        record.basis == Basis::X && record.outcome == out_s
                    } else {
                        record.basis == Basis::Z && record.outcome == Outcome::Plus
                    };
                }
                if !ok {
                    return Err(malformed(format!(
                        "expected opposite X records on sites {r},{s} plus Z=+1 padding on the \
                         other {} sites",
                        n_sites.saturating_sub(2)
                    )));
                }
            }
            ConstraintLabel::Completeness => {
                let ok = self.spec.len() == n_sites
                    && self
                        .spec
                        .records()
                        .iter()
                        .all(|r| r.basis == Basis::Z && r.outcome == Outcome::Plus);
                if !ok {
                    return Err(malformed(format!("expected Z=+1 on all {n_sites} sites")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ZeroProbConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.spec)
    }
}

/// One constraint per unordered site pair {i, j}: both sites occupied.
/// Exactly n(n−1)/2 constraints, ascending (i, j).
pub fn z_pair_constraints(n: usize) -> Result<Vec<ZeroProbConstraint>> {
    if n < 2 {
        return Err(Error::TooFewSites { n, min: 2 });
    }
    let mut constraints = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let spec = MeasurementSpec::from_triples([
                (i, Basis::Z, Outcome::Minus),
                (j, Basis::Z, Outcome::Minus),
            ])?;
            constraints.push(ZeroProbConstraint {
                label: ConstraintLabel::ZPair { i, j },
                spec,
            });
        }
    }
    Ok(constraints)
}

/// Two constraints per unordered site pair {r, s}: opposite X outcomes on
/// r and s, every other site empty (Z = +1). Exactly n(n−1) constraints;
/// the two sign patterns over unordered pairs already cover both orderings,
/// so there are no duplicates. For n = 2 the Z padding is empty.
pub fn x_pair_constraints(n: usize) -> Result<Vec<ZeroProbConstraint>> {
    if n < 2 {
        return Err(Error::TooFewSites { n, min: 2 });
    }
    let mut constraints = Vec::with_capacity(n * (n - 1));
    for r in 0..n {
        for s in (r + 1)..n {
            for signature in XSignature::BOTH {
                let (out_r, out_s) = signature.outcomes();
                let mut triples = vec![(r, Basis::X, out_r), (s, Basis::X, out_s)];
                triples.extend(
                    (0..n)
                        .filter(|&k| k != r && k != s)
                        .map(|k| (k, Basis::Z, Outcome::Plus)),
                );
                constraints.push(ZeroProbConstraint {
                    label: ConstraintLabel::XPair { r, s, signature },
                    spec: MeasurementSpec::from_triples(triples)?,
                });
            }
        }
    }
    Ok(constraints)
}

/// Every site empty (Z = +1 everywhere). The single excitation makes this
/// impossible, but it is not implied by the pair families, so it is exposed
/// as its own toggleable constraint.
pub fn completeness_constraint(n: usize) -> Result<ZeroProbConstraint> {
    if n == 0 {
        return Err(Error::ZeroSites);
    }
    let spec = MeasurementSpec::from_triples((0..n).map(|k| (k, Basis::Z, Outcome::Plus)))?;
    Ok(ZeroProbConstraint {
        label: ConstraintLabel::Completeness,
        spec,
    })
}

/// The full constraint list in canonical label order: Z pairs, X pairs,
/// then (optionally) completeness. For n = 1 the pair families are empty.
pub fn constraint_set(n: usize, include_completeness: bool) -> Result<Vec<ZeroProbConstraint>> {
    if n == 0 {
        return Err(Error::ZeroSites);
    }
    let mut constraints = Vec::new();
    if n >= 2 {
        constraints.extend(z_pair_constraints(n)?);
        constraints.extend(x_pair_constraints(n)?);
    }
    if include_completeness {
        constraints.push(completeness_constraint(n)?);
    }
    constraints.sort_by_key(|c| c.label);
    Ok(constraints)
}

/// Quantum probability of a single constraint's spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub label: ConstraintLabel,
    pub probability: f64,
}

/// Outcome of evaluating a constraint list against a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub n_sites: usize,
    pub checks: Vec<ConstraintCheck>,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Evaluates every constraint's quantum probability on `state`. Passes iff
/// the largest probability (the violation of the zero assertion) is within
/// `tolerance`. Evaluation is parallel; the report is identical to
/// sequential evaluation.
///
/// Only the specs' site indices are validated against the state; labels are
/// descriptive, so hand-built constraints of any shape can be checked.
pub fn verify_constraints(
    state: &SparseState,
    constraints: &[ZeroProbConstraint],
    tolerance: f64,
) -> Result<ConstraintReport> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::NonPositiveTolerance { tolerance });
    }
    for constraint in constraints {
        constraint.spec.validate_for(state.n_sites())?;
    }
    let checks: Vec<ConstraintCheck> = constraints
        .par_iter()
        .map(|constraint| {
            state
                .probability(&constraint.spec)
                .map(|probability| ConstraintCheck {
                    label: constraint.label,
                    probability,
                })
        })
        .collect::<Result<_>>()?;
    let max_violation = checks.iter().map(|c| c.probability).fold(0.0, f64::max);
    Ok(ConstraintReport {
        n_sites: state.n_sites(),
        checks,
        max_violation,
        tolerance,
        passed: max_violation <= tolerance,
    })
}
