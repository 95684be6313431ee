use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number of sites must be at least 1")]
    ZeroSites,

    #[error("{n} sites exceeds the supported maximum of {max}")]
    TooManySites { n: usize, max: usize },

    #[error("operation requires at least {min} sites, got {n}")]
    TooFewSites { n: usize, min: usize },

    #[error("site {site} is out of range for a {n_sites}-site system")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("site {site} appears more than once in a measurement spec")]
    DuplicateSite { site: usize },

    #[error("measurement specs overlap at site {site}")]
    OverlappingSpecs { site: usize },

    #[error("basis index {index} is out of range for a {n_sites}-site system")]
    IndexOutOfRange { index: u64, n_sites: usize },

    #[error("cannot condition on an event of zero probability")]
    ZeroProbabilityCondition,

    #[error("outcome string has length {got}, state has {expected} sites")]
    OutcomeStringLength { got: usize, expected: usize },

    #[error("tolerance must be positive, got {tolerance}")]
    NonPositiveTolerance { tolerance: f64 },

    #[error("constraint {label} is malformed: {reason}")]
    MalformedConstraint { label: String, reason: String },

    #[error("n = {n} exceeds the enumeration cap of {cap} (4^n assignments would be examined)")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("encoding {encoding} is out of range for {n_sites} sites")]
    EncodingOutOfRange { encoding: u64, n_sites: usize },

    #[error("sign word {word:#x} does not fit in {n_sites} bits")]
    SignWordOutOfRange { word: u64, n_sites: usize },

    #[error("got {weights} weights for {survivors} assignments")]
    WeightCountMismatch { weights: usize, survivors: usize },

    #[error("weight {weight} at index {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },

    #[error("weights sum to {sum}, expected 1 within {tolerance}")]
    WeightSumMismatch { sum: f64, tolerance: f64 },

    #[error(
        "invalid site range: n_min = {n_min}, n_max = {n_max} (need 1 <= n_min <= n_max <= {max})"
    )]
    InvalidRange {
        n_min: usize,
        n_max: usize,
        max: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
