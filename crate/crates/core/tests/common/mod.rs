//! Dense reference implementation and deterministic case generators.
//!
//! The dense oracle expands the full 2^n amplitude vector and applies
//! per-site projectors by direct index arithmetic — no sparse maps, no
//! shared code with the engine under test. Slow and memory-hungry by
//! design; usable up to n ≈ 8, which is all the equivalence suite needs.

#![allow(dead_code)]

use avn_core::statevector::{Basis, MeasurementSpec, Outcome, SparseState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Full amplitude vector of the single-excitation superposition.
pub fn dense_w_state(n: usize) -> Vec<Complex64> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    let value = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for site in 0..n {
        amplitudes[1 << site] = value;
    }
    amplitudes
}

/// Applies one single-site projector to a dense vector, returning a new
/// (generally unnormalized) vector.
pub fn dense_project(
    amplitudes: &[Complex64],
    site: usize,
    basis: Basis,
    outcome: Outcome,
) -> Vec<Complex64> {
    let bit = 1usize << site;
    let mut out = vec![Complex64::new(0.0, 0.0); amplitudes.len()];
    for base in 0..amplitudes.len() {
        if base & bit != 0 {
            continue;
        }
        let a0 = amplitudes[base];
        let a1 = amplitudes[base | bit];
        match (basis, outcome) {
            (Basis::Z, Outcome::Plus) => out[base] = a0,
            (Basis::Z, Outcome::Minus) => out[base | bit] = a1,
            (Basis::X, sign) => {
                let s = sign.sign();
                let projected = (a0 + s * a1) * 0.5;
                out[base] = projected;
                out[base | bit] = s * projected;
            }
        }
    }
    out
}

/// Probability of a full measurement spec on a dense vector: apply every
/// projector, then take the squared norm.
pub fn dense_probability(amplitudes: &[Complex64], spec: &MeasurementSpec) -> f64 {
    let mut state = amplitudes.to_vec();
    for record in spec.records() {
        state = dense_project(&state, record.site, record.basis, record.outcome);
    }
    state.iter().map(|a| a.norm_sqr()).sum()
}

pub fn dense_conditional(
    amplitudes: &[Complex64],
    given: &MeasurementSpec,
    target: &MeasurementSpec,
) -> f64 {
    let p_given = dense_probability(amplitudes, given);
    assert!(p_given > 0.0, "oracle conditioned on an impossible event");
    dense_probability(amplitudes, &given.union(target).unwrap()) / p_given
}

/// Copies a sparse state into a dense vector for oracle-side evaluation.
pub fn densify(state: &SparseState) -> Vec<Complex64> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << state.n_sites()];
    for (index, amplitude) in state.amplitudes() {
        amplitudes[index as usize] = amplitude;
    }
    amplitudes
}

/// Fixed-seed generator so every test run sees the identical case list.
pub fn seeded_rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x57A7E ^ stream)
}

pub fn random_basis(rng: &mut ChaCha8Rng) -> Basis {
    if rng.gen::<bool>() {
        Basis::X
    } else {
        Basis::Z
    }
}

pub fn random_outcome(rng: &mut ChaCha8Rng) -> Outcome {
    if rng.gen::<bool>() {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

/// A spec over a random nonempty subset of sites with random bases and
/// outcomes.
pub fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> MeasurementSpec {
    loop {
        let mut triples: Vec<(usize, Basis, Outcome)> = Vec::new();
        for site in 0..n {
            if rng.gen::<bool>() {
                triples.push((site, random_basis(rng), random_outcome(rng)));
            }
        }
        if !triples.is_empty() {
            return MeasurementSpec::from_triples(triples).unwrap();
        }
    }
}

/// A normalized state with a pseudo-random sparse support.
pub fn random_normalized_state(rng: &mut ChaCha8Rng, n: usize) -> SparseState {
    loop {
        let entries: Vec<(u64, Complex64)> = (0..rng.gen_range(1..=2 * n.max(1)))
            .map(|_| {
                let index = rng.gen_range(0..1u64 << n);
                let amplitude = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                (index, amplitude)
            })
            .collect();
        let raw = SparseState::from_amplitudes(n, entries).unwrap();
        let norm = raw.norm_sqr().sqrt();
        if norm < 1e-3 {
            continue;
        }
        let scale = Complex64::new(1.0 / norm, 0.0);
        return SparseState::from_amplitudes(n, raw.amplitudes().map(|(i, a)| (i, a * scale)))
            .unwrap();
    }
}

/// `count` nonnegative dyadic weights with denominator 2^20 summing to
/// exactly 1.0 in double precision (every partial sum is a multiple of
/// 2^−20, hence exact).
pub fn dyadic_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    const DENOMINATOR: u64 = 1 << 20;
    let mut numerators = vec![0u64; count];
    let raw: Vec<u64> = (0..count)
        .map(|_| u64::from(rng.gen::<u32>()) + 1)
        .collect();
    let total: u64 = raw.iter().sum();
    let mut assigned = 0u64;
    for (numerator, &r) in numerators.iter_mut().zip(&raw) {
        *numerator = r * DENOMINATOR / total;
        assigned += *numerator;
    }
    numerators[0] += DENOMINATOR - assigned;
    numerators
        .into_iter()
        .map(|numerator| numerator as f64 / DENOMINATOR as f64)
        .collect()
}
