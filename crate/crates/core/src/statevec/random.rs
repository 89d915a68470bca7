use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::gint::ExactScalar;

use super::{ExactState, FloatState};

/// Largest numerator magnitude / denominator drawn for random exact amplitudes.
pub const RATIONAL_BOUND: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    /// Independent amplitudes with random rational real and imaginary parts.
    ExactGaussianRational,
    /// Haar-random normalized double-precision state.
    FloatHaar,
    /// Tensor product of random one-qubit exact states.
    ProductExact,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Exact(ExactState),
    Float(FloatState),
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic random state of the requested kind.
pub fn random_state(n: usize, kind: RandomKind, seed: u64) -> AnyState {
    let mut rng = rng_from_seed(seed);
    match kind {
        RandomKind::ExactGaussianRational => AnyState::Exact(random_exact_state(n, &mut rng)),
        RandomKind::FloatHaar => AnyState::Float(random_haar_state(n, &mut rng)),
        RandomKind::ProductExact => AnyState::Exact(random_product_state(n, &mut rng)),
    }
}

/// `p/q` with `|p| ≤ 16`, `1 ≤ q ≤ 16`.
pub fn random_rational_parts<R: Rng>(rng: &mut R) -> (i64, i64) {
    (
        rng.random_range(-RATIONAL_BOUND..=RATIONAL_BOUND),
        rng.random_range(1..=RATIONAL_BOUND),
    )
}

pub fn random_gaussian_rational<R: Rng>(rng: &mut R) -> ExactScalar {
    let (a, b) = random_rational_parts(rng);
    let (c, d) = random_rational_parts(rng);
    ExactScalar::gaussian_ratio(a, b, c, d)
}

/// A nonzero `Q(i)` state with independent random amplitudes.
pub fn random_exact_state<R: Rng>(n: usize, rng: &mut R) -> ExactState {
    loop {
        let amps = (0..1usize << n)
            .map(|_| random_gaussian_rational(rng))
            .collect();
        let s = ExactState::new(n, amps).expect("length 2^n");
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_product_state<R: Rng>(n: usize, rng: &mut R) -> ExactState {
    (0..n).fold(ExactState::basis(0, 0), |acc, _| {
        acc.tensor(&random_exact_state(1, rng))
    })
}

pub fn random_haar_state<R: Rng>(n: usize, rng: &mut R) -> FloatState {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    FloatState::new(n, amps)
        .expect("length 2^n")
        .normalized()
        .expect("gaussian sample is nonzero with probability one")
}
