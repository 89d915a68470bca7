use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::cliffstab::StabilizerSet;
use crate::error::{Error, Result};
use crate::gint::{ExactScalar, GaussianInt};
use crate::statevec::{random_product_state, rng_from_seed, ExactState};

use super::ring::{last_in_span, BareissRing, SmallGauss};

const CHUNK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    /// `None` when the rank exceeds `max_k`.
    pub rank: Option<usize>,
    pub max_k: usize,
    /// Lexicographically first subset of stabilizer indices whose span contains the state.
    pub witness: Option<Vec<usize>>,
    pub subsets_checked: u64,
}

/// `Z[i]` coordinates of `v` after clearing rational denominators, when `v` is over `Q(i)`.
pub(crate) fn integral_coords(v: &ExactState) -> Option<Vec<GaussianInt>> {
    if !v.is_gaussian() {
        return None;
    }
    let lcm = v
        .amplitudes()
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(&a.denominator_lcm()));
    let scale = BigRational::from_integer(lcm);
    v.amplitudes()
        .iter()
        .map(|a| a.scale(&scale).to_gaussian_int())
        .collect()
}

fn span_test<R: BareissRing>(stabs: &[Vec<R>], psi: &[R], subset: &[usize]) -> Option<bool> {
    let mut cols: Vec<&[R]> = subset.iter().map(|&i| stabs[i].as_slice()).collect();
    cols.push(psi);
    last_in_span(&cols)
}

/// Searches `k = 1..=max_k` for the lexicographically first `k`-subset whose span holds
/// `psi`.
fn search(num: usize, max_k: usize, in_span: &(dyn Fn(&[usize]) -> bool + Sync)) -> RankResult {
    let mut checked: u64 = 0;
    for k in 1..=max_k.min(num) {
        for chunk in &(0..num).combinations(k).chunks(CHUNK) {
            let chunk: Vec<Vec<usize>> = chunk.collect();
            if let Some(pos) = chunk.par_iter().position_first(|s| in_span(s)) {
                checked += pos as u64 + 1;
                return RankResult {
                    rank: Some(k),
                    max_k,
                    witness: Some(chunk[pos].clone()),
                    subsets_checked: checked,
                };
            }
            checked += chunk.len() as u64;
        }
    }
    RankResult {
        rank: None,
        max_k,
        witness: None,
        subsets_checked: checked,
    }
}

/// Smallest `k ≤ max_k` such that `psi` lies in the span of `k` enumerated stabilizer
/// states, decided by exact elimination.
pub fn exact_rank(psi: &ExactState, stabs: &StabilizerSet, max_k: usize) -> Result<RankResult> {
    if psi.is_zero() {
        return Err(Error::ZeroInput("exact_rank"));
    }
    if psi.n() != stabs.n() {
        return Err(Error::DimensionMismatch {
            expected: 1 << stabs.n(),
            found: psi.len(),
        });
    }
    let num = stabs.len();
    if let Some(p) = integral_coords(psi) {
        let big: Vec<Vec<GaussianInt>> = stabs
            .states()
            .iter()
            .map(|s| integral_coords(s).expect("stabilizer states are over Q(i)"))
            .collect();
        let small: Option<Vec<Vec<SmallGauss>>> = big
            .iter()
            .map(|v| v.iter().map(SmallGauss::from_gaussian).collect())
            .collect();
        let psi_small: Option<Vec<SmallGauss>> = p.iter().map(SmallGauss::from_gaussian).collect();
        let in_span = |s: &[usize]| {
            if let (Some(st), Some(ps)) = (&small, &psi_small) {
                if let Some(r) = span_test(st, ps, s) {
                    return r;
                }
            }
            span_test(&big, &p, s).expect("arbitrary precision")
        };
        return Ok(search(num, max_k, &in_span));
    }
    let exact: Vec<Vec<ExactScalar>> = stabs
        .states()
        .iter()
        .map(|s| s.amplitudes().to_vec())
        .collect();
    let p = psi.amplitudes().to_vec();
    let in_span = |s: &[usize]| span_test(&exact, &p, s).expect("field division");
    Ok(search(num, max_k, &in_span))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductFailure {
    pub sample: usize,
    pub rank: Option<usize>,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductExperiment {
    pub samples: usize,
    /// `rank_counts[k]` samples had rank `k` (index 0 unused).
    pub rank_counts: Vec<usize>,
    pub fraction_full_rank: f64,
    pub failures: Vec<ProductFailure>,
}

/// Exact ranks of random two-qubit `Q(i)` product states against all 60 stabilizer states.
pub fn product_rank_experiment(
    samples: usize,
    seed: u64,
    stabs: &StabilizerSet,
) -> Result<ProductExperiment> {
    if stabs.n() != 2 {
        return Err(Error::UnsupportedQubitCount {
            n: stabs.n(),
            reason: "the product-state experiment runs at two qubits",
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut rank_counts = vec![0; 5];
    let mut failures = Vec::new();
    for sample in 0..samples {
        let psi = random_product_state(2, &mut rng);
        let r = exact_rank(&psi, stabs, 4)?;
        match r.rank {
            Some(4) => rank_counts[4] += 1,
            rank => {
                if let Some(k) = rank {
                    rank_counts[k] += 1;
                }
                failures.push(ProductFailure {
                    sample,
                    rank,
                    witness: r.witness,
                });
            }
        }
    }
    Ok(ProductExperiment {
        samples,
        fraction_full_rank: if samples == 0 {
            0.0
        } else {
            rank_counts[4] as f64 / samples as f64
        },
        rank_counts,
        failures,
    })
}
