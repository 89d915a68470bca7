use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::bwlattice::{bw_norm, is_member, BwNorm};
use crate::cliffstab::{apply_gate_in_place, Gate};
use crate::error::{Error, Result};
use crate::gint::{format_rational, Unit};
use crate::statevec::{rng_from_seed, ExactState};

use super::step::{all_mask_errors, h_weights, mask_string, pick_best};

/// Largest `n` for the exact lattice-tracking pipeline.
pub const MAX_LATTICE_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MaskPolicy {
    /// Uniform over even-weight masks, the identity included.
    #[default]
    Random,
    /// The even-weight mask minimizing the next relative error.
    MinError,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeRoundReport {
    pub round: usize,
    /// Mask applied to reach this round's vector (empty for round 0).
    pub mask: String,
    pub rank: usize,
    pub member: bool,
    /// `‖v‖²` as `p/q`.
    pub norm2: String,
    #[serde(skip)]
    pub norm2_exact: BigRational,
    /// `N(v)` as `p/q`.
    pub bw_norm: String,
    /// `2^n·N(v)` is an integer.
    pub integral: bool,
    pub rel_error: f64,
    /// `|⟨H^⊥|^⊗n v|² / |⟨H|^⊗n v|²`.
    pub perp_ratio: f64,
}

/// `v ← v + i^{wt/2}·E^{mask}·v = (I + H^{mask})·v` exactly, for even-weight masks.
fn apply_even_mask(v: &ExactState, mask: u64) -> Result<ExactState> {
    let n = v.n();
    let wt = mask.count_ones();
    debug_assert!(wt.is_multiple_of(2));
    let mut w = v.clone();
    for q in (0..n).filter(|q| mask >> (n - 1 - q) & 1 == 1) {
        apply_gate_in_place(&mut w, &Gate::E(q))?;
    }
    apply_gate_in_place(&mut w, &Gate::UnitPhase(Unit::from_power((wt / 2) as i64)))?;
    v.add(&w)
}

fn random_even_mask<R: Rng>(n: usize, rng: &mut R) -> u64 {
    let m = rng.random_range(0..1u64 << n);
    if m.count_ones() % 2 == 1 {
        m ^ 1
    } else {
        m
    }
}

fn round_report(
    v: &ExactState,
    round: usize,
    mask: String,
    rank: usize,
) -> Result<LatticeRoundReport> {
    let n = v.n();
    let member = is_member(v).member;
    let norm2 = v.norm_sq_rational().expect("lattice vectors are over Q(i)");
    let norm = match bw_norm(v)? {
        BwNorm::Finite(r) => r,
        BwNorm::Infinite => {
            return Err(Error::InvalidInput(
                "lattice vector has infinite norm".into(),
            ))
        }
    };
    let p = h_weights(&v.to_float())?;
    Ok(LatticeRoundReport {
        round,
        mask,
        rank,
        member,
        norm2: format_rational(&norm2),
        norm2_exact: norm2,
        bw_norm: format_rational(&norm.value),
        integral: norm.scaled_integer().is_integer(),
        rel_error: (p.iter().sum::<f64>() - 1.0).max(0.0),
        perp_ratio: p[(1usize << n) - 1],
    })
}

/// Exact amplification from `|0^n⟩` with even-weight `H` masks, which preserve `BW_n`.
///
/// The vector is a sum of `H^S|0^n⟩` over subsets `S` with non-negative integer
/// weights, so the rank is the number of distinct subsets reached.
pub fn lattice_track_run(
    n: usize,
    rounds: usize,
    seed: u64,
    policy: MaskPolicy,
) -> Result<Vec<LatticeRoundReport>> {
    if n == 0 || n > MAX_LATTICE_QUBITS {
        return Err(Error::UnsupportedQubitCount {
            n,
            reason: "lattice tracking supports 1 to 10 qubits",
        });
    }
    let mut rng = rng_from_seed(seed);
    let mut v = ExactState::basis(n, 0);
    let mut weights: BTreeMap<u64, BigInt> = BTreeMap::from([(0, BigInt::one())]);
    let mut reports = vec![round_report(&v, 0, String::new(), 1)?];
    for round in 1..=rounds {
        let mask = match policy {
            MaskPolicy::Random => random_even_mask(n, &mut rng),
            MaskPolicy::MinError => {
                let errs = all_mask_errors(&h_weights(&v.to_float())?);
                pick_best(
                    errs.into_iter()
                        .enumerate()
                        .filter(|(m, _)| m.count_ones() % 2 == 0)
                        .map(|(m, e)| (m as u64, e)),
                )
                .0
            }
        };
        v = apply_even_mask(&v, mask)?;
        let mut next: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (s, c) in &weights {
            *next.entry(*s).or_insert_with(BigInt::zero) += c;
            *next.entry(s ^ mask).or_insert_with(BigInt::zero) += c;
        }
        weights = next;
        let rep = round_report(&v, round, mask_string(mask, n), weights.len())?;
        if !rep.member {
            return Err(Error::NotMember {
                index: round,
                entry: "lattice-track vector left BW_n".into(),
            });
        }
        reports.push(rep);
    }
    Ok(reports)
}

/// Writes `round,rank,norm2_num,norm2_den,rel_error,member` rows.
pub fn write_lattice_csv<W: Write>(
    out: &mut W,
    reports: &[LatticeRoundReport],
) -> std::io::Result<()> {
    writeln!(out, "round,rank,norm2_num,norm2_den,rel_error,member")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{:.17e},{}",
            r.round,
            r.rank,
            r.norm2_exact.numer(),
            r.norm2_exact.denom(),
            r.rel_error,
            r.member
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::FloatState;

    #[test]
    fn round_zero() {
        let reps = lattice_track_run(4, 0, 1, MaskPolicy::Random).unwrap();
        assert_eq!(reps.len(), 1);
        let r = &reps[0];
        assert!(r.member && r.integral);
        assert_eq!(
            (r.rank, r.norm2.as_str(), r.bw_norm.as_str()),
            (1, "1/1", "1/1")
        );
    }

    #[test]
    fn even_mask_is_hadamard() {
        let v = ExactState::basis(2, 0);
        let w = apply_even_mask(&v, 0b11).unwrap();
        let mut f = v.to_float();
        let mut h = f.clone();
        h.apply_h_mask(0b11);
        f.add_scaled(num_complex::Complex64::new(1.0, 0.0), &h)
            .unwrap();
        assert!(w.to_float().distance(&f).unwrap() < 1e-12);
        let _ = FloatState::zero(1);
    }

    #[test]
    fn membership_every_round() {
        for seed in 0..5 {
            let reps = lattice_track_run(6, 4, seed, MaskPolicy::Random).unwrap();
            assert!(reps.iter().all(|r| r.member && r.integral));
            for w in reps.windows(2) {
                assert!(w[1].rank <= 2 * w[0].rank);
            }
        }
    }

    #[test]
    fn min_error_policy_decreases_error() {
        let reps = lattice_track_run(4, 3, 0, MaskPolicy::MinError).unwrap();
        assert!(reps.last().unwrap().rel_error < reps[0].rel_error);
    }

    #[test]
    fn random_masks_are_even() {
        let mut rng = rng_from_seed(2);
        for _ in 0..100 {
            assert_eq!(random_even_mask(5, &mut rng).count_ones() % 2, 0);
        }
        assert!(lattice_track_run(11, 1, 0, MaskPolicy::Random).is_err());
    }

    #[test]
    fn csv_shape() {
        let reps = lattice_track_run(2, 2, 3, MaskPolicy::Random).unwrap();
        let mut buf = Vec::new();
        write_lattice_csv(&mut buf, &reps).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("round,rank,norm2_num,norm2_den,rel_error,member\n0,1,1,1,"));
    }
}
