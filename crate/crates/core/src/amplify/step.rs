use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statevec::{rng_from_seed, Decomposition, FloatState, Target, Term};

/// Largest `n` for exhaustive mask search.
pub const MAX_EXHAUSTIVE_QUBITS: usize = 14;

/// Default cap on `rank · 2^n` amplitude entries held by a decomposition.
pub const DEFAULT_TERM_BUDGET: usize = 1 << 20;

/// Masks whose error is within this of the minimum count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskMode {
    /// All `2^n` masks.
    Exhaustive,
    /// `m` uniformly random masks; no halving guarantee.
    Sample(usize),
}

impl FromStr for MaskMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(MaskMode::Exhaustive);
        }
        s.strip_prefix("sample:")
            .and_then(|m| m.parse().ok())
            .filter(|&m| m > 0)
            .map(MaskMode::Sample)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "mode must be `exhaustive` or `sample:m`, got {s:?}"
                ))
            })
    }
}

impl fmt::Display for MaskMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskMode::Exhaustive => write!(f, "exhaustive"),
            MaskMode::Sample(m) => write!(f, "sample:{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AmplifyOptions {
    pub mode: MaskMode,
    pub seed: u64,
    pub term_budget: usize,
}

impl Default for AmplifyOptions {
    fn default() -> Self {
        AmplifyOptions {
            mode: MaskMode::Exhaustive,
            seed: 0,
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplifyReport {
    pub round: usize,
    pub rank_before: usize,
    pub rank_after: usize,
    pub error_before: f64,
    pub error_after: f64,
    /// Predicted by the mask search; agrees with `error_after` up to rounding.
    pub error_predicted: f64,
    /// `mask[q] = '1'` where `H` is applied to qubit `q`.
    pub mask: String,
    pub exhaustive: bool,
}

/// Bitstring with character `q` for qubit `q` (bit `n−1−q` of `mask`).
pub fn mask_string(mask: u64, n: usize) -> String {
    (0..n)
        .map(|q| {
            if mask >> (n - 1 - q) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn parse_mask(s: &str) -> Result<u64> {
    if s.len() > 64 || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::InvalidInput(format!(
            "mask must be a bitstring, got {s:?}"
        )));
    }
    Ok(s.chars().fold(0, |acc, c| (acc << 1) | (c == '1') as u64))
}

/// Coordinates of `psi` in the `{|H⟩, |H^⊥⟩}^⊗n` basis.
fn h_coords(psi: &FloatState) -> Vec<Complex64> {
    psi.h_basis_transform().amplitudes().to_vec()
}

fn error_from_h_coords(y: &[Complex64]) -> Result<f64> {
    let total: f64 = y.iter().map(|a| a.norm_sqr()).sum();
    let y0 = y[0].norm_sqr();
    if y0 <= 1e-30 * total || y0 == 0.0 {
        return Err(Error::ZeroOverlap);
    }
    Ok(((total - y0) / y0).max(0.0))
}

/// Relative error of the assembled decomposition against `|H⟩^⊗n`, via the H basis.
pub fn relative_error_h(d: &Decomposition) -> Result<f64> {
    require_h_target(d)?;
    error_from_h_coords(&h_coords(&d.assemble_float()))
}

fn require_h_target(d: &Decomposition) -> Result<()> {
    match d.target() {
        Target::HTensor => Ok(()),
        Target::State(_) => Err(Error::InvalidInput("amplification targets |H>^n".into())),
    }
}

/// Applies `H` on the masked qubits of every term; coefficients are unchanged.
pub fn decomp_apply_unitary(d: &Decomposition, mask: u64) -> Result<Decomposition> {
    if mask == 0 {
        return Ok(d.clone());
    }
    check_mask(mask, d.n())?;
    let terms = d
        .terms()
        .iter()
        .map(|t| {
            let mut s = t.state.to_float();
            s.apply_h_mask(mask);
            Term::float(t.coeff.to_complex(), s)
        })
        .collect();
    Decomposition::new(d.n(), terms, d.target().clone())
}

fn check_mask(mask: u64, n: usize) -> Result<()> {
    if n < 64 && mask >> n != 0 {
        return Err(Error::InvalidInput(format!(
            "mask {mask:#b} has bits beyond {n} qubits"
        )));
    }
    Ok(())
}

/// In-place Walsh–Hadamard transform (unnormalized).
pub(crate) fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `err((I+C)/2·ψ)` for every mask `C`, from `p_x = |y_x/y_0|²`.
pub(crate) fn all_mask_errors(p: &[f64]) -> Vec<f64> {
    let total: f64 = p.iter().sum();
    let mut w = p.to_vec();
    walsh_hadamard(&mut w);
    w.into_iter()
        .map(|wm| ((total + wm) / 2.0 - 1.0).max(0.0))
        .collect()
}

pub(crate) fn mask_error(p: &[f64], mask: u64) -> f64 {
    let kept: f64 = p
        .iter()
        .enumerate()
        .filter(|(x, _)| (*x as u64 & mask).count_ones().is_multiple_of(2))
        .map(|(_, v)| v)
        .sum();
    (kept - 1.0).max(0.0)
}

/// Smallest error, ties to the smallest mask.
pub(crate) fn pick_best(cands: impl Iterator<Item = (u64, f64)>) -> (u64, f64) {
    let cands: Vec<(u64, f64)> = cands.collect();
    let min = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    cands
        .into_iter()
        .filter(|c| c.1 <= min + TIE_TOL)
        .min_by_key(|c| c.0)
        .expect("at least one candidate")
}

/// Normalized squared H-basis weights `p_x = |y_x/y_0|²`.
pub(crate) fn h_weights(psi: &FloatState) -> Result<Vec<f64>> {
    let y = h_coords(psi);
    error_from_h_coords(&y)?;
    let n0 = y[0].norm_sqr();
    Ok(y.iter().map(|a| a.norm_sqr() / n0).collect())
}

/// One round: `d' = (d + C·d)/2` for the mask `C` minimizing the resulting error.
pub fn amplify_step(
    d: &Decomposition,
    opts: &AmplifyOptions,
    round: usize,
) -> Result<(Decomposition, AmplifyReport)> {
    require_h_target(d)?;
    let n = d.n();
    let rank_before = d.rank();
    let entries = 2usize
        .saturating_mul(rank_before)
        .saturating_mul(1usize.checked_shl(n as u32).unwrap_or(usize::MAX));
    if entries > opts.term_budget {
        return Err(Error::BudgetExceeded(format!(
            "{entries} amplitude entries exceed the term budget {}",
            opts.term_budget
        )));
    }
    let p = h_weights(&d.assemble_float())?;
    let error_before = (p.iter().sum::<f64>() - 1.0).max(0.0);
    let (mask, error_predicted) = match opts.mode {
        MaskMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_QUBITS {
                return Err(Error::UnsupportedQubitCount {
                    n,
                    reason: "exhaustive mask search supports at most 14 qubits",
                });
            }
            let errs = all_mask_errors(&p);
            pick_best(errs.into_iter().enumerate().map(|(m, e)| (m as u64, e)))
        }
        MaskMode::Sample(m) => {
            let mut rng = rng_from_seed(opts.seed);
            let masks: Vec<u64> = (0..m)
                .map(|_| {
                    if n == 64 {
                        rng.next_u64()
                    } else {
                        rng.random_range(0..1u64 << n)
                    }
                })
                .collect();
            let errs: Vec<(u64, f64)> = masks
                .par_iter()
                .map(|&mk| (mk, mask_error(&p, mk)))
                .collect();
            pick_best(errs.into_iter())
        }
    };
    let scaled = d.scaled(Complex64::new(0.5, 0.0));
    let rotated = decomp_apply_unitary(&scaled, mask)?;
    let terms: Vec<Term> = scaled
        .terms()
        .iter()
        .chain(rotated.terms())
        .cloned()
        .collect();
    let next = Decomposition::new(n, terms, Target::HTensor)?;
    let error_after = relative_error_h(&next)?;
    let report = AmplifyReport {
        round,
        rank_before,
        rank_after: next.rank(),
        error_before,
        error_after,
        error_predicted,
        mask: mask_string(mask, n),
        exhaustive: opts.mode == MaskMode::Exhaustive,
    };
    Ok((next, report))
}

/// `rounds` sequential steps; each round draws its own seed from `opts.seed`.
pub fn amplify(
    d: &Decomposition,
    rounds: usize,
    opts: &AmplifyOptions,
) -> Result<(Decomposition, Vec<AmplifyReport>)> {
    let mut rng = rng_from_seed(opts.seed);
    let mut cur = d.clone();
    let mut reports = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let step_opts = AmplifyOptions {
            seed: rng.next_u64(),
            ..*opts
        };
        let (next, rep) = amplify_step(&cur, &step_opts, round)?;
        cur = next;
        reports.push(rep);
    }
    Ok((cur, reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gint::ExactScalar;
    use crate::statevec::ExactState;
    use std::f64::consts::PI;

    pub(crate) fn zeros(n: usize) -> Decomposition {
        Decomposition::new(
            n,
            vec![Term::exact(ExactScalar::one(), ExactState::basis(n, 0))],
            Target::HTensor,
        )
        .unwrap()
    }

    #[test]
    fn relative_error_h_examples() {
        let t2 = (PI / 8.0).tan().powi(2);
        assert!((relative_error_h(&zeros(1)).unwrap() - t2).abs() < 1e-12);
        assert!((relative_error_h(&zeros(1)).unwrap() - 0.171573).abs() < 1e-6);
        let e4 = 1.0 / (PI / 8.0).cos().powi(8) - 1.0;
        assert!((relative_error_h(&zeros(4)).unwrap() - e4).abs() < 1e-12);
        assert!((e4 - 0.883_984_097_463).abs() < 1e-11);
        assert!(
            (relative_error_h(&zeros(3)).unwrap() - zeros(3).relative_error().unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn exact_h_has_zero_error() {
        let (c, s) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let d = Decomposition::new(
            1,
            vec![
                Term::float(Complex64::new(c, 0.0), FloatState::basis(1, 0)),
                Term::float(Complex64::new(s, 0.0), FloatState::basis(1, 1)),
            ],
            Target::HTensor,
        )
        .unwrap();
        assert!(relative_error_h(&d).unwrap() < 1e-15);
        let (d2, rep) = amplify_step(&d, &AmplifyOptions::default(), 0).unwrap();
        assert!(rep.error_after < 1e-15);
        assert!(d2.rank() <= 2 * d.rank());
    }

    #[test]
    fn apply_unitary_examples() {
        let d = zeros(3);
        assert_eq!(decomp_apply_unitary(&d, 0).unwrap(), d);
        let e = decomp_apply_unitary(&d, 0b101).unwrap();
        assert_eq!(e.rank(), 1);
        assert!((relative_error_h(&e).unwrap() - relative_error_h(&d).unwrap()).abs() < 1e-12);
        assert!(decomp_apply_unitary(&d, 0b1000).is_err());
    }

    #[test]
    fn wht_matches_direct_evaluation() {
        let p = [1.0, 0.3, 0.2, 0.05, 0.7, 0.01, 0.0, 0.4];
        let all = all_mask_errors(&p);
        for (m, e) in all.iter().enumerate() {
            assert!((e - mask_error(&p, m as u64)).abs() < 1e-12);
        }
    }

    #[test]
    fn one_qubit_step() {
        let (d2, rep) = amplify_step(&zeros(1), &AmplifyOptions::default(), 0).unwrap();
        assert_eq!(rep.mask, "1");
        assert_eq!(d2.rank(), 2);
        let t2 = (PI / 8.0).tan().powi(2);
        assert!(rep.error_after <= t2 / 2.0 + 1e-12);
        assert!((rep.error_after - rep.error_predicted).abs() < 1e-12);
    }

    #[test]
    fn six_qubit_step_halves() {
        let d = zeros(6);
        let before = relative_error_h(&d).unwrap();
        let (d2, rep) = amplify_step(&d, &AmplifyOptions::default(), 0).unwrap();
        assert!(rep.error_after <= before / 2.0 + 1e-12);
        assert!(d2.rank() <= 2);
    }

    #[test]
    fn amplify_rounds() {
        let d = zeros(8);
        let (same, reps) = amplify(&d, 0, &AmplifyOptions::default()).unwrap();
        assert_eq!(same, d);
        assert!(reps.is_empty());
        let before = relative_error_h(&d).unwrap();
        let (d2, _) = amplify(&d, 2, &AmplifyOptions::default()).unwrap();
        assert!(relative_error_h(&d2).unwrap() <= before / 4.0 + 1e-12);
        assert!(d2.rank() <= 4);
    }

    #[test]
    fn overlap_preserved() {
        let h = FloatState::h_tensor(4);
        let y = |d: &Decomposition| h.inner(&d.assemble_float()).unwrap();
        let mut d = zeros(4);
        for round in 0..3 {
            let (d2, _) = amplify_step(&d, &AmplifyOptions::default(), round).unwrap();
            assert!((y(&d2) - y(&d)).norm() < 1e-9);
            d = d2;
        }
    }

    #[test]
    fn sampled_mode() {
        let opts = AmplifyOptions {
            mode: MaskMode::Sample(8),
            seed: 5,
            ..Default::default()
        };
        let (a, ra) = amplify_step(&zeros(5), &opts, 0).unwrap();
        let (b, rb) = amplify_step(&zeros(5), &opts, 0).unwrap();
        assert_eq!(ra.mask, rb.mask);
        assert_eq!(a, b);
        assert!(!ra.exhaustive);
    }

    #[test]
    fn modes_and_masks_parse() {
        assert_eq!(
            "exhaustive".parse::<MaskMode>().unwrap(),
            MaskMode::Exhaustive
        );
        assert_eq!(
            "sample:12".parse::<MaskMode>().unwrap(),
            MaskMode::Sample(12)
        );
        assert!("sample:0".parse::<MaskMode>().is_err());
        assert_eq!(parse_mask("101").unwrap(), 5);
        assert_eq!(mask_string(5, 4), "0101");
    }

    #[test]
    fn budget_guard() {
        let opts = AmplifyOptions {
            term_budget: 16,
            ..Default::default()
        };
        assert!(matches!(
            amplify_step(&zeros(4), &opts, 0),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
