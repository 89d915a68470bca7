use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gint::GaussianInt;
use crate::statevec::{rng_from_seed, Decomposition, ExactState, FloatState, TermState};

use super::dual::is_member;
use super::norm::combine;

/// Default number of Bernoulli rounding attempts.
pub const DEFAULT_ROUNDING_BUDGET: usize = 64;

#[derive(Clone, Debug)]
pub struct RoundingResult {
    pub coefficients: Vec<GaussianInt>,
    pub point: ExactState,
    /// `‖target − point‖₂`.
    pub dist: f64,
    /// `dist² ≤ 2k` was reached within the budget.
    pub certified: bool,
    pub attempts: usize,
}

/// Least-squares coefficients of `target` in the span of `gens`.
fn span_coefficients(gens: &[FloatState], target: &FloatState) -> Result<Vec<Complex64>> {
    let k = gens.len();
    let gram = DMatrix::from_fn(k, k, |i, j| gens[i].inner(&gens[j]).expect("same n"));
    let rhs = DVector::from_fn(k, |i, _| gens[i].inner(target).expect("same n"));
    let lu = gram.lu();
    if lu.determinant().norm() <= 1e-12 {
        return Err(Error::DependentFamily);
    }
    let c = lu.solve(&rhs).ok_or(Error::DependentFamily)?;
    let mut residual = target.clone();
    for (g, cj) in gens.iter().zip(c.iter()) {
        residual.add_scaled(-cj, g)?;
    }
    let res = residual.norm_sq().sqrt();
    if res > 1e-9 * target.norm_sq().sqrt().max(1.0) {
        return Err(Error::OutsideSpan { residual: res });
    }
    Ok(c.iter().copied().collect())
}

fn bernoulli_round<R: Rng>(x: f64, rng: &mut R) -> BigInt {
    let fl = x.floor();
    let up = rng.random::<f64>() < x - fl;
    BigInt::from(fl as i64 + up as i64)
}

/// Randomized rounding of `target` onto the `Z[i]`-span of `gens`.
///
/// Each real and imaginary coordinate rounds up with probability equal to its fractional
/// part. Returns the first sample with `dist² ≤ 2k`, or the best of `budget` samples
/// flagged as uncertified.
pub fn lattice_round(
    gens: &[ExactState],
    target: &FloatState,
    budget: usize,
    seed: u64,
) -> Result<RoundingResult> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("no generators".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.n() != target.n()) {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            found: g.len(),
        });
    }
    let k = gens.len();
    let floats: Vec<FloatState> = gens.iter().map(ExactState::to_float).collect();
    let c = span_coefficients(&floats, target)?;
    let mut rng = rng_from_seed(seed);
    let bound = 2.0 * k as f64;
    let mut best: Option<(f64, Vec<GaussianInt>, usize)> = None;
    for attempt in 1..=budget.max(1) {
        let z: Vec<GaussianInt> = c
            .iter()
            .map(|cj| {
                GaussianInt::new(
                    bernoulli_round(cj.re, &mut rng),
                    bernoulli_round(cj.im, &mut rng),
                )
            })
            .collect();
        let mut diff = target.clone();
        for (g, zj) in floats.iter().zip(&z) {
            diff.add_scaled(-gaussian_to_complex(zj), g)?;
        }
        let d2 = diff.norm_sq();
        if best.as_ref().is_none_or(|(b, _, _)| d2 < *b) {
            best = Some((d2, z, attempt));
        }
        if d2 <= bound {
            break;
        }
    }
    let (d2, coefficients, attempts) = best.expect("at least one attempt");
    Ok(RoundingResult {
        point: combine(gens, &coefficients)?,
        coefficients,
        dist: d2.sqrt(),
        certified: d2 <= bound,
        attempts,
    })
}

fn gaussian_to_complex(z: &GaussianInt) -> Complex64 {
    use num_traits::ToPrimitive;
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// A certified upper bound `|c|²` on `N_δ` with its lattice witness `u`.
#[derive(Clone, Debug)]
pub struct NDeltaWitness {
    /// `2k/δ₀²`.
    pub bound: f64,
    /// `√(2k)/δ₀`.
    pub c: f64,
    pub witness: ExactState,
    pub coefficients: Vec<GaussianInt>,
    /// `‖u/c − φ‖₂` with `φ` the normalized decomposition state.
    pub distance: f64,
    pub certified: bool,
    pub attempts: usize,
}

/// Rounds `c·φ` onto the lattice spanned by the decomposition's stabilizer terms,
/// `c = √(2k)/δ₀`, where `φ` is the normalized assembled decomposition.
pub fn n_delta_upper(
    decomp: &Decomposition,
    delta0: f64,
    budget: usize,
    seed: u64,
) -> Result<NDeltaWitness> {
    if !(delta0 > 0.0 && delta0.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "delta0 must be positive, got {delta0}"
        )));
    }
    let gens: Vec<ExactState> = decomp
        .terms()
        .iter()
        .map(|t| match &t.state {
            TermState::Exact(s) => Ok(s.clone()),
            TermState::Float(_) => Err(Error::InvalidInput(
                "witness terms must be exact stabilizer states".into(),
            )),
        })
        .collect::<Result<_>>()?;
    let k = gens.len();
    let phi = decomp.assemble_float().normalized()?;
    let c = (2.0 * k as f64).sqrt() / delta0;
    let target = phi.scale(Complex64::new(c, 0.0));
    let r = lattice_round(&gens, &target, budget, seed)?;
    if !r.certified {
        return Err(Error::BudgetExceeded(format!(
            "no rounding within distance sqrt(2k) after {} attempts (best {:.4})",
            r.attempts, r.dist
        )));
    }
    Ok(NDeltaWitness {
        bound: c * c,
        c,
        distance: r.dist / c,
        witness: r.point,
        coefficients: r.coefficients,
        certified: r.certified,
        attempts: r.attempts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessCheck {
    pub ok: bool,
    pub member: bool,
    pub distance: f64,
    /// `|c|²`, the certified bound on `N_δ(φ)`.
    pub value: f64,
}

/// `u ∈ BW_n` and `‖u/c − φ‖₂ ≤ δ + 1e-9`.
pub fn check_ndelta_witness(phi: &FloatState, u: &ExactState, c: f64, delta: f64) -> WitnessCheck {
    let member = is_member(u).member;
    let distance = if c == 0.0 || u.n() != phi.n() {
        f64::INFINITY
    } else {
        u.to_float()
            .scale(Complex64::new(1.0 / c, 0.0))
            .distance(phi)
            .unwrap_or(f64::INFINITY)
    };
    WitnessCheck {
        ok: member && distance <= delta + 1e-9,
        member,
        distance,
        value: c * c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gint::ExactScalar;
    use crate::statevec::{Target, Term};

    #[test]
    fn on_lattice_target_rounds_to_itself() {
        let gens = vec![ExactState::basis(1, 0), ExactState::basis(1, 1)];
        let t =
            FloatState::new(1, vec![Complex64::new(2.0, -1.0), Complex64::new(0.0, 3.0)]).unwrap();
        let r = lattice_round(&gens, &t, 64, 1).unwrap();
        assert!(r.dist < 1e-12 && r.certified);
        assert_eq!(
            r.coefficients,
            vec![GaussianInt::from_i64(2, -1), GaussianInt::from_i64(0, 3)]
        );
    }

    #[test]
    fn one_and_a_half() {
        let gens = vec![ExactState::basis(1, 0)];
        let t = FloatState::basis(1, 0).scale(Complex64::new(1.5, 0.0));
        for seed in 0..10 {
            let r = lattice_round(&gens, &t, 64, seed).unwrap();
            assert!((r.dist - 0.5).abs() < 1e-12);
            assert!(r.dist * r.dist <= 2.0);
        }
    }

    #[test]
    fn dependent_and_outside_span() {
        let g = ExactState::basis(1, 0);
        let t = FloatState::basis(1, 0);
        assert!(matches!(
            lattice_round(&[g.clone(), g.clone()], &t, 4, 0),
            Err(Error::DependentFamily)
        ));
        let t = FloatState::basis(1, 1);
        assert!(matches!(
            lattice_round(&[g], &t, 4, 0),
            Err(Error::OutsideSpan { .. })
        ));
    }

    fn h_decomposition() -> Decomposition {
        // |H> = cos(π/8)|0> + sin(π/8)|1>, exact in Q(ζ16) on two stabilizer terms
        Decomposition::new(
            1,
            vec![
                Term::exact(ExactScalar::cos_pi_8(), ExactState::basis(1, 0)),
                Term::exact(ExactScalar::sin_pi_8(), ExactState::basis(1, 1)),
            ],
            Target::HTensor,
        )
        .unwrap()
    }

    #[test]
    fn ndelta_for_h() {
        let w = n_delta_upper(&h_decomposition(), 0.5, 64, 9).unwrap();
        assert!((w.bound - 16.0).abs() < 1e-12);
        assert!((w.c - 4.0).abs() < 1e-12);
        let chk = check_ndelta_witness(&FloatState::h_tensor(1), &w.witness, w.c, 0.5);
        assert!(chk.ok, "{chk:?}");
        assert!((chk.value - 16.0).abs() < 1e-12);
    }

    #[test]
    fn ndelta_bound_monotone_in_delta() {
        let d = h_decomposition();
        let a = n_delta_upper(&d, 0.5, 64, 1).unwrap().bound;
        let b = n_delta_upper(&d, 0.8, 64, 1).unwrap().bound;
        assert!(b < a);
        assert!(n_delta_upper(&d, 0.0, 64, 1).is_err());
    }

    #[test]
    fn witness_check_examples() {
        let zero = FloatState::basis(1, 0);
        let r = check_ndelta_witness(&zero, &ExactState::basis(1, 0), 1.0, 0.0);
        assert!(r.ok && r.value == 1.0);
        let half = ExactState::basis(1, 0).scale(&ExactScalar::gaussian_ratio(1, 2, 0, 1));
        let r = check_ndelta_witness(&zero, &half, 0.5, 0.0);
        assert!(!r.ok && !r.member);
    }
}
