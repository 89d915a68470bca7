use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cliffstab::{apply_gate, Gate};
use crate::error::{Error, Result};
use crate::gint::{format_rational, ExactScalar, GaussianInt};
use crate::statevec::ExactState;

use super::dual::{member_dual_ints, reduce_proportional_minimal};

/// The shortest lattice vector proportional to the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormResult {
    /// `‖minimal_vector‖²`.
    pub value: BigRational,
    pub minimal_vector: ExactState,
    /// `scaling · input = minimal_vector`.
    pub scaling: ExactScalar,
}

impl NormResult {
    /// `2^n · value`, always an integer.
    pub fn scaled_integer(&self) -> BigRational {
        &self.value * BigRational::from_integer(BigInt::one() << self.minimal_vector.n())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BwNorm {
    Finite(NormResult),
    /// Some amplitude ratio lies outside `Q(i)`.
    Infinite,
}

impl BwNorm {
    pub fn value(&self) -> Option<&BigRational> {
        match self {
            BwNorm::Finite(r) => Some(&r.value),
            BwNorm::Infinite => None,
        }
    }

    pub fn finite(self) -> Option<NormResult> {
        match self {
            BwNorm::Finite(r) => Some(r),
            BwNorm::Infinite => None,
        }
    }

    pub fn to_display(&self) -> String {
        match self {
            BwNorm::Finite(r) => format_rational(&r.value),
            BwNorm::Infinite => "infinite".into(),
        }
    }
}

/// `N(v) = min ‖c·v‖²` over scalars `c` with `c·v ∈ BW_n`.
pub fn bw_norm(v: &ExactState) -> Result<BwNorm> {
    let j = v.first_nonzero().ok_or(Error::ZeroInput("bw_norm"))?;
    let a_inv = v.amplitudes()[j].inv()?;
    let w = v.scale(&a_inv);
    if !w.is_gaussian() {
        return Ok(BwNorm::Infinite);
    }
    let lcm = w
        .amplitudes()
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(&a.denominator_lcm()));
    let lcm_q = BigRational::from_integer(lcm);
    let w = w.scale_rational(&lcm_q);
    // every amplitude is now in Z[i] ⊂ BW_n
    let (minimal, g) = reduce_proportional_minimal(&w)?;
    let g_inv = ExactScalar::from_gaussian_int(&g).inv()?;
    let scaling = &(&a_inv * &ExactScalar::from_rational(lcm_q)) * &g_inv;
    let value = minimal
        .norm_sq_rational()
        .expect("Q(i) amplitudes have rational squared norm");
    Ok(BwNorm::Finite(NormResult {
        value,
        minimal_vector: minimal,
        scaling,
    }))
}

/// `v_b = (1+i)·(⟨b|_q ⊗ I) v` for `b = 0, 1`; either branch may be zero.
pub fn measurement_split(v: &ExactState, qubit: usize) -> Result<(ExactState, ExactState)> {
    let n = v.n();
    if n == 0 {
        return Err(Error::UnsupportedQubitCount {
            n,
            reason: "measurement needs at least one qubit",
        });
    }
    if qubit >= n {
        return Err(Error::QubitOutOfRange { qubit, n });
    }
    member_dual_ints(v)?;
    let one_plus_i = ExactScalar::gaussian_ratio(1, 1, 1, 1);
    let m = 1usize << (n - 1 - qubit);
    let low = m - 1;
    let branch = |b: usize| -> Result<ExactState> {
        let amps = (0..1usize << (n - 1))
            .map(|y| {
                let x = ((y & !low) << 1) | (b * m) | (y & low);
                let a = &v.amplitudes()[x];
                if a.is_zero() {
                    a.clone()
                } else {
                    a * &one_plus_i
                }
            })
            .collect();
        let out = ExactState::new(n - 1, amps)?;
        member_dual_ints(&out)?;
        Ok(out)
    };
    Ok((branch(0)?, branch(1)?))
}

/// Single-qubit Pauli measurement basis for the monotonicity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PauliBasis {
    Z,
    X,
    Y,
}

impl PauliBasis {
    pub const ALL: [PauliBasis; 3] = [PauliBasis::Z, PauliBasis::X, PauliBasis::Y];

    /// Clifford gates mapping this basis onto the computational one.
    pub fn rotation(self, qubit: usize) -> Vec<Gate> {
        match self {
            PauliBasis::Z => vec![],
            PauliBasis::X => vec![Gate::E(qubit)],
            PauliBasis::Y => vec![Gate::Sdg(qubit), Gate::E(qubit)],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementCheck {
    pub qubit: usize,
    pub basis: PauliBasis,
    /// `N(v_0)`, `N(v_1)`; `None` for a zero branch.
    pub branch_norms: [Option<String>; 2],
    pub uniform: bool,
    /// `N(v)/N(v_b)` integral for both branches; only evaluated in the uniform case.
    pub divisibility: Option<bool>,
    /// `N(v_0) + N(v_1) ≤ 2·N(v)`.
    pub inequality: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotoneReport {
    pub ok: bool,
    pub norm: String,
    pub checks: Vec<MeasurementCheck>,
}

/// Checks divisibility (uniform outcomes) and `N(v_0)+N(v_1) ≤ 2N(v)` for every qubit
/// in the Z, X and Y bases.
pub fn check_measurement_monotone(v: &ExactState) -> Result<MonotoneReport> {
    let BwNorm::Finite(base) = bw_norm(v)? else {
        return Err(Error::InvalidInput(
            "measurement monotonicity needs a finite norm".into(),
        ));
    };
    let mut checks = Vec::new();
    for qubit in 0..v.n() {
        for basis in PauliBasis::ALL {
            let mut w = base.minimal_vector.clone();
            for g in basis.rotation(qubit) {
                w = apply_gate(&w, &g)?;
            }
            checks.push(check_split(&w, qubit, basis, &base.value)?);
        }
    }
    Ok(MonotoneReport {
        ok: checks
            .iter()
            .all(|c| c.inequality && c.divisibility.unwrap_or(true)),
        norm: format_rational(&base.value),
        checks,
    })
}

fn check_split(
    w: &ExactState,
    qubit: usize,
    basis: PauliBasis,
    norm: &BigRational,
) -> Result<MeasurementCheck> {
    let (w0, w1) = measurement_split(w, qubit)?;
    let mut norms: [Option<BigRational>; 2] = [None, None];
    for (slot, b) in norms.iter_mut().zip([&w0, &w1]) {
        if !b.is_zero() {
            *slot = bw_norm(b)?.value().cloned();
        }
    }
    let uniform = !w0.is_zero() && w0.norm_sq_rational() == w1.norm_sq_rational();
    let divisibility = uniform.then(|| {
        norms.iter().flatten().all(|nb| {
            let q = norm / nb;
            q.is_integer() && q.is_positive()
        })
    });
    let sum: BigRational = norms
        .iter()
        .flatten()
        .fold(BigRational::zero(), |acc, x| acc + x);
    let inequality = sum <= norm * BigRational::from_integer(2.into());
    Ok(MeasurementCheck {
        qubit,
        basis,
        branch_norms: norms.map(|o| o.as_ref().map(format_rational)),
        uniform,
        divisibility,
        inequality,
    })
}

/// Exact Gaussian-integer combination `Σ z_j g_j`.
pub(crate) fn combine(gens: &[ExactState], coeffs: &[GaussianInt]) -> Result<ExactState> {
    let n = gens.first().map(ExactState::n).unwrap_or(0);
    let mut acc = ExactState::zero(n);
    for (g, z) in gens.iter().zip(coeffs) {
        if !z.is_zero() {
            acc = acc.add(&g.scale(&ExactScalar::from_gaussian_int(z)))?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::cliffstab::cs_state;

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn pairs(n: usize, p: &[(i64, i64)]) -> ExactState {
        ExactState::from_int_pairs(n, p).unwrap()
    }

    fn norm_of(v: &ExactState) -> BigRational {
        bw_norm(v).unwrap().finite().unwrap().value
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_of(&ExactState::basis(1, 0)), rat(1));
        assert_eq!(norm_of(&cs_state()), rat(2));
        assert_eq!(norm_of(&pairs(1, &[(1, 0), (2, 0)])), rat(5));
        let h = ExactState::new(1, vec![ExactScalar::cos_pi_8(), ExactScalar::sin_pi_8()]).unwrap();
        assert_eq!(bw_norm(&h).unwrap(), BwNorm::Infinite);
        assert!(bw_norm(&ExactState::zero(2)).is_err());
    }

    #[test]
    fn norm_result_consistent() {
        let v = pairs(2, &[(3, 1), (0, 0), (-2, 4), (1, 1)]).scale(&ExactScalar::zeta_pow(3));
        let r = bw_norm(&v).unwrap().finite().unwrap();
        assert_eq!(v.scale(&r.scaling), r.minimal_vector);
        assert!(r.scaled_integer().is_integer());
        let ints = member_dual_ints(&r.minimal_vector).unwrap();
        assert!(crate::gint::gcd_many(&ints).unwrap().is_unit());
    }

    #[test]
    fn split_examples() {
        let inv = ExactScalar::gaussian_ratio(1, 2, -1, 2);
        let v = pairs(2, &[(1, 0), (1, 0), (1, 0), (0, 1)]).scale(&inv);
        // splitting on the first qubit (label bit x1)
        let (v0, v1) = measurement_split(&v, 0).unwrap();
        assert_eq!(v0, pairs(1, &[(1, 0), (1, 0)]));
        assert_eq!(v1, pairs(1, &[(1, 0), (0, 1)]));
        let plus = pairs(1, &[(1, 0), (1, 0)]).scale(&inv);
        let (a, b) = measurement_split(&plus, 0).unwrap();
        assert_eq!((a, b), (ExactState::basis(0, 0), ExactState::basis(0, 0)));
        let w = pairs(1, &[(2, 1), (1, 1)]);
        let (a, b) = measurement_split(&ExactState::basis(1, 0).tensor(&w), 0).unwrap();
        assert_eq!(a, w.scale(&ExactScalar::gaussian_ratio(1, 1, 1, 1)));
        assert!(b.is_zero());
        let half = ExactState::basis(1, 0).scale(&ExactScalar::gaussian_ratio(1, 2, 0, 1));
        assert!(matches!(
            measurement_split(&half, 0),
            Err(Error::NotMember { .. })
        ));
    }

    #[test]
    fn monotone_examples() {
        let r = check_measurement_monotone(&cs_state()).unwrap();
        assert!(r.ok);
        let z0 = r
            .checks
            .iter()
            .find(|c| c.basis == PauliBasis::Z && c.qubit == 0)
            .unwrap();
        assert!(z0.uniform);
        assert_eq!(
            z0.branch_norms,
            [Some("1/1".to_string()), Some("1/1".to_string())]
        );
        assert_eq!(z0.divisibility, Some(true));
        let r = check_measurement_monotone(&ExactState::basis(2, 1)).unwrap();
        assert!(r.ok);
        let h = ExactState::new(1, vec![ExactScalar::cos_pi_8(), ExactScalar::sin_pi_8()]).unwrap();
        assert!(check_measurement_monotone(&h).is_err());
    }
}
