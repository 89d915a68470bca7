use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gint::{ExactScalar, GaussianInt};

use super::FloatState;

/// A dense state over `Q(ζ16)` with `2^n` amplitudes (big-endian basis labels).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactState {
    n: usize,
    amps: Vec<ExactScalar>,
}

impl ExactState {
    pub fn new(n: usize, amps: Vec<ExactScalar>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(n as u32)
            .ok_or(Error::UnsupportedQubitCount {
                n,
                reason: "too many qubits",
            })?;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(ExactState { n, amps })
    }

    pub fn zero(n: usize) -> Self {
        ExactState {
            n,
            amps: vec![ExactScalar::zero(); 1 << n],
        }
    }

    /// The computational basis state `|x⟩`.
    pub fn basis(n: usize, x: usize) -> Self {
        let mut s = ExactState::zero(n);
        s.amps[x] = ExactScalar::one();
        s
    }

    pub fn from_gaussian_ints(n: usize, amps: &[GaussianInt]) -> Result<Self> {
        ExactState::new(n, amps.iter().map(ExactScalar::from_gaussian_int).collect())
    }

    /// Builds a `Q(i)` state from `(re, im)` integer pairs.
    pub fn from_int_pairs(n: usize, amps: &[(i64, i64)]) -> Result<Self> {
        ExactState::new(
            n,
            amps.iter()
                .map(|&(re, im)| ExactScalar::gaussian_ratio(re, 1, im, 1))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[ExactScalar] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [ExactScalar] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<ExactScalar> {
        self.amps
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(ExactScalar::is_zero)
    }

    /// `true` iff every amplitude lies in `Q(i)`.
    pub fn is_gaussian(&self) -> bool {
        self.amps.iter().all(ExactScalar::is_gaussian)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.amps.iter().position(|a| !a.is_zero())
    }

    /// `(a⊗b)[x·2^{n_b} + y] = a[x]·b[y]`.
    pub fn tensor(&self, other: &ExactState) -> ExactState {
        let mut amps = Vec::with_capacity(self.len() * other.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(if a.is_zero() || b.is_zero() {
                    ExactScalar::zero()
                } else {
                    a * b
                });
            }
        }
        ExactState {
            n: self.n + other.n,
            amps,
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ExactState) -> Result<ExactScalar> {
        self.check_same_n(other)?;
        let mut acc = ExactScalar::zero();
        for (a, b) in self.amps.iter().zip(&other.amps) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc + a.conj() * b;
        }
        Ok(acc)
    }

    /// `⟨v|v⟩` as an exact scalar (real, but possibly irrational outside `Q(i)`).
    pub fn norm_sq(&self) -> ExactScalar {
        self.inner(self).expect("same dimension")
    }

    /// `⟨v|v⟩` as a rational when every amplitude lies in `Q(i)`.
    pub fn norm_sq_rational(&self) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for a in &self.amps {
            acc += a.gaussian_abs_sq()?;
        }
        Some(acc)
    }

    pub fn scale(&self, c: &ExactScalar) -> ExactState {
        ExactState {
            n: self.n,
            amps: self
                .amps
                .iter()
                .map(|a| if a.is_zero() { a.clone() } else { a * c })
                .collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> ExactState {
        ExactState {
            n: self.n,
            amps: self.amps.iter().map(|a| a.scale(q)).collect(),
        }
    }

    pub fn add(&self, other: &ExactState) -> Result<ExactState> {
        self.check_same_n(other)?;
        Ok(ExactState {
            n: self.n,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ExactState) -> Result<ExactState> {
        self.check_same_n(other)?;
        Ok(ExactState {
            n: self.n,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// The scalar `λ` with `other = λ·self`, if the two are proportional.
    pub fn proportionality(&self, other: &ExactState) -> Option<ExactScalar> {
        if self.n != other.n {
            return None;
        }
        let j = self.first_nonzero()?;
        if other.first_nonzero() != Some(j) {
            return None;
        }
        let lambda = other.amps[j].div(&self.amps[j]).ok()?;
        let matches = self
            .amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| &(a * &lambda) == b);
        matches.then_some(lambda)
    }

    pub fn to_float(&self) -> FloatState {
        FloatState::new_unchecked(
            self.n,
            self.amps
                .iter()
                .map(ExactScalar::to_complex)
                .collect::<Vec<Complex64>>(),
        )
    }

    fn check_same_n(&self, other: &ExactState) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(n: usize, x: usize) -> ExactState {
        ExactState::basis(n, x)
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(ket(1, 0).tensor(&ket(1, 0)), ket(2, 0));
        let plus = ket(1, 0).add(&ket(1, 1)).unwrap();
        let expect = ket(2, 1).add(&ket(2, 3)).unwrap();
        assert_eq!(plus.tensor(&ket(1, 1)), expect);
        let a = ket(1, 0).scale(&ExactScalar::from_int(2));
        let b = ket(1, 1).scale(&ExactScalar::from_int(3));
        assert_eq!(a.tensor(&b), ket(2, 1).scale(&ExactScalar::from_int(6)));
    }

    #[test]
    fn inner_examples() {
        assert!(ket(1, 0).inner(&ket(1, 0)).unwrap().is_one());
        assert!(ket(1, 0).inner(&ket(1, 1)).unwrap().is_zero());
        // |+~> = (|0>+|1>)/(1+i); <+~|0> = 1/(1-i)
        let inv = ExactScalar::gaussian_ratio(1, 1, 1, 1).inv().unwrap();
        let plus = ket(1, 0).add(&ket(1, 1)).unwrap().scale(&inv);
        let got = plus.inner(&ket(1, 0)).unwrap();
        let want = ExactScalar::gaussian_ratio(1, 1, -1, 1).inv().unwrap();
        assert_eq!(got, want);
        let f = got.to_complex();
        assert!((f - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!(ket(1, 0).inner(&ket(2, 0)).is_err());
    }

    #[test]
    fn proportionality_detects_scalars() {
        let v = ExactState::from_int_pairs(1, &[(1, 0), (2, 1)]).unwrap();
        let w = v.scale(&ExactScalar::zeta_pow(3));
        assert_eq!(v.proportionality(&w), Some(ExactScalar::zeta_pow(3)));
        let u = ExactState::from_int_pairs(1, &[(1, 0), (2, 0)]).unwrap();
        assert_eq!(v.proportionality(&u), None);
    }

    #[test]
    fn length_checked() {
        assert!(ExactState::new(2, vec![ExactScalar::one(); 3]).is_err());
    }
}
