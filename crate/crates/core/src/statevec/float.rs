use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A dense double-precision state with `2^n` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatState {
    n: usize,
    amps: Vec<Complex64>,
}

/// `(cos(π/8), sin(π/8))`, the amplitudes of `|H⟩`.
pub fn h_amplitudes() -> (f64, f64) {
    ((PI / 8.0).cos(), (PI / 8.0).sin())
}

impl FloatState {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        Ok(FloatState { n, amps })
    }

    pub(crate) fn new_unchecked(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        FloatState { n, amps }
    }

    pub fn zero(n: usize) -> Self {
        FloatState {
            n,
            amps: vec![Complex64::new(0.0, 0.0); 1 << n],
        }
    }

    pub fn basis(n: usize, x: usize) -> Self {
        let mut s = FloatState::zero(n);
        s.amps[x] = Complex64::new(1.0, 0.0);
        s
    }

    /// `|H⟩^⊗n` with `|H⟩ = cos(π/8)|0⟩ + sin(π/8)|1⟩`.
    pub fn h_tensor(n: usize) -> Self {
        let (c, s) = h_amplitudes();
        let one =
            FloatState::new_unchecked(1, vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)]);
        (0..n).fold(FloatState::basis(0, 0), |acc, _| acc.tensor(&one))
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

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn tensor(&self, other: &FloatState) -> FloatState {
        let mut amps = Vec::with_capacity(self.len() * other.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        FloatState {
            n: self.n + other.n,
            amps,
        }
    }

    /// `⟨self|other⟩`, summed left to right.
    pub fn inner(&self, other: &FloatState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().fold(0.0, |acc, a| acc + a.norm_sqr())
    }

    pub fn normalized(&self) -> Result<FloatState> {
        let norm = self.norm_sq().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroInput("normalize"));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> FloatState {
        FloatState {
            n: self.n,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, c: Complex64, other: &FloatState) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn distance(&self, other: &FloatState) -> Result<f64> {
        let mut diff = self.clone();
        diff.add_scaled(Complex64::new(-1.0, 0.0), other)?;
        Ok(diff.norm_sq().sqrt())
    }

    /// Applies the Hadamard gate to `qubit` in place.
    pub fn apply_h(&mut self, qubit: usize) {
        let stride = 1usize << (self.n - 1 - qubit);
        let h = FRAC_1_SQRT_2;
        for base in (0..self.amps.len()).filter(|i| i & stride == 0) {
            let (a0, a1) = (self.amps[base], self.amps[base | stride]);
            self.amps[base] = (a0 + a1) * h;
            self.amps[base | stride] = (a0 - a1) * h;
        }
    }

    /// Applies `H` on every qubit whose bit is set in `mask` (bit `n-1-q` ↔ qubit `q`).
    pub fn apply_h_mask(&mut self, mask: u64) {
        for q in 0..self.n {
            if mask >> (self.n - 1 - q) & 1 == 1 {
                self.apply_h(q);
            }
        }
    }

    /// Coordinates in the product basis of `|H⟩ = cos(π/8)|0⟩ + sin(π/8)|1⟩` and
    /// `|H^⊥⟩ = sin(π/8)|0⟩ − cos(π/8)|1⟩`.
    ///
    /// The per-qubit map is a real symmetric orthogonal involution, so applying the
    /// transform twice returns the input.
    pub fn h_basis_transform(&self) -> FloatState {
        let (c, s) = h_amplitudes();
        let mut out = self.clone();
        let len = out.amps.len();
        for q in 0..self.n {
            let stride = 1usize << (self.n - 1 - q);
            for base in (0..len).filter(|i| i & stride == 0) {
                let (a0, a1) = (out.amps[base], out.amps[base | stride]);
                out.amps[base] = a0 * c + a1 * s;
                out.amps[base | stride] = a0 * s - a1 * c;
            }
        }
        out
    }

    /// Phase `λ` (with `|λ| ≈ 1`) such that `other ≈ λ·self` within `tol` per component.
    ///
    /// Phases are aligned on the first amplitude of `self` exceeding `1e-6` in magnitude.
    pub fn phase_relative_to(&self, other: &FloatState, tol: f64) -> Option<Complex64> {
        if self.n != other.n {
            return None;
        }
        let j = self.amps.iter().position(|a| a.norm() > 1e-6)?;
        let lambda = other.amps[j] / self.amps[j];
        if (lambda.norm() - 1.0).abs() > tol {
            return None;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * lambda - b).norm() <= tol)
            .then_some(lambda)
    }
}

/// Relative error `(⟨ψ'|ψ'⟩ − |⟨t|ψ'⟩|²) / |⟨t|ψ'⟩|²` of `psi_prime` against the
/// normalized `target`.
///
/// Equals `(1 − F)/F` when `psi_prime` is normalized, and is invariant under rescaling
/// of `psi_prime`.
pub fn relative_error(psi_prime: &FloatState, target: &FloatState) -> Result<f64> {
    let t_norm_sq = target.norm_sq();
    if t_norm_sq == 0.0 {
        return Err(Error::ZeroInput("relative_error target"));
    }
    let overlap = target.inner(psi_prime)?;
    let overlap_sq = overlap.norm_sqr() / t_norm_sq;
    let total = psi_prime.norm_sq();
    error_from_parts(total, overlap_sq)
}

/// Relative error from the squared norm and the squared overlap with the target.
fn error_from_parts(total: f64, overlap_sq: f64) -> Result<f64> {
    if overlap_sq <= 1e-30 * total || overlap_sq == 0.0 {
        return Err(Error::ZeroOverlap);
    }
    Ok(((total - overlap_sq) / overlap_sq).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn relative_error_examples() {
        let phi = FloatState::new(1, vec![c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        assert!(relative_error(&phi, &phi).unwrap().abs() < 1e-15);
        let h = FloatState::h_tensor(1);
        let e = relative_error(&FloatState::basis(1, 0), &h).unwrap();
        let t = (PI / 8.0).tan();
        assert!((e - t * t).abs() < 1e-12);
        assert!((e - 0.1715729).abs() < 1e-7);
        assert!(matches!(
            relative_error(&FloatState::basis(1, 1), &FloatState::basis(1, 0)),
            Err(Error::ZeroOverlap)
        ));
    }

    #[test]
    fn relative_error_scale_invariant() {
        let psi = FloatState::new(1, vec![c(0.3), Complex64::new(0.1, -0.7)]).unwrap();
        let h = FloatState::h_tensor(1);
        let a = relative_error(&psi, &h).unwrap();
        let b = relative_error(&psi.scale(Complex64::new(-2.5, 4.0)), &h).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn h_basis_examples() {
        let y = FloatState::h_tensor(1).h_basis_transform();
        assert!((y.amplitudes()[0] - c(1.0)).norm() < 1e-15);
        assert!(y.amplitudes()[1].norm() < 1e-15);
        let y0 = FloatState::basis(1, 0).h_basis_transform();
        // 2x2 oracle: rows <H| and <H_perp|
        let (cs, sn) = h_amplitudes();
        assert!((y0.amplitudes()[0].re - cs).abs() < 1e-15);
        assert!((y0.amplitudes()[1].re - sn).abs() < 1e-15);
        assert!((cs - 0.92388).abs() < 1e-5 && (sn - 0.38268).abs() < 1e-5);
    }

    #[test]
    fn h_basis_is_involution() {
        let psi = FloatState::new(
            2,
            vec![
                c(0.1),
                Complex64::new(0.2, -0.3),
                c(-0.5),
                Complex64::new(0.0, 0.7),
            ],
        )
        .unwrap();
        let back = psi.h_basis_transform().h_basis_transform();
        assert!(psi.distance(&back).unwrap() < 1e-12);
        assert!((psi.norm_sq() - psi.h_basis_transform().norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn hadamard_fixes_h_state() {
        let mut h = FloatState::h_tensor(3);
        let before = h.clone();
        h.apply_h_mask(0b101);
        assert!(h.distance(&before).unwrap() < 1e-15);
    }

    #[test]
    fn phase_alignment() {
        let psi = FloatState::new(1, vec![c(0.0), c(1.0)]).unwrap();
        let other = psi.scale(Complex64::new(0.0, 1.0));
        assert_eq!(
            psi.phase_relative_to(&other, 1e-9),
            Some(Complex64::new(0.0, 1.0))
        );
        assert_eq!(psi.phase_relative_to(&psi.scale(c(2.0)), 1e-9), None);
    }
}
