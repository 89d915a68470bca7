use std::f64::consts::E;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::cliffstab::StabilizerSet;
use crate::error::{Error, Result};
use crate::gint::ExactScalar;
use crate::statevec::{Decomposition, ExactState, FloatState, TermState};

use super::ring::rank;

/// `√e·(2k)^{(2k+1)/2}`.
pub fn extent_bound(k: usize) -> f64 {
    let two_k = 2.0 * k as f64;
    E.sqrt() * two_k.powf((two_k + 1.0) / 2.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct Fidelity {
    pub value: f64,
    pub argmax: usize,
}

/// `max_s |⟨s|ψ⟩|²` over the enumerated set, with `ψ` normalized internally.
pub fn stab_fidelity(psi: &FloatState, stabs: &StabilizerSet) -> Result<Fidelity> {
    if psi.n() != stabs.n() {
        return Err(Error::DimensionMismatch {
            expected: 1 << stabs.n(),
            found: psi.len(),
        });
    }
    let psi = psi.normalized()?;
    let mut best = Fidelity {
        value: -1.0,
        argmax: 0,
    };
    for (i, s) in stabs.states().iter().enumerate() {
        let f = s.to_float().inner(&psi)?.norm_sqr();
        if f > best.value {
            best = Fidelity {
                value: f,
                argmax: i,
            };
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtentReport {
    pub k: usize,
    pub l1: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Compares `‖c‖₁` of a decomposition with independent stabilizer terms against the
/// extent bound.
pub fn extent_check(decomp: &Decomposition) -> Result<ExtentReport> {
    let states: Vec<&TermState> = decomp.terms().iter().map(|t| &t.state).collect();
    check_independent(&states)?;
    let k = decomp.rank();
    let l1 = decomp
        .terms()
        .iter()
        .map(|t| t.coeff.to_complex().norm())
        .sum();
    let bound = extent_bound(k);
    Ok(ExtentReport {
        k,
        l1,
        bound,
        ok: l1 <= bound + 1e-9,
    })
}

fn check_independent(states: &[&TermState]) -> Result<()> {
    let exact: Option<Vec<&ExactState>> = states.iter().map(|s| s.as_exact()).collect();
    if let Some(exact) = exact {
        let cols: Vec<Vec<ExactScalar>> = exact.iter().map(|s| s.amplitudes().to_vec()).collect();
        let refs: Vec<&[ExactScalar]> = cols.iter().map(Vec::as_slice).collect();
        if rank(&refs) != Some(states.len()) {
            return Err(Error::DependentFamily);
        }
        return Ok(());
    }
    let floats: Vec<FloatState> = states.iter().map(|s| s.to_float()).collect();
    let k = floats.len();
    let gram = DMatrix::from_fn(k, k, |i, j| floats[i].inner(&floats[j]).expect("same n"));
    if gram.determinant().norm() <= 1e-12 {
        return Err(Error::DependentFamily);
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub k: usize,
    /// Real `2k×2k` Gram matrix of `{s_j, i·s_j}`, row-major.
    pub gram: Vec<Vec<f64>>,
    pub det: f64,
    pub lambda_min: f64,
    pub fundamental_volume: f64,
    /// `det ≥ (2k)^{−2k}`.
    pub minkowski_ok: bool,
    /// `det ≤ e·λ_min`.
    pub claim_ok: bool,
}

/// Gram determinant and smallest eigenvalue of the real embedding of `states`.
pub fn gram_analysis(states: &[ExactState]) -> Result<GramReport> {
    if states.is_empty() {
        return Err(Error::InvalidInput("no states".into()));
    }
    let k = states.len();
    let i = Complex64::new(0.0, 1.0);
    let vecs: Vec<FloatState> = states
        .iter()
        .flat_map(|s| {
            let f = s.to_float();
            let fi = f.scale(i);
            [f, fi]
        })
        .collect();
    if let Some(v) = vecs.iter().find(|v| v.n() != vecs[0].n()) {
        return Err(Error::DimensionMismatch {
            expected: vecs[0].len(),
            found: v.len(),
        });
    }
    let m = 2 * k;
    let g = DMatrix::from_fn(m, m, |a, b| vecs[a].inner(&vecs[b]).expect("same n").re);
    let det = g.determinant();
    if det <= 1e-12 {
        return Err(Error::DependentFamily);
    }
    let lambda_min = SymmetricEigen::new(g.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let two_k = m as f64;
    Ok(GramReport {
        k,
        gram: (0..m)
            .map(|a| (0..m).map(|b| g[(a, b)]).collect())
            .collect(),
        det,
        lambda_min,
        fundamental_volume: det.sqrt(),
        minkowski_ok: det >= two_k.powf(-two_k) - 1e-12,
        claim_ok: det <= E * lambda_min + 1e-9,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FidelityRankReport {
    pub k: usize,
    pub fidelity: f64,
    /// `|⟨φ|ψ⟩| / √F(φ)`.
    pub lhs: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Checks `|⟨φ|ψ⟩|/√F(φ) ≤ √e·(2k)^{(2k+1)/2}` for `ψ` the normalized rank-`k` decomposition.
pub fn fidelity_rank_check(
    phi: &FloatState,
    decomp: &Decomposition,
    stabs: &StabilizerSet,
) -> Result<FidelityRankReport> {
    let f = stab_fidelity(phi, stabs)?.value;
    if f <= 0.0 {
        return Err(Error::ZeroOverlap);
    }
    let psi = decomp.assemble_float().normalized()?;
    let overlap = phi.normalized()?.inner(&psi)?.norm();
    let k = decomp.rank();
    let lhs = overlap / f.sqrt();
    let bound = extent_bound(k);
    Ok(FidelityRankReport {
        k,
        fidelity: f,
        lhs,
        bound,
        ok: lhs <= bound + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliffstab::enumerate_stabilizers;
    use crate::statevec::{Target, Term};
    use std::f64::consts::PI;

    #[test]
    fn extent_bound_values() {
        assert!((extent_bound(1) - E.sqrt() * 2f64.powf(1.5)).abs() < 1e-12);
        assert!((extent_bound(1) - 4.6630).abs() < 1e-3);
        // √e · 4^{5/2} = 32√e
        assert!((extent_bound(2) - 32.0 * E.sqrt()).abs() < 1e-9);
        assert!((extent_bound(2) - 52.7587).abs() < 1e-3);
    }

    #[test]
    fn fidelity_examples() {
        let s1 = enumerate_stabilizers(1).unwrap();
        let s2 = enumerate_stabilizers(2).unwrap();
        let c2 = (PI / 8.0).cos().powi(2);
        let f = stab_fidelity(&FloatState::h_tensor(1), &s1).unwrap().value;
        assert!((f - c2).abs() < 1e-12 && (f - 0.853553).abs() < 1e-6);
        let f = stab_fidelity(&FloatState::h_tensor(2), &s2).unwrap().value;
        assert!((f - c2 * c2).abs() < 1e-12 && (f - 0.728553).abs() < 1e-6);
        let f = stab_fidelity(&s2.states()[17].to_float(), &s2).unwrap();
        assert!((f.value - 1.0).abs() < 1e-12);
        assert_eq!(f.argmax, 17);
    }

    fn h_over_zero_plus() -> Decomposition {
        // |H> = (cos − sin)|0> + √2 sin |+>, |+> = (|0>+|1>)/√2 taken as E|0> up to phase
        let (c, s) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let plus = FloatState::new(1, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)])
            .unwrap()
            .normalized()
            .unwrap();
        Decomposition::new(
            1,
            vec![
                Term::float(Complex64::new(c - s, 0.0), FloatState::basis(1, 0)),
                Term::float(Complex64::new(2f64.sqrt() * s, 0.0), plus),
            ],
            Target::HTensor,
        )
        .unwrap()
    }

    #[test]
    fn extent_examples() {
        let d = Decomposition::new(
            1,
            vec![Term::exact(ExactScalar::one(), ExactState::basis(1, 0))],
            Target::HTensor,
        )
        .unwrap();
        let r = extent_check(&d).unwrap();
        assert!(r.ok && (r.l1 - 1.0).abs() < 1e-15);
        let d = h_over_zero_plus();
        assert!(d.relative_error().unwrap() < 1e-14);
        let r = extent_check(&d).unwrap();
        assert!((r.l1 - 1.0824).abs() < 1e-4, "{}", r.l1);
        assert!(r.ok);
    }

    #[test]
    fn gram_examples() {
        let r = gram_analysis(&[ExactState::basis(1, 0)]).unwrap();
        assert!((r.det - 1.0).abs() < 1e-12 && (r.lambda_min - 1.0).abs() < 1e-12);
        assert!(r.minkowski_ok && r.claim_ok);
        let r = gram_analysis(&[ExactState::basis(1, 0), ExactState::basis(1, 1)]).unwrap();
        assert_eq!(r.gram.len(), 4);
        assert!((r.det - 1.0).abs() < 1e-12 && r.minkowski_ok && r.claim_ok);
        assert!((r.fundamental_volume.powi(2) - r.det).abs() < 1e-12);
        let s = ExactState::basis(1, 0);
        assert!(matches!(
            gram_analysis(&[s.clone(), s.scale(&ExactScalar::i())]),
            Err(Error::DependentFamily)
        ));
    }

    #[test]
    fn fidelity_rank_examples() {
        let s2 = enumerate_stabilizers(2).unwrap();
        let st = s2.states()[5].clone();
        let d = Decomposition::new(
            2,
            vec![Term::exact(ExactScalar::one(), st.clone())],
            Target::HTensor,
        )
        .unwrap();
        let r = fidelity_rank_check(&st.to_float(), &d, &s2).unwrap();
        assert!(r.ok && (r.lhs - 1.0).abs() < 1e-12);

        let h = h_over_zero_plus();
        let hh = h.tensor(&h).unwrap();
        let r = fidelity_rank_check(&FloatState::h_tensor(2), &hh, &s2).unwrap();
        let expect = 1.0 / (PI / 8.0).cos().powi(2);
        assert!(
            (r.lhs - expect).abs() < 1e-9 && (r.lhs - 1.1716).abs() < 1e-3,
            "{}",
            r.lhs
        );
        assert!(r.ok);
    }
}
