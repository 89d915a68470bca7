use serde::Serialize;

use crate::error::{Error, Result};
use crate::gint::{gcd_many, ExactScalar, GaussianInt};
use crate::statevec::ExactState;

/// `d_x = (1−i)^n ⟨x̃|v⟩`; `v ∈ BW_n` iff every entry is a Gaussian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCoords {
    n: usize,
    entries: Vec<ExactScalar>,
}

impl DualCoords {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    /// First `x` whose entry is not in `Z[i]`.
    pub fn first_violation(&self) -> Option<(usize, &ExactScalar)> {
        self.entries
            .iter()
            .enumerate()
            .find(|(_, d)| !d.is_gaussian_integer())
    }

    pub fn is_integral(&self) -> bool {
        self.first_violation().is_none()
    }

    pub fn to_gaussian_ints(&self) -> Option<Vec<GaussianInt>> {
        self.entries
            .iter()
            .map(ExactScalar::to_gaussian_int)
            .collect()
    }
}

/// Per-qubit passes of `[[1−i, 0], [1, 1]]`, `O(n·2^n)` exact operations.
pub fn dual_transform(v: &ExactState) -> Result<DualCoords> {
    if let Some(index) = v.amplitudes().iter().position(|a| !a.is_gaussian()) {
        return Err(Error::NotLatticeRepresentable { index });
    }
    let n = v.n();
    let one_minus_i = ExactScalar::gaussian_ratio(1, 1, -1, 1);
    let mut d = v.amplitudes().to_vec();
    for q in 0..n {
        let m = 1usize << (n - 1 - q);
        for x in (0..d.len()).filter(|x| x & m == 0) {
            let a1 = &d[x] + &d[x | m];
            let a0 = if d[x].is_zero() {
                ExactScalar::zero()
            } else {
                &d[x] * &one_minus_i
            };
            d[x] = a0;
            d[x | m] = a1;
        }
    }
    Ok(DualCoords { n, entries: d })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    /// First violating basis label and its dual entry.
    pub violation: Option<(usize, String)>,
    pub reason: Option<String>,
}

pub fn is_member(v: &ExactState) -> MembershipReport {
    match dual_transform(v) {
        Err(e) => MembershipReport {
            member: false,
            violation: None,
            reason: Some(e.to_string()),
        },
        Ok(d) => match d.first_violation() {
            None => MembershipReport {
                member: true,
                violation: None,
                reason: None,
            },
            Some((x, entry)) => MembershipReport {
                member: false,
                violation: Some((x, entry.to_string())),
                reason: Some("dual coordinate is not a Gaussian integer".into()),
            },
        },
    }
}

pub(crate) fn member_dual_ints(v: &ExactState) -> Result<Vec<GaussianInt>> {
    let d = dual_transform(v)?;
    if let Some((index, entry)) = d.first_violation() {
        return Err(Error::NotMember {
            index,
            entry: entry.to_string(),
        });
    }
    Ok(d.to_gaussian_ints().expect("integrality checked"))
}

/// Divides `v` by the gcd `g` of its dual coordinates; returns `(v/g, g)`.
pub fn reduce_proportional_minimal(v: &ExactState) -> Result<(ExactState, GaussianInt)> {
    if v.is_zero() {
        return Err(Error::ZeroInput("reduce_proportional_minimal"));
    }
    let ints = member_dual_ints(v)?;
    let g = gcd_many(&ints)?;
    if g.is_unit() && g == GaussianInt::one() {
        return Ok((v.clone(), g));
    }
    let inv = ExactScalar::from_gaussian_int(&g).inv()?;
    Ok((v.scale(&inv), g))
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::gint::gcd;

    fn rat(x: i64) -> num_rational::BigRational {
        num_rational::BigRational::from_integer(x.into())
    }

    fn pairs(n: usize, p: &[(i64, i64)]) -> ExactState {
        ExactState::from_int_pairs(n, p).unwrap()
    }

    /// Dense oracle: `(1−i)^n ⟨x̃|v⟩` with `⟨x̃| = ⊗ (⟨0| or (⟨0|+⟨1|)/(1−i))`.
    fn dense_dual(v: &ExactState) -> Vec<ExactScalar> {
        let n = v.n();
        let one_minus_i = ExactScalar::gaussian_ratio(1, 1, -1, 1);
        (0..1usize << n)
            .map(|x| {
                let mut acc = ExactScalar::zero();
                for (y, a) in v.amplitudes().iter().enumerate() {
                    // factor per qubit: x_q=0 needs y_q=0 with weight (1−i); x_q=1 gives weight 1
                    let mut w = ExactScalar::one();
                    for q in 0..n {
                        let m = 1 << (n - 1 - q);
                        if x & m == 0 {
                            if y & m != 0 {
                                w = ExactScalar::zero();
                                break;
                            }
                            w = &w * &one_minus_i;
                        }
                    }
                    acc = &acc + &(&w * a);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn dual_examples() {
        let d = dual_transform(&pairs(1, &[(1, 0), (2, 0)])).unwrap();
        assert_eq!(
            d.entries(),
            &[
                ExactScalar::gaussian_ratio(1, 1, -1, 1),
                ExactScalar::from_int(3)
            ]
        );
        let d = dual_transform(&pairs(1, &[(1, 0), (0, 0)])).unwrap();
        assert_eq!(
            d.entries(),
            &[ExactScalar::gaussian_ratio(1, 1, -1, 1), ExactScalar::one()]
        );
        let cs = pairs(2, &[(1, 0), (1, 0), (1, 0), (0, 1)])
            .scale(&ExactScalar::gaussian_ratio(1, 1, 1, 1).inv().unwrap());
        assert!(dual_transform(&cs).unwrap().is_integral());
    }

    #[test]
    fn dual_matches_dense_oracle() {
        let mut rng = crate::statevec::rng_from_seed(21);
        for n in 1..=3 {
            let v = crate::statevec::random_exact_state(n, &mut rng);
            assert_eq!(
                dual_transform(&v).unwrap().entries(),
                dense_dual(&v).as_slice()
            );
        }
    }

    #[test]
    fn membership_examples() {
        assert!(is_member(&ExactState::basis(3, 0)).member);
        let half = ExactState::basis(1, 0).scale(&ExactScalar::gaussian_ratio(1, 2, 0, 1));
        let r = is_member(&half);
        assert!(!r.member);
        let (x, entry) = r.violation.unwrap();
        assert_eq!(x, 0);
        assert_eq!(entry, ExactScalar::gaussian_ratio(1, 2, -1, 2).to_string());
        let h = ExactState::new(1, vec![ExactScalar::cos_pi_8(), ExactScalar::sin_pi_8()]).unwrap();
        let r = is_member(&h);
        assert!(!r.member && r.reason.is_some());
    }

    #[test]
    fn reduce_examples() {
        let (vp, g) = reduce_proportional_minimal(&pairs(1, &[(1, 0), (1, 0)])).unwrap();
        assert_eq!(g, GaussianInt::from_i64(1, -1).canonical());
        assert_eq!(vp.norm_sq_rational().unwrap(), rat(1));
        let w = pairs(1, &[(1, 0), (2, 0)]);
        let (vp, g) = reduce_proportional_minimal(&w).unwrap();
        assert!(g.is_unit());
        assert_eq!(vp, w);
        let (vp, g) = reduce_proportional_minimal(&w.scale(&ExactScalar::from_int(2))).unwrap();
        assert_eq!(g, GaussianInt::from_i64(2, 0));
        assert_eq!(vp, w);
        // oracle: gcd of the dual entries computed pairwise
        let d = dual_transform(&pairs(1, &[(1, 0), (1, 0)]))
            .unwrap()
            .to_gaussian_ints()
            .unwrap();
        assert_eq!(gcd(&d[0], &d[1]).unwrap(), GaussianInt::from_i64(1, 1));
        assert!(reduce_proportional_minimal(&ExactState::zero(1)).is_err());
    }
}
