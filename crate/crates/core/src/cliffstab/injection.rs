use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bwlattice::{bw_norm, BwNorm};
use crate::error::{Error, Result};
use crate::gint::{format_rational, ExactScalar};
use crate::statevec::ExactState;

use super::gates::{apply_gate, run_circuit, Circuit, Gate};

/// `|CS⟩ = ½(|00⟩ + |01⟩ + |10⟩ + i|11⟩)`.
pub fn cs_state() -> ExactState {
    let half = ExactScalar::gaussian_ratio(1, 2, 0, 1);
    ExactState::new(
        2,
        vec![
            half.clone(),
            half.clone(),
            half.clone(),
            ExactScalar::gaussian_ratio(0, 1, 1, 2),
        ],
    )
    .expect("four amplitudes")
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectionReport {
    pub ok: bool,
    pub proportional: bool,
    #[serde(serialize_with = "ser_rational")]
    pub probability: BigRational,
    /// Data-qubit state after post-selecting the ancillas on `|00⟩` (unnormalized).
    #[serde(skip)]
    pub output: ExactState,
}

fn ser_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// Teleports CS onto `psi` with `|CS⟩` on two ancillas: CX data→ancilla on each pair,
/// post-select the ancillas on `|00⟩`, no correction.
pub fn cs_injection_check(psi: &ExactState) -> Result<InjectionReport> {
    if psi.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: psi.len(),
        });
    }
    if psi.is_zero() {
        return Err(Error::ZeroInput("cs_injection_check"));
    }
    // qubits: 0, 1 data; 2, 3 ancilla
    let mut v = psi.tensor(&cs_state());
    for g in [
        Gate::Cx {
            control: 0,
            target: 2,
        },
        Gate::Cx {
            control: 1,
            target: 3,
        },
    ] {
        v = apply_gate(&v, &g)?;
    }
    let amps = v.amplitudes();
    let output = ExactState::new(2, (0..4).map(|x| amps[x << 2].clone()).collect())?;
    let before = norm_sq(psi)?;
    let after = if output.is_zero() {
        BigRational::zero()
    } else {
        norm_sq(&output)?
    };
    let probability = after / before;
    let expected = apply_gate(psi, &Gate::Cs(0, 1))?;
    let proportional = expected.proportionality(&output).is_some();
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    Ok(InjectionReport {
        ok: proportional && probability == quarter,
        proportional,
        probability,
        output,
    })
}

fn norm_sq(v: &ExactState) -> Result<BigRational> {
    v.norm_sq()
        .to_rational()
        .ok_or_else(|| Error::InvalidInput("squared norm is not rational".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct CsCountReport {
    pub ok: bool,
    pub cs_count: usize,
    pub has_measurements: bool,
    /// `N(final)` as `p/q`.
    pub norm: String,
    /// `2^m / N(final)` when the circuit has no measurements.
    pub quotient: Option<String>,
}

/// Runs `c` from `|0^n⟩` and checks `N(final) | 2^m` (or `N(final) ≤ 2^m` with measurements).
pub fn cs_count_check(c: &Circuit) -> Result<CsCountReport> {
    let (fin, _) = run_circuit(c, &ExactState::basis(c.n, 0))?;
    let norm = match bw_norm(&fin)? {
        BwNorm::Finite(r) => r.value,
        BwNorm::Infinite => {
            return Err(Error::InvalidInput("final state has infinite norm".into()));
        }
    };
    let m = c.cs_count();
    let bound = BigRational::from_integer(BigInt::one() << m);
    let has_measurements = c.has_measurements();
    let (ok, quotient) = if has_measurements {
        (norm <= bound, None)
    } else {
        let q = &bound / &norm;
        (q.is_integer() && q.is_positive(), Some(format_rational(&q)))
    };
    Ok(CsCountReport {
        ok,
        cs_count: m,
        has_measurements,
        norm: format_rational(&norm),
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliffstab::{random_cs_circuit, Basis, Op};
    use crate::statevec::rng_from_seed;

    fn ket(x: usize) -> ExactState {
        ExactState::basis(2, x)
    }

    #[test]
    fn injection_examples() {
        let r = cs_injection_check(&ket(0)).unwrap();
        assert!(r.ok);
        assert_eq!(r.probability, BigRational::new(1.into(), 4.into()));
        let r = cs_injection_check(&ket(3)).unwrap();
        assert!(r.ok);
        assert!(ket(3)
            .scale(&ExactScalar::i())
            .proportionality(&r.output)
            .is_some());
        let plus = ExactState::from_int_pairs(2, &[(1, 0), (1, 0), (1, 0), (1, 0)]).unwrap();
        let r = cs_injection_check(&plus).unwrap();
        assert!(r.ok);
        assert!(cs_state().proportionality(&r.output).is_some());
    }

    #[test]
    fn injection_random_inputs() {
        let mut rng = rng_from_seed(7);
        for _ in 0..20 {
            let psi = crate::statevec::random_exact_state(2, &mut rng);
            assert!(cs_injection_check(&psi).unwrap().ok);
        }
    }

    #[test]
    fn cs_count_examples() {
        let c = Circuit::from_gates(
            2,
            [
                Gate::E(0),
                Gate::Cx {
                    control: 0,
                    target: 1,
                },
            ],
        )
        .unwrap();
        let r = cs_count_check(&c).unwrap();
        assert!(r.ok);
        assert_eq!(r.norm, "1/1");
        let c = Circuit::from_gates(2, [Gate::E(0), Gate::E(1), Gate::Cs(0, 1)]).unwrap();
        let r = cs_count_check(&c).unwrap();
        assert_eq!(
            (r.ok, r.norm.as_str(), r.quotient.as_deref()),
            (true, "2/1", Some("1/1"))
        );
    }

    #[test]
    fn cs_count_with_measurement() {
        let c = Circuit::new(
            3,
            vec![
                Op::Gate(Gate::E(0)),
                Op::Gate(Gate::E(1)),
                Op::Gate(Gate::E(2)),
                Op::Gate(Gate::Cs(0, 1)),
                Op::Gate(Gate::Cs(1, 2)),
                Op::Measure {
                    qubit: 2,
                    basis: Basis::X,
                    outcome: 0,
                },
            ],
        )
        .unwrap();
        let r = cs_count_check(&c).unwrap();
        assert!(r.ok && r.has_measurements);
    }

    #[test]
    fn cs_count_random_small() {
        let mut rng = rng_from_seed(3);
        for trial in 0..20 {
            let c = random_cs_circuit(2 + trial % 2, trial % 4, 8, &mut rng);
            assert!(cs_count_check(&c).unwrap().ok);
        }
    }
}
