use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use bwmagic::amplify::{amplify_step, relative_error_h, AmplifyOptions};
use bwmagic::bwlattice::{
    bw_norm, check_measurement_monotone, is_member, reduce_proportional_minimal, BwNorm,
};
use bwmagic::cliffstab::{enumerate_stabilizers, random_clifford_circuit, run_circuit};
use bwmagic::gint::{gcd, xgcd, ExactScalar, GaussianInt};
use bwmagic::io::{exact_state_from_json, exact_state_to_json};
use bwmagic::statevec::{rng_from_seed, Target, Term};
use bwmagic::{Decomposition, ExactState, FloatState};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn gaussian() -> impl Strategy<Value = GaussianInt> {
    (-10_000i64..=10_000, -10_000i64..=10_000).prop_map(|(a, b)| GaussianInt::from_i64(a, b))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn cyclotomic() -> impl Strategy<Value = ExactScalar> {
    prop::array::uniform8(rational()).prop_map(ExactScalar::from_coeffs)
}

fn gaussian_rational() -> impl Strategy<Value = ExactScalar> {
    (rational(), rational()).prop_map(|(re, im)| ExactScalar::gaussian(re, im))
}

/// A nonzero `Q(i)` state on 1 to `max_n` qubits.
fn qi_state(max_n: usize) -> impl Strategy<Value = ExactState> {
    (1..=max_n)
        .prop_flat_map(|n| {
            prop::collection::vec(gaussian_rational(), 1 << n).prop_map(move |a| (n, a))
        })
        .prop_filter("nonzero", |(_, a)| a.iter().any(|x| !x.is_zero()))
        .prop_map(|(n, a)| ExactState::new(n, a).unwrap())
}

fn norm(v: &ExactState) -> BigRational {
    match bw_norm(v).unwrap() {
        BwNorm::Finite(r) => r.value,
        BwNorm::Infinite => panic!("Q(i) state has a finite norm"),
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn divmod_remainder_is_small(a in gaussian(), b in gaussian()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.norm() * 2 <= b.norm());
    }

    #[test]
    fn gcd_divides_and_bezout(a in gaussian(), b in gaussian()) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let g = gcd(&a, &b).unwrap();
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
        let (g2, s, t) = xgcd(&a, &b).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn cyclotomic_field(x in cyclotomic(), y in cyclotomic(), z in cyclotomic()) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        if !x.is_zero() {
            prop_assert!((&x.inv().unwrap() * &x).is_one());
        }
    }

    #[test]
    fn zeta_power_is_multiplicative(x in cyclotomic(), j in -20i64..20, k in -20i64..20) {
        prop_assert_eq!(x.mul_zeta_pow(j).mul_zeta_pow(k), x.mul_zeta_pow(j + k));
        prop_assert_eq!(x.mul_zeta_pow(16), x);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn norm_is_clifford_invariant(v in qi_state(3), seed in any::<u64>()) {
        let c = random_clifford_circuit(v.n(), 10, &mut rng_from_seed(seed));
        let (w, _) = run_circuit(&c, &v).unwrap();
        prop_assert_eq!(norm(&w), norm(&v));
    }

    #[test]
    fn clifford_maps_lattice_to_lattice(v in qi_state(3), seed in any::<u64>()) {
        let m = bw_norm(&v).unwrap().finite().unwrap().minimal_vector;
        prop_assert!(is_member(&m).member);
        let c = random_clifford_circuit(v.n(), 10, &mut rng_from_seed(seed));
        let (w, _) = run_circuit(&c, &m).unwrap();
        prop_assert!(is_member(&w).member);
    }

    #[test]
    fn norm_is_at_least_one_and_scaled_integral(v in qi_state(3)) {
        let r = bw_norm(&v).unwrap().finite().unwrap();
        prop_assert!(r.value >= BigRational::from_integer(1.into()));
        prop_assert!(r.scaled_integer().is_integer());
        prop_assert!(is_member(&r.minimal_vector).member);
        prop_assert!(r.minimal_vector.proportionality(&v).is_some());
    }

    #[test]
    fn norm_is_scale_invariant(v in qi_state(3), c in gaussian_rational()) {
        prop_assume!(!c.is_zero());
        prop_assert_eq!(norm(&v.scale(&c)), norm(&v));
    }

    #[test]
    fn norm_is_multiplicative(v in qi_state(2), w in qi_state(2)) {
        prop_assert_eq!(norm(&v.tensor(&w)), norm(&v) * norm(&w));
    }

    #[test]
    fn lattice_closed_under_gaussian_combination(v in qi_state(3), w in qi_state(3), a in gaussian(), b in gaussian()) {
        prop_assume!(v.n() == w.n());
        let mv = bw_norm(&v).unwrap().finite().unwrap().minimal_vector;
        let mw = bw_norm(&w).unwrap().finite().unwrap().minimal_vector;
        let sum = mv
            .scale(&ExactScalar::from_gaussian_int(&a))
            .add(&mw.scale(&ExactScalar::from_gaussian_int(&b)))
            .unwrap();
        prop_assert!(is_member(&sum).member);
    }

    #[test]
    fn reduction_is_idempotent(v in qi_state(3)) {
        let m = bw_norm(&v).unwrap().finite().unwrap().minimal_vector;
        let (again, g) = reduce_proportional_minimal(&m).unwrap();
        prop_assert!(g.is_unit());
        prop_assert_eq!(norm(&again), norm(&m));
    }

    #[test]
    fn measurement_checks_hold(v in qi_state(3)) {
        prop_assert!(check_measurement_monotone(&v).unwrap().ok);
    }

    #[test]
    fn state_json_round_trip(v in qi_state(3)) {
        prop_assert_eq!(exact_state_from_json(&exact_state_to_json(&v)).unwrap(), v);
    }
}

/// A decomposition of `|H⟩^⊗n` over random one-qubit stabilizer products with
/// Gaussian coefficients.
fn stabilizer_decomposition() -> impl Strategy<Value = Decomposition> {
    (
        1usize..=4,
        prop::collection::vec((any::<u64>(), -3i64..=3, -3i64..=3), 1..4),
    )
        .prop_map(|(n, terms)| {
            let s1 = enumerate_stabilizers(1).unwrap();
            let terms = terms
                .into_iter()
                .map(|(pick, re, im)| {
                    let state = (0..n).fold(ExactState::basis(0, 0), |acc, q| {
                        acc.tensor(&s1.states()[((pick >> (3 * q)) % 6) as usize])
                    });
                    let c = ExactScalar::gaussian(
                        BigRational::from_integer(BigInt::from(re) + 4),
                        BigRational::from_integer(im.into()),
                    );
                    Term::exact(c, state)
                })
                .collect();
            Decomposition::new(n, terms, Target::HTensor).unwrap()
        })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn amplify_step_halves_error_and_preserves_overlap(d in stabilizer_decomposition()) {
        let h = FloatState::h_tensor(d.n());
        let before = h.inner(&d.assemble_float()).unwrap();
        prop_assume!(before.norm() > 1e-6);
        let err = relative_error_h(&d).unwrap();
        let (next, rep) = amplify_step(&d, &AmplifyOptions::default(), 0).unwrap();
        prop_assert!(rep.error_after <= err / 2.0 + 1e-12 * err.max(1.0));
        prop_assert!((relative_error_h(&next).unwrap() - rep.error_after).abs() < 1e-9);
        prop_assert!(next.rank() <= 2 * d.rank());
        let after = h.inner(&next.assemble_float()).unwrap();
        prop_assert!((after - before).norm() < 1e-9 * before.norm().max(1.0));
    }
}
