//! Property suites, one per acceptance criterion, shared by `bwmagic verify` and the
//! acceptance tests.

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amplify::{
    compose, lattice_track_run, rank_scaling_experiment, zero_base, AmplifyOptions, MaskPolicy,
};
use crate::bwlattice::{
    bw_norm, check_measurement_monotone, check_ndelta_witness, is_member, lattice_round,
    n_delta_upper,
};
use crate::cliffstab::{
    cs_count_check, cs_injection_check, cs_state, enumerate_stabilizers, random_clifford_circuit,
    random_cs_circuit, run_circuit, StabilizerSet,
};
use crate::error::{Error, Result};
use crate::gint::{format_rational, gcd, xgcd, ExactScalar, GaussianInt};
use crate::io::{circuit_to_json, exact_state_to_json, float_state_to_json};
use crate::rankoracle::{
    exact_rank, extent_check, fidelity_rank_check, gram_analysis, product_rank_experiment,
    stab_fidelity,
};
use crate::statevec::{
    random_exact_state, random_gaussian_rational, random_haar_state, random_rational_parts,
    rng_from_seed, Coeff, Decomposition, ExactState, FloatState, Target, Term, TermState,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Arithmetic,
    Enumeration,
    CsNorm,
    Monotone,
    CsCount,
    Injection,
    Bounds,
    Fidelity,
    Rank,
    Amplification,
    Lattice,
    Ndelta,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Arithmetic,
        Suite::Enumeration,
        Suite::CsNorm,
        Suite::Monotone,
        Suite::CsCount,
        Suite::Injection,
        Suite::Bounds,
        Suite::Fidelity,
        Suite::Rank,
        Suite::Amplification,
        Suite::Lattice,
        Suite::Ndelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Arithmetic => "arithmetic",
            Suite::Enumeration => "enumeration",
            Suite::CsNorm => "cs-norm",
            Suite::Monotone => "monotone",
            Suite::CsCount => "cs-count",
            Suite::Injection => "injection",
            Suite::Bounds => "bounds",
            Suite::Fidelity => "fidelity",
            Suite::Rank => "rank",
            Suite::Amplification => "amplification",
            Suite::Lattice => "lattice",
            Suite::Ndelta => "ndelta",
        }
    }

    /// Acceptance criterion number, 1 to 12.
    pub fn criterion(self) -> usize {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") + 1
    }

    /// Wall-clock budget for a full run at the default configuration.
    pub fn time_limit(self) -> Duration {
        Duration::from_secs(match self {
            Suite::Arithmetic => 5,
            Suite::Enumeration => 30,
            Suite::CsNorm => 60,
            Suite::Monotone | Suite::CsCount | Suite::Bounds => 120,
            Suite::Injection => 10,
            Suite::Fidelity => 60,
            Suite::Rank => 600,
            Suite::Amplification => 300,
            Suite::Lattice => 180,
            Suite::Ndelta => 60,
        })
    }

    pub fn run(self, cfg: &VerifyConfig) -> Result<SuiteReport> {
        let mut rng = rng_from_seed(cfg.seed ^ ((self.criterion() as u64) << 32));
        let checks = match self {
            Suite::Arithmetic => arithmetic(&mut rng)?,
            Suite::Enumeration => enumeration(cfg)?,
            Suite::CsNorm => cs_norm()?,
            Suite::Monotone => monotone(cfg, &mut rng)?,
            Suite::CsCount => cs_count(cfg, &mut rng)?,
            Suite::Injection => injection(&mut rng)?,
            Suite::Bounds => bounds(cfg, &mut rng)?,
            Suite::Fidelity => fidelity()?,
            Suite::Rank => rank(cfg)?,
            Suite::Amplification => amplification(cfg)?,
            Suite::Lattice => lattice(cfg)?,
            Suite::Ndelta => ndelta(cfg, &mut rng)?,
        };
        Ok(SuiteReport {
            suite: self.name(),
            criterion: self.criterion(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest qubit count for the suites that sweep `n` (at most 3).
    pub max_n: usize,
    pub seed: u64,
    /// Slack for floating-point equalities.
    pub tol: f64,
    pub rounding_budget: usize,
    pub term_budget: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 3,
            seed: 0,
            tol: 1e-9,
            rounding_budget: crate::bwlattice::DEFAULT_ROUNDING_BUDGET,
            term_budget: crate::amplify::DEFAULT_TERM_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub criterion: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Counts samples and violations of one property, keeping the first counterexample.
struct Tally {
    name: &'static str,
    samples: usize,
    violations: usize,
    first: Option<Value>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            samples: 0,
            violations: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.samples += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(counterexample());
            }
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name.into(),
            passed: self.violations == 0 && self.samples > 0,
            detail: json!({ "samples": self.samples, "violations": self.violations }),
            counterexample: self.first,
        }
    }
}

fn check(name: &str, passed: bool, detail: Value) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
        counterexample: None,
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn pow2(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

fn norm_value(v: &ExactState) -> Result<Option<BigRational>> {
    Ok(bw_norm(v)?.value().cloned())
}

fn random_gaussian_int(rng: &mut ChaCha8Rng) -> GaussianInt {
    let bound = if rng.random_bool(0.5) { 20 } else { 1i64 << 40 };
    GaussianInt::from_i64(
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
    )
}

fn random_scalar(rng: &mut ChaCha8Rng) -> ExactScalar {
    ExactScalar::from_coeffs(std::array::from_fn(|_| {
        if rng.random_bool(0.25) {
            BigRational::zero()
        } else {
            let (p, q) = random_rational_parts(rng);
            BigRational::new(p.into(), q.into())
        }
    }))
}

fn arithmetic(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut division = Tally::new("divmod_norm_contraction");
    let mut divides = Tally::new("gcd_divides_both");
    let mut bezout = Tally::new("bezout_reconstruction");
    for _ in 0..1000 {
        let a = random_gaussian_int(rng);
        let b = random_gaussian_int(rng);
        let ce = || json!({ "a": a, "b": b });
        if !b.is_zero() {
            let (q, r) = a.divmod(&b)?;
            let ok = &(&q * &b) + &r == a && r.norm() * 2 <= b.norm();
            division.record(ok, ce);
        }
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let g = gcd(&a, &b)?;
        let canonical = g.re.is_positive() && !g.im.is_negative();
        divides.record(canonical && g.divides(&a)? && g.divides(&b)?, ce);
        let (g2, s, t) = xgcd(&a, &b)?;
        bezout.record(g2 == g && &(&s * &a) + &(&t * &b) == g, ce);
    }
    let mut field = Tally::new("cyclotomic_field_axioms");
    let mut inverse = Tally::new("cyclotomic_inverse");
    let (zero, one) = (ExactScalar::zero(), ExactScalar::one());
    for _ in 0..1000 {
        let (x, y, z) = (random_scalar(rng), random_scalar(rng), random_scalar(rng));
        let ok = &(&x + &y) + &z == &x + &(&y + &z)
            && &x + &y == &y + &x
            && &(&x * &y) * &z == &x * &(&y * &z)
            && &x * &y == &y * &x
            && &x * &(&y + &z) == &(&x * &y) + &(&x * &z)
            && &x + &zero == x
            && &x * &one == x
            && (&x + &(-&x)).is_zero();
        field.record(ok, || json!({ "x": x, "y": y, "z": z }));
        if !x.is_zero() {
            inverse.record((&x.inv()? * &x).is_one(), || json!({ "x": x }));
        }
    }
    Ok(vec![
        division.finish(),
        divides.finish(),
        bezout.finish(),
        field.finish(),
        inverse.finish(),
    ])
}

const STABILIZER_COUNTS: [usize; 3] = [6, 60, 1080];

fn enumeration(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=cfg.max_n.clamp(1, 3) {
        let set = enumerate_stabilizers(n)?;
        checks.push(check(
            &format!("count_n{n}"),
            set.len() == STABILIZER_COUNTS[n - 1],
            json!({ "n": n, "count": set.len(), "expected": STABILIZER_COUNTS[n - 1] }),
        ));
        let mut unit = Tally::new("member_with_unit_norm");
        for (i, s) in set.states().iter().enumerate() {
            let ok = is_member(s).member && norm_value(s)? == Some(rat(1));
            unit.record(
                ok,
                || json!({ "n": n, "index": i, "state": exact_state_to_json(s) }),
            );
        }
        let mut c = unit.finish();
        c.name = format!("member_with_unit_norm_n{n}");
        checks.push(c);
    }
    Ok(checks)
}

fn cs_norm() -> Result<Vec<Check>> {
    let cs = cs_state();
    let mut checks = Vec::new();
    let mut power = ExactState::basis(0, 0);
    for m in 1..=3 {
        power = power.tensor(&cs);
        let value = norm_value(&power)?;
        checks.push(check(
            &format!("cs_power_{m}"),
            value == Some(pow2(m)),
            json!({ "m": m, "norm": value.as_ref().map(format_rational), "expected": format_rational(&pow2(m)) }),
        ));
    }
    Ok(checks)
}

fn stabilizer_sets(max_n: usize) -> Result<HashMap<usize, StabilizerSet>> {
    (1..=max_n)
        .map(|n| Ok((n, enumerate_stabilizers(n)?)))
        .collect()
}

fn monotone(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let max_n = cfg.max_n.clamp(1, 3);
    let sets = stabilizer_sets(max_n)?;
    let mut clifford = Tally::new("clifford_invariance");
    let mut minimum = Tally::new("unit_norm_iff_stabilizer");
    let mut tensor = Tally::new("tensor_multiplicativity");
    let mut integral = Tally::new("scaled_norm_integral");
    let mut measure = Tally::new("measurement_monotone");
    for j in 0..200 {
        let n = 1 + j % max_n;
        let set = &sets[&n];
        let v = if j % 4 == 0 {
            let s = &set.states()[rng.random_range(0..set.len())];
            let mut c = random_gaussian_rational(rng);
            while c.is_zero() {
                c = random_gaussian_rational(rng);
            }
            s.scale(&c)
        } else {
            random_exact_state(n, rng)
        };
        let ce = || json!({ "state": exact_state_to_json(&v) });
        let value = norm_value(&v)?
            .ok_or_else(|| Error::InvalidInput("random Q(i) state has infinite norm".into()))?;

        let circuit = random_clifford_circuit(n, 12, rng);
        let (w, _) = run_circuit(&circuit, &v)?;
        clifford.record(
            norm_value(&w)?.as_ref() == Some(&value),
            || json!({ "state": exact_state_to_json(&v), "circuit": circuit_to_json(&circuit) }),
        );

        let is_stab = set.index_of_proportional(&v).is_some();
        minimum.record(value >= rat(1) && (value == rat(1)) == is_stab, ce);

        integral.record((&value * pow2(n)).is_integer(), ce);

        let total = max_n.max(2);
        let n2 = if n < total {
            rng.random_range(1..=total - n)
        } else {
            1
        };
        let u = random_exact_state(n2, rng);
        let prod = norm_value(&v.tensor(&u))?;
        let expected = norm_value(&u)?.map(|nu| &nu * &value);
        tensor.record(
            prod.is_some() && prod == expected,
            || json!({ "left": exact_state_to_json(&v), "right": exact_state_to_json(&u) }),
        );

        measure.record(check_measurement_monotone(&v)?.ok, ce);
    }
    Ok(vec![
        clifford.finish(),
        minimum.finish(),
        tensor.finish(),
        integral.finish(),
        measure.finish(),
    ])
}

fn cs_count(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let max_n = cfg.max_n.clamp(2, 3);
    let mut t = Tally::new("cs_count_divides");
    for j in 0..200 {
        let n = 2 + j % (max_n - 1);
        let m = rng.random_range(0..=4);
        let len = rng.random_range(0..=30);
        let c = random_cs_circuit(n, m, len, rng);
        let rep = cs_count_check(&c)?;
        t.record(
            rep.ok && !rep.has_measurements,
            || json!({ "circuit": circuit_to_json(&c), "report": rep }),
        );
    }
    Ok(vec![t.finish()])
}

fn injection(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let quarter = BigRational::new(1.into(), 4.into());
    let mut t = Tally::new("injection_quarter");
    for _ in 0..50 {
        let psi = random_exact_state(2, rng);
        let rep = cs_injection_check(&psi)?;
        t.record(
            rep.ok && rep.proportional && rep.probability == quarter,
            || json!({ "state": exact_state_to_json(&psi), "report": rep }),
        );
    }
    Ok(vec![t.finish()])
}

/// `k` distinct random stabilizer states that are linearly independent.
fn independent_family(
    set: &StabilizerSet,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<ExactState>> {
    for _ in 0..10_000 {
        let family: Vec<ExactState> = sample(rng, set.len(), k)
            .into_iter()
            .map(|i| set.states()[i].clone())
            .collect();
        match gram_analysis(&family) {
            Ok(_) => return Ok(family),
            Err(Error::DependentFamily) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no independent family of {k} states found"
    )))
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A normalized float-coefficient decomposition over `family`, targeting its own state.
fn normalized_decomposition(family: &[ExactState], rng: &mut ChaCha8Rng) -> Result<Decomposition> {
    let n = family[0].n();
    let coeffs: Vec<Complex64> = family.iter().map(|_| random_complex(rng)).collect();
    let mut psi = FloatState::zero(n);
    for (c, s) in coeffs.iter().zip(family) {
        psi.add_scaled(*c, &s.to_float())?;
    }
    let scale = 1.0 / psi.norm_sq().sqrt();
    let terms = coeffs
        .iter()
        .zip(family)
        .map(|(c, s)| Term {
            coeff: Coeff::Float(c * scale),
            state: TermState::Exact(s.clone()),
        })
        .collect();
    Decomposition::new(
        n,
        terms,
        Target::State(psi.scale(Complex64::new(scale, 0.0))),
    )
}

fn bounds(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let max_n = cfg.max_n.clamp(1, 3);
    let sets = stabilizer_sets(max_n)?;
    let family = |rng: &mut ChaCha8Rng| -> Result<Vec<ExactState>> {
        let n = rng.random_range(1..=max_n);
        let k = rng.random_range(1..=6.min(1 << n));
        independent_family(&sets[&n], k, rng)
    };
    let mut gram = Tally::new("gram_determinant_window");
    for _ in 0..500 {
        let fam = family(rng)?;
        let r = gram_analysis(&fam)?;
        let two_k = 2.0 * r.k as f64;
        let ok = r.det >= two_k.powf(-two_k) - 1e-12 && r.det <= E * r.lambda_min + cfg.tol;
        gram.record(ok, || {
            json!({ "states": fam.iter().map(exact_state_to_json).collect::<Vec<_>>(), "report": r })
        });
    }
    let mut extent = Tally::new("extent_bound");
    for _ in 0..500 {
        let d = normalized_decomposition(&family(rng)?, rng)?;
        let r = extent_check(&d)?;
        extent.record(r.l1 <= r.bound + cfg.tol, || json!({ "report": r }));
    }
    let mut fid = Tally::new("fidelity_rank_bound");
    for _ in 0..200 {
        let fam = family(rng)?;
        let n = fam[0].n();
        let phi = random_haar_state(n, rng);
        let d = normalized_decomposition(&fam, rng)?;
        let r = fidelity_rank_check(&phi, &d, &sets[&n])?;
        fid.record(
            r.lhs <= r.bound + cfg.tol,
            || json!({ "phi": float_state_to_json(&phi), "report": r }),
        );
    }
    Ok(vec![gram.finish(), extent.finish(), fid.finish()])
}

fn fidelity() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=2 {
        let f = stab_fidelity(&FloatState::h_tensor(n), &enumerate_stabilizers(n)?)?;
        let expected = (PI / 8.0).cos().powi(2 * n as i32);
        checks.push(check(
            &format!("h_tensor_fidelity_n{n}"),
            (f.value - expected).abs() <= 1e-12,
            json!({ "n": n, "fidelity": f.value, "expected": expected, "argmax": f.argmax }),
        ));
    }
    Ok(checks)
}

fn h_state() -> ExactState {
    ExactState::new(1, vec![ExactScalar::cos_pi_8(), ExactScalar::sin_pi_8()]).expect("one qubit")
}

fn rank(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let s1 = enumerate_stabilizers(1)?;
    let s2 = enumerate_stabilizers(2)?;
    let h = h_state();
    let r1 = exact_rank(&h, &s1, 2)?;
    let r2 = exact_rank(&h.tensor(&h), &s2, 2)?;
    let product = product_rank_experiment(50, cfg.seed, &s2)?;
    Ok(vec![
        check("h_rank", r1.rank == Some(2), json!(r1)),
        check("h_tensor_2_rank", r2.rank == Some(2), json!(r2)),
        Check {
            name: "product_states_full_rank".into(),
            passed: product.rank_counts[4] == 50,
            detail: json!({ "samples": product.samples, "rank_counts": product.rank_counts }),
            counterexample: product.failures.first().map(|f| json!(f)),
        },
    ])
}

/// Bounds for the fitted `log₂(rank)` slope.
pub const SLOPE_BAND: (f64, f64) = (0.15, 0.30);

fn amplification(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let opts = AmplifyOptions {
        seed: cfg.seed,
        term_budget: cfg.term_budget,
        ..AmplifyOptions::default()
    };
    let mut halving = Tally::new("step_halves_error_doubles_rank_at_most");
    let mut formula = Tally::new("tensor_power_error_formula");
    for n in 4..=12 {
        let (_, rep) = compose(&zero_base(), n, 0.17, &opts)?;
        for s in &rep.steps {
            let ok = s.exhaustive
                && s.error_after <= s.error_before / 2.0 + 1e-12
                && s.rank_after <= 2 * s.rank_before;
            halving.record(ok, || json!({ "n": n, "step": s }));
        }
        formula.record(
            (rep.measured_error - rep.formula_error).abs() <= cfg.tol,
            || json!({ "n": n, "measured": rep.measured_error, "formula": rep.formula_error }),
        );
    }
    let ns: Vec<usize> = (6..=12).collect();
    let scaling = rank_scaling_experiment(&ns, 0.17, &opts)?;
    let in_band = scaling.slope >= SLOPE_BAND.0 && scaling.slope <= SLOPE_BAND.1;
    Ok(vec![
        halving.finish(),
        formula.finish(),
        check(
            "rank_scaling_slope",
            in_band,
            json!({
                "slope": scaling.slope,
                "band": [SLOPE_BAND.0, SLOPE_BAND.1],
                "theoretical_slope": scaling.theoretical_slope,
                "points": scaling.points,
            }),
        ),
    ])
}

fn lattice(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut member = Tally::new("membership_and_integrality");
    let mut ratios = Vec::new();
    let ratio_rounds = (0.23f64 * 8.0).ceil() as usize;
    for n in 1..=8 {
        let rounds = (0.23 * n as f64).ceil() as usize + 2;
        for s in 0..20 {
            let seed = cfg.seed.wrapping_add(s);
            match lattice_track_run(n, rounds, seed, MaskPolicy::Random) {
                Ok(reps) => {
                    for r in &reps {
                        member.record(
                            r.member && r.integral,
                            || json!({ "n": n, "seed": seed, "report": r }),
                        );
                    }
                    if n == 8 {
                        let r = &reps[ratio_rounds];
                        ratios.push(r.norm2_exact.to_f64().unwrap_or(f64::NAN) / r.rank as f64);
                    }
                }
                Err(e @ Error::NotMember { .. }) => member.record(
                    false,
                    || json!({ "n": n, "seed": seed, "error": e.to_string() }),
                ),
                Err(e) => return Err(e),
            }
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(vec![
        member.finish(),
        check(
            "mean_norm_per_rank_n8",
            (0.1..=10.0).contains(&mean),
            json!({ "n": 8, "rounds": ratio_rounds, "seeds": ratios.len(), "mean": mean, "band": [0.1, 10.0] }),
        ),
    ])
}

fn ndelta(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let d = Decomposition::new(
        1,
        vec![
            Term::exact(ExactScalar::cos_pi_8(), ExactState::basis(1, 0)),
            Term::exact(ExactScalar::sin_pi_8(), ExactState::basis(1, 1)),
        ],
        Target::HTensor,
    )?;
    let delta0 = 0.5;
    let w = n_delta_upper(&d, delta0, cfg.rounding_budget, cfg.seed)?;
    let phi = d.assemble_float().normalized()?;
    let wc = check_ndelta_witness(&phi, &w.witness, w.c, delta0);
    let witness_ok = w.certified && (w.bound - 16.0).abs() <= cfg.tol && wc.ok;

    let sets = stabilizer_sets(3)?;
    let mut certified = 0;
    let calls = 200;
    for _ in 0..calls {
        let n = rng.random_range(1..=3);
        let k = rng.random_range(1..=4.min(1 << n));
        let fam = independent_family(&sets[&n], k, rng)?;
        let mut target = FloatState::zero(n);
        for s in &fam {
            target.add_scaled(random_complex(rng) * 4.0, &s.to_float())?;
        }
        let r = lattice_round(&fam, &target, cfg.rounding_budget, rng.random())?;
        if r.certified && r.dist * r.dist <= 2.0 * k as f64 {
            certified += 1;
        }
    }
    let fraction = certified as f64 / calls as f64;
    Ok(vec![
        check(
            "h_witness_bound_16",
            witness_ok,
            json!({
                "bound": w.bound,
                "c": w.c,
                "certified": w.certified,
                "distance": w.distance,
                "witness_check": wc,
            }),
        ),
        check(
            "rounding_certified_fraction",
            fraction >= 0.95,
            json!({ "calls": calls, "certified": certified, "fraction": fraction, "required": 0.95 }),
        ),
    ])
}
