use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gint::{ExactScalar, Unit};
use crate::statevec::ExactState;

/// Gates with `Q(i)` matrix entries. `E = e^{−iπ/4}H = (1/(1+i))·[[1, 1], [1, −1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    S(usize),
    Sdg(usize),
    X(usize),
    Z(usize),
    E(usize),
    Cx {
        control: usize,
        target: usize,
    },
    Cz(usize, usize),
    Cs(usize, usize),
    /// Global phase `i^k`.
    UnitPhase(Unit),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::S(_) => "S",
            Gate::Sdg(_) => "Sdg",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::E(_) => "E",
            Gate::Cx { .. } => "CX",
            Gate::Cz(..) => "CZ",
            Gate::Cs(..) => "CS",
            Gate::UnitPhase(_) => "UNIT_PHASE",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Z(q) | Gate::E(q) => vec![q],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Cz(a, b) | Gate::Cs(a, b) => vec![a, b],
            Gate::UnitPhase(_) => vec![],
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::Cs(..))
    }

    /// Builds a gate from its name and qubit list (the circuit-file encoding).
    pub fn from_parts(name: &str, qubits: &[usize], phase: Option<u8>) -> Result<Gate> {
        let bad = || Error::InvalidInput(format!("gate {name} with qubits {qubits:?}"));
        let one = |f: fn(usize) -> Gate| match qubits {
            [q] => Ok(f(*q)),
            _ => Err(bad()),
        };
        let two = |f: fn(usize, usize) -> Gate| match qubits {
            [a, b] if a != b => Ok(f(*a, *b)),
            _ => Err(bad()),
        };
        match GateName::from_str(name)? {
            GateName::S => one(Gate::S),
            GateName::Sdg => one(Gate::Sdg),
            GateName::X => one(Gate::X),
            GateName::Z => one(Gate::Z),
            GateName::E => one(Gate::E),
            GateName::Cx => two(|control, target| Gate::Cx { control, target }),
            GateName::Cz => two(Gate::Cz),
            GateName::Cs => two(Gate::Cs),
            GateName::UnitPhase => match qubits {
                [] => Ok(Gate::UnitPhase(Unit::from_power(phase.unwrap_or(0) as i64))),
                _ => Err(bad()),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GateName {
    S,
    Sdg,
    X,
    Z,
    E,
    Cx,
    Cz,
    Cs,
    UnitPhase,
}

impl FromStr for GateName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "S" => GateName::S,
            "SDG" => GateName::Sdg,
            "X" => GateName::X,
            "Z" => GateName::Z,
            "E" => GateName::E,
            "CX" | "CNOT" => GateName::Cx,
            "CZ" => GateName::Cz,
            "CS" => GateName::Cs,
            "UNIT_PHASE" => GateName::UnitPhase,
            _ => return Err(Error::InvalidInput(format!("unknown gate {s:?}"))),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::UnitPhase(u) => write!(f, "UNIT_PHASE({u})"),
            g => write!(f, "{}{:?}", g.name(), g.qubits()),
        }
    }
}

/// Pauli measurement basis for circuit measurement directives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Gate(Gate),
    /// Post-selected measurement without renormalization.
    Measure {
        qubit: usize,
        basis: Basis,
        outcome: u8,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n: usize, ops: Vec<Op>) -> Result<Self> {
        let c = Circuit { n, ops };
        c.validate()?;
        Ok(c)
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        Circuit::new(n, gates.into_iter().map(Op::Gate).collect())
    }

    pub fn validate(&self) -> Result<()> {
        for op in &self.ops {
            let qubits = match op {
                Op::Gate(g) => g.qubits(),
                Op::Measure { qubit, outcome, .. } => {
                    if *outcome > 1 {
                        return Err(Error::InvalidInput(format!(
                            "outcome {outcome} is not 0 or 1"
                        )));
                    }
                    vec![*qubit]
                }
            };
            if let Some(&q) = qubits.iter().find(|&&q| q >= self.n) {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        Ok(())
    }

    pub fn cs_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Gate(Gate::Cs(..))))
            .count()
    }

    pub fn has_measurements(&self) -> bool {
        self.ops.iter().any(|op| matches!(op, Op::Measure { .. }))
    }
}

fn check_qubit(q: usize, n: usize) -> Result<()> {
    if q >= n {
        return Err(Error::QubitOutOfRange { qubit: q, n });
    }
    Ok(())
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn times_i_pow(a: &ExactScalar, k: u8) -> ExactScalar {
    a.mul_zeta_pow(4 * k as i64)
}

/// `1/(1+i) = (1−i)/2`.
pub fn inv_one_plus_i() -> ExactScalar {
    ExactScalar::gaussian_ratio(1, 2, -1, 2)
}

/// Applies `g` exactly, returning the new state.
pub fn apply_gate(v: &ExactState, g: &Gate) -> Result<ExactState> {
    let mut out = v.clone();
    apply_gate_in_place(&mut out, g)?;
    Ok(out)
}

pub fn apply_gate_in_place(v: &mut ExactState, g: &Gate) -> Result<()> {
    let n = v.n();
    for q in g.qubits() {
        check_qubit(q, n)?;
    }
    let amps = v.amplitudes_mut();
    let len = amps.len();
    match *g {
        Gate::S(q) | Gate::Sdg(q) | Gate::Z(q) => {
            let k = match g {
                Gate::S(_) => 1,
                Gate::Z(_) => 2,
                _ => 3,
            };
            let m = bit(n, q);
            for (x, a) in amps.iter_mut().enumerate() {
                if x & m != 0 && !a.is_zero() {
                    *a = times_i_pow(a, k);
                }
            }
        }
        Gate::X(q) => {
            let m = bit(n, q);
            for x in (0..len).filter(|x| x & m == 0) {
                amps.swap(x, x | m);
            }
        }
        Gate::E(q) => {
            let m = bit(n, q);
            let h = inv_one_plus_i();
            for x in (0..len).filter(|x| x & m == 0) {
                let (a0, a1) = (&amps[x], &amps[x | m]);
                if a0.is_zero() && a1.is_zero() {
                    continue;
                }
                let s = &(a0 + a1) * &h;
                let d = &(a0 - a1) * &h;
                amps[x] = s;
                amps[x | m] = d;
            }
        }
        Gate::Cx { control, target } => {
            if control == target {
                return Err(Error::InvalidInput("CX control equals target".into()));
            }
            let (mc, mt) = (bit(n, control), bit(n, target));
            for x in (0..len).filter(|x| x & mc != 0 && x & mt == 0) {
                amps.swap(x, x | mt);
            }
        }
        Gate::Cz(a, b) | Gate::Cs(a, b) => {
            if a == b {
                return Err(Error::InvalidInput(
                    "two-qubit gate on a single qubit".into(),
                ));
            }
            let k = if matches!(g, Gate::Cz(..)) { 2 } else { 1 };
            let m = bit(n, a) | bit(n, b);
            for (x, amp) in amps.iter_mut().enumerate() {
                if x & m == m && !amp.is_zero() {
                    *amp = times_i_pow(amp, k);
                }
            }
        }
        Gate::UnitPhase(u) => {
            for amp in amps.iter_mut() {
                *amp = times_i_pow(amp, u.power());
            }
        }
    }
    Ok(())
}

/// Zeroes every amplitude whose `qubit` bit differs from `outcome`.
fn project_z(v: &mut ExactState, qubit: usize, outcome: u8) {
    let n = v.n();
    let m = bit(n, qubit);
    for (x, a) in v.amplitudes_mut().iter_mut().enumerate() {
        if ((x & m != 0) as u8) != outcome {
            *a = ExactScalar::zero();
        }
    }
}

/// Projects onto the `basis` eigenstate for `outcome` without renormalizing.
pub fn project(v: &ExactState, qubit: usize, basis: Basis, outcome: u8) -> Result<ExactState> {
    check_qubit(qubit, v.n())?;
    let mut w = v.clone();
    match basis {
        Basis::Z => project_z(&mut w, qubit, outcome),
        Basis::X => {
            // P_X = E⁻¹ P_Z E with E⁻¹ = i·E
            apply_gate_in_place(&mut w, &Gate::E(qubit))?;
            project_z(&mut w, qubit, outcome);
            apply_gate_in_place(&mut w, &Gate::E(qubit))?;
            apply_gate_in_place(&mut w, &Gate::UnitPhase(Unit::I))?;
        }
    }
    Ok(w)
}

/// Runs the circuit; measurements post-select without renormalizing.
///
/// Returns the final (unnormalized) state and the accumulated post-selection probability.
pub fn run_circuit(c: &Circuit, initial: &ExactState) -> Result<(ExactState, BigRational)> {
    c.validate()?;
    if initial.n() != c.n {
        return Err(Error::DimensionMismatch {
            expected: 1 << c.n,
            found: initial.len(),
        });
    }
    let mut v = initial.clone();
    let start = exact_norm_sq(&v)?;
    for op in &c.ops {
        match op {
            Op::Gate(g) => apply_gate_in_place(&mut v, g)?,
            Op::Measure {
                qubit,
                basis,
                outcome,
            } => {
                v = project(&v, *qubit, *basis, *outcome)?;
                if v.is_zero() {
                    return Err(Error::ZeroProbability {
                        qubit: *qubit,
                        outcome: *outcome,
                    });
                }
            }
        }
    }
    let end = exact_norm_sq(&v)?;
    Ok((v, end / start))
}

fn exact_norm_sq(v: &ExactState) -> Result<BigRational> {
    if let Some(r) = v.norm_sq_rational() {
        return Ok(r);
    }
    v.norm_sq()
        .to_rational()
        .ok_or_else(|| Error::InvalidInput("squared norm is not rational".into()))
}

/// A uniformly random gate from `{S, Sdg, X, Z, E, CX, CZ}` (two-qubit kinds need `n ≥ 2`).
pub fn random_clifford_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let kinds = if n >= 2 { 7 } else { 5 };
    let q = rng.random_range(0..n);
    match rng.random_range(0..kinds) {
        0 => Gate::S(q),
        1 => Gate::Sdg(q),
        2 => Gate::X(q),
        3 => Gate::Z(q),
        4 => Gate::E(q),
        k => {
            let mut t = rng.random_range(0..n - 1);
            if t >= q {
                t += 1;
            }
            if k == 5 {
                Gate::Cx {
                    control: q,
                    target: t,
                }
            } else {
                Gate::Cz(q, t)
            }
        }
    }
}

pub fn random_clifford_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> Circuit {
    Circuit::from_gates(n, (0..len).map(|_| random_clifford_gate(n, rng))).expect("valid gates")
}

/// `m` CS gates interleaved at random positions among `clifford_len` Clifford gates.
pub fn random_cs_circuit<R: Rng>(n: usize, m: usize, clifford_len: usize, rng: &mut R) -> Circuit {
    assert!(m == 0 || n >= 2, "CS needs two qubits");
    let mut gates: Vec<Gate> = (0..clifford_len)
        .map(|_| random_clifford_gate(n, rng))
        .collect();
    for _ in 0..m {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let pos = rng.random_range(0..=gates.len());
        gates.insert(pos, Gate::Cs(a, b));
    }
    Circuit::from_gates(n, gates).expect("valid gates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::ExactState;

    #[test]
    fn e_on_zero() {
        let out = apply_gate(&ExactState::basis(1, 0), &Gate::E(0)).unwrap();
        let h = inv_one_plus_i();
        assert_eq!(out.amplitudes(), &[h.clone(), h]);
    }

    #[test]
    fn s_and_cs_are_diagonal() {
        let out = apply_gate(&ExactState::basis(1, 1), &Gate::S(0)).unwrap();
        assert_eq!(out, ExactState::basis(1, 1).scale(&ExactScalar::i()));
        let out = apply_gate(&ExactState::basis(2, 3), &Gate::Cs(0, 1)).unwrap();
        assert_eq!(out, ExactState::basis(2, 3).scale(&ExactScalar::i()));
        let out = apply_gate(&ExactState::basis(2, 2), &Gate::Cs(0, 1)).unwrap();
        assert_eq!(out, ExactState::basis(2, 2));
    }

    #[test]
    fn cx_big_endian() {
        // |10> -> |11> with control qubit 0 (most significant)
        let out = apply_gate(
            &ExactState::basis(2, 2),
            &Gate::Cx {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert_eq!(out, ExactState::basis(2, 3));
        let out = apply_gate(
            &ExactState::basis(2, 1),
            &Gate::Cx {
                control: 0,
                target: 1,
            },
        )
        .unwrap();
        assert_eq!(out, ExactState::basis(2, 1));
    }

    #[test]
    fn e_squared_is_minus_i() {
        let v = ExactState::from_int_pairs(1, &[(3, 1), (-2, 5)]).unwrap();
        let w = apply_gate(&apply_gate(&v, &Gate::E(0)).unwrap(), &Gate::E(0)).unwrap();
        assert_eq!(w, v.scale(&-ExactScalar::i()));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            apply_gate(&ExactState::basis(1, 0), &Gate::S(1)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(Circuit::from_gates(2, [Gate::Cs(0, 2)]).is_err());
    }

    #[test]
    fn run_circuit_examples() {
        let init = ExactState::basis(1, 0);
        let (out, p) = run_circuit(&Circuit::new(1, vec![]).unwrap(), &init).unwrap();
        assert_eq!(out, init);
        assert_eq!(p, BigRational::from_integer(1.into()));

        let c = Circuit::new(
            1,
            vec![
                Op::Gate(Gate::E(0)),
                Op::Measure {
                    qubit: 0,
                    basis: Basis::Z,
                    outcome: 0,
                },
            ],
        )
        .unwrap();
        let (_, p) = run_circuit(&c, &init).unwrap();
        assert_eq!(p, BigRational::new(1.into(), 2.into()));

        let c = Circuit::new(
            1,
            vec![Op::Measure {
                qubit: 0,
                basis: Basis::Z,
                outcome: 1,
            }],
        )
        .unwrap();
        assert!(matches!(
            run_circuit(&c, &init),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn x_basis_projection() {
        // |0> measured in X: outcome + with probability 1/2, state (|0>+|1>)/2
        let c = Circuit::new(
            1,
            vec![Op::Measure {
                qubit: 0,
                basis: Basis::X,
                outcome: 0,
            }],
        )
        .unwrap();
        let (out, p) = run_circuit(&c, &ExactState::basis(1, 0)).unwrap();
        assert_eq!(p, BigRational::new(1.into(), 2.into()));
        let half = ExactScalar::gaussian_ratio(1, 2, 0, 1);
        assert_eq!(out.amplitudes(), &[half.clone(), half]);
    }

    #[test]
    fn gate_parsing() {
        assert_eq!(
            Gate::from_parts("cx", &[1, 0], None).unwrap(),
            Gate::Cx {
                control: 1,
                target: 0
            }
        );
        assert!(Gate::from_parts("CS", &[1, 1], None).is_err());
        assert!(Gate::from_parts("T", &[0], None).is_err());
    }
}
