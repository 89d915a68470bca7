//! JSON file formats and canonical report serialization.
//!
//! Exact values are always strings (`"p/q"`), so files round-trip losslessly.
//! [`to_canonical_json`] sorts object keys and prints every float with 17
//! significant digits, which makes reports byte-identical across runs.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bwlattice::{BwNorm, NDeltaWitness, NormResult};
use crate::cliffstab::{enumerate_stabilizers, Basis, Circuit, Gate, Op, StabilizerSet};
use crate::error::{Error, Result};
use crate::gint::{format_rational, parse_rational, ExactScalar};
use crate::statevec::{
    AnyState, Coeff, Decomposition, ExactState, FloatState, Target, Term, TermState,
};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Serializes `value` with sorted keys, two-space indentation and 17-digit floats.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    render(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

/// `x` with 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => write!(out, "{i}").unwrap(),
            (_, Some(u), _) => write!(out, "{u}").unwrap(),
            (_, _, Some(f)) => out.push_str(&format_float(f)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render(x, depth, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(depth + 1, out);
                render(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                render(&map[*k], depth + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
    }
}

pub fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_from_json(v: &Value) -> Result<Complex64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(bad(format!(
                "float amplitude must be [re, im] numbers, got {v}"
            ))),
        },
        _ => Err(bad(format!("float amplitude must be [re, im], got {v}"))),
    }
}

pub fn scalar_to_json(x: &ExactScalar) -> Value {
    json!(x.to_strings())
}

/// An exact scalar: eight `"p/q"` strings in the `ζ16` power basis, or `{"re", "im"}`
/// rational strings for a Gaussian rational.
pub fn scalar_from_json(v: &Value) -> Result<ExactScalar> {
    match v {
        Value::Array(items) => {
            let strs = items
                .iter()
                .map(|x| {
                    x.as_str().ok_or_else(|| {
                        bad(format!("exact scalar entries must be strings, got {x}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ExactScalar::from_strings(&strs)
        }
        Value::Object(m) => {
            let part = |key: &str| match m.get(key) {
                None => Ok(num_rational::BigRational::from_integer(0.into())),
                Some(Value::String(s)) => parse_rational(s),
                Some(Value::Number(n)) if n.is_i64() => parse_rational(&n.to_string()),
                Some(x) => Err(bad(format!("{key} must be a rational string, got {x}"))),
            };
            Ok(ExactScalar::gaussian(part("re")?, part("im")?))
        }
        Value::String(s) => Ok(ExactScalar::from_rational(parse_rational(s)?)),
        _ => Err(bad(format!("cannot read exact scalar from {v}"))),
    }
}

pub fn exact_state_to_json(s: &ExactState) -> Value {
    json!({
        "n": s.n(),
        "encoding": "cyclotomic16",
        "amplitudes": s.amplitudes().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

pub fn float_state_to_json(s: &FloatState) -> Value {
    json!({
        "n": s.n(),
        "encoding": "float",
        "amplitudes": s.amplitudes().iter().map(|z| complex_to_json(*z)).collect::<Vec<_>>(),
    })
}

pub fn state_to_json(s: &AnyState) -> Value {
    match s {
        AnyState::Exact(s) => exact_state_to_json(s),
        AnyState::Float(s) => float_state_to_json(s),
    }
}

/// Reads `{"n", "encoding": "cyclotomic16" | "float", "amplitudes"}`.
pub fn state_from_json(v: &Value) -> Result<AnyState> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("state must be a JSON object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("state needs an integer \"n\""))? as usize;
    if n > 30 {
        return Err(Error::UnsupportedQubitCount {
            n,
            reason: "dense state files are limited to 30 qubits",
        });
    }
    let amps = obj
        .get("amplitudes")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("state needs an \"amplitudes\" array"))?;
    match obj
        .get("encoding")
        .and_then(Value::as_str)
        .unwrap_or("cyclotomic16")
    {
        "cyclotomic16" => Ok(AnyState::Exact(ExactState::new(
            n,
            amps.iter().map(scalar_from_json).collect::<Result<_>>()?,
        )?)),
        "float" => Ok(AnyState::Float(FloatState::new(
            n,
            amps.iter().map(complex_from_json).collect::<Result<_>>()?,
        )?)),
        e => Err(bad(format!("unknown state encoding {e:?}"))),
    }
}

pub fn exact_state_from_json(v: &Value) -> Result<ExactState> {
    match state_from_json(v)? {
        AnyState::Exact(s) => Ok(s),
        AnyState::Float(_) => Err(bad("an exact (cyclotomic16) state is required")),
    }
}

pub fn float_state_from_json(v: &Value) -> Result<FloatState> {
    Ok(match state_from_json(v)? {
        AnyState::Exact(s) => s.to_float(),
        AnyState::Float(s) => s,
    })
}

fn coeff_to_json(c: &Coeff) -> Value {
    match c {
        Coeff::Exact(x) => scalar_to_json(x),
        Coeff::Float(z) => complex_to_json(*z),
    }
}

/// An exact coefficient is an array of eight strings or a `{"re", "im"}` object; a
/// float coefficient is `[re, im]` numbers.
fn coeff_from_json(v: &Value) -> Result<Coeff> {
    match v.as_array() {
        Some(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            Ok(Coeff::Float(complex_from_json(v)?))
        }
        _ => Ok(Coeff::Exact(scalar_from_json(v)?)),
    }
}

/// Writes `{"n", "target", "terms": [{"coeff", "state" | "stabilizer"}]}`.
///
/// With `stabs`, exact term states that appear verbatim in the set are written as
/// `{"stabilizer": index}` references.
pub fn decomposition_to_json(d: &Decomposition, stabs: Option<&StabilizerSet>) -> Value {
    let terms: Vec<Value> = d
        .terms()
        .iter()
        .map(|t| {
            let mut m = Map::new();
            m.insert("coeff".into(), coeff_to_json(&t.coeff));
            let reference = match (&t.state, stabs) {
                (TermState::Exact(s), Some(set)) => {
                    set.index_of(s).filter(|&i| set.get(i) == Some(s))
                }
                _ => None,
            };
            match (reference, &t.state) {
                (Some(i), _) => m.insert("stabilizer".into(), json!(i)),
                (None, TermState::Exact(s)) => m.insert("state".into(), exact_state_to_json(s)),
                (None, TermState::Float(s)) => m.insert("state".into(), float_state_to_json(s)),
            };
            Value::Object(m)
        })
        .collect();
    let target = match d.target() {
        Target::HTensor => json!("H"),
        Target::State(s) => float_state_to_json(s),
    };
    json!({ "n": d.n(), "target": target, "terms": terms })
}

/// Reads a decomposition file. `{"stabilizer": i}` terms index the enumerated
/// stabilizer set of `n` qubits, in the order written by [`stabilizers_to_json`].
pub fn decomposition_from_json(v: &Value) -> Result<Decomposition> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("decomposition must be a JSON object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("decomposition needs an integer \"n\""))? as usize;
    let target = match obj.get("target") {
        None => Target::HTensor,
        Some(Value::String(s)) if s == "H" => Target::HTensor,
        Some(t @ Value::Object(_)) => Target::State(float_state_from_json(t)?),
        Some(t) => return Err(bad(format!("unknown decomposition target {t}"))),
    };
    let items = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("decomposition needs a \"terms\" array"))?;
    let mut stabs: Option<StabilizerSet> = None;
    let mut terms = Vec::with_capacity(items.len());
    for (j, item) in items.iter().enumerate() {
        let coeff = coeff_from_json(
            item.get("coeff")
                .ok_or_else(|| bad(format!("term {j} has no \"coeff\"")))?,
        )?;
        let state = match (
            item.get("state"),
            item.get("stabilizer").and_then(Value::as_u64),
        ) {
            (Some(s), None) => match state_from_json(s)? {
                AnyState::Exact(s) => TermState::Exact(s),
                AnyState::Float(s) => TermState::Float(s),
            },
            (None, Some(i)) => {
                if stabs.is_none() {
                    stabs = Some(enumerate_stabilizers(n)?);
                }
                let set = stabs.as_ref().expect("just enumerated");
                let s = set.get(i as usize).ok_or_else(|| {
                    bad(format!(
                        "stabilizer index {i} out of range ({} states)",
                        set.len()
                    ))
                })?;
                TermState::Exact(s.clone())
            }
            _ => {
                return Err(bad(format!(
                    "term {j} needs exactly one of \"state\" or \"stabilizer\""
                )))
            }
        };
        terms.push(Term { coeff, state });
    }
    Decomposition::new(n, terms, target)
}

/// `{"n", "count", "states": [{"index", "state"}]}`.
pub fn stabilizers_to_json(set: &StabilizerSet) -> Value {
    let states: Vec<Value> = set
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| json!({ "index": i, "state": exact_state_to_json(s) }))
        .collect();
    json!({ "n": set.n(), "count": set.len(), "states": states })
}

pub fn norm_result_to_json(r: &NormResult) -> Value {
    json!({
        "value": format_rational(&r.value),
        "minimal_vector": exact_state_to_json(&r.minimal_vector),
        "scaling": scalar_to_json(&r.scaling),
    })
}

pub fn bw_norm_to_json(r: &BwNorm) -> Value {
    match r {
        BwNorm::Finite(r) => norm_result_to_json(r),
        BwNorm::Infinite => json!({ "value": "infinite" }),
    }
}

pub fn ndelta_witness_to_json(w: &NDeltaWitness) -> Value {
    json!({
        "bound": w.bound,
        "c": w.c,
        "witness": exact_state_to_json(&w.witness),
        "coefficients": serde_json::to_value(&w.coefficients).expect("gaussian integers serialize"),
        "distance": w.distance,
        "certified": w.certified,
        "attempts": w.attempts,
    })
}

fn gate_to_json(g: &Gate) -> Value {
    match g {
        Gate::UnitPhase(u) => json!({ "gate": g.name(), "qubits": [], "phase": u.power() }),
        _ => json!({ "gate": g.name(), "qubits": g.qubits() }),
    }
}

/// Writes `{"n", "ops": [...]}`; each op is `{"gate", "qubits"}` or
/// `{"measure": {"qubit", "basis", "outcome"}}`.
pub fn circuit_to_json(c: &Circuit) -> Value {
    let ops: Vec<Value> = c
        .ops
        .iter()
        .map(|op| match op {
            Op::Gate(g) => gate_to_json(g),
            Op::Measure {
                qubit,
                basis,
                outcome,
            } => {
                json!({ "measure": { "qubit": qubit, "basis": basis, "outcome": outcome } })
            }
        })
        .collect();
    json!({ "n": c.n, "ops": ops })
}

/// Reads a circuit: either a bare op list or `{"n", "ops"}`. Without `n` the qubit
/// count is `n_hint`, or one more than the largest qubit index used. An op carrying
/// both `"gate"` and `"measure"` applies the gate first.
pub fn circuit_from_json(v: &Value, n_hint: Option<usize>) -> Result<Circuit> {
    let (n_field, items) = match v {
        Value::Array(items) => (None, items),
        Value::Object(m) => (
            m.get("n").and_then(Value::as_u64).map(|n| n as usize),
            m.get("ops")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("circuit object needs an \"ops\" array"))?,
        ),
        _ => return Err(bad("circuit must be a list of ops or an object")),
    };
    let mut ops = Vec::new();
    for (j, item) in items.iter().enumerate() {
        let obj = item
            .as_object()
            .ok_or_else(|| bad(format!("op {j} is not an object")))?;
        if let Some(name) = obj.get("gate") {
            let name = name
                .as_str()
                .ok_or_else(|| bad(format!("op {j}: gate name must be a string")))?;
            let qubits = obj
                .get("qubits")
                .and_then(Value::as_array)
                .map(|qs| {
                    qs.iter()
                        .map(|q| {
                            q.as_u64()
                                .map(|q| q as usize)
                                .ok_or_else(|| bad(format!("op {j}: bad qubit {q}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?
                .unwrap_or_default();
            let phase = obj
                .get("phase")
                .and_then(Value::as_u64)
                .map(|p| (p % 4) as u8);
            ops.push(Op::Gate(Gate::from_parts(name, &qubits, phase)?));
        }
        if let Some(m) = obj.get("measure") {
            let qubit = m
                .get("qubit")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(format!("op {j}: measure needs \"qubit\"")))?
                as usize;
            let basis: Basis = match m.get("basis") {
                None => Basis::Z,
                Some(b) => serde_json::from_value(b.clone())
                    .map_err(|_| bad(format!("op {j}: basis must be \"Z\" or \"X\", got {b}")))?,
            };
            let outcome = m
                .get("outcome")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(format!("op {j}: measure needs \"outcome\"")))?;
            if outcome > 1 {
                return Err(bad(format!("op {j}: outcome must be 0 or 1")));
            }
            ops.push(Op::Measure {
                qubit,
                basis,
                outcome: outcome as u8,
            });
        }
        if !obj.contains_key("gate") && !obj.contains_key("measure") {
            return Err(bad(format!("op {j} has neither \"gate\" nor \"measure\"")));
        }
    }
    let used = ops
        .iter()
        .flat_map(|op| match op {
            Op::Gate(g) => g.qubits(),
            Op::Measure { qubit, .. } => vec![*qubit],
        })
        .max()
        .map_or(1, |q| q + 1);
    Circuit::new(n_field.or(n_hint).unwrap_or(used), ops)
}
