//! Exact Clifford+CS gates, circuits with post-selection, stabilizer enumeration and
//! the CS-injection checks.

mod gates;
mod injection;
mod stabilizers;

pub use gates::{
    apply_gate, apply_gate_in_place, inv_one_plus_i, project, random_clifford_circuit,
    random_clifford_gate, random_cs_circuit, run_circuit, Basis, Circuit, Gate, Op,
};
pub use injection::{cs_count_check, cs_injection_check, cs_state, CsCountReport, InjectionReport};
pub use stabilizers::{
    canonical_phase, enumerate_stabilizers, enumerate_stabilizers_with, generators, StabilizerSet,
    MAX_DEFAULT_QUBITS,
};
