//! Fidelity amplification of approximate stabilizer decompositions of `|H⟩^⊗n`.

mod compose;
mod lattice;
mod step;

pub use compose::{
    compose, rank_scaling_experiment, rounds_needed, theoretical_slope, zero_base, ComposeReport,
    ScalingPoint, ScalingReport,
};
pub use lattice::{
    lattice_track_run, write_lattice_csv, LatticeRoundReport, MaskPolicy, MAX_LATTICE_QUBITS,
};
pub use step::{
    amplify, amplify_step, decomp_apply_unitary, mask_string, parse_mask, relative_error_h,
    AmplifyOptions, AmplifyReport, MaskMode, DEFAULT_TERM_BUDGET, MAX_EXHAUSTIVE_QUBITS,
};
