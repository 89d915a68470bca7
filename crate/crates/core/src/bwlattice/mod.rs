//! Barnes Wall lattice membership, the norm `N`, measurement splits and `N_δ` witnesses.

mod dual;
mod norm;
mod rounding;

pub use dual::{
    dual_transform, is_member, reduce_proportional_minimal, DualCoords, MembershipReport,
};
pub use norm::{
    bw_norm, check_measurement_monotone, measurement_split, BwNorm, MeasurementCheck,
    MonotoneReport, NormResult, PauliBasis,
};
pub use rounding::{
    check_ndelta_witness, lattice_round, n_delta_upper, NDeltaWitness, RoundingResult,
    WitnessCheck, DEFAULT_ROUNDING_BUDGET,
};
