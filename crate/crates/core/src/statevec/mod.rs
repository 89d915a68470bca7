//! Dense exact and double-precision state vectors, stabilizer decompositions and
//! seeded random states.

mod decomposition;
mod exact;
mod float;
mod random;

pub use decomposition::{Coeff, Decomposition, Target, Term, TermState, MERGE_TOL};
pub use exact::ExactState;
pub use float::{h_amplitudes, relative_error, FloatState};
pub use random::{
    random_exact_state, random_gaussian_rational, random_haar_state, random_product_state,
    random_rational_parts, random_state, rng_from_seed, AnyState, RandomKind, RATIONAL_BOUND,
};
