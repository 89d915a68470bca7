//! Brute-force stabilizer rank and fidelity oracles, and numerical checks of the
//! extent, Gram-determinant and fidelity-versus-rank bounds.

mod bounds;
mod rank;
mod ring;

pub use bounds::{
    extent_bound, extent_check, fidelity_rank_check, gram_analysis, stab_fidelity, ExtentReport,
    Fidelity, FidelityRankReport, GramReport,
};
pub use rank::{
    exact_rank, product_rank_experiment, ProductExperiment, ProductFailure, RankResult,
};
pub use ring::{last_in_span, pivot_columns, rank, BareissRing, SmallGauss};
