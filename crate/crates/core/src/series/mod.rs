//! Exact Poisson-series algebra and Lie-transform normalization.
//!
//! Everything here is exact rational arithmetic. Series live in the scaled chart
//! where the energy is measured in units of `alpha / C` and the Keplerian-like
//! term `G^2 / 2C` (which Poisson-commutes with everything) is dropped:
//!
//! ```text
//! K = sigma L G - (1/2) L^2 (1 + beta cos 2l)
//! ```

pub mod deprit;
pub mod extract;
pub mod poisson;
pub mod ring;

pub use deprit::{deprit_normalize, sam_hamiltonian, CoordinateMaps, DepritResult, MAX_SUPPORTED_ORDER};
pub use extract::extract_tables;
pub use poisson::{
    average_over_angle, poisson_bracket, series_add, series_mul, solve_homological, Frequency, PoissonSeries,
    PoissonTerm, Trig,
};
pub use ring::{Rational, RingCoefficient};
