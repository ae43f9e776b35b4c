//! Short-axis-mode (SAM) rotation of a torque-free rigid body.
//!
//! The crate is organised bottom-up:
//!
//! * [`rigid`]: inertia parameters, the Andoyer-variable Hamiltonian in its
//!   equivalent forms, the SAM perturbation split and the SAM/LAM parameter map.
//! * [`action_angle`]: the exact canonical map between Andoyer variables and the
//!   action-angle variables `(l, g, L, G)` of the integrable main problem.
//! * [`series`]: exact-rational Poisson series and Deprit's Lie-transform
//!   normalization, which regenerates the coefficient tables of the theory.
//! * [`theory`]: baked coefficient tables, averaged Hamiltonian, secular
//!   frequencies, mean/osculating maps, series propagation and consistency checks.
//! * [`oracle`]: high-accuracy numerical integration of the exact equations of
//!   motion, used as ground truth.
//! * [`contours`]: level sets of the scaled reduced Hamiltonians.
//!
//! Units are canonical: the dynamics only depend on ratios of moments and on
//! `M^2 / C`, so callers typically work with `C = 1`, `M = 1`.

pub mod action_angle;
pub mod angle;
pub mod contours;
mod error;
pub mod oracle;
pub mod real;
pub mod rigid;
pub mod series;
pub mod theory;

pub use action_angle::{from_action_angle, to_action_angle, ActionAngleState};
pub use error::{Error, Result};
pub use oracle::{integrate, integrate_at, TrajectorySample};
pub use rigid::{AndoyerState, EnergySplit, InertiaParams, LamParams};
pub use theory::{MeanElements, SamTheory, SamTheoryTables};
