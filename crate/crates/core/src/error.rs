use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Moments are not ordered A <= B <= C.
    #[error(
        "moments must satisfy A <= B <= C (got A={a}, B={b}, C={c}); for rotation about the \
         axis of minimum inertia relabel the moments (see `rigid::lam_params`)"
    )]
    Ordering { a: f64, b: f64, c: f64 },

    /// The theory is built for N > 0; the N < 0 half is its mirror image.
    #[error("N must be positive (got N={n}); map N -> -N with `AndoyerState::mirrored` first")]
    Symmetry { n: f64 },

    #[error("scaled energies are undefined for a spherical rotor (alpha = 0)")]
    DegenerateScaling,

    #[error("triaxiality beta={beta} is too close to the prolate limit (1 - beta^2 < 1e-12)")]
    ProlateSingularity { beta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested order {requested} exceeds the supported maximum {supported}")]
    Capacity { requested: usize, supported: usize },

    #[error("series shape error: {0}")]
    Shape(String),

    #[error("homological equation has no periodic solution: {0}")]
    Homological(String),

    #[error("mean element inversion did not converge in {iterations} iterations (last change {last_change:e})")]
    Inversion { iterations: usize, last_change: f64 },

    #[error("integrator step size collapsed to {h:e} at t={t}")]
    Stiffness { t: f64, h: f64 },

    #[error("table parse error at line {line}: {message}")]
    TableParse { line: usize, message: String },
}
