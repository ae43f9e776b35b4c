//! Cross-checks against the classical power series in the minimum
//! inclination `j` of the exact torque-free solution.
//!
//! The minimum inclination satisfies `1 - cos j = (1 - beta) d` with
//! `d = L/(G sigma)`; to the order of `j^2` this reads
//! `j^2 / 2 = sqrt((1 - beta)/(1 + beta)) L'/G'`. The checks take `j` from the
//! exact relation at the mean elements and compare the table-driven theory with
//! expansions truncated after `j^2`, so every residual is `O(j^4)`.

use serde::Serialize;

use super::{MeanElements, SamTheory};
use crate::action_angle::from_action_angle;
use crate::error::Result;
use crate::real::Real;

/// `j` from the mean elements through the `j^2` relation.
pub fn kinoshita_j<T: Real>(m: &MeanElements<T>, beta: T) -> T {
    let one = T::one();
    (T::of(2.0) * ((one - beta) / (one + beta)).sqrt() * m.big_l / m.big_g).sqrt()
}

/// `j` from the exact relation `1 - cos j = (1 - beta) d`, `d = L/(G sigma)`.
pub fn kinoshita_j_exact<T: Real>(d: T, beta: T) -> T {
    let u = (T::one() - beta) * d;
    (u * (T::of(2.0) - u)).sqrt().atan2(T::one() - u)
}

/// Residuals of the `j` expansions against the theory, in natural units:
/// frequencies are divided by `alpha G'/C`, `N` by `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KinoshitaReport {
    pub j: f64,
    /// `n_l` against `alpha (G'/C) sigma [1 - j^2 / (2(1 - beta))]`.
    pub nl_residual: f64,
    /// `n_g + n_l` against `G'/C + alpha (G'/C)[1 - (1 - sigma)(1 + sqrt((1+beta)/(1-beta)) j^2/2)]`.
    pub ng_nl_residual: f64,
    /// `N` against `M (1 - j^2/2 - beta/(1-beta) j^2 cos^2 l')`.
    pub n_residual: f64,
    /// `n_l` against the form carrying the extra `-3 beta^2 j^4 / (16 (1-beta)^2)` term.
    pub nl_bracket_residual: f64,
    /// `n_g + n_l` against the combined form with `(1 - j^2 ...)` in place of
    /// `(1 + j^2 ...)`; that sign leaves an `O(j^2)` discrepancy.
    pub ng_nl_printed_residual: f64,
}

impl KinoshitaReport {
    /// The three residuals that are expected to be `O(j^4)`.
    pub fn primary(&self) -> [(&'static str, f64); 3] {
        [
            ("n_l", self.nl_residual),
            ("n_g + n_l", self.ng_nl_residual),
            ("N", self.n_residual),
        ]
    }
}

impl SamTheory {
    pub fn kinoshita_checks<T: Real>(&self, m: &MeanElements<T>, alpha: T, beta: T, c: T) -> Result<KinoshitaReport> {
        let one = T::one();
        let two = T::of(2.0);
        let half = T::of(0.5);
        let sigma = (one - beta * beta).sqrt();
        let j = kinoshita_j_exact(m.delta_prime(beta)?, beta);
        let j2 = j * j;
        let (nl, ng) = self.secular_frequencies(m, alpha, beta, c)?.value;
        let unit = alpha * m.big_g / c;

        let nl_j2 = unit * sigma * (one - j2 / (two * (one - beta)));
        let nl_j4 = nl_j2 - unit * sigma * T::of(3.0) * beta * beta / (T::of(16.0) * (one - beta) * (one - beta)) * j2 * j2;

        let root = ((one + beta) / (one - beta)).sqrt();
        let combined = |sign: T| m.big_g / c + unit * (one - (one - sigma) * (one + sign * half * root * j2));

        let osc = self.mean_to_osculating(m, beta)?.value;
        let n = from_action_angle(&osc, beta)?.n;
        let cl = m.l.cos();
        let n_j2 = m.big_g * (one - half * j2 - beta / (one - beta) * j2 * cl * cl);

        Ok(KinoshitaReport {
            j: j.as_f64(),
            nl_residual: ((nl - nl_j2) / unit).as_f64(),
            ng_nl_residual: ((ng + nl - combined(one)) / unit).as_f64(),
            n_residual: ((n - n_j2) / m.big_g).as_f64(),
            nl_bracket_residual: ((nl - nl_j4) / unit).as_f64(),
            ng_nl_printed_residual: ((ng + nl - combined(-one)) / unit).as_f64(),
        })
    }
}
