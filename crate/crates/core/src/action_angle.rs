//! Exact canonical map between Andoyer variables and the action-angle
//! variables `(l, g, L, G)` of the SAM main problem.
//!
//! With `sigma = sqrt(1 - beta^2)`:
//!
//! ```text
//! sin nu = -sqrt(1-beta) sin l / sqrt(1 + beta cos 2l)    cos nu = sqrt(1+beta) cos l / sqrt(1 + beta cos 2l)
//! mu = g - nu,   M = G,   N = G - L (1 + beta cos 2l) / sigma
//! ```
//!
//! and conversely
//!
//! ```text
//! sin l = -sqrt(1+beta) sin nu / sqrt(1 - beta cos 2nu)   cos l = sqrt(1-beta) cos nu / sqrt(1 - beta cos 2nu)
//! g = mu + nu,   G = M,   L = (M - N)(1 - beta cos 2nu) / sigma
//! ```
//!
//! The map is a Mathieu transformation: `M dmu + N dnu = L dl + G dg`.
//! Quadrants are resolved with `atan2` on the (sin, cos) pairs, which makes
//! `l = -nu` at `beta = 0` and keeps the branch continuous for `beta < 1`.

use serde::{Deserialize, Serialize};

use crate::angle;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rigid::AndoyerState;

const PROLATE_GUARD: f64 = 1e-12;

/// Action-angle variables of the main problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionAngleState<T = f64> {
    pub l: T,
    pub g: T,
    pub big_l: T,
    pub big_g: T,
}

impl<T: Real> ActionAngleState<T> {
    pub fn new(l: T, g: T, big_l: T, big_g: T) -> Result<Self> {
        let finite = l.is_finite() && g.is_finite() && big_l.is_finite();
        if !(big_g > T::zero()) || !(big_l >= T::zero()) || !finite {
            return Err(Error::InvalidInput(format!(
                "action-angle state needs G > 0 and L >= 0 (got L={big_l}, G={big_g})"
            )));
        }
        Ok(Self {
            l: angle::normalize(l),
            g: angle::normalize(g),
            big_l,
            big_g,
        })
    }
}

/// `sqrt(1 - beta^2)` with the prolate guard.
pub(crate) fn sigma_checked<T: Real>(beta: T) -> Result<T> {
    let s2 = T::one() - beta * beta;
    if !(s2 >= T::of(PROLATE_GUARD)) {
        return Err(Error::ProlateSingularity { beta: beta.as_f64() });
    }
    Ok(s2.sqrt())
}

fn check_beta<T: Real>(beta: T) -> Result<()> {
    if beta < T::zero() {
        return Err(Error::InvalidInput(format!("beta must be >= 0, got {beta}")));
    }
    Ok(())
}

/// `Psi = sqrt(1 - beta^2) L`, the momentum function selecting the action-angle chart.
pub fn psi<T: Real>(big_l: T, beta: T) -> T {
    (T::one() - beta * beta).sqrt() * big_l
}

pub fn to_action_angle<T: Real>(s: &AndoyerState<T>, beta: T) -> Result<ActionAngleState<T>> {
    let sigma = sigma_checked(beta)?;
    check_beta(beta)?;
    if s.n <= T::zero() {
        return Err(Error::Symmetry { n: s.n.as_f64() });
    }
    let one = T::one();
    let (sn, cn) = s.nu.sin_cos();
    let l = (-(one + beta).sqrt() * sn).atan2((one - beta).sqrt() * cn);
    let cos2nu = (cn - sn) * (cn + sn);
    let big_l = (s.m - s.n) * (one - beta * cos2nu) / sigma;
    Ok(ActionAngleState {
        l: angle::normalize(l),
        g: angle::normalize(s.mu + s.nu),
        big_l,
        big_g: s.m,
    })
}

/// Inverse map. `lambda` and `Lambda` are not part of the chart and are set to zero;
/// use [`from_action_angle_with`] to carry them.
pub fn from_action_angle<T: Real>(a: &ActionAngleState<T>, beta: T) -> Result<AndoyerState<T>> {
    from_action_angle_with(a, beta, T::zero(), T::zero())
}

pub fn from_action_angle_with<T: Real>(
    a: &ActionAngleState<T>,
    beta: T,
    lambda: T,
    big_lambda: T,
) -> Result<AndoyerState<T>> {
    let sigma = sigma_checked(beta)?;
    check_beta(beta)?;
    let one = T::one();
    let (sl, cl) = a.l.sin_cos();
    let nu = (-(one - beta).sqrt() * sl).atan2((one + beta).sqrt() * cl);
    let cos2l = (cl - sl) * (cl + sl);
    let n = a.big_g - a.big_l * (one + beta * cos2l) / sigma;
    if !(n > T::zero() && n <= a.big_g) {
        return Err(Error::Domain(format!(
            "L={} too large for G={}: N={n} leaves (0, M]",
            a.big_l, a.big_g
        )));
    }
    Ok(AndoyerState {
        lambda: angle::normalize(lambda),
        mu: angle::normalize(a.g - nu),
        nu: angle::normalize(nu),
        big_lambda,
        m: a.big_g,
        n,
    })
}

/// Reduced Hamiltonian of the main problem, `(G^2/2C)(1 + 2 alpha sigma L/G)`.
pub fn reduced_hamiltonian(big_l: f64, big_g: f64, alpha: f64, beta: f64, c: f64) -> f64 {
    let sigma = (1.0 - beta * beta).sqrt();
    big_g * big_g / (2.0 * c) * (1.0 + 2.0 * alpha * sigma * big_l / big_g)
}

/// Full torque-free Hamiltonian in action-angle variables.
pub fn full_hamiltonian_aa<T: Real>(a: &ActionAngleState<T>, alpha: T, beta: T, c: T) -> T {
    let one = T::one();
    let two = T::of(2.0);
    let sigma = (one - beta * beta).sqrt();
    let x = a.big_l / a.big_g;
    let shape = one + beta * (two * a.l).cos();
    a.big_g * a.big_g / (two * c) * (one + two * alpha * sigma * x * (one - x * shape / (two * sigma)))
}

/// `delta = (L/G)(1 + beta cos 2l)/sigma`, equal to `2 sin^2(J/2)` of the Andoyer state.
pub fn delta_aa<T: Real>(a: &ActionAngleState<T>, beta: T) -> Result<T> {
    let sigma = sigma_checked(beta)?;
    Ok(a.big_l / a.big_g * (T::one() + beta * (T::of(2.0) * a.l).cos()) / sigma)
}

/// The auxiliary angle `u` with `tan nu = sqrt((1-beta)/(1+beta)) tan u`.
pub fn u_substitution(nu: f64, beta: f64) -> f64 {
    let (sn, cn) = nu.sin_cos();
    angle::normalize((sn * (1.0 + beta).sqrt()).atan2(cn * (1.0 - beta).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigid::{hamiltonian_andoyer, inclination_and_delta, sam_split, InertiaParams};

    fn state(mu: f64, nu: f64, m: f64, n: f64) -> AndoyerState {
        AndoyerState::new(0.0, mu, nu, 0.0, m, n).unwrap()
    }

    #[test]
    fn axisymmetric_chart() {
        let s = state(0.4, 1.1, 2.0, 1.7);
        let a = to_action_angle(&s, 0.0).unwrap();
        assert!(angle::diff(a.l, -1.1).abs() < 1e-15);
        assert!(angle::diff(a.g, 1.5).abs() < 1e-15);
        assert_eq!(a.big_g, 2.0);
        assert!((a.big_l - 0.3).abs() < 1e-15);
        let back = from_action_angle(&a, 0.0).unwrap();
        assert!(angle::diff(back.nu, 1.1).abs() < 1e-15);
        assert!((back.n - 1.7).abs() < 1e-15);
    }

    #[test]
    fn zero_action_on_axis() {
        for nu in [0.0, 0.7, 3.0, 6.0] {
            let a = to_action_angle(&state(0.0, nu, 1.0, 1.0), 0.7).unwrap();
            assert_eq!(a.big_l, 0.0);
        }
        let a = ActionAngleState::new(0.9, 2.0, 0.0, 1.5).unwrap();
        let s = from_action_angle(&a, 0.6).unwrap();
        assert_eq!(s.n, 1.5);
        assert!(angle::diff(s.mu, 2.0 - s.nu).abs() < 1e-15);
    }

    #[test]
    fn roundtrip_example() {
        let s = state(0.1, 0.7, 1.0, 0.95);
        let a = to_action_angle(&s, 0.8).unwrap();
        let b = from_action_angle(&a, 0.8).unwrap();
        assert!(angle::diff(b.mu, s.mu).abs() < 1e-12);
        assert!(angle::diff(b.nu, s.nu).abs() < 1e-12);
        assert!((b.n - s.n).abs() < 1e-12);
        assert_eq!(b.m, s.m);
    }

    #[test]
    fn errors() {
        let s = state(0.1, 0.7, 1.0, 0.95);
        assert!(matches!(to_action_angle(&s, 1.0), Err(Error::ProlateSingularity { .. })));
        assert!(matches!(to_action_angle(&state(0.0, 0.1, 1.0, -0.2), 0.3), Err(Error::Symmetry { .. })));
        let a = ActionAngleState::new(0.0, 0.0, 5.0, 1.0).unwrap();
        assert!(matches!(from_action_angle(&a, 0.3), Err(Error::Domain(_))));
        assert!(matches!(from_action_angle(&a, 1.0), Err(Error::ProlateSingularity { .. })));
        assert!(ActionAngleState::new(0.0, 0.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn double_angle_identities() {
        let beta: f64 = 0.65;
        let sigma = (1.0 - beta * beta).sqrt();
        for k in 0..1000 {
            let l = 0.00637 * k as f64;
            let a = ActionAngleState::new(l, 0.0, 0.0, 1.0).unwrap();
            let nu = from_action_angle(&a, beta).unwrap().nu;
            let den = 1.0 + beta * (2.0 * l).cos();
            assert!(((2.0 * nu).cos() - (beta + (2.0 * l).cos()) / den).abs() < 1e-13);
            // sin nu carries the opposite sign of sin l, so sin 2nu does too
            assert!(((2.0 * nu).sin() + sigma * (2.0 * l).sin() / den).abs() < 1e-13);
        }
    }

    #[test]
    fn reduced_hamiltonian_properties() {
        assert_eq!(reduced_hamiltonian(0.0, 2.0, 0.5, 0.3, 1.5), 4.0 / 3.0);
        // Hessian in (L, G): Phi = G^2/2C + alpha sigma L G / C
        let (alpha, beta, c) = (0.7, 0.4, 1.3);
        let sigma2 = 1.0 - beta * beta;
        let h = 1e-3;
        let phi = |l: f64, g: f64| reduced_hamiltonian(l, g, alpha, beta, c);
        let (l0, g0) = (0.2, 1.1);
        let fll = (phi(l0 + h, g0) - 2.0 * phi(l0, g0) + phi(l0 - h, g0)) / (h * h);
        let fgg = (phi(l0, g0 + h) - 2.0 * phi(l0, g0) + phi(l0, g0 - h)) / (h * h);
        let flg = (phi(l0 + h, g0 + h) - phi(l0 + h, g0 - h) - phi(l0 - h, g0 + h) + phi(l0 - h, g0 - h))
            / (4.0 * h * h);
        let det = fll * fgg - flg * flg;
        assert!((det + alpha * alpha * sigma2 / (c * c)).abs() < 1e-6, "{det}");
    }

    #[test]
    fn complete_reduction_of_main_problem() {
        let p = InertiaParams::from_alpha_beta(0.9, 0.7, 1.2).unwrap();
        for (l, big_l) in [(0.3, 0.01), (2.0, 0.05), (4.4, 0.1)] {
            let a = ActionAngleState::new(l, 0.5, big_l, 1.0).unwrap();
            let s = from_action_angle(&a, p.beta).unwrap();
            let main = sam_split(&s, &p).unwrap().main;
            let phi = reduced_hamiltonian(big_l, 1.0, p.alpha, p.beta, p.c);
            assert!(((main - phi) / phi).abs() < 1e-13);
        }
    }

    #[test]
    fn full_hamiltonian_values() {
        let a = ActionAngleState::new(1.0, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(full_hamiltonian_aa(&a, 0.3, 0.5, 2.0), 1.0);
        // axisymmetric reduction with L = G - N
        let (g, n, alpha) = (1.5, 1.2, 0.4);
        let a = ActionAngleState::new(0.7, 0.0, g - n, g).unwrap();
        let expected = g * g / 2.0 * (1.0 + alpha * (1.0 - n * n / (g * g)));
        assert!((full_hamiltonian_aa(&a, alpha, 0.0, 1.0) - expected).abs() < 1e-14);
        // Eros through the chain of maps
        let p = InertiaParams::from_moments(0.229427, 0.963754, 1.0).unwrap();
        let s = state(1.0, 2.3, 1.0, 0.999);
        let a = to_action_angle(&s, p.beta).unwrap();
        let k = full_hamiltonian_aa(&a, p.alpha, p.beta, p.c);
        let h = hamiltonian_andoyer(&s, &p);
        assert!(((k - h) / h).abs() < 1e-12);
    }

    #[test]
    fn delta_matches_inclination() {
        assert_eq!(delta_aa(&ActionAngleState::new(0.3, 0.0, 0.0, 1.0).unwrap(), 0.5).unwrap(), 0.0);
        for beta in [0.0, 0.3, 0.8] {
            let a = ActionAngleState::new(1.3, 0.2, 0.02, 1.0).unwrap();
            let s = from_action_angle(&a, beta).unwrap();
            let (_, d) = inclination_and_delta(&s);
            assert!((delta_aa(&a, beta).unwrap() - d).abs() < 1e-13);
        }
    }

    #[test]
    fn u_coincides_with_minus_l() {
        assert!(angle::diff(u_substitution(1.234, 0.0), 1.234).abs() < 1e-15);
        for beta in [0.2, 0.8, 0.95] {
            for k in 0..50 {
                let nu = 0.13 * k as f64;
                let l = to_action_angle(&state(0.0, nu, 1.0, 0.9), beta).unwrap().l;
                assert!(angle::diff(u_substitution(nu, beta), -l).abs() < 1e-13);
                // tan nu = sqrt((1-b)/(1+b)) tan u, checked through sin/cos
                let u = u_substitution(nu, beta);
                let den = ((1.0 - beta) * u.sin().powi(2) + (1.0 + beta) * u.cos().powi(2)).sqrt();
                assert!((nu.sin() - (1.0 - beta).sqrt() * u.sin() / den).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn u_differential_identity() {
        // d nu / d u = sigma / (1 + beta cos 2u)
        let beta: f64 = 0.7;
        let sigma = (1.0 - beta * beta).sqrt();
        let nu_of_u = |u: f64| {
            let (su, cu) = u.sin_cos();
            ((1.0 - beta).sqrt() * su).atan2((1.0 + beta).sqrt() * cu)
        };
        let h = 1e-5;
        for k in 0..40 {
            let u = 0.151 * k as f64 + 0.01;
            let fd = angle::diff(nu_of_u(u + h), nu_of_u(u - h)) / (2.0 * h);
            assert!((fd - sigma / (1.0 + beta * (2.0 * u).cos())).abs() < 1e-8);
        }
    }
}
