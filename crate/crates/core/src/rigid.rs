//! Inertia parameterizations and the torque-free Hamiltonian in Andoyer variables.
//!
//! The Hamiltonian is available in three equivalent forms:
//!
//! * [`hamiltonian_andoyer`]: principal moments `A, B, C` directly,
//! * [`hamiltonian_reordered`]: Andoyer's `(alpha, beta)` parameters,
//! * [`sam_split`]: the short-axis-mode arrangement `main + perturbation`,
//!   where the main part depends on `1 - N/M` linearly and the perturbation
//!   quadratically.

use serde::{Deserialize, Serialize};

use crate::angle;
use crate::error::{Error, Result};
use crate::real::Real;

const AXISYMMETRY_SNAP: f64 = 1e-15;

/// Andoyer variables `(lambda, mu, nu, Lambda, M, N)`.
///
/// `M` is the magnitude of the angular momentum, `N` its projection on the body
/// axis of maximum inertia and `Lambda` its projection on the inertial z axis.
/// `lambda` and `Lambda` are integrals of the torque-free motion and are carried
/// through unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AndoyerState<T = f64> {
    pub lambda: T,
    pub mu: T,
    pub nu: T,
    pub big_lambda: T,
    pub m: T,
    pub n: T,
}

impl<T: Real> AndoyerState<T> {
    /// Validated constructor; angles are reduced to `[0, 2pi)`.
    pub fn new(lambda: T, mu: T, nu: T, big_lambda: T, m: T, n: T) -> Result<Self> {
        let finite = [lambda, mu, nu, big_lambda, m, n].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidInput("non-finite Andoyer variable".into()));
        }
        if m <= T::zero() {
            return Err(Error::InvalidInput(format!("M must be positive, got {m}")));
        }
        if n.abs() > m {
            return Err(Error::InvalidInput(format!("|N| = {} exceeds M = {m}", n.abs())));
        }
        if big_lambda.abs() > m {
            return Err(Error::InvalidInput(format!("|Lambda| = {} exceeds M = {m}", big_lambda.abs())));
        }
        Ok(Self {
            lambda: angle::normalize(lambda),
            mu: angle::normalize(mu),
            nu: angle::normalize(nu),
            big_lambda,
            m,
            n,
        })
    }

    /// State with inclination `J` between the body equator and the invariable
    /// plane, i.e. `N = M cos J`. `lambda = Lambda = 0`.
    pub fn from_inclination(inclination: T, mu: T, nu: T, m: T) -> Result<Self> {
        Self::new(T::zero(), mu, nu, T::zero(), m, m * inclination.cos())
    }

    /// The mirror image `(nu, N) -> (-nu, -N)`.
    ///
    /// The reduced flow is invariant under this map, so states with `N < 0`
    /// can be handled by mirroring, propagating and mirroring back.
    pub fn mirrored(&self) -> Self {
        Self {
            nu: angle::normalize(-self.nu),
            n: -self.n,
            ..*self
        }
    }

    /// `N / M`, the cosine of the inclination.
    pub fn cos_inclination(&self) -> T {
        self.n / self.m
    }
}

/// Principal moments with Andoyer's non-sphericity `alpha` and triaxiality `beta`,
/// linked by `alpha (1 + beta) = C/A - 1` and `alpha (1 - beta) = C/B - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertiaParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl InertiaParams {
    /// `inertia_from_moments`: requires `0 < A <= B <= C`.
    pub fn from_moments(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a <= 0.0 || b <= 0.0 || c <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "principal moments must be positive and finite (A={a}, B={b}, C={c})"
            )));
        }
        if !(a <= b && b <= c) {
            return Err(Error::Ordering { a, b, c });
        }
        let (alpha, beta) = andoyer_parameters(a, b, c);
        Ok(Self {
            a,
            b,
            c,
            alpha,
            beta: snap_beta(beta),
        })
    }

    /// Moments reconstructed from `(alpha, beta, C)`.
    pub fn from_alpha_beta(alpha: f64, beta: f64, c: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidInput(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidInput(format!("beta must lie in [0, 1], got {beta}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidInput(format!("C must be positive, got {c}")));
        }
        Ok(Self {
            a: c / (1.0 + alpha * (1.0 + beta)),
            b: c / (1.0 + alpha * (1.0 - beta)),
            c,
            alpha,
            beta: snap_beta(beta),
        })
    }

    /// `sqrt(1 - beta^2)`.
    pub fn sigma(&self) -> f64 {
        (1.0 - self.beta * self.beta).sqrt()
    }
}

fn snap_beta(beta: f64) -> f64 {
    if beta.abs() < AXISYMMETRY_SNAP {
        0.0
    } else if (1.0 - beta).abs() < AXISYMMETRY_SNAP {
        1.0
    } else {
        beta
    }
}

/// Andoyer parameters for moments taken in the order `(first, second, third)`:
/// `alpha (1 + beta) = third/first - 1`, `alpha (1 - beta) = third/second - 1`.
///
/// No ordering is assumed, so this also yields the LAM parameters when called
/// with the moments relabeled as `(C, B, A)`.
pub fn andoyer_parameters(first: f64, second: f64, third: f64) -> (f64, f64) {
    let p = third / first - 1.0;
    let q = third / second - 1.0;
    let alpha = 0.5 * (p + q);
    let beta = if alpha != 0.0 { 0.5 * (p - q) / alpha } else { 0.0 };
    (alpha, beta)
}

/// Torque-free Hamiltonian written with the principal moments.
pub fn hamiltonian_andoyer(s: &AndoyerState, p: &InertiaParams) -> f64 {
    let (sn, cn) = s.nu.sin_cos();
    (sn * sn / p.a + cn * cn / p.b) * (s.m * s.m - s.n * s.n) / 2.0 + s.n * s.n / (2.0 * p.c)
}

/// Same Hamiltonian in Andoyer's `(alpha, beta)` arrangement.
pub fn hamiltonian_reordered(s: &AndoyerState, p: &InertiaParams) -> f64 {
    let x = s.n / s.m;
    let sin2 = (1.0 - x) * (1.0 + x);
    s.m * s.m / (2.0 * p.c)
        * (1.0 + p.alpha * sin2 - p.alpha * p.beta * sin2 * (2.0 * s.nu).cos())
}

/// Split of the Hamiltonian into the integrable SAM main problem and its
/// perturbation. `epsilon` is the formal book-keeping parameter (always 1 here).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySplit {
    pub total: f64,
    pub main: f64,
    pub perturbation: f64,
    pub epsilon: f64,
}

/// SAM split of the Hamiltonian. Only defined for `N > 0`.
pub fn sam_split(s: &AndoyerState, p: &InertiaParams) -> Result<EnergySplit> {
    if s.n <= 0.0 {
        return Err(Error::Symmetry { n: s.n });
    }
    let scale = s.m * s.m / (2.0 * p.c);
    let one_minus = (s.m - s.n) / s.m;
    let shape = 1.0 - p.beta * (2.0 * s.nu).cos();
    let main = scale * (1.0 + 2.0 * p.alpha * one_minus * shape);
    let perturbation = -scale * p.alpha * one_minus * one_minus * shape;
    let epsilon = 1.0;
    Ok(EnergySplit {
        total: main + epsilon * perturbation,
        main,
        perturbation,
        epsilon,
    })
}

/// Inclination `J` (with `cos J = N/M`) and `delta = 2 sin^2(J/2)`.
pub fn inclination_and_delta(s: &AndoyerState) -> (f64, f64) {
    let perp = ((s.m - s.n) * (s.m + s.n)).max(0.0).sqrt();
    let j = perp.atan2(s.n);
    (j, delta_from_inclination(j))
}

/// `2 sin^2(J/2)`, which equals `1 - cos J` without the cancellation.
pub fn delta_from_inclination(inclination: f64) -> f64 {
    let h = (0.5 * inclination).sin();
    2.0 * h * h
}

/// Inertia parameters of the long-axis-mode arrangement, obtained by
/// interchanging the moments of maximum and minimum inertia.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LamParams {
    pub alpha_star: f64,
    pub beta_star: f64,
}

/// Orientation of the angular momentum relative to the body's minimum-inertia axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LamAngles {
    /// Angle between the plane normal to the body x axis and the invariable plane.
    pub j_star: f64,
    /// Angle of the node of that plane, measured from the body y axis.
    pub nu_star: f64,
}

pub fn lam_params(p: &InertiaParams) -> LamParams {
    let (alpha_star, beta_star) = andoyer_parameters(p.c, p.b, p.a);
    LamParams { alpha_star, beta_star }
}

/// Closed form `beta* = (1 - beta) / (1 + 3 beta)`.
pub fn lam_beta_star(beta: f64) -> f64 {
    (1.0 - beta) / (1.0 + 3.0 * beta)
}

/// LAM angles of a state. Body-frame angular momentum is
/// `(sqrt(M^2-N^2) sin nu, sqrt(M^2-N^2) cos nu, N)`.
pub fn lam_angles(s: &AndoyerState) -> LamAngles {
    let perp = ((s.m - s.n) * (s.m + s.n)).max(0.0).sqrt();
    let (sn, cn) = s.nu.sin_cos();
    let mx = perp * sn;
    let my = perp * cn;
    let j_star = (my.hypot(s.n)).atan2(mx);
    LamAngles {
        j_star,
        nu_star: angle::normalize(my.atan2(s.n)),
    }
}

/// LAM form of the Hamiltonian, `M^2/(2A) [1 + alpha* sin^2 J* (1 + beta* cos 2 nu*)]`.
pub fn hamiltonian_lam(s: &AndoyerState, p: &InertiaParams) -> f64 {
    let lam = lam_params(p);
    let ang = lam_angles(s);
    let sj = ang.j_star.sin();
    s.m * s.m / (2.0 * p.a)
        * (1.0 + lam.alpha_star * sj * sj * (1.0 + lam.beta_star * (2.0 * ang.nu_star).cos()))
}

/// Scaled non-constant parts of the full Hamiltonian (`h0star`) and of the
/// main problem (`astar`): `(2 C H / M^2 - 1) / alpha`.
///
/// They satisfy `h0star = astar - (1 - N/M)^2 (1 - beta cos 2nu)`.
pub fn scaled_energies(nu: f64, n_over_m: f64, p: &InertiaParams) -> Result<(f64, f64)> {
    if p.alpha == 0.0 {
        return Err(Error::DegenerateScaling);
    }
    if !(0.0..=1.0).contains(&n_over_m) {
        return Err(Error::InvalidInput(format!("N/M must lie in [0, 1], got {n_over_m}")));
    }
    Ok(scaled_energies_beta(nu, n_over_m, p.beta))
}

/// [`scaled_energies`] without the `alpha` check; the scaled forms depend on `beta` only.
pub fn scaled_energies_beta(nu: f64, n_over_m: f64, beta: f64) -> (f64, f64) {
    let shape = 1.0 - beta * (2.0 * nu).cos();
    let w = 1.0 - n_over_m;
    let h0star = w * (1.0 + n_over_m) * shape;
    let astar = 2.0 * w * shape;
    (h0star, astar)
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn ordered_moments() -> impl Strategy<Value = (f64, f64, f64)> {
        (0.05f64..1.0, 0.0f64..1.0).prop_map(|(a, t)| (a, a + t * (1.0 - a), 1.0))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn hamiltonian_forms_agree(
            (a, b, c) in ordered_moments(),
            nu in 0.0f64..std::f64::consts::TAU,
            x in -1.0f64..=1.0,
            m in 0.1f64..10.0,
        ) {
            let p = InertiaParams::from_moments(a, b, c).unwrap();
            let s = AndoyerState::new(0.0, 0.0, nu, 0.0, m, m * x).unwrap();
            let h1 = hamiltonian_andoyer(&s, &p);
            let h2 = hamiltonian_reordered(&s, &p);
            prop_assert!((h1 - h2).abs() <= 1e-13 * h1.abs());
            let h3 = hamiltonian_lam(&s, &p);
            prop_assert!((h1 - h3).abs() <= 1e-12 * h1.abs());
        }

        #[test]
        fn split_perturbation_is_non_positive(
            alpha in 0.0f64..2.0,
            beta in 0.0f64..=1.0,
            nu in 0.0f64..std::f64::consts::TAU,
            x in 1e-6f64..=1.0,
        ) {
            let p = InertiaParams::from_alpha_beta(alpha, beta, 1.0).unwrap();
            let s = AndoyerState::new(0.0, 0.0, nu, 0.0, 1.0, x).unwrap();
            let split = sam_split(&s, &p).unwrap();
            prop_assert!(split.perturbation <= 0.0);
            let h = hamiltonian_reordered(&s, &p);
            prop_assert!((split.total - h).abs() <= 1e-13 * h);
        }

        #[test]
        fn lam_map_is_involutive(beta in 0.0f64..=1.0) {
            let twice = lam_beta_star(lam_beta_star(beta));
            prop_assert!((twice - beta).abs() <= 1e-14);
        }

        #[test]
        fn moments_roundtrip((a, b, c) in ordered_moments()) {
            let p = InertiaParams::from_moments(a, b, c).unwrap();
            let q = InertiaParams::from_alpha_beta(p.alpha, p.beta, p.c).unwrap();
            prop_assert!((q.a - a).abs() <= 1e-13 && (q.b - b).abs() <= 1e-13);
            let lam = lam_params(&p);
            if p.alpha > 1e-6 && p.beta < 1.0 {
                prop_assert!((lam.beta_star - lam_beta_star(p.beta)).abs() <= 1e-9);
            }
        }
    }
}
