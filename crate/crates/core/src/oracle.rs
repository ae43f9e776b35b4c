//! Reference solution of the exact reduced equations of motion.
//!
//! In Andoyer variables the torque-free Hamiltonian is
//! `H = M^2/2C + alpha (M^2 - N^2)(1 - beta cos 2nu) / 2C`, so
//!
//! ```text
//! dnu/dt = -(alpha N / C)(1 - beta cos 2nu)
//! dN/dt  = -(alpha beta / C)(M^2 - N^2) sin 2nu
//! dmu/dt =  (M / C)(1 + alpha (1 - beta cos 2nu))
//! ```
//!
//! with `lambda`, `Lambda` and `M` constant. The system is integrated with a
//! Gragg-Bulirsch-Stoer extrapolation scheme whose steps are clipped to land on
//! the requested output times. Everything is generic over [`Real`], so the same
//! code runs in double-double precision when truncation errors far below the
//! `f64` round-off floor have to be resolved.

use std::io::{self, Write};

use crate::action_angle::to_action_angle;
use crate::angle;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rigid::{AndoyerState, InertiaParams};

pub const MAX_TOLERANCE: f64 = 1e-6;
const MAX_STEPS: usize = 1_000_000;
const SAFETY: f64 = 0.94;

/// Time derivatives of the evolving Andoyer variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives<T = f64> {
    pub dmu: T,
    pub dnu: T,
    pub dn: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample<T = f64> {
    pub t: T,
    pub state: AndoyerState<T>,
    pub energy: T,
    /// `(E(t) - E(0)) / E(0)`.
    pub energy_drift: T,
}

#[derive(Debug, Clone, Copy)]
struct Params<T> {
    alpha: T,
    beta: T,
    c: T,
}

impl<T: Real> Params<T> {
    fn of(p: &InertiaParams) -> Self {
        Self {
            alpha: T::of(p.alpha),
            beta: T::of(p.beta),
            c: T::of(p.c),
        }
    }
}

/// `[mu, nu, N]`.
type Y<T> = [T; 3];

fn rhs<T: Real>(y: &Y<T>, m: T, p: &Params<T>) -> Y<T> {
    let (s2, c2) = (T::of(2.0) * y[1]).sin_cos();
    let shape = T::one() - p.beta * c2;
    [
        m / p.c * (T::one() + p.alpha * shape),
        -(p.alpha * y[2] / p.c) * shape,
        -(p.alpha * p.beta / p.c) * (m - y[2]) * (m + y[2]) * s2,
    ]
}

pub fn hamilton_rhs(s: &AndoyerState, p: &InertiaParams) -> Derivatives {
    hamilton_rhs_real(s, p)
}

pub fn hamilton_rhs_real<T: Real>(s: &AndoyerState<T>, p: &InertiaParams) -> Derivatives<T> {
    let d = rhs(&[s.mu, s.nu, s.n], s.m, &Params::of(p));
    Derivatives {
        dmu: d[0],
        dnu: d[1],
        dn: d[2],
    }
}

/// The Hamiltonian in the form used by the integrator.
pub fn energy<T: Real>(s: &AndoyerState<T>, p: &InertiaParams) -> T {
    let q = Params::<T>::of(p);
    let two = T::of(2.0);
    let shape = T::one() - q.beta * (two * s.nu).cos();
    s.m * s.m / (two * q.c) + q.alpha * (s.m - s.n) * (s.m + s.n) * shape / (two * q.c)
}

fn gragg<T: Real>(y0: &Y<T>, f0: &Y<T>, h: T, n: usize, m: T, p: &Params<T>) -> Y<T> {
    let hs = h / T::of(n as f64);
    let two_hs = T::of(2.0) * hs;
    let mut z0 = *y0;
    let mut z1 = [y0[0] + hs * f0[0], y0[1] + hs * f0[1], y0[2] + hs * f0[2]];
    for _ in 1..n {
        let f = rhs(&z1, m, p);
        let z2 = [z0[0] + two_hs * f[0], z0[1] + two_hs * f[1], z0[2] + two_hs * f[2]];
        z0 = z1;
        z1 = z2;
    }
    let f = rhs(&z1, m, p);
    let half = T::of(0.5);
    [
        half * (z0[0] + z1[0] + hs * f[0]),
        half * (z0[1] + z1[1] + hs * f[1]),
        half * (z0[2] + z1[2] + hs * f[2]),
    ]
}

struct Stepper<T> {
    p: Params<T>,
    m: T,
    tol: T,
    kmax: usize,
}

enum StepOutcome<T> {
    Accepted { y: Y<T>, next_h: T },
    Rejected { next_h: T },
}

impl<T: Real> Stepper<T> {
    fn step(&self, y: &Y<T>, h: T) -> StepOutcome<T> {
        let f0 = rhs(y, self.m, &self.p);
        let mut table: Vec<Y<T>> = Vec::with_capacity(self.kmax);
        let mut err = T::zero();
        for k in 1..=self.kmax {
            let nk = 2 * k;
            let mut row = vec![gragg(y, &f0, h, nk, self.m, &self.p)];
            for j in 1..k {
                let ratio = T::of((nk * nk) as f64 / ((2 * (k - j)) * (2 * (k - j))) as f64) - T::one();
                let prev = &table[j - 1];
                let cur = row[j - 1];
                row.push([
                    cur[0] + (cur[0] - prev[0]) / ratio,
                    cur[1] + (cur[1] - prev[1]) / ratio,
                    cur[2] + (cur[2] - prev[2]) / ratio,
                ]);
            }
            if k >= 3 {
                let best = row[k - 1];
                let prev = row[k - 2];
                err = T::zero();
                for i in 0..3 {
                    let sc = self.tol * (T::one() + y[i].abs().max(best[i].abs()));
                    err = err.max((best[i] - prev[i]).abs() / sc);
                }
                if err <= T::one() {
                    return StepOutcome::Accepted {
                        y: best,
                        next_h: h * growth(err, k),
                    };
                }
            }
            table = row;
        }
        let shrink = growth(err, self.kmax).min(T::of(0.7)).max(T::of(0.1));
        StepOutcome::Rejected { next_h: h * shrink }
    }
}

/// Step-size factor for an error estimate of order `2k - 1`, clamped to `[0.2, 4]`.
fn growth<T: Real>(err: T, k: usize) -> T {
    let e = err.as_f64().max(1e-300);
    T::of((SAFETY * (0.65 / e).powf(1.0 / (2 * k - 1) as f64)).clamp(0.2, 4.0))
}

fn check_tolerance<T: Real>(tol: f64) -> Result<()> {
    if !(T::MIN_TOLERANCE..=MAX_TOLERANCE).contains(&tol) {
        return Err(Error::InvalidInput(format!(
            "tolerance must lie in [{:e}, {MAX_TOLERANCE:e}], got {tol:e}",
            T::MIN_TOLERANCE
        )));
    }
    Ok(())
}

fn sample<T: Real>(t: T, y: &Y<T>, s0: &AndoyerState<T>, p: &InertiaParams, e0: T) -> TrajectorySample<T> {
    let state = AndoyerState {
        lambda: s0.lambda,
        mu: angle::normalize(y[0]),
        nu: angle::normalize(y[1]),
        big_lambda: s0.big_lambda,
        m: s0.m,
        n: y[2],
    };
    let e = energy(&state, p);
    TrajectorySample {
        t,
        state,
        energy: e,
        energy_drift: (e - e0) / e0,
    }
}

/// Integrate from `t = 0` and report the state at each of `times`, which must be
/// monotone (non-decreasing or non-increasing) and may be negative.
pub fn integrate_at<T: Real>(
    s0: &AndoyerState<T>,
    p: &InertiaParams,
    times: &[T],
    tol: f64,
) -> Result<Vec<TrajectorySample<T>>> {
    check_tolerance::<T>(tol)?;
    let forward = times.iter().all(|t| *t >= T::zero());
    let backward = times.iter().all(|t| *t <= T::zero());
    let monotone = times.windows(2).all(|w| if forward { w[1] >= w[0] } else { w[1] <= w[0] });
    if !(forward || backward) || !monotone {
        return Err(Error::InvalidInput("sample times must be monotone and on one side of t = 0".into()));
    }
    let params = Params::of(p);
    let stepper = Stepper {
        p: params,
        m: s0.m,
        tol: T::of(tol),
        kmax: if tol >= 1e-16 { 8 } else { 12 },
    };
    let e0 = energy(s0, p);
    let mut y: Y<T> = [s0.mu, s0.nu, s0.n];
    let mut t = T::zero();
    let rates = rhs(&y, s0.m, &params);
    let scale = rates[0].abs() + rates[1].abs() + T::one();
    let sign = if forward { T::one() } else { -T::one() };
    let mut h = sign * T::of(0.5) / scale;
    let mut steps = 0usize;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t != target {
            let remaining = target - t;
            let clipped = remaining.abs() <= h.abs();
            let h_try = if clipped { remaining } else { h };
            match stepper.step(&y, h_try) {
                StepOutcome::Accepted { y: y_new, next_h } => {
                    y = y_new;
                    t = if clipped { target } else { t + h_try };
                    if !clipped || next_h.abs() < h.abs() {
                        h = next_h;
                    }
                }
                StepOutcome::Rejected { next_h } => h = next_h,
            }
            steps += 1;
            let floor = T::of(1e-14) * (T::one() + t.abs());
            if h.abs() < floor || steps > MAX_STEPS || !y.iter().all(|v| v.is_finite()) {
                return Err(Error::Stiffness {
                    t: t.as_f64(),
                    h: h.as_f64(),
                });
            }
        }
        out.push(sample(t, &y, s0, p, e0));
    }
    Ok(out)
}

/// Integrate to `t_end` and report `n_samples + 1` equally spaced states,
/// starting with the initial one.
pub fn integrate<T: Real>(
    s0: &AndoyerState<T>,
    p: &InertiaParams,
    t_end: T,
    tol: f64,
    n_samples: usize,
) -> Result<Vec<TrajectorySample<T>>> {
    let n = n_samples.max(1);
    let times: Vec<T> = (0..=n).map(|k| t_end * T::of(k as f64) / T::of(n as f64)).collect();
    integrate_at(s0, p, &times, tol)
}

pub const CSV_HEADER: &str = "t,mu,nu,M,N,l,g,L,G,energy";

/// Write samples as CSV. The action-angle columns are left empty when the
/// chart is undefined (`beta` at the prolate limit or `N <= 0`).
pub fn write_csv<W: Write>(w: &mut W, samples: &[TrajectorySample], beta: f64) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in samples {
        let st = &s.state;
        write!(w, "{},{},{},{},{},", s.t, st.mu, st.nu, st.m, st.n)?;
        match to_action_angle(st, beta) {
            Ok(a) => write!(w, "{},{},{},{},", a.l, a.g, a.big_l, a.big_g)?,
            Err(_) => write!(w, ",,,,")?,
        }
        writeln!(w, "{}", s.energy)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DoubleDouble;

    fn params(alpha: f64, beta: f64) -> InertiaParams {
        InertiaParams::from_alpha_beta(alpha, beta, 1.0).unwrap()
    }

    #[test]
    fn axisymmetric_is_linear() {
        let p = params(0.3, 0.0);
        let s0 = AndoyerState::from_inclination(0.4, 0.1, 0.2, 1.0).unwrap();
        let d = hamilton_rhs(&s0, &p);
        assert_eq!(d.dn, 0.0);
        assert!((d.dnu + 0.3 * s0.n).abs() < 1e-16);
        let out = integrate(&s0, &p, 10.0, 1e-13, 5).unwrap();
        let last = out.last().unwrap();
        let nu = s0.nu - 0.3 * s0.n * 10.0;
        assert!(angle::diff(last.state.nu, nu).abs() < 1e-11);
        assert_eq!(last.state.m, s0.m);
    }

    #[test]
    fn equilibrium_on_axis() {
        let p = params(1.0, 0.8);
        for nu in [0.0, 0.7, 2.0] {
            let s = AndoyerState::new(0.0, 0.0, nu, 0.0, 1.0, 1.0).unwrap();
            assert_eq!(hamilton_rhs(&s, &p).dn, 0.0);
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        let p = params(0.7, 0.6);
        let s = AndoyerState::new(0.0, 0.3, 1.1, 0.0, 1.2, 0.9).unwrap();
        let d = hamilton_rhs(&s, &p);
        let e = 1e-6;
        let shift = |dnu: f64, dn: f64, dm: f64| {
            let st = AndoyerState { nu: s.nu + dnu, n: s.n + dn, m: s.m + dm, ..s };
            energy(&st, &p)
        };
        assert!(((shift(0.0, e, 0.0) - shift(0.0, -e, 0.0)) / (2.0 * e) - d.dnu).abs() < 1e-8);
        assert!((-(shift(e, 0.0, 0.0) - shift(-e, 0.0, 0.0)) / (2.0 * e) - d.dn).abs() < 1e-8);
        assert!(((shift(0.0, 0.0, e) - shift(0.0, 0.0, -e)) / (2.0 * e) - d.dmu).abs() < 1e-8);
    }

    #[test]
    fn energy_is_conserved_and_reversible() {
        let p = params(1.0, 0.8);
        let s0 = AndoyerState::from_inclination(5f64.to_radians(), 0.0, 0.3, 1.0).unwrap();
        let out = integrate(&s0, &p, 100.0, 1e-13, 10).unwrap();
        for s in &out {
            assert!(s.energy_drift.abs() < 1e-11, "{}", s.energy_drift);
        }
        let end = out.last().unwrap();
        let back = integrate_at(&end.state, &p, &[-100.0], 1e-13).unwrap();
        let b = back[0].state;
        assert!(angle::diff(b.nu, s0.nu).abs() < 1e-9);
        assert!(angle::diff(b.mu, s0.mu).abs() < 1e-9);
        assert!((b.n - s0.n).abs() < 1e-9);
    }

    #[test]
    fn double_double_run_agrees() {
        let p = params(1.0, 0.8);
        let s0 = AndoyerState::from_inclination(5f64.to_radians(), 0.0, 0.3, 1.0).unwrap();
        let sd = AndoyerState::<DoubleDouble>::from_inclination(
            DoubleDouble::of(5f64.to_radians()),
            DoubleDouble::of(0.0),
            DoubleDouble::of(0.3),
            DoubleDouble::of(1.0),
        )
        .unwrap();
        let f = integrate_at(&s0, &p, &[20.0], 1e-13).unwrap()[0];
        let d = integrate_at(&sd, &p, &[DoubleDouble::of(20.0)], 1e-28).unwrap()[0];
        assert!(angle::diff(f.state.nu, d.state.nu.as_f64()).abs() < 1e-11);
        assert!(d.energy_drift.abs().as_f64() < 1e-26, "{}", d.energy_drift);
    }

    #[test]
    fn input_errors() {
        let p = params(1.0, 0.5);
        let s0 = AndoyerState::from_inclination(0.1, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(integrate_at(&s0, &p, &[1.0], 1e-3), Err(Error::InvalidInput(_))));
        assert!(matches!(integrate_at(&s0, &p, &[1.0, -1.0], 1e-10), Err(Error::InvalidInput(_))));
        assert!(matches!(integrate_at(&s0, &p, &[2.0, 1.0], 1e-10), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn csv_layout() {
        let p = params(1.0, 0.5);
        let s0 = AndoyerState::from_inclination(0.1, 0.0, 0.0, 1.0).unwrap();
        let out = integrate(&s0, &p, 1.0, 1e-12, 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &out, p.beta).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].split(',').count(), 10);
        let t: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(t, 0.5);
    }
}
