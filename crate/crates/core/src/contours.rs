//! Level sets of the scaled reduced energies in the `(nu, N/M)` plane.
//!
//! With `x = N/M` and `c = 1 - beta cos 2nu` the scaled full and main-problem
//! energies are `H0* = (1 - x^2) c` and `A* = 2 (1 - x) c`. Both are monotone in
//! `x` on `[0, 1]`, so each level `q` is a graph over `nu`:
//!
//! ```text
//! H0* = q  <=>  x = sqrt(1 - q / c)
//! A*  = q  <=>  x = 1 - q / (2c)
//! ```

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rigid::scaled_energies_beta;

pub const FIGURE_BETA: f64 = 0.8;
pub const FIGURE_WINDOW: (f64, f64) = (0.88, 1.0);
pub const FIGURE_LEVELS: [f64; 12] = [0.002, 0.007, 0.015, 0.023, 0.035, 0.048, 0.08, 0.12, 0.18, 0.25, 0.32, 0.38];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// The full reduced Hamiltonian.
    #[serde(rename = "H0*")]
    Full,
    /// The integrable main problem.
    #[serde(rename = "A*")]
    MainProblem,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Full => "H0*",
            Family::MainProblem => "A*",
        }
    }

    /// `N/M` on the level `q` at angle `nu`, if it lies in `[0, 1]`.
    pub fn level_curve(self, q: f64, nu: f64, beta: f64) -> Option<f64> {
        let c = 1.0 - beta * (2.0 * nu).cos();
        if q < 0.0 || c <= 0.0 {
            return (q == 0.0).then_some(1.0);
        }
        let x = match self {
            Family::Full => {
                let r = 1.0 - q / c;
                if r < 0.0 {
                    return None;
                }
                r.sqrt()
            }
            Family::MainProblem => 1.0 - q / (2.0 * c),
        };
        (0.0..=1.0).contains(&x).then_some(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourRequest {
    pub beta: f64,
    pub n_over_m_min: f64,
    pub n_over_m_max: f64,
    pub levels: Vec<f64>,
    /// Number of `nu` samples on `[0, 2 pi)`.
    pub samples: usize,
}

impl Default for ContourRequest {
    fn default() -> Self {
        Self {
            beta: FIGURE_BETA,
            n_over_m_min: FIGURE_WINDOW.0,
            n_over_m_max: FIGURE_WINDOW.1,
            levels: FIGURE_LEVELS.to_vec(),
            samples: 721,
        }
    }
}

/// One level of one family: polylines of `(nu, N/M)` inside the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourLevel {
    pub family: Family,
    pub level: f64,
    pub segments: Vec<Vec<(f64, f64)>>,
}

impl ContourLevel {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn points(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }
}

fn validate(req: &ContourRequest) -> Result<()> {
    if !(0.0..=1.0).contains(&req.beta) {
        return Err(Error::InvalidInput(format!("beta must lie in [0, 1], got {}", req.beta)));
    }
    let (lo, hi) = (req.n_over_m_min, req.n_over_m_max);
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::InvalidInput(format!("N/M window must satisfy 0 <= min < max <= 1, got [{lo}, {hi}]")));
    }
    if req.samples < 2 {
        return Err(Error::InvalidInput("at least two nu samples are needed".into()));
    }
    Ok(())
}

/// Contours of both families at every requested level. Levels with no point in
/// the window are returned with no segments.
pub fn contours(req: &ContourRequest) -> Result<Vec<ContourLevel>> {
    validate(req)?;
    let mut out = Vec::with_capacity(2 * req.levels.len());
    for &q in &req.levels {
        for family in [Family::Full, Family::MainProblem] {
            let mut segments = Vec::new();
            let mut current: Vec<(f64, f64)> = Vec::new();
            for k in 0..req.samples {
                let nu = TAU * k as f64 / req.samples as f64;
                match family.level_curve(q, nu, req.beta) {
                    Some(x) if (req.n_over_m_min..=req.n_over_m_max).contains(&x) => current.push((nu, x)),
                    _ => {
                        if !current.is_empty() {
                            segments.push(std::mem::take(&mut current));
                        }
                    }
                }
            }
            if !current.is_empty() {
                segments.push(current);
            }
            out.push(ContourLevel { family, level: q, segments });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub nu: f64,
    pub n_over_m: f64,
    pub h0_star: f64,
    pub a_star: f64,
}

/// Both scaled energies on a regular `n_nu x n_x` grid over the window.
pub fn energy_grid(req: &ContourRequest, n_nu: usize, n_x: usize) -> Result<Vec<GridPoint>> {
    validate(req)?;
    let n_x = n_x.max(2);
    let mut out = Vec::with_capacity(n_nu * n_x);
    for i in 0..n_nu {
        let nu = TAU * i as f64 / n_nu as f64;
        for k in 0..n_x {
            let x = req.n_over_m_min + (req.n_over_m_max - req.n_over_m_min) * k as f64 / (n_x - 1) as f64;
            let (h0_star, a_star) = scaled_energies_beta(nu, x, req.beta);
            out.push(GridPoint { nu, n_over_m: x, h0_star, a_star });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn figure_set_has_every_level() {
        let all = contours(&ContourRequest::default()).unwrap();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn zero_level_is_the_axis() {
        for f in [Family::Full, Family::MainProblem] {
            for nu in [0.0, 1.0, 3.0] {
                assert_eq!(f.level_curve(0.0, nu, 0.8), Some(1.0));
            }
        }
    }

    #[test]
    fn curves_lie_on_their_level() {
        let all = contours(&ContourRequest::default()).unwrap();
        for c in &all {
            for &(nu, x) in c.segments.iter().flatten() {
                let (h, a) = scaled_energies_beta(nu, x, 0.8);
                let v = if c.family == Family::Full { h } else { a };
                assert!((v - c.level).abs() < 1e-14, "{:?} {} {v}", c.family, c.level);
            }
        }
    }

    #[test]
    fn families_agree_near_the_axis() {
        let a = Family::MainProblem.level_curve(0.002, FRAC_PI_2, 0.8).unwrap();
        let h = Family::Full.level_curve(0.002, FRAC_PI_2, 0.8).unwrap();
        assert!((a - h).abs() < 1e-3);
    }

    #[test]
    fn levels_outside_window_are_empty() {
        let req = ContourRequest { levels: vec![5.0], ..Default::default() };
        let all = contours(&req).unwrap();
        assert!(all.iter().all(ContourLevel::is_empty));
        let bad = ContourRequest { n_over_m_min: 0.9, n_over_m_max: 0.8, ..Default::default() };
        assert!(contours(&bad).is_err());
    }
}
