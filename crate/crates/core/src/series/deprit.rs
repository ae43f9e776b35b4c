//! Deprit's triangle with factorial normalization, `H = sum eps^n / n! H_n`.
//!
//! The Lie operator of a generator `W` is `f -> {W, f}`. At order `n` the
//! homological equation reads `-n0 dW_n/dl = periodic part of H_0^(n)` with
//! `n0 = dH_0/dL`, and the new Hamiltonian term is the remaining average.

use super::poisson::{poisson_bracket, solve_homological, Frequency, PoissonSeries, Trig};
use super::ring::{binomial, factorial, int, rat, Rational};
use crate::error::{Error, Result};

/// Largest `max_order` accepted by [`deprit_normalize`].
pub const MAX_SUPPORTED_ORDER: usize = 12;

/// Per-order corrections of a near-identity map for the three coordinates that move.
///
/// Entry `n` holds the raw Deprit term of order `n` (the coefficient of
/// `eps^n / n!`); entry 0 is the zero series since the identity part is implicit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoordinateMaps {
    pub l: Vec<PoissonSeries>,
    pub g: Vec<PoissonSeries>,
    pub big_l: Vec<PoissonSeries>,
}

impl CoordinateMaps {
    fn coordinate(&self, c: Coordinate) -> &[PoissonSeries] {
        match c {
            Coordinate::Angle => &self.l,
            Coordinate::Node => &self.g,
            Coordinate::Action => &self.big_l,
        }
    }

    /// Order-`n` contribution at `eps = 1`.
    pub fn term(&self, which: MapCoordinate, n: usize) -> PoissonSeries {
        let raw = match which {
            MapCoordinate::L => &self.l,
            MapCoordinate::G => &self.g,
            MapCoordinate::BigL => &self.big_l,
        };
        raw.get(n)
            .map(|s| s.scale(&factorial(n).recip()))
            .unwrap_or_default()
    }

    /// Sum of all orders at `eps = 1`, i.e. the correction to add to the argument.
    pub fn total(&self, which: MapCoordinate) -> PoissonSeries {
        let len = match which {
            MapCoordinate::L => self.l.len(),
            MapCoordinate::G => self.g.len(),
            MapCoordinate::BigL => self.big_l.len(),
        };
        (1..len).fold(PoissonSeries::zero(), |acc, n| &acc + &self.term(which, n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapCoordinate {
    L,
    G,
    BigL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coordinate {
    Angle,
    Node,
    Action,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepritResult {
    pub max_order: usize,
    /// New Hamiltonian terms `K_0 .. K_{max_order+1}` (raw Deprit terms).
    pub averaged: Vec<PoissonSeries>,
    /// Generators `W_0 .. W_{max_order+1}`; `W_0` is zero.
    pub generator: Vec<PoissonSeries>,
    /// Original variables as series in the new ones.
    pub direct: CoordinateMaps,
    /// New variables as series in the original ones.
    pub inverse: CoordinateMaps,
}

impl DepritResult {
    /// Averaged Hamiltonian term of order `n` at `eps = 1`.
    pub fn averaged_term(&self, n: usize) -> PoissonSeries {
        self.averaged
            .get(n)
            .map(|s| s.scale(&factorial(n).recip()))
            .unwrap_or_default()
    }
}

/// The SAM Hamiltonian in the scaled chart: `[sigma L G, -(1/2) L^2 (1 + beta cos 2l)]`.
pub fn sam_hamiltonian() -> Vec<PoissonSeries> {
    let h0 = PoissonSeries::monomial(int(1), 0, 1, 1, 1, 0, Trig::Const);
    let p = &PoissonSeries::monomial(rat(-1, 2), 0, 0, 2, 0, 0, Trig::Const)
        + &PoissonSeries::monomial(rat(-1, 2), 1, 0, 2, 0, 1, Trig::Cos);
    vec![h0, p.with_order(1)]
}

/// `n0 = dH_0/dL`, requiring `H_0 = n0 L + f(G)`.
fn unperturbed_frequency(h0: &PoissonSeries) -> Result<Frequency> {
    let mut freq = None;
    for t in h0.terms() {
        if t.kind != Trig::Const {
            return Err(Error::Shape(format!("zeroth-order Hamiltonian depends on the angle: {t}")));
        }
        match t.l_pow {
            0 => {}
            1 if freq.is_none() && t.coeff.beta_pow == 0 => {
                freq = Some(Frequency {
                    coeff: t.coeff.clone(),
                    g_pow: t.g_pow,
                })
            }
            _ => {
                return Err(Error::Shape(format!(
                    "zeroth-order Hamiltonian must be linear in L with a single invertible frequency: {t}"
                )))
            }
        }
    }
    freq.ok_or_else(|| Error::Shape("zeroth-order Hamiltonian has no L dependence".into()))
}

struct Triangle {
    rows: Vec<Vec<PoissonSeries>>, // rows[q][j] = f_j^(q)
}

impl Triangle {
    fn new(first_column: Vec<PoissonSeries>) -> Self {
        Self {
            rows: vec![first_column],
        }
    }

    fn get(&self, j: usize, q: usize) -> &PoissonSeries {
        &self.rows[q][j]
    }

    fn set(&mut self, j: usize, q: usize, value: PoissonSeries) {
        while self.rows.len() <= q {
            self.rows.push(Vec::new());
        }
        let row = &mut self.rows[q];
        if row.len() <= j {
            row.resize(j + 1, PoissonSeries::zero());
        }
        row[j] = value;
    }
}

/// `{W, x}` for a coordinate function `x`, which need not be a Poisson series.
fn bracket_with_coordinate(w: &PoissonSeries, c: Coordinate) -> PoissonSeries {
    match c {
        Coordinate::Angle => -&w.d_action_l(),
        Coordinate::Node => -&w.d_action_g(),
        Coordinate::Action => w.d_angle(),
    }
}

/// Fill the `n`-th diagonal `f_{n-q}^(q)`, `q = 1..n`, from the known entries.
///
/// `coordinate` marks `f_0^(0)` as the bare coordinate (its series part is zero).
fn fill_diagonal(
    t: &mut Triangle,
    n: usize,
    generators: &[PoissonSeries],
    coordinate: Option<Coordinate>,
    harmonic_cap: u32,
) {
    for q in 1..=n {
        let j = n - q;
        let mut acc = t.get(j + 1, q - 1).clone();
        for k in 0..=j {
            let Some(w) = generators.get(k + 1) else { continue };
            if w.is_zero() {
                continue;
            }
            let inner = match (coordinate, j - k, q - 1) {
                (Some(c), 0, 0) => bracket_with_coordinate(w, c),
                _ => poisson_bracket(w, t.get(j - k, q - 1)),
            };
            acc = &acc + &inner.scale(&binomial(j, k));
        }
        t.set(j, q, acc.truncate_harmonics(harmonic_cap).with_order(n as u32));
    }
}

/// Normalize `hamiltonian` (raw Deprit terms `H_0, H_1, ...`) and build the
/// averaging maps through `max_order`. The new Hamiltonian is carried one order
/// further, where the secular term of the last requested map order sits.
pub fn deprit_normalize(hamiltonian: &[PoissonSeries], max_order: usize) -> Result<DepritResult> {
    if max_order == 0 {
        return Err(Error::InvalidInput("max_order must be at least 1".into()));
    }
    if max_order > MAX_SUPPORTED_ORDER {
        return Err(Error::Capacity {
            requested: max_order,
            supported: MAX_SUPPORTED_ORDER,
        });
    }
    let h0 = hamiltonian
        .first()
        .ok_or_else(|| Error::Shape("empty Hamiltonian".into()))?;
    let n0 = unperturbed_frequency(h0)?;
    let ham_order = max_order + 1;
    let cap = ham_order as u32;

    let mut column: Vec<PoissonSeries> = (0..=ham_order)
        .map(|n| hamiltonian.get(n).cloned().unwrap_or_default().with_order(n as u32))
        .collect();
    column[0] = h0.clone();
    let mut tri = Triangle::new(column);

    let mut generators = vec![PoissonSeries::zero()];
    let mut averaged = vec![h0.clone()];
    for n in 1..=ham_order {
        generators.push(PoissonSeries::zero());
        fill_diagonal(&mut tri, n, &generators, None, cap);
        let tilde = tri.get(0, n);
        let w = solve_homological(&tilde.periodic(), &n0)?.with_order(n as u32);
        let correction = poisson_bracket(&w, h0);
        for q in 1..=n {
            let updated = tri.get(n - q, q) + &correction;
            tri.set(n - q, q, updated.with_order(n as u32));
        }
        let k = tri.get(0, n).clone();
        if !k.periodic().is_zero() {
            return Err(Error::Homological(format!("order {n} kept angle-dependent terms")));
        }
        averaged.push(k);
        generators[n] = w;
    }

    let map_gens = &generators[..=max_order];
    let direct = CoordinateMaps {
        l: direct_map(Coordinate::Angle, map_gens, max_order, cap),
        g: direct_map(Coordinate::Node, map_gens, max_order, cap),
        big_l: direct_map(Coordinate::Action, map_gens, max_order, cap),
    };
    let inverse = CoordinateMaps {
        l: inverse_map(Coordinate::Angle, map_gens, max_order, cap),
        g: inverse_map(Coordinate::Node, map_gens, max_order, cap),
        big_l: inverse_map(Coordinate::Action, map_gens, max_order, cap),
    };
    Ok(DepritResult {
        max_order,
        averaged,
        generator: generators,
        direct,
        inverse,
    })
}

fn coordinate_series(c: Coordinate) -> PoissonSeries {
    match c {
        Coordinate::Action => PoissonSeries::monomial(int(1), 0, 0, 1, 0, 0, Trig::Const),
        _ => PoissonSeries::zero(),
    }
}

/// `x_old = x + sum eps^n/n! f_0^(n)(new)`.
fn direct_map(c: Coordinate, generators: &[PoissonSeries], order: usize, cap: u32) -> Vec<PoissonSeries> {
    let angle = (c != Coordinate::Action).then_some(c);
    let mut column = vec![PoissonSeries::zero(); order + 1];
    column[0] = coordinate_series(c);
    let mut tri = Triangle::new(column);
    let mut out = vec![PoissonSeries::zero()];
    for n in 1..=order {
        fill_diagonal(&mut tri, n, generators, angle, cap);
        out.push(tri.get(0, n).clone());
    }
    out
}

/// `x_new = x + sum eps^n/n! F_n(old)`, with `F_n` chosen so that `x_new`
/// pushed through the transformation is the bare coordinate at every order.
fn inverse_map(c: Coordinate, generators: &[PoissonSeries], order: usize, cap: u32) -> Vec<PoissonSeries> {
    let angle = (c != Coordinate::Action).then_some(c);
    let mut column = vec![PoissonSeries::zero(); order + 1];
    column[0] = coordinate_series(c);
    let mut tri = Triangle::new(column);
    let mut out = vec![PoissonSeries::zero()];
    for n in 1..=order {
        fill_diagonal(&mut tri, n, generators, angle, cap);
        let residual = -tri.get(0, n);
        tri.set(n, 0, residual.clone().with_order(n as u32));
        for q in 1..=n {
            let updated = tri.get(n - q, q) + &residual;
            tri.set(n - q, q, updated);
        }
        out.push(residual);
    }
    out
}

type Graded = Vec<PoissonSeries>;

fn graded_mul(a: &Graded, b: &Graded, order: usize) -> Graded {
    let mut out = vec![PoissonSeries::zero(); order + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j <= order && !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn graded_at_unit(order: usize) -> Graded {
    let mut g = vec![PoissonSeries::zero(); order + 1];
    g[0] = PoissonSeries::monomial(int(1), 0, 0, 0, 0, 0, Trig::Const);
    g
}

fn graded_from_raw(raw: &[PoissonSeries], order: usize) -> Graded {
    (0..=order)
        .map(|n| raw.get(n).map(|s| s.scale(&factorial(n).recip())).unwrap_or_default())
        .collect()
}

/// Residual of `inverse(direct(x)) - x` for the coordinates `l`, `g`, `L`,
/// graded by order `1..=order`. A canonical pair of maps gives all zeros.
pub fn roundtrip_residual(result: &DepritResult, order: usize) -> Result<[Vec<PoissonSeries>; 3]> {
    if order > result.max_order {
        return Err(Error::Capacity {
            requested: order,
            supported: result.max_order,
        });
    }
    let d_angle = graded_from_raw(result.direct.coordinate(Coordinate::Angle), order);
    let d_action = graded_from_raw(result.direct.coordinate(Coordinate::Action), order);

    let mut pow_angle = vec![graded_at_unit(order)];
    let mut pow_action = vec![graded_at_unit(order)];
    for k in 1..=order {
        pow_angle.push(graded_mul(&pow_angle[k - 1], &d_angle, order));
        pow_action.push(graded_mul(&pow_action[k - 1], &d_action, order));
    }

    let mut residuals: [Vec<PoissonSeries>; 3] = Default::default();
    for (slot, c) in [Coordinate::Angle, Coordinate::Node, Coordinate::Action].into_iter().enumerate() {
        let inv = graded_from_raw(result.inverse.coordinate(c), order);
        let direct = graded_from_raw(result.direct.coordinate(c), order);
        // x_new - x = direct(x) + inverse(x + direct(x)), expanded in Taylor series
        let mut total = direct;
        for a in 0..=order {
            for b in 0..=(order - a) {
                let mut deriv: Graded = inv.clone();
                for _ in 0..a {
                    deriv = deriv.iter().map(|s| s.d_angle()).collect();
                }
                for _ in 0..b {
                    deriv = deriv.iter().map(|s| s.d_action_l()).collect();
                }
                if deriv.iter().all(|s| s.is_zero()) {
                    continue;
                }
                let shift = graded_mul(&pow_angle[a], &pow_action[b], order);
                let weight: Rational = (factorial(a) * factorial(b)).recip();
                let term = graded_mul(&deriv, &shift, order);
                for (n, s) in term.into_iter().enumerate() {
                    total[n] = &total[n] + &s.scale(&weight);
                }
            }
        }
        residuals[slot] = total.into_iter().skip(1).collect();
    }
    Ok(residuals)
}

/// Keep only the `beta^0` part, which is the series at `beta = 0`.
pub fn at_axisymmetry(hamiltonian: &[PoissonSeries]) -> Vec<PoissonSeries> {
    hamiltonian
        .iter()
        .map(|s| {
            let mut out = PoissonSeries::zero().with_order(s.epsilon_order);
            for t in s.terms().filter(|t| t.coeff.beta_pow == 0) {
                out.push(t);
            }
            out
        })
        .collect()
}
