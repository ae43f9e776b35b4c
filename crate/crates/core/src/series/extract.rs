//! Reading the triaxiality polynomials off a normalization result.
//!
//! With `d = L / (G sigma)` the expected shapes at order `i` are
//!
//! ```text
//! secular (order i+1):  -(1/2) beta^2 q_i L^2 d^i
//! l map:   sum_{m<=i} (-beta)^m l_{i,m} d^i sin 2ml
//! g map:   -(L/G) d^i sum_{m<=k} (-beta)^m g_{i,m} sin 2ml
//! L map:   L d^i (beta^2 L_{i,0} - sum_{m<=k} (-beta)^m L_{i,m} cos 2ml)
//! ```
//!
//! with `k = (i+1)/2` rounded down. Powers of `sigma` beyond `sigma^-i` are
//! expanded through `sigma^2 = 1 - beta^2`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::deprit::{DepritResult, MapCoordinate};
use super::poisson::{PoissonSeries, PoissonTerm, Trig};
use super::ring::{binomial, Rational};
use crate::error::{Error, Result};
use crate::theory::tables::{BetaPoly, SamTheoryTables, TableKey};

/// Coefficients grouped by `(beta_pow, sigma_pow)`.
type Group = BTreeMap<(u32, i32), Rational>;

fn shape_error(what: &str, i: usize, t: &PoissonTerm) -> Error {
    Error::Shape(format!("{what} order {i}: unexpected term {t}"))
}

/// Divide by `beta^beta_div sigma^sigma_target` and expand the remaining even
/// powers of `sigma` as polynomials in `beta^2`.
fn to_beta_poly(group: &Group, sigma_target: i32, beta_div: u32, what: &str, i: usize) -> Result<BetaPoly> {
    let mut coeffs: BTreeMap<u32, Rational> = BTreeMap::new();
    for (&(bp, sp), c) in group {
        let e = sp - sigma_target;
        if e < 0 || e % 2 != 0 || bp < beta_div || !(bp - beta_div).is_multiple_of(2) {
            return Err(Error::Shape(format!(
                "{what} order {i}: coefficient beta^{bp} sigma^{sp} does not reduce to a polynomial in beta^2"
            )));
        }
        let k = (e / 2) as usize;
        let p = bp - beta_div;
        for j in 0..=k {
            let sign = if j % 2 == 0 { c.clone() } else { -c.clone() };
            *coeffs.entry(p / 2 + j as u32).or_insert_with(Rational::zero) += sign * binomial(k, j);
        }
    }
    let top = coeffs.keys().next_back().copied().unwrap_or(0) as usize;
    let dense = (0..=top)
        .map(|k| coeffs.get(&(k as u32)).cloned().unwrap_or_else(Rational::zero))
        .collect();
    Ok(BetaPoly::new(dense))
}

fn signed(c: &Rational, negative: bool) -> Rational {
    if negative {
        -c.clone()
    } else {
        c.clone()
    }
}

fn secular(tables: &mut SamTheoryTables, s: &PoissonSeries, i: usize) -> Result<()> {
    let mut group = Group::new();
    for t in s.terms() {
        if t.kind != Trig::Const || t.l_pow as usize != 2 + i || t.g_pow != -(i as i32) {
            return Err(shape_error("secular", i, &t));
        }
        *group.entry((t.coeff.beta_pow, t.coeff.sigma_pow)).or_insert_with(Rational::zero) +=
            t.coeff.rational.clone() * Rational::from_integer((-2).into());
    }
    tables.q.insert(i, to_beta_poly(&group, -(i as i32), 2, "secular", i)?);
    Ok(())
}

fn periodic(tables: &mut SamTheoryTables, which: MapCoordinate, s: &PoissonSeries, i: usize) -> Result<()> {
    let k = i.div_ceil(2);
    let ii = i as i32;
    let (name, l_pow, g_pow, max_m, kind) = match which {
        MapCoordinate::L => ("l map", i, -ii, i, Trig::Sin),
        MapCoordinate::G => ("g map", i + 1, -ii - 1, k, Trig::Sin),
        MapCoordinate::BigL => ("L map", i + 1, -ii, k, Trig::Cos),
    };
    let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
    for t in s.terms() {
        let m = t.harmonic as usize;
        let kind_ok = t.kind == kind || (which == MapCoordinate::BigL && t.kind == Trig::Const);
        if !kind_ok || t.l_pow as usize != l_pow || t.g_pow != g_pow || m > max_m {
            return Err(shape_error(name, i, &t));
        }
        // undo the published sign pattern: (-1)^m and the overall minus of the g and L columns
        let negative = (m % 2 == 1) ^ matches!((which, t.kind), (MapCoordinate::G, _) | (MapCoordinate::BigL, Trig::Cos));
        *groups
            .entry(m)
            .or_default()
            .entry((t.coeff.beta_pow, t.coeff.sigma_pow))
            .or_insert_with(Rational::zero) += signed(&t.coeff.rational, negative);
    }
    let lower = if which == MapCoordinate::BigL { 0 } else { 1 };
    for m in lower..=max_m {
        let group = groups.remove(&m).unwrap_or_default();
        let beta_div = if m == 0 { 2 } else { m as u32 };
        let poly = to_beta_poly(&group, -ii, beta_div, name, i)?;
        let key = match (which, m) {
            (MapCoordinate::L, _) => TableKey::Ell(i, m),
            (MapCoordinate::G, _) => TableKey::G(i, m),
            (MapCoordinate::BigL, 0) => TableKey::BigL0(i),
            (MapCoordinate::BigL, _) => TableKey::BigL(i, m),
        };
        tables.insert(key, poly);
    }
    Ok(())
}

/// Triaxiality polynomials `q_i` for `i <= max_order` and the periodic
/// families for `i <= max_order`.
pub fn extract_tables(result: &DepritResult) -> Result<SamTheoryTables> {
    let first = result.averaged_term(1);
    let expected = PoissonSeries::monomial(Rational::new((-1).into(), 2.into()), 0, 0, 2, 0, 0, Trig::Const);
    if first != expected {
        return Err(Error::Shape(format!("first-order secular term is {first}, expected {expected}")));
    }
    let mut tables = SamTheoryTables::default();
    for i in 1..=result.max_order {
        if i + 1 < result.averaged.len() {
            secular(&mut tables, &result.averaged_term(i + 1), i)?;
        }
        for which in [MapCoordinate::L, MapCoordinate::G, MapCoordinate::BigL] {
            periodic(&mut tables, which, &result.direct.term(which, i), i)?;
        }
    }
    Ok(tables)
}
