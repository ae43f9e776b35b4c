//! Sparse Poisson series in one angle.
//!
//! A term is `c * beta^p * sigma^s * L^a * G^b * T(2 m l)` with `T` one of
//! `1`, `cos`, `sin`. Series are kept in canonical form: one entry per monomial
//! key, zero coefficients pruned.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::ring::{format_rational, int, to_f64, Rational, RingCoefficient};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    Const,
    Cos,
    Sin,
}

/// Monomial key of a term; the coefficient lives in the series map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub beta_pow: u32,
    pub sigma_pow: i32,
    pub l_pow: u32,
    pub g_pow: i32,
    pub harmonic: u32,
    pub kind: Trig,
}

/// A single term with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonTerm {
    pub coeff: RingCoefficient,
    pub l_pow: u32,
    pub g_pow: i32,
    pub harmonic: u32,
    pub kind: Trig,
}

impl PoissonTerm {
    pub fn new(coeff: RingCoefficient, l_pow: u32, g_pow: i32, harmonic: u32, kind: Trig) -> Result<Self> {
        match (kind, harmonic) {
            (Trig::Const, 0) => {}
            (Trig::Const, _) => return Err(Error::Shape("constant term with nonzero harmonic".into())),
            (_, 0) => return Err(Error::Shape("trigonometric term with zero harmonic".into())),
            _ => {}
        }
        Ok(Self {
            coeff,
            l_pow,
            g_pow,
            harmonic,
            kind,
        })
    }

    fn key(&self) -> TermKey {
        TermKey {
            beta_pow: self.coeff.beta_pow,
            sigma_pow: self.coeff.sigma_pow,
            l_pow: self.l_pow,
            g_pow: self.g_pow,
            harmonic: self.harmonic,
            kind: self.kind,
        }
    }
}

impl fmt::Display for PoissonTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.l_pow > 0 {
            write!(f, " L^{}", self.l_pow)?;
        }
        if self.g_pow != 0 {
            write!(f, " G^{}", self.g_pow)?;
        }
        match self.kind {
            Trig::Const => Ok(()),
            Trig::Cos => write!(f, " cos({}l)", 2 * self.harmonic),
            Trig::Sin => write!(f, " sin({}l)", 2 * self.harmonic),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PoissonSeries {
    terms: BTreeMap<TermKey, Rational>,
    /// Book-keeping grade: power of the formal small parameter.
    pub epsilon_order: u32,
}

/// Equality of the terms; the grade is book-keeping and does not take part.
impl PartialEq for PoissonSeries {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl PoissonSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = PoissonTerm>) -> Self {
        let mut s = Self::zero();
        for t in terms {
            s.push(t);
        }
        s
    }

    /// Single-term series built from the raw pieces, panicking on an invalid shape.
    pub fn monomial(c: Rational, beta_pow: u32, sigma_pow: i32, l_pow: u32, g_pow: i32, harmonic: u32, kind: Trig) -> Self {
        let term = PoissonTerm::new(RingCoefficient::new(c, beta_pow, sigma_pow), l_pow, g_pow, harmonic, kind)
            .expect("valid monomial shape");
        Self::from_terms([term])
    }

    pub fn with_order(mut self, epsilon_order: u32) -> Self {
        self.epsilon_order = epsilon_order;
        self
    }

    pub fn push(&mut self, term: PoissonTerm) {
        let key = term.key();
        self.accumulate(key, term.coeff.rational);
    }

    fn accumulate(&mut self, key: TermKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = PoissonTerm> + '_ {
        self.terms.iter().map(|(k, c)| PoissonTerm {
            coeff: RingCoefficient::new(c.clone(), k.beta_pow, k.sigma_pow),
            l_pow: k.l_pow,
            g_pow: k.g_pow,
            harmonic: k.harmonic,
            kind: k.kind,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero().with_order(self.epsilon_order);
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            epsilon_order: self.epsilon_order,
        }
    }

    /// Multiply every term by a ring monomial `coeff * L^l_pow * G^g_pow`.
    pub fn mul_monomial(&self, coeff: &RingCoefficient, l_pow: u32, g_pow: i32) -> Self {
        let mut out = Self::zero().with_order(self.epsilon_order);
        for (k, v) in &self.terms {
            let key = TermKey {
                beta_pow: k.beta_pow + coeff.beta_pow,
                sigma_pow: k.sigma_pow + coeff.sigma_pow,
                l_pow: k.l_pow + l_pow,
                g_pow: k.g_pow + g_pow,
                ..*k
            };
            out.accumulate(key, v * &coeff.rational);
        }
        out
    }

    /// Angle-free part (the average over `l`).
    pub fn average(&self) -> Self {
        self.filter(|k| k.kind == Trig::Const)
    }

    /// Zero-mean part.
    pub fn periodic(&self) -> Self {
        self.filter(|k| k.kind != Trig::Const)
    }

    fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> Self {
        Self {
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, v.clone())).collect(),
            epsilon_order: self.epsilon_order,
        }
    }

    pub fn max_harmonic(&self) -> u32 {
        self.terms.keys().map(|k| k.harmonic).max().unwrap_or(0)
    }

    /// Drop every harmonic above `m`.
    pub fn truncate_harmonics(&self, m: u32) -> Self {
        self.filter(|k| k.harmonic <= m)
    }

    /// Partial derivative with respect to the angle `l`.
    pub fn d_angle(&self) -> Self {
        let mut out = Self::zero().with_order(self.epsilon_order);
        for (k, v) in &self.terms {
            let f = int(2 * k.harmonic as i64);
            match k.kind {
                Trig::Const => {}
                Trig::Cos => out.accumulate(TermKey { kind: Trig::Sin, ..*k }, -(v * &f)),
                Trig::Sin => out.accumulate(TermKey { kind: Trig::Cos, ..*k }, v * &f),
            }
        }
        out
    }

    /// Partial derivative with respect to `g`. Series carry no `g` harmonics,
    /// so this is identically zero; it exists so the bracket is written in full.
    pub fn d_node(&self) -> Self {
        Self::zero().with_order(self.epsilon_order)
    }

    /// Partial derivative with respect to the action `L`.
    pub fn d_action_l(&self) -> Self {
        let mut out = Self::zero().with_order(self.epsilon_order);
        for (k, v) in &self.terms {
            if k.l_pow > 0 {
                out.accumulate(TermKey { l_pow: k.l_pow - 1, ..*k }, v * int(k.l_pow as i64));
            }
        }
        out
    }

    /// Partial derivative with respect to the action `G`.
    pub fn d_action_g(&self) -> Self {
        let mut out = Self::zero().with_order(self.epsilon_order);
        for (k, v) in &self.terms {
            if k.g_pow != 0 {
                out.accumulate(TermKey { g_pow: k.g_pow - 1, ..*k }, v * int(k.g_pow as i64));
            }
        }
        out
    }

    /// Numerical value at `(beta, L, G, l)`.
    pub fn eval(&self, beta: f64, big_l: f64, big_g: f64, l: f64) -> f64 {
        let sigma = (1.0 - beta * beta).sqrt();
        self.terms
            .iter()
            .map(|(k, v)| {
                let trig = match k.kind {
                    Trig::Const => 1.0,
                    Trig::Cos => (2.0 * k.harmonic as f64 * l).cos(),
                    Trig::Sin => (2.0 * k.harmonic as f64 * l).sin(),
                };
                to_f64(v)
                    * beta.powi(k.beta_pow as i32)
                    * sigma.powi(k.sigma_pow)
                    * big_l.powi(k.l_pow as i32)
                    * big_g.powi(k.g_pow)
                    * trig
            })
            .sum()
    }
}

/// Product of two harmonics as a sum of harmonics: `(m, kind, factor)`.
fn trig_product(m1: u32, k1: Trig, m2: u32, k2: Trig) -> Vec<(u32, Trig, Rational)> {
    use Trig::*;
    let half = Rational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(2);
    // push T(2 (m) l) for a signed harmonic m
    let mut emit = |m: i64, kind: Trig, c: Rational| {
        let (m, c) = if m < 0 {
            (-m, if kind == Sin { -c } else { c })
        } else {
            (m, c)
        };
        if m == 0 {
            if kind != Sin {
                out.push((0, Const, c));
            }
        } else {
            out.push((m as u32, kind, c));
        }
    };
    let (a, b) = (m1 as i64, m2 as i64);
    match (k1, k2) {
        (Const, _) => emit(b, k2, int(1)),
        (_, Const) => emit(a, k1, int(1)),
        (Cos, Cos) => {
            emit(a - b, Cos, half.clone());
            emit(a + b, Cos, half);
        }
        (Sin, Sin) => {
            emit(a - b, Cos, half.clone());
            emit(a + b, Cos, -half);
        }
        (Cos, Sin) => {
            emit(a + b, Sin, half.clone());
            emit(b - a, Sin, half);
        }
        (Sin, Cos) => {
            emit(a + b, Sin, half.clone());
            emit(a - b, Sin, half);
        }
    }
    out
}

impl<'a> Add<&'a PoissonSeries> for &'a PoissonSeries {
    type Output = PoissonSeries;
    fn add(self, rhs: &PoissonSeries) -> PoissonSeries {
        let mut out = self.clone();
        out.epsilon_order = self.epsilon_order.max(rhs.epsilon_order);
        for (k, v) in &rhs.terms {
            out.accumulate(*k, v.clone());
        }
        out
    }
}

impl<'a> Sub<&'a PoissonSeries> for &'a PoissonSeries {
    type Output = PoissonSeries;
    fn sub(self, rhs: &PoissonSeries) -> PoissonSeries {
        let mut out = self.clone();
        out.epsilon_order = self.epsilon_order.max(rhs.epsilon_order);
        for (k, v) in &rhs.terms {
            out.accumulate(*k, -v.clone());
        }
        out
    }
}

impl Neg for &PoissonSeries {
    type Output = PoissonSeries;
    fn neg(self) -> PoissonSeries {
        self.scale(&int(-1))
    }
}

impl<'a> Mul<&'a PoissonSeries> for &'a PoissonSeries {
    type Output = PoissonSeries;
    fn mul(self, rhs: &PoissonSeries) -> PoissonSeries {
        let mut out = PoissonSeries::zero().with_order(self.epsilon_order + rhs.epsilon_order);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                let prod = va * vb;
                for (m, kind, f) in trig_product(ka.harmonic, ka.kind, kb.harmonic, kb.kind) {
                    let key = TermKey {
                        beta_pow: ka.beta_pow + kb.beta_pow,
                        sigma_pow: ka.sigma_pow + kb.sigma_pow,
                        l_pow: ka.l_pow + kb.l_pow,
                        g_pow: ka.g_pow + kb.g_pow,
                        harmonic: m,
                        kind,
                    };
                    out.accumulate(key, &prod * f);
                }
            }
        }
        out
    }
}

pub fn series_add(a: &PoissonSeries, b: &PoissonSeries) -> PoissonSeries {
    a + b
}

pub fn series_mul(a: &PoissonSeries, b: &PoissonSeries) -> PoissonSeries {
    a * b
}

/// Canonical bracket on the pairs `(l, L)` and `(g, G)`:
/// `{f, h} = f_l h_L - f_L h_l + f_g h_G - f_G h_g`.
pub fn poisson_bracket(f: &PoissonSeries, h: &PoissonSeries) -> PoissonSeries {
    let mut out = &(&f.d_angle() * &h.d_action_l()) - &(&f.d_action_l() * &h.d_angle());
    let node = &(&f.d_node() * &h.d_action_g()) - &(&f.d_action_g() * &h.d_node());
    out = &out + &node;
    out.epsilon_order = f.epsilon_order + h.epsilon_order;
    out
}

pub fn average_over_angle(f: &PoissonSeries) -> PoissonSeries {
    f.average()
}

/// Unperturbed frequency `n0 = coeff * G^g_pow`, independent of `L` and `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequency {
    pub coeff: RingCoefficient,
    pub g_pow: i32,
}

/// Solve `-n0 dW/dl = tilde` for a zero-mean `W`.
pub fn solve_homological(tilde: &PoissonSeries, n0: &Frequency) -> Result<PoissonSeries> {
    if let Some((k, _)) = tilde.terms.iter().find(|(k, _)| k.kind == Trig::Const) {
        return Err(Error::Homological(format!(
            "input has a nonzero average (term with L^{} G^{})",
            k.l_pow, k.g_pow
        )));
    }
    let inv = n0
        .coeff
        .inverse()
        .ok_or_else(|| Error::Homological("frequency is not invertible in the coefficient ring".into()))?;
    let mut out = PoissonSeries::zero().with_order(tilde.epsilon_order);
    for (k, v) in &tilde.terms {
        // c cos(2ml) -> W = -c/(2m n0) sin(2ml);  c sin(2ml) -> W = c/(2m n0) cos(2ml)
        let denom = int(2 * k.harmonic as i64);
        let (kind, c) = match k.kind {
            Trig::Cos => (Trig::Sin, -(v / &denom)),
            Trig::Sin => (Trig::Cos, v / &denom),
            Trig::Const => unreachable!(),
        };
        let key = TermKey {
            beta_pow: k.beta_pow + inv.beta_pow,
            sigma_pow: k.sigma_pow + inv.sigma_pow,
            g_pow: k.g_pow - n0.g_pow,
            kind,
            ..*k
        };
        out.accumulate(key, c * &inv.rational);
    }
    Ok(out)
}

impl fmt::Display for PoissonSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({t})")?;
        }
        Ok(())
    }
}

/// `p/q` rendering helper shared with the table dump.
pub fn rational_str(r: &Rational) -> String {
    format_rational(r)
}
