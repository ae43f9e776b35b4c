//! Triaxiality polynomials of the averaged Hamiltonian and of the averaging maps.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use once_cell::sync::Lazy;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::ring::{format_rational, parse_rational, to_f64, Rational};

const TABLE_TEXT: &str = include_str!("../../data/tables.txt");

/// Polynomial in `beta^2`: `coeffs[k]` multiplies `beta^(2k)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BetaPoly(Vec<Rational>);

impl BetaPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficients of `beta^0, beta^2, ...` with trailing zeros removed.
    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn eval(&self, beta: f64) -> f64 {
        let b2 = beta * beta;
        self.0.iter().rev().fold(0.0, |acc, c| acc * b2 + to_f64(c))
    }

    /// Horner evaluation in any working precision.
    pub fn eval_real<T: Real>(&self, beta: T) -> T {
        let b2 = beta * beta;
        self.0
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * b2 + T::ratio(c.numer(), c.denom()))
    }

    fn to_json(&self) -> Value {
        match self.0.as_slice() {
            [] => json!("0"),
            [c] => json!(format_rational(c)),
            cs => Value::Array(
                cs.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| json!({"betaPow": 2 * k, "coeff": format_rational(c)}))
                    .collect(),
            ),
        }
    }

    fn from_json(v: &Value) -> std::result::Result<Self, String> {
        match v {
            Value::String(s) => parse_rational(s).map(Self::constant).ok_or_else(|| format!("bad rational {s:?}")),
            Value::Array(items) => {
                let mut coeffs: Vec<Rational> = Vec::new();
                for item in items {
                    let pow = item
                        .get("betaPow")
                        .and_then(Value::as_u64)
                        .ok_or("missing betaPow")? as usize;
                    if !pow.is_multiple_of(2) {
                        return Err(format!("odd beta power {pow}"));
                    }
                    let c = item
                        .get("coeff")
                        .and_then(Value::as_str)
                        .and_then(parse_rational)
                        .ok_or("missing or malformed coeff")?;
                    if coeffs.len() <= pow / 2 {
                        coeffs.resize(pow / 2 + 1, Rational::zero());
                    }
                    coeffs[pow / 2] += c;
                }
                Ok(Self::new(coeffs))
            }
            _ => Err("expected a string or an array".into()),
        }
    }
}

impl fmt::Display for BetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{} b^2", format_rational(c))?,
                _ => write!(f, "{} b^{}", format_rational(c), 2 * k)?,
            }
        }
        Ok(())
    }
}

/// Identifies one polynomial of the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableKey {
    Q(usize),
    G(usize, usize),
    Ell(usize, usize),
    BigL(usize, usize),
    BigL0(usize),
}

impl TableKey {
    pub fn order(&self) -> usize {
        match *self {
            TableKey::Q(i) | TableKey::BigL0(i) => i,
            TableKey::G(i, _) | TableKey::Ell(i, _) | TableKey::BigL(i, _) => i,
        }
    }
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKey::Q(i) => write!(f, "q[{i}]"),
            TableKey::G(i, m) => write!(f, "g[{i},{m}]"),
            TableKey::Ell(i, m) => write!(f, "l[{i},{m}]"),
            TableKey::BigL(i, m) => write!(f, "L[{i},{m}]"),
            TableKey::BigL0(i) => write!(f, "L[{i},0]"),
        }
    }
}

/// A misprint in the reference tables together with the regenerated value.
#[derive(Debug, Clone, Copy)]
pub struct Erratum {
    pub key: TableKey,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub note: &'static str,
}

pub const ERRATA: &[Erratum] = &[
    Erratum {
        key: TableKey::Ell(1, 1),
        printed: "1/4",
        corrected: "1/2",
        note: "first-order l map is l' - (beta/2) delta' sin 2l'; the column follows l[i,1] = (i+1)/4",
    },
    Erratum {
        key: TableKey::G(6, 3),
        printed: "0 1/128",
        corrected: "1/128",
        note: "constant like the rest of the top harmonic column, g[i,(i+1)/2] = C(i,5)/768 for odd i",
    },
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SamTheoryTables {
    pub q: BTreeMap<usize, BetaPoly>,
    pub g: BTreeMap<(usize, usize), BetaPoly>,
    pub l: BTreeMap<(usize, usize), BetaPoly>,
    pub big_l: BTreeMap<(usize, usize), BetaPoly>,
    pub big_l0: BTreeMap<usize, BetaPoly>,
}

/// One disagreement between two table sets.
#[derive(Debug, Clone, PartialEq)]
pub struct TableDiff {
    pub key: TableKey,
    pub left: Option<BetaPoly>,
    pub right: Option<BetaPoly>,
}

impl fmt::Display for TableDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Option<BetaPoly>| p.as_ref().map_or("(missing)".to_string(), |p| p.to_string());
        write!(f, "{}: {} vs {}", self.key, show(&self.left), show(&self.right))
    }
}

static PUBLISHED: Lazy<SamTheoryTables> =
    Lazy::new(|| SamTheoryTables::parse_text(TABLE_TEXT).expect("bundled tables parse"));

static BAKED: Lazy<SamTheoryTables> = Lazy::new(|| {
    let mut t = PUBLISHED.clone();
    for e in ERRATA {
        let poly = parse_coeff_list(e.corrected).expect("erratum parses");
        t.insert(e.key, poly);
    }
    t
});

fn parse_coeff_list(s: &str) -> Option<BetaPoly> {
    s.split_whitespace()
        .map(parse_rational)
        .collect::<Option<Vec<_>>>()
        .map(BetaPoly::new)
}

impl SamTheoryTables {
    /// Tables exactly as originally printed, misprints included.
    pub fn published() -> &'static SamTheoryTables {
        &PUBLISHED
    }

    /// Tables used for evaluation: the printed values with [`ERRATA`] applied.
    pub fn baked() -> &'static SamTheoryTables {
        &BAKED
    }

    pub fn get(&self, key: TableKey) -> Option<&BetaPoly> {
        match key {
            TableKey::Q(i) => self.q.get(&i),
            TableKey::G(i, m) => self.g.get(&(i, m)),
            TableKey::Ell(i, m) => self.l.get(&(i, m)),
            TableKey::BigL(i, m) => self.big_l.get(&(i, m)),
            TableKey::BigL0(i) => self.big_l0.get(&i),
        }
    }

    pub fn insert(&mut self, key: TableKey, poly: BetaPoly) {
        match key {
            TableKey::Q(i) => self.q.insert(i, poly),
            TableKey::G(i, m) => self.g.insert((i, m), poly),
            TableKey::Ell(i, m) => self.l.insert((i, m), poly),
            TableKey::BigL(i, m) => self.big_l.insert((i, m), poly),
            TableKey::BigL0(i) => self.big_l0.insert(i, poly),
        };
    }

    pub fn entries(&self) -> impl Iterator<Item = (TableKey, &BetaPoly)> {
        self.q
            .iter()
            .map(|(&i, p)| (TableKey::Q(i), p))
            .chain(self.g.iter().map(|(&(i, m), p)| (TableKey::G(i, m), p)))
            .chain(self.l.iter().map(|(&(i, m), p)| (TableKey::Ell(i, m), p)))
            .chain(self.big_l0.iter().map(|(&i, p)| (TableKey::BigL0(i), p)))
            .chain(self.big_l.iter().map(|(&(i, m), p)| (TableKey::BigL(i, m), p)))
    }

    pub fn len(&self) -> usize {
        self.q.len() + self.g.len() + self.l.len() + self.big_l.len() + self.big_l0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest order available for the secular polynomials.
    pub fn max_q_order(&self) -> usize {
        self.q.keys().copied().max().unwrap_or(0)
    }

    /// Highest order `i` for which all periodic families are present.
    pub fn max_map_order(&self) -> usize {
        let top = |keys: Vec<usize>| keys.into_iter().max().unwrap_or(0);
        top(self.g.keys().map(|k| k.0).collect())
            .min(top(self.l.keys().map(|k| k.0).collect()))
            .min(top(self.big_l.keys().map(|k| k.0).collect()))
            .min(top(self.big_l0.keys().copied().collect()))
    }

    /// Keep only orders up to `q_order` for `q` and up to `map_order` elsewhere.
    pub fn truncated(&self, q_order: usize, map_order: usize) -> Self {
        Self {
            q: self.q.iter().filter(|(i, _)| **i <= q_order).map(|(k, v)| (*k, v.clone())).collect(),
            g: self.g.iter().filter(|(k, _)| k.0 <= map_order).map(|(k, v)| (*k, v.clone())).collect(),
            l: self.l.iter().filter(|(k, _)| k.0 <= map_order).map(|(k, v)| (*k, v.clone())).collect(),
            big_l: self.big_l.iter().filter(|(k, _)| k.0 <= map_order).map(|(k, v)| (*k, v.clone())).collect(),
            big_l0: self.big_l0.iter().filter(|(i, _)| **i <= map_order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Parse the line format `<family> <i> [<m>] : c0 c2 c4 ...`.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut t = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::TableParse {
                line: n + 1,
                message: message.to_string(),
            };
            let (head, body) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let mut fields = head.split_whitespace();
            let family = fields.next().ok_or_else(|| err("missing family"))?;
            let idx: Vec<usize> = fields
                .map(|f| f.parse().map_err(|_| err("bad index")))
                .collect::<Result<_>>()?;
            let poly = parse_coeff_list(body).ok_or_else(|| err("bad coefficient"))?;
            let key = match (family, idx.as_slice()) {
                ("q", [i]) => TableKey::Q(*i),
                ("L0", [i]) => TableKey::BigL0(*i),
                ("g", [i, m]) => TableKey::G(*i, *m),
                ("l", [i, m]) => TableKey::Ell(*i, *m),
                ("L", [i, m]) => TableKey::BigL(*i, *m),
                _ => return Err(err("unknown family or wrong number of indices")),
            };
            if t.get(key).is_some() {
                return Err(err("duplicate entry"));
            }
            t.insert(key, poly);
        }
        Ok(t)
    }

    /// JSON dump: constant entries as `"p/q"`, others as `[{"betaPow", "coeff"}]`.
    pub fn to_json(&self) -> Value {
        let mut q = Map::new();
        for (i, p) in &self.q {
            q.insert(i.to_string(), p.to_json());
        }
        let pairs = |m: &BTreeMap<(usize, usize), BetaPoly>| {
            let mut out = Map::new();
            for ((i, k), p) in m {
                out.insert(format!("{i},{k}"), p.to_json());
            }
            out
        };
        let mut big_l = Map::new();
        let mut rows: Vec<((usize, usize), &BetaPoly)> = self.big_l0.iter().map(|(i, p)| ((*i, 0), p)).collect();
        rows.extend(self.big_l.iter().map(|(k, p)| (*k, p)));
        rows.sort_by_key(|(k, _)| *k);
        for ((i, m), p) in rows {
            big_l.insert(format!("{i},{m}"), p.to_json());
        }
        json!({
            "q": Value::Object(q),
            "g": Value::Object(pairs(&self.g)),
            "l": Value::Object(pairs(&self.l)),
            "L": Value::Object(big_l),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |message: String| Error::TableParse { line: 0, message };
        let family = |name: &str| -> Result<&Map<String, Value>> {
            v.get(name)
                .and_then(Value::as_object)
                .ok_or_else(|| bad(format!("missing object {name:?}")))
        };
        let index = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|x| x.trim().parse().map_err(|_| bad(format!("bad key {s:?}"))))
                .collect()
        };
        let mut t = Self::default();
        for (name, map) in ["q", "g", "l", "L"].into_iter().map(|n| (n, family(n))) {
            for (k, p) in map? {
                let poly = BetaPoly::from_json(p).map_err(|e| bad(format!("{name}[{k}]: {e}")))?;
                let key = match (name, index(k)?.as_slice()) {
                    ("q", [i]) => TableKey::Q(*i),
                    ("g", [i, m]) => TableKey::G(*i, *m),
                    ("l", [i, m]) => TableKey::Ell(*i, *m),
                    ("L", [i, 0]) => TableKey::BigL0(*i),
                    ("L", [i, m]) => TableKey::BigL(*i, *m),
                    _ => return Err(bad(format!("{name}: malformed key {k:?}"))),
                };
                t.insert(key, poly);
            }
        }
        Ok(t)
    }

    /// Entries of `self` that are absent from or different in `other`, plus
    /// entries only present in `other`.
    pub fn diff(&self, other: &Self) -> Vec<TableDiff> {
        let mut out = Vec::new();
        for (key, p) in self.entries() {
            match other.get(key) {
                Some(o) if o == p => {}
                o => out.push(TableDiff {
                    key,
                    left: Some(p.clone()),
                    right: o.cloned(),
                }),
            }
        }
        for (key, p) in other.entries() {
            if self.get(key).is_none() {
                out.push(TableDiff {
                    key,
                    left: None,
                    right: Some(p.clone()),
                });
            }
        }
        out.sort_by_key(|d| d.key);
        out
    }

    /// Entries of `reference` that `self` reproduces exactly, and the ones it does not.
    pub fn compare_against(&self, reference: &Self) -> (usize, Vec<TableDiff>) {
        let mut matched = 0;
        let mut bad = Vec::new();
        for (key, p) in reference.entries() {
            match self.get(key) {
                Some(mine) if mine == p => matched += 1,
                mine => bad.push(TableDiff {
                    key,
                    left: mine.cloned(),
                    right: Some(p.clone()),
                }),
            }
        }
        (matched, bad)
    }
}
