use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// `p/q` for every rational, `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element of the coefficient ring: `rational * beta^beta_pow * sigma^sigma_pow`,
/// with `sigma = sqrt(1 - beta^2)`.
///
/// `sigma` is kept as an independent symbol. All series produced by the SAM
/// normalization are homogeneous in `sigma` at each order, so no reduction with
/// `sigma^2 = 1 - beta^2` is needed until coefficients are read off as
/// polynomials in `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingCoefficient {
    pub rational: Rational,
    pub beta_pow: u32,
    pub sigma_pow: i32,
}

impl RingCoefficient {
    pub fn new(rational: Rational, beta_pow: u32, sigma_pow: i32) -> Self {
        Self {
            rational,
            beta_pow,
            sigma_pow,
        }
    }

    pub fn constant(rational: Rational) -> Self {
        Self::new(rational, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.rational * &other.rational,
            self.beta_pow + other.beta_pow,
            self.sigma_pow + other.sigma_pow,
        )
    }

    /// Multiplicative inverse; only defined when there is no `beta` factor.
    pub fn inverse(&self) -> Option<Self> {
        if self.rational.is_zero() || self.beta_pow != 0 {
            return None;
        }
        Some(Self::new(self.rational.recip(), 0, -self.sigma_pow))
    }

    pub fn eval(&self, beta: f64) -> f64 {
        let sigma = (1.0 - beta * beta).sqrt();
        to_f64(&self.rational) * beta.powi(self.beta_pow as i32) * sigma.powi(self.sigma_pow)
    }
}

impl fmt::Display for RingCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.rational))?;
        if self.beta_pow > 0 {
            write!(f, " b^{}", self.beta_pow)?;
        }
        if self.sigma_pow != 0 {
            write!(f, " s^{}", self.sigma_pow)?;
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

pub(crate) fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}
