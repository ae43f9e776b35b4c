//! Small helpers for angles.

use std::f64::consts::PI;

use crate::real::Real;

pub const ARCSEC: f64 = PI / (180.0 * 3600.0);
pub const DEG: f64 = PI / 180.0;

/// Reduce an angle to `[0, 2pi)`.
pub fn normalize<T: Real>(x: T) -> T {
    let tau = T::tau();
    let r = x - tau * (x / tau).floor();
    // the subtraction can round up to exactly 2pi for tiny negative inputs
    if r >= tau || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

/// Signed difference `a - b` reduced to `(-pi, pi]`.
pub fn diff<T: Real>(a: T, b: T) -> T {
    let d = normalize(a - b);
    if d > T::pi() {
        d - T::tau()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::DoubleDouble;
    use std::f64::consts::TAU;

    #[test]
    fn normalize_range() {
        for x in [-1e-300, -7.0, 0.0, 3.0, TAU, 100.0, -TAU] {
            let r = normalize(x);
            assert!((0.0..TAU).contains(&r), "{x} -> {r}");
            let rd = normalize(DoubleDouble::of(x));
            assert!(diff(rd.as_f64(), r).abs() < 1e-13, "{x}: {rd:?} vs {r}");
        }
        assert_eq!(normalize(-1e-300), 0.0);
    }

    #[test]
    fn diff_wraps() {
        assert!((diff(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((diff(TAU - 0.1, 0.1) + 0.2).abs() < 1e-15);
    }
}
