//! Inertia data and present-day inclinations of four solar system bodies.

use serde::Serialize;
use serde_json::{json, Value};

use crate::angle::ARCSEC;
use crate::error::Result;
use crate::rigid::{delta_from_inclination, InertiaParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BodyRecord {
    pub name: &'static str,
    pub a_over_c: f64,
    pub b_over_c: f64,
    /// Triaxiality as tabulated (rounded).
    pub beta: f64,
    pub j0_arcsec: f64,
}

const CATALOG: [BodyRecord; 4] = [
    BodyRecord { name: "Mars", a_over_c: 0.9942917, b_over_c: 0.9949813, beta: 0.0646316, j0_arcsec: 0.1 },
    BodyRecord { name: "Earth", a_over_c: 0.9967200, b_over_c: 0.9967222, beta: 0.0003366, j0_arcsec: 1.0 },
    BodyRecord { name: "Moon", a_over_c: 0.999368, b_over_c: 0.999601, beta: 0.226105, j0_arcsec: 6.2 },
    BodyRecord { name: "Eros", a_over_c: 0.229427, b_over_c: 0.963754, beta: 0.977853, j0_arcsec: 55.0 },
];

impl BodyRecord {
    /// Parameters recomputed from the moment ratios with `C = 1`.
    pub fn inertia(&self) -> Result<InertiaParams> {
        InertiaParams::from_moments(self.a_over_c, self.b_over_c, 1.0)
    }

    pub fn j0(&self) -> f64 {
        self.j0_arcsec * ARCSEC
    }

    /// `2 sin^2(J0 / 2)`.
    pub fn delta(&self) -> f64 {
        delta_from_inclination(self.j0())
    }
}

pub fn body_catalog() -> &'static [BodyRecord] {
    &CATALOG
}

/// Case-insensitive lookup by name.
pub fn find_body(name: &str) -> Option<&'static BodyRecord> {
    CATALOG.iter().find(|b| b.name.eq_ignore_ascii_case(name))
}

/// The catalog with derived `alpha`, recomputed `beta` and `delta`.
pub fn catalog_json() -> Value {
    Value::Array(
        CATALOG
            .iter()
            .map(|b| {
                let p = b.inertia().ok();
                json!({
                    "name": b.name,
                    "AoverC": b.a_over_c,
                    "BoverC": b.b_over_c,
                    "beta": b.beta,
                    "J0Arcsec": b.j0_arcsec,
                    "alpha": p.map(|p| p.alpha),
                    "betaFromMoments": p.map(|p| p.beta),
                    "delta": b.delta(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_beta_matches_moments() {
        for b in body_catalog() {
            let p = b.inertia().unwrap();
            assert!((p.beta - b.beta).abs() <= 1e-3 * b.beta, "{}: {} vs {}", b.name, p.beta, b.beta);
        }
    }

    #[test]
    fn delta_magnitudes() {
        let decade = |name: &str| find_body(name).unwrap().delta().log10().round() as i32;
        assert_eq!(decade("mars"), -13);
        assert_eq!(decade("Earth"), -11);
        assert!((-10..=-9).contains(&decade("moon")));
        assert!((-8..=-7).contains(&decade("EROS")));
        assert!(find_body("Pluto").is_none());
    }

    #[test]
    fn json_export() {
        let v = catalog_json();
        assert_eq!(v.as_array().unwrap().len(), 4);
        assert_eq!(v[3]["name"], "Eros");
        assert_eq!(serde_json::to_value(CATALOG[0]).unwrap()["j0Arcsec"], 0.1);
    }
}
