use clap::{Args, ValueEnum};

use samrot::angle::{ARCSEC, DEG};
use samrot::theory::{find_body, BodyRecord};
use samrot::{AndoyerState, InertiaParams};

use crate::failure::{usage, Failure};

#[derive(Debug, Clone, Args)]
pub struct InertiaArgs {
    /// Named body from the built-in catalog (see `samrot bodies`).
    #[arg(long)]
    pub body: Option<String>,

    /// Principal moments A <= B <= C.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
    pub moments: Option<Vec<f64>>,

    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,

    /// Maximum moment of inertia used with --alpha/--beta.
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
}

pub struct Inertia {
    pub params: InertiaParams,
    pub body: Option<&'static BodyRecord>,
    pub label: String,
}

impl InertiaArgs {
    /// Resolves exactly one of body, moments or (alpha, beta).
    pub fn resolve(&self) -> Result<Inertia, Failure> {
        let explicit = self.alpha.is_some() || self.beta.is_some();
        let sources = [self.body.is_some(), self.moments.is_some(), explicit];
        match sources.iter().filter(|s| **s).count() {
            0 => return Err(usage("give one inertia source: --body, --moments or --alpha with --beta")),
            1 => {}
            _ => return Err(usage("--body, --moments and --alpha/--beta are mutually exclusive")),
        }
        if let Some(name) = &self.body {
            let body = find_body(name).ok_or_else(|| usage(format!("unknown body {name:?}; see `samrot bodies`")))?;
            return Ok(Inertia {
                params: body.inertia()?,
                body: Some(body),
                label: format!("body={}", body.name),
            });
        }
        if let Some(m) = &self.moments {
            let params = InertiaParams::from_moments(m[0], m[1], m[2])?;
            return Ok(Inertia {
                params,
                body: None,
                label: format!("A={} B={} C={}", m[0], m[1], m[2]),
            });
        }
        let (alpha, beta) = match (self.alpha, self.beta) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(usage("--alpha and --beta must be given together")),
        };
        Ok(Inertia {
            params: InertiaParams::from_alpha_beta(alpha, beta, self.c)?,
            body: None,
            label: format!("alpha={alpha} beta={beta} C={}", self.c),
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct InclinationArgs {
    /// Inclination of the body equator to the invariable plane, degrees.
    #[arg(long = "J-deg", allow_negative_numbers = true)]
    pub j_deg: Option<f64>,

    /// Same inclination in arcseconds.
    #[arg(long = "J-arcsec", allow_negative_numbers = true)]
    pub j_arcsec: Option<f64>,

    /// `N/M` in place of an inclination.
    #[arg(long = "N-over-M", allow_negative_numbers = true)]
    pub n_over_m: Option<f64>,
}

pub enum Inclination {
    Angle(f64),
    Ratio(f64),
}

impl InclinationArgs {
    /// The single inclination input, or the body's present-day value when none
    /// is given.
    pub fn resolve(&self, body: Option<&BodyRecord>) -> Result<Inclination, Failure> {
        let given = [self.j_deg.is_some(), self.j_arcsec.is_some(), self.n_over_m.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return Err(usage("--J-deg, --J-arcsec and --N-over-M are mutually exclusive"));
        }
        if let Some(d) = self.j_deg {
            return Ok(Inclination::Angle(d * DEG));
        }
        if let Some(s) = self.j_arcsec {
            return Ok(Inclination::Angle(s * ARCSEC));
        }
        if let Some(x) = self.n_over_m {
            return Ok(Inclination::Ratio(x));
        }
        match body {
            Some(b) => Ok(Inclination::Angle(b.j0())),
            None => Err(usage("give an inclination: --J-deg, --J-arcsec or --N-over-M")),
        }
    }

    pub fn label(&self, body: Option<&BodyRecord>) -> String {
        match (self.j_deg, self.j_arcsec, self.n_over_m) {
            (Some(d), _, _) => format!("J={d}deg"),
            (_, Some(s), _) => format!("J={s}arcsec"),
            (_, _, Some(x)) => format!("N/M={x}"),
            _ => body.map_or(String::new(), |b| format!("J={}arcsec", b.j0_arcsec)),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub inclination: InclinationArgs,

    /// Initial node angle nu, radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,

    /// Initial angle mu, radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,

    /// Angular momentum magnitude.
    #[arg(long = "M", default_value_t = 1.0)]
    pub m: f64,
}

impl StateArgs {
    pub fn resolve(&self, body: Option<&BodyRecord>) -> Result<AndoyerState, Failure> {
        let state = match self.inclination.resolve(body)? {
            Inclination::Angle(j) => AndoyerState::from_inclination(j, self.mu, self.nu, self.m)?,
            Inclination::Ratio(x) => AndoyerState::new(0.0, self.mu, self.nu, 0.0, self.m, self.m * x)?,
        };
        Ok(state)
    }

    pub fn label(&self, body: Option<&BodyRecord>) -> String {
        format!("{} nu={} mu={} M={}", self.inclination.label(body), self.nu, self.mu, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `n` equally spaced times from 0 to `t_end` inclusive.
pub fn sample_times(t_end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t_end],
        _ => (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect(),
    }
}
