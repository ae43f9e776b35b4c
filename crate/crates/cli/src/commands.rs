use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;

use serde_json::{json, Value};

use samrot::angle;
use samrot::contours::{self, ContourRequest};
use samrot::oracle::{self, TrajectorySample};
use samrot::real::{DoubleDouble, Real};
use samrot::rigid::inclination_and_delta;
use samrot::series::{deprit_normalize, extract_tables, sam_hamiltonian};
use samrot::theory::{body_catalog, catalog_json, kinoshita_j_exact, MeanElements, SamTheory, SamTheoryTables};
use samrot::{to_action_angle, AndoyerState, InertiaParams};

use crate::failure::{usage, Failure};
use crate::inputs::{sample_times, Format, Inclination};
use crate::{CompareArgs, ContoursArgs, FrequenciesArgs, OutputArgs, PropagateArgs, TablesArgs};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const MAX_TABLE_ORDER: usize = 10;

fn emit(out: &OutputArgs, command: &str, settings: &str, csv: impl FnOnce() -> String, data: impl FnOnce() -> Value) -> Result<(), Failure> {
    let text = match out.format {
        Format::Csv => format!("{}\n{}", format!("# samrot {VERSION} {command} {settings}").trim_end(), csv()),
        Format::Json => {
            let doc = json!({
                "meta": { "program": "samrot", "version": VERSION, "command": command, "settings": settings },
                "data": data(),
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    write_text(out.output.as_deref(), &text)
}

fn write_text(path: Option<&std::path::Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(())
}

fn report_warnings(warnings: &[samrot::theory::Warning]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn sample_json(samples: &[TrajectorySample], beta: f64) -> Value {
    Value::Array(
        samples
            .iter()
            .map(|s| {
                let st = &s.state;
                let aa = to_action_angle(st, beta).ok();
                json!({
                    "t": s.t, "mu": st.mu, "nu": st.nu, "M": st.m, "N": st.n,
                    "l": aa.map(|a| a.l), "g": aa.map(|a| a.g), "L": aa.map(|a| a.big_l), "G": aa.map(|a| a.big_g),
                    "energy": s.energy,
                })
            })
            .collect(),
    )
}

fn csv_samples(samples: &[TrajectorySample], beta: f64) -> String {
    let mut buf = Vec::new();
    oracle::write_csv(&mut buf, samples, beta).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn propagate(a: &PropagateArgs) -> Result<(), Failure> {
    let inertia = a.inertia.resolve()?;
    let p = inertia.params;
    let s0 = a.state.resolve(inertia.body)?;
    let th = SamTheory::default();
    let prop = th.propagator(&s0, p.alpha, p.beta, p.c, a.order)?;
    report_warnings(prop.warnings());
    let e0 = oracle::energy(&s0, &p);
    let samples = sample_times(a.t_end, a.samples)
        .into_iter()
        .map(|t| {
            let state = prop.state_at(t)?;
            let energy = oracle::energy(&state, &p);
            Ok(TrajectorySample { t, state, energy, energy_drift: (energy - e0) / e0 })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let settings = format!(
        "{} {} order={} t_end={} samples={}",
        inertia.label,
        a.state.label(inertia.body),
        a.order,
        a.t_end,
        a.samples
    );
    emit(&a.out, "propagate", &settings, || csv_samples(&samples, p.beta), || sample_json(&samples, p.beta))
}

/// Maximum and RMS errors of one order in `(nu, mu, N/M)`.
#[derive(Debug, Clone, Copy)]
struct OrderErrors {
    order: usize,
    max: [f64; 3],
    rms: [f64; 3],
}

impl OrderErrors {
    fn overall(&self) -> f64 {
        self.max.iter().copied().fold(0.0, f64::max)
    }
}

fn lift<T: Real>(s: &AndoyerState) -> Result<AndoyerState<T>, Failure> {
    Ok(AndoyerState::new(T::of(s.lambda), T::of(s.mu), T::of(s.nu), T::of(s.big_lambda), T::of(s.m), T::of(s.n))?)
}

fn order_errors<T: Real>(
    s0: &AndoyerState,
    p: &InertiaParams,
    times: &[f64],
    orders: &[usize],
    tol: f64,
) -> Result<Vec<OrderErrors>, Failure> {
    let s0 = lift::<T>(s0)?;
    let times: Vec<T> = times.iter().map(|t| T::of(*t)).collect();
    let truth = oracle::integrate_at(&s0, p, &times, tol)?;
    let th = SamTheory::default();
    let mut out = Vec::with_capacity(orders.len());
    for &order in orders {
        let prop = th.propagator(&s0, T::of(p.alpha), T::of(p.beta), T::of(p.c), order)?;
        report_warnings(prop.warnings());
        let mut max = [0.0f64; 3];
        let mut sq = [0.0f64; 3];
        for (t, o) in times.iter().zip(&truth) {
            let s = prop.state_at(*t)?;
            let e = [
                angle::diff(s.nu, o.state.nu).abs().as_f64(),
                angle::diff(s.mu, o.state.mu).abs().as_f64(),
                ((s.n - o.state.n) / s.m).abs().as_f64(),
            ];
            for k in 0..3 {
                max[k] = max[k].max(e[k]);
                sq[k] += e[k] * e[k];
            }
        }
        let n = times.len().max(1) as f64;
        out.push(OrderErrors { order, max, rms: sq.map(|v| (v / n).sqrt()) });
    }
    Ok(out)
}

pub fn compare(a: &CompareArgs) -> Result<(), Failure> {
    let inertia = a.inertia.resolve()?;
    let p = inertia.params;
    let s0 = a.state.resolve(inertia.body)?;
    if a.orders.is_empty() {
        return Err(usage("--orders must list at least one order"));
    }
    let tol = a.tol.unwrap_or(if a.extended { 1e-28 } else { 1e-13 });
    let times = sample_times(a.t_end, a.samples);
    let run = |s: &AndoyerState| {
        if a.extended {
            order_errors::<DoubleDouble>(s, &p, &times, &a.orders, tol)
        } else {
            order_errors::<f64>(s, &p, &times, &a.orders, tol)
        }
    };
    let rows = run(&s0)?;
    let halved = if a.halving {
        let (j, _) = inclination_and_delta(&s0);
        let s_half = AndoyerState::from_inclination(j / 2.0, s0.mu, s0.nu, s0.m)?;
        Some(run(&s_half)?)
    } else {
        None
    };

    let previous_ratio = |i: usize| (i > 0).then(|| rows[i].overall() / rows[i - 1].overall());
    let halving_ratio = |i: usize| halved.as_ref().map(|h| h[i].overall() / rows[i].overall());
    let expected = |order: usize| 2f64.powi(-2 * (order as i32 + 1));

    let settings = format!(
        "{} {} t_end={} samples={} tol={tol:e} extended={}",
        inertia.label,
        a.state.label(inertia.body),
        a.t_end,
        a.samples,
        a.extended
    );
    let csv = || {
        let mut s = String::from("order,max_nu,max_mu,max_N,rms_nu,rms_mu,rms_N,max,ratio_prev");
        if halved.is_some() {
            s.push_str(",halved_max,halving_ratio,expected_ratio");
        }
        s.push('\n');
        for (i, r) in rows.iter().enumerate() {
            let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
            let _ = write!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.order, r.max[0], r.max[1], r.max[2], r.rms[0], r.rms[1], r.rms[2], r.overall(), opt(previous_ratio(i))
            );
            if let Some(h) = &halved {
                let _ = write!(s, ",{},{},{}", h[i].overall(), opt(halving_ratio(i)), expected(r.order));
            }
            s.push('\n');
        }
        s
    };
    let data = || {
        Value::Array(
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut v = json!({
                        "order": r.order,
                        "max": { "nu": r.max[0], "mu": r.max[1], "N": r.max[2] },
                        "rms": { "nu": r.rms[0], "mu": r.rms[1], "N": r.rms[2] },
                        "maxOverall": r.overall(),
                        "ratioPrev": previous_ratio(i),
                    });
                    if let Some(h) = &halved {
                        v["halvedMax"] = json!(h[i].overall());
                        v["halvingRatio"] = json!(halving_ratio(i));
                        v["expectedRatio"] = json!(expected(r.order));
                    }
                    v
                })
                .collect(),
        )
    };
    emit(&a.out, "compare", &settings, csv, data)?;
    if a.check {
        let monotone = rows.windows(2).all(|w| w[1].overall() < w[0].overall());
        if !monotone {
            return Err(Failure::Mismatch("maximum error does not decrease with order".into()));
        }
    }
    Ok(())
}

pub fn contours(a: &ContoursArgs) -> Result<(), Failure> {
    let defaults = ContourRequest::default();
    let req = ContourRequest {
        beta: a.beta,
        n_over_m_min: a.nm_min,
        n_over_m_max: a.nm_max,
        levels: a.levels.clone().unwrap_or(defaults.levels),
        samples: a.samples,
    };
    let all = contours::contours(&req)?;
    for c in all.iter().filter(|c| c.is_empty()) {
        eprintln!("note: level {} of {} has no points in the window", c.level, c.family.label());
    }
    let settings = format!("beta={} window=[{},{}] samples={}", req.beta, req.n_over_m_min, req.n_over_m_max, req.samples);
    let csv = || {
        let mut s = String::from("family,level,segment,nu,n_over_m\n");
        for c in &all {
            for (k, seg) in c.segments.iter().enumerate() {
                for (nu, x) in seg {
                    let _ = writeln!(s, "{},{},{k},{nu},{x}", c.family.label(), c.level);
                }
            }
        }
        s
    };
    emit(&a.out, "contours", &settings, csv, || json!(all))
}

pub fn tables(a: &TablesArgs) -> Result<(), Failure> {
    if a.dump_baked {
        let text = serde_json::to_string_pretty(&SamTheoryTables::baked().to_json())? + "\n";
        return write_text(a.output.as_deref(), &text);
    }
    if a.order == 0 || a.order > MAX_TABLE_ORDER {
        return Err(usage(format!("--order must lie in 1..={MAX_TABLE_ORDER}")));
    }
    let loaded;
    let reference = if a.printed {
        SamTheoryTables::published()
    } else if let Some(path) = &a.against {
        let text = fs::read_to_string(path)?;
        loaded = SamTheoryTables::from_json(&serde_json::from_str(&text)?)?;
        &loaded
    } else {
        SamTheoryTables::baked()
    };
    let generated = extract_tables(&deprit_normalize(&sam_hamiltonian(), a.order)?)?;
    let generated = generated.truncated(a.order.min(reference.max_q_order()), a.order.min(reference.max_map_order()));
    let expected = reference.truncated(a.order, a.order);
    if let Some(path) = &a.output {
        fs::write(path, serde_json::to_string_pretty(&generated.to_json())? + "\n")?;
    }
    let diffs = generated.diff(&expected);
    match diffs.first() {
        None => {
            println!("identical: {} entries through order {}", generated.len(), a.order);
            Ok(())
        }
        Some(first) => {
            println!("different: {} of {} entries", diffs.len(), expected.len().max(generated.len()));
            for d in &diffs {
                println!("  {d}");
            }
            Err(Failure::Mismatch(format!("first differing entry {first}")))
        }
    }
}

/// Outcome of one expansion check: residual at `j` and at `j/2`.
struct Scaling {
    name: &'static str,
    residual: f64,
    halved: f64,
}

impl Scaling {
    const FLOOR: f64 = 1e-28;

    fn ratio(&self) -> f64 {
        self.residual / self.halved
    }

    fn is_fourth_order(&self) -> bool {
        self.residual.abs() <= Self::FLOOR || (8.0..=32.0).contains(&self.ratio())
    }
}

pub fn frequencies(a: &FrequenciesArgs) -> Result<(), Failure> {
    let inertia = a.inertia.resolve()?;
    let p = inertia.params;
    let has_inclination = a.inclination.j_deg.is_some() || a.inclination.j_arcsec.is_some() || a.inclination.n_over_m.is_some();
    let x = match (a.l_over_g, has_inclination) {
        (Some(_), true) => return Err(usage("--LoverG and an inclination are mutually exclusive")),
        (Some(x), false) => x,
        (None, _) => {
            let j = match a.inclination.resolve(inertia.body)? {
                Inclination::Angle(j) => j,
                Inclination::Ratio(r) => r.clamp(-1.0, 1.0).acos(),
            };
            mean_ratio_for_j(j, p.beta)
        }
    };
    let th = SamTheory::default();
    let m = MeanElements::new(a.l, 0.0, x * a.big_g, a.big_g, a.order)?;
    let freq = th.secular_frequencies(&m, p.alpha, p.beta, p.c)?;
    report_warnings(&freq.warnings);
    let (nl, ng) = freq.value;
    let energy = th.averaged_hamiltonian(&m, p.alpha, p.beta, p.c)?.value;
    let d = m.delta_prime(p.beta)?;
    let j = kinoshita_j_exact(d, p.beta);

    let checks = if a.kinoshita {
        let at = |x: f64| -> Result<_, Failure> {
            let dd = |v: f64| DoubleDouble::from(v);
            let md = MeanElements::new(dd(a.l), dd(0.0), dd(x) * dd(a.big_g), dd(a.big_g), a.order)?;
            Ok(th.kinoshita_checks(&md, dd(p.alpha), dd(p.beta), dd(p.c))?)
        };
        let full = at(x)?;
        let half = at(mean_ratio_for_j(full.j / 2.0, p.beta))?;
        let rows: Vec<Scaling> = full
            .primary()
            .into_iter()
            .zip(half.primary())
            .map(|((name, residual), (_, halved))| Scaling { name, residual, halved })
            .collect();
        Some((full, rows))
    } else {
        None
    };

    let settings = format!("{} LoverG={x} G={} l={} order={}", inertia.label, a.big_g, a.l, a.order);
    let csv = || {
        let mut s = String::from("order,LoverG,delta_prime,j,nl,ng,energy\n");
        let _ = writeln!(s, "{},{x},{d},{j},{nl},{ng},{energy}", a.order);
        if let Some((full, rows)) = &checks {
            s.push_str("check,residual,residual_over_j4,halving_ratio,fourth_order\n");
            let j4 = full.j.powi(4);
            for r in rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.name, r.residual, r.residual / j4, r.ratio(), r.is_fourth_order());
            }
            let _ = writeln!(s, "n_l bracket,{},{},,", full.nl_bracket_residual, full.nl_bracket_residual / j4);
            let _ = writeln!(s, "n_g + n_l printed sign,{},{},,", full.ng_nl_printed_residual, full.ng_nl_printed_residual / j4);
        }
        s
    };
    let data = || {
        let mut v = json!({
            "order": a.order, "LoverG": x, "deltaPrime": d, "j": j, "nl": nl, "ng": ng, "energy": energy,
        });
        if let Some((full, rows)) = &checks {
            v["kinoshita"] = json!({
                "report": full,
                "scaling": rows.iter().map(|r| json!({
                    "check": r.name,
                    "residual": r.residual,
                    "halvingRatio": r.ratio(),
                    "fourthOrder": r.is_fourth_order(),
                })).collect::<Vec<_>>(),
            });
        }
        v
    };
    emit(&a.out, "frequencies", &settings, csv, data)?;
    if let Some((_, rows)) = &checks {
        if let Some(bad) = rows.iter().find(|r| !r.is_fourth_order()) {
            return Err(Failure::Mismatch(format!(
                "{} residual {:e} does not scale as j^4 (halving ratio {})",
                bad.name,
                bad.residual,
                bad.ratio()
            )));
        }
    }
    Ok(())
}

/// Mean `L'/G'` whose minimum inclination is `j`.
fn mean_ratio_for_j(j: f64, beta: f64) -> f64 {
    let h = (j / 2.0).sin();
    2.0 * h * h * (1.0 - beta * beta).sqrt() / (1.0 - beta)
}

pub fn bodies(out: &OutputArgs) -> Result<(), Failure> {
    let csv = || {
        let mut s = String::from("name,A_over_C,B_over_C,beta,alpha,beta_from_moments,J0_arcsec,delta\n");
        for b in body_catalog() {
            let p = b.inertia().ok();
            let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                b.name,
                b.a_over_c,
                b.b_over_c,
                b.beta,
                opt(p.map(|p| p.alpha)),
                opt(p.map(|p| p.beta)),
                b.j0_arcsec,
                b.delta()
            );
        }
        s
    };
    emit(out, "bodies", "", csv, catalog_json)
}
