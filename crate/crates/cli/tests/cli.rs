use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

use samrot::angle::DEG;
use samrot::theory::SamTheory;
use samrot::{AndoyerState, InertiaParams};

fn samrot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_samrot")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV document with a `#` header line and a column header.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# samrot "));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn propagate_writes_ten_samples_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = samrot(&[
        "propagate", "--body", "Eros", "--J-arcsec", "55", "--order", "5", "--t-end", "100", "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(header.join(","), samrot::oracle::CSV_HEADER);
    assert_eq!(rows.len(), 10);
    assert_eq!(num(&rows[9][0]), 100.0);
}

#[test]
fn propagate_matches_library_bit_for_bit() {
    let out = samrot(&["propagate", "--alpha", "1", "--beta", "0.8", "--J-deg", "5", "--order", "3"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    let p = InertiaParams::from_alpha_beta(1.0, 0.8, 1.0).unwrap();
    let s0 = AndoyerState::from_inclination(5.0 * DEG, 0.0, 0.0, 1.0).unwrap();
    let th = SamTheory::default();
    for row in rows {
        let t = num(&row[0]);
        let s = th.propagate_series(&s0, &p, t, 3).unwrap().value;
        assert_eq!([num(&row[1]), num(&row[2]), num(&row[3]), num(&row[4])], [s.mu, s.nu, s.m, s.n]);
    }
}

#[test]
fn axisymmetric_propagation_is_the_closed_form() {
    let out = samrot(&["propagate", "--alpha", "0.3", "--beta", "0", "--J-deg", "20", "--nu", "0.4"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    let n = (20.0 * DEG).cos();
    for row in rows {
        let t = num(&row[0]);
        let nu = 0.4 - 0.3 * n * t;
        let mu = 1.3 * t;
        assert!(samrot::angle::diff(num(&row[2]), nu).abs() < 1e-11);
        assert!(samrot::angle::diff(num(&row[1]), mu).abs() < 1e-11);
        assert_eq!(num(&row[4]), n);
    }
}

#[test]
fn output_is_a_pure_function_of_flags() {
    let args = ["propagate", "--moments", "0.8", "0.9", "1", "--N-over-M", "0.97", "--samples", "4"];
    let a = samrot(&args);
    let b = samrot(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let args = ["propagate", "--alpha", "1", "--beta", "0.5", "--J-deg", "10", "--samples", "3"];
    let (_, rows) = csv_rows(&stdout(&samrot(&args)));
    let json_out = samrot(&[&args[..], &["--format", "json"]].concat());
    let doc: Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let data = doc["data"].as_array().unwrap();
    assert_eq!(data.len(), rows.len());
    for (row, obj) in rows.iter().zip(data) {
        assert_eq!(num(&row[2]), obj["nu"].as_f64().unwrap());
        assert_eq!(num(&row[4]), obj["N"].as_f64().unwrap());
        assert_eq!(num(&row[9]), obj["energy"].as_f64().unwrap());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(samrot(&["propagate", "--body", "Eros", "--alpha", "1", "--beta", "0.5"]).status.code(), Some(1));
    assert_eq!(samrot(&["propagate", "--alpha", "1", "--beta", "0.5", "--J-deg", "1", "--J-arcsec", "2"]).status.code(), Some(1));
    assert_eq!(samrot(&["propagate", "--body", "Vesta"]).status.code(), Some(1));
    assert_eq!(samrot(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(samrot(&["propagate", "--alpha", "1", "--beta", "0.5", "--N-over-M", "-0.3"]).status.code(), Some(2));
    assert_eq!(samrot(&["propagate", "--moments", "1", "0.5", "0.7", "--J-deg", "3"]).status.code(), Some(2));
    assert_eq!(samrot(&["tables", "--order", "11"]).status.code(), Some(1));
    assert_eq!(samrot(&["--help"]).status.code(), Some(0));
}

#[test]
fn compare_errors_decrease_with_order() {
    let out = samrot(&["compare", "--alpha", "1", "--beta", "0.8", "--J-deg", "5", "--orders", "1,2,3", "--check"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&stdout(&out));
    let col = header.iter().position(|h| h == "max").unwrap();
    let errs: Vec<f64> = rows.iter().map(|r| num(&r[col])).collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0] / 10.0), "{errs:?}");
}

#[test]
fn compare_axisymmetric_is_at_the_noise_floor() {
    let out = samrot(&["compare", "--alpha", "1", "--beta", "0", "--J-deg", "5"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    let col = header.iter().position(|h| h == "max").unwrap();
    for r in rows {
        assert!(num(&r[col]) < 1e-11);
    }
}

#[test]
fn contours_default_run_has_every_level() {
    let out = samrot(&["contours", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let levels = doc["data"].as_array().unwrap();
    assert_eq!(levels.len(), 24);
    assert!(levels.iter().all(|l| !l["segments"].as_array().unwrap().is_empty()));
}

#[test]
fn contour_zero_level_is_the_axis_and_empty_levels_are_noted() {
    let out = samrot(&["contours", "--levels", "0,5", "--samples", "8"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| num(&r[1]) == 0.0 && num(&r[4]) == 1.0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no points"));
}

#[test]
fn tables_regenerate_identically() {
    let out = samrot(&["tables", "--order", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("identical"));
    let out = samrot(&["tables", "--order", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("identical"));
}

#[test]
fn tampered_reference_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tables.json");
    assert!(samrot(&["tables", "--dump-baked", "-o", path.to_str().unwrap()]).status.success());
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["q"]["2"] = Value::String("5/9".into());
    fs::write(&path, doc.to_string()).unwrap();
    let out = samrot(&["tables", "--order", "3", "--against", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q[2]"));
}

#[test]
fn frequencies_axisymmetric() {
    let out = samrot(&["frequencies", "--beta", "0", "--alpha", "1", "--LoverG", "0.1"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&stdout(&out));
    let nl = num(&rows[0][header.iter().position(|h| h == "nl").unwrap()]);
    assert!((nl - 0.9).abs() < 1e-15);
}

#[test]
fn kinoshita_report_for_earth() {
    let out = samrot(&["frequencies", "--body", "Earth", "--J-arcsec", "1", "--kinoshita", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = doc["data"]["kinoshita"]["scaling"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["fourthOrder"] == Value::Bool(true)));
}

#[test]
fn bodies_lists_the_catalog() {
    let out = samrot(&["bodies"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&stdout(&out));
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(names, ["Mars", "Earth", "Moon", "Eros"]);
    assert!(rows.iter().all(|r| num(&r[7]) > 0.0 && num(&r[7]) < 1e-7));
}
