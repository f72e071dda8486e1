use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

type Row = std::collections::HashMap<String, String>;

fn levy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levy")).args(args).output().expect("running levy")
}

fn rows_of(text: &str) -> Vec<Row> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| headers.iter().zip(rec.unwrap().iter()).map(|(h, v)| (h.to_owned(), v.to_owned())).collect())
        .collect()
}

fn run_rows(args: &[&str]) -> Vec<Row> {
    let out = levy(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    rows_of(&String::from_utf8(out.stdout).unwrap())
}

fn num(row: &Row, col: &str) -> f64 {
    row[col].parse().unwrap()
}

#[test]
fn zeta_rows() {
    let rows = run_rows(&["zeta", "--max-n", "2"]);
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["zeta_2n"].starts_with("1.644934066848226"));
    assert!((num(&rows[1], "zeta_2n") - PI.powi(4) / 90.0).abs() < 1e-15);
    assert_eq!(rows[0]["bernoulli_2n"], "1/6");
    assert_eq!(rows[1]["bernoulli_2n"], "-1/30");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["zeta", "--max-n", "0"][..],
        &["convergence", "--dims", "1", "--samples", "10"],
        &["mse-table", "--n-list", "4,2"],
        &["cheap-area", "--variant", "other"],
        &["fluctuation", "--grid", "0.3,1.5"],
        &["no-such-command"],
    ] {
        assert_eq!(levy(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn runtime_precondition_exits_with_three() {
    let out = levy(&["convergence", "--n-list", "4", "--n-ref", "2", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_ref"));
}

#[test]
fn mse_table_columns() {
    let rows = run_rows(&["mse-table"]);
    let poly0 = rows.iter().find(|r| r["method"] == "polynomial" && r["n"] == "0").unwrap();
    assert_eq!(num(poly0, "mse_exact"), 0.25);
    assert!(rows.iter().all(|r| r["n"] != "0" || r["method"] == "polynomial"));
    for r in rows.iter().filter(|r| r["method"] == "kpw") {
        assert!((num(r, "ratio_to_fourier") - 3.0).abs() < 4.0 * f64::EPSILON);
    }
    for r in rows.iter().filter(|r| r["n"] == "512") {
        let rel = num(r, "N_mse") / num(r, "asymptotic_constant") - 1.0;
        assert!(rel.abs() < 0.002, "{}: {rel}", r["method"]);
    }
}

#[test]
fn convergence_small_runs_are_reproducible() {
    let args = ["convergence", "--samples", "10", "--n-list", "1,2,3", "--seed", "5"];
    let a = levy(&args);
    let b = levy(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rows = rows_of(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(rows.len(), 12);
    assert_eq!(rows.iter().filter(|r| r["record"] == "fit").count(), 3);
    let c = levy(&["convergence", "--samples", "10", "--n-list", "1,2,3", "--seed", "6"]);
    assert_ne!(rows_of(&String::from_utf8(c.stdout).unwrap()), rows);
}

#[test]
fn metadata_lines() {
    let out = levy(&["mse-table", "--seed", "9", "--n-list", "1,2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(meta.len(), 4);
    assert_eq!(meta[0], format!("# levy {}", env!("CARGO_PKG_VERSION")));
    assert_eq!(meta[1], "# command: mse-table");
    assert_eq!(meta[2], "# seed: 9");
    assert!(meta[3].contains("--n-list 1,2") && meta[3].contains("--method fourier,kpw,polynomial"));
}

#[test]
fn json_output_is_newline_delimited() {
    let out = levy(&["zeta", "--max-n", "3", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["meta"]["command"], "zeta");
    assert_eq!(lines[3]["n"], 3);
    assert!((lines[1]["zeta_2n"].as_f64().unwrap() - PI * PI / 6.0).abs() < 1e-15);
}

fn value_at<'a>(rows: &'a [Row], kind: &str, n: &str, s: &str, t: &str) -> &'a Row {
    rows.iter().find(|r| r["kind"] == kind && r["N"] == n && r["s"] == s && r["t"] == t).unwrap()
}

#[test]
fn fluctuation_limits_emerge() {
    let rows = run_rows(&["fluctuation", "--grid", "0,0.3,0.5,1", "--n-list", "16,256,4096"]);
    let inv_pi2 = 1.0 / (PI * PI);
    let gaps = |kind: &str, s: &str, t: &str| -> Vec<f64> {
        ["16", "256", "4096"]
            .iter()
            .map(|n| (num(value_at(&rows, kind, n, s, t), "analytic_scaled") - inv_pi2).abs())
            .collect()
    };
    let kl = gaps("kl", "0.5", "0.5");
    assert!(kl[2] < kl[0] && kl[2] < 1e-3, "{kl:?}");
    let corner = gaps("fourier", "0.0", "1.0");
    assert!(corner[2] < corner[0] && corner[2] < 1e-3, "{corner:?}");
    let limit = value_at(&rows, "fourier", "16", "0.0", "1.0");
    assert_eq!(num(limit, "limit"), inv_pi2);
    assert_eq!(value_at(&rows, "kl", "16", "0.3", "0.5")["empirical"], "");
}

#[test]
fn polynomial_fluctuation_traces_semicircle() {
    let rows = run_rows(&["fluctuation", "--kind", "polynomial", "--grid", "11", "--n-list", "1024"]);
    for r in rows.iter().filter(|r| r["s"] == r["t"]) {
        let t = num(r, "t");
        let semicircle = (t * (1.0 - t)).sqrt() / PI;
        assert_eq!(num(r, "limit"), semicircle);
        if t > 0.05 && t < 0.95 {
            assert!((num(r, "analytic_scaled") / semicircle - 1.0).abs() < 0.05, "t={t}");
        }
    }
}

#[test]
fn fluctuation_estimates_do_not_depend_on_threads() {
    let base = ["fluctuation", "--kind", "fourier", "--grid", "0,0.5,1", "--n-list", "8", "--samples", "9000"];
    let one = levy(&[&base[..], &["--threads", "1"]].concat());
    let three = levy(&[&base[..], &["--threads", "3"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    let rows = rows_of(&String::from_utf8(one.stdout).unwrap());
    let r = value_at(&rows, "fourier", "8", "0.0", "1.0");
    assert!((num(r, "empirical") - num(r, "analytic_scaled")).abs() <= 4.0 * num(r, "stderr"));
}

#[test]
fn polynomial_paths_are_pinned() {
    let rows = run_rows(&["sample-path", "--kind", "polynomial", "--order", "40", "--dims", "2", "--samples", "3"]);
    assert_eq!(rows.len(), 3 * 101 * 2);
    for r in rows.iter().filter(|r| r["t"] == "0.0" || r["t"] == "1.0") {
        assert_eq!(num(r, "value"), 0.0);
    }
    let again = run_rows(&["sample-path", "--kind", "polynomial", "--order", "40", "--dims", "2", "--samples", "3"]);
    assert_eq!(rows, again);
}

/// An order-one Fourier path lies in span{1, cos 2πt, sin 2πt}.
#[test]
fn first_order_fourier_path_has_one_harmonic() {
    let rows = run_rows(&["sample-path", "--kind", "fourier", "--order", "1", "--grid", "41"]);
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (num(r, "t"), num(r, "value"))).collect();
    let basis = |t: f64| [1.0, (2.0 * PI * t).cos(), (2.0 * PI * t).sin()];
    // normal equations of the least-squares fit
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for &(t, v) in &pts {
        let f = basis(t);
        for i in 0..3 {
            b[i] += f[i] * v;
            for j in 0..3 {
                a[i][j] += f[i] * f[j];
            }
        }
    }
    for i in 0..3 {
        for k in i + 1..3 {
            let m = a[k][i] / a[i][i];
            for j in 0..3 {
                a[k][j] -= m * a[i][j];
            }
            b[k] -= m * b[i];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        x[i] = (b[i] - (i + 1..3).map(|j| a[i][j] * x[j]).sum::<f64>()) / a[i][i];
    }
    let resid = pts.iter().map(|&(t, v)| {
        let f = basis(t);
        (v - (x[0] * f[0] + x[1] * f[1] + x[2] * f[2])).abs()
    });
    assert!(resid.fold(0.0, f64::max) < 1e-12);
    assert!(x[1].abs() > 1e-6 && x[2].abs() > 1e-6);
}

#[test]
fn cheap_area_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cheap.csv");
    let p = path.to_str().unwrap();
    let out = levy(&["cheap-area", "--samples", "5000", "--n-list", "1,4", "--variant", "foster", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let rows = rows_of(&std::fs::read_to_string(Path::new(p)).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["variant"], "foster");
    assert_eq!(num(&rows[0], "lambda_sq_exact"), 1.0 / 12.0);
    assert_eq!(rows[1]["lambda_sq"], "");
}
