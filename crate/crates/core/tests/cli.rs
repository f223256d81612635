use std::process::{Command, Output};

use serde_json::Value;

fn minktrig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minktrig"))
        .args(args)
        .env_remove("MINKTRIG_TABLE_SIZE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn eval_value(args: &[&str]) -> Value {
    let o = minktrig(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["value"].clone()
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
#[allow(clippy::approx_constant)]
fn eval_examples() {
    let v = eval_value(&["eval", "--norm", "builtin:euclidean", "--fn", "cm", "--args", "1,0,1,1"]);
    assert_eq!(v.as_f64(), Some(0.7071067812));
    let v = eval_value(&["eval", "--norm", "builtin:lp:4", "--fn", "b", "--args", "1,0"]);
    assert_eq!(v, serde_json::json!([0.0, 1.0]));
    let apex = format!("{},1", 1.0 - 2f64.powf(0.25));
    let v = eval_value(&["eval", "--norm", "builtin:mixed:4", "--fn", "gamma", "--args", &apex]);
    assert!((v.as_f64().unwrap() - 2.548003196).abs() < 1e-9);
}

#[test]
fn eval_output_shape() {
    let o = minktrig(&["eval", "--norm", "builtin:lp:4", "--fn", "antinorm", "--args", "1,0"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fn"], "antinorm");
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let v = eval_value(&["eval", "--norm", "builtin:euclidean", "--fn", "gamma", "--args", "1,0,0,1"]);
    assert!((v.as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = eval_value(&["eval", "--norm", "builtin:euclidean", "--fn", "gateaux", "--args", "1,0,1,1"]);
    assert!((v.as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn eval_accepts_json_spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lp4.json");
    std::fs::write(&path, r#"{"kind": "lp", "p": 4}"#).unwrap();
    let v = eval_value(&["eval", "--norm", path.to_str().unwrap(), "--fn", "b", "--args", "1,0"]);
    assert_eq!(v, serde_json::json!([0.0, 1.0]));
}

#[test]
fn exit_codes() {
    let bad_spec = minktrig(&["eval", "--norm", "builtin:lp:0.5", "--fn", "cm", "--args", "1,0,1,1"]);
    assert_eq!(bad_spec.status.code(), Some(2));
    let unknown_fn = minktrig(&["eval", "--norm", "builtin:euclidean", "--fn", "tan", "--args", "1,0"]);
    assert_eq!(unknown_fn.status.code(), Some(2));
    let zero = minktrig(&["eval", "--norm", "builtin:euclidean", "--fn", "cm", "--args", "0,0,1,1"]);
    assert_eq!(zero.status.code(), Some(3));
    let inside = minktrig(&["eval", "--norm", "builtin:euclidean", "--fn", "gamma", "--args", "1.000000000001,0"]);
    assert_eq!(inside.status.code(), Some(3));
    let cn = minktrig(&["eval", "--norm", "builtin:lp:4", "--fn", "cn", "--args", "1,0,1,1"]);
    assert_eq!(cn.status.code(), Some(3));
    let unwritable = minktrig(&["plot", "--norm", "builtin:euclidean", "--figure", "circle", "--out", "/nonexistent/dir/c.svg"]);
    assert_eq!(unwritable.status.code(), Some(4));
    let missing = minktrig(&["eval", "--norm", "/nonexistent/spec.json", "--fn", "cm", "--args", "1,0,1,1"]);
    assert_eq!(missing.status.code(), Some(4));
    let usage = minktrig(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn table_size_from_environment() {
    let run = |size: &str| {
        Command::new(env!("CARGO_BIN_EXE_minktrig"))
            .args(["table", "--norm", "builtin:mixed:4", "--fn", "arc-params", "--grid", "4"])
            .env("MINKTRIG_TABLE_SIZE", size)
            .output()
            .unwrap()
    };
    assert_eq!(run("12").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
    let o = run("256");
    assert_eq!(o.status.code(), Some(0));
    // one row per 64 table points
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn verify_euclidean_all_passes() {
    let o = minktrig(&["verify", "--norm", "builtin:euclidean", "--suite", "all", "--samples", "64"]);
    let reports: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&Value> = reports.iter().filter(|r| r["pass"] != true).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(o.status.code(), Some(0));
    for r in &reports {
        assert!(r["check"].is_string() && r["max_residual"].is_number());
        assert_eq!(r["witness"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn verify_lp4_radon_reports_not_radon() {
    let o = minktrig(&["verify", "--norm", "builtin:lp:4", "--suite", "radon"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports[0]["check"], "radon:NotRadon");
    assert_eq!(reports[0]["pass"], false);
    assert!(reports[0]["max_residual"].as_f64().unwrap() > 1e-4);
}

#[test]
fn verify_mixed4_radon_conditional_checks() {
    let o = minktrig(&["verify", "--norm", "builtin:mixed:4", "--suite", "all", "--samples", "64"]);
    let reports: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let find = |name: &str| reports.iter().find(|r| r["check"] == name).unwrap_or_else(|| panic!("{name}"));
    for name in [
        "polar_coordinates",
        "cm_sign_symmetry",
        "pythagorean_cn",
        "gamma_orthogonal_pairs",
        "parallel_chords",
        "bisector_collinearity",
        "radon_gamma_formula",
        "radon_gamma_factors_nonnegative",
        "parameters_coincide",
        "b_traverses_circle",
        "b_squared",
        "mixed_apex_gamma",
    ] {
        assert_eq!(find(name)["pass"], true, "{name}");
    }
}

#[test]
fn verify_is_deterministic_under_seed() {
    let args = ["verify", "--norm", "builtin:lp:4", "--suite", "trig", "--samples", "32", "--seed", "7"];
    let (a, b) = (minktrig(&args), minktrig(&args));
    assert_eq!(a.stdout, b.stdout);
    let c = minktrig(&["verify", "--norm", "builtin:lp:4", "--suite", "trig", "--samples", "32", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn plot_figures_write_svg_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    for figure in ["circle", "cm-construction", "gamma-construction", "parallel-chords"] {
        let out = dir.path().join(format!("{figure}.svg"));
        let o = minktrig(&["plot", "--norm", "builtin:mixed:4", "--figure", figure, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{figure}");
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<path"));
        let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
        assert!(csv.starts_with("label,x,y\n"));
    }
    let circle = std::fs::read_to_string(dir.path().join("circle.csv")).unwrap();
    assert!(circle.contains("\ncircle,") && circle.contains("\nanticircle,"));
    let chords = std::fs::read_to_string(dir.path().join("parallel-chords.csv")).unwrap();
    let defect = chords.lines().find(|l| l.starts_with("defect,")).unwrap();
    let d: f64 = defect.split(',').nth(1).unwrap().parse().unwrap();
    assert!(d < 1e-6);
}

#[test]
fn plot_cm_construction_euclidean() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cm.svg");
    let o = minktrig(&[
        "plot", "--norm", "builtin:euclidean", "--figure", "cm-construction", "--out", out.to_str().unwrap(),
        "--x", "1,0", "--y", "0.5,0.8660254037844386",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert!(csv.contains("\nq,0.5,0\n"), "{csv}");
}

#[test]
fn tables() {
    let sweep = stdout(&minktrig(&["table", "--fn", "gamma-sweep", "--p-list", "4,8,16,32,64"]));
    let g = csv_column(&sweep, "gamma");
    assert_eq!(g.len(), 5);
    assert!(g.windows(2).all(|w| w[1] > w[0]), "{g:?}");

    let rho = stdout(&minktrig(&["table", "--norm", "builtin:euclidean", "--fn", "rho", "--grid", "32"]));
    assert!(csv_column(&rho, "rho").iter().all(|r| (r - 1.0).abs() < 1e-5));

    let arc = stdout(&minktrig(&["table", "--norm", "builtin:mixed:4", "--fn", "arc-params", "--grid", "64"]));
    let (a, b, c) = (csv_column(&arc, "s_norm"), csv_column(&arc, "s_anti"), csv_column(&arc, "sector_area2"));
    for i in 0..a.len() {
        assert!((a[i] - b[i]).abs() < 1e-5 && (a[i] - c[i]).abs() < 1e-5);
    }

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("row.csv");
    let o = minktrig(&["table", "--norm", "builtin:lp:4", "--fn", "cm-row", "--grid", "16", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 17);
}

#[test]
fn gamma_and_calculus_csv() {
    let g = stdout(&minktrig(&["gamma", "--norm", "builtin:euclidean", "--points", "2,0;0,-3"]));
    assert!(g.starts_with("p_x,p_y,len1,len2,gamma\n"));
    assert_eq!(csv_column(&g, "gamma"), vec![1.0, 1.0]);
    assert!((csv_column(&g, "len1")[0] - 3f64.sqrt()).abs() < 1e-9);

    let c = stdout(&minktrig(&["calculus", "--norm", "builtin:euclidean", "--grid", "256"]));
    assert!(c.starts_with("s,theta,rho,sn,cm,residual\n"));
    assert!(csv_column(&c, "residual").iter().all(|r| *r < 1e-3));
    assert!(csv_column(&c, "rho").iter().all(|r| (r - 1.0).abs() < 1e-5));
}
