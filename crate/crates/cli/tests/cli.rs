use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn mwbody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwbody"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const SQUARE: &str = "polygon:1,-1;1,1;-1,1;-1,-1";

#[test]
fn asp_zero_is_n_times_volume() {
    let out = mwbody(&["asp", "--body", "ellipse:a=2,b=1", "--p", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let value = v["result"]["values"][0]["asp"].as_f64().unwrap();
    assert!((value - 4.0 * PI).abs() < 1e-12);
    assert_eq!(v["config"]["command"]["body"], "ellipse:a=2,b=1");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn gallery_square_passes() {
    let out = mwbody(&["gallery", "square"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let records = v["result"]["records"].as_array().unwrap();
    assert!(records.iter().all(|r| r["pass"] == true));
    assert!(records.iter().any(|r| r["case"] == "d:wf(a,-a):exact"));
}

#[test]
fn gallery_csv_schema() {
    let out = mwbody(&["gallery", "ball", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("case,expected,computed,tolerance,pass\n"));
}

#[test]
fn discrimination_selects_adopted() {
    let out = mwbody(&["gallery", "discriminate", "--r", "2", "--beta", "3", "--grid", "512"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"], "adopted");
}

#[test]
fn square_mean_width_body_is_unbounded_upwards() {
    let out = mwbody(&[
        "mwbody", "--body", SQUARE, "--weight", "piecewise:top=0.5,bottom=1", "--t", "0.22", "--grid", "720", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,rho,unbounded"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 720);
    // index 180 is θ = π/2, index 540 is θ = 3π/2
    assert_eq!(rows[180][2], "true");
    assert_eq!(rows[180][1], "inf");
    assert_eq!(rows[540][2], "false");
    assert_eq!(rows[0][2], "false");
}

#[test]
fn entropy_of_ball_is_exact() {
    let out = mwbody(&["entropy", "--body", "ball:r=2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!(r["dkl_pq"].as_f64(), Some(0.0));
    assert_eq!(r["dkl_qp"].as_f64(), Some(0.0));
    assert_eq!(r["residual_eq1"].as_f64(), Some(0.0));
    assert_eq!(r["omega"].as_f64(), Some(256.0));
}

#[test]
fn converge_csv_and_target() {
    let out = mwbody(&[
        "converge", "--body", "ball:r=1", "--weight", "const:1", "--tmin", "1e-7", "--tmax", "1e-4", "--steps", "4", "--grid", "256",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert!((r["target"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-12);
    assert!(r["rel_error"].as_f64().unwrap() < 0.01);
    let t: Vec<f64> = r["t_values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(t, vec![1e-4, 1e-5, 1e-6, 1e-7]);

    let csv = mwbody(&[
        "converge", "--body", "ball:r=1", "--weight", "const:1", "--steps", "3", "--grid", "64", "--no-refine", "--format", "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("t,volume,ratio\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = |threads: &'static str| {
        vec![
            "converge", "--body", "ellipse:a=2,b=1", "--weight", "power:beta=3", "--tmin", "1e-6", "--tmax", "1e-4", "--steps", "3",
            "--grid", "128", "--no-refine", "--tol", "1", "--threads", threads,
        ]
    };
    let one = mwbody(&args("1"));
    let four = mwbody(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    let strip = |o: &Output| {
        let mut v = json(o);
        v["config"]["global"]["threads"] = Value::Null;
        v.to_string()
    };
    assert_eq!(strip(&one), strip(&four));
    let again = mwbody(&args("1"));
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn exit_codes() {
    let parse = mwbody(&["asp", "--body", "cube:a=1", "--p", "1"]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("position 0"));

    let pole = mwbody(&["asp", "--body", "ellipse:a=2,b=1", "--p", "-2"]);
    assert_eq!(pole.status.code(), Some(1));

    let outside = mwbody(&["polar", "--body", "polygon:2,0;3,0;3,1"]);
    assert_eq!(outside.status.code(), Some(1));

    let missing = mwbody(&["asp", "--body", "ball:r=1"]);
    assert_eq!(missing.status.code(), Some(1));

    let io = mwbody(&["asp", "--body", "ball:r=1", "--p", "1", "--out", "/nonexistent-dir/out.json"]);
    assert_eq!(io.status.code(), Some(3));

    let tolerance = mwbody(&[
        "converge", "--body", "ball:r=1", "--weight", "const:1", "--tmin", "1e-5", "--tmax", "1e-4", "--steps", "2", "--grid", "64",
        "--no-refine", "--tol", "1e-12",
    ]);
    assert_eq!(tolerance.status.code(), Some(2));
    assert_eq!(json(&tolerance)["pass"], false);

    assert_eq!(mwbody(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# wf at the square witness\nbody=polygon:1,-1;1,1;-1,1;-1,-1\nweight=piecewise:top=0.5,bottom=1\n").unwrap();
    let out_path = dir.path().join("wf.json");
    let a = 1.0 / (1.0 - 3f64.sqrt() / 2.0);
    let point = format!("{a},{}", -a);
    let out = mwbody(&[
        "wf", "--config", cfg.to_str().unwrap(), "--point", &point, "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let wf = v["result"]["wf"].as_f64().unwrap();
    assert!((wf - (3f64.sqrt() - 3.0 / 16.0) / (2.0 * PI)).abs() < 1e-9);
    assert_eq!(v["config"]["command"]["weight"], "piecewise:top=0.5,bottom=1");

    let missing = mwbody(&["wf", "--config", "/nonexistent.cfg", "--point", "1,1"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn remaining_subcommands_run() {
    for args in [
        vec!["polar", "--body", "trig:c0=1,c3=0.1", "--grid", "16"],
        vec!["widthdiff", "--body", "ball:r=1", "--outer", "ellipse:a=2,b=1", "--weight", "power:beta=1"],
        vec!["entcheck", "--body", "ball:r=1", "--outer", "ellipse:a=2,b=1"],
        vec!["omega", "--body", "trig:c0=1,c3=0.1", "--pmax", "1024"],
        vec!["probe", "--body", "ellipse:a=2,b=1", "--weight", "power:beta=3", "--theta", "0.4"],
        vec!["mwbody", "--body", "ellipse:a=2,b=1", "--weight", "power:beta=3", "--t", "0.01", "--grid", "64", "--convexity"],
    ] {
        let out = mwbody(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["pass"], true);
        let csv = mwbody(&[args.as_slice(), &["--format", "csv"]].concat());
        assert_eq!(csv.status.code(), Some(0));
    }
    let w = mwbody(&["widthdiff", "--body", "ball:r=1", "--outer", "ellipse:a=2,b=1", "--weight", "power:beta=1"]);
    assert!(json(&w)["result"]["difference"].as_f64().unwrap() < 1e-8);
}
