use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwaffine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(args: &[&str]) -> Vec<Vec<String>> {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

const HALF: [&str; 6] = ["--lambda", "0.5", "--mu", "0.5", "--delta", "0.75"];

fn with<'a>(cmd: &'a str, base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(base);
    v.extend_from_slice(extra);
    v
}

#[test]
fn rho_on_a_plateau() {
    let v = json(&with("rho", &HALF, &[]));
    assert_eq!(v["command"], "rho");
    let r = &v["result"];
    assert_eq!(r["rotation"]["p"], 1);
    assert_eq!(r["rotation"]["q"], 2);
    assert_eq!(r["boundary"], "interior");
    assert!((num(&r["plateau"][0]) - 2.0 / 3.0).abs() < 1e-12);
    assert!((num(&r["plateau"][1]) - 0.9).abs() < 1e-12);
}

#[test]
fn rho_rejects_delta_at_lower_bound() {
    let out = run(&["rho", "--lambda", "0.5", "--mu", "0.5", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta must exceed 1-lambda"));
}

#[test]
fn rho_bracket_near_golden() {
    let base = ["--lambda", "0.95", "--mu", "0.9", "--delta", "0.6617"];
    let v = json(&with("rho", &base, &["--max-den", "30"]));
    let r = &v["result"];
    assert!(r["rotation"].is_null());
    let lo = &r["bracket"][0];
    let hi = &r["bracket"][1];
    let frac = |f: &Value| num(&f["p"]) / num(&f["q"]);
    assert!(frac(lo) < 0.618034 && 0.618034 < frac(hi), "{lo} {hi}");
    // 0.6617 itself sits on the 21/34 plateau
    let v = json(&with("rho", &base, &[]));
    assert_eq!(v["result"]["rotation"]["q"], 34);
}

#[test]
fn delta_real_and_rational() {
    let v = json(&["delta", "--lambda", "0.95", "--mu", "0.9", "--rho-real", "sqrt5m1over2"]);
    assert!((num(&v["result"]["delta"]) - 0.6617).abs() < 5e-5);
    assert!(num(&v["diagnostics"]["tail_bound"]) <= 1e-12);
    let ext = json(&[
        "delta", "--lambda", "0.95", "--mu", "0.9", "--rho-real", "sqrt5m1over2", "--precision", "128",
    ]);
    assert!((num(&ext["result"]["delta"]) - num(&v["result"]["delta"])).abs() < 1e-11);

    let v = json(&["delta", "--lambda", "0.5", "--mu", "0.5", "--rho-rational", "1/2"]);
    assert!((num(&v["result"]["delta"]) - 0.9).abs() < 1e-12);
    assert!((num(&v["result"]["plateau"][0]) - 2.0 / 3.0).abs() < 1e-12);
    let left = json(&["delta", "--lambda", "0.5", "--mu", "0.5", "--rho-rational", "1/2", "--side", "left"]);
    assert_eq!(left["result"]["delta"], v["result"]["plateau"][0]);
}

#[test]
fn delta_out_of_range_is_invalid_input() {
    let out = run(&["delta", "--lambda", "0.9", "--mu", "2", "--rho-real", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["delta", "--lambda", "0.9", "--mu", "2", "--rho-rational", "2/4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cycle_of_the_worked_example() {
    let v = json(&with("cycle", &HALF, &[]));
    let z = v["result"]["zeta"].as_array().unwrap();
    assert_eq!(z.len(), 2);
    assert!((num(&z[0]) - 1.0 / 14.0).abs() < 1e-12);
    assert!((num(&z[1]) - 11.0 / 14.0).abs() < 1e-12);
    let rows = csv_rows(&with("cycle", &HALF, &["--format", "csv"]));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "1");
}

#[test]
fn cycle_at_irrational_rho_fails_with_code_3() {
    let d = json(&["delta", "--lambda", "0.95", "--mu", "0.9", "--rho", "sqrt5m1over2"]);
    let delta = d["result"]["delta"].to_string();
    // the double nearest delta(golden) lies on the 55/89 plateau
    let out = run(&["cycle", "--lambda", "0.95", "--mu", "0.9", "--delta", &delta, "--max-den", "50"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn first_gap_matches_l1_formulas() {
    let d = json(&["delta", "--lambda", "0.95", "--mu", "0.9", "--rho", "sqrt5m1over2"]);
    let delta_text = d["result"]["delta"].to_string();
    let delta: f64 = delta_text.parse().unwrap();
    let v = json(&[
        "gaps", "--lambda", "0.95", "--mu", "0.9", "--delta", &delta_text, "--rho", "0.6180339887", "--depth", "1",
    ]);
    let g = &v["result"]["gaps"][0];
    assert_eq!(num(&g["right"]), delta);
    assert!((num(&g["left"]) - 0.9 * (0.95 + delta - 1.0)).abs() < 1e-15);
}

#[test]
fn gaps_reject_mismatched_delta() {
    let out = run(&["gaps", "--lambda", "0.95", "--mu", "0.9", "--delta", "0.65", "--rho", "sqrt5m1over2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gaps_csv_indexed_by_l() {
    let rows = csv_rows(&["gaps", "--lambda", "0.95", "--mu", "0.9", "--rho", "sqrt5m1over2", "--format", "csv"]);
    assert_eq!(rows.len(), 20);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], (i + 1).to_string());
        assert!(row[1].parse::<f64>().unwrap() < row[2].parse::<f64>().unwrap());
    }
}

#[test]
fn images_measure_recursion() {
    let four = json(&with("images", &HALF, &["--n", "4"]));
    let two = json(&with("images", &HALF, &["--n", "2"]));
    assert_eq!(four["result"]["intervals"].as_array().unwrap().len(), 2);
    let ratio = num(&four["result"]["measure"]) / num(&two["result"]["measure"]);
    assert!((ratio - 0.125).abs() < 1e-12);
}

#[test]
fn orbit_rows_and_itinerary() {
    let rows = csv_rows(&with("orbit", &HALF, &["--steps", "3", "--format", "csv"]));
    let xs: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    // by hand: 0 -> 0.75 -> 0.5*(0.5*0.75 + 0.75 - 1) + 1 -> ...
    assert_eq!(xs[..3], [0.0, 0.75, 1.0625]);
    assert_eq!(rows[0][2], "0");
    assert_eq!(rows[1][2], "1");
    assert_eq!(rows[3][2], "");
}

#[test]
fn phi_with_rotation_from_delta() {
    let v = json(&with("phi", &HALF, &["--y", "0.5", "-0.5", "0.25"]));
    let pts = v["result"]["points"].as_array().unwrap();
    let ys: Vec<f64> = pts.iter().map(|p| num(&p["y"])).collect();
    assert_eq!(ys, [-0.5, 0.25, 0.5]);
    assert!((num(&pts[1]["phi"]) - 1.0 / 14.0).abs() < 1e-12);
    assert!((num(&pts[2]["phi"]) - 11.0 / 14.0).abs() < 1e-12);
}

#[test]
fn plot_delta_reproduces_the_staircase() {
    let rows = csv_rows(&["plot-delta", "--samples", "200", "--format", "csv"]);
    assert_eq!(rows.len(), 200);
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    for w in pairs.windows(2) {
        assert!(w[0].0 < w[1].0);
        assert!(w[0].1 <= w[1].1 + 1e-12);
    }
    // rho = 0.5 falls on the 1/2 plateau right end, delta(1/2)
    let v = json(&["plot-delta", "--samples", "1"]);
    let pts = v["result"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(num(&pts[0]["rho"]), 0.5);
}

#[test]
fn plot_phi_staircase_and_jump() {
    let v = json(&["plot-phi", "--samples", "401"]);
    let r = &v["result"];
    let eta = num(&r["eta"]);
    let pts: Vec<(f64, f64)> = r["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (num(&p["y"]), num(&p["phi"])))
        .collect();
    assert!(pts[0].1.abs() < 1e-10);
    assert!((pts[400].1 - 1.0).abs() < 1e-10);
    let jump = 1.0 - (5f64.sqrt() - 1.0) / 2.0;
    for w in pts.windows(2) {
        assert!(w[0].0 < w[1].0 && w[0].1 <= w[1].1);
        // phi(y) < eta below 1 - rho and >= eta from there on, up to the series tolerance
        if w[0].0 < jump && jump <= w[1].0 {
            assert!(w[0].1 < eta + 1e-10 && eta - 1e-10 <= w[1].1);
        }
    }
    let single = csv_rows(&["plot-phi", "--samples", "1", "--format", "csv"]);
    assert_eq!(single.len(), 1);
}

#[test]
fn sweep_is_ordered_by_grid_index() {
    let v = json(&["rho", "--lambda", "0.9", "--mu", "0.8", "--sweep", "16", "--steps", "1000"]);
    let pts = v["result"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 16);
    let deltas: Vec<f64> = pts.iter().map(|p| num(&p["delta"])).collect();
    let values: Vec<f64> = pts.iter().map(|p| num(&p["value"])).collect();
    assert!(deltas.windows(2).all(|w| w[0] < w[1]));
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn output_is_deterministic() {
    let args = ["rho", "--lambda", "0.9", "--mu", "0.8", "--sweep", "8", "--steps", "1000"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = with("images", &HALF, &["--n", "6"]);
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn numbers_carry_seventeen_digits() {
    let out = run(&with("rho", &HALF, &[]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.90000000000000002"));
    assert!(!text.contains("elapsed_ms"));
    let timed = json(&with("rho", &HALF, &["--timing"]));
    assert!(timed["diagnostics"]["elapsed_ms"].is_number());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["rho", "--lambda", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["delta", "--lambda", "0.5", "--mu", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["plot-delta", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["rho", "--lambda", "0.5", "--mu", "0.5", "--delta", "golden"]).status.code(), Some(2));
}
