use std::process::{Command, Output};

use serde_json::Value;

fn json(bytes: Vec<u8>) -> Value {
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

/// Exit code, stdout and stderr, both parsed as JSON.
fn igusa(args: &[&str]) -> (i32, Value, Value) {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_igusa")).args(args).output().expect("binary runs");
    (status.code().unwrap(), json(stdout), json(stderr))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn poles_of_the_cusp() {
    let (code, out, _) = igusa(&["poles", "-f", "x^2", "-g", "y^3"]);
    assert_eq!(code, 0);
    assert_eq!(out["schema"], 1);
    assert_eq!(strings(&out["poles"]), ["-1", "-5/6"]);
    assert_eq!(out["denominator"], "(1 - q^-1 t)(1 - q^-5 t^6)");
}

#[test]
fn analyze_reports_denominator_and_noncriticality() {
    let (code, out, _) = igusa(&["analyze", "-f", "x^2", "-g", "y^3"]);
    assert_eq!(code, 0);
    let factors = out["denominator"]["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 1);
    assert_eq!((factors[0]["qpow"].as_i64(), factors[0]["tpow"].as_i64()), (Some(5), Some(6)));
    assert!(out["f"]["noncritical"].is_object());
}

#[test]
fn count_matches_hand_counts() {
    // x*y = 0 mod 5^m has (m + 1) p^m - m p^(m-1) solutions
    let (code, out, _) = igusa(&["count", "-f", "x*y", "--depth", "4"]);
    assert_eq!(code, 0);
    let counts: Vec<i64> = out["counts"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect();
    let expect: Vec<i64> = (1..=4).map(|m: u32| (m as i64 + 1) * 5i64.pow(m) - m as i64 * 5i64.pow(m - 1)).collect();
    assert_eq!(counts, expect);
    assert_eq!(out["truncated"], false);
}

#[test]
fn count_tsv_has_one_row_per_level() {
    let out = Command::new(env!("CARGO_BIN_EXE_igusa"))
        .args(["count", "-f", "x", "-p", "3", "--depth", "3", "--tsv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m\tN_m\tcoefficient");
    assert_eq!(lines[1], "0\t1\t2/3");
    assert_eq!(lines.len(), 4);
}

#[test]
fn verify_success_and_falsification_exit_codes() {
    let (code, out, _) = igusa(&["verify", "-f", "x", "-g", "y", "-p", "3", "--depth", "8", "--max-deg", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out["ok"], true);
    let (code, out, _) = igusa(&["verify", "-f", "x^2", "-g", "y^2", "--depth", "6", "--max-deg", "0"]);
    assert_eq!(code, 2);
    assert_eq!(out["ok"], false);
    assert!(out["message"].as_str().unwrap().contains("residual"));
}

#[test]
fn spf_of_a_smooth_polynomial() {
    let (code, out, _) = igusa(&["spf", "-f", "x^2 - 5", "-v"]);
    assert_eq!(code, 0);
    assert_eq!(out["schema"], 1);
    assert!(out.to_string().contains("5*x^2 - 1"));
}

#[test]
fn spf_self_similar_polynomial_hits_the_guard() {
    let (code, out, err) = igusa(&["spf", "-f", "x^2 + y^2", "-p", "3"]);
    assert_eq!(code, 1);
    assert_eq!(out, Value::Null);
    assert_eq!(err["error"]["kind"], "spf");
}

#[test]
fn phi_orbit_and_sums() {
    let (code, out, _) = igusa(&["phi", "-c", "7", "-d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out["orbit"]["period"], 9);
    let states = out["orbit"]["states"].as_array().unwrap();
    assert_eq!(states.first(), states.last());
    for key in ["mu", "nu"] {
        let total: i64 = out["sums"][key].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).sum();
        assert_eq!(out["sums"][format!("{key}_sum")].as_i64(), Some(total));
    }
}

#[test]
fn parse_errors_exit_one_with_json() {
    let (code, out, err) = igusa(&["analyze", "-f", "x^2+"]);
    assert_eq!(code, 1);
    assert_eq!(out, Value::Null);
    assert_eq!(err["error"]["kind"], "parse");
}

#[test]
fn missing_polynomial_is_a_usage_error() {
    let (code, out, err) = igusa(&["poles", "-f", "x^2"]);
    assert_eq!(code, 1);
    assert_eq!(out, Value::Null);
    assert!(err["error"].is_object());
}

#[test]
fn thread_count_does_not_change_counts() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_igusa"))
            .env("IGUSA_THREADS", threads)
            .args(["count", "-f", "x^2 + y^3", "--depth", "5"])
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}
