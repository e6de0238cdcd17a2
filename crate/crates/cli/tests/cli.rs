use serde_json::Value;
use std::process::{Command, Output};

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extremal-kit")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn close(v: &Value, want: f64, tol: f64) {
    let x = v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"));
    assert!((x - want).abs() <= tol, "{x} vs {want}");
}

#[test]
fn sawtooth_majorant_value() {
    let j = json_of(&kit(&["periodic", "--theta", "lebesgue", "--measure", "dirac:0", "--kind", "odd", "--degree", "7"]));
    close(&j["value_majorant"]["value"], 0.125, 1e-12);
    close(&j["value_minorant"]["value"], -0.125, 1e-12);
    close(&j["theorem_sums"]["majorant"]["value"], 0.125, 1e-12);
}

#[test]
fn lebesgue_quadrature_is_equally_spaced() {
    let j = json_of(&kit(&["quadrature", "--theta", "lebesgue", "--degree", "3"]));
    let nodes: Vec<f64> = j["nodes"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let weights: Vec<f64> = j["weights"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(nodes.len(), 4);
    for (k, (x, w)) in nodes.iter().zip(&weights).enumerate() {
        assert!((x - 0.25 * k as f64).abs() < 1e-12);
        assert!((w - 0.25).abs() < 1e-12);
    }
}

#[test]
fn quadrature_csv_format() {
    let out = kit(&["quadrature", "--theta", "lebesgue", "--degree", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "node,weight\n0,0.5\n0.5,0.5\n");
}

#[test]
fn paley_wiener_signum_optimal_value() {
    let j = json_of(&kit(&["entire", "--space", "pw:tau=1", "--measure", "dirac:0", "--kind", "odd", "--grid", "21"]));
    close(&j["optimal_value"]["value"], 2.0 * std::f64::consts::PI, 1e-12);
    close(&j["integral_numeric"]["value"], 2.0 * std::f64::consts::PI, 1e-6);
}

#[test]
fn homogeneous_closed_form() {
    let j = json_of(&kit(&[
        "entire", "--space", "homog:nu=-0.5", "--measure", "dirac:0", "--kind", "truncated", "--delta-check", "2", "--grid", "11",
    ]));
    close(&j["closed_form"]["value"], std::f64::consts::PI, 1e-10);
    close(&j["kernel_reconstruction"]["value"], std::f64::consts::PI, 1e-10);
}

#[test]
fn missing_majorant_hypothesis_exits_3() {
    let out = kit(&["entire", "--space", "pw:tau=1", "--measure", "sine:a=1", "--kind", "truncated"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("H3"));
    let ok = kit(&["entire", "--space", "pw:tau=1", "--measure", "sine:a=1", "--kind", "truncated", "--minorant-only", "--grid", "5"]);
    assert!(ok.status.success());
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(kit(&["periodic", "--theta", "lebesgue", "--measure", "wat:1", "--kind", "odd", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(kit(&["quadrature", "--theta", "jacobi:1", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(kit(&["entire", "--space", "pw:tau=-1", "--measure", "dirac:0", "--kind", "odd"]).status.code(), Some(2));
    assert_eq!(kit(&["quadrature", "--theta", "lebesgue"]).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_extremal-kit"))
        .args(["quadrature", "--theta", "lebesgue", "--degree", "2"])
        .env("EXTREMAL_KIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(kit(&["verify", "--only", "periodic.sawtooth"]).status.code(), Some(0));
    let bad = kit(&["verify", "--only", "periodic.sawtooth", "--corrupt", "periodic.sawtooth"]);
    assert_eq!(bad.status.code(), Some(5));
    let j: Value = serde_json::from_slice(&bad.stdout).unwrap();
    let row = j["checks"].as_array().unwrap().iter().find(|c| c["name"] == "periodic.sawtooth").unwrap().clone();
    assert_eq!(row["status"], "fail");
    assert_eq!(kit(&["verify", "--only", "no.such.check"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let dir = std::env::temp_dir().join(format!("extremal-kit-det-{}-{threads}", std::process::id()));
        let out = Command::new(env!("CARGO_BIN_EXE_extremal-kit"))
            .args(["--out", dir.to_str().unwrap(), "periodic", "--theta", "jacobi:1,1", "--measure", "ramp:2", "--kind", "truncated"])
            .args(["--degree", "4", "--grid", "200"])
            .env("EXTREMAL_KIT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        std::fs::remove_dir_all(&dir).ok();
        files
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a.iter().map(|f| f.0.as_str()).collect::<Vec<_>>(), ["majorant_coeffs.csv", "minorant_coeffs.csv", "periodic.csv", "summary.json"]);
    assert!(a == b, "outputs differ between thread counts");
}

#[test]
fn degree_zero_is_constant_pair() {
    let j = json_of(&kit(&["periodic", "--theta", "lebesgue", "--measure", "dirac:0", "--kind", "odd", "--degree", "0"]));
    close(&j["value_majorant"]["value"], 1.0, 1e-12);
    close(&j["value_minorant"]["value"], -1.0, 1e-12);
}
