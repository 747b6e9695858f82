//! End-to-end tests driving the compiled binary: output contracts
//! (CSV/JSON shape, 17-digit floats, determinism), flag/config merging,
//! and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindblad-sieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("no signal")
}

fn config_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .display()
        .to_string()
}

/// Data rows of a CSV output: `#` comments skipped, fields parsed as floats.
fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|line| !line.starts_with('#') && !line.is_empty())
        .map(|line| {
            line.split(',')
                .map(|field| field.parse().expect("numeric field"))
                .collect()
        })
        .collect()
}

#[test]
fn sieve_reproduces_the_reference_optimum() {
    let text = stdout_of(&[
        "sieve", "--lambda", "0.5", "--dqq", "1", "--dpp", "0.25",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    // Columns: eval_time, closed, kernels, numeric, theta, objective,
    // dropped, residual, degenerate.
    assert_eq!(row[1], 0.8715075965854640);
    assert_eq!(row[2], 0.8715075965854640);
    assert!((row[3] - 0.8715075965854640).abs() <= 1e-6);
    assert_eq!(row[8], 0.0, "not a degenerate configuration");
}

#[test]
fn json_envelope_has_the_contracted_shape() {
    let text = stdout_of(&[
        "sieve", "--config", &config_path("squeezed_sieve.json"),
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let object = value.as_object().expect("top-level object");
    let mut keys: Vec<&str> = object.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["config_echo", "diagnostics", "results"]);
    let closed = value["results"]["aleph_star"]["closed_form"]
        .as_f64()
        .expect("closed-form value");
    assert_eq!(closed, 0.9728477028494286);
    assert_eq!(value["config_echo"]["constants"]["omega"].as_f64(), Some(0.7));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let squeezed = config_path("squeezed_sieve.json");
    let isotropic = config_path("coherent_isotropic.json");
    let scan = config_path("lambda_scan.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["evolve", "--config", &isotropic],
        vec!["sieve", "--config", &squeezed],
        vec!["scan", "--config", &scan],
        vec!["coeffs", "--a1", "1,0.5", "--b1", "0.25,-1", "--a2", "0.125"],
    ];
    for case in &cases {
        assert_eq!(
            stdout_of(case),
            stdout_of(case),
            "case {case:?} is not deterministic"
        );
    }
}

#[test]
fn out_file_carries_the_same_results_as_stdout() {
    let dir = tempfile::tempdir().expect("tempdir");

    // CSV output has no config echo, so the file and stdout match exactly.
    let isotropic = config_path("coherent_isotropic.json");
    let csv_path = dir.path().join("evolve.csv").display().to_string();
    let out = run(&["evolve", "--config", &isotropic, "--out", &csv_path]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "results went to the file, not stdout");
    assert_eq!(
        fs::read(&csv_path).expect("file written"),
        stdout_of(&["evolve", "--config", &isotropic]).into_bytes()
    );

    // JSON echoes the merged config, which includes the output path, so
    // compare the payload sections and check the echoed path itself.
    let squeezed = config_path("squeezed_sieve.json");
    let json_path = dir.path().join("sieve.json").display().to_string();
    let out = run(&["sieve", "--config", &squeezed, "--out", &json_path]);
    assert!(out.status.success());
    let from_file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).expect("file written"))
            .expect("valid JSON");
    let from_stdout: serde_json::Value =
        serde_json::from_str(&stdout_of(&["sieve", "--config", &squeezed])).expect("valid JSON");
    assert_eq!(from_file["results"], from_stdout["results"]);
    assert_eq!(from_file["diagnostics"], from_stdout["diagnostics"]);
    assert_eq!(
        from_file["config_echo"]["output"]["path"],
        serde_json::json!(json_path)
    );
}

#[test]
fn dump_config_round_trips() {
    let dir = tempfile::tempdir().expect("tempdir");
    let dumped = dir.path().join("dumped.json");
    let original = config_path("squeezed_sieve.json");
    let dump = stdout_of(&["sieve", "--config", &original, "--dump-config"]);
    fs::write(&dumped, &dump).expect("write dump");
    let dumped = dumped.display().to_string();

    let from_original = stdout_of(&["sieve", "--config", &original]);
    let from_dump = stdout_of(&["sieve", "--config", &dumped]);
    assert_eq!(from_original, from_dump);

    // Dumping the dump is a fixed point.
    let redump = stdout_of(&["sieve", "--config", &dumped, "--dump-config"]);
    assert_eq!(dump, redump);
}

#[test]
fn flag_overrides_take_precedence_over_the_config() {
    // The isotropic config alone selects aleph = 1; overriding the
    // diffusion entries from the command line turns it into the reference
    // anisotropic case.
    let text = stdout_of(&[
        "sieve",
        "--config", &config_path("coherent_isotropic.json"),
        "--dqq", "1.0",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows[0][1], 0.8715075965854640);
}

#[test]
fn coherent_isotropic_evolution_stays_pure() {
    let text = stdout_of(&["evolve", "--config", &config_path("coherent_isotropic.json")]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 21, "t_max=10, steps=20 gives 21 rows");
    for row in &rows {
        assert_eq!(row[5], 1.0, "area stays at the Heisenberg floor");
        assert_eq!(row[6], 0.0, "entropy stays zero");
    }
}

#[test]
fn final_row_lands_inside_the_contraction_envelope() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = dir.path().join("envelope.json");
    fs::write(
        &config,
        r#"{
            "params": { "lambda": 0.4, "d_qq": 0.7, "d_pp": 0.5, "d_pq": 0.05 },
            "initial_state": { "shape": { "area": 2.0, "theta": 0.7, "aleph": 2.5 } },
            "time_grid": { "t_max": 6.0, "steps": 12 },
            "output": { "format": "json" }
        }"#,
    )
    .expect("write config");
    let text = stdout_of(&["evolve", "--config", &config.display().to_string()]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");

    let stationary = &value["diagnostics"]["stationary"];
    let (sq, sp, sx) = (
        stationary["sigma_qq"].as_f64().unwrap(),
        stationary["sigma_pp"].as_f64().unwrap(),
        stationary["sigma_pq"].as_f64().unwrap(),
    );
    // m = omega = 1 here, so the scaled distance is the plain Frobenius
    // distance of the covariance entries.
    let distance = |row: &serde_json::Value| -> f64 {
        let dq = row[1].as_f64().unwrap() - sq;
        let dp = row[2].as_f64().unwrap() - sp;
        let dx = row[3].as_f64().unwrap() - sx;
        (dq * dq + dp * dp + 2.0 * dx * dx).sqrt()
    };
    let rows = value["results"]["rows"].as_array().expect("rows");
    let initial = distance(&rows[0]);
    let last = rows.last().unwrap();
    let t_max = last[0].as_f64().unwrap();
    assert_eq!(t_max, 6.0);
    let envelope = (-2.0 * 0.4 * t_max).exp() * initial;
    assert!(
        distance(last) <= envelope * (1.0 + 1e-9) + 1e-12,
        "final distance {} exceeds envelope {envelope}",
        distance(last)
    );
}

#[test]
fn scan_departs_from_coherent_monotonically_and_stays_within_residual() {
    let text = stdout_of(&["scan", "--config", &config_path("lambda_scan.json")]);
    let rows = csv_rows(&text);
    assert!(rows.len() >= 15, "most of the scan grid is valid");
    for pair in rows.windows(2) {
        assert!(
            pair[0][0] < pair[1][0],
            "rows ordered by the lambda axis"
        );
        assert!(
            pair[1][5] < pair[0][5],
            "departure |aleph*-1| grows with lambda/omega"
        );
    }
    for row in &rows {
        assert!(row[7] <= 1e-6, "residual {} too large", row[7]);
    }
    let summary = text
        .lines()
        .last()
        .expect("summary line");
    assert!(summary.starts_with("# summary points=25 valid="));
    assert!(text.contains("# skipped lambda="), "positivity-violating tail is logged");
}

#[test]
fn exit_codes_follow_the_contract() {
    let isotropic = config_path("coherent_isotropic.json");
    // Config-structure problems: exit 2.
    assert_eq!(exit_code(&["evolve", "--config", &isotropic, "--tmax", "0"]), 2);
    assert_eq!(exit_code(&["evolve"]), 2, "missing params");
    assert_eq!(exit_code(&["sieve", "--lambda", "0.5", "--dqq", "1", "--dpp", "0.25", "--eval-time", "soon"]), 2);
    assert_eq!(exit_code(&["scan", "--lambda", "0.5", "--dqq", "1", "--dpp", "0.25"]), 2, "no scan axis");

    let dir = tempfile::tempdir().expect("tempdir");
    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{ "paramz": {} }"#).expect("write");
    assert_eq!(exit_code(&["sieve", "--config", &unknown.display().to_string()]), 2);

    // Physics rejections: exit 3.
    let heisenberg = dir.path().join("heisenberg.json");
    fs::write(
        &heisenberg,
        r#"{
            "params": { "lambda": 0.5, "d_qq": 0.25, "d_pp": 0.25 },
            "initial_state": { "covariance": { "sigma_qq": 0.1, "sigma_pp": 0.1 } },
            "time_grid": { "t_max": 1.0, "steps": 2 }
        }"#,
    )
    .expect("write");
    assert_eq!(exit_code(&["evolve", "--config", &heisenberg.display().to_string()]), 3);
    // Real ratio b = 2a has zero imaginary cross term: lambda = 0.
    assert_eq!(exit_code(&["coeffs", "--a1", "1", "--b1", "2"]), 3);
    assert_eq!(exit_code(&["sieve", "--lambda", "-0.5", "--dqq", "1", "--dpp", "0.25"]), 3);

    // A scan whose every point violates positivity: exit 2 (empty grid).
    let empty_scan = dir.path().join("empty_scan.json");
    fs::write(
        &empty_scan,
        r#"{
            "params": { "d_qq": 0.01, "d_pp": 0.01 },
            "scan": { "lambda": { "min": 5.0, "max": 10.0, "steps": 4 } }
        }"#,
    )
    .expect("write");
    assert_eq!(exit_code(&["scan", "--config", &empty_scan.display().to_string()]), 2);
}

#[test]
fn eval_time_flag_accepts_numbers_and_auto() {
    let base = ["sieve", "--lambda", "0.5", "--dqq", "1", "--dpp", "0.25"];
    let with = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        csv_rows(&stdout_of(&args))[0].clone()
    };
    let auto = with(&["--eval-time", "auto"]);
    let late = with(&["--eval-time", "20"]);
    let early = with(&["--eval-time", "0"]);
    assert_eq!(auto[0], 20.0, "auto resolves to 10/lambda");
    assert_eq!(late[0], 20.0);
    assert_eq!(early[0], 0.0);
    // The selected squeezing is an invariant of the evaluation time.
    assert_eq!(auto[1], late[1]);
    assert_eq!(auto[1], early[1]);
    assert!((auto[3] - early[3]).abs() <= 1e-6);
}

#[test]
fn coeffs_reproduce_the_hand_checked_map() {
    let text = stdout_of(&["coeffs", "--a1", "1", "--b1", "0,-1"]);
    let rows = csv_rows(&text);
    assert_eq!(rows[0], vec![1.0, 0.5, 0.5, 0.0, 0.0]);

    let json = stdout_of(&["coeffs", "--a1", "1", "--b1", "0,-1", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&json).expect("valid JSON");
    assert_eq!(value["diagnostics"]["saturates_bound"], serde_json::json!(true));
}
