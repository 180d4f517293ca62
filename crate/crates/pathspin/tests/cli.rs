//! End-to-end checks of the compiled binary: exit codes, output
//! formats, flag/config precedence, and determinism.

use std::fs;
use std::process::{Command, Output};

use pathspin::cli::report::{parse_report_csv, Cell};

use std::f64::consts::{FRAC_PI_2, SQRT_2};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathspin"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout_of(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success(),
        "args {args:?}, stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal expected")
}

fn float(cell: &Cell) -> f64 {
    match cell {
        Cell::Float(v) => *v,
        other => panic!("expected a float cell, got {other:?}"),
    }
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(exit_code(&help), 0);
    let text = String::from_utf8(help.stdout).unwrap();
    for name in [
        "pan-home",
        "de-zela",
        "compare",
        "chsh",
        "hv-check",
        "feasibility",
    ] {
        assert!(text.contains(name), "help must list {name}");
    }
    assert_eq!(exit_code(&run(&["--version"])), 0);
    assert_eq!(exit_code(&run(&["pan-home", "--help"])), 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(exit_code(&run(&[])), 2);
    assert_eq!(exit_code(&run(&["no-such-command"])), 2);
    assert_eq!(exit_code(&run(&["pan-home", "--no-such-flag"])), 2);
    assert_eq!(exit_code(&run(&["pan-home", "--gamma", "bogus"])), 2);

    let gamma = run(&["pan-home", "--gamma", "1.5"]);
    assert_eq!(exit_code(&gamma), 2);
    assert!(String::from_utf8_lossy(&gamma.stderr).contains("gamma"));

    assert_eq!(exit_code(&run(&["hv-check", "--samples", "100"])), 2);
    assert_eq!(exit_code(&run(&["chsh", "--grid-density", "4"])), 2);
}

#[test]
fn csv_output_is_parsable_and_floats_round_trip() {
    let text = stdout_of(&["pan-home"]);
    let parsed = parse_report_csv(&text).unwrap();
    assert_eq!(
        parsed.columns,
        [
            "gamma",
            "delta",
            "theta",
            "p3",
            "p4",
            "cond_mean_sg1",
            "cond_mean_sg2",
            "weighted_mean_sg1",
            "weighted_mean_sg2",
            "total_expectation",
            "correlator",
        ]
    );
    assert_eq!(parsed.rows.len(), 5 * 4);
    let mut lines = text.lines().skip(1);
    for row in &parsed.rows {
        let line = lines.next().unwrap();
        let rendered: Vec<String> = row.iter().map(Cell::render).collect();
        assert_eq!(
            rendered.join(","),
            line,
            "shortest round trip must re-render"
        );
    }
}

#[test]
fn json_and_markdown_formats_have_the_expected_shape() {
    let json_text = stdout_of(&["pan-home", "--format", "json", "--gamma", "0.5"]);
    let value: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    assert_eq!(value["command"], "pan-home");
    assert_eq!(value["columns"][0], "gamma");
    assert_eq!(value["rows"].as_array().unwrap().len(), 4);
    assert_eq!(value["rows"][0][0], 0.5);

    let md = stdout_of(&[
        "pan-home", "--format", "markdown", "--gamma", "0.5", "--theta", "0.1",
    ]);
    let mut lines = md.lines();
    assert!(lines.next().unwrap().starts_with("| gamma | delta |"));
    assert!(lines.next().unwrap().starts_with("| --- |"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn out_flag_writes_the_same_bytes_silently() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let args = ["de-zela", "--out", path.to_str().unwrap()];
    let output = run(&args);
    assert_eq!(exit_code(&output), 0);
    assert!(output.stdout.is_empty());
    let written = fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout_of(&["de-zela"]));
}

#[test]
fn unwritable_out_path_exits_one() {
    let output = run(&["pan-home", "--out", "/no/such/directory/report.csv"]);
    assert_eq!(exit_code(&output), 1);
    assert!(String::from_utf8_lossy(&output.stderr).contains("cannot write"));
}

#[test]
fn config_file_fills_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(
        &path,
        r#"{"gamma": [0.25], "theta": [0.5, 1.0], "format": "json"}"#,
    )
    .unwrap();
    let config = path.to_str().unwrap();

    let from_config = stdout_of(&["pan-home", "--config", config]);
    let value: serde_json::Value = serde_json::from_str(&from_config).unwrap();
    assert_eq!(value["rows"].as_array().unwrap().len(), 2);
    assert_eq!(value["rows"][0][0], 0.25);

    let overridden = stdout_of(&[
        "pan-home", "--config", config, "--gamma", "0.75", "--format", "csv",
    ]);
    let parsed = parse_report_csv(&overridden).unwrap();
    assert_eq!(parsed.rows.len(), 2, "theta list still comes from the file");
    assert_eq!(parsed.rows[0][0], Cell::Float(0.75));
}

#[test]
fn bad_config_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{"gama": [0.25]}"#).unwrap();
    assert_eq!(
        exit_code(&run(&["pan-home", "--config", unknown.to_str().unwrap()])),
        2
    );

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{not json").unwrap();
    assert_eq!(
        exit_code(&run(&["pan-home", "--config", broken.to_str().unwrap()])),
        2
    );

    assert_eq!(
        exit_code(&run(&["pan-home", "--config", "/no/such/config.json"])),
        2
    );
}

#[test]
fn degrees_flag_converts_angle_lists_only() {
    let text = stdout_of(&["pan-home", "--gamma", "0.5", "--theta", "90", "--degrees"]);
    let parsed = parse_report_csv(&text).unwrap();
    let theta = float(&parsed.rows[0][2]);
    assert!((theta - FRAC_PI_2).abs() < 1e-12);
    let gamma = float(&parsed.rows[0][0]);
    assert_eq!(gamma, 0.5, "gamma is not an angle and must pass through");
}

#[test]
fn chsh_command_reports_the_maximum() {
    let text = stdout_of(&["chsh", "--grid-density", "8"]);
    let parsed = parse_report_csv(&text).unwrap();
    assert_eq!(parsed.columns[0], "grid_density");
    assert_eq!(parsed.rows[0][0], Cell::Float(8.0));
    let value = float(&parsed.rows[0][1]);
    assert!((value - 2.0 * SQRT_2).abs() < 1e-6, "search value {value}");
}

#[test]
fn feasibility_command_flags_the_witnessed_table() {
    let text = stdout_of(&[
        "feasibility",
        "--gamma",
        "1",
        "--gamma",
        "0.7071067811865476",
        "--theta",
        "1.1780972450961724",
        "--theta",
        "0.39269908169872414",
    ]);
    let parsed = parse_report_csv(&text).unwrap();
    assert_eq!(parsed.rows[0][0], Cell::Text("INFEASIBLE".to_owned()));
    let witness = float(&parsed.rows[0][5]);
    assert!(
        (witness - 2.0 * SQRT_2).abs() < 1e-9,
        "witness value {witness}"
    );

    let single = stdout_of(&["feasibility", "--gamma", "0.6", "--theta", "0.7"]);
    let parsed = parse_report_csv(&single).unwrap();
    assert_eq!(parsed.rows[0][0], Cell::Text("FEASIBLE".to_owned()));
}

#[test]
fn hv_check_is_seed_deterministic() {
    let args = [
        "hv-check",
        "--vartheta",
        "0.4",
        "--theta",
        "0.9",
        "--samples",
        "10000",
        "--seed",
        "11",
    ];
    let first = stdout_of(&args);
    assert_eq!(first, stdout_of(&args));

    let mut reseeded = args;
    reseeded[8] = "12";
    assert_ne!(first, stdout_of(&reseeded));

    let parsed = parse_report_csv(&first).unwrap();
    assert_eq!(parsed.rows.len(), 2);
    for row in &parsed.rows {
        assert_eq!(*row.last().unwrap(), Cell::Text("true".to_owned()));
    }
}

#[test]
fn compare_command_reports_vanishing_residuals() {
    let text = stdout_of(&["compare", "--vartheta", "0.3", "--theta", "0.8"]);
    let parsed = parse_report_csv(&text).unwrap();
    assert_eq!(
        parsed.columns,
        [
            "vartheta",
            "theta",
            "dz_ch1",
            "dz_ch2",
            "ph_sg1_mapped",
            "ph_sg2_mapped",
            "residual_ch1",
            "residual_ch2",
        ]
    );
    for row in &parsed.rows {
        assert!(float(&row[6]) < 1e-12);
        assert!(float(&row[7]) < 1e-12);
    }
}
