use std::process::{Command, Output};

fn thetanorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetanorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_plain_theta3_at_self_dual_point() {
    let o = thetanorm(&[
        "eval", "--kind", "3", "--v", "0", "--t", "1", "--tol", "1e-12", "--format", "plain",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1.086434811213"), "{}", stdout(&o));
}

#[test]
fn eval_theta1_zero() {
    let o = thetanorm(&[
        "eval", "--kind", "1", "--v", "0", "--t", "1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["sign"], 0);
    assert_eq!(j["value"], 0.0);
}

#[test]
fn eval_json_small_t() {
    let o = thetanorm(&[
        "eval", "--kind", "3", "--v", "0.3", "--t", "0.01", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["sign"], 1);
    assert_eq!(j["method"], "transformed");
    assert!((j["log_mag"].as_f64().unwrap() + 25.9717).abs() < 1e-3);
}

#[test]
fn eval_methods_agree() {
    let mut values = Vec::new();
    for m in ["auto", "series", "product", "transformed"] {
        let o = thetanorm(&[
            "eval", "--kind", "2", "--v", "-0.6", "--t", "2", "--method", m, "--format", "json",
        ]);
        assert_eq!(o.status.code(), Some(0), "{m}");
        let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        values.push(j["value"].as_f64().unwrap());
    }
    for v in &values {
        assert!(
            (v - values[0]).abs() <= 1e-11 * values[0].abs(),
            "{values:?}"
        );
    }
}

#[test]
fn eval_csv_has_header_and_one_row() {
    let o = thetanorm(&[
        "eval", "--kind", "4", "--v", "0.25", "--t", "1.3", "--format", "csv",
    ]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "kind,v,t,sign,log_mag,value,method,terms,tail_bound_log"
    );
}

#[test]
fn domain_errors_exit_1_and_name_the_precondition() {
    let o = thetanorm(&["eval", "--kind", "3", "--v", "0", "--t", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t must be positive"));

    let o = thetanorm(&["eval", "--kind", "3", "--v", "0", "--t", "1", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["eval", "--kind", "5", "--v", "0", "--t", "1"][..],
        &["eval", "--kind", "3", "--t", "1"],
        &["eval", "--kind", "3", "--v", "x", "--t", "1"],
        &["frobnicate"],
        &[
            "table",
            "--v-range",
            "1:0",
            "--t-range",
            "1:2",
            "--steps",
            "2",
        ],
        &[
            "table",
            "--v-range",
            "0:1",
            "--t-range",
            "1:2",
            "--steps",
            "0",
        ],
        &[
            "certify", "--kind", "3", "--C", "0.25", "--eps", "0.9", "--t", "1:2",
        ],
    ] {
        assert_eq!(thetanorm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn certify_examples() {
    let o = thetanorm(&[
        "certify",
        "--kind",
        "3",
        "--C",
        "0.25",
        "--eps",
        "0.9",
        "--t",
        "0.1,0.2,0.3",
        "--x-count",
        "101",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("all_pass true"));
    assert!(text.lines().last().unwrap().starts_with("decay_slope "));

    let o = thetanorm(&[
        "certify", "--kind", "3", "--C", "0.25", "--eps", "0.9", "--t", "0.4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr)
        .contains("t=0.4 \u{2265} t_max=0.328281 for C=0.25, eps=0.9"));

    let o = thetanorm(&[
        "certify",
        "--kind",
        "2",
        "--C",
        "1",
        "--eps",
        "0.5",
        "--t",
        "0.004,0.006",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["all_pass"], true);
    for row in j["rows"].as_array().unwrap() {
        assert_eq!(row["route"], "log_space");
        assert!(row["margin"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn certify_rows_sorted_by_t_and_geometric_ranges() {
    let o = thetanorm(&[
        "certify",
        "--kind",
        "1",
        "--C",
        "0.25",
        "--eps",
        "0.9",
        "--t",
        "0.3,0.05:0.2:3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ts: Vec<f64> = j["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["t"].as_f64().unwrap())
        .collect();
    assert_eq!(ts.len(), 4);
    assert!(ts.windows(2).all(|w| w[0] < w[1]), "{ts:?}");
    assert_eq!(ts[0], 0.05);
    assert!((ts[1] - 0.1).abs() < 1e-15);
}

#[test]
fn certify_rejects_expansion_parameter_below_t() {
    let o = thetanorm(&[
        "certify", "--kind", "3", "--C", "0.25", "--eps", "0.9", "--t", "0.2", "--a", "0.1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table_grid_rows_and_methods() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let o = thetanorm(&[
        "table",
        "--kind",
        "1",
        "--v-range",
        "0:1",
        "--t-range",
        "0.5:2",
        "--steps",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().any(|r| &r[1] == "0.0"));
    for r in &rows {
        let v: f64 = r[1].parse().unwrap();
        if v == 0.0 {
            assert_eq!(&r[3], "0");
        }
        let t: f64 = r[2].parse().unwrap();
        if t == 0.5 {
            assert_eq!(&r[6], "transformed");
        } else if t == 2.0 {
            assert_eq!(&r[6], "direct_series");
        }
    }
}

#[test]
fn table_value_empty_on_underflow() {
    let o = thetanorm(&[
        "table",
        "--kind",
        "3",
        "--v-range",
        "0.5:0.5",
        "--t-range",
        "0.0005:0.0005",
        "--steps",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let row = reader.records().next().unwrap().unwrap();
    assert_eq!(&row[5], "");
    assert!(row[4].parse::<f64>().unwrap() < -1000.0);
}

#[test]
fn table_unwritable_path_exits_1() {
    let o = thetanorm(&[
        "table",
        "--kind",
        "3",
        "--v-range",
        "0:1",
        "--t-range",
        "1:2",
        "--steps",
        "2",
        "--out",
        "/nonexistent-dir/grid.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table_output_independent_of_thread_count() {
    let args = [
        "table",
        "--v-range",
        "-1:1",
        "--t-range",
        "0.2:3",
        "--steps",
        "5",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_thetanorm"))
        .args(args)
        .env("THETA_GAUSS_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_thetanorm"))
        .args(args)
        .env("THETA_GAUSS_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_thetanorm"))
        .args(args)
        .env("THETA_GAUSS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn residual_command() {
    let o = thetanorm(&["residual", "--kind", "1", "--v", "1.7", "--t", "0.8"]);
    assert_eq!(o.status.code(), Some(0));
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!(r <= 1e-11);
    assert_eq!(
        thetanorm(&["residual", "--kind", "1", "--v", "1.7", "--t", "30"])
            .status
            .code(),
        Some(1)
    );
}
