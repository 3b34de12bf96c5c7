use std::process::{Command, Output};

fn osinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osinv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows (without the metadata line, header and footer) and the footer.
fn split_table(text: &str) -> (Vec<Vec<String>>, Vec<String>) {
    let lines: Vec<&str> = text.lines().collect();
    let cells = |l: &str| l.split(',').map(str::to_string).collect::<Vec<_>>();
    let footer = cells(lines.last().unwrap());
    let rows = lines[2..lines.len() - 1].iter().map(|l| cells(l)).collect();
    (rows, footer)
}

fn footer_value(footer: &[String], header: &str, column: &str) -> f64 {
    let k = header.split(',').position(|h| h == column).unwrap();
    footer[k].parse().unwrap()
}

#[test]
fn oh_table_has_nine_rows_and_quarter_exactness_slope() {
    let o = osinv(&["table", "--space", r#"{"kind":"oh"}"#, "--n", "geometric:16:1048576:9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# osinv ") && lines[0].contains(r#"{"kind":"oh"}"#) && lines[0].contains("grid="));
    assert_eq!(lines[1], "n,phi_c,phi_r,ex,proj,pi1");
    let (rows, footer) = split_table(&text);
    assert_eq!(rows.len(), 9);
    assert_eq!(footer[0], "slope");
    assert!((footer_value(&footer, lines[1], "ex") - 0.25).abs() < 0.03);
    // ten significant digits
    let mantissa = rows[0][1].split('e').next().unwrap();
    assert_eq!(mantissa.replace('.', "").len(), 10);
}

#[test]
fn column_table_exactness_slope() {
    let o = osinv(&["table", "--space", r#"{"kind":"column_p","p":3}"#]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (_, footer) = split_table(&text);
    assert!((footer_value(&footer, "n,phi_c,phi_r,ex,proj,pi1", "ex") - 2.0 / 9.0).abs() < 0.03);
}

#[test]
fn exit_codes() {
    let o = osinv(&["table", "--space", r#"{"kind":"c"}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not regular"));

    let o = osinv(&["table", "--space", "{\"kind\":\"oh\",\n  \"p\": }"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(osinv(&["table", "--space", r#"{"kind":"nope"}"#]).status.code(), Some(3));
    assert_eq!(osinv(&["table", "--space", "/no/such/file.json"]).status.code(), Some(3));
    assert_eq!(osinv(&["table", "--space", r#"{"kind":"oh"}"#, "--n", "8,4"]).status.code(), Some(3));
    assert_eq!(osinv(&["table"]).status.code(), Some(3));
}

#[test]
fn fundamental_descriptors() {
    let half = r#"{"knots":[1],"values":[1],"right_exponent":0.5}"#;
    let space = format!(r#"{{"kind":"fundamental","phi_c":{half},"phi_r":{half}}}"#);
    let a = osinv(&["table", "--space", &space]);
    let b = osinv(&["table", "--space", r#"{"kind":"oh"}"#]);
    assert_eq!(a.status.code(), Some(0));
    let strip = |t: String| t.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&a)), strip(stdout(&b)));

    let one = r#"{"knots":[1],"values":[1],"right_exponent":1.0}"#;
    let space = format!(r#"{{"kind":"fundamental","phi_c":{one},"phi_r":{one}}}"#);
    let o = osinv(&["table", "--space", &space]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
}

#[test]
fn descriptor_from_file_and_json_output() {
    let dir = std::env::temp_dir().join(format!("osinv-e2e-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cr.json");
    std::fs::write(&path, r#"{"kind":"cr_p","p":1.5}"#).unwrap();
    let out = dir.join("cr.json.out");
    let o = osinv(&[
        "table",
        "--space",
        path.to_str().unwrap(),
        "--n",
        "16,64,256,1024",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["metadata"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["metadata"]["grid"], "16,64,256,1024");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    let phi_c = v["rows"][3]["phi_c"].as_f64().unwrap();
    assert!((phi_c / 1024f64.powf(1.0 / 3.0) - 1.0).abs() < 1e-9);
    assert!(v["slopes"]["ex"]["slope"].is_number());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pi1_slopes_and_logarithmic_case() {
    let o = osinv(&["pi1", "--domain", r#"{"kind":"column_p","p":2}"#, "--codomain", r#"{"kind":"column_p","p":4}"#]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = text.lines().nth(1).unwrap().to_string();
    assert!(header.starts_with("n,pi1,"));
    let (rows, footer) = split_table(&text);
    assert_eq!(rows.len(), 9);
    assert!((footer_value(&footer, &header, "pi1") - 0.625).abs() < 0.03);

    let o = osinv(&["pi1", "--domain", r#"{"kind":"oh"}"#, "--codomain", r#"{"kind":"oh"}"#, "--n", "geometric:64:1048576:8"]);
    let text = stdout(&o);
    let header = text.lines().nth(1).unwrap().to_string();
    let k = header.split(',').position(|h| h == "pi1_sq_over_n_log").unwrap();
    let (rows, _) = split_table(&text);
    let col: Vec<f64> = rows.iter().map(|r| r[k].parse().unwrap()).collect();
    let spread = col.iter().cloned().fold(0.0, f64::max) / col.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 4.0, "{col:?}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["pi1", "--domain", r#"{"kind":"cr_p","p":3}"#, "--codomain", r#"{"kind":"oh"}"#, "--n", "geometric:2:100000:12"];
    let a = osinv(&args);
    let b = osinv(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t = ["table", "--space", r#"{"kind":"row_p","p":1.5}"#, "--format", "json"];
    assert_eq!(osinv(&t).stdout, osinv(&t).stdout);
}

#[test]
fn fit_reads_a_table() {
    let dir = std::env::temp_dir().join(format!("osinv-fit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("oh.csv");
    let o = osinv(&["table", "--space", r#"{"kind":"oh"}"#, "--out", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = osinv(&["fit", "--input", table.to_str().unwrap(), "--column", "phi_c", "--all-points"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "phi_c");
    assert!((row[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(row[3], "9");
    let o = osinv(&["fit", "--input", table.to_str().unwrap(), "--column", "nope"]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_suites() {
    let o = osinv(&["verify", "--suite", "growth"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS growth/identity_residual"));
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.ends_with("0 failed")));

    let o = osinv(&["verify", "--suite", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS oracle/indicator_argmin"));

    assert_eq!(osinv(&["verify", "--suite", "bogus"]).status.code(), Some(3));
}

#[test]
fn grid_density_override_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_osinv"))
        .args(["verify", "--suite", "growth"])
        .env("OSINV_GRID_DENSITY", "32")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}
