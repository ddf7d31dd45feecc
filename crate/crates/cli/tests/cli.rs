use std::path::Path;
use std::process::{Command, Output};

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV table (metadata and header skipped).
fn rows(text: &str) -> Vec<Vec<String>> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

fn meta<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key}: ");
    text.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

const SMALL: &[&str] = &[
    "--range",
    "4",
    "--grid-points",
    "16",
    "--sandwich-points",
    "200",
    "--measure-samples",
    "50",
];

#[test]
fn eval_f_at_eight() {
    let o = orlicz(&["eval", "f", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    let lo: f64 = r[0][1].parse().unwrap();
    let hi: f64 = r[0][2].parse().unwrap();
    let want = 8.0 + 3f64.sqrt().exp2();
    assert!(lo <= want + 1e-15 && want - 1e-15 <= hi);
    assert!(r[0][1].starts_with("1.13219970854839"));
}

#[test]
fn eval_big_f_at_one_and_batch_file() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    std::fs::write(&pts, "# points\n1\n\n2^10\n").unwrap();
    let o = orlicz(&["eval", "F", "--file", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    assert_eq!(r[0][1].parse::<f64>().unwrap(), 1.0);
    assert_eq!(r[0][2].parse::<f64>().unwrap(), 1.0);
    assert_eq!(r[0][3], "0");
    // log₂F(2^10) = f(10) = 10 + 2^{√3}: only block 3's stretch lies below 10.
    let want = 10.0 + 3f64.sqrt().exp2();
    assert!((r[1][3].parse::<f64>().unwrap() - want).abs() < 1e-12);
}

#[test]
fn eval_phi_n_annotates_the_bound() {
    let o = orlicz(&["eval", "Phi_n", "--n", "3", "--x", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0][4], "1");
    assert_eq!(r[0][5].parse::<f64>().unwrap(), 0.25);
    assert_eq!(r[0][6], "true");
    assert_eq!(r[0][7], "yes");
    assert!(r[0][3].parse::<f64>().unwrap() <= 0.25);
}

#[test]
fn eval_usage_errors() {
    assert_eq!(orlicz(&["eval", "f", "-1"]).status.code(), Some(3));
    assert_eq!(orlicz(&["eval", "g", "1"]).status.code(), Some(3));
    assert_eq!(orlicz(&["eval", "f", "abc"]).status.code(), Some(3));
    assert_eq!(orlicz(&["eval", "Phi_n", "--x", "0.25"]).status.code(), Some(3));
    assert_eq!(orlicz(&["eval", "f", "--file", "/nonexistent/pts"]).status.code(), Some(4));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(orlicz(&["--help"]).status.code(), Some(0));
    assert_eq!(orlicz(&["--version"]).status.code(), Some(0));
    assert_eq!(orlicz(&[]).status.code(), Some(3));
}

#[test]
fn verify_precondition_rejection() {
    let o = orlicz(&["verify", "--check", "exact_ratio", "--m", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("max(3, m² + 1)"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_single_pair_and_check() {
    let o = orlicz(&["verify", "--check", "exact_ratio", "--m", "2", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["overall"], "Verified");
    assert_eq!(v["checks"][0]["check_id"], "exact_ratio");
    let o = orlicz(&["verify", "--check", "sum_inequality"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(orlicz(&["verify", "--check", "nope"]).status.code(), Some(3));
    assert_eq!(orlicz(&["verify", "--m", "1"]).status.code(), Some(3));
}

#[test]
fn verify_exit_codes_follow_the_worst_status() {
    // The standard construction: only the C_p estimate stays undetermined.
    let mut a = vec!["verify", "--bits", "32"];
    a.extend_from_slice(SMALL);
    let o = orlicz(&a);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "Falsified"));

    let mut a = vec!["verify", "--variant", "half-slope"];
    a.extend_from_slice(SMALL);
    let o = orlicz(&a);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["overall"], "Falsified");
}

#[test]
fn verify_csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let mut a = vec!["verify", "--format", "csv", "--out", out.to_str().unwrap()];
    a.extend_from_slice(SMALL);
    let o = orlicz(&a);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(meta(&text, "tool"), Some("orlicz"));
    assert!(meta(&text, "ranges").is_some());
    assert!(text.contains("check_id,status,key,quantity,lo,hi"));
    assert!(rows(&text).iter().any(|r| r[0] == "sandwich" && r[2] == "summary"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = orlicz(&["--out", "/nonexistent/dir/x.csv", "eval", "f", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"bits": 64, "format": "json",
            "verify": {"range_exponent_max": 4, "grid_points": 16,
                       "sandwich_points": 100, "measure_samples": 20}}"#,
    )
    .unwrap();
    let p = cfg.to_str().unwrap();
    let o = orlicz(&["--config", p, "verify", "--check", "sandwich"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["precision_bits"], 64);
    assert_eq!(v["config"]["grid_points"], 16);
    let o = orlicz(&["--config", p, "--bits", "128", "verify", "--check", "sandwich"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["precision_bits"], 128);

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(orlicz(&["--config", p, "eval", "f", "1"]).status.code(), Some(3));
    assert_eq!(
        orlicz(&["--config", "/nonexistent/run.json", "eval", "f", "1"]).status.code(),
        Some(4)
    );
}

#[test]
fn outputs_are_byte_identical() {
    let mut a = vec!["verify"];
    a.extend_from_slice(SMALL);
    assert_eq!(orlicz(&a).stdout, orlicz(&a).stdout);
    let b = ["analyze", "einf", "--model", "Phi", "--n", "4..6"];
    assert_eq!(orlicz(&b).stdout, orlicz(&b).stdout);
}

#[test]
fn analyze_indices_power() {
    let o = orlicz(&["analyze", "indices", "--model", "power:2", "--ranges", "16,32,64", "--density", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(meta(&text, "beta_hat"), Some("2"));
    assert_eq!(meta(&text, "alpha_hat"), Some("2"));
}

#[test]
fn analyze_indices_phi_beta_column() {
    let o = orlicz(&["analyze", "indices", "--model", "Phi", "--p-grid", "1,1.1,1.2,1.5,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let r = rows(&text);
    // beta_hat as read after each range doubling, for the p = 1 rows.
    let col: Vec<&str> = r.iter().filter(|r| r[0] == "1").skip(1).map(|r| r[8].as_str()).collect();
    assert_eq!(col.first(), Some(&"2"));
    assert_eq!(col.last(), Some(&"1.1"));
    assert_eq!(meta(&text, "beta_hat"), Some("1.1"));
    assert!(r.iter().filter(|r| r[0] == "1").skip(1).all(|r| r[6] == "Diverging"));
}

#[test]
fn analyze_einf_phi() {
    let o = orlicz(&["analyze", "einf", "--model", "Phi", "--n", "6..11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(meta(&text, "equivalence_to_t_at_zero"), Some("NotEquivalentToH"));
    let r = rows(&text);
    let row = r.iter().find(|r| r[0] == "0.0625").unwrap();
    assert_eq!(row.len(), 1 + 2 * 6);
    for hi in row.iter().skip(2).step_by(2) {
        assert!(hi.parse::<f64>().unwrap() <= 4.0 / 256.0);
    }
}

#[test]
fn analyze_conjugate_nabla3_norm() {
    let o = orlicz(&["--format", "json", "analyze", "conjugate", "--model", "powernorm:2", "--t", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let lo: f64 = v["rows"][0][1].as_str().unwrap().parse().unwrap();
    assert!((lo - 4.5).abs() < 1e-12);

    let o = orlicz(&["analyze", "conjugate", "--model", "power:1", "--t", "2"]);
    assert_eq!(rows(&stdout(&o))[0][1], "inf");
    assert_eq!(orlicz(&["analyze", "conjugate", "--model", "F"]).status.code(), Some(3));

    let o = orlicz(&["analyze", "nabla3", "--model", "xlog"]);
    assert_eq!(meta(&stdout(&o), "verdict"), Some("DivergesLikely"));
    let o = orlicz(&["analyze", "nabla3", "--model", "power:2"]);
    assert_eq!(meta(&stdout(&o), "verdict"), Some("BoundedLikely"));

    let o = orlicz(&["analyze", "norm", "--model", "power:2", "--values", "1", "--measures", "0.25"]);
    let r = rows(&stdout(&o));
    let (lo, hi): (f64, f64) = (r[0][0].parse().unwrap(), r[0][1].parse().unwrap());
    assert!(lo <= 0.5 && 0.5 <= hi);
}

#[test]
fn analyze_models() {
    assert_eq!(orlicz(&["analyze", "indices", "--model", "nope"]).status.code(), Some(3));
    assert_eq!(orlicz(&["analyze", "indices"]).status.code(), Some(3));
    assert_eq!(
        orlicz(&["analyze", "conjugate", "--model", "table:/nonexistent.csv"]).status.code(),
        Some(4)
    );
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("m.csv");
    std::fs::write(&table, "log2_x,log2_m\n0,0\n8,16\n64,128\n").unwrap();
    let spec = format!("table:{}", table.display());
    let o = orlicz(&["analyze", "indices", "--model", &spec, "--ranges", "8,16,32", "--density", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(meta(&stdout(&o), "beta_hat"), Some("2"));
    assert!(Path::new(&table).exists());
}
