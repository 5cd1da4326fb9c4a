use std::path::PathBuf;
use std::process::{Command, Output};

fn htype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htype"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("htype-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_dim7_passes() {
    let o = htype(&["verify", "--k", "2", "--mult", "1", "--points", "200"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("result: pass"));
    assert!(text.contains("verdict: nonsymmetric"));
    assert!(!text.contains("FAIL"));
    assert!(text.starts_with(&format!("# htype {} verify", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn verify_complex_hyperbolic_is_symmetric() {
    let o = htype(&[
        "verify", "--k", "1", "--mult", "1", "--points", "200", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let info = doc["info"].as_array().unwrap();
    assert!(info
        .iter()
        .any(|e| e[0] == "is_symmetric" && e[1] == "true"));
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["config"]["k"], 1);
}

#[test]
fn tight_harmonic_tolerance_fails() {
    let o = htype(&[
        "verify",
        "--k",
        "2",
        "--mult",
        "1",
        "--points",
        "100",
        "--tol-harmonic",
        "1e-12",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.starts_with("FAIL") && l.contains("harmonic_spread")));
}

#[test]
fn table_smallest_dimensions() {
    let o = htype(&["table", "--n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert!(rows[0].starts_with("1  —"));
    for (row, dim) in rows[1..]
        .iter()
        .zip(["7", "12", "13", "14", "15", "24", "25"])
    {
        assert_eq!(row.split_whitespace().nth(2), Some(dim), "{row}");
    }
}

#[test]
fn table_csv_has_header() {
    let o = htype(&["table", "--n", "2", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,n,dim"));
    assert_eq!(lines.next(), Some("2,0,7"));
    assert!(text.contains("8,2,57\n"));
}

#[test]
fn density_and_heat_and_curvature() {
    let o = htype(&[
        "density",
        "--k",
        "2",
        "--mult",
        "1",
        "--rho-max",
        "3",
        "--samples",
        "50",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let err_col = headers.iter().position(|h| h == "rel_error").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 50);
    for r in rows {
        assert!(r[err_col].parse::<f64>().unwrap() <= 1e-5);
    }

    let o = htype(&[
        "heat", "--k", "2", "--mult", "1", "--t-end", "1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let drift = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "heat_mass_drift")
        .unwrap();
    assert!(drift["measured"].as_f64().unwrap() <= 1e-4);
    assert_eq!(doc["config"]["grid"]["rho_max"], 12.0);

    let o = htype(&["curvature", "--k", "2", "--mult", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: nonsymmetric"));
}

#[test]
fn geodesic_command() {
    let o = htype(&[
        "geodesic",
        "--k",
        "1",
        "--length",
        "1",
        "--directions",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc["data"][0]["rows"].as_array().unwrap().len() >= 8 * 20);
}

#[test]
fn structured_output_is_deterministic() {
    let args = [
        "density",
        "--k",
        "3",
        "--mult",
        "1+1",
        "--samples",
        "5",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = htype(&args);
    let b = htype(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = htype(&[
        "density",
        "--k",
        "3",
        "--mult",
        "1+1",
        "--samples",
        "5",
        "--seed",
        "8",
        "--format",
        "json",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_and_usage_errors() {
    let dir = scratch("config");
    let good = dir.join("good.toml");
    std::fs::write(
        &good,
        "k = 3\nmult = \"1+1\"\nsamples = 4\nformat = \"csv\"\n",
    )
    .unwrap();
    let out = dir.join("out.csv");
    let o = htype(&[
        "density",
        "--config",
        good.to_str().unwrap(),
        "--samples",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().filter(|l| !l.starts_with('#')).count(), 4);
    assert!(written.contains("# config: k=3 mult=1+1"));

    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "k = 2\nunknown = 1\n").unwrap();
    assert_eq!(
        htype(&["verify", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&bad, "k = \"two\"\n").unwrap();
    assert_eq!(
        htype(&["table", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        htype(&["verify", "--k", "2", "--mult", "1+1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        htype(&["verify", "--tol-mass", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(htype(&["verify", "--k", "0"]).status.code(), Some(2));
    assert_eq!(htype(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        htype(&["density", "--config", "/nonexistent/x.toml"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(dir).ok();
}
