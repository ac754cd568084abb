use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_salpeter"))
        .args(args)
        .env_remove("SALPETER_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

/// Rows of a CSV document as header-keyed maps.
fn csv_rows(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            header.iter().map(String::from).zip(r.iter().map(String::from)).collect()
        })
        .collect()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    csv_rows(text).iter().map(|r| r[name].parse().unwrap()).collect()
}

#[test]
fn c_ell_table_to_three_decimals() {
    let text = ok(&["constants", "c_ell", "--lmax", "20"]);
    let values = column(&text, "c_ell_full");
    assert_eq!(values.len(), 20);
    for (&(_, want), got) in salpeter::reference::C_ELL.iter().zip(values) {
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }
}

#[test]
fn square_integral_constants() {
    let text = ok(&["constants", "c_nu_q", "--nu", "0..100", "--q", "2", "--alpha", "1"]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    for r in rows {
        let nu: f64 = r["nu"].parse().unwrap();
        let c: f64 = r["c_nu_q_full"].parse().unwrap();
        assert!((c * (2.0 * nu + 1.0).sqrt() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn empty_range_gives_header_only() {
    let text = ok(&["constants", "c_ell", "--lmax", "0"]);
    assert_eq!(text, "l,c_ell,c_ell_full\n");
}

#[test]
fn trace_critical_couplings_over_beta() {
    let text = ok(&["critical", "--method", "trace", "--potential", "exp", "--l", "0", "--beta", "0,1,2,3,4,5", "--alpha", "2"]);
    let got = column(&text, "g_c_full");
    for (row, g) in salpeter::reference::SWAVE_EXPONENTIAL.iter().zip(got) {
        assert!((g / row.g_trace - 1.0).abs() < 5e-3, "{g} vs {}", row.g_trace);
    }
}

#[test]
fn exact_critical_couplings_over_l() {
    let text = ok(&["critical", "--method", "exact", "--potential", "pt", "--l", "1..5", "--m", "0", "--alpha", "2"]);
    let got = column(&text, "g_c_full");
    assert_eq!(got.len(), 5);
    for (row, g) in salpeter::reference::MASSLESS_POSCHL_TELLER.iter().zip(got) {
        assert!((g / row.g_exact - 1.0).abs() < 1e-2, "{g} vs {}", row.g_exact);
    }
}

#[test]
fn s_wave_maximum_condition_is_a_config_error() {
    let out = run(&["critical", "--method", "existence-max", "--potential", "exp", "--l", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("C(0, 1) diverges"));
}

#[test]
fn angular_momentum_caps() {
    for method in ["bound", "exact"] {
        let text = ok(&["lmax", "--potential", "exp", "--g", "100", "--method", method]);
        assert_eq!(csv_rows(&text)[0]["l"], "17", "{method}");
    }
}

#[test]
fn oscillator_counts_below_levels() {
    let text = ok(&["below-energy", "--potential", "osc", "--k", "1", "--l", "0", "--kappa2", "auto-airy:3", "--exact"]);
    let rows = csv_rows(&text);
    let implied: Vec<&str> = rows.iter().map(|r| r["implied_count"].as_str()).collect();
    let exact: Vec<&str> = rows.iter().map(|r| r["exact_count"].as_str()).collect();
    assert_eq!(implied, ["1", "8", "21"]);
    assert_eq!(exact, ["0", "1", "2"]);
}

#[test]
fn central_bound_beats_daubechies_on_thin_shell() {
    let bound = |method: &str, v0: &str| {
        let text = ok(&["bound", "--method", method, "--potential", "sqw", "--v0", v0, "--r1", "0.6", "--r2", "1", "--m", "0"]);
        csv_rows(&text).remove(0)
    };
    let daub: f64 = bound("daubechies", "1")["raw_bound_full"].parse().unwrap();
    let central = bound("central-ur", "1");
    let asymptotic: f64 = central["asymptotic_full"].parse().unwrap();
    assert!(asymptotic <= daub, "{asymptotic} {daub}");
    let daub10: f64 = bound("daubechies", "10")["raw_bound_full"].parse().unwrap();
    let central10: f64 = bound("central-ur", "10")["raw_bound_full"].parse().unwrap();
    assert!(central10 <= daub10, "{central10} {daub10}");
}

#[test]
fn reference_tables_pass() {
    for which in ["1", "s5"] {
        let text = ok(&["table", which]);
        let rows = csv_rows(&text);
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r["pass"] == "true"), "table {which}");
    }
    assert_eq!(csv_rows(&ok(&["table", "1"])).len(), 28);
}

#[test]
fn reruns_are_byte_identical_and_formats_agree() {
    let args = ["bound", "--method", "trace-total", "--potential", "exp", "--g", "1,2", "--samples", "4096", "--seed", "7"];
    let csv_a = ok(&[&args[..], &["--threads", "1"]].concat());
    let csv_b = ok(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(csv_a, csv_b);
    let json = ok(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(json, ok(&[&args[..], &["--format", "json"]].concat()));
    let doc: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["meta"]["seed"], 7);
    let rows = csv_rows(&csv_a);
    let json_rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    for (c, j) in rows.iter().zip(json_rows) {
        for name in ["g", "raw_bound", "err_estimate"] {
            let from_csv: f64 = c[&format!("{name}_full")].parse().unwrap();
            assert_eq!(from_csv.to_bits(), j[name].as_f64().unwrap().to_bits(), "{name}");
        }
        assert_eq!(c["implied_count"], j["implied_count"].to_string());
    }
}

#[test]
fn config_file_with_command_line_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "format = \"json\"\n[lmax]\npotential = \"exp\"\ng = [50, 100]\n[critical]\nmethod = \"trace\"\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let doc: Value = serde_json::from_str(&ok(&["--config", p, "lmax"])).unwrap();
    let ls: Vec<i64> = doc["rows"].as_array().unwrap().iter().map(|r| r["l"].as_i64().unwrap()).collect();
    assert_eq!(ls, [8, 17]);
    let text = ok(&["--config", p, "--format", "csv", "lmax", "--g", "10"]);
    assert_eq!(csv_rows(&text)[0]["l"], "1");

    std::fs::write(&path, "[lmax]\nbogus = 1\n").unwrap();
    let out = run(&["lmax", "--potential", "exp", "--config", p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(run(&["lmax", "--potential", "exp", "--g", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--method", "warp"]).status.code(), Some(2));
    assert_eq!(run(&["critical", "--method", "exact", "--potential", "osc"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_salpeter"))
        .args(["constants", "c_ell", "--lmax", "2"])
        .env("SALPETER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_salpeter"))
        .args(["constants", "c_ell", "--lmax", "2"])
        .env("SALPETER_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tabulated_potential_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.dat");
    let table: String = (0..=400)
        .map(|i| {
            let r = i as f64 * 0.05;
            format!("{r} {}\n", -(-r).exp())
        })
        .collect();
    std::fs::write(&path, table).unwrap();
    let text = ok(&["critical", "--method", "trace", "--potential", "tab", "--file", path.to_str().unwrap()]);
    let g = column(&text, "g_c_full")[0];
    assert!((g / 4.443 - 1.0).abs() < 1e-2, "{g}");
}
