//! End-to-end runs of the `seti-onoff` binary.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_seti-onoff");

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn csv_rows(body: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(body);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

const SMALL_MC: &str = r#"
[scenario]
n_samples = 32
rfi_kind = "wideband"
inr_db = 0.0
et_kind = "narrowband"
snr_db = -2.0
gain = 0.9

[experiment]
detectors = ["f_ratio", "on_off", "energy"]
mode = "both"
trials = 2000
seed = 99
pfa_grid = 20
histogram_bins = 10

[sweep]
gain = [0.8, 1.0]
"#;

#[test]
fn csv_schemas_are_fixed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL_MC);
    let out = tmp.path().join("out");
    run_ok(&["roc", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let files = read_dir(&out);

    let names: Vec<&str> = files.keys().map(String::as_str).collect();
    let mut want = vec!["manifest.json", "roc_0.csv", "roc_1.csv", "summary.csv"];
    for p in 0..2 {
        for d in ["energy", "f_ratio", "on_off"] {
            for h in ["H0", "H1"] {
                want.push(Box::leak(format!("hist_{p}_{d}_{h}.csv").into_boxed_str()));
            }
        }
    }
    want.sort();
    assert_eq!(names, want);

    let golden: [(&str, &str); 3] = [
        ("roc_0.csv", "threshold,pfa,pd,detector,scenario_id,gain,snr_db,n_samples"),
        ("hist_1_on_off_H1.csv", "bin_left,bin_right,empirical_density,analytic_density"),
        (
            "summary.csv",
            "point,detector,scenario_id,gain,snr_db,n_samples,auc,threshold_pfa_0.01,pd_pfa_0.01,threshold_pfa_0.1,pd_pfa_0.1,\
             empirical_auc,empirical_pfa_0.01,empirical_pd_0.01,empirical_pfa_0.1,empirical_pd_0.1,ks_h0,ks_h1",
        ),
    ];
    for (name, header) in golden {
        let body = String::from_utf8(files[name].clone()).unwrap();
        assert_eq!(body.lines().next().unwrap(), header, "{name}");
        let width = header.split(',').count();
        assert!(body.lines().all(|l| l.split(',').count() == width), "{name}");
    }

    let (header, rows) = csv_rows(&files["roc_1.csv"]);
    // three detectors, grid + 32 tail levels + 2 end points each
    assert_eq!(rows.len(), 3 * (20 + 32 + 2));
    let sid = column(&header, "scenario_id");
    assert!(rows.iter().all(|r| r[sid] == "wide_rfi-narrow_et" && r[column(&header, "gain")] == "1.0"));

    let (header, rows) = csv_rows(&files["hist_0_f_ratio_H0.csv"]);
    assert_eq!(rows.len(), 10);
    let (l, r) = (column(&header, "bin_left"), column(&header, "bin_right"));
    assert!(rows.windows(2).all(|w| w[0][r] == w[1][l]));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL_MC);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        run_ok(&["mc-validate", "--config", &cfg, "--out", dir.to_str().unwrap()]);
    }
    assert_eq!(read_dir(&a), read_dir(&b));

    let c = tmp.path().join("c");
    run_ok(&["mc-validate", "--config", &cfg, "--out", c.to_str().unwrap(), "--seed", "100"]);
    let other = read_dir(&c);
    assert_ne!(other["summary.csv"], read_dir(&a)["summary.csv"]);
    // the analytic ROC does not depend on the seed
    assert_eq!(other["roc_0.csv"], read_dir(&a)["roc_0.csv"]);
}

#[test]
fn manifest_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL_MC);
    let first = tmp.path().join("first");
    run_ok(&["roc", "--config", &cfg, "--out", first.to_str().unwrap(), "--trials", "1500"]);
    let files = read_dir(&first);

    let manifest: serde_json::Value = serde_json::from_slice(&files["manifest.json"]).unwrap();
    assert_eq!(manifest["seed"], 99);
    assert_eq!(manifest["config"]["trials"], 1500);
    let listed: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    let mut sorted = listed.clone();
    sorted.sort();
    assert_eq!(listed, sorted);
    assert_eq!(listed.len(), files.len() - 1);

    let again = write_config(tmp.path(), "again.toml", manifest["config_toml"].as_str().unwrap());
    let second = tmp.path().join("second");
    run_ok(&["roc", "--config", &again, "--out", second.to_str().unwrap()]);
    assert_eq!(files, read_dir(&second));
}

#[test]
fn chance_config_gives_unit_half_auc() {
    let tmp = tempfile::tempdir().unwrap();
    let body = r#"
[scenario]
n_samples = 128
rfi_kind = "narrowband"
inr_db = 3.0
et_kind = "wideband"
et_power = 0.0
gain = 1.2

[experiment]
detectors = ["f_ratio", "on_off", "energy"]
mode = "analytic"
"#;
    let cfg = write_config(tmp.path(), "c.toml", body);
    let out = tmp.path().join("out");
    run_ok(&["roc", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let (header, rows) = csv_rows(&fs::read(out.join("summary.csv")).unwrap());
    assert_eq!(rows.len(), 3);
    let auc = column(&header, "auc");
    for r in &rows {
        let a: f64 = r[auc].parse().unwrap();
        assert!((a - 0.5).abs() < 1e-6, "{r:?}");
        assert!(r[column(&header, "empirical_auc")].is_empty());
    }
}

#[test]
fn wideband_injections_match_their_laws() {
    let tmp = tempfile::tempdir().unwrap();
    let body = r#"
[scenario]
n_samples = 64
rfi_kind = "wideband"
inr_db = 0.0
et_kind = "wideband"
gain = 1.0

[experiment]
detectors = ["f_ratio"]
mode = "both"
trials = 100000
seed = 5

[sweep]
snr_db = [0.0, 2.51]
"#;
    let cfg = write_config(tmp.path(), "c.toml", body);
    let out = tmp.path().join("out");
    run_ok(&["roc", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(out.join("hist_0_f_ratio_H1.csv").exists() && out.join("hist_1_f_ratio_H1.csv").exists());
    let (header, rows) = csv_rows(&fs::read(out.join("summary.csv")).unwrap());
    for r in &rows {
        for col in ["ks_h0", "ks_h1"] {
            let ks: f64 = r[column(&header, col)].parse().unwrap();
            assert!(ks < 0.01, "{col} = {ks}");
        }
    }
    let snr: Vec<String> = rows.iter().map(|r| r[column(&header, "snr_db")].clone()).collect();
    assert_eq!(snr, ["0.0", "2.51"]);
}

#[test]
fn config_errors_name_the_line_and_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("[scenario]\nn_samples = 64\n[experiment]\nmode = \"monte_carlo\"\ntrials = 50\n", ":5:"),
        ("[scenario]\nn_samples = 64\net_kind = \"wideband\"\net_energy = 3.0\n", ":4:"),
        ("[scenario]\nn_samples = 64\n\n[sweep]\nsnr_db = [1.0]\ngain = [1.0]\n", ":4:"),
        ("[scenario]\nn_samples = 64\ndetector = \"energy\"\n", ":3:"),
        ("[scenario]\nn_samples = -4\n", ":2:"),
        ("[scenario]\nn_samples = 64\n[experiment]\ndetectors = [\"radiometer\"]\n", ":4:"),
    ];
    for (i, (body, anchor)) in cases.iter().enumerate() {
        let cfg = write_config(tmp.path(), &format!("bad{i}.toml"), body);
        let out = run(&["roc", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(&format!("bad{i}.toml{anchor}")), "case {i}: {err}");
    }
    assert!(!tmp.path().join("o").exists());
}

#[test]
fn trials_flag_is_validated() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", SMALL_MC);
    let out = run(&["mc-validate", "--config", &cfg, "--trials", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--trials"));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = run(&["roc", "--config", "/nonexistent/experiment.toml"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/experiment.toml"));
}

#[test]
fn compare_reports_both_detectors_per_gain() {
    let tmp = tempfile::tempdir().unwrap();
    let body = r#"
[scenario]
n_samples = 64
rfi_kind = "wideband"
inr_db = 0.0
et_kind = "wideband"
snr_db = 0.0

[experiment]
pfa_grid = 50
"#;
    let cfg = write_config(tmp.path(), "c.toml", body);
    let out = tmp.path().join("out");
    run_ok(&["compare", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let (header, rows) = csv_rows(&fs::read(out.join("compare.csv")).unwrap());
    assert_eq!(header.join(","), "gain,detector,auc,auc_delta,scenario_id,snr_db,n_samples");
    assert_eq!(rows.len(), 8);
    let (header, _) = csv_rows(&fs::read(out.join("compare_roc.csv")).unwrap());
    assert_eq!(header.join(","), "threshold,pfa,pd,detector,scenario_id,gain,snr_db,n_samples");
}
