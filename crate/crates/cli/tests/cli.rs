use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn optrf(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optrf"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest() -> Value {
    json!({
        "schema_version": 1,
        "output_dir": "out",
        "data": {
            "source": {"kind": "synthetic_blobs", "seed": 1, "n": 120, "d": 6, "classes": 2, "separation": 4.0},
            "split": {"test_fraction": 0.25, "seed": 2}
        },
        "features": {"seed": 3, "map": {"family": "optical", "exponent": 2.0, "dim": 64}},
        "ridge": {"alpha": 0.1},
        "grid": {"scale_grid": [0.5, 1.0], "alpha_grid": [0.01, 1.0], "bias_grid": [0.0], "split_seed": 9},
        "convergence": {"exponents": [2, 4], "dims": [50, 500], "pairs": 4, "pair_dim": 6,
                        "pairs_seed": 1, "replicates": 3, "base_seed": 5}
    })
}

fn write_manifest(dir: &Path, v: &Value) {
    std::fs::write(dir.join("m.json"), serde_json::to_vec_pretty(v).unwrap()).unwrap();
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join("out").join(format!("{command}_report.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn train_writes_model_and_report() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), &manifest());
    let out = optrf(dir.path(), &["train", "-m", "m.json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("out/model.oprf").exists());
    let r = report(dir.path(), "train");
    assert_eq!(r["command"], "train");
    assert_eq!(r["seeds"]["features"], 3);
    let acc = r["metrics"]["test_accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));
    assert!(r["timings"]["solve"].as_f64().unwrap() >= 0.0);
    // the non-binary input warning is both logged and recorded
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("non-binary")));
}

#[test]
fn zero_dimension_is_a_manifest_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = manifest();
    m["features"]["map"]["dim"] = json!(0);
    write_manifest(dir.path(), &m);
    let out = optrf(dir.path(), &["features", "-m", "m.json"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("manifest") && err.contains("features.map"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = manifest();
    m["ridge"]["alpha"] = json!("small");
    write_manifest(dir.path(), &m);
    let out = optrf(dir.path(), &["train", "-m", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ridge.alpha"), "{}", stderr(&out));
}

#[test]
fn strict_binary_rejects_real_valued_inputs() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), &manifest());
    let out = optrf(dir.path(), &["features", "-m", "m.json", "--strict-binary"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("binary"), "{}", stderr(&out));
}

#[test]
fn manifest_values_win_over_flags() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), &manifest());
    let out = optrf(dir.path(), &["features", "-m", "m.json", "--dim", "10", "--scale", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = report(dir.path(), "features");
    assert_eq!(r["manifest"]["features"]["map"]["dim"], 64);
    assert_eq!(r["manifest"]["features"]["map"]["scale"], 2.0);
    assert!(r["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("features.map.dim")));
}

#[test]
fn plotdata_rows_follow_the_inputs() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), &manifest());
    assert!(optrf(dir.path(), &["grid", "-m", "m.json"]).status.success());
    assert!(optrf(dir.path(), &["converge", "-m", "m.json"]).status.success());

    let out = optrf(dir.path(), &["plotdata", "-i", "out/grid_result.json", "-o", "grid_plot.csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("grid_plot.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);

    let out = optrf(dir.path(), &["plotdata", "-i", "out/convergence.json", "-o", "conv.csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("conv.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "m,D,mean_rel_error,median_rel_error,max_rel_error");
    assert_eq!(lines.count(), 2 * 2);
}

#[test]
fn plotdata_reports_missing_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = optrf(dir.path(), &["plotdata", "-i", "nothing.json", "-o", "x.csv"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("missing upstream artifact"), "{}", stderr(&out));

    std::fs::write(dir.path().join("bad.json"), r#"{"kind": "grid_search", "metric": 3}"#).unwrap();
    let out = optrf(dir.path(), &["plotdata", "-i", "bad.json", "-o", "x.csv"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("schema error"), "{}", stderr(&out));
}

#[test]
fn csv_inputs_and_binarize() {
    let dir = tempfile::tempdir().unwrap();
    // binary features, label in the last column
    let mut rows = String::new();
    for i in 0..40 {
        let c = i % 2;
        rows.push_str(&format!("{},{},{},{c}\n", (i % 3 == 0) as u8, c, 1 - c));
    }
    std::fs::write(dir.path().join("data.csv"), rows).unwrap();
    let m = json!({
        "schema_version": 1,
        "output_dir": "out",
        "data": {"source": {"kind": "csv", "path": "data.csv"}, "split": {"test_fraction": 0.25, "seed": 1}},
        "features": {"seed": 4, "map": {"family": "optical", "exponent": 2.0, "dim": 32}, "strict_binary": true},
        "ridge": {"alpha": 0.1},
        "binarize": {"threshold": 0.5}
    });
    write_manifest(dir.path(), &m);
    let out = optrf(dir.path(), &["train", "-m", "m.json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(report(dir.path(), "train")["metrics"]["test_accuracy"], 1.0);

    let out = optrf(dir.path(), &["binarize", "-m", "m.json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let b = optrf::data_io::load_matrix_u8(&dir.path().join("out/binarized.oprf")).unwrap();
    assert_eq!((b.nrows(), b.ncols()), (40, 3));
    assert!(b.iter().all(|v| *v <= 1));
}

#[test]
fn missing_sections_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let mut m = manifest();
    m.as_object_mut().unwrap().remove("convergence");
    write_manifest(dir.path(), &m);
    let out = optrf(dir.path(), &["converge", "-m", "m.json"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("convergence"), "{}", stderr(&out));
}
