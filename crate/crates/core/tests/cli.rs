use std::fs;
use std::path::Path;
use std::process::Command;

use rkband::cli::{run, EXIT_DATA, EXIT_INCOMPATIBLE, EXIT_OK, EXIT_USAGE};
use rkband::dataset_file::format_labeled;
use rkband::synthetic::cylinder_bell_funnel;
use rkband::BandSet;

fn write_cbf(dir: &Path) -> (String, String) {
    let train = dir.join("train.txt");
    let test = dir.join("test.txt");
    fs::write(&train, format_labeled(&cylinder_bell_funnel(12, 24, 1).unwrap())).unwrap();
    fs::write(&test, format_labeled(&cylinder_bell_funnel(9, 24, 2).unwrap())).unwrap();
    (
        train.to_string_lossy().into_owned(),
        test.to_string_lossy().into_owned(),
    )
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["rkband"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn field(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {report}"))
}

#[test]
fn learn_writes_band_and_reports_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = write_cbf(dir.path());
    let band = dir.path().join("band.json");
    let (code, out, err) = call(&["learn", "--train", &train, "--band-out", band.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let acc = field(&out, "leave-one-out accuracy:");
    assert!((0.0..=1.0).contains(&acc));
    assert!(out.contains("winner:"));
    let set = BandSet::load(&band).unwrap();
    assert_eq!(set.n(), 24);
    assert_eq!(set.labels().collect::<Vec<_>>(), vec![1, 2, 3]);
}

#[test]
fn ragged_train_file_exits_with_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let train = dir.path().join("bad.txt");
    fs::write(&train, "1 0 1 2 3\n2 1 1 1 1\n1 0 1 2\n").unwrap();
    let band = dir.path().join("band.json");
    let (code, _, err) = call(&[
        "learn",
        "--train",
        train.to_str().unwrap(),
        "--band-out",
        band.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("bad.txt:3"), "{err}");
    assert!(!band.exists());
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["learn"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate", "--train", "x"]).0, EXIT_USAGE);
    assert_eq!(call(&["learn", "--train", "x", "--bound", "101"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["learn", "--train", "x", "--complexity-threshold", "0"]).0,
        EXIT_USAGE
    );
    assert_eq!(call(&["learn", "--train", "x", "--threads", "0"]).0, EXIT_USAGE);
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = write_cbf(dir.path());
    assert_eq!(call(&["eval", "--train", &train]).0, EXIT_USAGE);
    assert_eq!(call(&["predict", "--train", &train]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn missing_train_file_is_a_data_error() {
    let (code, _, err) = call(&["learn", "--train", "/nonexistent/train.txt"]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("/nonexistent/train.txt"));
}

#[test]
fn predict_with_and_without_stored_band() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = write_cbf(dir.path());
    let band = dir.path().join("band.json");
    let preds = dir.path().join("preds.txt");
    let (code, out, err) = call(&[
        "predict",
        "--train",
        &train,
        "--test",
        &test,
        "--band-out",
        band.to_str().unwrap(),
        "--out",
        preds.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let learned = fs::read_to_string(&preds).unwrap();
    assert_eq!(learned.lines().count(), 9);
    assert!(out.contains("predicted accuracy:"));
    assert!(out.contains("test accuracy:"));

    let preds2 = dir.path().join("preds2.txt");
    let (code, _, err) = call(&[
        "predict",
        "--train",
        &train,
        "--test",
        &test,
        "--band-in",
        band.to_str().unwrap(),
        "--out",
        preds2.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(fs::read_to_string(&preds2).unwrap(), learned);

    // stdout mode
    let (code, out, err) = call(&["predict", "--train", &train, "--test", &test, "--band-in", band.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, learned);
    assert!(err.contains("predicted accuracy:"));
}

#[test]
fn predict_empty_test_file() {
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = write_cbf(dir.path());
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let preds = dir.path().join("preds.txt");
    let (code, _, err) = call(&[
        "predict",
        "--train",
        &train,
        "--test",
        empty.to_str().unwrap(),
        "--out",
        preds.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(fs::read_to_string(&preds).unwrap(), "");
}

#[test]
fn band_of_other_length_is_incompatible() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = write_cbf(dir.path());
    let band = dir.path().join("band.json");
    fs::write(&band, r#"{"n":5,"bands":{"1":[0,0,0,0,0],"2":[1,1,1,1,1],"3":[0,0,0,0,0]}}"#).unwrap();
    let (code, _, _) = call(&["predict", "--train", &train, "--test", &test, "--band-in", band.to_str().unwrap()]);
    assert_eq!(code, EXIT_INCOMPATIBLE);
    let (code, _, _) = call(&["eval", "--train", &train, "--band-in", band.to_str().unwrap()]);
    assert_eq!(code, EXIT_INCOMPATIBLE);
    fs::write(&band, "not json").unwrap();
    let (code, _, _) = call(&["eval", "--train", &train, "--band-in", band.to_str().unwrap()]);
    assert_eq!(code, EXIT_INCOMPATIBLE);
}

#[test]
fn eval_extremes_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = write_cbf(dir.path());
    let data = rkband::dataset_file::load_labeled(Path::new(&train)).unwrap().znormalize();
    for (width, band) in [("0", rkband::RkBand::zeros(24)), ("100", rkband::RkBand::full(24))] {
        let (code, out, err) = call(&["eval", "--train", &train, "--sc-width", width]);
        assert_eq!(code, EXIT_OK, "{err}");
        let set = BandSet::uniform(data.labels(), &band).unwrap();
        assert_eq!(field(&out, "silhouette:"), rkband::evaluate(&data, &set).unwrap());
        let (_, again, _) = call(&["eval", "--train", &train, "--sc-width", width]);
        assert_eq!(out, again);
    }
}

#[test]
fn binary_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let (train, _) = write_cbf(dir.path());
    let output = Command::new(env!("CARGO_BIN_EXE_rkband"))
        .args(["eval", "--train", &train, "--sc-width", "10"])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("silhouette:"));
    let output = Command::new(env!("CARGO_BIN_EXE_rkband"))
        .args(["eval", "--train", &train, "--sc-width", "500"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(EXIT_USAGE));
}
