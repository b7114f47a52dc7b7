use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ofs(args: &[&str]) -> Output {
    ofs_with_env(args, &[])
}

fn ofs_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ofs"));
    cmd.args(args).env_remove("OFS_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("failed to run ofs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn assert_ok(out: &Output) {
    assert!(out.status.success(), "ofs failed: {}", stderr(out));
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

/// Small synthetic pair: 1500 train, 300 test, d=1000 with 30 informative.
fn generated(seed: &str) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = ofs(&[
        "--seed",
        seed,
        "generate",
        "--dim",
        "1000",
        "--idim",
        "30",
        "--ndim",
        "60",
        "--train",
        "1500",
        "--test",
        "300",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_ok(&out);
    dir
}

fn accuracy_line(out: &Output) -> f64 {
    let text = stdout(out);
    let line = text
        .lines()
        .find(|l| l.starts_with("accuracy "))
        .expect("no accuracy line");
    line["accuracy ".len()..].trim().parse().unwrap()
}

#[test]
fn generate_writes_data_and_truth() {
    let dir = generated("1");
    let train = fs::read_to_string(dir.path().join("train.svm")).unwrap();
    let test = fs::read_to_string(dir.path().join("test.svm")).unwrap();
    assert_eq!(train.lines().count(), 1500);
    assert_eq!(test.lines().count(), 300);
    for line in train.lines().take(50) {
        // label plus exactly idim + ndim features
        assert_eq!(line.split_whitespace().count(), 91);
    }
    let truth = fs::read_to_string(dir.path().join("informative.txt")).unwrap();
    let indices: Vec<usize> = truth
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(indices.len(), 30);
    assert!(indices.windows(2).all(|w| w[0] < w[1]));
    assert!(indices.iter().all(|&i| i < 1000));
}

#[test]
fn generate_is_deterministic_per_seed() {
    let a = generated("9");
    let b = generated("9");
    let c = generated("10");
    let read = |d: &TempDir| fs::read(d.path().join("train.svm")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn train_eval_predict_round_trip() {
    let dir = generated("2");
    let model = path(dir.path(), "sofs.model");
    let train = ofs(&[
        "train",
        "--algo",
        "sofs",
        "--B",
        "30",
        "--data",
        &path(dir.path(), "train.svm"),
        "--model",
        &model,
    ]);
    assert_ok(&train);
    assert!(stdout(&train).contains("nnz=30"), "{}", stdout(&train));

    let eval = ofs(&[
        "eval",
        "--model",
        &model,
        "--data",
        &path(dir.path(), "test.svm"),
        "--recovery",
        &path(dir.path(), "informative.txt"),
    ]);
    assert_ok(&eval);
    let acc = accuracy_line(&eval);
    assert!(acc > 0.8, "accuracy {acc}");
    assert!(stdout(&eval).contains("recovery "));

    let labels_path = path(dir.path(), "labels.txt");
    assert_ok(&ofs(&[
        "predict",
        "--model",
        &model,
        "--data",
        &path(dir.path(), "test.svm"),
        "--out",
        &labels_path,
    ]));
    let labels = fs::read_to_string(&labels_path).unwrap();
    let test = fs::read_to_string(dir.path().join("test.svm")).unwrap();
    assert_eq!(labels.lines().count(), 300);
    let agree = labels
        .lines()
        .zip(test.lines())
        .filter(|(p, ex)| ex.split_whitespace().next() == Some(p))
        .count();
    assert!((agree as f64 / 300.0 - acc).abs() < 1e-6);
}

#[test]
fn every_algorithm_trains_and_reloads() {
    let dir = generated("3");
    let data = path(dir.path(), "train.svm");
    for algo in ["sofs", "pet", "fofs", "ogd", "arow"] {
        let model = path(dir.path(), &format!("{algo}.model"));
        assert_ok(&ofs(&[
            "train", "--algo", algo, "--B", "40", "--data", &data, "--model", &model,
        ]));
        let eval = ofs(&["eval", "--model", &model, "--data", &path(dir.path(), "test.svm")]);
        assert_ok(&eval);
        assert!(accuracy_line(&eval) > 0.5, "{algo}");
    }
}

#[test]
fn gzip_input_matches_plain() {
    let plain = generated("4");
    let gz = tempfile::tempdir().unwrap();
    let args = |out: &str, extra: Option<&str>| {
        let mut v = vec![
            "--seed", "4", "generate", "--dim", "1000", "--idim", "30", "--ndim", "60",
        ];
        v.extend(["--train", "1500", "--test", "300", "--out"]);
        v.push(out);
        v.extend(extra);
        v.into_iter().map(str::to_owned).collect::<Vec<_>>()
    };
    let gz_args = args(gz.path().to_str().unwrap(), Some("--gzip"));
    assert_ok(&ofs(&gz_args.iter().map(String::as_str).collect::<Vec<_>>()));
    let m1 = path(plain.path(), "a.model");
    let m2 = path(gz.path(), "a.model");
    assert_ok(&ofs(&[
        "train",
        "--algo",
        "pet",
        "--B",
        "20",
        "--data",
        &path(plain.path(), "train.svm"),
        "--model",
        &m1,
    ]));
    assert_ok(&ofs(&[
        "train",
        "--algo",
        "pet",
        "--B",
        "20",
        "--data",
        &path(gz.path(), "train.svm.gz"),
        "--model",
        &m2,
    ]));
    assert_eq!(fs::read(m1).unwrap(), fs::read(m2).unwrap());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = generated("5");
    let data = path(dir.path(), "train.svm");
    let model = path(dir.path(), "m");
    let cases: Vec<Vec<&str>> = vec![
        vec!["train", "--algo", "sofs", "--data", &data, "--model", &model],
        vec![
            "train",
            "--algo",
            "sofs",
            "--B",
            "5",
            "--data",
            "/nonexistent/x.svm",
            "--model",
            &model,
        ],
        vec![
            "train", "--algo", "sofs", "--B", "5", "--data", &data, "--model", &model, "--bogus",
        ],
        vec![
            "train", "--algo", "nope", "--B", "5", "--data", &data, "--model", &model,
        ],
        vec![
            "train", "--algo", "sofs", "--B", "0", "--data", &data, "--model", &model,
        ],
        vec![
            "train", "--algo", "sofs", "--B", "5", "--gamma", "-1", "--data", &data, "--model", &model,
        ],
        vec!["eval", "--model", "/nonexistent/model", "--data", &data],
        vec!["sweep", "--data", &data],
    ];
    for args in cases {
        let out = ofs(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).trim().is_empty(), "{args:?}: no diagnostic");
    }
}

#[test]
fn data_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.svm");
    let model = path(dir.path(), "m");
    for content in ["+1 3:1 2:1\n", "+2 1:1\n", "+1 1:abc\n", "-1 0:1\n"] {
        fs::write(&bad, content).unwrap();
        let out = ofs(&[
            "train", "--algo", "pet", "--B", "5", "--data", &bad, "--model", &model,
        ]);
        assert_eq!(out.status.code(), Some(1), "{content:?}: {}", stderr(&out));
        let diag = stderr(&out);
        assert_eq!(diag.trim().lines().count(), 1, "{diag}");
        assert!(diag.contains("line 1"), "{diag}");
    }

    fs::write(&model, "not a model\n").unwrap();
    fs::write(&bad, "+1 1:1\n").unwrap();
    let out = ofs(&["eval", "--model", &model, "--data", &bad]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn inline_and_threaded_loaders_agree() {
    let dir = generated("6");
    let data = path(dir.path(), "train.svm");
    let threaded = path(dir.path(), "threaded.model");
    let inline = path(dir.path(), "inline.model");
    let args = |model: &str| {
        vec![
            "train", "--algo", "sofs", "--B", "25", "--data", &data, "--model", model,
        ]
        .into_iter()
        .map(str::to_owned)
        .collect::<Vec<_>>()
    };
    let a = args(&threaded);
    let b = args(&inline);
    assert_ok(&ofs(&a.iter().map(String::as_str).collect::<Vec<_>>()));
    assert_ok(&ofs_with_env(
        &b.iter().map(String::as_str).collect::<Vec<_>>(),
        &[("OFS_THREADS", "1")],
    ));
    assert_eq!(fs::read(threaded).unwrap(), fs::read(inline).unwrap());
}

#[test]
fn cv_reports_every_grid_point() {
    let dir = generated("7");
    let out = ofs(&[
        "cv",
        "--algo",
        "sofs",
        "--B",
        "30",
        "--gammas",
        "0.25,1,4",
        "--data",
        &path(dir.path(), "train.svm"),
    ]);
    assert_ok(&out);
    let text = stdout(&out);
    for g in ["gamma=0.25 ", "gamma=1 ", "gamma=4 "] {
        assert!(text.lines().any(|l| l.starts_with(g)), "{text}");
    }
    assert!(text.lines().last().unwrap().starts_with("best gamma="));
}

#[test]
fn default_sweep_writes_120_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "sweep.csv");
    let out = ofs(&[
        "sweep",
        "--algos",
        "sofs,pet,fofs",
        "--B",
        "50,100,200,400",
        "--repeats",
        "10",
        "--csv",
        &csv,
    ]);
    assert_ok(&out);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("algo,B,seed,accuracy,mistakes,sparsity_pct,train_s,total_s")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 120);
    assert!(rows.iter().all(|r| r.len() == 8));
    for algo in ["sofs", "pet", "fofs"] {
        for b in ["50", "100", "200", "400"] {
            assert_eq!(rows.iter().filter(|r| r[0] == algo && r[1] == b).count(), 10);
        }
    }
}
