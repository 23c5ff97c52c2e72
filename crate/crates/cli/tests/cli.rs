use std::path::Path;
use std::process::{Command, Output};

fn shadows(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadows")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn sample_is_deterministic_and_annotated() {
    let args = ["sample", "--ensemble", "optimal", "--n", "2", "--shots", "3", "--seed", "7"];
    let a = shadows(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&shadows(&args)));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["gate_count"].as_u64().unwrap() <= 2);
        assert!(v["depth"].is_u64());
        assert!(v["signed_permutation"]["perm"].is_array());
    }
}

#[test]
fn sample_template_sizes_and_empty_stream() {
    let o = shadows(&["sample", "--ensemble", "haar", "--n", "1", "--shots", "1", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["rotations"].as_array().unwrap().len(), 1);
    assert!(v.get("signed_permutation").is_none());
    let o = shadows(&["sample", "--ensemble", "four_angle", "--n", "3", "--shots", "1", "--seed", "1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["rotations"].as_array().unwrap().len(), 15);
    let o = shadows(&["sample", "--ensemble", "haar", "--n", "2", "--shots", "0", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["sample", "--ensemble", "bogus", "--n", "2", "--shots", "1", "--seed", "1"],
        vec!["sample", "--ensemble", "haar", "--n", "2", "--shots", "1"],
        vec!["sample", "--ensemble", "haar", "--n", "0", "--shots", "1", "--seed", "1"],
        vec!["verify", "--check", "nothing"],
        vec!["frobnicate"],
    ] {
        assert_eq!(shadows(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn estimate_vacuum_pair_is_near_i() {
    let dir = tempfile::tempdir().unwrap();
    let obs = write(dir.path(), "obs.txt", "1 2\n3 4\n1 2 3 4\n");
    let out = dir.path().join("est.csv");
    let args = [
        "estimate", "--ensemble", "two_angle", "--n", "2", "--shots", "20000", "--observables", &obs, "--seed", "5",
        "--out", out.to_str().unwrap(),
    ];
    assert_eq!(shadows(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(shadows(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    let rows: Vec<Vec<&str>> = first.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    // ⟨0|γ1γ2|0⟩ = i, ⟨0|γ1γ2γ3γ4|0⟩ = -1.
    let re = |r: &Vec<&str>| r[1].parse::<f64>().unwrap();
    let im = |r: &Vec<&str>| r[2].parse::<f64>().unwrap();
    assert!(re(&rows[0]).abs() < 0.1 && (im(&rows[0]) - 1.0).abs() < 0.1);
    assert!((re(&rows[2]) + 1.0).abs() < 0.1);
}

#[test]
fn estimate_from_state_file_with_median_of_means() {
    let dir = tempfile::tempdir().unwrap();
    // |01⟩: the second mode is occupied.
    let state = write(dir.path(), "psi.txt", "nqubits 2\n0 0\n1 0\n0 0\n0 0\n");
    let obs = write(dir.path(), "obs.txt", "3 4\n");
    let o = shadows(&[
        "estimate", "--ensemble", "haar", "--state-file", &state, "--shots", "4000", "--observables", &obs, "--seed",
        "2", "--method", "median-of-means", "--batches", "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let row: Vec<String> = stdout(&o).lines().nth(1).unwrap().split(',').map(String::from).collect();
    assert_eq!(row[3], "median_of_means");
    assert_eq!(row[4], "8");
    assert!((row[2].parse::<f64>().unwrap() + 1.0).abs() < 0.2);
}

#[test]
fn data_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let obs = write(dir.path(), "obs.txt", "1 2\n");
    let odd = write(dir.path(), "odd.txt", "1 2\n1\n");
    let bad_state = write(dir.path(), "bad.txt", "nqubits 1\n1 0\n");
    let missing = dir.path().join("missing.txt");
    let o = shadows(&["estimate", "--ensemble", "haar", "--n", "2", "--shots", "5", "--observables", &odd, "--seed", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = shadows(&[
        "estimate", "--ensemble", "haar", "--state-file", &bad_state, "--shots", "5", "--observables", &obs, "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = shadows(&[
        "estimate", "--ensemble", "haar", "--state-file", missing.to_str().unwrap(), "--shots", "5", "--observables",
        &obs, "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

fn verify_json(args: &[&str]) -> (Option<i32>, serde_json::Value) {
    let o = shadows(args);
    (o.status.code(), serde_json::from_str(stdout(&o).trim()).unwrap())
}

#[test]
fn verify_checks() {
    let (code, v) = verify_json(&["verify", "--check", "design3", "--n", "1"]);
    assert_eq!(code, Some(0));
    assert!(v["pass"].as_bool().unwrap() && v["max_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["group_size"], 4);

    let (code, v) = verify_json(&["verify", "--check", "gamma4"]);
    assert_eq!(code, Some(0));
    assert!((v["gamma"].as_f64().unwrap() - 1.5).abs() < 1e-9);

    let (code, v) = verify_json(&["verify", "--check", "lambda", "--n", "4"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["table"][1]["lambda"], "1/7");

    for check in ["sign-invariance", "matching-invariance"] {
        let (code, v) = verify_json(&["verify", "--check", check, "--n", "2", "--trials", "3", "--seed", "9"]);
        assert_eq!(code, Some(0), "{check}");
        assert_eq!(v["check"], check);
        assert_eq!(v["ensemble_size"], 192);
    }
}

#[test]
fn verify_failure_and_resource_exit_codes() {
    // A negative tolerance can never be met.
    let (code, v) = verify_json(&["verify", "--check", "design3", "--n", "1", "--tol=-1"]);
    assert_eq!(code, Some(5));
    assert_eq!(v["pass"], false);
    let o = shadows(&["verify", "--check", "design3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capped"));
    assert_eq!(shadows(&["verify", "--check", "sign-invariance", "--n", "4"]).status.code(), Some(4));
}

#[test]
fn bench_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let args = [
        "bench", "--n", "3", "--ensembles", "haar,four_angle,optimal", "--grid", "20,200", "--bootstrap", "30", "--seed",
        "11", "--out", out.to_str().unwrap(),
    ];
    assert_eq!(shadows(&args).status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(shadows(&args).status.code(), Some(0));
    assert_eq!(csv, std::fs::read_to_string(&out).unwrap());
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "ensemble,N,mean_abs_error,std_abs_error,bootstrap_size,seed");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert!(r[2].parse::<f64>().unwrap() > 0.0);
        assert!(r[3].parse::<f64>().unwrap() >= 0.0);
        assert_eq!(r[4], "30");
        assert_eq!(r[5], "11");
    }
    assert_eq!(
        shadows(&["bench", "--n", "2", "--grid", "0", "--seed", "1"]).status.code(),
        Some(2)
    );
}
