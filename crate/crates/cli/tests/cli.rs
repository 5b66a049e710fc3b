use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn genbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genbound")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const REFERENCE: &str = "alphabet_size = 3\nn = 8\nsource = 0.2,0.3,0.5\nmechanism = exponential\nepsilon = 0.5\nseed = 42\nmc_samples = 5000\n";

#[test]
fn bounds_table_has_one_row_per_bound() {
    let o = genbound(&["bounds", "--alphabet-size", "2", "--n", "100", "--epsilon", "0.5", "--sigma", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "bound_id,value_nats,gen_error_value,applicable,asymptotic_only,regime_note"
    );
    let ids: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    for id in ["simple", "cover_dp", "refined_dp", "typical_dp", "gen_error_from_mi", "gen_simple"] {
        assert!(ids.contains(&id), "{id} missing from {ids:?}");
    }
    let mut unique = ids.clone();
    unique.dedup();
    assert_eq!(unique.len(), ids.len());
}

#[test]
fn simplex_cover_example() {
    let o = genbound(&["cover", "--alphabet-size", "3", "--n", "5", "--t", "2", "--kind", "simplex_grid"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "simplex_grid");
    assert!(row[4].parse::<u64>().unwrap() <= 3);
    assert_eq!(row[7], "true");
}

#[test]
fn verify_reference_config_passes_and_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment.cfg", REFERENCE);
    let a = genbound(&["verify-mi", "--config", &cfg]);
    let b = genbound(&["verify-mi", "--config", &cfg]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().last().unwrap().ends_with(",true"));

    let out = dir.path().join("sim.jsonl");
    let s = genbound(&["simulate", "--config", &cfg, "--format", "jsonl", "--output", out.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0));
    let first = fs::read(&out).unwrap();
    genbound(&["simulate", "--config", &cfg, "--format", "jsonl", "--output", out.to_str().unwrap()]);
    assert_eq!(first, fs::read(&out).unwrap());
    let record: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(record["seed"], 42);
    assert_eq!(record["pass"], true);
}

#[test]
fn mislabeled_mechanism_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "liar.cfg",
        "alphabet_size = 2\nn = 12\nsource = 0.5,0.5\nmechanism = identity\nepsilon = 0.1\n",
    );
    let o = genbound(&["verify-mi", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let failure: serde_json::Value = serde_json::from_slice(o.stderr.trim_ascii()).unwrap();
    assert_eq!(failure["status"], "fail");

    let kernel = dir.path().join("exp.csv");
    let save = genbound(&[
        "stability",
        "--alphabet-size",
        "2",
        "--n",
        "4",
        "--epsilon",
        "2",
        "--save-mechanism",
        kernel.to_str().unwrap(),
    ]);
    assert_eq!(save.status.code(), Some(0));
    let relabeled = genbound(&[
        "stability",
        "--alphabet-size",
        "2",
        "--n",
        "4",
        "--epsilon",
        "0.1",
        "--mechanism",
        kernel.to_str().unwrap(),
    ]);
    assert_eq!(relabeled.status.code(), Some(1));
    assert!(stdout(&relabeled).contains(",false"));
}

#[test]
fn input_errors_exit_two() {
    let both = genbound(&["bounds", "--alphabet-size", "2", "--n", "4", "--epsilon", "1", "--mu", "1"]);
    assert_eq!(both.status.code(), Some(2));
    let small = genbound(&["bounds", "--alphabet-size", "1", "--n", "4"]);
    assert_eq!(small.status.code(), Some(2));
    let beta = genbound(&["bounds", "--alphabet-size", "2", "--n", "4", "--sigma", "1", "--beta", "1.5"]);
    assert_eq!(beta.status.code(), Some(2));
    let seed = genbound(&["simulate", "--config", "x.cfg", "--seed", "abc"]);
    assert_eq!(seed.status.code(), Some(2));

    let capped = Command::new(env!("CARGO_BIN_EXE_genbound"))
        .args(["cover", "--alphabet-size", "3", "--n", "50", "--t", "2"])
        .env("GENBOUND_TYPE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap of 10"));
}

#[test]
fn catalog_lists_every_branch() {
    let o = genbound(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.ends_with(",false")).count(), 14);
    assert!(rows.iter().filter(|r| r.ends_with(",true")).all(|r| r.starts_with("gen_") || r.starts_with("multinomial")));
    assert!(rows.iter().any(|r| r.starts_with("cover_dp,") && r.contains("eps <= 1")));
}

#[test]
fn gaussian_stability_is_analytic() {
    let o = genbound(&["stability", "--alphabet-size", "2", "--n", "3", "--mu", "0.5"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "k,max_kl,bound,pass\n1,1.25000000000e-1,1.25000000000e-1,true\n2,5.00000000000e-1,5.00000000000e-1,true\n3,1.12500000000e0,1.12500000000e0,true\n"
    );
}
