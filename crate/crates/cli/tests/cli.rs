use std::process::{Command, Output};

fn segre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segre"))
        .args(args)
        .env_remove("SEGRE_PRIME")
        .env_remove("SEGRE_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn dim_examples() {
    let o = segre(&["dim", "--deg", "2,2,2", "--double", "7"]);
    assert_eq!(code(&o), 2);
    let v = stdout_json(&o);
    assert_eq!(v["computed"], 0);
    assert_eq!(v["virtual"], -2);
    assert_eq!(v["status"], "special_candidate");

    let o = segre(&["dim", "--deg", "1,1", "--double", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["computed"], 3);

    let o = segre(&["dim", "--deg", "3,3", "--double", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["computed"], 0);
}

#[test]
fn dim_on_projective_space_and_explicit_multiplicities() {
    let o = segre(&["dim", "--deg", "4", "--projective", "3", "--mults", "2,2,2,2,2,2,2,2,2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["computed"], 0);
    let o = segre(&["dim", "--deg", "2,2", "--mults", "2,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["computed"], 8 - 3 - 1);
}

#[test]
fn critical_range_shorthands() {
    for n in ["n+", "n⁺", "plus"] {
        let o = segre(&["classify", "--deg", "2,2,2", "--double", n]);
        assert_eq!(code(&o), 2, "{n}");
    }
    let o = segre(&["classify", "--deg", "2,2,2", "--double", "n-"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["dim"], 2);
}

#[test]
fn classify_example() {
    let o = segre(&["classify", "--deg", "1,1,1,1", "--double", "3"]);
    assert_eq!(code(&o), 2);
    let v = stdout_json(&o);
    assert_eq!(v["status"], "special");
    assert_eq!(v["dim"], 1);
    assert_eq!(v["exception_family"], "AllOnesR4");
}

#[test]
fn secant_defectivity() {
    let o = segre(&["secant", "--deg", "2,2,2", "--points", "7"]);
    assert_eq!(code(&o), 2);
    let v = stdout_json(&o);
    assert_eq!((v["secant_dim"].as_i64(), v["expected_secant_dim"].as_i64()), (Some(25), Some(26)));
    let o = segre(&["secant", "--deg", "1,1", "--points", "1"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn certify_check_and_verify_round_trip() {
    let o = segre(&["certify", "--deg", "2,2,2,6", "--double", "n⁺", "--check"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("OK"));

    let o = segre(&["certify", "--deg", "1,1,1,7", "--double", "12"]);
    assert_eq!(code(&o), 0);
    let mut cert = stdout_json(&o);
    assert_eq!(cert["rule"], "simple_deg");
    let dir = std::env::temp_dir().join(format!("segre-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, &o.stdout).unwrap();
    let o = segre(&["certify", "--verify", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    cert["params"]["n2"] = serde_json::json!(9);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();
    let o = segre(&["certify", "--verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rejected at root"));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&segre(&["certify", "--verify", bad.to_str().unwrap()])), 64);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reduce_chain() {
    let o = segre(&["reduce", "--projective", "--deg", "6", "--mults", "4,4,4,2,2,2,2,2,2,2"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let last = v.as_array().unwrap().last().unwrap();
    assert_eq!(last["system"], "L_4(2^9) on P^3");

    let o = segre(&["reduce", "--deg", "1,1,1,1", "--double", "3", "--dims"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let steps = v.as_array().unwrap();
    assert_eq!(steps.len(), 4);
    assert!(steps.iter().all(|s| s["dim"] == 1));
}

#[test]
fn catalecticant_commands() {
    let o = segre(&["catalecticant", "--secant-sample", "7", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["on_secant"], true);
    assert_eq!(v["rank"], 7);

    let mut z = vec!["0"; 27];
    z[0] = "1";
    let coeffs = z.join(",");
    let o = segre(&["catalecticant", "--coeffs", &coeffs]);
    let v = stdout_json(&o);
    assert_eq!(v["matrix"][0][0], 8);
    assert_eq!(v["rank"], 1);

    assert_eq!(code(&segre(&["catalecticant", "--coeffs", "1,2,3"])), 64);
}

#[test]
fn sweep_examples() {
    let o = segre(&["sweep", "--r-min", "2", "--r-max", "2", "--d-max", "6"]);
    assert_eq!(code(&o), 0);
    let rows = stdout_json(&o);
    let flagged: Vec<String> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["report"]["status"] != "non_special")
        .map(|r| format!("{}:{}", r["degrees"], r["n"]))
        .collect();
    assert_eq!(flagged, vec!["[2,2]:3", "[2,4]:5", "[2,6]:7"]);

    let o = segre(&["sweep", "--r-min", "4", "--r-max", "4", "--d-max", "1", "--format", "tsv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("1,1,1,1\t3\t0\t0\t1\tspecial_candidate"), "{text}");

    let o = segre(&["sweep", "--r-min", "3", "--r-max", "3", "--d-min", "2", "--d-max", "2", "--cap", "10"]);
    let rows = stdout_json(&o);
    assert!(rows.as_array().unwrap().iter().all(|r| r["skipped"].is_string() && r.get("report").is_none()));
}

#[test]
fn sweep_is_byte_identical_across_thread_counts() {
    let args = ["sweep", "--r-max", "3", "--d-max", "4", "--n-policy", "all", "--seed", "17", "--format", "tsv"];
    let one = segre(&[&args[..], &["--threads", "1"]].concat());
    let many = segre(&[&args[..], &["--threads", "8"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, segre(&[&args[..], &["--threads", "1"]].concat()).stdout);
}

#[test]
fn environment_overrides_and_flags_win() {
    let run = |env_seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_segre"));
        c.args(["dim", "--deg", "2,2", "--double", "3"]).env_remove("SEGRE_PRIME");
        match env_seed {
            Some(s) => c.env("SEGRE_SEED", s),
            None => c.env_remove("SEGRE_SEED"),
        };
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        stdout_json(&c.output().unwrap())["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 0);
    assert_eq!(run(Some("5"), None), 5);
    assert_eq!(run(Some("5"), Some("9")), 9);

    let o = Command::new(env!("CARGO_BIN_EXE_segre"))
        .args(["dim", "--deg", "1,1", "--double", "1"])
        .env("SEGRE_PRIME", "1009")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&o)["prime"], 1009);
}

#[test]
fn malformed_arguments_exit_64() {
    for args in [
        &["dim", "--deg", "2,x", "--double", "3"][..],
        &["dim", "--deg", "2,2"],
        &["dim", "--deg", "2,2", "--double", "many"],
        &["--prime", "11", "dim", "--deg", "1", "--double", "0"],
        &["--prime", "12", "dim", "--deg", "1", "--double", "0"],
        &["classify", "--deg", "0,0", "--double", "1"],
        &["certify", "--deg", "0,2", "--double", "1"],
        &["frobnicate"],
        &["sweep", "--r-min", "3", "--r-max", "2"],
        &["--retries", "0", "dim", "--deg", "1", "--double", "0"],
        &["reduce", "--projective", "--deg", "6,2", "--mults", "4"],
    ] {
        let o = segre(args);
        assert_eq!(code(&o), 64, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&segre(&["--help"])), 0);
    assert_eq!(code(&segre(&["--version"])), 0);
    assert_eq!(code(&segre(&["dim", "--help"])), 0);
}
