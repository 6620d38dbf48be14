use std::process::{Command, Output};

fn fkburger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fkburger"))
        .args(args)
        .env_remove("FKBURGER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn simulate_writes_one_row_per_step_with_parity() {
    let o = fkburger(&["simulate", "--p", "0.25", "--n", "100000", "--seed", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# {") && first.contains("\"seed\":7") && first.contains("\"q\":"));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "step,D,C,symbol,y_symbol");
    assert_eq!(lines.len() - 1, 100_001);
    let mut prev_c = 0i64;
    for (k, line) in lines[1..].iter().enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0].parse::<usize>().unwrap(), k);
        let d: i64 = f[1].parse().unwrap();
        let c: i64 = f[2].parse().unwrap();
        assert_eq!((d + c).rem_euclid(2), 0, "row {k}");
        if k > 0 {
            assert_eq!((c - prev_c).abs(), 1, "row {k}");
        }
        prev_c = c;
    }
}

#[test]
fn simulate_out_writes_companions_and_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.csv");
    let o = fkburger(&["simulate", "--q", "2", "--n", "500", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("walk.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["q"], 2.0);
    let p = meta["config"]["p"].as_f64().unwrap();
    assert!((p - 2f64.sqrt() / (2.0 + 2f64.sqrt())).abs() < 1e-15);
    let m: fkburger::stack_sim::TrajectoryMeta = serde_json::from_value(meta["meta"].clone()).unwrap();
    let t = fkburger::stack_sim::Trajectory::from_csv(&csv, &m).unwrap();
    t.check_invariants().unwrap();
    assert!(std::fs::read_to_string(dir.path().join("walk.gp")).unwrap().contains("walk.csv"));
}

#[test]
fn enumerate_n1_has_four_rows() {
    let o = fkburger(&["enumerate", "--n", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "word,f_count,loops,probability");
    assert_eq!(lines.len() - 1, 4);
}

#[test]
fn identical_invocations_are_byte_identical_across_thread_counts() {
    let cases: [&[&str]; 3] = [
        &["simulate", "--p", "0.4", "--n", "2000", "--seed", "11"],
        &["estimate", "chi", "--p", "0.5", "--trials", "500", "--cutoff", "10000", "--seed", "11"],
        &["sample-map", "--q", "2", "--n", "6", "--seed", "11", "--format", "dot"],
    ];
    for args in cases {
        let base = stdout(&fkburger(args));
        assert!(!base.is_empty());
        for threads in ["1", "3"] {
            let mut with = vec!["--threads", threads];
            with.extend_from_slice(args);
            assert_eq!(stdout(&fkburger(&with)), base, "{args:?} threads {threads}");
        }
    }
}

#[test]
fn sample_map_json_embeds_config_and_a_valid_map() {
    let o = fkburger(&["sample-map", "--p", "0.3", "--n", "5", "--seed", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 2);
    let map = serde_json::to_string(&v["map"]).unwrap();
    let (m, t) = fkburger::planar_map::RootedMap::from_json(&map).unwrap();
    let word: fkburger::semigroup::Word = v["sample"]["word"].as_str().unwrap().parse().unwrap();
    assert_eq!(fkburger::planar_map::map_to_word(&m, &t).unwrap(), word);
}

#[test]
fn dot_output_parses_back() {
    let o = fkburger(&["sample-map", "--q", "1", "--n", "4", "--format", "dot"]);
    assert!(o.status.success());
    fkburger::planar_map::RootedMap::from_dot(&stdout(&o)).unwrap();
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_fkburger"));
        c.args(["simulate", "--p", "0.5", "--n", "50"]);
        match env {
            Some(s) => c.env("FKBURGER_SEED", s),
            None => c.env_remove("FKBURGER_SEED"),
        };
        stdout(&c.output().unwrap())
    };
    let a = run(Some("99"));
    assert!(a.contains("\"seed\":99"));
    assert_eq!(a, stdout(&fkburger(&["simulate", "--p", "0.5", "--n", "50", "--seed", "99"])));
    assert_ne!(a, run(None));
}

#[test]
fn estimate_records_carry_parameters() {
    let o = fkburger(&["estimate", "variance", "--p", "0", "--n", "256", "--trials", "400", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("var_d_over_n,"));
}

#[test]
fn usage_errors_exit_2_with_json() {
    for args in [
        &["simulate", "--p", "0.5", "--q", "2", "--n", "5"][..],
        &["simulate", "--n", "5"],
        &["simulate", "--p", "1.5", "--n", "5"],
        &["enumerate", "--n", "9"],
        &["estimate", "nonsense", "--p", "0.5"],
        &["sample-map", "--p", "0.5", "--n", "2", "--format", "csv"],
        &["verify", "--only", "42"],
    ] {
        let o = fkburger(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(err["error"], "usage", "{args:?}");
    }
}

#[test]
fn rejection_exhaustion_is_a_runtime_error() {
    let o = fkburger(&["sample-map", "--p", "0.5", "--n", "40", "--max-attempts", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "runtime");
}

#[test]
fn verify_runs_selected_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = fkburger(&["verify", "--only", "1,2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}
