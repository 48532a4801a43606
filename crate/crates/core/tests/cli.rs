use std::fs;

use skinfx::cli::main_with_args;

fn run(args: &[&str]) -> u8 {
    let mut v = vec!["skinfx"];
    v.extend_from_slice(args);
    main_with_args(v)
}

fn numbers(v: &serde_json::Value, out: &mut Vec<String>) {
    match v {
        serde_json::Value::Number(n) => out.push(n.to_string()),
        serde_json::Value::Array(a) => a.iter().for_each(|x| numbers(x, out)),
        serde_json::Value::Object(m) => m.values().for_each(|x| numbers(x, out)),
        _ => {}
    }
}

#[test]
fn impedance_json_is_deterministic_with_17_digits() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["impedance", "--omega-tau", "0.5", "--Q", "1e-3", "--alpha", "10", "--out"];
    assert_eq!(run(&[&args[..], &[a.to_str().unwrap()]].concat()), 0);
    assert_eq!(run(&[&args[..], &[b.to_str().unwrap()]].concat()), 0);
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());

    let v: serde_json::Value = serde_json::from_slice(&text).unwrap();
    assert_eq!(v["kappa"], 1);
    assert_eq!(v["zeros"].as_array().unwrap().len(), 2);
    let mut nums = Vec::new();
    numbers(&v, &mut nums);
    for n in nums.iter().filter(|n| n.contains('e')) {
        let mantissa = n.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{n}");
        assert!(n.parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn plasma_parameters_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let code = run(&["spectrum", "--gamma", "0.001", "--eps", "0.002", "--vtc", "0.001", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    let n = v["n_zeros"].as_u64().unwrap();
    // N counts the mirrored zeros too
    assert_eq!(v["zeros"].as_array().unwrap().len() as u64 * 2, n);
    assert_eq!(n as i64, 2 + 2 * v["kappa"].as_i64().unwrap());
}

#[test]
fn argument_errors_exit_one() {
    assert_eq!(run(&["impedance", "--omega-tau", "0", "--Q", "0", "--alpha", "1"]), 1);
    assert_eq!(run(&["impedance", "--omega-tau", "0.5", "--Q", "1e-3"]), 1);
    assert_eq!(run(&["impedance", "--omega-tau", "0.5", "--Q", "1e-3", "--alpha", "1", "--gamma", "1"]), 1);
    assert_eq!(run(&["impedance", "--omega-tau", "0.5", "--Q", "1e-3", "--alpha", "-1"]), 1);
    assert_eq!(run(&["curves", "--which", "L"]), 1);
    assert_eq!(run(&["curves", "--which", "lambda", "--format", "json"]), 1);
    assert_eq!(run(&["no-such-command"]), 1);
}

#[test]
fn profile_starts_at_unit_field_and_decays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let code = run(&[
        "profile", "--omega-tau", "0.1", "--Q", "1e-3", "--alpha", "1", "--xmax", "30", "--points", "61", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["x", "re_e", "im_e"]);
    let rows: Vec<Vec<f64>> = r.records().map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 61);
    assert!((rows[0][1] - 1.0).abs() < 1e-10 && rows[0][2].abs() < 1e-10);
    let last = rows.last().unwrap();
    assert!(last[1].hypot(last[2]) < 1e-4);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "omega-tau = 1\nQ = 1e-3\nalpha = 0.1\n").unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(run(&["impedance", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", a.to_str().unwrap()]), 0);
    assert_eq!(
        run(&["impedance", "--omega-tau", "1", "--Q", "1e-3", "--alpha", "0.1", "--format", "csv", "--out", b.to_str().unwrap()]),
        0
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("re_z,im_z,re_e_prime_0,im_e_prime_0,kappa\n"));
}

#[test]
fn domain_sweep_matches_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    assert_eq!(run(&["domain", "--vc", "0.001", "--grid", "20", "--extent", "3", "--out", out.to_str().unwrap()]), 0);
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["gamma", "eps", "delta1", "delta2", "class", "kappa"]);
    let (mut plus, mut minus) = (0, 0);
    for rec in r.records() {
        let rec = rec.unwrap();
        match (&rec[4], &rec[5]) {
            ("delta_plus", k) => {
                plus += 1;
                assert_eq!(k, "1");
            }
            ("delta_minus", k) => {
                minus += 1;
                assert_eq!(k, "0");
            }
            _ => {}
        }
    }
    assert_eq!(plus + minus, 400);
    assert!(plus > 0 && minus > 0);
}

#[test]
fn validate_passes_on_the_default_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.txt");
    assert_eq!(run(&["validate", "--out", out.to_str().unwrap()]), 0);
    let text = fs::read_to_string(out).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_reports_failure_with_exit_three() {
    // an absurd tolerance on the oracle row must fail
    assert_eq!(run(&["validate", "--tol", "1e-12", "--out", "/dev/null"]), 3);
}
