use std::fs;
use std::process::{Command, Output};

fn qubeam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qubeam"))
        .args(args)
        .env("QUBEAM_THREADS", "2")
        .output()
        .expect("failed to run qubeam")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn roots_csv_has_four_rows() {
    let o = qubeam(&["roots", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,lambda,r_exact,r_perturbative,residual,defect");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("1,2,2.50000002"));
}

#[test]
fn measures_machine_output() {
    let o = qubeam(&["measures", "--machine", "--pol", "du"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let get = |key: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("missing {key}"))
            .to_string()
    };
    assert_eq!(get("config"), "du");
    let e_s: f64 = get("E_S").parse().unwrap();
    let closed: f64 = get("E_S_closed").parse().unwrap();
    assert!((e_s - closed).abs() < 1e-14);
}

#[test]
fn up_down_has_no_comparator() {
    let o = qubeam(&["measures", "--machine", "--pol", "ud"]);
    assert!(stdout(&o).contains("Phi=n/a"));
}

#[test]
fn state_lists_four_amplitudes() {
    let o = qubeam(&["state", "--csv", "--pol", "uu"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 5);
    let m = qubeam(&["state", "--machine"]);
    assert!(stdout(&m).contains("raw_norm="));
}

#[test]
fn block_dumps_u_v_and_q() {
    let o = qubeam(&["block"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 16 + 16 + 4);
    assert!(text.lines().any(|l| l.starts_with("v,22,21,")));
    assert!(text.lines().any(|l| l.starts_with("q,2,2,")));
}

#[test]
fn verify_passes_at_defaults() {
    let o = qubeam(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn near_resonance_exits_with_input_error() {
    let o = qubeam(&["verify", "--omega", "2497.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_values_exit_with_input_error() {
    assert_eq!(qubeam(&["measures", "--eps", "abc"]).status.code(), Some(1));
    assert_eq!(qubeam(&["measures", "--pol", "xx"]).status.code(), Some(1));
    assert_eq!(
        qubeam(&["measures", "--no-such-flag"]).status.code(),
        Some(1)
    );
    assert_eq!(qubeam(&["sweep", "--dk-min", "0"]).status.code(), Some(1));
}

#[test]
fn computation_failure_exits_with_two() {
    // coupling far too strong for the pole spacing: no bracket
    let o = qubeam(&[
        "roots", "--kappa1", "1", "--kappa2", "1.001", "--omega", "0", "--eps", "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let matrix = dir.path().join(format!("{name}.dat"));
        let o = qubeam(&[
            "sweep",
            "--dk-steps",
            "6",
            "--omega-steps",
            "5",
            "--out",
            out.to_str().unwrap(),
            "--matrix",
            matrix.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read(out).unwrap(), fs::read_to_string(matrix).unwrap())
    };
    let (a, m) = run("a.csv");
    let (b, _) = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 31);
    assert!(text.starts_with("# qubeam "));
    assert_eq!(m.split("\n\n\n").count(), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "pol = du\neps = 0.05\n").unwrap();
    let o = qubeam(&[
        "measures",
        "--machine",
        "--config",
        cfg.to_str().unwrap(),
        "--pol",
        "uu",
    ]);
    let text = stdout(&o);
    assert!(text.contains("config=uu"));
    assert!(text.contains("eps=5.0000000000000003e-2"));
}

#[test]
fn bad_config_line_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "kappa1 = 2500\nnot a setting\n").unwrap();
    let o = qubeam(&["measures", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2"));
}
