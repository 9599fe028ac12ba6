use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphere-rigidity")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_csv_n4() {
    let o = run(&["spectrum", "--dim", "4", "--jmax", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,j,q,branch,recursion_value,closed_form_value,equal");
    assert_eq!(lines.len(), 10);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    assert!(lines.contains(&"4,0,2,T0,2880,2880,true"));
}

#[test]
fn spectrum_n2_has_no_table() {
    let o = run(&["spectrum", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("universally zero"));
    assert!(!out.contains("recursion_value"));
}

#[test]
fn spectrum_n3_branches_have_opposite_signs() {
    let o = run(&["spectrum", "--dim", "3", "--jmax", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("3,0,2,T0+,144,144,true"));
    assert!(out.contains("3,0,-2,T0-,-144,-144,true"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["spectrum", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(run(&["qsymbol", "--dim", "5"]).status.code(), Some(2));
    assert_eq!(run(&["greens", "--dim", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "confgroup", "--dim", "4"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn traces_print_exact_values() {
    let o = run(&["traces", "--kmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for s in ["3/128·π²", "-5/2048·π²", "-1/4·π²", "3/16·π²"] {
        assert!(out.contains(s), "missing {s}");
    }
}

#[test]
fn qsymbol_line() {
    let o = run(&["qsymbol", "--dim", "4", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("σ₄(H) = −|ξ|⁴/4 · Id : PASS (exact)"));
}

#[test]
fn signs_mark_inapplicable_rows() {
    let o = run(&["signs", "--nmax", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 4 * 4);
    assert_eq!(out.matches("NOT-APPLICABLE").count(), 8);
    assert!(out.contains("local maximum at the round S^3"));
}

#[test]
fn json_envelope() {
    let o = run(&["greens", "--dim", "5", "--profile", "l2", "--points", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["command", "parameters", "results", "checks", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "greens");
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 4);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "PASS");
        assert!(c["residual"].is_number() && c["tolerance"].is_number());
    }
}

#[test]
fn failing_check_exits_1_and_reports_residual() {
    let o = run(&["greens", "--dim", "3", "--profile", "l2", "--tol-quad", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let fail = v["checks"].as_array().unwrap().iter().find(|c| c["status"] == "FAIL").unwrap();
    assert!(fail["residual"].as_f64().unwrap() > 0.0);
    assert_eq!(fail["tolerance"].as_f64(), Some(0.0));
}

#[test]
fn verify_suites() {
    for s in ["spectrum", "ktypes", "symbols", "qcurv"] {
        assert_eq!(run(&["verify", "--suite", s]).status.code(), Some(0), "suite {s}");
    }
    let o = run(&["verify", "--suite", "confgroup", "--dim", "2", "--order", "24"]);
    assert_eq!(o.status.code(), Some(0));
    // the numeric trace ratio is not constant in k, so this suite reports a failure
    let o = run(&["verify", "--suite", "greens"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("regular-part ratio constant across k = 1, 2 : FAIL"));
}

#[test]
fn output_is_deterministic() {
    let args = ["qsymbol", "--dim", "6", "--samples", "5", "--seed", "7", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["verify", "--suite", "confgroup", "--dim", "3", "--order", "16", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
