use std::process::{Command, Output};

use serde_json::Value;

fn sharpcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpcheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn failing_pair_exits_one_with_prime_witness() {
    let out = sharpcheck(&["check-pair", "quad:d=-3", "ideal(2,2w)", "ideal(2,1+w)"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict:    fails"), "{text}");
    assert!(text.contains("A = I:(I:H) = ideal(2, 1+w)"), "{text}");
    assert!(text.contains("A*B = ideal(4, 2+2w)"), "{text}");
}

#[test]
fn eval_prints_canonical_literal() {
    let out = sharpcheck(&["eval", "quad:d=-3", "colon(ideal(2,2w),ideal(2,1+w))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "ideal(2, 1+w)");
}

#[test]
fn non_squarefree_order_is_an_error() {
    let out = sharpcheck(&["diagnose", "quad:d=4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("squarefree"));
}

#[test]
fn factorization_found_exits_zero() {
    let out = sharpcheck(&["check-def", "quad:d=-3", "ideal(4,2+2w)", "ideal(2,1+w)", "ideal(2,1+w)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("exhaustive-lattice"));
}

#[test]
fn dense_group_pair_fails() {
    let out = sharpcheck(&[
        "check-pair",
        "val:gens=1,sqrt2",
        "cut(4,weak)",
        "cut(sqrt3,strict)",
        "--probe-points",
        "sqrt3,4-sqrt3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("B = I:H = cut(4-sqrt3,strict)"));
}

#[test]
fn json_report_has_schema_and_fields() {
    let out = sharpcheck(&["--json", "check-pair", "val:gens=1", "cut(1,weak)", "cut(1,weak)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["check"], "sharp_pair_check");
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["witness"]["product"], "cut(1,weak)");
}

#[test]
fn sweep_json_bundles_reports() {
    let out = sharpcheck(&["--json", "--budget", "8", "sweep", "quad:d=-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    let reports = v["reports"].as_array().unwrap();
    assert!(reports.len() >= 2);
    assert!(reports.iter().all(|r| r["verdict"] == "holds"));
}

#[test]
fn restricted_sweep_refuses_non_pseudo_dedekind() {
    let out = sharpcheck(&["sweep", "val:gens=1,sqrt2", "--restricted", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pseudo-Dedekind"));

    let forced = sharpcheck(&["sweep", "val:gens=1,sqrt2", "--restricted", "--force", "--budget", "3"]);
    assert!(stdout(&forced).contains("diagnostic run"));
}

#[test]
fn force_requires_restricted() {
    let out = sharpcheck(&["sweep", "val:gens=1", "--force"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn diagnose_exits_zero_on_any_prediction() {
    let out = sharpcheck(&["diagnose", "val:gens=1,sqrt2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("predicted not sharp"));
    let out = sharpcheck(&["diagnose", "val:gens=1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("predicted sharp"));
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(sharpcheck(&["--help"]).status.code(), Some(0));
    assert_eq!(sharpcheck(&["frob"]).status.code(), Some(2));
    assert_eq!(sharpcheck(&["check-pair", "quad:d=-3", "ideal(2"]).status.code(), Some(2));
}
