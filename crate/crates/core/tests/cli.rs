use std::path::PathBuf;

use gendef::cli::{run, Outcome};
use gendef::models::{is_lemma_violation, parse_model};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gendef(args: &[&str]) -> Outcome {
    run(std::iter::once("gendef".to_string()).chain(args.iter().map(|a| a.to_string())))
}

#[test]
fn check_dgla_accepts_sample_files() {
    for f in ["sl2.dgla", "sl2_dual.dgla", "two_cell_end.dgla", "torus1_end.dgla", "torus1_poly.dgla"] {
        let o = gendef(&["check-dgla", &data(f)]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "OK\n"), "{f}");
    }
}

#[test]
fn check_dgla_reports_mutation() {
    let dir = std::env::temp_dir().join("gendef-cli-mutation");
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(data("sl2.dgla")).unwrap().replace("bracket e f = h", "bracket e f = h + e");
    let path = dir.join("bad.dgla");
    std::fs::write(&path, text).unwrap();
    let o = gendef(&["check-dgla", path.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("FAIL jacobi"), "{}", o.stdout);
}

#[test]
fn cartan_files() {
    assert_eq!(gendef(&["check-cartan", &data("torus1.cartan")]).code, 0);
    let o = gendef(&["check-cartan", &data("sl2_shift.cartan")]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("FAIL cartan-commute (e,f)"));
}

#[test]
fn cone_mc_and_gauge() {
    assert_eq!(gendef(&["cone-mc", &data("end2.mor"), &data("mc.elem")]).code, 0);
    let bad = gendef(&["cone-mc", &data("end2.mor"), &data("not_mc.elem")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.starts_with("FAIL mc-chi"));
    let g = gendef(&["gauge", &data("end2.mor"), &data("step.gauge"), &data("mc.elem")]);
    assert_eq!(g.code, 0);
    assert!(g.stdout.ends_with("OK\n"));
    // the printed element is again accepted by cone-mc
    let dir = std::env::temp_dir().join("gendef-cli-gauge");
    std::fs::create_dir_all(&dir).unwrap();
    let body: String = g.stdout.lines().filter(|l| *l != "OK").map(|l| format!("{l}\n")).collect();
    let path = dir.join("out.elem");
    std::fs::write(&path, body).unwrap();
    assert_eq!(gendef(&["cone-mc", &data("end2.mor"), path.to_str().unwrap()]).code, 0);
}

#[test]
fn lemma_check_sources() {
    assert_eq!(gendef(&["lemma-check", "--torus", "2"]).code, 0);
    assert_eq!(gendef(&["lemma-check", "--dotsquare", "dot (0,0); square (0,0); dot (1,1)"]).code, 0);
    assert_eq!(gendef(&["lemma-check", &data("corners.model")]).code, 0);
    let o = gendef(&["lemma-check", &data("zigzag.model")]);
    assert_eq!(o.code, 1);
    // the witness is a genuine violation
    let witness = o.stdout.trim().strip_prefix("FAIL deldelbar-lemma ").unwrap();
    let m = parse_model(&std::fs::read_to_string(data("zigzag.model")).unwrap()).unwrap();
    let v = gendef::io::parse_combination(witness, m.forms.dim(), |s| m.forms.space().index_of(s)).unwrap();
    assert!(is_lemma_violation(&m.forms, &v));
}

#[test]
fn period_on_torus() {
    let o = gendef(&["period", "--torus", "1", &data("xi.elem"), "--ring", &data("dual.art"), "-m", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("[dzb1] [dz1] t\n"));
    assert!(o.stdout.contains("[dz1] [dz1] 1\n"));
    assert_eq!(o.stdout.lines().filter(|l| l.ends_with(" t")).count(), 1);
    assert!(o.stdout.ends_with("OK\n"));
}

#[test]
fn first_order_and_obstruction() {
    let o = gendef(&["first-order", &data("twisted.model")]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("ks [dot2] [dot1] 1\n"));
    let o = gendef(&["obstruction", &data("obstruction.model")]);
    assert_eq!(o.stdout, "dim 1\nkernel xi2\nOK\n");
    assert_eq!(gendef(&["obstruction", "--torus", "2"]).stdout, "dim 0\nOK\n");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(gendef(&["check-dgla", "/nonexistent/x.dgla"]).code, 2);
    assert_eq!(gendef(&["no-such-command"]).code, 2);
    assert_eq!(gendef(&["lemma-check", "--torus", "9"]).code, 2);
    assert_eq!(gendef(&["period", &data("xi.elem"), "--ring", &data("dual.art")]).code, 2);
    assert_eq!(gendef(&["lemma-check", "--torus", "1", "--dotsquare", "dot (0,0)"]).code, 2);
}

#[test]
fn selftest_is_deterministic() {
    let a = gendef(&["selftest", "--seed", "7"]);
    let b = gendef(&["selftest", "--seed", "7"]);
    assert_eq!(a, b);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert!(a.stdout.lines().all(|l| l.starts_with("OK ")));
}
