use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use gw_core::{parse_rat, parse_report, rational::ratio};
use tempfile::NamedTempFile;

const CONIFOLD: &str = "name resolved conifold\nspace 1\nbundle concave 1\nbundle concave 1\n";
const QUINTIC: &str = "name quintic\nspace 4\nbundle convex 5\n";

fn spec_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], spec: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwmirror"))
        .args(args)
        .arg("--spec")
        .arg(spec)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quintic_degree_one_is_2875() {
    let f = spec_file(QUINTIC);
    let o = run(&["compute", "--max-degree", "1"], f.path());
    assert_eq!(o.status.code(), Some(0));
    let r = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.invariants[0].k, "2875/1");
    assert_eq!(r.invariants[0].oracle.as_deref(), Some("2875/1"));
    assert_eq!(r.invariants[0].matches, Some(true));
}

#[test]
fn conifold_multiple_covers() {
    let f = spec_file(CONIFOLD);
    let o = run(&["compute", "--max-degree", "6"], f.path());
    assert_eq!(o.status.code(), Some(0));
    let r = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.invariants.len(), 6);
    for e in &r.invariants {
        let d = e.degree[0] as i64;
        assert_eq!(parse_rat(&e.k).unwrap(), ratio(1, d * d * d));
    }
    assert!(
        r.mirror_map.f.alpha.is_empty() && r.mirror_map.f.x.is_empty() && r.mirror_map.g.is_empty()
    );
}

#[test]
fn report_round_trips_exactly() {
    let f = spec_file("space 2\nbundle concave 3\n");
    let text = stdout(&run(&["compute", "--max-degree", "3"], f.path()));
    let r = parse_report(&text).unwrap();
    assert_eq!(r.to_json() + "\n", text);
    assert_eq!(r.invariants[1].k, "-45/8");
    assert_eq!(r.invariants[2].k, "244/9");
}

#[test]
fn output_is_byte_identical() {
    let f = spec_file(QUINTIC);
    for fmt in ["json", "csv"] {
        let a = run(&["compute", "--max-degree", "2", "--format", fmt], f.path());
        let b = run(&["compute", "--max-degree", "2", "--format", fmt], f.path());
        assert_eq!(a.stdout, b.stdout, "{fmt}");
    }
    let a = run(&["verify", "--max-degree", "2"], f.path());
    let b = run(&["verify", "--max-degree", "2"], f.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let f = spec_file(CONIFOLD);
    let plain = stdout(&run(&["compute", "--max-degree", "2"], f.path()));
    assert!(!plain.contains("timing_ms"));
    let timed = stdout(&run(
        &["compute", "--max-degree", "2", "--timing"],
        f.path(),
    ));
    assert!(parse_report(&timed).unwrap().timing_ms.is_some());
}

#[test]
fn csv_has_one_row_per_degree() {
    let f = spec_file(CONIFOLD);
    let o = run(
        &["compute", "--max-degree", "3", "--format", "csv"],
        f.path(),
    );
    assert_eq!(
        stdout(&o),
        "d1,K,oracle,match\n1,1/1,1/1,true\n2,1/8,1/8,true\n3,1/27,,\n"
    );
}

#[test]
fn product_base_csv() {
    let f = spec_file("space 1\nspace 1\nbundle concave 2 2\n");
    let o = run(
        &["compute", "--max-degree", "2", "--format", "csv"],
        f.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("d1,d2,K,oracle,match\n"));
    assert!(text.contains("1,1,-4/1,,\n"));
}

#[test]
fn euler_route_matches_chern_route() {
    let f = spec_file(QUINTIC);
    let chern = parse_report(&stdout(&run(
        &["compute", "--max-degree", "2", "--chern"],
        f.path(),
    )))
    .unwrap();
    let euler = parse_report(&stdout(&run(
        &["compute", "--max-degree", "2", "--euler"],
        f.path(),
    )))
    .unwrap();
    assert_eq!(euler.route, "euler");
    let ks = |r: &gw_core::RunReport| r.invariants.iter().map(|e| e.k.clone()).collect::<Vec<_>>();
    assert_eq!(ks(&chern), ks(&euler));
}

#[test]
fn bad_specs_exit_2_without_stdout() {
    for text in [
        "space 4\nbundle convex 4\n",
        "space 4\nbundle sideways 5\n",
        "",
        "space 3\nbundle convex 5\n",
    ] {
        let f = spec_file(text);
        let o = run(&["compute", "--max-degree", "1"], f.path());
        assert_eq!(o.status.code(), Some(2), "{text:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let o = run(
        &["compute", "--max-degree", "1"],
        Path::new("/nonexistent/spec"),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn balance_violation_reports_factor() {
    let f = spec_file("space 4\nbundle convex 4\n");
    let o = run(&["verify", "--max-degree", "1"], f.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("factor 0"));
}

#[test]
fn euler_route_with_s_positive_is_rejected() {
    let f = spec_file("space 3\nbundle convex 4\n");
    let o = run(&["compute", "--max-degree", "1", "--euler"], f.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn oracle_prints_per_sample_agreement() {
    let f = spec_file(CONIFOLD);
    let o = run(
        &["oracle", "--degree", "2", "--samples", "4", "--seed", "7"],
        f.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("degree 2: 1/8\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("sample ")).count(), 4);
    assert!(text.ends_with("agreement: 4/4 samples\n"));
}

#[test]
fn oracle_degree_three_is_unsupported() {
    let f = spec_file(QUINTIC);
    let o = run(&["oracle", "--degree", "3"], f.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn oracle_rejects_product_bases() {
    let f = spec_file("space 1\nspace 1\nbundle concave 2 2\n");
    let o = run(&["oracle", "--degree", "1"], f.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_on_conifold_and_quintic() {
    for (text, d) in [(CONIFOLD, "6"), (QUINTIC, "2")] {
        let f = spec_file(text);
        let o = run(&["verify", "--max-degree", d], f.path());
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        let out = stdout(&o);
        assert!(out.lines().all(|l| l.starts_with("PASS ")));
        assert!(out.contains("PASS oracle_degree_2\n"));
        assert!(out.contains("PASS x_to_zero\n"));
        assert!(out.contains("PASS truncation_stability\n"));
    }
}

#[test]
fn shipped_specs_compute() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["compute", "--max-degree", "2"], &path);
        assert_eq!(o.status.code(), Some(0), "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 5);
}
