use std::process::{Command, Output};

use intdist::monomial::{BoundReport, DegreeRow};
use intdist::spectrum::SpectrumResult;
use intdist::IntersectionDistribution;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Parses the document and checks it prints back byte for byte.
fn round_trip<T: DeserializeOwned + Serialize>(text: &str) -> T {
    let v: T = serde_json::from_str(text).expect("document parses");
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    v
}

#[test]
fn dist_of_cube_over_gf7() {
    let d: IntersectionDistribution = round_trip(&ok(&["dist", "--field", "7", "--poly", "x^3"]));
    assert_eq!(d.non_hitting_index(), 16);
}

#[test]
fn degree_table_csv_has_a_row_per_exponent() {
    let csv = ok(&["degree-table", "--field", "5^2:2,4,1", "--csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "d,exact,lower,upper,rules,sample_line");
    assert_eq!(lines.len(), 24);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
    let rows: Vec<DegreeRow> = round_trip(&ok(&["degree-table", "--field", "5^2:2,4,1", "--json"]));
    assert_eq!(rows.len(), 23);
    for (row, line) in rows.iter().zip(&lines[1..]) {
        assert!(line.starts_with(&format!("{},{},", row.d, row.degree)));
    }
}

#[test]
fn documents_round_trip() {
    let _: BoundReport = round_trip(&ok(&["bounds", "--field", "25", "--d", "17"]));
    let set = ok(&[
        "construct",
        "--family",
        "two-lines-excl",
        "--q",
        "7",
        "--t",
        "1",
        "--seed",
        "4",
        "--verify",
    ]);
    let v: serde_json::Value = serde_json::from_str(&set).unwrap();
    assert_eq!(v["matches"], true);
    let points = serde_json::to_string(&v["set"]).unwrap();
    let u: IntersectionDistribution =
        round_trip(&ok(&["set-dist", "--field", "7", "--points", &points]));
    assert_eq!(serde_json::to_value(&u).unwrap(), v["computed"]);
    let d = ok(&["dist", "--field", "9", "--poly", "x^2"]);
    let back: IntersectionDistribution = round_trip(&ok(&["convert", "--input", &d]));
    assert_eq!(back.non_hitting_index(), 36);
    let r: SpectrumResult = round_trip(&ok(&[
        "spectrum",
        "--field",
        "5",
        "--trials",
        "1000",
        "--exhaustive",
    ]));
    assert_eq!(r.values(), vec![0, 4, 6, 7, 8, 9, 10]);
}

#[test]
fn workers_do_not_change_output() {
    for args in [
        vec![
            "spectrum", "--field", "8", "--trials", "50000", "--seed", "11",
        ],
        vec!["dist", "--field", "27", "--poly", "x^5 + x"],
        vec!["degree-table", "--field", "13", "--csv"],
    ] {
        let one = ok(&[&args[..], &["--workers", "1"]].concat());
        for w in ["2", "5"] {
            assert_eq!(
                ok(&[&args[..], &["--workers", w]].concat()),
                one,
                "{args:?}"
            );
        }
    }
}

#[test]
fn spectrum_of_seven() {
    let r: SpectrumResult = round_trip(&ok(&["spectrum", "--field", "7", "--trials", "1000000"]));
    assert_eq!(
        r.values(),
        vec![0, 6, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 21]
    );
    assert_eq!(r.seed, 0);
}

#[test]
fn exit_codes() {
    let bad_flag = run(&["dist", "--field"]);
    assert_eq!(bad_flag.status.code(), Some(1));
    let bad_poly = run(&["dist", "--field", "7", "--poly", "x^"]);
    assert_eq!(bad_poly.status.code(), Some(1));
    let domain = run(&["dist", "--field", "6", "--poly", "x"]);
    assert_eq!(domain.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&domain.stdout).unwrap();
    assert_eq!(v["error"], "NonPrime");
    let swap = run(&["equiv", "swap", "--field", "11", "--f", "x^3"]);
    assert_eq!(swap.status.code(), Some(2));
    let probe = run(&["spectrum", "--field", "7", "--trials", "10", "--probe-max"]);
    assert_eq!(probe.status.code(), Some(2));
}

#[test]
fn irreducible_count_matches_enumeration() {
    for (field, gamma) in [("7", "0"), ("9", "1"), ("8", "0"), ("3", "0")] {
        let v: serde_json::Value = serde_json::from_str(&ok(&[
            "irreducible-count",
            "--field",
            field,
            "--gamma",
            gamma,
        ]))
        .unwrap();
        assert_eq!(v["count"], v["brute_force"], "{field} {gamma}");
    }
}
