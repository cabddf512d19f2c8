//! CLI acceptance: every subcommand run twice on its fixture spec produces
//! byte-identical artifacts, plus exit-code and validation checks.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_roughlab")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_into(cmd: &str, spec: &Path, out: &Path) -> BTreeMap<String, Vec<u8>> {
    let status = Command::new(bin())
        .arg(cmd)
        .arg("--spec")
        .arg(spec)
        .arg("--out")
        .arg(out)
        .status()
        .expect("spawn roughlab");
    assert!(status.success(), "{cmd} failed on {}", spec.display());
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(out).unwrap() {
        let entry = entry.unwrap();
        files.insert(
            entry.file_name().to_string_lossy().into_owned(),
            std::fs::read(entry.path()).unwrap(),
        );
    }
    assert!(!files.is_empty(), "{cmd} produced no artifacts");
    files
}

#[test]
fn criterion_11_cli_determinism() {
    let start = std::time::Instant::now();
    let tmp = std::env::temp_dir().join(format!("roughlab-det-{}", std::process::id()));
    for (cmd, spec) in [
        ("pvar", "pvar.json"),
        ("area", "area.json"),
        ("integrate", "integrate.json"),
        ("lacunary", "lacunary.json"),
        ("probe", "probe.json"),
        ("constants", "constants.json"),
    ] {
        let out1 = tmp.join(format!("{cmd}-1"));
        let out2 = tmp.join(format!("{cmd}-2"));
        let a = run_into(cmd, &fixture(spec), &out1);
        let b = run_into(cmd, &fixture(spec), &out2);
        assert_eq!(
            a.keys().collect::<Vec<_>>(),
            b.keys().collect::<Vec<_>>(),
            "{cmd}: artifact sets differ"
        );
        for (name, bytes) in &a {
            assert_eq!(
                bytes, &b[name],
                "{cmd}: artifact {name} is not byte-identical"
            );
        }
    }
    let _ = std::fs::remove_dir_all(&tmp);
    println!(
        "[PASS] criterion 11: CLI determinism, byte-identical artifacts ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn pvar_fixture_value_is_pinned() {
    let tmp = std::env::temp_dir().join(format!("roughlab-pin-{}", std::process::id()));
    let files = run_into("pvar", &fixture("pvar.json"), &tmp);
    let summary = String::from_utf8(files["pvar.csv"].clone()).unwrap();
    // triangle loop at p = 2: brute-force fixture value is exactly 2
    let line = summary.lines().nth(1).unwrap();
    let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 2.0).abs() < 1e-12, "{line}");
    let _ = std::fs::remove_dir_all(&tmp);
}

#[test]
fn lacunary_fixture_boundary_rows_alternate_sign() {
    let tmp = std::env::temp_dir().join(format!("roughlab-lac-{}", std::process::id()));
    let files = run_into("lacunary", &fixture("lacunary.json"), &tmp);
    let table = String::from_utf8(files["lacunary.csv"].clone()).unwrap();
    let rows: Vec<(u64, f64, usize)> = table
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    // block-boundary rows: value at l2 = 38 negative, at the last boundary positive
    let at_l2 = rows.iter().find(|r| r.0 == 38).expect("row at l2");
    assert!(at_l2.1 < 0.0);
    let last = rows.last().unwrap();
    assert!(last.1 > 0.0, "last boundary row {last:?}");
    let _ = std::fs::remove_dir_all(&tmp);
}

#[test]
fn exit_codes_for_validation_and_size_refusal() {
    let tmp = std::env::temp_dir().join(format!("roughlab-exit-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();

    let bad_p = tmp.join("bad_p.json");
    std::fs::write(
        &bad_p,
        r#"{"command": "pvar", "input": {"kind": "triangle"}, "parameters": {"p": 0.5}}"#,
    )
    .unwrap();
    let status = Command::new(bin())
        .args(["pvar", "--spec"])
        .arg(&bad_p)
        .arg("--out")
        .arg(&tmp)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let too_big = tmp.join("too_big.json");
    std::fs::write(
        &too_big,
        r#"{"command": "pvar", "input": {"kind": "monomial", "power_x": 1.0, "samples": 999999}, "parameters": {"p": 2.0}}"#,
    )
    .unwrap();
    let status = Command::new(bin())
        .args(["pvar", "--spec"])
        .arg(&too_big)
        .arg("--out")
        .arg(&tmp)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // command mismatch between argv and spec
    let status = Command::new(bin())
        .args(["area", "--spec"])
        .arg(fixture("pvar.json"))
        .arg("--out")
        .arg(&tmp)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let _ = std::fs::remove_dir_all(&tmp);
}

#[test]
fn csv_round_trips_through_the_cli() {
    let tmp = std::env::temp_dir().join(format!("roughlab-csv-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    // write a path CSV, then run pvar against it
    let path = roughlab_core::path::SampledPath::from_points(
        vec![0.0, 0.5, 1.0],
        &[vec![0.0], vec![1.0], vec![0.0]],
    )
    .unwrap();
    let mut buf = Vec::new();
    path.write_csv(&mut buf).unwrap();
    std::fs::write(tmp.join("zigzag.csv"), &buf).unwrap();
    let spec = tmp.join("zig.json");
    std::fs::write(
        &spec,
        r#"{"command": "pvar", "input": {"kind": "csv", "path": "zigzag.csv"}, "parameters": {"p": 2.0}}"#,
    )
    .unwrap();
    let files = run_into("pvar", &spec, &tmp.join("out"));
    let summary = String::from_utf8(files["pvar.csv"].clone()).unwrap();
    let value: f64 = summary
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 2f64.sqrt()).abs() < 1e-12);
    let _ = std::fs::remove_dir_all(&tmp);
}
