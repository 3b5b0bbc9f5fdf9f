use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eep::ppm::{encode_ppm, Frame};
use serde_json::Value;
use tempfile::TempDir;

fn eep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eep"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = eep(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn read_values(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|v| v.trim().parse().unwrap()).collect())
        .collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Deterministic pseudo-random CSV (T rows × d columns).
fn noisy_csv(seed: u64, len: usize, d: usize) -> String {
    let mut x = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut out = String::new();
    for _ in 0..len {
        let row: Vec<String> = (0..d)
            .map(|_| {
                x = x
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                format!("{:.6}", (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn frames_dir(root: &Path, name: &str, frames: &[Frame]) -> PathBuf {
    let dir = root.join(name);
    fs::create_dir_all(&dir).unwrap();
    for (i, f) in frames.iter().enumerate() {
        fs::write(dir.join(format!("f{i:03}.ppm")), encode_ppm(f)).unwrap();
    }
    dir
}

#[test]
fn fit_rank_one_sequence_has_unit_energy() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    // rows are time steps: feature [1,2] scaled over time gives a rank-1 covariance
    write(d, "a.csv", "1,2\n2,4\n3,6\n");
    write(d, "m.txt", "a.csv\n");
    let stdout = ok(
        d,
        &[
            "fit",
            "--manifest",
            "m.txt",
            "-L",
            "3",
            "-k",
            "1",
            "--out",
            "b.json",
        ],
    );
    let first = stdout
        .lines()
        .find(|l| l.trim_start().starts_with("1 "))
        .unwrap();
    let energy: f64 = first.split_whitespace().last().unwrap().parse().unwrap();
    assert!((energy - 1.0).abs() <= 1e-9, "{stdout}");
    let basis = json(&d.join("b.json"));
    assert_eq!(basis["L"], 3);
    assert_eq!(basis["k"], 1);
    assert_eq!(basis["source"], "eigen");
}

#[test]
fn merged_accumulators_match_one_shot_fit() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    for i in 0..6 {
        write(d, &format!("s{i}.csv"), &noisy_csv(i, 20, 3));
    }
    write(d, "m1.txt", "s0.csv\ns1.csv\ns2.csv\n");
    write(d, "m2.txt", "s3.csv\ns4.csv\ns5.csv\n");
    write(
        d,
        "all.txt",
        "s0.csv\ns1.csv\ns2.csv\ns3.csv\ns4.csv\ns5.csv\n",
    );
    ok(
        d,
        &[
            "fit",
            "--manifest",
            "all.txt",
            "-L",
            "8",
            "-k",
            "8",
            "--out",
            "whole.json",
        ],
    );
    ok(
        d,
        &[
            "fit",
            "--manifest",
            "m1.txt",
            "-L",
            "8",
            "-k",
            "8",
            "--out",
            "p1.json",
            "--save-cov",
            "c1.json",
        ],
    );
    ok(
        d,
        &[
            "fit",
            "--manifest",
            "m2.txt",
            "-L",
            "8",
            "-k",
            "8",
            "--out",
            "merged.json",
            "--merge",
            "c1.json",
        ],
    );
    let a = json(&d.join("whole.json"));
    let b = json(&d.join("merged.json"));
    let flat = |v: &Value| -> Vec<f64> {
        v["vectors"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|c| c.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
            .collect()
    };
    for (x, y) in flat(&a).iter().zip(flat(&b)) {
        assert!((x - y).abs() <= 1e-9, "{x} vs {y}");
    }
}

#[test]
fn full_basis_reconstructs_exactly() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "a.csv", &noisy_csv(1, 9, 2));
    write(d, "b.csv", &noisy_csv(2, 9, 2));
    ok(
        d,
        &[
            "fit", "a.csv", "b.csv", "-L", "9", "-k", "9", "--out", "b.json",
        ],
    );
    let out = eep(
        d,
        &[
            "--format", "json", "report", "a.csv", "b.csv", "--basis", "b.json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let errors: Vec<f64> = rows.iter().map(|r| r["error"].as_f64().unwrap()).collect();
    assert!(errors.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(errors[8].abs() <= 1e-9);
    for r in rows {
        assert!(r["relative_gap"].as_f64().unwrap() <= 1e-6);
    }
    assert_eq!(report["consistent"], true);
}

#[test]
fn report_flags_foreign_corpus() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "a.csv", &noisy_csv(1, 9, 2));
    write(d, "other.csv", &noisy_csv(5, 9, 2));
    ok(
        d,
        &["fit", "a.csv", "-L", "9", "-k", "9", "--out", "b.json"],
    );
    let out = eep(
        d,
        &[
            "report",
            "other.csv",
            "--basis",
            "b.json",
            "--k-range",
            "1-3",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fit_rejects_k_above_length() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "a.csv", "1\n2\n");
    assert_eq!(
        eep(
            d,
            &["fit", "a.csv", "-L", "2", "-k", "3", "--out", "b.json"]
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn unreadable_sequence_is_a_data_error() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "bad.csv", "1,x\n");
    let out = eep(
        d,
        &["fit", "bad.csv", "-L", "2", "-k", "1", "--out", "b.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv"));
}

#[test]
fn pool_examples() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "const.csv", "2,3\n2,3\n2,3\n2,3\n");
    ok(
        d,
        &["pool", "const.csv", "--method", "mean", "--out", "mean.csv"],
    );
    assert_eq!(read_values(&d.join("mean.csv")), vec![vec![2.0, 3.0]]);

    ok(
        d,
        &[
            "pool",
            "const.csv",
            "--method",
            "dct",
            "--indices",
            "2",
            "--normalize",
            "--out",
            "dct.csv",
        ],
    );
    for v in &read_values(&d.join("dct.csv"))[0] {
        assert!(v.abs() <= 1e-12);
    }

    write(d, "r.csv", "1\n0\n0\n");
    ok(
        d,
        &["pool", "r.csv", "--method", "rank", "--out", "rank.csv"],
    );
    let v = read_values(&d.join("rank.csv"))[0][0];
    assert!((v + 4.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn pool_windows_and_concat() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "s.csv", &noisy_csv(3, 32, 2));
    ok(
        d,
        &[
            "pool",
            "s.csv",
            "--method",
            "dct",
            "--indices",
            "1-3",
            "--window",
            "16",
            "--concat",
            "--out",
            "w.csv",
            "--provenance",
            "p.json",
        ],
    );
    let rows = read_values(&d.join("w.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 6));
    let prov = json(&d.join("p.json"));
    let starts: Vec<u64> = prov
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["provenance"]["window"]["start"].as_u64().unwrap())
        .collect();
    assert_eq!(starts, [0, 8, 16]);
}

#[test]
fn pool_basis_length_mismatch_names_file() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "s.csv", &noisy_csv(3, 20, 2));
    ok(
        d,
        &["fit", "s.csv", "-L", "10", "-k", "2", "--out", "b.json"],
    );
    let out = eep(
        d,
        &[
            "pool", "s.csv", "--basis", "b.json", "--window", "16", "--out", "o.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("b.json") && err.contains("16"), "{err}");
}

#[test]
fn pool_eepb_round_trips_exactly() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "s.csv", &noisy_csv(4, 12, 3));
    ok(d, &["pool", "s.csv", "--method", "rank", "--out", "a.csv"]);
    ok(
        d,
        &[
            "--format", "eepb", "pool", "s.csv", "--method", "rank", "--out", "a.eepb",
        ],
    );
    let bytes = fs::read(d.join("a.eepb")).unwrap();
    assert_eq!(&bytes[..4], b"EEPB");
    let csv = read_values(&d.join("a.csv"));
    let vals: Vec<f64> = bytes[12..]
        .chunks(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    assert_eq!(vals, csv[0]);
}

#[test]
fn image_examples() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let frame = Frame::new(2, 1, vec![10, 20, 30, 40, 50, 60]).unwrap();
    let clip = frames_dir(d, "still", &[frame.clone(), frame.clone()]);

    let stdout = ok(
        d,
        &[
            "image",
            "--frames",
            clip.to_str().unwrap(),
            "--method",
            "dynamic",
            "--out",
            "dyn",
        ],
    );
    assert!(stdout.contains("still_w0_b1.ppm"));
    let img = fs::read(d.join("dyn/still_w0_b1.ppm")).unwrap();
    assert!(img.ends_with(&[128; 6]));

    ok(
        d,
        &[
            "image",
            "--frames",
            clip.to_str().unwrap(),
            "--method",
            "mean",
            "--raw",
            "--out",
            "mean",
        ],
    );
    let raw = fs::read(d.join("mean/still_w0_b1.eepb")).unwrap();
    let vals: Vec<f64> = raw[12..]
        .chunks(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    assert_eq!(vals, [10.0, 20.0, 30.0, 40.0, 50.0, 60.0]);
}

#[test]
fn image_global_equals_single_window() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let frames: Vec<Frame> = (0..16u8)
        .map(|t| Frame::new(2, 2, (0..12).map(|i| t * 10 + i).collect()).unwrap())
        .collect();
    let clip = frames_dir(d, "ramp", &frames);
    let dir = clip.to_str().unwrap();
    ok(
        d,
        &[
            "image", "--frames", dir, "--method", "dynamic", "--global", "--out", "g",
        ],
    );
    ok(
        d,
        &[
            "image", "--frames", dir, "--method", "dynamic", "--window", "16", "--out", "w",
        ],
    );
    let listing = |p: &str| {
        let mut v: Vec<String> = fs::read_dir(d.join(p))
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        v.sort();
        v
    };
    assert_eq!(listing("g"), ["ramp_w0_b1.ppm"]);
    assert_eq!(listing("w"), ["ramp_w0_b1.ppm"]);
    assert_eq!(
        fs::read(d.join("g/ramp_w0_b1.ppm")).unwrap(),
        fs::read(d.join("w/ramp_w0_b1.ppm")).unwrap()
    );
}

#[test]
fn malformed_frame_is_reported() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let dir = d.join("broken");
    fs::create_dir_all(&dir).unwrap();
    fs::write(dir.join("a.ppm"), b"P6\n2 2\n255\n\x01").unwrap();
    let out = eep(
        d,
        &[
            "image", "--frames", "broken", "--method", "mean", "--out", "o",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a.ppm"));
}

#[test]
fn bench_examples() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let args = [
        "bench",
        "--generator",
        "reversal",
        "--noise",
        "0",
        "--per-class",
        "20",
        "--method",
        "mean,dct:2",
        "--out",
    ];
    let mut first = args.to_vec();
    first.push("r1.json");
    let mut second = args.to_vec();
    second.push("r2.json");
    ok(d, &first);
    ok(d, &second);
    let report = json(&d.join("r1.json"));
    assert_eq!(report["accuracy"]["dct:2"].as_f64(), Some(1.0));
    assert_eq!(
        fs::read(d.join("r1.json")).unwrap(),
        fs::read(d.join("r2.json")).unwrap()
    );

    let out = eep(d, &["bench", "--method", "median"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "a.csv", "1\n2\n");
    assert_eq!(
        eep(d, &["pool", "a.csv", "--out", "o.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(
        eep(
            d,
            &[
                "pool",
                "a.csv",
                "--method",
                "rank",
                "--indices",
                "2",
                "--out",
                "o.csv"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(eep(d, &["frobnicate"]).status.code(), Some(2));
    write(d, "empty.txt", "# nothing\n");
    assert_eq!(
        eep(
            d,
            &[
                "fit",
                "--manifest",
                "empty.txt",
                "-L",
                "2",
                "-k",
                "1",
                "--out",
                "b.json"
            ]
        )
        .status
        .code(),
        Some(1)
    );
}
