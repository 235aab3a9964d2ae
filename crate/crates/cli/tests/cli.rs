//! End-to-end tests of the `csc` binary.

use csc_core::io;
use csc_core::signal::{standard_normal, Dictionary, Image};
use ndarray::{Array2, Array3};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_csc"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn csc");
    assert!(
        out.status.success(),
        "csc {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> i32 {
    bin()
        .args(args)
        .output()
        .expect("spawn csc")
        .status
        .code()
        .unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct Fixture {
    dir: tempfile::TempDir,
    image: PathBuf,
    dict: PathBuf,
}

fn fixture(h: usize, w: usize, m: usize, fh: usize, fw: usize) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let data: Vec<f64> = (0..h * w)
        .map(|i| {
            let (r, c) = (i / w, i % w);
            0.5 + 0.25 * ((r / 4 + c / 4) % 2) as f64 + 0.02 * standard_normal(42, i as u64)
        })
        .collect();
    let image = dir.path().join("clean.cimg");
    io::write_image(
        &image,
        &Image::new(Array2::from_shape_vec((h, w), data).unwrap()).unwrap(),
    )
    .unwrap();
    let fdata: Vec<f64> = (0..m * fh * fw)
        .map(|i| standard_normal(7, i as u64))
        .collect();
    let dict = dir.path().join("dict.cdict");
    io::write_dictionary(
        &dict,
        &Dictionary::new(Array3::from_shape_vec((m, fh, fw), fdata).unwrap(), false)
            .unwrap()
            .normalize()
            .unwrap(),
    )
    .unwrap();
    Fixture { dir, image, dict }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn addnoise_zero_sigma_is_identity_and_seeds_are_deterministic() {
    let f = fixture(16, 16, 2, 3, 3);
    let out0 = f.dir.path().join("zero.cimg");
    run_ok(&[
        "addnoise",
        p(&f.image),
        p(&out0),
        "--sigma",
        "0",
        "--seed",
        "1",
    ]);
    assert_eq!(
        io::read_image(&out0).unwrap().data(),
        io::read_image(&f.image).unwrap().data()
    );

    let a = f.dir.path().join("a.cimg");
    let b = f.dir.path().join("b.cimg");
    for out in [&a, &b] {
        run_ok(&[
            "addnoise",
            p(&f.image),
            p(out),
            "--sigma",
            "5e-2",
            "--seed",
            "9",
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = f.dir.path().join("c.cimg");
    run_ok(&[
        "addnoise",
        p(&f.image),
        p(&c),
        "--sigma",
        "5e-2",
        "--seed",
        "10",
    ]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn psnr_and_convert_round_trip() {
    let f = fixture(12, 12, 2, 3, 3);
    let out = run_ok(&["psnr", p(&f.image), p(&f.image)]);
    assert!(stdout_of(&out).contains("psnr_db inf"));

    let pgm = f.dir.path().join("x.pgm");
    let back = f.dir.path().join("back.cimg");
    run_ok(&["convert", p(&f.image), p(&pgm)]);
    run_ok(&["convert", p(&pgm), p(&back)]);
    let orig = io::read_image(&f.image).unwrap();
    let rt = io::read_image(&back).unwrap();
    for (a, b) in orig.data().iter().zip(rt.data().iter()) {
        assert!((a - b).abs() <= 0.5 / 255.0 + 1e-12);
    }
}

#[test]
fn denoise_smoke_writes_metrics_and_manifest() {
    let f = fixture(16, 16, 3, 3, 3);
    let noisy = f.dir.path().join("noisy.cimg");
    run_ok(&["addnoise", p(&f.image), p(&noisy), "--seed", "3"]);
    let out = f.dir.path().join("den.cimg");
    run_ok(&[
        "denoise",
        p(&noisy),
        "--dict",
        p(&f.dict),
        "--method",
        "l1",
        "--lambda",
        "0.1",
        "-o",
        p(&out),
        "--reference",
        p(&f.image),
    ]);
    let metrics =
        std::fs::read_to_string(f.dir.path().join("den.metrics.csv")).unwrap();
    let mut lines = metrics.split("\r\n");
    assert!(lines.next().unwrap().starts_with("method,image,lambda"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("l1,noisy,0.1,"), "row {row}");

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(f.dir.path().join("den.cimg.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "denoise");
    assert!(manifest["argv"].as_array().unwrap().len() > 5);
}

#[test]
fn manifest_replay_reproduces_bytes() {
    let f = fixture(16, 16, 2, 3, 3);
    let noisy = f.dir.path().join("n.cimg");
    run_ok(&["addnoise", p(&f.image), p(&noisy), "--seed", "4"]);
    let out = f.dir.path().join("d.cimg");
    run_ok(&[
        "denoise",
        p(&noisy),
        "--dict",
        p(&f.dict),
        "--method",
        "l12",
        "--lambda",
        "0.05",
        "--max-iter",
        "40",
        "-o",
        p(&out),
    ]);
    let first = std::fs::read(&out).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(f.dir.path().join("d.cimg.manifest.json")).unwrap(),
    )
    .unwrap();
    let argv: Vec<String> = manifest["argv"]
        .as_array()
        .unwrap()
        .iter()
        .skip(1) // program path
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let st = bin().args(&argv).status().unwrap();
    assert!(st.success());
    assert_eq!(std::fs::read(&out).unwrap(), first);
}

#[test]
fn single_point_grid_matches_fixed_lambda() {
    let f = fixture(16, 16, 2, 3, 3);
    let noisy = f.dir.path().join("n.cimg");
    run_ok(&["addnoise", p(&f.image), p(&noisy), "--seed", "5"]);
    let fixed = f.dir.path().join("fixed.cimg");
    let grid = f.dir.path().join("grid.cimg");
    run_ok(&[
        "denoise",
        p(&noisy),
        "--dict",
        p(&f.dict),
        "--method",
        "l1",
        "--lambda",
        "0.07",
        "-o",
        p(&fixed),
    ]);
    run_ok(&[
        "denoise",
        p(&noisy),
        "--dict",
        p(&f.dict),
        "--method",
        "l1",
        "--grid",
        "--grid-count",
        "1",
        "--grid-lo",
        "0.07",
        "--grid-hi",
        "0.07",
        "--reference",
        p(&f.image),
        "-o",
        p(&grid),
    ]);
    assert_eq!(std::fs::read(&fixed).unwrap(), std::fs::read(&grid).unwrap());
}

#[test]
fn nested_and_nonneg_report_close_functionals() {
    let f = fixture(8, 8, 2, 2, 2);
    let noisy = f.dir.path().join("n.cimg");
    run_ok(&["addnoise", p(&f.image), p(&noisy), "--seed", "6"]);
    let mut functionals = Vec::new();
    for algo in ["nested", "nonneg"] {
        let out = f.dir.path().join(format!("{algo}.cimg"));
        let res = run_ok(&[
            "denoise",
            p(&noisy),
            "--dict",
            p(&f.dict),
            "--method",
            "l1inf",
            "--lambda",
            "0.1",
            "--algorithm",
            algo,
            "--alpha0",
            "1",
            "--rho",
            "0.05",
            "--max-iter",
            "2000",
            "-o",
            p(&out),
        ]);
        let text = stdout_of(&res);
        let f_line = text
            .lines()
            .find(|l| l.starts_with("functional "))
            .expect("functional line");
        functionals.push(f_line[11..].trim().parse::<f64>().unwrap());
    }
    let rel = (functionals[0] - functionals[1]).abs() / functionals[0].abs();
    assert!(rel < 0.01, "nested {} nonneg {}", functionals[0], functionals[1]);
}

#[test]
fn benchmark_table_shape_and_determinism() {
    let f = fixture(16, 16, 2, 3, 3);
    let img2 = f.dir.path().join("clean2.cimg");
    let data: Vec<f64> = (0..256)
        .map(|i| 0.5 + 0.1 * standard_normal(99, i as u64))
        .collect();
    io::write_image(
        &img2,
        &Image::new(Array2::from_shape_vec((16, 16), data).unwrap()).unwrap(),
    )
    .unwrap();

    let run_dir = |name: &str, threads: &str| {
        let out_dir = f.dir.path().join(name);
        let st = bin()
            .env("CSC_THREADS", threads)
            .args([
                "benchmark",
                "--images",
                p(&f.image),
                p(&img2),
                "--dict",
                p(&f.dict),
                "--methods",
                "l1,l1w",
                "--out-dir",
                p(&out_dir),
                "--grid-count",
                "2",
                "--block",
                "4x4",
                "--seed",
                "11",
            ])
            .status()
            .unwrap();
        assert!(st.success());
        out_dir
    };
    let d1 = run_dir("bench1", "1");
    let d2 = run_dir("bench2", "1");
    let d3 = run_dir("bench3", "2");

    let table = std::fs::read_to_string(d1.join("table.csv")).unwrap();
    let lines: Vec<&str> = table.trim_end().split("\r\n").collect();
    assert_eq!(lines.len(), 3); // header + 2 methods
    assert!(lines[0].starts_with("method,clean,clean2"));
    assert_eq!(lines[1].split(',').count(), 3);

    // repeated runs and thread counts give byte-identical outputs
    for name in [
        "table.csv",
        "blockerr_clean_l1.csv",
        "blockerr_clean2_l1w.csv",
        "scatter_clean.svg",
        "clean_l1.cimg",
        "clean2_noisy.cimg",
    ] {
        let a = std::fs::read(d1.join(name)).unwrap();
        assert_eq!(a, std::fs::read(d2.join(name)).unwrap(), "{name} differs");
        assert_eq!(a, std::fs::read(d3.join(name)).unwrap(), "{name} across threads");
    }
}

#[test]
fn exit_codes_match_failure_classes() {
    let f = fixture(8, 8, 2, 2, 2);
    // usage: missing lambda/grid
    assert_eq!(
        exit_code(&[
            "denoise",
            p(&f.image),
            "--dict",
            p(&f.dict),
            "--method",
            "l1",
            "-o",
            "/tmp/never.cimg",
        ]),
        2
    );
    // usage: clap-level parse failure
    assert_eq!(exit_code(&["denoise", "--not-a-flag"]), 2);
    // data: missing file
    assert_eq!(
        exit_code(&["psnr", "/nonexistent/a.cimg", "/nonexistent/b.cimg"]),
        3
    );
    // data: malformed dictionary
    let bad = f.dir.path().join("bad.cdict");
    std::fs::write(&bad, b"not a dictionary").unwrap();
    assert_eq!(
        exit_code(&[
            "denoise",
            p(&f.image),
            "--dict",
            p(&bad),
            "--method",
            "l1",
            "--lambda",
            "0.1",
            "-o",
            "/tmp/never.cimg",
        ]),
        3
    );
    // success
    assert_eq!(exit_code(&["psnr", p(&f.image), p(&f.image)]), 0);
}

#[test]
fn dictinfo_reports_unit_norms() {
    let f = fixture(8, 8, 3, 3, 3);
    let out = run_ok(&["dictinfo", p(&f.dict)]);
    let text = stdout_of(&out);
    assert!(text.contains("filters 3"));
    assert!(text.contains("normalized true"));
    for line in text.lines().filter(|l| l.starts_with("filter ") && l.contains("l2_norm")) {
        let v: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-8);
    }
}
