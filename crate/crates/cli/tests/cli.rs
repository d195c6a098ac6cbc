use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sheaf_radon::scene::{load_scene, suite_scenes, write_scene};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sheafradon"))
}

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn disc_barcodes_in_64_directions() {
    let path = scene("disc-1.json");
    let o = run(&["radon", path.to_str().unwrap(), "--dirs", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&stdout(&o));
    assert_eq!(rows.len(), 64);
    for r in rows {
        assert_eq!(&r[3], "0");
        assert_eq!(&r[5], "-1");
        assert_eq!(&r[6], "at_point");
        assert_eq!(&r[7], "+inf");
    }
}

#[test]
fn edgeless_square_phi_column() {
    let dir = tempfile::tempdir().unwrap();
    let (csv_path, svg_path) = (dir.path().join("b.csv"), dir.path().join("b.svg"));
    let path = scene("edgeless-square-convex.json");
    let o = run(&[
        "radon",
        path.to_str().unwrap(),
        "--dirs",
        "32",
        "--out-csv",
        csv_path.to_str().unwrap(),
        "--out-svg",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&std::fs::read_to_string(&csv_path).unwrap());
    assert_eq!(rows.len(), 32);
    for r in rows {
        let (dx, dy): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let n = dx.hypot(dy);
        let phi: f64 = r[5].parse().unwrap();
        assert_eq!(&r[3], "1");
        assert!((phi - ((dy / n).abs() - (dx / n).abs())).abs() < 1e-9);
    }
    assert!(std::fs::read_to_string(&svg_path).unwrap().starts_with("<svg"));
}

#[test]
fn usage_errors_exit_2() {
    let path = scene("disc-1.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["radon", p, "--dirs", "0"]).status.code(), Some(2));
    assert_eq!(run(&["radon", p, "--dir", "2,4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let grid = scene("square-grid.json");
    assert_eq!(run(&["convolve", grid.to_str().unwrap(), "--a", "1", "--norm", "l2"]).status.code(), Some(2));
    assert_eq!(run(&["convolve", grid.to_str().unwrap(), "--a", "2", "--norm", "linf"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "other"]).status.code(), Some(2));
}

#[test]
fn bad_scene_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"backend": "grid", "margin": "1", "extra": 1}"#).unwrap();
    let o = run(&["radon", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["radon", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn convolve_creates_degree_one_support() {
    let dir = tempfile::tempdir().unwrap();
    let (csv_path, svg_path) = (dir.path().join("c.csv"), dir.path().join("c.svg"));
    let path = scene("edgeless-square-convex.json");
    let o = run(&[
        "convolve",
        path.to_str().unwrap(),
        "--a",
        "3/2",
        "--norm",
        "l2",
        "--out-csv",
        csv_path.to_str().unwrap(),
        "--out-svg",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&std::fs::read_to_string(&csv_path).unwrap());
    assert!(rows.iter().any(|r| &r[5] == "1"));
    assert!(stdout(&o).contains("degree 1:"));
    assert!(std::fs::read_to_string(&svg_path).unwrap().contains("<circle"));
}

#[test]
fn convolve_grid_stalk_field() {
    let path = scene("edgeless-square-grid.json");
    let o = run(&["convolve", path.to_str().unwrap(), "--a", "1/2", "--norm", "linf"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&stdout(&o));
    let stalks: Vec<_> = rows.iter().filter(|r| &r[0] == "stalk").collect();
    assert!(!stalks.is_empty());
    assert!(stalks.iter().all(|r| &r[5] == "0" && &r[6] == "1"));
    assert!(rows.iter().any(|r| &r[0] == "rank"));
}

#[test]
fn disc_distance_pinches() {
    let (a, b) = (scene("disc-1.json"), scene("disc-2.json"));
    let o = run(&["distance", a.to_str().unwrap(), b.to_str().unwrap(), "--dirs", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lower_bound 1 "), "{out}");
    assert!(out.contains("upper_bound 1 "), "{out}");
    assert!(out.contains("distance 1"), "{out}");
}

#[test]
fn csv_is_identical_across_thread_counts() {
    let path = scene("mixed-grid.json");
    let outputs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|n| {
            let o = bin()
                .args(["radon", path.to_str().unwrap(), "--dirs", "12"])
                .env("SHEAFRADON_THREADS", n)
                .output()
                .unwrap();
            assert_eq!(o.status.code(), Some(0));
            o.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn scene_files_round_trip_and_match_suite() {
    let dir = tempfile::tempdir().unwrap();
    for (name, s) in suite_scenes() {
        let p = dir.path().join("s.json");
        write_scene(&s, &p).unwrap();
        assert_eq!(load_scene(&p).unwrap(), s);
        let shipped = scene(&format!("{}.json", name.replace('/', "_")));
        assert_eq!(load_scene(&shipped).unwrap(), s, "{name}");
    }
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let path = scene("mixed-grid.json");
    let o = run(&["plot", path.to_str().unwrap(), "--out-svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<rect x="));
}
