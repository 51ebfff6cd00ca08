//! CLI determinism and golden-output tests: every command run twice on the
//! same inputs must produce byte-identical JSON, and the analyze report is
//! pinned against a committed golden file.

use std::path::{Path, PathBuf};
use std::process::Command;

use arakelian::scenes;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_arakelian")
}

fn write_scene(dir: &Path, name: &str) -> PathBuf {
    let entry = scenes::by_name(name).unwrap();
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&entry.scene_file()).unwrap()).unwrap();
    path
}

struct RunResult {
    json: String,
    code: i32,
}

fn run(args: &[&str]) -> RunResult {
    let out = Command::new(bin()).args(args).output().expect("spawn CLI");
    RunResult {
        json: String::from_utf8(out.stdout).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn run_twice_identical(args: &[&str]) -> String {
    let a = run(args);
    let b = run(args);
    assert_eq!(a.code, 0, "command failed: {args:?}");
    assert_eq!(a.json, b.json, "non-deterministic output for {args:?}");
    a.json
}

#[test]
fn analyze_half_plane_matches_committed_golden() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "half-plane");
    let json = run_twice_identical(&["analyze", "--scene", scene.to_str().unwrap(), "--n-max", "1"]);

    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["schemaVersion"], 1);
    assert_eq!(parsed["report"]["verdict"], "arakelian");

    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/analyze_half_plane.json");
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        std::fs::write(&golden_path, &json).unwrap();
    }
    let golden = std::fs::read_to_string(&golden_path).expect("committed golden file");
    assert_eq!(json, golden, "analyze report drifted from the golden file");
}

#[test]
fn witness1_on_thick_circle_reports_winding_one() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "thick-circle");
    let json = run_twice_identical(&["witness1", "--scene", scene.to_str().unwrap()]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["report"]["winding"], 1);
    assert_eq!(parsed["report"]["mode"], "step1");
}

#[test]
fn witness2_on_mini_pockets_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "mini-pockets");
    let json = run_twice_identical(&[
        "witness2",
        "--scene",
        scene.to_str().unwrap(),
        "--n0",
        "1",
        "--samples-per-unit",
        "128",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(parsed["report"]["winding"].as_i64().unwrap() >= 1);
}

#[test]
fn winding_of_linear_factor_along_user_polygon_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let function = dir.path().join("f.json");
    std::fs::write(
        &function,
        r#"{"kind":"linearFactor","params":{"zeta":{"re":0.2,"im":0.1}}}"#,
    )
    .unwrap();
    let path = dir.path().join("gamma.json");
    std::fs::write(
        &path,
        r#"{"points":[{"re":1.0,"im":-1.0},{"re":1.0,"im":1.0},{"re":-1.0,"im":1.0},{"re":-1.0,"im":-1.0}],"closed":true}"#,
    )
    .unwrap();
    let json = run_twice_identical(&[
        "winding",
        "--function",
        function.to_str().unwrap(),
        "--path",
        path.to_str().unwrap(),
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["report"]["winding"], 1);
}

#[test]
fn log_command_reports_grid_or_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "thick-circle");
    let function = dir.path().join("f.json");
    // Zero inside the hole: the logarithm must obstruct.
    std::fs::write(
        &function,
        r#"{"kind":"linearFactor","params":{"zeta":{"re":0.0,"im":0.0}}}"#,
    )
    .unwrap();
    let json = run_twice_identical(&[
        "log",
        "--scene",
        scene.to_str().unwrap(),
        "--function",
        function.to_str().unwrap(),
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["report"]["outcome"], "obstruction");
    assert_eq!(parsed["report"]["obstruction"]["winding"], 1);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "two-circle");
    let svg_path = dir.path().join("out.svg");
    let out = Command::new(bin())
        .args([
            "render",
            "--scene",
            scene.to_str().unwrap(),
            "--out-svg",
            svg_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("class=\"set\""));
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    let dir = tempfile::tempdir().unwrap();

    // Malformed scene file: schema error, exit 2.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(
        run(&["analyze", "--scene", bad.to_str().unwrap(), "--n-max", "1"]).code,
        2
    );

    // Hole-free scene handed to witness1: domain error, exit 2.
    let disk = write_scene(dir.path(), "solid-disk");
    assert_eq!(run(&["witness1", "--scene", disk.to_str().unwrap()]).code, 2);

    // Curve standoff below the grid floor: resolution error, exit 3. The
    // outer region floods first, so the hole of the thick circle is label 1.
    let circle = write_scene(dir.path(), "thick-circle");
    assert_eq!(
        run(&[
            "curve",
            "--scene",
            circle.to_str().unwrap(),
            "--label",
            "1",
            "--epsilon",
            "0.001"
        ])
        .code,
        3
    );

    // Contour passing exactly through a zero: zero-on-contour, exit 4.
    let function = dir.path().join("f_at_one.json");
    std::fs::write(
        &function,
        r#"{"kind":"linearFactor","params":{"zeta":{"re":1.0,"im":0.0}}}"#,
    )
    .unwrap();
    let through_zero = dir.path().join("through_zero.json");
    std::fs::write(
        &through_zero,
        r#"{"points":[{"re":1.0,"im":0.0},{"re":0.0,"im":1.0},{"re":-1.0,"im":0.0},{"re":0.0,"im":-1.0}],"closed":true}"#,
    )
    .unwrap();
    assert_eq!(
        run(&[
            "winding",
            "--function",
            function.to_str().unwrap(),
            "--path",
            through_zero.to_str().unwrap()
        ])
        .code,
        4
    );
}
