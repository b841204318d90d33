use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cubulate::complex::CubeComplex;
use cubulate::dual::DualComplex;
use cubulate::group::CayleyBall;
use cubulate::wallspace::Wallspace;

fn cubulate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubulate"))
        .args(args)
        .env_remove("CUBULATE_BUDGET_VERTICES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn inputs(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("inputs")
        .join(name)
        .display()
        .to_string()
}

fn path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dual_on_grid_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "dual.json");
    let o = cubulate(&["dual", "--fixture", "grid", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("census 25/40/16"));
    let dc: DualComplex = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(dc.census(), vec![25, 40, 16]);
}

#[test]
fn torus_is_special() {
    let o = cubulate(&["check-special", "--fixture", "torus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("special"));
}

#[test]
fn flat_profile_exits_one() {
    let o = cubulate(&["criteria", "--fixture", "grid-columns", "--L", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("properness not plausible"));
}

#[test]
fn input_errors_exit_two_with_a_module_tag() {
    let o = cubulate(&["ball", "--builtin", "nope(1)", "--radius", "2", "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[group]"));

    let o = cubulate(&["criteria", "--fixture", "grid", "--L", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[criteria]: scale error"));

    let o = cubulate(&["check-npc", "/no/such/file.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[io]"));
}

#[test]
fn vertex_budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cubulate"))
        .args(["ball", "--builtin", "free_group(2)", "--radius", "5", "--out", "/dev/null"])
        .env("CUBULATE_BUDGET_VERTICES", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vertex budget"));

    let o = Command::new(env!("CARGO_BIN_EXE_cubulate"))
        .args(["dual", "--fixture", "grid"])
        .env("CUBULATE_BUDGET_ZERO_CUBES", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn version_lists_formats() {
    let o = cubulate(&["--version"]);
    let text = stdout(&o);
    for f in ["ball", "wallspace", "dual", "complex"] {
        assert!(text.contains(&format!("{f} format 1")), "{text}");
    }
}

#[test]
fn artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ball = path(&dir, "ball.json");
    let ws = path(&dir, "ws.json");
    let dual = path(&dir, "dual.json");
    let cx = path(&dir, "dual.toml");
    let o = cubulate(&["ball", "--group", &inputs("z2.group"), "--radius", "9", "--out", s(&ball)]);
    assert_eq!(o.status.code(), Some(0));
    let b: CayleyBall = serde_json::from_str(&std::fs::read_to_string(&ball).unwrap()).unwrap();
    assert_eq!(b.len(), 181);
    let again = serde_json::to_string_pretty(&b).unwrap() + "\n";
    assert_eq!(again, std::fs::read_to_string(&ball).unwrap());

    let o = cubulate(&[
        "walls", "--ball", s(&ball), "--spec", &inputs("grid-candidates.toml"), "--out", s(&ws),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&ws).unwrap();
    let w: Wallspace = serde_json::from_str(&text).unwrap();
    assert_eq!(w.len(), 28);
    assert_eq!(serde_json::to_string_pretty(&w).unwrap() + "\n", text);

    let o = cubulate(&[
        "dual", "--fixture", "tree", "--out", s(&dual), "--complex", s(&cx),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&dual).unwrap();
    let d: DualComplex = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&d).unwrap() + "\n", text);
    let c = CubeComplex::from_toml(&std::fs::read_to_string(&cx).unwrap()).unwrap();
    assert_eq!(c, CubeComplex::from_dual(&d).unwrap());

    let o = cubulate(&["check-npc", s(&cx)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn hand_written_group_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    cubulate(&["ball", "--group", &inputs("z2.group"), "--radius", "4", "--out", s(&a)]);
    cubulate(&["ball", "--group", &inputs("z2-by-hand.group"), "--radius", "4", "--out", s(&b)]);
    let load = |p: &Path| -> CayleyBall {
        serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    let (x, y) = (load(&a), load(&b));
    let words = |c: &CayleyBall| (0..c.len()).map(|v| c.format_vertex(v)).collect::<Vec<_>>();
    assert_eq!(words(&x), words(&y));
}

#[test]
fn selection_and_induction() {
    let dir = tempfile::tempdir().unwrap();
    let ball = path(&dir, "ball.json");
    let report = path(&dir, "sel.json");
    cubulate(&["ball", "--builtin", "free_abelian(2)", "--radius", "9", "--out", s(&ball)]);
    let o = cubulate(&[
        "select", "--ball", s(&ball), "--candidates", &inputs("grid-candidates.toml"),
        "--L", "3", "--compare-radius", "10", "--report", s(&report),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("stability R9 vs R10: stable"));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["selection"]["full_coverage"], true);
    assert_eq!(r["reverify_failures"], serde_json::json!([]));

    let o = cubulate(&[
        "select", "--ball", s(&ball), "--candidates", &inputs("grid-columns.toml"), "--L", "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("uncovered \"b\""));

    let o = cubulate(&[
        "induce", "--subgroup", "a", "--ball", s(&ball), "--candidates",
        &inputs("grid-candidates.toml"), "--radius", "7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("14 walls"));
}

#[test]
fn axis_and_fixtures() {
    let o = cubulate(&["axis", "--g", "a", "--fixture", "line-axis"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=1"));
    let o = cubulate(&["axis", "--g", "b", "--fixture", "grid-columns", "--k-max", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let o = cubulate(&["fixtures", "--write", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let o = cubulate(&["check-npc", s(&dir.path().join("three-squares.toml"))]);
    assert_eq!(o.status.code(), Some(1));
    let o = cubulate(&["dual", "--walls", s(&dir.path().join("grid.json"))]);
    assert!(stdout(&o).contains("census 25/40/16"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = path(&dir, name);
        cubulate(&["--seed", "7", "dual", "--fixture", "random", "--out", s(&p)]);
        std::fs::read(&p).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}
