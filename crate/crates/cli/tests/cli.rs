use std::io::Write;
use std::process::{Command, Output, Stdio};

fn kpack(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kpack"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn catalog(name: &str) -> String {
    stdout(&kpack(&["catalog", name], None))
}

#[test]
fn verify_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("X7.cmplx");
    std::fs::write(&path, catalog("X7")).unwrap();
    let o = kpack(&["verify", path.to_str().unwrap(), "--json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["ok"].as_bool(), v["k"].as_u64(), v["g"].as_u64(), v["N"].as_u64()), (Some(true), Some(6), Some(3), Some(7)));
}

#[test]
fn verify_exit_status_follows_report() {
    let torus = "# kpack polygon complex v1\npolygon 1 2 1 2\n";
    let o = kpack(&["verify", "-", "--json"], Some(torus));
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert!(v["failures"].as_array().unwrap().iter().any(|f| f["kind"] == "Orientable"));
    let o = kpack(&["verify", "-"], Some("polygon 1 2 x\n"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn infeasible_pair() {
    let o = kpack(&["feasible", "--k", "4", "--g", "3"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible: 4 ∤ 6"));
    let o = kpack(&["feasible", "--k", "6", "--g", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "feasible: N = 7\n");
}

#[test]
fn bound_json() {
    let o = kpack(&["bound", "--k", "1", "--g", "3", "--json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let expected = 1.0 / (2.0 * (std::f64::consts::PI / 12.0).sin());
    assert!((v["coshR"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!((v["coshR"].as_f64().unwrap() - 1.9318516526).abs() < 1e-10);
    assert_eq!(v["N"], 12);
}

#[test]
fn build_cover_verify_pipeline() {
    let built = kpack(&["build", "--N", "9"], None);
    assert_eq!(built.status.code(), Some(0));
    let cover = kpack(&["cyclic-cover", "-", "--n", "2"], Some(&stdout(&built)));
    assert_eq!(cover.status.code(), Some(0), "{}", String::from_utf8_lossy(&cover.stderr));
    let o = kpack(&["verify", "-"], Some(&stdout(&cover)));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: k = 4, g = 4, N = 9\n");
}

#[test]
fn explicit_voltages() {
    let x12 = catalog("X12");
    let o = kpack(&["cyclic-cover", "-", "--n", "2", "--voltages", "0,0"], Some(&x12));
    assert_eq!(o.status.code(), Some(1));
    let o = kpack(&["cyclic-cover", "-", "--n", "3", "--voltages", "0,1,2,0,1,2"], Some(&x12));
    assert!(matches!(o.status.code(), Some(0) | Some(2)));
}

#[test]
fn graft_and_double_cover() {
    let x7 = catalog("X7");
    let o = kpack(&["graft", "-", "--variant", "EG1"], Some(&x7));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // one graft raises the genus; uniformity needs the partner graft
    let v = kpack(&["verify", "-", "--json"], Some(&stdout(&o)));
    let v: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!((v["chi"].as_i64(), v["orientable"].as_bool()), (Some(-2), Some(false)));
    let o = kpack(&["graft", "-", "--variant", "EG9"], Some(&x7));
    assert_eq!(o.status.code(), Some(1));
    let o = kpack(&["graft", "-", "--variant", "EG1", "--site", "100000"], Some(&x7));
    assert_eq!(o.status.code(), Some(2));

    let d = kpack(&["double-cover", "-"], Some(&x7));
    assert_eq!(d.status.code(), Some(0));
    let o = kpack(&["verify", "-", "--json"], Some(&stdout(&d)));
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["orientable"].as_bool(), v["chi"].as_i64()), (Some(true), Some(-2)));
    let again = kpack(&["double-cover", "-"], Some(&stdout(&d)));
    assert_eq!(again.status.code(), Some(2));
}

#[test]
fn group_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("x12.json");
    let o = kpack(&["to-group", "-", "-o", rec.to_str().unwrap()], Some(&catalog("X12")));
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rec).unwrap()).unwrap();
    assert_eq!((v["index"].as_u64(), v["genus"].as_u64()), (Some(24), Some(3)));
    let o = kpack(&["from-group", rec.to_str().unwrap()], None);
    let v = kpack(&["verify", "-"], Some(&stdout(&o)));
    assert_eq!(stdout(&v), "ok: k = 1, g = 3, N = 12\n");
}

#[test]
fn enumerate_records() {
    let o = kpack(
        &["enumerate", "--p", "2", "--q", "3", "--r", "12", "--index", "24", "--torsion-free", "--proper", "--nonorientable"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = v.as_array().unwrap();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r["genus"] == 3 && r["torsion_free"] == true));
    let o = kpack(&["from-group", "-", "--entry", "0"], Some(&stdout(&o)));
    assert_eq!(o.status.code(), Some(0));

    let o = kpack(&["enumerate", "--p", "2", "--q", "3", "--r", "7", "--index", "84", "--node-cap", "10"], None);
    assert_eq!(o.status.code(), Some(3));
    let o = kpack(&["enumerate", "--p", "1", "--q", "3", "--r", "7", "--index", "4"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("x12.svg");
    let layout = dir.path().join("x12.json");
    let o = kpack(
        &["render", "-", "-o", svg.to_str().unwrap(), "--layout", layout.to_str().unwrap()],
        Some(&catalog("X12")),
    );
    assert_eq!(o.status.code(), Some(0));
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches(r#"class="edge""#).count(), 12);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&layout).unwrap()).unwrap();
    assert_eq!(v["pairings"].as_array().unwrap().len(), 6);
    let o = kpack(&["render", "-"], Some("# kpack polygon complex v1\npolygon 1 2 1 2\n"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = kpack(&["realize", "--k", "4", "--g", "4"], None);
    let b = kpack(&["realize", "--k", "4", "--g", "4"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let o = kpack(&["realize", "--k", "4", "--g", "3"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn feasibility_queries() {
    assert_eq!(stdout(&kpack(&["primitive", "--N", "9"], None)), "k = 2, g = 3\n");
    assert_eq!(stdout(&kpack(&["line", "--N", "12", "--jmax", "3"], None)), "1 3\n2 4\n3 5\n");
    assert_eq!(stdout(&kpack(&["dual", "--g", "4"], None)), "k = 1 (N = 18), k = 4 (N = 9)\n");
    assert_eq!(stdout(&kpack(&["unique", "--k", "1", "--g", "7"], None)), "unique\n");
    assert_eq!(stdout(&kpack(&["unique", "--k", "6", "--g", "3"], None)), "possibly multiple\n");
    assert_eq!(kpack(&["primitive", "--N", "6"], None).status.code(), Some(2));
    assert_eq!(kpack(&["nonsense"], None).status.code(), Some(1));
}
