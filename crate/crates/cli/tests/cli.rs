use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_borderfloer"));
    c.env_remove("BORDERFLOER_FIXTURES");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> String {
    fixtures_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn tau_of_the_doubled_unknot() {
    let o = run(&["tau", "--J", "builtin:unknot", "--s", "-1", "--K", "builtin:unknot", "--t", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn json_report_has_every_field() {
    let o = run(&["tau", "--J", "builtin:trefoil_rh", "--s", "0", "--K", "builtin:unknot", "--t", "-1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tau"], 1);
    assert_eq!(v["total_homology_dim"], 1);
    assert_eq!(v["theorem_prediction"], 1);
    assert_eq!(v["agrees"], true);
    assert!(v["hfk_dims"].is_object());
}

#[test]
fn hfk_lines() {
    let o = run(&["hfk", "--J", "builtin:unknot", "--s", "-1", "--K", "builtin:unknot", "--t", "-1"]);
    assert_eq!(stdout(&o), "-1\t1\n0\t1\n1\t1\n");
}

#[test]
fn whitehead_signs() {
    let plus = run(&["whitehead", "--K", "builtin:trefoil_rh", "--t", "0", "--sign", "+"]);
    assert_eq!(stdout(&plus).trim(), "1");
    let minus = run(&["whitehead", "--K", "builtin:trefoil_rh", "--t", "3", "--sign", "-"]);
    assert_eq!(stdout(&minus).trim(), "-1");
    let bad = run(&["whitehead", "--K", "builtin:trefoil_rh", "--t", "3", "--sign", "x"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_grid_and_json() {
    let o = run(&["sweep", "--J", "builtin:unknot", "--K", "builtin:unknot", "--s-range", "-3:3", "--t-range", "-3:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2 + 7);
    let o = run(&[
        "sweep", "--J", "builtin:unknot", "--K", "builtin:unknot", "--s-range", "-1:1", "--t-range", "0:1", "--json",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!((rows[0]["s"].as_i64(), rows[0]["t"].as_i64()), (Some(-1), Some(0)));
}

#[test]
fn empty_sweep_succeeds() {
    let o = run(&["sweep", "--J", "builtin:unknot", "--K", "builtin:unknot", "--s-range", "2:1", "--t-range", "0:0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn oversized_sweep_is_an_input_error() {
    let o = run(&["sweep", "--J", "builtin:unknot", "--K", "builtin:unknot", "--s-range", "0:30", "--t-range", "0:0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fixtures_check_passes() {
    let o = run(&["fixtures", "check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("ok")));
}

#[test]
fn fixtures_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("models")).unwrap();
    for entry in std::fs::read_dir(fixtures_dir()).unwrap().chain(std::fs::read_dir(fixtures_dir().join("models")).unwrap()) {
        let p = entry.unwrap().path();
        if p.is_file() {
            let rel = p.strip_prefix(fixtures_dir()).unwrap();
            std::fs::copy(&p, dir.path().join(rel)).unwrap();
        }
    }
    let o = bin().args(["fixtures", "check"]).env("BORDERFLOER_FIXTURES", dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0));

    let target = dir.path().join("cfdd_y_b3.json");
    let text = std::fs::read_to_string(&target).unwrap();
    std::fs::write(&target, text.replacen("\"alexander\": -1", "\"alexander\": 0", 1)).unwrap();
    let o = bin().args(["fixtures", "check"]).env("BORDERFLOER_FIXTURES", dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL checksums"));
}

#[test]
fn invalid_model_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_model.json");
    std::fs::write(
        &path,
        r#"{"name":"bad","n":0,"tau":0,"vertical_lengths":[],"horizontal_lengths":[],"xi_to_eta":[[0]],"eta_to_xi":[[1]]}"#,
    )
    .unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not mutually inverse"));
}

#[test]
fn validate_fixture_structures() {
    for name in ["cfdd_y_b3.json", "identity_aa.json", "cfaa_y_b3.json"] {
        let o = run(&["validate", &fixture(name), "--json"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["valid"], true);
    }
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn tensor_then_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let half = dir.path().join("half.json");
    let identity = dir.path().join("identity.json");
    let text = std::fs::read_to_string(fixture("identity_aa.json")).unwrap();
    std::fs::write(&identity, text.replace("\"sigma\"", "\"tau\"")).unwrap();
    let o = run(&[
        "tensor",
        identity.to_str().unwrap(),
        "rho",
        &fixture("cfdd_y_b3.json"),
        "rho",
        "-o",
        half.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["validate", half.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let trace = dir.path().join("trace.json");
    let o = run(&["reduce", half.to_str().unwrap(), "--json", "--trace", trace.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["survivors"].as_array().unwrap().len(), 19);
    let steps: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert_eq!(19 + 2 * steps.len(), 3 * 19);
}

#[test]
fn unknown_side_in_tensor() {
    let o = run(&["tensor", &fixture("identity_aa.json"), "tau", &fixture("cfdd_y_b3.json"), "rho"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seeded_trace_runs() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let o = run(&[
        "tau", "--J", "builtin:figure_eight", "--s", "1", "--K", "builtin:trefoil_lh", "--t", "-3", "--seed", "7",
        "--trace", trace.to_str().unwrap(), "--prune",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    assert!(std::fs::metadata(trace).unwrap().len() > 2);
}
