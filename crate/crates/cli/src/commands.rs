use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use borderfloer::io::{from_json_str, to_json_string};
use borderfloer::pipeline::{parse_range, report_from_complex, satellite_complex, whitehead_prediction};
use borderfloer::reduction::ReductionResult;
use borderfloer::*;
use serde_json::json;

use crate::{Command, FixturesAction, RunArgs, SatelliteArgs, SweepArgs, WhiteheadArgs};

pub const FIXTURES_ENV: &str = "BORDERFLOER_FIXTURES";

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input files.
    Input(Error),
    /// The computation ran but broke one of its own consistency checks.
    Computation(Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Computation(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(e) | Failure::Computation(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Computation(e),
            other => Failure::Input(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Disagreement,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::Disagreement => ExitCode::from(1),
        }
    }
}

type Outcome = std::result::Result<Status, Failure>;

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Tau(a) => satellite(&a, false),
        Command::Hfk(a) => satellite(&a, true),
        Command::Whitehead(a) => whitehead(&a),
        Command::Sweep(a) => sweep_cmd(&a),
        Command::Validate { file, json } => validate(&file, json),
        Command::Fixtures { action: FixturesAction::Check { json } } => fixtures_check(json),
        Command::Reduce { file, run } => reduce_cmd(&file, &run),
        Command::Tensor { file_a, side_a, file_b, side_b, prune, output } => {
            tensor_cmd(&file_a, &side_a, &file_b, &side_b, prune, output.as_deref())
        }
    }
}

fn fixture_override() -> Option<PathBuf> {
    std::env::var_os(FIXTURES_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// The fixture set named by the environment, or the embedded one.
fn fixture_set() -> Result<std::borrow::Cow<'static, FixtureSet>> {
    match fixture_override() {
        Some(dir) => Ok(std::borrow::Cow::Owned(borderfloer::fixtures::load_from_dir(dir)?)),
        None => Ok(std::borrow::Cow::Borrowed(fixtures())),
    }
}

pub fn resolve_model(spec: &str) -> Result<CfkModel> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin_model(name),
        None => load_model(spec),
    }
}

fn policy(seed: Option<u64>, trace: bool) -> CancellationPolicy {
    let p = CancellationPolicy { seed, ..Default::default() };
    if trace {
        p.traced()
    } else {
        p
    }
}

fn write_trace(path: &Path, r: &ReductionResult) -> Result<()> {
    let text = serde_json::to_string_pretty(&r.trace)?;
    std::fs::write(path, text + "\n").map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn report(req: &SatelliteRequest, prune: bool, run: &RunArgs) -> Result<SatelliteReport> {
    let set = fixture_set()?;
    let opts = PipelineOptions {
        cfaa: Some(&set.cfaa_y_b3_reference),
        prune,
        policy: policy(run.seed, run.trace.is_some()),
        brute_check: false,
    };
    let c = satellite_complex(req, &opts)?;
    let (rep, r) = report_from_complex(req, &c, &opts)?;
    if let Some(path) = &run.trace {
        write_trace(path, &r)?;
    }
    Ok(rep)
}

fn status(agrees: bool) -> Status {
    if agrees {
        Status::Ok
    } else {
        Status::Disagreement
    }
}

fn print_hfk(rep: &SatelliteReport) {
    for (a, d) in &rep.hfk_dims {
        println!("{a}\t{d}");
    }
}

fn satellite(a: &SatelliteArgs, hfk: bool) -> Outcome {
    let (j, k) = (resolve_model(&a.j)?, resolve_model(&a.k)?);
    let req = SatelliteRequest { j: &j, s: a.s, k: &k, t: a.t };
    let rep = report(&req, a.prune, &a.run)?;
    if a.run.json {
        println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    } else if hfk {
        print_hfk(&rep);
    } else {
        println!("{}", rep.tau);
    }
    if !rep.agrees {
        eprintln!("tau {} disagrees with the predicted {}", rep.tau, rep.theorem_prediction);
    }
    Ok(status(rep.agrees))
}

fn whitehead(a: &WhiteheadArgs) -> Outcome {
    let sign: WhiteheadSign = a.sign.parse()?;
    let k = resolve_model(&a.k)?;
    let u = builtin_model("unknot")?;
    let s = if sign == WhiteheadSign::Plus { -1 } else { 1 };
    let mut rep = report(&SatelliteRequest { j: &u, s, k: &k, t: a.t }, a.prune, &a.run)?;
    rep.theorem_prediction = whitehead_prediction(k.tau, a.t, sign);
    rep.agrees = rep.tau == rep.theorem_prediction;
    if a.run.json {
        println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    } else {
        println!("{}", rep.tau);
    }
    Ok(status(rep.agrees))
}

fn sweep_cmd(a: &SweepArgs) -> Outcome {
    let (j, k) = (resolve_model(&a.j)?, resolve_model(&a.k)?);
    let (sr, tr) = (parse_range(&a.s_range)?, parse_range(&a.t_range)?);
    let set = fixture_set()?;
    let opts = PipelineOptions {
        cfaa: Some(&set.cfaa_y_b3_reference),
        prune: a.prune,
        policy: policy(a.seed, false),
        brute_check: false,
    };
    let rows = sweep(&j, &k, sr, tr, &opts)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
    } else {
        print!("{}", grid(&rows, sr, tr));
    }
    let bad = rows.iter().filter(|r| !r.agrees).count();
    if bad > 0 {
        eprintln!("{bad} of {} cells disagree with the prediction", rows.len());
    }
    Ok(status(bad == 0))
}

/// Rows are s, columns t; a disagreeing cell is marked with `!`.
pub fn grid(rows: &[SweepRow], (s0, s1): (i32, i32), (t0, t1): (i32, i32)) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    if rows.is_empty() {
        return out;
    }
    write!(out, "{:>5} |", "s\\t").unwrap();
    for t in t0..=t1 {
        write!(out, "{t:>4}").unwrap();
    }
    out.push('\n');
    out.push_str(&format!("{}\n", "-".repeat(7 + 4 * (t1 - t0 + 1) as usize)));
    for s in s0..=s1 {
        write!(out, "{s:>5} |").unwrap();
        for t in t0..=t1 {
            let cell = rows.iter().find(|r| r.s == s && r.t == t);
            match cell {
                Some(r) if r.agrees => write!(out, "{:>4}", r.tau).unwrap(),
                Some(r) => write!(out, "{:>4}", format!("{}!", r.tau)).unwrap(),
                None => write!(out, "{:>4}", "?").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn validate(path: &Path, json: bool) -> Outcome {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let (kind, problems, checked) = if value.get("xi_to_eta").is_some() {
        let m: CfkModel = serde_json::from_value(value).map_err(Error::from)?;
        ("model", validate_model(&m), 0)
    } else {
        let s = from_json_str(&text)?;
        let r = validate_generic(&s);
        ("structure", r.lines().cloned().collect(), r.checked)
    };
    if json {
        println!("{}", json!({ "file": path, "kind": kind, "valid": problems.is_empty(), "checked": checked, "problems": problems }));
    } else if problems.is_empty() {
        println!("{}: valid {kind}", path.display());
    } else {
        for p in &problems {
            eprintln!("{}: {p}", path.display());
        }
    }
    if problems.is_empty() {
        Ok(Status::Ok)
    } else {
        Err(Failure::Input(Error::Schema(format!("{} problems in {}", problems.len(), path.display()))))
    }
}

fn fixtures_check(json: bool) -> Outcome {
    let set = fixture_set()?;
    let dir = fixture_override();
    let mut lines: Vec<(String, bool, String)> =
        check_fixtures(&set).into_iter().map(|c| (c.name.to_string(), c.ok, c.detail)).collect();
    let bad = borderfloer::fixtures::verify_checksums(dir.as_deref())?;
    lines.push(("checksums".into(), bad.is_empty(), if bad.is_empty() { "all match".into() } else { bad.join("; ") }));
    if json {
        let v: Vec<_> = lines.iter().map(|(n, ok, d)| json!({ "check": n, "ok": ok, "detail": d })).collect();
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        for (n, ok, d) in &lines {
            println!("{} {n}: {d}", if *ok { "ok  " } else { "FAIL" });
        }
    }
    Ok(status(lines.iter().all(|l| l.1)))
}

fn reduce_cmd(path: &Path, run: &RunArgs) -> Outcome {
    let s = load_structure(path)?;
    let r = reduce(&s, &policy(run.seed, run.trace.is_some()))?;
    if let Some(p) = &run.trace {
        write_trace(p, &r)?;
    }
    if run.json {
        let survivors: Vec<_> = r.survivors.iter().map(|(n, a)| json!({ "name": n, "alexander": a })).collect();
        let v = json!({
            "survivors": survivors,
            "pages": r.pages,
            "tau": r.tau,
            "remaining_terms": r.structure.term_count(),
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("{} -> {} generators", s.len(), r.survivors.len());
        for (n, a) in &r.survivors {
            println!("{n}\t{a}");
        }
        if let Some(t) = r.tau {
            println!("tau\t{t}");
        }
    }
    Ok(Status::Ok)
}

fn tensor_cmd(a: &Path, sa: &str, b: &Path, sb: &str, prune: bool, output: Option<&Path>) -> Outcome {
    let (left, right) = (load_structure(a)?, load_structure(b)?);
    let t = box_tensor(&TensorPlan::new(&left, sa, &right, sb).pruned(prune))?;
    match output {
        Some(p) => save_structure(&t, p)?,
        None => println!("{}", to_json_string(&t)),
    }
    Ok(Status::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_marks_disagreements() {
        let rows = vec![
            SweepRow { s: 0, t: 0, tau: 0, prediction: 0, agrees: true },
            SweepRow { s: 0, t: 1, tau: 1, prediction: 0, agrees: false },
        ];
        let g = grid(&rows, (0, 0), (0, 1));
        assert_eq!(g.lines().nth(2).unwrap(), "    0 |   0  1!");
        assert!(grid(&[], (1, 0), (0, 0)).is_empty());
    }

    #[test]
    fn model_specs() {
        assert_eq!(resolve_model("builtin:trefoil_lh").unwrap().tau, -1);
        assert!(matches!(resolve_model("builtin:cinquefoil"), Err(Error::UnknownModel(_))));
        assert!(matches!(resolve_model("/no/such/model.json"), Err(Error::Io { .. })));
    }
}
