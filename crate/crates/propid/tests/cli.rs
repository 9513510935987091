use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use propid::files::{parse_toml, to_toml, CounterexampleFile, InputFile, ScenarioFile};

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn propid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_propid")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key).filter(|r| r.starts_with(' ')).map(str::trim))
}

fn path(name: &str) -> String {
    scenarios().join(name).display().to_string()
}

#[test]
fn design_then_check_then_identify() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("design.toml");
    let prop = path("zero-pattern.property.toml");
    let o = propid(&["design", "--property", &prop, "--out", input.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(field(&stdout(&o), "k"), Some("2"));
    let written: InputFile = parse_toml(&fs::read_to_string(&input).unwrap()).unwrap();
    assert_eq!((written.x.as_str(), written.u.as_str()), ("1, 0; 0, 0", "0, 1"));

    let o = propid(&["check", "--property", &prop, "--input", input.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "sufficiently_rich"), Some("true"));

    // responses of A = [0, 1; 2, 1], B = [1; 0] to the designed section
    let data = dir.path().join("data.toml");
    fs::write(&data, "n = 2\nm = 1\nk = 2\nX = \"1, 0; 0, 0\"\nU = \"0, 1\"\nX_plus = \"0, 1; 2, 0\"\n").unwrap();
    let o = propid(&["identify", "--property", &prop, "--data", data.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "verdict"), Some("has-property"));
    assert_eq!(field(&text, "Q"), Some("[1, 0; 0, 1]"));

    let o = propid(&["recover", "--data", data.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gain_and_exit_codes() {
    let o = propid(&["gain", "--data", &path("two-samples.data.toml")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "K"), Some("[-1, -1/2]"));
    assert_eq!(field(&text, "stabilizing"), Some("true"));

    let o = propid(&["identify", "--property", &path("stabilizability.property.toml"), "--data", &path("two-samples.data.toml")]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "n = 2\nm = 1\nkind = \"sparsity\"\nzeros_a = [[5, 1]]\n").unwrap();
    let o = propid(&["design", "--property", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = propid(&["design", "--property", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    // data that no linear system reproduces: the same input twice, different responses
    fs::write(&bad, "n = 1\nm = 1\nk = 2\nX = \"1, 1\"\nU = \"0, 0\"\nX_plus = \"1, 2\"\n").unwrap();
    let o = propid(&["identify", "--property", &path("stabilizability.property.toml"), "--data", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn counterexample_file_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pair.toml");
    let o = propid(&[
        "counterexample",
        "--property",
        &path("stabilizability.property.toml"),
        "--input",
        &path("two-samples.input.toml"),
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(field(&stdout(&o), "verified"), Some("true"));
    let pair: CounterexampleFile = parse_toml(&fs::read_to_string(&out).unwrap()).unwrap();
    let data = pair.data.load().unwrap();
    let d = data.dims();
    let with = pair.with.load(d).unwrap();
    let without = pair.without.load(d).unwrap();
    assert_eq!(with.augmented().mul(&data.section().stacked()), *data.x_plus());
    assert_eq!(without.augmented().mul(&data.section().stacked()), *data.x_plus());

    // a rich section has nothing to split
    let rich = dir.path().join("rich.toml");
    fs::write(&rich, "n = 2\nm = 1\nk = 3\nX = \"1, 0, 0; 0, 1, 0\"\nU = \"0, 0, 1\"\n").unwrap();
    let o = propid(&["counterexample", "--property", &path("stabilizability.property.toml"), "--input", rich.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "counterexample"), Some("none"));
}

#[test]
fn simulate_reports_every_scenario() {
    let files = [
        "zero-pattern.scenario.toml",
        "zero-pattern-violated.scenario.toml",
        "stabilizability.scenario.toml",
        "trace-band.scenario.toml",
    ];
    let args: Vec<String> = files.iter().map(|f| path(f)).collect();
    let mut argv = vec!["--format", "csv", "simulate"];
    argv.extend(args.iter().map(String::as_str));
    let o = propid(&argv);
    assert!(o.status.success(), "{o:?}");
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let outcomes: Vec<&str> = rows.iter().map(|r| &r[6]).collect();
    assert_eq!(outcomes, ["has-property", "lacks-property", "lacks-property", "has-property"]);
    assert_eq!((&rows[0][0], &rows[0][4], &rows[0][5]), ("zero-pattern", "2", "3"));

    let o = propid(&["simulate", &path("stabilizability-two-samples.scenario.toml")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("verified=true"));
}

#[test]
fn bench_compares_against_model_based_count() {
    let o = propid(&["bench", "--format", "csv", &path("zero-pattern.scenario.toml"), &path("stabilizability.scenario.toml")]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "scenario,property,n,m,dim_lp,n_plus_m,savings\nzero-pattern,sparsity,2,1,2,3,0.333\nstabilizability,stabilizability,2,1,3,3,0.000\n"
    );
}

#[test]
fn scenario_documents_round_trip() {
    for entry in fs::read_dir(scenarios()).unwrap() {
        let p = entry.unwrap().path();
        if !p.to_string_lossy().ends_with(".scenario.toml") {
            continue;
        }
        let file: ScenarioFile = parse_toml(&fs::read_to_string(&p).unwrap()).unwrap();
        let again: ScenarioFile = parse_toml(&to_toml(&file).unwrap()).unwrap();
        assert_eq!(again, file, "{}", p.display());
        let sc = file.load(&scenarios()).unwrap();
        let inline = ScenarioFile::new(&sc);
        let reparsed: ScenarioFile = parse_toml(&to_toml(&inline).unwrap()).unwrap();
        assert_eq!(reparsed.load(&scenarios()).unwrap(), sc, "{}", p.display());
    }
}

#[test]
fn trajectory_scenarios_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("t.scenario.toml");
    fs::write(&sc, "n = 1\nm = 1\nplan = \"trajectory\"\n[hidden]\nA = \"1\"\nB = \"1\"\n[property]\nkind = \"controllability\"\n").unwrap();
    let o = propid(&["simulate", sc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trajectory"));
}
