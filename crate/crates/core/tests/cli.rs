use std::path::{Path, PathBuf};
use std::process::Command;

use fsing::cli::{parse_ring_file, print_ring_file, run, RingFile};
use fsing::corpus::fixtures;
use serde_json::Value;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn ring(name: &str) -> String {
    corpus_dir().join(format!("{name}.ring")).display().to_string()
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fsing(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fsing").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let validator = validator();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn property<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["properties"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["property"] == name)
        .unwrap_or_else(|| panic!("no property {name}"))
}

#[test]
fn classify_two_planes() {
    let o = fsing(&["classify", &ring("two-planes"), "--format", "json", "--seed", "7"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_valid(&v);
    assert_eq!(v["contradictions"].as_array().unwrap().len(), 0);
    assert_eq!(property(&v, "buchsbaum")["kind"], "evidence");
    assert_eq!(property(&v, "cohen_macaulay")["kind"], "refuted");
    assert_eq!(v["seed"], 7);
    assert!(v.get("wall_ms").is_none());
}

#[test]
fn finjective_refutes_the_cusp_with_witness_z() {
    let o = fsing(&["finjective", &ring("char2-cusplike"), "--format", "json"]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    let v = json(&o);
    assert_valid(&v);
    let f = property(&v, "f_injective");
    assert_eq!(f["kind"], "refuted");
    assert_eq!(f["verdict"]["witness"]["type"], "closure_witness");
    assert_eq!(f["verdict"]["witness"]["element"], "z");
}

#[test]
fn closure_subcommand() {
    let o = fsing(&["closure", &ring("char2-cusplike"), "--ideal", "x, y", "--format", "json"]);
    assert_eq!(o.code, 2);
    let v = json(&o);
    assert_valid(&v);
    let w = &property(&v, "frobenius_closed")["verdict"]["witness"];
    assert_eq!(w["element"], "z");
    assert_eq!(w["level"], 1);

    let o = fsing(&["closure", &ring("two-planes"), "--ideal", "x + u, y + v"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn dseq_flc_buchsbaum_subcommands() {
    let o = fsing(&["dseq", &ring("two-planes"), "--seq", "x + u, y + v", "--format", "json"]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert_valid(&json(&o));

    let o = fsing(&["buchsbaum", &ring("plane-line"), "--format", "json"]);
    assert_eq!(o.code, 2, "{}", o.stdout);
    let v = json(&o);
    assert_valid(&v);
    assert_eq!(property(&v, "buchsbaum")["kind"], "refuted");

    let o = fsing(&["flc", &ring("two-planes"), "--format", "json", "--deep", "2,3"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_valid(&v);
    assert_eq!(property(&v, "flc")["kind"], "evidence");
}

#[test]
fn text_output_marks_the_headline() {
    let o = fsing(&["finjective", &ring("fermat-p7")]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.lines().any(|l| l.starts_with("* f_injective")), "{}", o.stdout);
}

#[test]
fn identical_seeds_give_identical_bytes() {
    for name in ["two-planes", "plane-line", "char2-cusplike"] {
        let a = fsing(&["classify", &ring(name), "--format", "json", "--seed", "3"]);
        let b = fsing(&["classify", &ring(name), "--format", "json", "--seed", "3"]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn timings_only_on_request() {
    let o = fsing(&["flc", &ring("poly-2"), "--format", "json", "--timings"]);
    let v = json(&o);
    assert_valid(&v);
    assert!(v["wall_ms"].is_number());
    assert!(property(&v, "flc.N=2")["wall_ms"].is_number());
    let plain = json(&fsing(&["flc", &ring("poly-2"), "--format", "json"]));
    assert!(plain.get("wall_ms").is_none() && property(&plain, "flc.N=2").get("wall_ms").is_none());
}

#[test]
fn usage_and_parse_errors_exit_1() {
    assert_eq!(fsing(&["classify"]).code, 1);
    assert_eq!(fsing(&["frobnicate"]).code, 1);
    assert_eq!(fsing(&["--help"]).code, 0);
    assert_eq!(fsing(&["classify", "/nonexistent/ring.ring"]).code, 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ring");
    std::fs::write(&bad, "p 2\nvars x y\ngens x*y, x^ + y\n").unwrap();
    let o = fsing(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("line 3, column 14"), "{}", o.stderr);

    std::fs::write(&bad, "p 6\nvars x\n").unwrap();
    let o = fsing(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("line 1, column 3") && o.stderr.contains("not prime"), "{}", o.stderr);
}

#[test]
fn search_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hits");
    let o = fsing(&[
        "search", "--family", "squarefree-monomial", "--count", "4", "--seed", "5", "--samples", "4", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("search.json")).unwrap()).unwrap();
    assert_valid(&summary);
    assert_eq!(summary["rings"].as_array().unwrap().len(), 4);
    for c in summary["candidates"].as_array().unwrap() {
        assert!(Path::new(c["ring_file"].as_str().unwrap()).exists());
    }

    // a directory of classify reports plus the summary
    for name in ["two-planes", "poly-2"] {
        let o = fsing(&["classify", &ring(name), "--format", "json", "--samples", "4", "--out", out.join(format!("{name}.json")).to_str().unwrap()]);
        assert_eq!(o.code, 0);
    }
    let o = fsing(&["report", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.code, 0);
    let agg = json(&o);
    assert_valid(&agg);
    assert!(agg["reports"].as_u64().unwrap() >= 2);
    assert_eq!(agg["contradictions"], 0);
}

#[test]
fn every_fixture_round_trips_and_matches_the_corpus() {
    for f in fixtures() {
        let r = f.build().unwrap();
        let text = print_ring_file(&r);
        let again = parse_ring_file(&text).unwrap();
        assert_eq!(print_ring_file(&again), text, "{}", f.name);
        assert_eq!(RingFile::parse(&text).unwrap(), RingFile::from_presentation(&r));

        let on_disk = std::fs::read_to_string(corpus_dir().join(format!("{}.ring", f.name)))
            .unwrap_or_else(|e| panic!("{}: {e}", f.name));
        assert_eq!(RingFile::parse(&on_disk).unwrap(), RingFile::from_presentation(&r), "{}", f.name);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fsing");
    let status = Command::new(bin).args(["finjective", &ring("char2-cusplike")]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = Command::new(bin).args(["classify", &ring("xy-p3")]).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let status = Command::new(bin).arg("nope").output().unwrap().status;
    assert_eq!(status.code(), Some(1));
}

#[test]
fn schema_covers_every_certificate_and_verdict() {
    use fsing::cli::Report;
    use fsing::kernel::parse_polynomial;
    use fsing::verdict::{Budget, Certificate, DeltaSample, Verdict};

    let r = fsing::corpus::fixture("two-planes").unwrap().build().unwrap();
    let f = |s: &str| parse_polynomial(r.ring(), s).unwrap();
    let sample = DeltaSample { sop: vec![f("x + u"), f("y + v")], length: 3, multiplicity: 2, delta: 1 };
    let certs = vec![
        Certificate::None,
        Certificate::ClosureWitness { element: f("x"), level: 1, ideal: vec![f("y")] },
        Certificate::DSequenceFailure { i: 1, j: 2, element: f("u") },
        Certificate::ColonMismatch { i: 1, side: "left".into(), element: f("v") },
        Certificate::LengthMultiplicity { length: 3, multiplicity: 2 },
        Certificate::DistinctDifferences { first: sample.clone(), second: sample },
        Certificate::FedderGenerators { escaping: None, generators: vec![f("x*y*u*v")] },
        Certificate::FedderGenerators { escaping: Some(f("x*y")), generators: vec![] },
        Certificate::KernelVector { index: 1, element: f("x"), coordinates: vec![1, 0] },
        Certificate::FullRank { index: 1, rank: 1, dimension: 1 },
        Certificate::Nilpotent { element: f("x"), power: 2 },
        Certificate::note("text"),
    ];
    // adding a variant without extending the schema and this list fails to compile here
    for c in &certs {
        match c {
            Certificate::None
            | Certificate::ClosureWitness { .. }
            | Certificate::DSequenceFailure { .. }
            | Certificate::ColonMismatch { .. }
            | Certificate::LengthMultiplicity { .. }
            | Certificate::DistinctDifferences { .. }
            | Certificate::FedderGenerators { .. }
            | Certificate::KernelVector { .. }
            | Certificate::FullRank { .. }
            | Certificate::Nilpotent { .. }
            | Certificate::Note { .. } => {}
        }
    }

    let mut report = Report::new("classify", 0, &r, "f_injective");
    let budget = Budget::new(4, 0).with("degrees", "1,2");
    for (k, c) in certs.into_iter().enumerate() {
        report.push(&format!("proven.{k}"), Verdict::proven(c.clone()).conditional("a hypothesis"));
        report.push(&format!("refuted.{k}"), Verdict::refuted(c.clone()));
        report.push(&format!("against.{k}"), Verdict::evidence_against(budget.clone(), "note", Some(c)));
    }
    report.push("evidence", Verdict::evidence(budget).with_note("more"));
    report.push("inconclusive", Verdict::inconclusive("budget"));
    let v = serde_json::to_value(&report).unwrap();
    let kinds: std::collections::BTreeSet<&str> =
        v["properties"].as_array().unwrap().iter().map(|p| p["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.len(), 5, "{kinds:?}");
    assert_valid(&v);

    // and the schema is not vacuous
    let mut broken = v.clone();
    broken["properties"][0]["verdict"]["certificate"]["type"] = "mystery".into();
    assert!(!validator().is_valid(&broken));
}
