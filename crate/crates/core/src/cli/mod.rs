//! Command line front end: ring files, subcommands and JSON reports.
//!
//! Exit codes: 0 completed, 1 usage or parse error, 2 the headline property
//! was refuted, 3 a contradiction was raised.

pub mod report;
pub mod ringfile;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::corpus::{Family, RingGenerator};
use crate::finjective::{classify, ClassificationReport, ClassifyBudget};
use crate::frobenius::{frobenius_closure, ClosureStatus};
use crate::parameters::{buchsbaum_constant, buchsbaum_verdict, flc_evidence, is_d_sequence, DEFAULT_N_SCHEDULE};
use crate::ringkit::{ParameterSystem, RingPresentation, SopSearch};
use crate::verdict::{derive_seed, Budget, Certificate, Verdict};
pub use report::{Aggregate, Report, SearchReport};
pub use ringfile::{parse_ring_file, print_ring_file, RingFile, RingFileError};

#[derive(Debug, Parser)]
#[command(name = "fsing", version, about = "Frobenius singularity checks for graded rings over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 3)]
    pub emax: u32,
    /// Deep exponents N, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_SCHEDULE.to_vec())]
    pub deep: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output (a directory for `search`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall times in the report.
    #[arg(long)]
    pub timings: bool,
}

impl Common {
    pub fn budget(&self) -> ClassifyBudget {
        ClassifyBudget {
            samples: self.samples,
            seed: self.seed,
            e_max: self.emax,
            deep: self.deep.clone(),
            ..ClassifyBudget::default()
        }
    }

    /// Flags that change results, for reproduction command lines.
    fn flags(&self) -> String {
        let deep: Vec<String> = self.deep.iter().map(u32::to_string).collect();
        format!(
            "--seed {} --samples {} --emax {} --deep {}",
            self.seed,
            self.samples,
            self.emax,
            deep.join(",")
        )
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full classification report.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Frobenius closure of an ideal given by generators (comma separated).
    Closure {
        file: PathBuf,
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        common: Common,
    },
    /// d-sequence test for part of a system of parameters.
    Dseq {
        file: PathBuf,
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        common: Common,
    },
    /// Finite local cohomology evidence per deep exponent.
    Flc {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Buchsbaum channels and the l - e constant.
    Buchsbaum {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// F-injectivity with its channels.
    Finjective {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classify generated rings and keep candidates for closer study.
    Search {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Aggregate the JSON reports in a directory.
    Report {
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    RingFile { path: String, source: RingFileError },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn load_ring(path: &Path) -> Result<RingPresentation, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_ring_file(&text).map_err(|source| CliError::RingFile {
        path: path.display().to_string(),
        source,
    })
}

fn parse_list(ring: &RingPresentation, text: &str) -> Result<Vec<crate::kernel::Polynomial>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| ring.parse(s).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn ms(t: Instant) -> f64 {
    // rounded so text output stays short
    (t.elapsed().as_secs_f64() * 10_000.0).round() / 10.0
}

/// Output of one subcommand: the text to print, where to put it and the exit code.
pub struct Outcome {
    pub body: String,
    pub out: Option<PathBuf>,
    pub code: i32,
}

fn render<T: serde::Serialize>(value: &T, text: String, common: &Common, code: i32) -> Outcome {
    let body = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    Outcome {
        body,
        out: common.out.clone(),
        code,
    }
}

/// Properties of a classification in report order, headline last.
pub fn classification_entries(rep: &ClassificationReport, finjective_only: bool) -> Vec<(String, Verdict)> {
    let mut v: Vec<(String, Verdict)> = Vec::new();
    if !finjective_only {
        v.push(("reduced".into(), rep.reduced.clone()));
        v.push(("f_pure".into(), rep.f_pure.clone()));
        v.push(("cohen_macaulay".into(), rep.cohen_macaulay.clone()));
        for l in &rep.flc_levels {
            v.push((format!("flc.N={}", l.n), l.verdict.clone()));
        }
        v.push(("flc".into(), rep.flc.clone()));
        if let Some(b) = &rep.buchsbaum {
            v.push(("buchsbaum.colon".into(), b.colon.clone()));
            v.push(("buchsbaum.d_sequence".into(), b.d_sequence.clone()));
            v.push(("buchsbaum.invariant".into(), b.invariant.verdict.clone()));
        }
        v.push(("buchsbaum".into(), rep.buchsbaum_verdict()));
        if let Some(c) = &rep.constant {
            v.push(("buchsbaum.constant".into(), c.verdict.clone()));
        }
    }
    v.push(("f_injective.frobenius_matrix".into(), rep.channel_a.clone()));
    v.push(("f_injective.sop_closure".into(), rep.channel_b_verdict()));
    if let Some(cm) = &rep.cm_test {
        v.push(("f_injective.cm_test".into(), cm.clone()));
    }
    for p in &rep.partial {
        v.push((format!("f_injective.partial.t={}", p.t), p.partial.clone()));
    }
    v.push(("f_injective.top".into(), rep.top.clone()));
    v.push(("f_injective".into(), rep.f_injective.clone()));
    v
}

pub fn classification_report(command: &str, ring: &RingPresentation, rep: &ClassificationReport, seed: u64, finjective_only: bool) -> Report {
    let mut out = Report::new(command, seed, ring, "f_injective");
    for (name, v) in classification_entries(rep, finjective_only) {
        out.push(&name, v);
    }
    out.contradictions = rep.contradictions.clone();
    out.errors = rep.errors.clone();
    out.details = Some(serde_json::to_value(rep).expect("reports serialize"));
    out
}

fn finish(mut report: Report, common: &Common, start: Instant) -> Outcome {
    if common.timings {
        report.wall_ms = Some(ms(start));
    } else {
        for e in &mut report.properties {
            e.wall_ms = None;
        }
    }
    let code = report.exit_code();
    let text = report.to_text();
    render(&report, text, common, code)
}

fn timed(report: &mut Report, name: &str, f: impl FnOnce() -> Verdict) {
    let t = Instant::now();
    let v = f();
    report.push(name, v);
    report.properties.last_mut().expect("just pushed").wall_ms = Some(ms(t));
}

fn or_inconclusive<T>(r: Result<T, impl ToString>, errors: &mut Vec<String>, f: impl FnOnce(T) -> Verdict) -> Verdict {
    match r {
        Ok(x) => f(x),
        Err(e) => {
            let msg = e.to_string();
            errors.push(msg.clone());
            Verdict::inconclusive(msg)
        }
    }
}

fn cmd_classify(path: &Path, common: &Common, finjective_only: bool) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ring = load_ring(path)?;
    let rep = classify(&ring, &common.budget());
    let name = if finjective_only { "finjective" } else { "classify" };
    let report = classification_report(name, &ring, &rep, common.seed, finjective_only);
    Ok(finish(report, common, start))
}

fn cmd_closure(path: &Path, ideal: &str, common: &Common) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ring = load_ring(path)?;
    let gens = parse_list(&ring, ideal)?;
    let ideal = ring.ideal(&gens);
    let mut report = Report::new("closure", common.seed, &ring, "frobenius_closed");
    let mut chain = Vec::new();
    let mut errors = Vec::new();
    timed(&mut report, "frobenius_closed", || {
        or_inconclusive(frobenius_closure(&ring, &ideal, common.emax), &mut errors, |out| {
            chain = out
                .chain
                .iter()
                .map(|k| k.gb().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()).unwrap_or_default())
                .collect();
            let budget = Budget::new(1, common.seed)
                .with("e_max", common.emax)
                .with("degree_bound", out.degree_bound.map_or("exact".to_string(), |d| d.to_string()));
            match out.status {
                ClosureStatus::NotClosed { witness, level } => Verdict::refuted(Certificate::ClosureWitness {
                    element: witness,
                    level,
                    ideal: gens.clone(),
                }),
                ClosureStatus::Closed { e_max } => Verdict::evidence(budget.with("e_reached", e_max)),
            }
        })
    });
    report.errors = errors;
    report.details = Some(serde_json::json!({ "chain": chain }));
    Ok(finish(report, common, start))
}

fn cmd_dseq(path: &Path, seq: &str, common: &Common) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ring = load_ring(path)?;
    let elements = parse_list(&ring, seq)?;
    let mut report = Report::new("dseq", common.seed, &ring, "d_sequence");
    let mut errors = Vec::new();
    timed(&mut report, "d_sequence", || {
        let result = ParameterSystem::certify(&ring, elements).and_then(|s| is_d_sequence(&s));
        or_inconclusive(result, &mut errors, |r| match r.failure {
            None => Verdict::proven(Certificate::note("all colon pairs agree")),
            Some(f) => Verdict::refuted(Certificate::DSequenceFailure {
                i: f.i,
                j: f.j,
                element: f.witness,
            }),
        })
    });
    report.errors = errors;
    Ok(finish(report, common, start))
}

fn cmd_flc(path: &Path, common: &Common) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ring = load_ring(path)?;
    let mut report = Report::new("flc", common.seed, &ring, "flc");
    let mut errors = Vec::new();
    let sop = ring.find_sop(derive_seed(common.seed, "sop", 0), &SopSearch::for_ring(&ring));
    let mut cm = Verdict::inconclusive("no system of parameters");
    timed(&mut report, "cohen_macaulay", || {
        cm = or_inconclusive(sop.map_err(|e| e.to_string()), &mut errors, |s| {
            ring.is_cohen_macaulay(&s).unwrap_or_else(|e| Verdict::inconclusive(e))
        });
        cm.clone()
    });
    let mut last = Verdict::inconclusive("empty deep schedule");
    for &n in &common.deep {
        timed(&mut report, &format!("flc.N={n}"), || {
            last = or_inconclusive(flc_evidence(&ring, common.samples, n, common.seed), &mut errors, |v| v);
            last.clone()
        });
    }
    let combined = if cm.is_proven() {
        Verdict::proven(Certificate::note("Cohen-Macaulay: H^i = 0 for i < dim R"))
    } else {
        last
    };
    report.push("flc", combined);
    report.errors = errors;
    Ok(finish(report, common, start))
}

fn cmd_buchsbaum(path: &Path, common: &Common) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ring = load_ring(path)?;
    let mut report = Report::new("buchsbaum", common.seed, &ring, "buchsbaum");
    let mut errors = Vec::new();
    let t = Instant::now();
    match buchsbaum_verdict(&ring, common.samples, common.seed) {
        Ok(b) => {
            report.push("buchsbaum.colon", b.colon.clone());
            report.push("buchsbaum.d_sequence", b.d_sequence.clone());
            report.push("buchsbaum.invariant", b.invariant.verdict.clone());
            report.push("buchsbaum", b.verdict.clone());
            report.properties.last_mut().expect("just pushed").wall_ms = Some(ms(t));
            report.details = Some(serde_json::json!({ "delta_values": b.invariant.values }));
        }
        Err(e) => {
            errors.push(e.to_string());
            report.push("buchsbaum", Verdict::inconclusive(e));
        }
    }
    timed(&mut report, "buchsbaum.constant", || {
        or_inconclusive(buchsbaum_constant(&ring, &common.deep, 3, common.seed), &mut errors, |c| c.verdict)
    });
    report.errors = errors;
    Ok(finish(report, common, start))
}

/// A generated ring is kept when FLC looks false, some parameter ideal is not
/// Frobenius closed, and nothing rules out F-injectivity outright.
fn candidate_reason(rep: &ClassificationReport) -> Option<String> {
    let not_flc = rep.flc.is_negative();
    let not_closed = rep.channel_b_verdict().is_refuted();
    let reduced_ok = !rep.reduced.is_refuted();
    let injective_open = !rep.f_injective.is_refuted();
    (not_flc && not_closed && reduced_ok && injective_open).then(|| {
        let purity = if rep.f_pure.is_proven() { "F-pure" } else { rep.f_pure.kind() };
        format!("FLC {} with a non-closed parameter ideal; reducedness {}, F-purity {}", rep.flc.kind(), rep.reduced.kind(), purity)
    })
}

fn cmd_search(family: Family, count: usize, common: &Common) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let generator = RingGenerator::new(family, common.seed);
    let rings: Vec<_> = generator.generate(count).collect();
    let budget = common.budget();
    let reports: Vec<ClassificationReport> = rings.par_iter().map(|(_, r)| classify(r, &budget)).collect();

    let out_dir = common.out.clone().unwrap_or_else(|| PathBuf::from("search-out"));
    let mut entries = Vec::new();
    let mut candidates = Vec::new();
    let mut contradictions = Vec::new();
    let mut errors = Vec::new();
    for (k, ((_, ring), rep)) in rings.iter().zip(&reports).enumerate() {
        let name = format!("{family}-{}-{k}", common.seed);
        let kinds = classification_entries(rep, false)
            .into_iter()
            .map(|(p, v)| (p, v.kind().to_string()))
            .collect();
        for c in &rep.contradictions {
            contradictions.push(crate::finjective::Contradiction {
                rule: c.rule.clone(),
                detail: format!("{name}: {}", c.detail),
            });
        }
        errors.extend(rep.errors.iter().map(|e| format!("{name}: {e}")));
        let reason = candidate_reason(rep);
        if let Some(reason) = &reason {
            std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
            let ring_path = out_dir.join(format!("{name}.ring"));
            let json_path = out_dir.join(format!("{name}.json"));
            std::fs::write(&ring_path, print_ring_file(ring)).map_err(io_err(&ring_path))?;
            let full = classification_report("classify", ring, rep, common.seed, false);
            let mut body = serde_json::to_string_pretty(&full).expect("reports serialize");
            body.push('\n');
            std::fs::write(&json_path, body).map_err(io_err(&json_path))?;
            candidates.push(report::Candidate {
                name: name.clone(),
                reason: reason.clone(),
                reproduce: format!("fsing classify {} --format json {}", ring_path.display(), common.flags()),
                ring_file: ring_path.display().to_string(),
            });
        }
        entries.push(report::SearchEntry {
            index: k as u64,
            ring: report::RingEcho::new(ring),
            kinds,
            contradictions: rep.contradictions.len(),
            candidate: reason.is_some(),
        });
    }
    let report = SearchReport {
        format_version: report::FORMAT_VERSION,
        tool: report::TOOL,
        tool_version: report::TOOL_VERSION,
        command: format!("fsing search --family {family} --count {count} {}", common.flags()),
        family: family.to_string(),
        count,
        seed: common.seed,
        rings: entries,
        candidates,
        contradictions,
        errors,
        wall_ms: common.timings.then(|| ms(start)),
    };
    let code = if report.contradictions.is_empty() { 0 } else { 3 };
    let text = report.to_text();
    let mut outcome = render(&report, text, common, code);
    // the directory holds candidates; the summary goes next to them
    outcome.out = common.out.as_ref().map(|d| d.join("search.json"));
    if outcome.out.is_some() {
        std::fs::create_dir_all(&out_dir).map_err(io_err(&out_dir))?;
    }
    Ok(outcome)
}

fn cmd_report(dir: &Path, common: &Common) -> Result<Outcome, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut agg = Aggregate {
        format_version: report::FORMAT_VERSION,
        tool: report::TOOL,
        tool_version: report::TOOL_VERSION,
        ..Aggregate::default()
    };
    for f in files {
        let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let value: serde_json::Value = match std::fs::read_to_string(&f)
            .map_err(|e| e.to_string())
            .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
        {
            Ok(v) => v,
            Err(e) => {
                agg.skipped.push(format!("{name}: {e}"));
                continue;
            }
        };
        if value.get("tool").and_then(|t| t.as_str()) != Some(report::TOOL) {
            agg.skipped.push(format!("{name}: not a report"));
            continue;
        }
        agg.reports += 1;
        let props = value.get("properties").and_then(|p| p.as_array()).cloned().unwrap_or_default();
        for p in props {
            if let (Some(prop), Some(kind)) = (p["property"].as_str(), p["kind"].as_str()) {
                *agg.properties.entry(prop.to_string()).or_default().entry(kind.to_string()).or_default() += 1;
            }
        }
        let n = value.get("contradictions").and_then(|c| c.as_array()).map_or(0, Vec::len);
        if n > 0 {
            agg.contradictions += n;
            agg.files_with_contradictions.push(name.clone());
        }
        if let Some(cs) = value.get("candidates").and_then(|c| c.as_array()) {
            agg.candidates.extend(cs.iter().filter_map(|c| c["name"].as_str().map(str::to_string)));
        }
    }
    let code = if agg.contradictions > 0 { 3 } else { 0 };
    let text = agg.to_text();
    Ok(render(&agg, text, common, code))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Classify { file, common } => cmd_classify(file, common, false),
        Command::Finjective { file, common } => cmd_classify(file, common, true),
        Command::Closure { file, ideal, common } => cmd_closure(file, ideal, common),
        Command::Dseq { file, seq, common } => cmd_dseq(file, seq, common),
        Command::Flc { file, common } => cmd_flc(file, common),
        Command::Buchsbaum { file, common } => cmd_buchsbaum(file, common),
        Command::Search { family, count, common } => cmd_search(*family, *count, common),
        Command::Report { dir, common } => cmd_report(dir, common),
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &outcome.out {
                Some(path) => std::fs::write(path, &outcome.body).map_err(io_err(path)),
                None => stdout.write_all(outcome.body.as_bytes()).map_err(io_err(Path::new("<stdout>"))),
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
