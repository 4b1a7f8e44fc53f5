//! JSON reports. Field order is fixed by the struct definitions and every map
//! is a `BTreeMap`, so identical inputs give identical bytes. Wall times are
//! only present when asked for.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ringfile::RingFile;
use crate::finjective::Contradiction;
use crate::ringkit::RingPresentation;
use crate::verdict::Verdict;

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL: &str = "fsing";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingEcho {
    pub p: u64,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub gens: Vec<String>,
    pub dim: usize,
}

impl RingEcho {
    pub fn new(ring: &RingPresentation) -> Self {
        let file = RingFile::from_presentation(ring);
        Self {
            p: file.p,
            vars: file.vars,
            weights: file.weights,
            gens: file.gens,
            dim: ring.dim(),
        }
    }

    pub fn ring_file(&self) -> RingFile {
        RingFile {
            p: self.p,
            vars: self.vars.clone(),
            weights: self.weights.clone(),
            gens: self.gens.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyEntry {
    pub property: String,
    pub kind: &'static str,
    pub seed: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl PropertyEntry {
    pub fn new(property: impl Into<String>, seed: u64, verdict: Verdict) -> Self {
        Self {
            property: property.into(),
            kind: verdict.kind(),
            seed,
            verdict,
            wall_ms: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub ring: RingEcho,
    /// Property whose verdict decides exit code 2.
    pub headline: String,
    pub properties: Vec<PropertyEntry>,
    pub contradictions: Vec<Contradiction>,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, seed: u64, ring: &RingPresentation, headline: &str) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            tool: TOOL,
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            seed,
            ring: RingEcho::new(ring),
            headline: headline.to_string(),
            properties: Vec::new(),
            contradictions: Vec::new(),
            errors: Vec::new(),
            details: None,
            wall_ms: None,
        }
    }

    pub fn push(&mut self, property: &str, verdict: Verdict) {
        let seed = self.seed;
        self.properties.push(PropertyEntry::new(property, seed, verdict));
    }

    pub fn headline_verdict(&self) -> Option<&Verdict> {
        self.properties
            .iter()
            .find(|e| e.property == self.headline)
            .map(|e| &e.verdict)
    }

    /// 3 on contradictions, 2 when the headline property is refuted, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.contradictions.is_empty() {
            3
        } else if self.headline_verdict().is_some_and(Verdict::is_refuted) {
            2
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let r = &self.ring;
        out.push_str(&format!(
            "ring: F_{}[{}] / ({})  dim {}\n",
            r.p,
            r.vars.join(", "),
            r.gens.join(", "),
            r.dim
        ));
        for e in &self.properties {
            let marker = if e.property == self.headline { "*" } else { " " };
            out.push_str(&format!("{marker} {:<28} {}", e.property, e.kind));
            if let Some(extra) = verdict_detail(&e.verdict) {
                out.push_str(&format!("  {extra}"));
            }
            if let Some(ms) = e.wall_ms {
                out.push_str(&format!("  [{ms:.1} ms]"));
            }
            out.push('\n');
        }
        for c in &self.contradictions {
            out.push_str(&format!("CONTRADICTION {}: {}\n", c.rule, c.detail));
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        if let Some(ms) = self.wall_ms {
            out.push_str(&format!("wall time {ms:.1} ms\n"));
        }
        out
    }
}

/// One line summary of what backs a verdict.
pub fn verdict_detail(v: &Verdict) -> Option<String> {
    let cond = |c: &Option<String>| c.as_ref().map(|c| format!(" (given {c})")).unwrap_or_default();
    match v {
        Verdict::Proven { conditional_on, certificate } => Some(format!("{}{}", certificate_text(certificate)?, cond(conditional_on))),
        Verdict::Refuted { conditional_on, witness } => Some(format!("{}{}", certificate_text(witness)?, cond(conditional_on))),
        Verdict::Evidence { budget, note, witness, .. } => {
            let mut s = format!("samples {} seed {}", budget.samples, budget.seed);
            for (k, v) in &budget.params {
                s.push_str(&format!(" {k}={v}"));
            }
            if let Some(n) = note {
                s.push_str(&format!("; {n}"));
            }
            if let Some(w) = witness.as_ref().and_then(certificate_text) {
                s.push_str(&format!("; {w}"));
            }
            Some(s)
        }
        Verdict::Inconclusive { reason } => Some(reason.clone()),
    }
}

fn certificate_text(c: &crate::verdict::Certificate) -> Option<String> {
    use crate::verdict::Certificate as C;
    Some(match c {
        C::None => return None,
        C::ClosureWitness { element, level, .. } => format!("witness {element} at level {level}"),
        C::DSequenceFailure { i, j, element } => format!("d-sequence fails at i={i} j={j}: {element}"),
        C::ColonMismatch { i, side, element } => format!("colon mismatch at i={i} ({side}): {element}"),
        C::LengthMultiplicity { length, multiplicity } => format!("length {length}, multiplicity {multiplicity}"),
        C::DistinctDifferences { first, second } => format!("l - e takes values {} and {}", first.delta, second.delta),
        C::FedderGenerators { escaping, generators } => match escaping {
            Some(g) => format!("{g} escapes m^[p]"),
            None => format!("all {} generators lie in m^[p]", generators.len()),
        },
        C::KernelVector { index, element, .. } => format!("H^{index} kernel class {element}"),
        C::FullRank { index, rank, dimension } => format!("H^{index}: rank {rank} of {dimension}"),
        C::Nilpotent { element, power } => format!("({element})^{power} = 0"),
        C::Note { text } => text.clone(),
    })
}

/// One generated ring in a search run.
#[derive(Clone, Debug, Serialize)]
pub struct SearchEntry {
    pub index: u64,
    pub ring: RingEcho,
    /// property -> verdict kind
    pub kinds: BTreeMap<String, String>,
    pub contradictions: usize,
    pub candidate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub name: String,
    pub reason: String,
    /// Shell command that regenerates the full report.
    pub reproduce: String,
    pub ring_file: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub format_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub family: String,
    pub count: usize,
    pub seed: u64,
    pub rings: Vec<SearchEntry>,
    pub candidates: Vec<Candidate>,
    pub contradictions: Vec<Contradiction>,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl SearchReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "search {} count {} seed {}: {} candidates, {} contradictions\n",
            self.family,
            self.count,
            self.seed,
            self.candidates.len(),
            self.contradictions.len()
        );
        for c in &self.candidates {
            out.push_str(&format!("candidate {}: {}\n  {}\n", c.name, c.reason, c.reproduce));
        }
        for c in &self.contradictions {
            out.push_str(&format!("CONTRADICTION {}: {}\n", c.rule, c.detail));
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }
}

/// Aggregate over the JSON reports in a directory.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Aggregate {
    pub format_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub reports: usize,
    /// property -> verdict kind -> count
    pub properties: BTreeMap<String, BTreeMap<String, usize>>,
    pub contradictions: usize,
    pub files_with_contradictions: Vec<String>,
    pub candidates: Vec<String>,
    pub skipped: Vec<String>,
}

impl Aggregate {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} reports, {} contradictions\n", self.reports, self.contradictions);
        for (prop, kinds) in &self.properties {
            let ks: Vec<String> = kinds.iter().map(|(k, n)| format!("{k} {n}")).collect();
            out.push_str(&format!("  {prop:<28} {}\n", ks.join(", ")));
        }
        for f in &self.files_with_contradictions {
            out.push_str(&format!("contradictions in {f}\n"));
        }
        for c in &self.candidates {
            out.push_str(&format!("candidate {c}\n"));
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped {s}\n"));
        }
        out
    }
}
