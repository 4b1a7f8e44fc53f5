//! Line-based ring files.
//!
//! ```text
//! # comment
//! p 2
//! vars x y z
//! weights 2 2 3
//! gens z^2 + x^3 + y^3
//! ```
//! `weights` is optional (all 1). Generators are separated by commas and may
//! continue over several `gens` lines.

use std::fmt;

use crate::kernel::{parse_polynomial, FieldSpec, MonomialOrder, PolyRing};
use crate::ringkit::{RingError, RingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct RingFileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl RingFileError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

/// The parsed contents of a ring file before the presentation is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingFile {
    pub p: u64,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub gens: Vec<String>,
}

struct Located<T> {
    value: T,
    line: usize,
    column: usize,
}

/// Splits `line` into whitespace separated words with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

impl RingFile {
    pub fn parse(text: &str) -> Result<Self, RingFileError> {
        let mut p: Option<Located<u64>> = None;
        let mut vars: Option<Located<Vec<String>>> = None;
        let mut weights: Option<Located<Vec<u32>>> = None;
        // (text, line, column) of each generator
        let mut gens: Vec<(String, usize, usize)> = Vec::new();

        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            let ws = words(content);
            let Some(&(kcol, key)) = ws.first() else { continue };
            let rest = &ws[1..];
            let dup = |what: &str| RingFileError::at(line, kcol, format!("duplicate `{what}` line"));
            match key {
                "p" => {
                    if p.is_some() {
                        return Err(dup("p"));
                    }
                    let [(col, word)] = rest else {
                        return Err(RingFileError::at(line, kcol, "`p` takes exactly one integer"));
                    };
                    let value = word
                        .parse::<u64>()
                        .map_err(|_| RingFileError::at(line, *col, format!("not an integer: {word}")))?;
                    p = Some(Located { value, line, column: *col });
                }
                "vars" => {
                    if vars.is_some() {
                        return Err(dup("vars"));
                    }
                    if rest.is_empty() {
                        return Err(RingFileError::at(line, kcol, "`vars` needs at least one name"));
                    }
                    let mut names: Vec<String> = Vec::new();
                    for &(col, w) in rest {
                        let valid = w.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                            && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                        if !valid {
                            return Err(RingFileError::at(line, col, format!("invalid variable name: {w}")));
                        }
                        if names.iter().any(|n| n == w) {
                            return Err(RingFileError::at(line, col, format!("repeated variable: {w}")));
                        }
                        names.push(w.to_string());
                    }
                    vars = Some(Located { value: names, line, column: kcol });
                }
                "weights" => {
                    if weights.is_some() {
                        return Err(dup("weights"));
                    }
                    let mut ws = Vec::new();
                    for &(col, w) in rest {
                        match w.parse::<u32>() {
                            Ok(v) if v > 0 => ws.push(v),
                            _ => return Err(RingFileError::at(line, col, format!("weight must be a positive integer: {w}"))),
                        }
                    }
                    weights = Some(Located { value: ws, line, column: kcol });
                }
                "gens" => {
                    // column of the text after the key
                    let start = content.find("gens").unwrap_or(0) + 4;
                    let body = &content[start..];
                    let mut offset = start;
                    for piece in body.split(',') {
                        let col = content[..offset].chars().count() + 1;
                        if !piece.trim().is_empty() {
                            gens.push((piece.to_string(), line, col));
                        }
                        offset += piece.len() + 1;
                    }
                }
                other => return Err(RingFileError::at(line, kcol, format!("unknown key `{other}`"))),
            }
        }

        let p = p.ok_or_else(|| RingFileError::at(1, 1, "missing `p` line"))?;
        let vars = vars.ok_or_else(|| RingFileError::at(1, 1, "missing `vars` line"))?;
        let weights = match weights {
            None => Located {
                value: vec![1; vars.value.len()],
                line: vars.line,
                column: vars.column,
            },
            Some(w) if w.value.len() != vars.value.len() => {
                return Err(RingFileError::at(
                    w.line,
                    w.column,
                    format!("{} weights for {} variables", w.value.len(), vars.value.len()),
                ))
            }
            Some(w) => w,
        };

        let field = FieldSpec::new(p.value).map_err(|e| RingFileError::at(p.line, p.column, e.to_string()))?;
        let ring = PolyRing::new(field, vars.value.clone(), weights.value.clone(), MonomialOrder::WeightedGrevlex)
            .map_err(|e| RingFileError::at(weights.line, weights.column, e.to_string()))?;
        // validate every generator here so errors carry a location
        let mut texts = Vec::with_capacity(gens.len());
        for (text, line, col) in gens {
            let poly = parse_polynomial(&ring, &text).map_err(|e| {
                // column inside `text` counts only from the first character
                RingFileError::at(line, col + e.column - 1, e.message)
            })?;
            if !poly.is_homogeneous() {
                return Err(RingFileError::at(
                    line,
                    col,
                    format!("generator {poly} is not quasi-homogeneous"),
                ));
            }
            texts.push(poly.to_string());
        }
        Ok(RingFile {
            p: p.value,
            vars: vars.value,
            weights: weights.value,
            gens: texts,
        })
    }

    pub fn from_presentation(ring: &RingPresentation) -> Self {
        let s = ring.ring();
        RingFile {
            p: s.p() as u64,
            vars: s.names().to_vec(),
            weights: s.weights().to_vec(),
            gens: ring.defining().generators().iter().map(ToString::to_string).collect(),
        }
    }

    pub fn build(&self) -> Result<RingPresentation, RingError> {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let gens: Vec<&str> = self.gens.iter().map(String::as_str).collect();
        RingPresentation::build(self.p, &vars, &self.weights, &gens)
    }
}

impl fmt::Display for RingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {}", self.p)?;
        writeln!(f, "vars {}", self.vars.join(" "))?;
        if self.weights.iter().any(|&w| w != 1) {
            let ws: Vec<String> = self.weights.iter().map(u32::to_string).collect();
            writeln!(f, "weights {}", ws.join(" "))?;
        }
        if !self.gens.is_empty() {
            writeln!(f, "gens {}", self.gens.join(", "))?;
        }
        Ok(())
    }
}

/// Parses and builds in one step. Build failures after a successful parse
/// are reported at line 1.
pub fn parse_ring_file(text: &str) -> Result<RingPresentation, RingFileError> {
    let file = RingFile::parse(text)?;
    file.build().map_err(|e| RingFileError::at(1, 1, e.to_string()))
}

pub fn print_ring_file(ring: &RingPresentation) -> String {
    RingFile::from_presentation(ring).to_string()
}
