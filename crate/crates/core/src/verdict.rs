//! Verdicts separate finite certificates from sampled evidence.
//!
//! `Proven` and `Refuted` always carry something a caller can re-check with a
//! few membership tests; `Evidence` records the sampling budget that produced
//! it; `Inconclusive` records the resource that ran out.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::kernel::Polynomial;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Budget {
    pub samples: usize,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

impl Budget {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// One sampled parameter ideal and its length/multiplicity difference.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DeltaSample {
    pub sop: Vec<Polynomial>,
    pub length: u64,
    pub multiplicity: u64,
    pub delta: i64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    None,
    /// `element^(p^level)` lies in the bracket power of `ideal` but `element` does not lie in `ideal`.
    ClosureWitness {
        element: Polynomial,
        level: u32,
        ideal: Vec<Polynomial>,
    },
    /// `element * x_i x_j` lies in `(x_1..x_{i-1})` but `element * x_j` does not.
    DSequenceFailure {
        i: usize,
        j: usize,
        element: Polynomial,
    },
    /// `element` lies in the colon named by `side` but not in the other one.
    ColonMismatch {
        i: usize,
        side: String,
        element: Polynomial,
    },
    LengthMultiplicity {
        length: u64,
        multiplicity: u64,
    },
    DistinctDifferences {
        first: DeltaSample,
        second: DeltaSample,
    },
    /// Generators of `(J^[p] : J)`; `escaping` is one outside `m^[p]` if any.
    FedderGenerators {
        escaping: Option<Polynomial>,
        generators: Vec<Polynomial>,
    },
    /// A nonzero class in `H^index` whose Frobenius image vanishes.
    KernelVector {
        index: usize,
        element: Polynomial,
        coordinates: Vec<u32>,
    },
    /// Frobenius matrix on `H^index` of full column rank.
    FullRank {
        index: usize,
        rank: usize,
        dimension: usize,
    },
    /// `element^power` lies in the defining ideal but `element` does not.
    Nilpotent { element: Polynomial, power: u32 },
    Note { text: String },
}

impl Certificate {
    pub fn note(text: impl Into<String>) -> Self {
        Certificate::Note { text: text.into() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Proven {
        #[serde(skip_serializing_if = "Option::is_none")]
        conditional_on: Option<String>,
        certificate: Certificate,
    },
    Refuted {
        #[serde(skip_serializing_if = "Option::is_none")]
        conditional_on: Option<String>,
        witness: Certificate,
    },
    /// `supports` is false for evidence against the property that is not a certificate.
    Evidence {
        supports: bool,
        budget: Budget,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
        /// A concrete failure behind evidence against, re-checkable but not
        /// decisive for the property.
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Certificate>,
    },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn proven(certificate: Certificate) -> Self {
        Verdict::Proven {
            conditional_on: None,
            certificate,
        }
    }

    pub fn refuted(witness: Certificate) -> Self {
        Verdict::Refuted {
            conditional_on: None,
            witness,
        }
    }

    pub fn evidence(budget: Budget) -> Self {
        Verdict::Evidence {
            supports: true,
            budget,
            note: None,
            witness: None,
        }
    }

    pub fn evidence_against(budget: Budget, note: impl Into<String>, witness: Option<Certificate>) -> Self {
        Verdict::Evidence {
            supports: false,
            budget,
            note: Some(note.into()),
            witness,
        }
    }

    pub fn with_note(mut self, text: impl Into<String>) -> Self {
        if let Verdict::Evidence { note, .. } = &mut self {
            *note = Some(text.into());
        }
        self
    }

    pub fn inconclusive(reason: impl ToString) -> Self {
        Verdict::Inconclusive {
            reason: reason.to_string(),
        }
    }

    pub fn conditional(self, on: &str) -> Self {
        match self {
            Verdict::Proven { certificate, .. } => Verdict::Proven {
                conditional_on: Some(on.to_string()),
                certificate,
            },
            Verdict::Refuted { witness, .. } => Verdict::Refuted {
                conditional_on: Some(on.to_string()),
                witness,
            },
            v => v,
        }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    /// Proven, or evidence in favour.
    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            Verdict::Proven { .. } | Verdict::Evidence { supports: true, .. }
        )
    }

    pub fn is_evidence_for(&self) -> bool {
        matches!(self, Verdict::Evidence { supports: true, .. })
    }

    pub fn is_negative(&self) -> bool {
        matches!(
            self,
            Verdict::Refuted { .. } | Verdict::Evidence { supports: false, .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Proven { .. } => "proven",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Evidence { supports: true, .. } => "evidence",
            Verdict::Evidence { supports: false, .. } => "evidence_against",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn witness(&self) -> Option<&Certificate> {
        match self {
            Verdict::Refuted { witness, .. } => Some(witness),
            Verdict::Evidence { witness, .. } => witness.as_ref(),
            _ => None,
        }
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Per-sample seed: `seed XOR fnv1a(label || k)`.
pub fn derive_seed(seed: u64, label: &str, k: u64) -> u64 {
    let mut h = FNV_OFFSET;
    for b in label.bytes().chain(k.to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    seed ^ h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        assert_eq!(derive_seed(7, "flc", 0), derive_seed(7, "flc", 0));
        assert_ne!(derive_seed(7, "flc", 0), derive_seed(7, "flc", 1));
        assert_ne!(derive_seed(7, "flc", 0), derive_seed(7, "sop", 0));
    }

    #[test]
    fn kinds() {
        let v = Verdict::evidence_against(Budget::new(3, 1), "x", None);
        assert_eq!(v.kind(), "evidence_against");
        assert!(v.is_negative());
        let p = Verdict::proven(Certificate::None).conditional("buchsbaum");
        assert!(matches!(p, Verdict::Proven { conditional_on: Some(_), .. }));
    }
}
