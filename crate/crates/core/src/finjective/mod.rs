//! F-injectivity: the local cohomology channel, closure sampling of
//! parameter ideals, partial systems, top cohomology and the classifier.

mod classify;
pub mod presentation;

use rayon::prelude::*;
use serde::Serialize;

pub use classify::{classify, reducedness_screen, ClassifyBudget, ClassificationReport, Contradiction, StageTime};
pub use presentation::{
    f_injective_on_hi, frobenius_action_matrix, lc_presentation, FrobeniusMatrix, LCPresentation, PresentationSummary,
};

use crate::frobenius::{closure_membership, frobenius_closure, is_frobenius_closed, Membership};
use crate::kernel::{IdealHandle, Polynomial};
use crate::parameters::{sample_systems, SAMPLE_DEGREES};
use crate::ringkit::{ParameterSystem, RingError, RingPresentation};
use crate::verdict::{Budget, Certificate, Verdict};

pub const FLC: &str = "finite local cohomology (evidence)";

fn sop_ideal(ring: &RingPresentation, elements: &[Polynomial]) -> IdealHandle {
    IdealHandle::new(ring.ring(), elements.to_vec())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureSample {
    pub sop: Vec<Polynomial>,
    pub deep: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureSampling {
    pub verdict: Verdict,
    pub samples: Vec<ClosureSample>,
}

/// Runs the closure test on sampled parameter ideals; even-indexed samples are
/// squared to make them deep. The first non-closed ideal refutes
/// F-injectivity, conditional on FLC.
pub fn sop_closure_sampling(
    ring: &RingPresentation,
    samples: usize,
    e_max: u32,
    seed: u64,
) -> Result<ClosureSampling, RingError> {
    let budget = Budget::new(samples, seed).with("e_max", e_max).with("degrees", "1,2,3");
    if ring.dim() == 0 {
        let v = is_frobenius_closed(ring, &IdealHandle::zero(ring.ring()), e_max)?;
        return Ok(ClosureSampling {
            verdict: match v {
                Verdict::Refuted { witness, .. } => Verdict::refuted(witness),
                _ => Verdict::evidence(budget),
            },
            samples: vec![],
        });
    }
    let systems = sample_systems(ring, "closure", seed, samples, &SAMPLE_DEGREES);
    let results: Vec<Result<Option<ClosureSample>, RingError>> = systems
        .into_par_iter()
        .enumerate()
        .map(|(k, s)| {
            let s = match s {
                Ok(s) => s,
                Err(RingError::NoSop) => return Ok(None),
                Err(e) => return Err(e),
            };
            let deep = k % 2 == 1;
            let s = if deep { s.power(ring, 2)? } else { s };
            let v = is_frobenius_closed(ring, &sop_ideal(ring, s.elements()), e_max)?;
            Ok(Some(ClosureSample {
                sop: s.elements().to_vec(),
                deep,
                verdict: v,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(s) = r? {
            out.push(s);
        }
    }
    let completed = out.iter().filter(|s| s.verdict.is_evidence_for()).count();
    let verdict = match out.iter().find(|s| s.verdict.is_refuted()) {
        Some(s) => s.verdict.clone().conditional(FLC),
        None if out.is_empty() => Verdict::inconclusive(RingError::NoSop),
        None if completed == 0 => Verdict::inconclusive("every sampled closure exceeded the cost cap"),
        None => Verdict::evidence(budget.with("completed", completed)),
    };
    Ok(ClosureSampling { verdict, samples: out })
}

/// For a Cohen–Macaulay ring a single parameter ideal decides: not closed
/// refutes F-injectivity outright.
pub fn cm_finjective_test(ring: &RingPresentation, sop: &ParameterSystem, e_max: u32) -> Result<Verdict, RingError> {
    if !ring.is_cohen_macaulay(sop)?.is_proven() {
        return Err(RingError::Argument("ring is not certified Cohen-Macaulay on this system".into()));
    }
    let ideal = if sop.is_empty() {
        IdealHandle::zero(ring.ring())
    } else {
        sop_ideal(ring, sop.elements())
    };
    is_frobenius_closed(ring, &ideal, e_max)
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialClosureReport {
    pub t: usize,
    pub partial: Verdict,
    /// Degrees up to which `(x_1..x_t, x_(t+1)^s, ..)` and `(x_1..x_t)` were compared.
    pub window: u32,
    /// Smallest `s <= s_max` with agreement through `window`.
    pub stable_s: Option<u32>,
    /// First degree where the two ideals differ, for `s = 1..=s_max`;
    /// strictly increasing when the intersection identity holds.
    pub divergence: Vec<Option<u32>>,
    /// When the partial ideal is not closed: the same witness against a full
    /// system `(x_1..x_t, x_(t+1)^s, ..)`.
    pub full_refutation: Option<Verdict>,
    /// Set when a partial witness could not be carried to a full system.
    pub inheritance_failure: Option<String>,
}

/// Raises the trailing elements to the `s`-th power.
fn extend(ring: &RingPresentation, sop: &ParameterSystem, t: usize, s: u32) -> Result<ParameterSystem, RingError> {
    let elements = sop
        .elements()
        .iter()
        .enumerate()
        .map(|(k, x)| if k < t { x.clone() } else { x.pow(s as u64) })
        .collect();
    ParameterSystem::certify(ring, elements)
}

/// Carries a closure witness `y` of a partial system (level `e`) to a full
/// system `(x_1..x_t, x_(t+1)^s, ..)` not containing `y`.
pub fn inherit_witness(
    ring: &RingPresentation,
    partial: &ParameterSystem,
    sop: &ParameterSystem,
    y: &Polynomial,
    level: u32,
) -> Result<Result<Verdict, String>, RingError> {
    let t = partial.len();
    let dmin = sop.degrees()[t..].iter().copied().min().unwrap_or(1).max(1);
    let s = y.max_degree() / dmin + 1;
    let full = extend(ring, sop, t, s)?;
    let q = sop_ideal(ring, full.elements());
    if full.full_ideal().contains(y)? {
        return Ok(Err(format!("witness {y} lies in the extended system")));
    }
    match closure_membership(ring, y, &q, level)? {
        Membership::InClosure { level } => Ok(Ok(Verdict::refuted(Certificate::ClosureWitness {
            element: y.clone(),
            level,
            ideal: full.elements().to_vec(),
        }))),
        Membership::NotDetected { .. } => Ok(Err(format!(
            "witness {y} is not in the closure of the extended system at level {level}"
        ))),
    }
}

/// Closure of the partial system `(x_1..x_t)` and the degree-window form of
/// `∩_s (x_1..x_t, x_(t+1)^s, ..) = (x_1..x_t)`.
pub fn partial_sop_closure_check(
    ring: &RingPresentation,
    sop: &ParameterSystem,
    t: usize,
    e_max: u32,
    s_max: u32,
) -> Result<PartialClosureReport, RingError> {
    if t == 0 || t > sop.len() {
        return Err(RingError::Argument(format!("t = {t} outside 1..={}", sop.len())));
    }
    let partial = sop.prefix(ring, t);
    let pideal = sop_ideal(ring, partial.elements());
    let out = frobenius_closure(ring, &pideal, e_max)?;
    let verdict = crate::frobenius::closure_verdict(&pideal, &out, e_max);
    let p = partial.full_ideal();
    let weights = ring.ring().weights();
    let dmin = sop.degrees()[t..].iter().copied().min().unwrap_or(1).max(1);
    let window = (s_max.max(1) - 1) * dmin;
    let horizon = (s_max * sop.degrees().iter().copied().max().unwrap_or(1)) as usize;
    let p_series = p.hilbert_numerator()?.series(weights, horizon);
    let mut stable_s = None;
    let mut divergence = Vec::new();
    for s in 1..=s_max {
        let q = extend(ring, sop, t, s)?;
        let q_series = q.full_ideal().hilbert_numerator()?.series(weights, horizon);
        let first = q_series.iter().zip(&p_series).position(|(a, b)| a != b).map(|d| d as u32);
        if stable_s.is_none() && first.is_none_or(|d| d > window) {
            stable_s = Some(s);
        }
        divergence.push(first);
    }
    let (full_refutation, inheritance_failure) = match out.witness() {
        Some((y, level)) if t < sop.len() => match inherit_witness(ring, &partial, sop, y, level)? {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e)),
        },
        Some(_) => (Some(verdict.clone()), None),
        None => (None, None),
    };
    Ok(PartialClosureReport {
        t,
        partial: verdict,
        window,
        stable_s,
        divergence,
        full_refutation,
        inheritance_failure,
    })
}

/// Level-one closedness of the bracket powers `(x_1^q..x_n^q)`, `q = p^e`,
/// `e = 0..=e_max`: the vertical maps of the direct limit behind `H^n`.
pub fn top_cohomology_evidence(ring: &RingPresentation, sop: &ParameterSystem, e_max: u32) -> Result<Verdict, RingError> {
    if sop.is_empty() {
        return Ok(Verdict::inconclusive("dim R = 0: top cohomology is H^0, covered by the presentation"));
    }
    let p = ring.p();
    let mut q = 1u32;
    let mut reached = None;
    for e in 0..=e_max {
        let ideal = sop_ideal(ring, &sop.elements().iter().map(|x| x.pow(q as u64)).collect::<Vec<_>>());
        // the closure applies the cost cap, so larger q stop here
        match is_frobenius_closed(ring, &ideal, 1)? {
            v @ Verdict::Refuted { .. } => return Ok(v.conditional(&format!("bracket power q = {q} (e = {e})"))),
            Verdict::Inconclusive { .. } => break,
            _ => reached = Some(e),
        }
        q *= p;
    }
    Ok(match reached {
        None => Verdict::inconclusive(format!("closure cost or Gröbner budget exceeded already at q = 1")),
        Some(reached) => Verdict::evidence(
            Budget::new(1, 0).with("e_max", e_max).with("e_reached", reached).with("level", 1),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp() -> RingPresentation {
        RingPresentation::build(2, &["x", "y", "z"], &[2, 2, 3], &["z^2 + x^3 + y^3"]).unwrap()
    }

    fn two_planes() -> RingPresentation {
        RingPresentation::build(2, &["x", "y", "u", "v"], &[1, 1, 1, 1], &["x*u", "x*v", "y*u", "y*v"]).unwrap()
    }

    fn sop(r: &RingPresentation, xs: &[&str]) -> ParameterSystem {
        ParameterSystem::certify(r, r.parse_all(xs).unwrap()).unwrap()
    }

    #[test]
    fn cusp_channels() {
        let r = cusp();
        let s = sop(&r, &["x", "y"]);
        assert!(cm_finjective_test(&r, &s, 3).unwrap().is_refuted());
        assert!(top_cohomology_evidence(&r, &s, 2).unwrap().is_refuted());
        let part = partial_sop_closure_check(&r, &s, 2, 3, 4).unwrap();
        assert!(part.partial.is_refuted());
        assert!(sop_closure_sampling(&r, 4, 2, 0).unwrap().verdict.is_refuted());
    }

    #[test]
    fn two_planes_channels() {
        let r = two_planes();
        let s = sop(&r, &["x + u", "y + v"]);
        assert!(cm_finjective_test(&r, &s, 3).is_err());
        assert!(top_cohomology_evidence(&r, &s, 2).unwrap().is_evidence_for());
        let part = partial_sop_closure_check(&r, &s, 1, 3, 4).unwrap();
        assert!(part.partial.is_evidence_for(), "{:?}", part.partial);
        assert_eq!(part.stable_s, Some(4));
        assert_eq!(part.divergence, vec![Some(1), Some(2), Some(3), Some(4)]);
        assert!(sop_closure_sampling(&r, 4, 3, 0).unwrap().verdict.is_evidence_for());
    }

    #[test]
    fn polynomial_ring_channels() {
        let r = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        let s = sop(&r, &["x", "y"]);
        assert!(cm_finjective_test(&r, &s, 2).unwrap().is_evidence_for());
        let part = partial_sop_closure_check(&r, &s, 1, 2, 4).unwrap();
        assert!(part.partial.is_evidence_for());
        assert!(part.stable_s.is_some());
    }

    #[test]
    fn partial_witness_is_inherited() {
        // F_3[x,y,z]/(x^2): x is nilpotent, so (y) is not closed and neither is (y, z^s)
        let r = RingPresentation::build(3, &["x", "y", "z"], &[1, 1, 1], &["x^2"]).unwrap();
        let s = sop(&r, &["y", "z"]);
        let part = partial_sop_closure_check(&r, &s, 1, 1, 3).unwrap();
        assert!(part.partial.is_refuted());
        assert!(part.full_refutation.as_ref().unwrap().is_refuted());
        assert!(part.inheritance_failure.is_none());
    }
}
