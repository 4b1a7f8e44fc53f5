use std::time::Instant;

use serde::Serialize;

use super::presentation::{f_injective_on_hi, frobenius_action_matrix, lc_presentation, PresentationSummary};
use super::{
    cm_finjective_test, inherit_witness, partial_sop_closure_check, sop_closure_sampling, top_cohomology_evidence,
    ClosureSampling, PartialClosureReport, FLC,
};
use crate::frobenius::{fedder_f_pure, frobenius_closure, frobenius_root};
use crate::kernel::{IdealHandle, Polynomial};
use crate::parameters::{
    buchsbaum_constant, buchsbaum_verdict, flc_evidence, unmixed_denominator, BuchsbaumReport, ConstantReport,
    UnmixedCheck, DEFAULT_N_SCHEDULE,
};
use crate::ringkit::{binomial, ParameterSystem, RingError, RingPresentation, SopSearch};
use crate::verdict::{derive_seed, Budget, Certificate, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyBudget {
    pub samples: usize,
    pub seed: u64,
    pub e_max: u32,
    /// Bracket levels for the top cohomology channel.
    pub top_e_max: u32,
    pub deep: Vec<u32>,
    pub s_max: u32,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        Self {
            samples: 10,
            seed: 0,
            e_max: 3,
            top_e_max: 2,
            deep: DEFAULT_N_SCHEDULE.to_vec(),
            s_max: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlcLevel {
    pub n: u32,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyEntry {
    pub presentation: PresentationSummary,
    pub frobenius: Verdict,
    /// For a kernel class: the derived closure witness against a full system.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CConsistency {
    /// `sum_i binom(n-1, i) l(N_i/D_i)`, `0 <= i <= n-1`
    pub sum: i64,
    pub constant: i64,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub sop: Vec<Polynomial>,
    pub reduced: Verdict,
    pub f_pure: Verdict,
    pub cohen_macaulay: Verdict,
    pub flc: Verdict,
    pub flc_levels: Vec<FlcLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub buchsbaum: Option<BuchsbaumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<ConstantReport>,
    /// Why the presentation channel did not run, if it did not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation_gate: Option<String>,
    pub local_cohomology: Vec<CohomologyEntry>,
    pub unmixed: Vec<UnmixedCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_consistency: Option<CConsistency>,
    pub channel_a: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_b: Option<ClosureSampling>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cm_test: Option<Verdict>,
    pub partial: Vec<PartialClosureReport>,
    pub top: Verdict,
    pub f_injective: Verdict,
    pub contradictions: Vec<Contradiction>,
    pub errors: Vec<String>,
    /// Wall time per stage; not serialized so reports stay deterministic.
    #[serde(skip)]
    pub stages: Vec<StageTime>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageTime {
    pub stage: String,
    pub ms: f64,
}

impl ClassificationReport {
    pub fn channel_b_verdict(&self) -> Verdict {
        self.channel_b
            .as_ref()
            .map(|b| b.verdict.clone())
            .unwrap_or_else(|| Verdict::inconclusive("closure sampling failed"))
    }

    pub fn buchsbaum_verdict(&self) -> Verdict {
        self.buchsbaum
            .as_ref()
            .map(|b| b.verdict.clone())
            .unwrap_or_else(|| Verdict::inconclusive("Buchsbaum channels failed"))
    }

    /// `l - e` values observed on sampled systems.
    pub fn delta_values(&self) -> Vec<i64> {
        self.buchsbaum.as_ref().map(|b| b.invariant.values.clone()).unwrap_or_default()
    }
}

fn nilpotent(element: Polynomial, power: u32) -> Verdict {
    Verdict::refuted(Certificate::Nilpotent { element, power })
}

/// Squarefree monomial ideals and hypersurfaces with small singular locus are
/// reduced by certificate; otherwise nilpotents `y^p ∈ J` are searched degree
/// by degree (exact when `R` is artinian).
pub fn reducedness_screen(ring: &RingPresentation) -> Result<Verdict, RingError> {
    if ring.is_squarefree_monomial() {
        return Ok(Verdict::proven(Certificate::note("squarefree monomial ideal")));
    }
    let gens: Vec<&Polynomial> = ring.defining().generators().iter().filter(|g| !g.is_zero()).collect();
    let p = ring.p();
    if let [f] = gens.as_slice() {
        let partials: Vec<Polynomial> = (0..ring.ring().nvars()).map(|i| f.derivative(i)).filter(|d| !d.is_zero()).collect();
        if partials.is_empty() {
            let root = frobenius_root(&IdealHandle::new(ring.ring(), vec![(*f).clone()]), p as u64)?;
            return Ok(nilpotent(root.generators()[0].clone(), p));
        }
        let sing = ring.defining().with(&partials);
        if sing.krull_dimension()? < ring.dim() as i32 {
            return Ok(Verdict::proven(Certificate::note(
                "hypersurface whose singular locus has codimension at least one",
            )));
        }
    }
    let zero = IdealHandle::zero(ring.ring());
    let out = frobenius_closure(ring, &zero, 1)?;
    Ok(match (out.witness(), out.degree_bound) {
        (Some((y, _)), _) => nilpotent(y.clone(), p),
        (None, None) => Verdict::proven(Certificate::note("artinian: no element with y^p in J outside J")),
        (None, Some(d)) => Verdict::evidence(Budget::new(1, 0).with("degree_bound", d))
            .with_note("no nilpotent y with y^p in J found in the scanned degrees"),
    })
}

struct Collector {
    errors: Vec<String>,
    stages: Vec<StageTime>,
}

impl Collector {
    fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        match self.stages.iter_mut().find(|s| s.stage == label) {
            Some(s) => s.ms += ms,
            None => self.stages.push(StageTime { stage: label.to_string(), ms }),
        }
        out
    }

    fn take<T>(&mut self, label: &str, f: impl FnOnce() -> Result<T, RingError>) -> Option<T> {
        let r = self.timed(label, f);
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("{label}: {e}"));
                None
            }
        }
    }

    fn verdict(&mut self, label: &str, f: impl FnOnce() -> Result<Verdict, RingError>) -> Verdict {
        let r = self.timed(label, f);
        match r {
            Ok(v) => v,
            Err(RingError::Kernel(crate::kernel::KernelError::Resource(e))) => Verdict::inconclusive(format!("{label}: resource limit: {e}")),
            Err(e) => {
                let v = Verdict::inconclusive(format!("{label}: {e}"));
                self.errors.push(format!("{label}: {e}"));
                v
            }
        }
    }
}

/// `z = y (x_1...x_i)` for a kernel class `y` of `H^i`: `z^p` lies in
/// `(x_1^2..x_i^2)^[p]` while `z` is outside `(x_1^2..x_i^2)`; the witness is
/// then carried to a full system.
fn derive_from_kernel(
    ring: &RingPresentation,
    sop: &ParameterSystem,
    i: usize,
    y: &Polynomial,
) -> Result<Result<Verdict, String>, RingError> {
    let xs = sop.elements();
    let z = xs[..i].iter().fold(y.clone(), |a, x| &a * x);
    let squared: Vec<Polynomial> = xs
        .iter()
        .enumerate()
        .map(|(k, x)| if k < i { x.pow(2) } else { x.clone() })
        .collect();
    let squared = ParameterSystem::certify(ring, squared)?;
    let partial = squared.prefix(ring, i);
    if partial.full_ideal().contains(&z)? {
        return Ok(Err(format!("{z} lies in (x_1^2..x_i^2)")));
    }
    let pideal = IdealHandle::new(ring.ring(), partial.elements().to_vec());
    let bracket = crate::frobenius::bracket_in_ring(ring, &pideal, ring.p() as u64)?;
    if !bracket.contains(&z.frobenius_power(ring.p() as u64)?)? {
        return Ok(Err(format!("({z})^p is outside the bracket power")));
    }
    if i == sop.len() {
        return Ok(Ok(Verdict::refuted(Certificate::ClosureWitness {
            element: z,
            level: 1,
            ideal: partial.elements().to_vec(),
        })));
    }
    inherit_witness(ring, &partial, &squared, &z, 1)
}

pub fn classify(ring: &RingPresentation, budget: &ClassifyBudget) -> ClassificationReport {
    let mut c = Collector {
        errors: Vec::new(),
        stages: Vec::new(),
    };
    let n = ring.dim();
    let seed = budget.seed;
    let reduced = c.verdict("reducedness", || reducedness_screen(ring));
    let f_pure = c.verdict("fedder", || fedder_f_pure(ring));

    let sop = c.take(
        "sop",
        || ring.find_sop(derive_seed(seed, "sop", 0), &SopSearch::for_ring(ring)),
    );
    let cohen_macaulay = match &sop {
        Some(s) => c.verdict("cohen-macaulay", || ring.is_cohen_macaulay(s)),
        None => Verdict::inconclusive("no system of parameters"),
    };

    // Cohen-Macaulay rings have H^i = 0 below the dimension, so sampling adds nothing
    let cm_note = || Certificate::note("Cohen-Macaulay: H^i = 0 for i < dim R");
    let mut flc_levels = Vec::new();
    for &level in &budget.deep {
        let v = if cohen_macaulay.is_proven() {
            Verdict::proven(cm_note())
        } else {
            c.verdict("flc", || flc_evidence(ring, budget.samples, level, seed))
        };
        flc_levels.push(FlcLevel { n: level, verdict: v });
    }
    let flc = if cohen_macaulay.is_proven() {
        Verdict::proven(cm_note())
    } else {
        flc_levels
            .last()
            .map(|l| l.verdict.clone())
            .unwrap_or_else(|| Verdict::inconclusive("empty deep schedule"))
    };

    let buchsbaum = c.take("buchsbaum", || buchsbaum_verdict(ring, budget.samples, seed));
    let buchsbaum_v = buchsbaum
        .as_ref()
        .map(|b| b.verdict.clone())
        .unwrap_or_else(|| Verdict::inconclusive("Buchsbaum channels failed"));
    let constant = c.take(
        "constant",
        || buchsbaum_constant(ring, &budget.deep, budget.samples.min(3).max(3), seed),
    );

    // presentation channel, gated on Buchsbaum and FLC evidence
    let mut local_cohomology = Vec::new();
    let mut unmixed = Vec::new();
    let mut c_consistency = None;
    let mut presentation_gate = None;
    let mut contradictions = Vec::new();
    let mut derived_refutation: Option<Verdict> = None;
    let gate = buchsbaum_v.is_positive() && flc.is_positive();
    let channel_a = match (&sop, gate) {
        (Some(s), true) => {
            let top = if n == 0 { 1 } else { n };
            let mut verdicts = Vec::new();
            let mut lengths = Vec::new();
            for i in 0..top {
                let entry = || {
                    lc_presentation(ring, s, i).and_then(|pres| {
                        let m = frobenius_action_matrix(ring, &pres)?;
                        Ok((PresentationSummary::from(&pres), f_injective_on_hi(&m)))
                    })
                };
                match c.take("presentation", entry) {
                    Some((summary, v)) => {
                        lengths.push(summary.length as i64);
                        let derived = match v.witness() {
                            Some(Certificate::KernelVector { element, .. }) if n > 0 => {
                                match c.take("kernel derivation", || derive_from_kernel(ring, s, i, element)) {
                                    Some(Ok(d)) => {
                                        derived_refutation.get_or_insert(d.clone());
                                        Some(d)
                                    }
                                    Some(Err(why)) => {
                                        contradictions.push(Contradiction {
                                            rule: "kernel-derivation".into(),
                                            detail: format!("H^{i} kernel class {element} gives no closure witness: {why}"),
                                        });
                                        None
                                    }
                                    None => None,
                                }
                            }
                            _ => None,
                        };
                        verdicts.push(v.clone());
                        local_cohomology.push(CohomologyEntry {
                            presentation: summary,
                            frobenius: v,
                            derived,
                        });
                    }
                    None => verdicts.push(Verdict::inconclusive("presentation failed")),
                }
            }
            if n > 0 {
                for i in 1..n {
                    for k in [2, 3] {
                        if let Some(u) = c.take("unmixed", || unmixed_denominator(ring, s, i, k)) {
                            unmixed.push(u);
                        }
                    }
                }
                if let (Some(cst), true) = (constant.as_ref().and_then(|r| r.constant), lengths.len() == n) {
                    let sum: i64 = lengths
                        .iter()
                        .enumerate()
                        .map(|(i, l)| binomial(n as u64 - 1, i as u64) as i64 * l)
                        .sum();
                    c_consistency = Some(CConsistency {
                        sum,
                        constant: cst,
                        agree: sum == cst,
                    });
                }
            }
            if let Some(v) = verdicts.iter().find(|v| v.is_refuted()) {
                v.clone()
            } else if verdicts.iter().all(|v| v.is_proven()) {
                Verdict::proven(Certificate::note(format!(
                    "Frobenius injective on H^i for 0 <= i < {}",
                    top.max(n)
                )))
                .conditional(super::presentation::STANDARDNESS)
            } else {
                Verdict::inconclusive("some presentation failed")
            }
        }
        (None, _) => Verdict::inconclusive("no system of parameters"),
        (_, false) => {
            presentation_gate = Some(format!(
                "Buchsbaum {} / FLC {}: standardness not supported",
                buchsbaum_v.kind(),
                flc.kind()
            ));
            Verdict::inconclusive("presentation channel gated off")
        }
    };

    let channel_b = c.take("closure sampling", || sop_closure_sampling(ring, budget.samples, budget.e_max, seed));
    let channel_b_v = channel_b
        .as_ref()
        .map(|b| b.verdict.clone())
        .unwrap_or_else(|| Verdict::inconclusive("closure sampling failed"));
    let cm_test = match (&sop, cohen_macaulay.is_proven()) {
        (Some(s), true) => Some(c.verdict("cm test", || cm_finjective_test(ring, s, budget.e_max))),
        _ => None,
    };
    let mut partial = Vec::new();
    if let Some(s) = &sop {
        for t in 1..n {
            if let Some(r) = c.take(
                "partial",
                || partial_sop_closure_check(ring, s, t, budget.e_max, budget.s_max),
            ) {
                partial.push(r);
            }
        }
    }
    let top = match &sop {
        Some(s) => c.verdict("top", || top_cohomology_evidence(ring, s, budget.top_e_max)),
        None => Verdict::inconclusive("no system of parameters"),
    };

    // headline
    let closure_refutation = channel_b_v
        .is_refuted()
        .then(|| channel_b_v.clone())
        .or_else(|| derived_refutation.clone())
        .or_else(|| partial.iter().find_map(|p| p.full_refutation.clone()));
    let f_injective = if let Some(v) = cm_test.as_ref().filter(|v| v.is_refuted()) {
        v.clone()
    } else if let (Some(v), true) = (&closure_refutation, flc.is_positive()) {
        match v {
            Verdict::Refuted { witness, .. } => Verdict::refuted(witness.clone()).conditional(FLC),
            v => v.clone(),
        }
    } else if channel_a.is_refuted() {
        channel_a.clone()
    } else if let Some(v) = &cm_test {
        v.clone()
    } else if channel_a.is_proven() && top.is_evidence_for() && channel_b_v.is_evidence_for() {
        Verdict::evidence(Budget::new(budget.samples, seed).with("e_max", budget.e_max))
            .with_note("H^i injective for i < dim R (conditional); H^dim R and parameter ideals by closure evidence")
    } else if channel_b_v.is_evidence_for() {
        channel_b_v.clone().with_note("closure of sampled parameter ideals only")
    } else {
        Verdict::inconclusive("no channel decided")
    };

    // contradictions
    let any_closure_refuted = channel_b_v.is_refuted()
        || cm_test.as_ref().is_some_and(|v| v.is_refuted())
        || partial.iter().any(|p| p.partial.is_refuted())
        || top.is_refuted()
        || derived_refutation.is_some();
    if f_pure.is_proven() && any_closure_refuted {
        contradictions.push(Contradiction {
            rule: "f-pure-closure".into(),
            detail: "F-pure by Fedder's criterion yet some ideal is not Frobenius closed".into(),
        });
    }
    if f_pure.is_proven() && channel_a.is_refuted() {
        contradictions.push(Contradiction {
            rule: "f-pure-injective".into(),
            detail: "F-pure by Fedder's criterion yet Frobenius has a kernel on local cohomology".into(),
        });
    }
    if flc.is_positive() && channel_a.is_proven() && top.is_evidence_for() && channel_b_v.is_refuted() {
        contradictions.push(Contradiction {
            rule: "channels".into(),
            detail: "injective on H^i (i < n) with closed top brackets, yet a parameter ideal is not closed".into(),
        });
    }
    if cm_test.as_ref().is_some_and(|v| v.is_evidence_for()) && channel_b_v.is_refuted() {
        contradictions.push(Contradiction {
            rule: "cm-single-ideal".into(),
            detail: "Cohen-Macaulay with one closed parameter ideal, yet another is not closed".into(),
        });
    }
    if cohen_macaulay.is_proven() && buchsbaum_v.is_refuted() {
        contradictions.push(Contradiction {
            rule: "cm-buchsbaum".into(),
            detail: "Cohen-Macaulay by length = multiplicity, yet a Buchsbaum channel fails".into(),
        });
    }
    if flc.is_positive() && channel_b_v.is_evidence_for() && buchsbaum_v.is_refuted() {
        contradictions.push(Contradiction {
            rule: "flc-closed-buchsbaum".into(),
            detail: "FLC and closed parameter ideals, yet not Buchsbaum".into(),
        });
    }
    for p in &partial {
        if let Some(why) = &p.inheritance_failure {
            contradictions.push(Contradiction {
                rule: "partial-inheritance".into(),
                detail: format!("t = {}: {why}", p.t),
            });
        }
    }
    if let Some(cc) = &c_consistency {
        if !cc.agree {
            contradictions.push(Contradiction {
                rule: "c-consistency".into(),
                detail: format!("sum of cohomology lengths {} but stabilized l - e = {}", cc.sum, cc.constant),
            });
        }
    }
    for u in unmixed.iter().filter(|u| !u.agree) {
        contradictions.push(Contradiction {
            rule: "unmixed-identity".into(),
            detail: format!("i = {}, k = {}: sides differ", u.i, u.k),
        });
    }

    ClassificationReport {
        dim: n,
        sop: sop.map(|s| s.elements().to_vec()).unwrap_or_default(),
        reduced,
        f_pure,
        cohen_macaulay,
        flc,
        flc_levels,
        buchsbaum,
        constant,
        presentation_gate,
        local_cohomology,
        unmixed,
        c_consistency,
        channel_a,
        channel_b,
        cm_test,
        partial,
        top,
        f_injective,
        contradictions,
        errors: c.errors,
        stages: c.stages,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn screen_examples() {
        let tp = RingPresentation::build(2, &["x", "y", "u", "v"], &[1, 1, 1, 1], &["x*u", "x*v", "y*u", "y*v"]).unwrap();
        assert!(reducedness_screen(&tp).unwrap().is_proven());
        let cusp = RingPresentation::build(2, &["x", "y", "z"], &[2, 2, 3], &["z^2 + x^3 + y^3"]).unwrap();
        assert!(reducedness_screen(&cusp).unwrap().is_proven());
        let square = RingPresentation::build(3, &["x", "y"], &[1, 1], &["x^3 + y^3"]).unwrap();
        match reducedness_screen(&square).unwrap().witness() {
            Some(Certificate::Nilpotent { element, power }) => {
                assert_eq!(element.to_string(), "x + y");
                assert_eq!(*power, 3);
            }
            w => panic!("{w:?}"),
        }
        let fat = RingPresentation::build(3, &["x", "y"], &[1, 1], &["x^2", "x*y"]).unwrap();
        assert!(reducedness_screen(&fat).unwrap().is_refuted());
    }
}
