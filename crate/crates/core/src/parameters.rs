//! d-sequences, finite local cohomology evidence, Buchsbaum criteria and the
//! unmixed-denominator identity.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::kernel::{IdealHandle, Polynomial};
use crate::ringkit::{ParameterSystem, RingError, RingPresentation, SopSearch};
pub use crate::verdict::Verdict;
use crate::verdict::{derive_seed, Budget, Certificate, DeltaSample};

/// Default degrees for sampled parameter systems
pub const SAMPLE_DEGREES: [u32; 3] = [1, 2, 3];
pub const DEFAULT_N_SCHEDULE: [u32; 3] = [2, 3, 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSequenceFailure {
    pub i: usize,
    pub j: usize,
    pub witness: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSequenceResult {
    pub pass: bool,
    pub failure: Option<DSequenceFailure>,
}

/// Checks `(x_1..x_{i-1}) : x_i x_j = (x_1..x_{i-1}) : x_j` for all `i <= j`
/// (1-based), in `R`.
pub fn is_d_sequence(seq: &ParameterSystem) -> Result<DSequenceResult, RingError> {
    let r = seq.len();
    let xs = seq.elements();
    for i in 1..=r {
        let base = seq.prefix_ideal(i - 1);
        for j in i..=r {
            let prod = &xs[i - 1] * &xs[j - 1];
            let big = base.colon_poly(&prod)?;
            let small = base.colon_poly(&xs[j - 1])?;
            if let Some(y) = small.first_outside(&big)? {
                return Ok(DSequenceResult {
                    pass: false,
                    failure: Some(DSequenceFailure {
                        i,
                        j,
                        witness: small.normal_form(y)?,
                    }),
                });
            }
        }
    }
    Ok(DSequenceResult { pass: true, failure: None })
}

/// `K : m` as the intersection of the colons by the variables.
pub fn colon_maximal(ring: &RingPresentation, k: &IdealHandle) -> Result<IdealHandle, RingError> {
    let mut acc: Option<IdealHandle> = None;
    for v in 0..ring.ring().nvars() {
        let c = k.colon_poly(&Polynomial::var(ring.ring(), v))?;
        acc = Some(match acc {
            None => c,
            Some(a) => a.intersect(&c)?,
        });
    }
    Ok(acc.unwrap_or_else(|| k.clone()))
}

/// `K : m^N`, by iterating the colon with `m`.
pub fn colon_maximal_power(ring: &RingPresentation, k: &IdealHandle, n: u32) -> Result<IdealHandle, RingError> {
    let mut acc = k.clone();
    for _ in 0..n {
        let next = colon_maximal(ring, &acc)?;
        if next.same_ideal(&acc)? {
            break;
        }
        acc = next;
    }
    Ok(acc)
}

fn colon_comparison(
    ring: &RingPresentation,
    sop: &ParameterSystem,
    n: u32,
    label: &str,
) -> Result<Verdict, RingError> {
    for i in 1..=sop.len() {
        let base = sop.prefix_ideal(i - 1);
        let by_x = base.colon_poly(&sop.elements()[i - 1])?;
        let by_m = colon_maximal_power(ring, base, n)?;
        // K : m^N is always inside K : x_i once x_i lies in m^N
        if let Some(y) = by_m.first_outside(&by_x)? {
            return Ok(Verdict::refuted(Certificate::ColonMismatch {
                i,
                side: "x_i".into(),
                element: by_m.normal_form(y)?,
            }));
        }
        if let Some(y) = by_x.first_outside(&by_m)? {
            return Ok(Verdict::refuted(Certificate::ColonMismatch {
                i,
                side: label.into(),
                element: by_x.normal_form(y)?,
            }));
        }
    }
    Ok(Verdict::proven(Certificate::note(format!(
        "(x_1..x_(i-1)) : x_i = (x_1..x_(i-1)) : {label} for every i on this system"
    ))))
}

/// `(x_1..x_{i-1}) : x_i = (x_1..x_{i-1}) : m^N` for every `i`, on one deep system.
pub fn colon_stabilization_check(ring: &RingPresentation, sop: &ParameterSystem, n: u32) -> Result<Verdict, RingError> {
    if sop.deep() < n {
        return Err(RingError::Argument(format!(
            "system is only certified in m^{}, not m^{n}",
            sop.deep()
        )));
    }
    colon_comparison(ring, sop, n, &format!("m^{n}"))
}

/// `(x_1..x_{i-1}) : x_i = (x_1..x_{i-1}) : m` for every `i`.
pub fn buchsbaum_colon_check(ring: &RingPresentation, sop: &ParameterSystem) -> Result<Verdict, RingError> {
    colon_comparison(ring, sop, 1, "m")
}

/// Samples `count` systems of parameters; sample `k` starts its degree search
/// at `degrees[k % len]`.
pub fn sample_systems(
    ring: &RingPresentation,
    label: &str,
    seed: u64,
    count: usize,
    degrees: &[u32],
) -> Vec<Result<ParameterSystem, RingError>> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let d = degrees[k % degrees.len()];
            let search = SopSearch::for_ring(ring).starting_at(d);
            ring.find_sop(derive_seed(seed, label, k as u64), &search)
        })
        .collect()
}

fn deep_system(ring: &RingPresentation, seed: u64, label: &str, k: usize, n: u32) -> Result<ParameterSystem, RingError> {
    let sop = ring.find_sop(derive_seed(seed, label, k as u64), &SopSearch::for_ring(ring))?;
    sop.power(ring, n)
}

/// Samples deep systems `x^N` and checks d-sequence and colon stabilization.
/// A failure refutes FLC only for this `N`, so it is reported as evidence against.
pub fn flc_evidence(ring: &RingPresentation, samples: usize, n: u32, seed: u64) -> Result<Verdict, RingError> {
    let budget = Budget::new(samples, seed).with("N", n);
    if ring.dim() == 0 {
        return Ok(Verdict::proven(Certificate::note("dim R = 0: every local cohomology module has finite length")));
    }
    let results: Vec<Result<Option<Certificate>, RingError>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let sop = deep_system(ring, seed, "flc", k, n)?;
            let ds = is_d_sequence(&sop)?;
            if let Some(f) = ds.failure {
                return Ok(Some(Certificate::DSequenceFailure {
                    i: f.i,
                    j: f.j,
                    element: f.witness,
                }));
            }
            Ok(colon_stabilization_check(ring, &sop, n)?.witness().cloned())
        })
        .collect();
    for r in results {
        match r {
            Err(RingError::NoSop) => return Ok(Verdict::inconclusive(RingError::NoSop)),
            Err(e) => return Err(e),
            Ok(Some(w)) => {
                return Ok(Verdict::evidence_against(
                    budget,
                    format!("a deep system in m^{n} fails; retry with larger --deep before concluding"),
                    Some(w),
                ))
            }
            Ok(None) => {}
        }
    }
    Ok(Verdict::evidence(budget))
}

/// `ℓ(R/q) - e(q; R)` for one system.
pub fn delta_sample(ring: &RingPresentation, sop: &ParameterSystem) -> Result<DeltaSample, RingError> {
    let length = ring.length_of(sop.full_ideal())?;
    let multiplicity = ring.multiplicity(sop)?;
    Ok(DeltaSample {
        sop: sop.elements().to_vec(),
        length,
        multiplicity,
        delta: length as i64 - multiplicity as i64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub verdict: Verdict,
    pub values: Vec<i64>,
    pub samples: Vec<DeltaSample>,
}

/// Compares `ℓ - e` over sampled systems of varied degrees; two distinct
/// values certify that `R` is not Buchsbaum.
pub fn invariant_constancy(ring: &RingPresentation, samples: usize, seed: u64) -> Result<InvariantReport, RingError> {
    let budget = Budget::new(samples, seed).with("degrees", "1,2,3");
    let systems = sample_systems(ring, "delta", seed, samples, &SAMPLE_DEGREES);
    let deltas: Vec<Result<DeltaSample, RingError>> = systems
        .into_par_iter()
        .map(|s| s.and_then(|s| delta_sample(ring, &s)))
        .collect();
    let mut out: Vec<DeltaSample> = Vec::new();
    for d in deltas {
        match d {
            Ok(d) => out.push(d),
            Err(RingError::NoSop) => {}
            Err(e) => return Err(e),
        }
    }
    let mut values: Vec<i64> = out.iter().map(|d| d.delta).collect();
    values.sort_unstable();
    values.dedup();
    let verdict = match values.len() {
        0 => Verdict::inconclusive(RingError::NoSop),
        1 => Verdict::evidence(budget).with_note(format!("l - e = {} on every sample", values[0])),
        _ => {
            let first = out[0].clone();
            let second = out.iter().find(|d| d.delta != first.delta).unwrap().clone();
            Verdict::refuted(Certificate::DistinctDifferences { first, second })
        }
    };
    Ok(InvariantReport {
        verdict,
        values,
        samples: out,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub constant: Option<i64>,
    pub verdict: Verdict,
    /// `N -> [delta per sampled deep system]`
    pub levels: BTreeMap<u32, Vec<i64>>,
}

/// Stabilized `ℓ - e` on deep systems: the first value shared by every
/// sample at two consecutive levels of the schedule.
pub fn buchsbaum_constant(
    ring: &RingPresentation,
    schedule: &[u32],
    samples: usize,
    seed: u64,
) -> Result<ConstantReport, RingError> {
    let samples = samples.max(3);
    let budget = Budget::new(samples, seed).with(
        "schedule",
        schedule.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
    );
    let mut levels = BTreeMap::new();
    let mut previous: Option<i64> = None;
    for &n in schedule {
        let deltas: Vec<Result<i64, RingError>> = (0..samples)
            .into_par_iter()
            .map(|k| {
                let sop = deep_system(ring, seed, "constant", k, n)?;
                Ok(delta_sample(ring, &sop)?.delta)
            })
            .collect();
        let deltas: Vec<i64> = match deltas.into_iter().collect() {
            Ok(d) => d,
            Err(RingError::NoSop) => {
                return Ok(ConstantReport {
                    constant: None,
                    verdict: Verdict::inconclusive(RingError::NoSop),
                    levels,
                })
            }
            Err(e) => return Err(e),
        };
        let common = deltas.windows(2).all(|w| w[0] == w[1]).then(|| deltas[0]);
        levels.insert(n, deltas);
        match (previous, common) {
            (Some(a), Some(b)) if a == b => {
                return Ok(ConstantReport {
                    constant: Some(b),
                    verdict: Verdict::evidence(budget).with_note(format!("C = {b}")),
                    levels,
                })
            }
            _ => previous = common,
        }
    }
    Ok(ConstantReport {
        constant: None,
        verdict: Verdict::inconclusive("l - e on deep systems did not stabilize within the schedule"),
        levels,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BuchsbaumReport {
    pub verdict: Verdict,
    pub colon: Verdict,
    pub d_sequence: Verdict,
    pub invariant: InvariantReport,
}

/// Evidence from three channels: colon with `m`, d-sequence on sampled
/// (non-deep) systems and constancy of `ℓ - e`. Any witness refutes.
pub fn buchsbaum_verdict(ring: &RingPresentation, samples: usize, seed: u64) -> Result<BuchsbaumReport, RingError> {
    let budget = Budget::new(samples, seed).with("degrees", "1,2,3");
    let systems = sample_systems(ring, "buchsbaum", seed, samples, &SAMPLE_DEGREES);
    let checks: Vec<Result<(Option<Certificate>, Option<Certificate>), RingError>> = systems
        .into_par_iter()
        .map(|s| {
            let s = s?;
            let colon = buchsbaum_colon_check(ring, &s)?.witness().cloned();
            let ds = is_d_sequence(&s)?.failure.map(|f| Certificate::DSequenceFailure {
                i: f.i,
                j: f.j,
                element: f.witness,
            });
            Ok((colon, ds))
        })
        .collect();
    let mut colon = Verdict::evidence(budget.clone());
    let mut d_sequence = Verdict::evidence(budget.clone());
    let mut found_any = false;
    for c in checks {
        match c {
            Ok((cw, dw)) => {
                found_any = true;
                if let (Some(w), false) = (cw, colon.is_refuted()) {
                    colon = Verdict::refuted(w);
                }
                if let (Some(w), false) = (dw, d_sequence.is_refuted()) {
                    d_sequence = Verdict::refuted(w);
                }
            }
            Err(RingError::NoSop) => {}
            Err(e) => return Err(e),
        }
    }
    if !found_any && ring.dim() > 0 {
        colon = Verdict::inconclusive(RingError::NoSop);
        d_sequence = colon.clone();
    }
    let invariant = invariant_constancy(ring, samples, seed)?;
    let verdict = [&colon, &d_sequence, &invariant.verdict]
        .into_iter()
        .find(|v| v.is_refuted())
        .cloned()
        .unwrap_or_else(|| {
            if invariant.verdict.is_evidence_for() && found_any || ring.dim() == 0 {
                Verdict::evidence(budget)
            } else {
                Verdict::inconclusive("no channel produced evidence")
            }
        });
    Ok(BuchsbaumReport {
        verdict,
        colon,
        d_sequence,
        invariant,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnmixedCheck {
    pub i: usize,
    pub k: u32,
    /// `(x_1^k..x_i^k) : (x_1...x_i)^(k-1)`
    pub right: Vec<Polynomial>,
    /// `(x_1..x_i) + sum_j (x_1..^x_j..x_i) : I`
    pub left: Vec<Polynomial>,
    pub agree: bool,
    pub witness: Option<Polynomial>,
}

/// `(x_1..x_i) + sum_j (x_1..^x_j..x_i) : I` with `I` the full parameter ideal.
pub fn lc_denominator(ring: &RingPresentation, sop: &ParameterSystem, i: usize, full: &IdealHandle) -> Result<IdealHandle, RingError> {
    let xs = sop.elements();
    let mut acc = sop.prefix_ideal(i).clone();
    for j in 0..i {
        let others: Vec<Polynomial> = (0..i).filter(|&l| l != j).map(|l| xs[l].clone()).collect();
        let c = ring.ideal(&others).colon(full)?;
        acc = acc.sum(&c)?;
    }
    Ok(acc)
}

/// Both sides of the unmixed-denominator identity for `1 <= i <= n-1`, `k >= 2`.
pub fn unmixed_denominator(ring: &RingPresentation, sop: &ParameterSystem, i: usize, k: u32) -> Result<UnmixedCheck, RingError> {
    let n = sop.len();
    if i == 0 || i >= n.max(1) {
        return Err(RingError::Argument(format!("index {i} outside 1..={}", n.saturating_sub(1))));
    }
    if k < 2 {
        return Err(RingError::Argument("k must be at least 2".into()));
    }
    let xs = sop.elements();
    let powers: Vec<Polynomial> = xs[..i].iter().map(|x| x.pow(k as u64)).collect();
    let prod = xs[..i].iter().skip(1).fold(xs[0].clone(), |a, b| &a * b).pow(k as u64 - 1);
    let right = ring.ideal(&powers).colon_poly(&prod)?;
    let left = lc_denominator(ring, sop, i, sop.full_ideal())?;
    let witness = match right.first_outside(&left)? {
        Some(y) => Some(y.clone()),
        None => left.first_outside(&right)?.cloned(),
    };
    Ok(UnmixedCheck {
        i,
        k,
        right: right.gb()?.to_vec(),
        left: left.gb()?.to_vec(),
        agree: witness.is_none(),
        witness,
    })
}
