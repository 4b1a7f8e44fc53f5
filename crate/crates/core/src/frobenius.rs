//! Bracket powers, Frobenius roots, Frobenius closure and Fedder's test.

use std::collections::HashMap;

use serde::Serialize;

use crate::kernel::linalg::Echelon;
use crate::kernel::{Exponents, IdealHandle, KernelError, Monomial, Polynomial};
use crate::ringkit::{RingError, RingPresentation};
use crate::verdict::{Budget, Certificate, Verdict};

/// `I^[q]`: the ideal generated by the `q`-th powers of the generators.
pub fn bracket_power(ideal: &IdealHandle, q: u64) -> Result<IdealHandle, KernelError> {
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.frobenius_power(q))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdealHandle::new(ideal.ring(), gens))
}

/// `(lifts)^[q] + J`, the lift to `S` of the bracket power of `I R`.
pub fn bracket_in_ring(ring: &RingPresentation, ideal: &IdealHandle, q: u64) -> Result<IdealHandle, KernelError> {
    Ok(ring.defining().with(bracket_power(ideal, q)?.generators()))
}

fn check_p_power(p: u32, q: u64) -> Result<u32, KernelError> {
    let mut e = 0;
    let mut v = 1u64;
    while v < q {
        v *= p as u64;
        e += 1;
    }
    if v == q {
        Ok(e)
    } else {
        Err(KernelError::NotPPower { q, p })
    }
}

/// Smallest `L` with `L^[q] ⊇ K`: each generator is split as
/// `sum_a h_a^q x^a` over exponents `a` with entries below `q`.
pub fn frobenius_root(k: &IdealHandle, q: u64) -> Result<IdealHandle, KernelError> {
    let ring = k.ring();
    check_p_power(ring.p(), q)?;
    let q32 = q as u32;
    let mut gens: Vec<Polynomial> = Vec::new();
    for g in k.generators() {
        let mut parts: HashMap<Exponents, Vec<(Exponents, i64)>> = HashMap::new();
        let mut order: Vec<Exponents> = Vec::new();
        for (m, c) in g.terms() {
            let rem: Exponents = m.exponents().iter().map(|a| a % q32).collect();
            let quo: Exponents = m.exponents().iter().map(|a| a / q32).collect();
            parts
                .entry(rem.clone())
                .or_insert_with(|| {
                    order.push(rem);
                    Vec::new()
                })
                .push((quo, *c as i64));
        }
        for r in order {
            let h = Polynomial::from_terms(ring, parts.remove(&r).unwrap());
            if !h.is_zero() {
                gens.push(h);
            }
        }
    }
    Ok(IdealHandle::new(ring, gens))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    InClosure { level: u32 },
    NotDetected { e_max: u32 },
}

/// Smallest `e <= e_max` with `y^(p^e) ∈ I^[p^e] + J`.
pub fn closure_membership(
    ring: &RingPresentation,
    y: &Polynomial,
    ideal: &IdealHandle,
    e_max: u32,
) -> Result<Membership, KernelError> {
    let p = ring.p() as u64;
    let mut q = 1u64;
    for e in 0..=e_max {
        let target = bracket_in_ring(ring, ideal, q)?;
        if target.contains(&y.frobenius_power(q)?)? {
            return Ok(Membership::InClosure { level: e });
        }
        q *= p;
    }
    Ok(Membership::NotDetected { e_max })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClosureStatus {
    Closed { e_max: u32 },
    NotClosed { witness: Polynomial, level: u32 },
}

/// Cap on `q^dim R * (standard monomials of I + J in the scanned degrees)`,
/// a proxy for the size of the quotient by `I^[q] + J`. Levels beyond it are
/// not attempted; the level actually reached is reported.
pub const CLOSURE_COST_LIMIT: u64 = 20_000;

/// Pair reductions allowed for the Gröbner basis of one bracket target
/// `I^[q] + J`. Like the cost cap, exhausting it ends the chain at the
/// previous level.
pub const CLOSURE_PAIR_BUDGET: usize = 1_500;

/// Result of a closure computation. `chain[e]` is `I_e = {y : y^(p^e) ∈ I^[p^e] + J}`
/// (as an ideal of `S` containing `J`), computed in every degree up to
/// `degree_bound` when that is set, exactly otherwise.
#[derive(Clone, Debug)]
pub struct ClosureOutcome {
    /// `Closed { e_max }` records the last level actually computed.
    pub status: ClosureStatus,
    pub chain: Vec<IdealHandle>,
    pub degree_bound: Option<u32>,
}

impl ClosureOutcome {
    pub fn is_closed(&self) -> bool {
        matches!(self.status, ClosureStatus::Closed { .. })
    }

    pub fn witness(&self) -> Option<(&Polynomial, u32)> {
        match &self.status {
            ClosureStatus::NotClosed { witness, level } => Some((witness, *level)),
            _ => None,
        }
    }
}

/// Degree bound used when `I + J` is not `m`-primary.
pub fn default_degree_bound(base: &IdealHandle) -> u32 {
    let gmax = base.generators().iter().map(|g| g.max_degree()).max().unwrap_or(0);
    gmax + base.ring().weights().iter().sum::<u32>()
}

/// `{y : y^q ∈ target}` in degrees `1..=max_degree`, starting from an ideal
/// `base` already known to lie inside it. Each degree is one kernel
/// computation for the additive map `y ↦ NF(y^q)` on the standard monomials
/// of the current ideal.
pub fn frobenius_preimage(
    base: &IdealHandle,
    target: &IdealHandle,
    q: u64,
    max_degree: u32,
) -> Result<IdealHandle, KernelError> {
    let ring = base.ring().clone();
    let field = ring.field();
    let mut current = base.clone();
    for d in 1..=max_degree {
        let basis = current.graded_piece_basis(d)?;
        if basis.is_empty() {
            continue;
        }
        let mut columns: HashMap<Monomial, usize> = HashMap::new();
        let mut images: Vec<Vec<(usize, u32)>> = Vec::with_capacity(basis.len());
        for m in &basis {
            let img = target.normal_form(&Polynomial::monomial(&ring, m.pow(q as u32), 1))?;
            let row = img
                .terms()
                .iter()
                .map(|(mm, c)| {
                    let n = columns.len();
                    (*columns.entry(mm.clone()).or_insert(n), *c)
                })
                .collect();
            images.push(row);
        }
        let ncols = columns.len();
        let rows: Vec<Vec<u32>> = images
            .into_iter()
            .map(|r| {
                let mut v = vec![0u32; ncols];
                for (k, c) in r {
                    v[k] = c;
                }
                v
            })
            .collect();
        let ech = Echelon::new(field, &rows, ncols);
        if ech.kernel.is_empty() {
            continue;
        }
        let new: Vec<Polynomial> = ech
            .kernel
            .iter()
            .map(|combo| {
                Polynomial::from_terms(
                    &ring,
                    basis
                        .iter()
                        .zip(combo)
                        .filter(|(_, &c)| c != 0)
                        .map(|(m, &c)| (m.exponents().iter().copied().collect(), c as i64)),
                )
                .monic()
            })
            .collect();
        current = current.with(&new);
    }
    Ok(current)
}

/// Computes the chain `I_0 ⊆ I_1 ⊆ ...` and stops at the first level where
/// it grows, or at `e_max`.
pub fn frobenius_closure(
    ring: &RingPresentation,
    ideal: &IdealHandle,
    e_max: u32,
) -> Result<ClosureOutcome, RingError> {
    let base = ring.defining().with(ideal.generators());
    base.gb()?;
    let degree_bound = match base.socle_bound()? {
        Some(_) => None,
        None => Some(default_degree_bound(&base)),
    };
    let scan = match degree_bound {
        Some(b) => b,
        None => base.socle_bound()?.unwrap(),
    };
    let weights = ring.ring().weights();
    let scanned: u64 = base
        .hilbert_numerator()?
        .series(weights, scan as usize)
        .iter()
        .map(|&c| c.max(0) as u64)
        .sum();
    let p = ring.p() as u64;
    let mut chain = vec![base.clone()];
    let mut q = 1u64;
    let mut reached = 0;
    for e in 1..=e_max {
        q *= p;
        let cost = q.saturating_pow(ring.dim() as u32).saturating_mul(scanned.max(1));
        if cost > CLOSURE_COST_LIMIT {
            break;
        }
        let target = bracket_in_ring(ring, ideal, q)?;
        match target.gb_within(CLOSURE_PAIR_BUDGET) {
            Err(KernelError::Resource(_)) => break,
            r => r?,
        };
        reached = e;
        let stage = frobenius_preimage(&base, &target, q, scan)?;
        let outside = stage.gb()?.iter().find(|g| !base.contains(g).unwrap_or(true)).cloned();
        chain.push(stage);
        if let Some(w) = outside {
            return Ok(ClosureOutcome {
                status: ClosureStatus::NotClosed { witness: w, level: e },
                chain,
                degree_bound,
            });
        }
    }
    Ok(ClosureOutcome {
        status: ClosureStatus::Closed { e_max: reached },
        chain,
        degree_bound,
    })
}

/// `Refuted` with a witness when the closure grows; `Evidence` otherwise,
/// since no finite `e` certifies closedness.
pub fn is_frobenius_closed(ring: &RingPresentation, ideal: &IdealHandle, e_max: u32) -> Result<Verdict, RingError> {
    let out = frobenius_closure(ring, ideal, e_max)?;
    Ok(closure_verdict(ideal, &out, e_max))
}

pub fn closure_verdict(ideal: &IdealHandle, out: &ClosureOutcome, e_max: u32) -> Verdict {
    match &out.status {
        ClosureStatus::NotClosed { witness, level } => Verdict::refuted(Certificate::ClosureWitness {
            element: witness.clone(),
            level: *level,
            ideal: ideal.generators().to_vec(),
        }),
        ClosureStatus::Closed { e_max: 0 } if e_max > 0 => {
            Verdict::inconclusive("closure cost or Gröbner budget exceeded already at level 1")
        }
        ClosureStatus::Closed { e_max: reached } => {
            let mut b = Budget::new(1, 0).with("e_max", e_max).with("e_reached", reached);
            if let Some(d) = out.degree_bound {
                b = b.with("degree_bound", d);
            }
            Verdict::evidence(b)
        }
    }
}

/// `J^[p] : J`; for a principal `J = (f)` this is `(f^(p-1))` since `S` is a UFD.
pub fn fedder_colon(ring: &RingPresentation) -> Result<Vec<Polynomial>, KernelError> {
    let p = ring.p() as u64;
    let j = ring.defining();
    let nonzero: Vec<&Polynomial> = j.generators().iter().filter(|g| !g.is_zero()).collect();
    match nonzero.len() {
        0 => Ok(vec![Polynomial::one(ring.ring())]),
        1 => Ok(vec![nonzero[0].pow(p - 1)]),
        _ => {
            let bracket = bracket_power(j, p)?;
            Ok(bracket.colon(j)?.gb()?.to_vec())
        }
    }
}

/// Fedder's criterion: `R` is F-pure iff `(J^[p] : J)` is not inside `m^[p]`.
/// Both outcomes are certificates; non-F-purity is reported as `Refuted`.
pub fn fedder_f_pure(ring: &RingPresentation) -> Result<Verdict, RingError> {
    let p = ring.p();
    let generators = fedder_colon(ring)?;
    let escaping = generators.iter().find(|g| g.has_term_below(p)).cloned();
    let cert = Certificate::FedderGenerators {
        escaping: escaping.clone(),
        generators,
    };
    Ok(if escaping.is_some() {
        Verdict::proven(cert)
    } else {
        Verdict::refuted(cert)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::PolyRing;

    fn cusp() -> RingPresentation {
        RingPresentation::build(2, &["x", "y", "z"], &[2, 2, 3], &["z^2 + x^3 + y^3"]).unwrap()
    }

    fn two_planes() -> RingPresentation {
        RingPresentation::build(2, &["x", "y", "u", "v"], &[1, 1, 1, 1], &["x*u", "x*v", "y*u", "y*v"]).unwrap()
    }

    fn ideal(r: &RingPresentation, gens: &[&str]) -> IdealHandle {
        IdealHandle::new(r.ring(), r.parse_all(gens).unwrap())
    }

    #[test]
    fn bracket_examples() {
        let r = RingPresentation::build(2, &["x", "y"], &[1, 1], &[]).unwrap();
        let b = bracket_power(&ideal(&r, &["x", "y"]), 4).unwrap();
        assert_eq!(b.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["x^4", "y^4"]);
        let b = bracket_power(&ideal(&r, &["x + y"]), 2).unwrap();
        assert_eq!(b.generators()[0].to_string(), "x^2 + y^2");
        let i = ideal(&r, &["x*y + y^2"]);
        assert_eq!(bracket_power(&i, 1).unwrap().generators(), i.generators());
        assert!(bracket_power(&i, 6).is_err());
    }

    #[test]
    fn root_examples() {
        let ring = PolyRing::standard(3, &["x", "y"]).unwrap();
        let f = |s: &str| crate::kernel::parse_polynomial(&ring, s).unwrap();
        let root = |s: &str| frobenius_root(&IdealHandle::new(&ring, vec![f(s)]), 3).unwrap();
        assert!(root("x^3").same_ideal(&IdealHandle::new(&ring, vec![f("x")])).unwrap());
        assert!(root("x^6*y^3").same_ideal(&IdealHandle::new(&ring, vec![f("x^2*y")])).unwrap());
        assert!(root("x^3 + y^3").same_ideal(&IdealHandle::new(&ring, vec![f("x + y")])).unwrap());
        // x^4 y = (x)^3 * x y
        assert!(root("x^4*y").same_ideal(&IdealHandle::new(&ring, vec![f("x")])).unwrap());
        assert!(frobenius_root(&IdealHandle::new(&ring, vec![f("x")]), 2).is_err());
    }

    #[test]
    fn membership_examples() {
        let r = cusp();
        let i = ideal(&r, &["x", "y"]);
        let z = r.parse("z").unwrap();
        assert_eq!(closure_membership(&r, &z, &i, 3).unwrap(), Membership::InClosure { level: 1 });
        assert_eq!(
            closure_membership(&r, &r.parse("x").unwrap(), &i, 3).unwrap(),
            Membership::InClosure { level: 0 }
        );
        let poly = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        assert_eq!(
            closure_membership(&poly, &poly.parse("x").unwrap(), &ideal(&poly, &["x^2", "y"]), 3).unwrap(),
            Membership::NotDetected { e_max: 3 }
        );
    }

    #[test]
    fn cusp_closure_finds_z() {
        let r = cusp();
        let i = ideal(&r, &["x", "y"]);
        let out = frobenius_closure(&r, &i, 3).unwrap();
        let (w, level) = out.witness().unwrap();
        assert_eq!(w.to_string(), "z");
        assert_eq!(level, 1);
        assert_eq!(out.degree_bound, None);
        assert!(is_frobenius_closed(&r, &i, 3).unwrap().is_refuted());
    }

    #[test]
    fn closed_examples() {
        let r = two_planes();
        let out = frobenius_closure(&r, &ideal(&r, &["x + u", "y + v"]), 3).unwrap();
        assert!(out.is_closed());
        assert_eq!(out.chain.len(), 4);
        assert_eq!(out.status, ClosureStatus::Closed { e_max: 3 });
        let m = frobenius_closure(&r, &ideal(&r, &["x", "y", "u", "v"]), 3).unwrap();
        assert!(m.is_closed());
        let poly = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        assert!(is_frobenius_closed(&poly, &ideal(&poly, &["x^2", "x*y"]), 2)
            .unwrap()
            .is_evidence_for());
    }

    #[test]
    fn nilpotents_show_up_in_closure_of_zero() {
        let r = RingPresentation::build(3, &["x", "y"], &[1, 1], &["x^2"]).unwrap();
        let out = frobenius_closure(&r, &IdealHandle::zero(r.ring()), 2).unwrap();
        assert_eq!(out.witness().unwrap().0.to_string(), "x");
    }

    #[test]
    fn fedder_examples() {
        let f7 = RingPresentation::build(7, &["x", "y", "z"], &[1, 1, 1], &["x^3 + y^3 + z^3"]).unwrap();
        assert!(fedder_f_pure(&f7).unwrap().is_proven());
        let f5 = RingPresentation::build(5, &["x", "y", "z"], &[1, 1, 1], &["x^3 + y^3 + z^3"]).unwrap();
        assert!(fedder_f_pure(&f5).unwrap().is_refuted());
        for p in [2, 3, 5] {
            let xy = RingPresentation::build(p, &["x", "y"], &[1, 1], &["x*y"]).unwrap();
            assert!(fedder_f_pure(&xy).unwrap().is_proven(), "p = {p}");
        }
        assert!(fedder_f_pure(&two_planes()).unwrap().is_proven());
        assert!(fedder_f_pure(&cusp()).unwrap().is_refuted());
    }
}
