//! Buchberger's algorithm with the sugar selection strategy and the
//! Gebauer–Möller pair criteria.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;
use std::sync::Arc;

use super::monomial::Monomial;
use super::poly::{merge_scaled, PolyRing, Polynomial, Term};
use super::KernelError;

/// Heap entry ordered by the ring's monomial order.
struct Keyed<'r> {
    m: Monomial,
    ring: &'r PolyRing,
}

impl PartialEq for Keyed<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl Eq for Keyed<'_> {}

impl PartialOrd for Keyed<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring.cmp(&self.m, &other.m)
    }
}

/// Full reduction of `f` by `basis`. `basis` need not be a Gröbner basis.
///
/// Pending terms live in a max-heap with their coefficients in a hash map, so
/// one reduction step costs the length of the divisor, not of `f`.
pub fn reduce<'a>(f: &Polynomial, basis: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
    let ring = f.ring().clone();
    let field = ring.field();
    // (support mask, leading monomial, inverse leading coefficient, tail)
    let divisors: Vec<(u64, &Monomial, u32, &[Term])> = basis
        .into_iter()
        .filter_map(|g| {
            let lm = g.leading_monomial()?;
            Some((lm.support_mask(), lm, field.inv(g.leading_coefficient()?), &g.terms()[1..]))
        })
        .collect();
    if divisors.is_empty() || f.is_zero() {
        return f.clone();
    }
    let mut coeffs: FxHashMap<Monomial, u32> = FxHashMap::default();
    let mut heap: BinaryHeap<Keyed> = BinaryHeap::with_capacity(f.len() * 2);
    for (m, c) in f.terms() {
        coeffs.insert(m.clone(), *c);
        heap.push(Keyed { m: m.clone(), ring: &ring });
    }
    let mut out: Vec<Term> = Vec::new();
    while let Some(Keyed { m, .. }) = heap.pop() {
        let c = coeffs.remove(&m).unwrap_or(0);
        if c == 0 {
            continue;
        }
        let mask = m.support_mask();
        match divisors.iter().find(|(dm, lm, _, _)| dm & !mask == 0 && lm.divides(&m)) {
            Some((_, lm, lc_inv, tail)) => {
                let q = lm.quotient_of(&m);
                let coef = field.neg(field.mul(c, *lc_inv));
                for (t, tc) in tail.iter() {
                    let mm = t.mul(&q);
                    let add = field.mul(coef, *tc);
                    match coeffs.get_mut(&mm) {
                        Some(v) => *v = field.add(*v, add),
                        None => {
                            coeffs.insert(mm.clone(), add);
                            heap.push(Keyed { m: mm, ring: &ring });
                        }
                    }
                }
            }
            None => out.push((m, c)),
        }
    }
    Polynomial::from_sorted(&ring, out)
}

/// Division of `f` by a single polynomial `g`, returning `(quotient, remainder)`.
pub fn divide(f: &Polynomial, g: &Polynomial) -> (Polynomial, Polynomial) {
    let ring = f.ring().clone();
    let field = ring.field();
    let lm = g.leading_monomial().expect("division by zero polynomial").clone();
    let lc_inv = field.inv(g.leading_coefficient().unwrap());
    let mut quotient: Vec<Term> = Vec::new();
    let mut terms: Vec<Term> = f.terms().to_vec();
    let mut cursor = 0;
    while cursor < terms.len() {
        let (m, c) = terms[cursor].clone();
        if lm.divides(&m) {
            let q = lm.quotient_of(&m);
            let coef = field.mul(c, lc_inv);
            quotient.push((q.clone(), coef));
            let tail = merge_scaled(&ring, &terms[cursor + 1..], &g.terms()[1..], field.neg(coef), &q);
            terms.truncate(cursor);
            terms.extend(tail);
        } else {
            cursor += 1;
        }
    }
    // quotient terms are produced in descending order
    (
        Polynomial::from_sorted(&ring, quotient),
        Polynomial::from_sorted(&ring, terms),
    )
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, lcm: &Monomial) -> Polynomial {
    let field = f.ring().field();
    let fm = f.leading_monomial().unwrap().quotient_of(lcm);
    let gm = g.leading_monomial().unwrap().quotient_of(lcm);
    // both inputs are monic
    let a = f.mul_term(&fm, 1);
    let ring = f.ring();
    let b = &g.terms()[1..];
    let a_tail = &a.terms()[1..];
    Polynomial::from_sorted(ring, merge_scaled(ring, a_tail, b, field.neg(1), &gm))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine {
    ring: Arc<PolyRing>,
    polys: Vec<Polynomial>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Engine {
    fn lm(&self, k: usize) -> &Monomial {
        self.polys[k].leading_monomial().unwrap()
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let w = self.ring.weights();
        let lcm = self.lm(i).lcm(self.lm(j), w);
        let si = self.sugar[i] + lcm.degree() - self.lm(i).degree();
        let sj = self.sugar[j] + lcm.degree() - self.lm(j).degree();
        Pair {
            i,
            j,
            lcm,
            sugar: si.max(sj),
        }
    }

    /// Gebauer–Möller installation of the new element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.lm(h).clone();
        let candidates: Vec<Pair> = self.active.iter().map(|&g| self.make_pair(g, h)).collect();

        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        for (k, p) in candidates.iter().enumerate() {
            let coprime = self.lm(p.i).is_coprime(&lm_h);
            let dominated = candidates[k + 1..].iter().any(|q| q.lcm.divides(&p.lcm))
                || kept.iter().any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p.clone());
            }
        }
        // product criterion
        kept.retain(|p| !self.lm(p.i).is_coprime(&lm_h));

        // old pairs made redundant by h
        let w = self.ring.weights().to_vec();
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let li = self.polys[p.i].leading_monomial().unwrap().lcm(&lm_h, &w);
            let lj = self.polys[p.j].leading_monomial().unwrap().lcm(&lm_h, &w);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(kept);

        self.active.retain(|&g| !lm_h.divides(self.polys[g].leading_monomial().unwrap()));
        self.active.push(h);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ring = &self.ring;
        let best = (0..self.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
                pa.sugar
                    .cmp(&pb.sugar)
                    .then_with(|| ring.cmp(&pa.lcm, &pb.lcm))
                    .then_with(|| pa.j.cmp(&pb.j))
                    .then_with(|| pa.i.cmp(&pb.i))
            })
            .unwrap();
        Some(self.pairs.swap_remove(best))
    }

    fn active_basis(&self) -> Vec<Polynomial> {
        self.active.iter().map(|&k| self.polys[k].clone()).collect()
    }

    fn reduce_by_active(&self, f: &Polynomial) -> Polynomial {
        reduce(f, self.active.iter().map(|&k| &self.polys[k]))
    }

    fn push(&mut self, f: Polynomial, sugar: u32) -> usize {
        self.polys.push(f);
        self.sugar.push(sugar);
        self.polys.len() - 1
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted ascending
/// by leading monomial. Deterministic for a fixed generator list.
pub fn groebner_basis(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Result<Vec<Polynomial>, KernelError> {
    groebner_basis_within(ring, gens, ring.pair_budget())
}

/// As [`groebner_basis`], failing with a resource error after `budget`
/// pair reductions.
pub fn groebner_basis_within(ring: &Arc<PolyRing>, gens: &[Polynomial], budget: usize) -> Result<Vec<Polynomial>, KernelError> {
    let mut input: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    if input.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::one(ring)]);
    }
    // smallest first: usually fewer reductions
    input.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));

    let mut engine = Engine {
        ring: ring.clone(),
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in input {
        let r = engine.reduce_by_active(&g);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        let s = g.max_degree();
        let k = engine.push(r.monic(), s);
        engine.update(k);
    }

    let mut reductions = 0usize;
    while let Some(pair) = engine.select() {
        reductions += 1;
        if reductions > budget {
            return Err(KernelError::Resource(format!(
                "Gröbner basis exceeded the budget of {budget} pair reductions"
            )));
        }
        let s = s_polynomial(&engine.polys[pair.i], &engine.polys[pair.j], &pair.lcm);
        if s.is_zero() {
            continue;
        }
        let r = engine.reduce_by_active(&s);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        let k = engine.push(r.monic(), pair.sugar);
        engine.update(k);
    }
    Ok(reduce_basis(ring, engine.active_basis()))
}

/// Turns a Gröbner basis into the reduced one: drop elements whose leading
/// monomial is divisible by another's, then fully interreduce.
pub fn reduce_basis(ring: &Arc<PolyRing>, basis: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = basis.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    basis.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if minimal.iter().any(|h| h.leading_monomial().unwrap().divides(lm)) {
            continue;
        }
        minimal.push(g);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g);
        let g = &minimal[k];
        // keep the leading term, reduce the tail
        let lead = Polynomial::from_sorted(ring, vec![g.terms()[0].clone()]);
        let tail = Polynomial::from_sorted(ring, g.terms()[1..].to_vec());
        out.push(&lead + &reduce(&tail, others));
    }
    out.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    out
}

/// Checks the Buchberger criterion directly: every S-polynomial reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial]) -> bool {
    for (a, f) in basis.iter().enumerate() {
        for g in &basis[a + 1..] {
            let ring = f.ring();
            let lcm = f
                .leading_monomial()
                .unwrap()
                .lcm(g.leading_monomial().unwrap(), ring.weights());
            let s = s_polynomial(&f.monic(), &g.monic(), &lcm);
            if !reduce(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse::parse_polynomial;

    fn polys(r: &Arc<PolyRing>, s: &[&str]) -> Vec<Polynomial> {
        s.iter().map(|t| parse_polynomial(r, t).unwrap()).collect()
    }

    #[test]
    fn principal_monomial_ideal() {
        let r = PolyRing::standard(5, &["x", "y"]).unwrap();
        let gb = groebner_basis(&r, &polys(&r, &["x"])).unwrap();
        assert_eq!(gb, polys(&r, &["x"]));
    }

    #[test]
    fn zero_dimensional_example_is_a_gb() {
        let r = PolyRing::standard(5, &["x", "y"]).unwrap();
        let gb = groebner_basis(&r, &polys(&r, &["x^2 - y", "y^2 - x"])).unwrap();
        assert!(is_groebner_basis(&gb));
        // every original generator reduces to zero
        for g in polys(&r, &["x^2 - y", "y^2 - x"]) {
            assert!(reduce(&g, &gb).is_zero());
        }
    }

    #[test]
    fn two_planes_generators_are_already_a_gb() {
        let r = PolyRing::standard(2, &["x", "y", "u", "v"]).unwrap();
        let g = polys(&r, &["x*u", "x*v", "y*u", "y*v"]);
        assert!(is_groebner_basis(&g));
        let mut gb = groebner_basis(&r, &g).unwrap();
        let mut g2 = g.clone();
        gb.sort_by_key(|p| p.to_string());
        g2.sort_by_key(|p| p.to_string());
        assert_eq!(gb, g2);
    }

    #[test]
    fn unit_ideal() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let gb = groebner_basis(&r, &polys(&r, &["x", "x + 1"])).unwrap();
        assert_eq!(gb, vec![Polynomial::one(&r)]);
    }

    #[test]
    fn division_recovers_the_cofactor() {
        let r = PolyRing::standard(7, &["x", "y"]).unwrap();
        let g = parse_polynomial(&r, "x + 2*y").unwrap();
        let a = parse_polynomial(&r, "x^2*y - y^3 + 4").unwrap();
        let (q, rem) = divide(&(&a * &g), &g);
        assert!(rem.is_zero());
        assert_eq!(q, a);
    }

    #[test]
    fn budget_turns_into_resource_error() {
        let r = PolyRing::standard(5, &["x", "y", "z"]).unwrap().with_pair_budget(1);
        let g = polys(&r, &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y + x"]);
        assert!(matches!(groebner_basis(&r, &g), Err(KernelError::Resource(_))));
    }
}
