//! Ideals of `F_p[x_1..x_m]` with a lazily computed reduced Gröbner basis.

use std::fmt;
use std::sync::{Arc, OnceLock};

use super::groebner::{divide, groebner_basis, groebner_basis_within, reduce, reduce_basis};
use super::hilbert::{hilbert_numerator, IntPoly};
use super::monomial::{monomials_of_degree, Exponents, Monomial};
use super::poly::{PolyRing, Polynomial};
use super::KernelError;

/// Generators plus a reduced Gröbner basis that is computed on first use
/// and never changes afterwards.
#[derive(Clone)]
pub struct IdealHandle {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl IdealHandle {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Self {
            ring: ring.clone(),
            generators,
            gb: OnceLock::new(),
        }
    }

    /// Wraps a list already known to be a reduced Gröbner basis.
    pub(crate) fn from_reduced_gb(ring: &Arc<PolyRing>, gb: Vec<Polynomial>) -> Self {
        let lock = OnceLock::new();
        let _ = lock.set(gb.clone());
        Self {
            ring: ring.clone(),
            generators: gb,
            gb: lock,
        }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self::new(ring, vec![])
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Self::from_reduced_gb(ring, vec![Polynomial::one(ring)])
    }

    /// The ideal `(x_1, ..., x_m)` of all variables.
    pub fn maximal(ring: &Arc<PolyRing>) -> Self {
        let gens = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        Self::new(ring, gens)
    }

    /// `m^N`: all monomials with exponent sum `N`.
    pub fn maximal_power(ring: &Arc<PolyRing>, n: u32) -> Self {
        let ones = vec![1u32; ring.nvars()];
        let gens = monomials_of_degree(&ones, n)
            .into_iter()
            .map(|m| Polynomial::monomial(ring, ring.monomial(m.exponents()), 1))
            .collect();
        Self::new(ring, gens)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn has_gb(&self) -> bool {
        self.gb.get().is_some()
    }

    /// The reduced Gröbner basis, computing it if needed.
    pub fn gb(&self) -> Result<&[Polynomial], KernelError> {
        self.gb_within(self.ring.pair_budget())
    }

    /// As [`IdealHandle::gb`] but with at most `budget` pair reductions
    /// (capped by the ring's own budget). Nothing is cached on failure.
    pub fn gb_within(&self, budget: usize) -> Result<&[Polynomial], KernelError> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let computed = groebner_basis_within(&self.ring, &self.generators, budget.min(self.ring.pair_budget()))?;
        // a concurrent initializer produces the identical basis
        let _ = self.gb.set(computed);
        Ok(self.gb.get().unwrap())
    }

    fn check(&self, other: &IdealHandle) -> Result<(), KernelError> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(KernelError::RingMismatch)
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, KernelError> {
        Ok(reduce(f, self.gb()?))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, KernelError> {
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool, KernelError> {
        self.check(other)?;
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First generator of `other` outside `self`.
    pub fn first_outside<'a>(&self, other: &'a IdealHandle) -> Result<Option<&'a Polynomial>, KernelError> {
        let gens = match other.gb.get() {
            Some(g) => g.as_slice(),
            None => other.generators.as_slice(),
        };
        for g in gens {
            if !self.contains(g)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// Equality as ideals: identical reduced Gröbner bases.
    pub fn same_ideal(&self, other: &IdealHandle) -> Result<bool, KernelError> {
        self.check(other)?;
        Ok(self.gb()? == other.gb()?)
    }

    pub fn is_unit(&self) -> Result<bool, KernelError> {
        Ok(self.gb()?.first().is_some_and(|g| g.is_constant()))
    }

    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle, KernelError> {
        self.check(other)?;
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        Ok(IdealHandle::new(&self.ring, g))
    }

    /// `self + (extra)`.
    pub fn with(&self, extra: &[Polynomial]) -> IdealHandle {
        let mut g = self.generators.clone();
        g.extend(extra.iter().cloned());
        IdealHandle::new(&self.ring, g)
    }

    pub fn product(&self, other: &IdealHandle) -> Result<IdealHandle, KernelError> {
        self.check(other)?;
        let mut g = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                g.push(a * b);
            }
        }
        Ok(IdealHandle::new(&self.ring, g))
    }

    /// `self ∩ other` by eliminating a tag variable from `t*I + (1-t)*K`.
    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle, KernelError> {
        self.check(other)?;
        if self.generators.is_empty() || other.generators.is_empty() {
            return Ok(IdealHandle::zero(&self.ring));
        }
        if self.is_unit()? {
            return Ok(other.clone());
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        let tagged = self.ring.with_tag("_t");
        let map: Vec<usize> = (1..=self.ring.nvars()).collect();
        let t = Polynomial::var(&tagged, 0);
        let one_minus_t = &Polynomial::one(&tagged) - &t;
        let mut gens = Vec::new();
        for g in self.gb()? {
            gens.push(&t * &g.embed(&tagged, &map));
        }
        for g in other.gb()? {
            gens.push(&one_minus_t * &g.embed(&tagged, &map));
        }
        let gb = groebner_basis(&tagged, &gens)?;
        let back: Vec<usize> = std::iter::once(usize::MAX).chain(0..self.ring.nvars()).collect();
        let kept: Vec<Polynomial> = gb
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m.exponents()[0] == 0))
            .map(|g| project(g, &self.ring, &back))
            .collect();
        Ok(IdealHandle::from_reduced_gb(&self.ring, reduce_basis(&self.ring, kept)))
    }

    /// `self : (g) = (self ∩ (g)) / g`.
    pub fn colon_poly(&self, g: &Polynomial) -> Result<IdealHandle, KernelError> {
        if g.is_zero() {
            return Err(KernelError::Argument("colon by the zero ideal".into()));
        }
        if self.contains(g)? {
            return Ok(IdealHandle::unit(&self.ring));
        }
        let principal = IdealHandle::new(&self.ring, vec![g.clone()]);
        let inter = self.intersect(&principal)?;
        let mut quotients = Vec::new();
        for h in inter.gb()? {
            let (q, r) = divide(h, g);
            debug_assert!(r.is_zero());
            if !r.is_zero() {
                return Err(KernelError::Internal(format!(
                    "intersection element {h} not divisible by {g}"
                )));
            }
            quotients.push(q);
        }
        Ok(IdealHandle::new(&self.ring, quotients))
    }

    /// `self : other = ∩_{g} (self : g)` over the generators of `other`.
    pub fn colon(&self, other: &IdealHandle) -> Result<IdealHandle, KernelError> {
        self.check(other)?;
        let gens: Vec<&Polynomial> = other.generators.iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(KernelError::Argument("colon by the zero ideal".into()));
        }
        let mut acc: Option<IdealHandle> = None;
        for g in gens {
            let c = self.colon_poly(g)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c)?,
            });
        }
        Ok(acc.unwrap())
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>, KernelError> {
        Ok(self
            .gb()?
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect())
    }

    /// Krull dimension of the quotient: the largest set of variables
    /// containing the support of no leading monomial. `-1` for the unit ideal.
    pub fn krull_dimension(&self) -> Result<i32, KernelError> {
        let lms = self.leading_monomials()?;
        if lms.iter().any(|m| m.is_one()) {
            return Ok(-1);
        }
        let n = self.ring.nvars();
        let supports: Vec<u64> = lms
            .iter()
            .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        let mut best = 0;
        for set in 0u64..(1 << n) {
            let size = set.count_ones() as i32;
            if size <= best {
                continue;
            }
            if supports.iter().all(|s| s & !set != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// Numerator of the Hilbert series of `S/I` under the ring weights.
    pub fn hilbert_numerator(&self) -> Result<IntPoly, KernelError> {
        self.require_homogeneous()?;
        let lms: Vec<Exponents> = self
            .leading_monomials()?
            .iter()
            .map(|m| m.exponents().iter().copied().collect())
            .collect();
        Ok(hilbert_numerator(&lms, self.ring.weights()))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    pub fn require_homogeneous(&self) -> Result<(), KernelError> {
        match self.generators.iter().find(|g| !g.is_homogeneous()) {
            None => Ok(()),
            Some(g) => Err(KernelError::Inhomogeneous {
                generator: g.to_string(),
                degrees: g.term_degrees(),
            }),
        }
    }

    /// Standard monomials of weighted degree `d`.
    pub fn graded_piece_basis(&self, d: u32) -> Result<Vec<Monomial>, KernelError> {
        let lms = self.leading_monomials()?;
        Ok(monomials_of_degree(self.ring.weights(), d)
            .into_iter()
            .filter(|m| !lms.iter().any(|l| l.divides(m)))
            .collect())
    }

    /// Dimension of `S/I` over F_p, when finite.
    pub fn colength(&self) -> Result<Option<u64>, KernelError> {
        if self.krull_dimension()? > 0 {
            return Ok(None);
        }
        let mut n = self.hilbert_numerator()?;
        for &w in self.ring.weights() {
            n = n.div_one_minus_t_pow(w).ok_or_else(|| {
                KernelError::Internal("zero-dimensional quotient with non-polynomial Hilbert series".into())
            })?;
        }
        Ok(Some(n.eval_one() as u64))
    }

    /// Largest weighted degree of a standard monomial, when the quotient is finite.
    pub fn socle_bound(&self) -> Result<Option<u32>, KernelError> {
        if self.krull_dimension()? > 0 {
            return Ok(None);
        }
        let mut n = self.hilbert_numerator()?;
        for &w in self.ring.weights() {
            n = n.div_one_minus_t_pow(w).ok_or_else(|| {
                KernelError::Internal("zero-dimensional quotient with non-polynomial Hilbert series".into())
            })?;
        }
        Ok(Some(n.degree().unwrap_or(0) as u32))
    }
}

/// Drops variables mapped to `usize::MAX` (they must have exponent 0).
fn project(f: &Polynomial, target: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
    let raw = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e: Exponents = Exponents::from_elem(0, target.nvars());
            for (i, a) in m.exponents().iter().enumerate() {
                if map[i] != usize::MAX {
                    e[map[i]] = *a;
                }
            }
            (Monomial::new(e, target.weights()), *c)
        })
        .collect();
    Polynomial::normalize(target, raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse::parse_polynomial;

    fn ideal(r: &Arc<PolyRing>, s: &[&str]) -> IdealHandle {
        IdealHandle::new(r, s.iter().map(|t| parse_polynomial(r, t).unwrap()).collect())
    }

    fn gb_strings(i: &IdealHandle) -> Vec<String> {
        i.gb().unwrap().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn membership_examples() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let i = ideal(&r, &["x"]);
        assert!(i.normal_form(&parse_polynomial(&r, "x^2").unwrap()).unwrap().is_zero());
        assert_eq!(i.normal_form(&parse_polynomial(&r, "x + 1").unwrap()).unwrap().to_string(), "1");
    }

    #[test]
    fn sums_and_products() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let x = ideal(&r, &["x"]);
        let y = ideal(&r, &["y"]);
        assert_eq!(x.sum(&y).unwrap().to_string(), "(x, y)");
        assert_eq!(x.product(&y).unwrap().to_string(), "(x*y)");
        let m = ideal(&r, &["x", "y"]);
        assert!(m.product(&m).unwrap().same_ideal(&ideal(&r, &["x^2", "x*y", "y^2"])).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let r = PolyRing::standard(2, &["x", "y", "u", "v"]).unwrap();
        let x = ideal(&r, &["x"]);
        let y = ideal(&r, &["y"]);
        assert_eq!(gb_strings(&x.intersect(&y).unwrap()), vec!["x*y"]);
        let xy = ideal(&r, &["x", "y"]);
        let uv = ideal(&r, &["u", "v"]);
        assert!(xy.intersect(&xy).unwrap().same_ideal(&xy).unwrap());
        let planes = xy.intersect(&uv).unwrap();
        let expected = ideal(&r, &["x*u", "x*v", "y*u", "y*v"]);
        assert!(planes.contains_ideal(&expected).unwrap());
        assert!(expected.contains_ideal(&planes).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = PolyRing::standard(2, &["x", "y", "u", "v"]).unwrap();
        let x2 = ideal(&r, &["x^2"]);
        assert!(x2.colon(&ideal(&r, &["x"])).unwrap().same_ideal(&ideal(&r, &["x"])).unwrap());
        let xy = ideal(&r, &["x*y"]);
        assert!(xy.colon(&ideal(&r, &["x"])).unwrap().same_ideal(&ideal(&r, &["y"])).unwrap());
        let planes = ideal(&r, &["x*u", "x*v", "y*u", "y*v"]);
        let g = parse_polynomial(&r, "x + u").unwrap();
        let c = planes.colon_poly(&g).unwrap();
        for f in c.generators() {
            assert!(planes.contains(&(f * &g)).unwrap());
        }
        assert!(planes.colon(&IdealHandle::unit(&r)).unwrap().same_ideal(&planes).unwrap());
        assert!(planes.colon(&IdealHandle::zero(&r)).is_err());
    }

    #[test]
    fn dimension_examples() {
        let r = PolyRing::standard(3, &["x", "y", "z"]).unwrap();
        assert_eq!(IdealHandle::zero(&r).krull_dimension().unwrap(), 3);
        assert_eq!(ideal(&r, &["x", "y", "z"]).krull_dimension().unwrap(), 0);
        assert_eq!(IdealHandle::unit(&r).krull_dimension().unwrap(), -1);
        let s = PolyRing::standard(2, &["x", "y", "u", "v"]).unwrap();
        assert_eq!(ideal(&s, &["x*u", "x*v", "y*u", "y*v"]).krull_dimension().unwrap(), 2);
    }

    #[test]
    fn graded_pieces() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        let i = ideal(&r, &["x^2", "x*y", "y^2"]);
        assert_eq!(i.graded_piece_basis(1).unwrap().len(), 2);
        assert!(i.graded_piece_basis(2).unwrap().is_empty());
        assert_eq!(i.colength().unwrap(), Some(3));
    }

    #[test]
    fn inhomogeneous_hilbert_is_rejected() {
        let r = PolyRing::standard(3, &["x", "y"]).unwrap();
        assert!(matches!(
            ideal(&r, &["x^2 + y"]).hilbert_numerator(),
            Err(KernelError::Inhomogeneous { .. })
        ));
    }
}
