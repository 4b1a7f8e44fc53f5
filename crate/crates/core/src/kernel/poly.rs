//! Sparse multivariate polynomials over F_p.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use super::field::FieldSpec;
use super::monomial::{Exponents, Monomial, MonomialOrder};
use super::KernelError;

/// Default cap on S-pair reductions per Gröbner basis computation.
pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

/// The ambient ring `F_p[x_1..x_m]` together with its grading and order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldSpec,
    names: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
    pair_budget: usize,
}

impl PolyRing {
    pub fn new(
        field: FieldSpec,
        names: Vec<String>,
        weights: Vec<u32>,
        order: MonomialOrder,
    ) -> Result<Arc<Self>, KernelError> {
        if names.is_empty() {
            return Err(KernelError::Argument("no variables".into()));
        }
        if names.len() != weights.len() {
            return Err(KernelError::Argument(format!(
                "{} variables but {} weights",
                names.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(KernelError::Argument("weights must be positive".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(KernelError::Argument(format!("duplicate variable {n}")));
            }
        }
        Ok(Arc::new(Self {
            field,
            names,
            weights,
            order,
            pair_budget: DEFAULT_PAIR_BUDGET,
        }))
    }

    /// Standard-graded ring with the default order.
    pub fn standard(p: u64, names: &[&str]) -> Result<Arc<Self>, KernelError> {
        let field = FieldSpec::new(p)?;
        Self::new(
            field,
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
            MonomialOrder::WeightedGrevlex,
        )
    }

    pub fn with_pair_budget(&self, budget: usize) -> Arc<Self> {
        let mut r = self.clone();
        r.pair_budget = budget;
        Arc::new(r)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }
    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn pair_budget(&self) -> usize {
        self.pair_budget
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b, &self.weights)
    }

    pub fn monomial(&self, exps: &[u32]) -> Monomial {
        Monomial::new(exps.iter().copied().collect(), &self.weights)
    }

    /// Same variables with one extra leading tag variable `name` of weight 1,
    /// ordered to eliminate it.
    pub fn with_tag(&self, name: &str) -> Arc<PolyRing> {
        let mut names = vec![name.to_string()];
        names.extend(self.names.iter().cloned());
        let mut weights = vec![1];
        weights.extend(&self.weights);
        Arc::new(PolyRing {
            field: self.field,
            names,
            weights,
            order: MonomialOrder::Elimination { count: 1 },
            pair_budget: self.pair_budget,
        })
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

pub type Term = (Monomial, u32);

/// A polynomial: nonzero coefficients, strictly descending monomials.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let c = ring.field.from_i64(c);
        Self::from_sorted(ring, if c == 0 { vec![] } else { vec![(Monomial::one(ring.nvars()), c)] })
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::from_sorted(ring, vec![(Monomial::variable(i, &ring.weights), 1)])
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: u32) -> Self {
        let c = c % ring.p();
        Self::from_sorted(ring, if c == 0 { vec![] } else { vec![(m, c)] })
    }

    /// Builds a normalized polynomial from arbitrary `(exponents, coefficient)` pairs.
    pub fn from_terms<I>(ring: &Arc<PolyRing>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, i64)>,
    {
        let raw = terms
            .into_iter()
            .map(|(e, c)| (Monomial::new(e, &ring.weights), ring.field.from_i64(c)))
            .collect();
        Self::normalize(ring, raw)
    }

    pub(crate) fn normalize(ring: &Arc<PolyRing>, mut raw: Vec<Term>) -> Self {
        raw.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        let f = ring.field;
        let mut out: Vec<Term> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = f.add(*lc, c),
                _ => {
                    if let Some((_, 0)) = out.last() {
                        out.pop();
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, 0)) = out.last() {
            out.pop();
        }
        out.retain(|t| t.1 != 0);
        Self::from_sorted(ring, out)
    }

    #[inline]
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<u32> {
        self.terms.first().map(|t| t.1)
    }

    /// Largest weighted degree among the terms (0 for the zero polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// Distinct weighted degrees of the terms, ascending.
    pub fn term_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.iter().map(|t| t.0.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.term_degrees().len() <= 1
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), KernelError> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(KernelError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, KernelError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, 1))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, KernelError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, self.ring.field.neg(1)))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, KernelError> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Polynomial, c: u32) -> Polynomial {
        let one = Monomial::one(self.ring.nvars());
        Polynomial::from_sorted(
            &self.ring,
            merge_scaled(&self.ring, &self.terms, &other.terms, c, &one),
        )
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.ring.field;
        let c = c % f.p();
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        )
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.field.neg(1))
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Polynomial {
        let f = self.ring.field;
        if c % f.p() == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted(
            &self.ring,
            self.terms
                .iter()
                .map(|(n, a)| (n.mul(m), f.mul(*a, c)))
                .collect(),
        )
    }

    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let f = self.ring.field;
        let mut raw = Vec::with_capacity(small.len() * big.len());
        for (m, a) in &small.terms {
            for (n, b) in &big.terms {
                raw.push((m.mul(n), f.mul(*a, *b)));
            }
        }
        Polynomial::normalize(&self.ring, raw)
    }

    /// Repeated multiplication; used as the oracle for [`Polynomial::frobenius_power`].
    pub fn pow(&self, mut k: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `f^q` for `q = p^e`, computed term-wise: `sum c_a x^a -> sum c_a x^(q a)`.
    pub fn frobenius_power(&self, q: u64) -> Result<Polynomial, KernelError> {
        if self.ring.field.log_p(q).is_none() {
            return Err(KernelError::NotPPower { q, p: self.ring.p() });
        }
        Ok(self.frobenius_power_unchecked(q as u32))
    }

    pub(crate) fn frobenius_power_unchecked(&self, q: u32) -> Polynomial {
        // Raising to a p-power is order preserving, so the term order survives.
        Polynomial::from_sorted(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.pow(q), *c)).collect(),
        )
    }

    /// Leading coefficient scaled to 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.ring.field.inv(c)),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = self.ring.field;
        let raw = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[i] > 0)
            .map(|(m, c)| {
                let a = m.exponents()[i];
                let mut e: Exponents = m.exponents().iter().copied().collect();
                e[i] -= 1;
                (Monomial::new(e, &self.ring.weights), f.mul(*c, a % f.p()))
            })
            .filter(|t| t.1 != 0)
            .collect();
        Polynomial::normalize(&self.ring, raw)
    }

    /// Homogeneous component of weighted degree `d`.
    pub fn component(&self, d: u32) -> Polynomial {
        Polynomial::from_sorted(
            &self.ring,
            self.terms.iter().filter(|t| t.0.degree() == d).cloned().collect(),
        )
    }

    /// Re-expresses the polynomial in `target`, mapping variable `i` of `self`
    /// to variable `map[i]` of `target`. Unmapped target variables get exponent 0.
    pub fn embed(&self, target: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
        let raw = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Exponents = SmallVec::from_elem(0, target.nvars());
                for (i, a) in m.exponents().iter().enumerate() {
                    e[map[i]] = *a;
                }
                (Monomial::new(e, target.weights()), *c)
            })
            .collect();
        Polynomial::normalize(target, raw)
    }

    /// Whether any term has all exponents below `bound` (escapes `(x_1^b, ..., x_m^b)`).
    pub fn has_term_below(&self, bound: u32) -> bool {
        self.terms
            .iter()
            .any(|(m, _)| m.exponents().iter().all(|&a| a < bound))
    }
}

/// `a + c * mult * b` for sorted term lists.
pub(crate) fn merge_scaled(
    ring: &PolyRing,
    a: &[Term],
    b: &[Term],
    c: u32,
    mult: &Monomial,
) -> Vec<Term> {
    let f = ring.field;
    if c == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &Term| (t.0.mul(mult), f.mul(t.1, c));
    let mut pending: Option<Term> = b.first().map(shifted);
    while i < a.len() || pending.is_some() {
        match (&a.get(i), &pending) {
            (Some(ta), Some(tb)) => match ring.cmp(&ta.0, &tb.0) {
                Ordering::Greater => {
                    out.push((*ta).clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(pending.take().unwrap());
                    j += 1;
                    pending = b.get(j).map(shifted);
                }
                Ordering::Equal => {
                    let s = f.add(ta.1, tb.1);
                    if s != 0 {
                        out.push((ta.0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                    pending = b.get(j).map(shifted);
                }
            },
            (Some(ta), None) => {
                out.push((*ta).clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push(pending.take().unwrap());
                j += 1;
                pending = b.get(j).map(shifted);
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let field = self.ring.field;
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = field.signed(*c);
            let mag = s.unsigned_abs();
            if k == 0 {
                if s < 0 {
                    write!(out, "-")?;
                }
            } else if s < 0 {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let mut factors = Vec::new();
            for (i, a) in m.exponents().iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.names[i], a)),
                }
            }
            if factors.is_empty() {
                write!(out, "{mag}")?;
            } else if mag == 1 {
                write!(out, "{}", factors.join("*"))?;
            } else {
                write!(out, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics if the operands live in different rings; use the `try_` methods to get an error.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                assert!(self.ring.same_as(&rhs.ring), "polynomials from different rings");
                $body(self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Polynomial, b: &Polynomial| a.add_scaled(b, 1));
binop!(Sub, sub, |a: &Polynomial, b: &Polynomial| a
    .add_scaled(b, a.ring.field.neg(1)));
binop!(Mul, mul, |a: &Polynomial, b: &Polynomial| a.mul_unchecked(b));
