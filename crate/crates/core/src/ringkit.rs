//! Quotient rings `R = F_p[x_1..x_m]/J`, systems of parameters, lengths and
//! multiplicities.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::kernel::{
    parse_polynomial, FieldSpec, IdealHandle, IntPoly, KernelError, MonomialOrder, ParseError,
    PolyRing, Polynomial,
};
use crate::verdict::{Certificate, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("in {text:?}: {source}")]
    Parse { text: String, source: ParseError },
    #[error("defining ideal is the unit ideal")]
    UnitIdeal,
    #[error("no s.o.p. found within budget")]
    NoSop,
    #[error("not a system of parameters: prefix of length {prefix} has dimension {found}, expected {expected}")]
    NotSop {
        prefix: usize,
        found: i32,
        expected: i32,
    },
    #[error("infinite length: quotient has dimension {0}")]
    InfiniteLength(i32),
    #[error("{0}")]
    Argument(String),
}

/// A validated graded presentation with its Gröbner basis, dimension and
/// Hilbert series numerator computed up front. Immutable after build.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    ring: Arc<PolyRing>,
    defining: IdealHandle,
    dim: usize,
    hilbert: HilbertData,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HilbertData {
    pub numerator: IntPoly,
    pub weights: Vec<u32>,
}

impl RingPresentation {
    /// Builds `F_p[vars]/(gens)` from polynomial strings.
    pub fn build(p: u64, vars: &[&str], weights: &[u32], gens: &[&str]) -> Result<Self, RingError> {
        let field = FieldSpec::new(p)?;
        let ring = PolyRing::new(
            field,
            vars.iter().map(|s| s.to_string()).collect(),
            weights.to_vec(),
            MonomialOrder::WeightedGrevlex,
        )?;
        let polys = gens
            .iter()
            .map(|g| {
                parse_polynomial(&ring, g).map_err(|source| RingError::Parse {
                    text: g.to_string(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_polynomials(&ring, polys)
    }

    pub fn from_polynomials(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self, RingError> {
        let defining = IdealHandle::new(ring, gens);
        defining.require_homogeneous()?;
        defining.gb()?;
        let dim = defining.krull_dimension()?;
        if dim < 0 {
            return Err(RingError::UnitIdeal);
        }
        let hilbert = HilbertData {
            numerator: defining.hilbert_numerator()?,
            weights: ring.weights().to_vec(),
        };
        Ok(Self {
            ring: ring.clone(),
            defining,
            dim: dim as usize,
            hilbert,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn defining(&self) -> &IdealHandle {
        &self.defining
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn hilbert(&self) -> &HilbertData {
        &self.hilbert
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, RingError> {
        parse_polynomial(&self.ring, text).map_err(|source| RingError::Parse {
            text: text.to_string(),
            source,
        })
    }

    pub fn parse_all(&self, texts: &[&str]) -> Result<Vec<Polynomial>, RingError> {
        texts.iter().map(|t| self.parse(t)).collect()
    }

    /// `(lifts) + J`, the preimage in `S` of the ideal the lifts generate in `R`.
    pub fn ideal(&self, lifts: &[Polynomial]) -> IdealHandle {
        self.defining.with(lifts)
    }

    /// The homogeneous maximal ideal `m + J`.
    pub fn maximal(&self) -> IdealHandle {
        let vars: Vec<Polynomial> = (0..self.ring.nvars()).map(|i| Polynomial::var(&self.ring, i)).collect();
        self.ideal(&vars)
    }

    /// `m^N + J`.
    pub fn maximal_power(&self, n: u32) -> IdealHandle {
        let m = IdealHandle::maximal_power(&self.ring, n);
        self.ideal(m.generators())
    }

    pub fn is_squarefree_monomial(&self) -> bool {
        self.defining
            .generators()
            .iter()
            .all(|g| g.len() == 1 && g.terms()[0].0.exponents().iter().all(|&a| a <= 1))
    }

    /// `ℓ(R/I)` for `I` given by lifts (the defining ideal is added).
    pub fn length(&self, lifts: &[Polynomial]) -> Result<u64, RingError> {
        self.length_of(&self.ideal(lifts))
    }

    /// `ℓ(S/K)` for an ideal `K` already containing `J`.
    pub fn length_of(&self, k: &IdealHandle) -> Result<u64, RingError> {
        match k.colength()? {
            Some(l) => Ok(l),
            None => Err(RingError::InfiniteLength(k.krull_dimension()?)),
        }
    }

    /// Random monic form of weighted degree `d` in the span of the standard
    /// monomials of `R_d`. A `sparse` form uses at most `nvars + 2` of them,
    /// which keeps Gröbner bases of sampled parameter ideals small. `None`
    /// if `R_d = 0`.
    pub fn random_form(&self, rng: &mut ChaCha8Rng, d: u32, sparse: bool) -> Option<Polynomial> {
        let monos = self.defining.graded_piece_basis(d).ok()?;
        if monos.is_empty() {
            return None;
        }
        let p = self.p();
        let support = if sparse { monos.len().min(self.ring.nvars() + 2) } else { monos.len() };
        loop {
            let mut picked = rand::seq::index::sample(rng, monos.len(), support).into_vec();
            picked.sort_unstable();
            let terms: Vec<_> = picked
                .into_iter()
                .map(|k| (monos[k].exponents().iter().copied().collect(), rng.gen_range(0..p) as i64))
                .collect();
            let f = Polynomial::from_terms(&self.ring, terms);
            if !f.is_zero() {
                return Some(f.monic());
            }
        }
    }

    /// Samples a system of parameters, escalating the degree of each element
    /// from `search.min_degree` until it drops the dimension by one.
    pub fn find_sop(&self, seed: u64, search: &SopSearch) -> Result<ParameterSystem, RingError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.dim;
        let mut elements: Vec<Polynomial> = Vec::new();
        let mut prefix_ideals = vec![self.defining.clone()];
        for i in 0..n {
            let current = prefix_ideals.last().unwrap().clone();
            let mut accepted = None;
            'degrees: for d in search.min_degree..=search.max_degree {
                // sparse forms first, dense ones for the second half of the tries
                for attempt in 0..search.max_tries {
                    let Some(f) = self.random_form(&mut rng, d, attempt < search.max_tries / 2) else {
                        continue 'degrees;
                    };
                    let next = current.with(std::slice::from_ref(&f));
                    if next.krull_dimension()? == (n - i - 1) as i32 {
                        accepted = Some((f, next));
                        break 'degrees;
                    }
                }
            }
            match accepted {
                Some((f, next)) => {
                    elements.push(f);
                    prefix_ideals.push(next);
                }
                None => return Err(RingError::NoSop),
            }
        }
        Ok(ParameterSystem::from_parts(self, elements, prefix_ideals))
    }

    /// `e(x; R)` from the Hilbert series: the value at `t = 1` of
    /// `N(t) prod (1 - t^{d_i}) / prod (1 - t^{w_j})`.
    pub fn multiplicity(&self, sop: &ParameterSystem) -> Result<u64, RingError> {
        if !sop.is_full(self) {
            return Err(RingError::Argument(format!(
                "multiplicity needs a full system of parameters ({} of {})",
                sop.len(),
                self.dim
            )));
        }
        let mut numer = self.hilbert.numerator.clone();
        for &d in sop.degrees() {
            numer = numer.mul(&IntPoly::one_minus_t_pow(d));
        }
        for &w in self.ring.weights() {
            numer = numer.div_one_minus_t_pow(w).ok_or_else(|| {
                KernelError::Internal("Hilbert series times parameter factors is not a polynomial".into())
            })?;
        }
        let e = numer.eval_one();
        if e <= 0 {
            return Err(KernelError::Internal(format!("non-positive multiplicity {e}")).into());
        }
        Ok(e as u64)
    }

    /// Hilbert–Samuel cross-check: `ℓ(R/q^t)` for `t = 1..=t_max`; returns the
    /// `n`-th finite difference once it is constant for three consecutive `t`.
    pub fn multiplicity_by_differences(&self, sop: &ParameterSystem, t_max: usize) -> Result<Option<u64>, RingError> {
        let n = sop.len();
        if !sop.is_full(self) {
            return Err(RingError::Argument("finite differences need a full system of parameters".into()));
        }
        if n == 0 {
            return Ok(Some(self.length(&[])?));
        }
        let mut lengths: Vec<i64> = vec![0];
        let mut diffs: Vec<i64> = Vec::new();
        for t in 1..=t_max {
            let gens = ideal_power(sop.elements(), t as u32);
            lengths.push(self.length(&gens)? as i64);
            if t >= n {
                let d: i64 = (0..=n)
                    .map(|k| {
                        let sign = if k % 2 == 0 { 1 } else { -1 };
                        sign * binomial(n as u64, k as u64) as i64 * lengths[t - k]
                    })
                    .sum();
                diffs.push(d);
                let l = diffs.len();
                if l >= 3 && diffs[l - 1] == diffs[l - 2] && diffs[l - 2] == diffs[l - 3] && d > 0 {
                    return Ok(Some(d as u64));
                }
            }
        }
        Ok(None)
    }

    /// `ℓ(R/q) = e(q; R)` certifies Cohen–Macaulayness; inequality certifies the opposite.
    pub fn is_cohen_macaulay(&self, sop: &ParameterSystem) -> Result<Verdict, RingError> {
        let length = self.length(sop.elements())?;
        let multiplicity = self.multiplicity(sop)?;
        let cert = Certificate::LengthMultiplicity { length, multiplicity };
        Ok(if length == multiplicity {
            Verdict::proven(cert)
        } else {
            Verdict::refuted(cert)
        })
    }
}

/// Generators of the `t`-th power of the ideal generated by `elements`.
pub fn ideal_power(elements: &[Polynomial], t: u32) -> Vec<Polynomial> {
    let n = elements.len();
    if n == 0 {
        return vec![];
    }
    let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    for f in elements {
        let mut v = vec![Polynomial::one(f.ring())];
        for k in 1..=t as usize {
            let next = &v[k - 1] * f;
            v.push(next);
        }
        powers.push(v);
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, powers: &[Vec<Polynomial>], out: &mut Vec<Polynomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            let mut acc = powers[0][exps[0] as usize].clone();
            for k in 1..n {
                acc = &acc * &powers[k][exps[k] as usize];
            }
            out.push(acc);
            return;
        }
        for a in (0..=left).rev() {
            exps[i] = a;
            rec(i + 1, left - a, exps, powers, out);
        }
    }
    rec(0, t, &mut exps, &powers, &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SopSearch {
    pub min_degree: u32,
    pub max_degree: u32,
    pub max_tries: usize,
}

impl SopSearch {
    pub fn for_ring(ring: &RingPresentation) -> Self {
        let wmax = *ring.ring().weights().iter().max().unwrap();
        Self {
            min_degree: 1,
            max_degree: 4 * wmax,
            max_tries: 8,
        }
    }

    pub fn starting_at(mut self, d: u32) -> Self {
        self.min_degree = d;
        self.max_degree = self.max_degree.max(d);
        self
    }
}

/// A certified (possibly partial) system of parameters: the prefix of length
/// `i` cuts the dimension down to exactly `n - i`.
#[derive(Clone, Debug)]
pub struct ParameterSystem {
    elements: Vec<Polynomial>,
    degrees: Vec<u32>,
    certificate: Vec<usize>,
    prefix_ideals: Vec<IdealHandle>,
    deep: u32,
}

impl ParameterSystem {
    fn from_parts(ring: &RingPresentation, elements: Vec<Polynomial>, prefix_ideals: Vec<IdealHandle>) -> Self {
        let n = ring.dim();
        let degrees = elements.iter().map(|f| f.max_degree()).collect();
        let certificate = (1..=elements.len()).map(|i| n - i).collect();
        let deep = elements
            .iter()
            .flat_map(|f| f.terms().iter().map(|(m, _)| m.total_exponent()))
            .min()
            .unwrap_or(0);
        Self {
            elements,
            degrees,
            certificate,
            prefix_ideals,
            deep,
        }
    }

    /// Certifies `elements` as (part of) a system of parameters of `ring`.
    pub fn certify(ring: &RingPresentation, elements: Vec<Polynomial>) -> Result<Self, RingError> {
        let n = ring.dim() as i32;
        if elements.len() > ring.dim() {
            return Err(RingError::Argument(format!(
                "{} elements but dim R = {}",
                elements.len(),
                n
            )));
        }
        for f in &elements {
            if f.is_zero() || !f.is_homogeneous() {
                return Err(KernelError::Inhomogeneous {
                    generator: f.to_string(),
                    degrees: f.term_degrees(),
                }
                .into());
            }
        }
        let mut prefix_ideals = vec![ring.defining().clone()];
        for (i, f) in elements.iter().enumerate() {
            let next = prefix_ideals[i].with(std::slice::from_ref(f));
            let found = next.krull_dimension()?;
            let expected = n - i as i32 - 1;
            if found != expected {
                return Err(RingError::NotSop {
                    prefix: i + 1,
                    found,
                    expected,
                });
            }
            prefix_ideals.push(next);
        }
        Ok(Self::from_parts(ring, elements, prefix_ideals))
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `certificate()[i-1] = dim R/(J + (x_1..x_i))`.
    pub fn certificate(&self) -> &[usize] {
        &self.certificate
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_full(&self, ring: &RingPresentation) -> bool {
        self.elements.len() == ring.dim()
    }

    /// Largest `N` with every element in `m^N` (exponent-sum test on each term).
    pub fn deep(&self) -> u32 {
        self.deep
    }

    /// `J + (x_1..x_i)`.
    pub fn prefix_ideal(&self, i: usize) -> &IdealHandle {
        &self.prefix_ideals[i]
    }

    /// `J + (x_1..x_n)`.
    pub fn full_ideal(&self) -> &IdealHandle {
        self.prefix_ideals.last().unwrap()
    }

    /// `(x_1^N, ..., x_n^N)` with fresh certificates.
    pub fn power(&self, ring: &RingPresentation, n: u32) -> Result<ParameterSystem, RingError> {
        if n == 0 {
            return Err(RingError::Argument("power must be at least 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let elements = self.elements.iter().map(|f| f.pow(n as u64)).collect();
        ParameterSystem::certify(ring, elements)
    }

    /// The first `t` elements.
    pub fn prefix(&self, ring: &RingPresentation, t: usize) -> ParameterSystem {
        ParameterSystem::from_parts(
            ring,
            self.elements[..t].to_vec(),
            self.prefix_ideals[..=t].to_vec(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(|f| f.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_planes() -> RingPresentation {
        RingPresentation::build(2, &["x", "y", "u", "v"], &[1, 1, 1, 1], &["x*u", "x*v", "y*u", "y*v"]).unwrap()
    }

    fn cusp() -> RingPresentation {
        RingPresentation::build(2, &["x", "y", "z"], &[2, 2, 3], &["z^2 + x^3 + y^3"]).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(two_planes().dim(), 2);
        assert_eq!(cusp().dim(), 2);
        assert!(matches!(
            RingPresentation::build(4, &["x"], &[1], &[]),
            Err(RingError::Kernel(KernelError::NotPrime(4)))
        ));
        let e = RingPresentation::build(3, &["x", "y"], &[1, 1], &["x^2 + y"]).unwrap_err();
        assert!(e.to_string().contains("x^2 + y"), "{e}");
        assert!(matches!(
            RingPresentation::build(3, &["x"], &[1], &["1"]),
            Err(RingError::UnitIdeal)
        ));
    }

    #[test]
    fn sop_search_and_certificates() {
        let r = two_planes();
        let sop = r.find_sop(1, &SopSearch::for_ring(&r)).unwrap();
        assert_eq!(sop.len(), 2);
        assert_eq!(sop.certificate(), &[1, 0]);
        let poly = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        let s = poly.find_sop(5, &SopSearch::for_ring(&poly)).unwrap();
        assert_eq!(s.degrees(), &[1, 1]);
        let art = RingPresentation::build(3, &["x"], &[1], &["x^2"]).unwrap();
        assert!(art.find_sop(0, &SopSearch::for_ring(&art)).unwrap().is_empty());
    }

    #[test]
    fn find_sop_is_deterministic() {
        let r = two_planes();
        let a = r.find_sop(9, &SopSearch::for_ring(&r)).unwrap();
        let b = r.find_sop(9, &SopSearch::for_ring(&r)).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn lengths() {
        let poly = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        assert_eq!(poly.length(&poly.parse_all(&["x^2", "x*y", "y^2"]).unwrap()).unwrap(), 3);
        assert_eq!(poly.length(&poly.parse_all(&["x", "y"]).unwrap()).unwrap(), 1);
        assert!(matches!(
            poly.length(&poly.parse_all(&["x"]).unwrap()),
            Err(RingError::InfiniteLength(1))
        ));
        let r = two_planes();
        assert_eq!(r.length(&r.parse_all(&["x + u", "y + v"]).unwrap()).unwrap(), 3);
    }

    #[test]
    fn multiplicities() {
        let line = RingPresentation::build(3, &["x"], &[1], &[]).unwrap();
        let sop = ParameterSystem::certify(&line, line.parse_all(&["x^2"]).unwrap()).unwrap();
        assert_eq!(line.multiplicity(&sop).unwrap(), 2);

        let r = two_planes();
        let sop = ParameterSystem::certify(&r, r.parse_all(&["x + u", "y + v"]).unwrap()).unwrap();
        assert_eq!(r.multiplicity(&sop).unwrap(), 2);
        assert!(r.is_cohen_macaulay(&sop).unwrap().is_refuted());

        let c = cusp();
        let sop = ParameterSystem::certify(&c, c.parse_all(&["x", "y"]).unwrap()).unwrap();
        assert_eq!(c.multiplicity(&sop).unwrap(), 2);
        assert_eq!(c.length(sop.elements()).unwrap(), 2);
        assert!(c.is_cohen_macaulay(&sop).unwrap().is_proven());
    }

    #[test]
    fn finite_differences_agree_on_two_planes() {
        let r = two_planes();
        let sop = ParameterSystem::certify(&r, r.parse_all(&["x + u", "y + v"]).unwrap()).unwrap();
        assert_eq!(r.multiplicity_by_differences(&sop, 12).unwrap(), Some(2));
    }

    #[test]
    fn power_sop_examples() {
        let poly = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        let sop = ParameterSystem::certify(&poly, poly.parse_all(&["x", "y"]).unwrap()).unwrap();
        let p3 = sop.power(&poly, 3).unwrap();
        assert_eq!(p3.to_strings(), vec!["x^3", "y^3"]);
        assert_eq!(p3.deep(), 3);
        assert_eq!(sop.power(&poly, 1).unwrap().elements(), sop.elements());
        let r = two_planes();
        let s = ParameterSystem::certify(&r, r.parse_all(&["x + u", "y + v"]).unwrap()).unwrap();
        let s2 = s.power(&r, 2).unwrap();
        assert_eq!(s2.certificate(), &[1, 0]);
        assert_eq!(s2.to_strings(), vec!["x^2 + u^2", "y^2 + v^2"]);
    }

    #[test]
    fn non_sop_is_rejected() {
        let poly = RingPresentation::build(3, &["x", "y"], &[1, 1], &[]).unwrap();
        let e = ParameterSystem::certify(&poly, poly.parse_all(&["x", "x"]).unwrap()).unwrap_err();
        assert!(matches!(e, RingError::NotSop { prefix: 2, .. }));
    }
}
