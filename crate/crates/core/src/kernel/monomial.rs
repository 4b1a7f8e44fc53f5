//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use serde::Serialize;
use smallvec::SmallVec;

pub type Exponents = SmallVec<[u32; 6]>;

/// A monomial `x^a` with its weighted degree cached.
///
/// Equality and hashing look at the exponents only; the cached degree is a
/// function of them once the ring's weights are fixed.
#[derive(Clone, Debug)]
pub struct Monomial {
    exps: Exponents,
    degree: u32,
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps
    }
}

impl Eq for Monomial {}

impl std::hash::Hash for Monomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.exps.hash(state);
    }
}

impl Monomial {
    pub fn new(exps: Exponents, weights: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), weights.len());
        let degree = exps.iter().zip(weights).map(|(a, w)| a * w).sum();
        Self { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Self {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn variable(i: usize, weights: &[u32]) -> Self {
        let mut exps: Exponents = SmallVec::from_elem(0, weights.len());
        exps[i] = 1;
        Self {
            exps,
            degree: weights[i],
        }
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    /// Sum of the exponents, ignoring weights.
    pub fn total_exponent(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (a, b) in exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// Bit `i % 64` set when variable `i` occurs; `a | b` forces `mask(a) ⊆ mask(b)`.
    #[inline]
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .fold(0, |m, (i, _)| m | 1 << (i % 64))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|a| a * k).collect(),
            degree: self.degree * k,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::new(exps, weights)
    }

    pub fn gcd(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.min(b))
            .collect();
        Monomial::new(exps, weights)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .map(|(i, _)| i)
    }
}

/// Monomial orders. All are total, multiplicative and have `1` as minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MonomialOrder {
    /// Weighted degree first, ties broken by reverse lexicographic comparison.
    WeightedGrevlex,
    /// Pure lexicographic, `x_0 > x_1 > ...`.
    Lex,
    /// Block order eliminating the first `count` variables: weighted degree in
    /// the block first, then weighted grevlex on the whole vector.
    Elimination { count: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial, weights: &[u32]) -> Ordering {
        match self {
            MonomialOrder::WeightedGrevlex => grevlex(a, b),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Elimination { count } => {
                let block = |m: &Monomial| -> u32 {
                    m.exps[..*count]
                        .iter()
                        .zip(weights)
                        .map(|(e, w)| e * w)
                        .sum()
                };
                block(a).cmp(&block(b)).then_with(|| grevlex(a, b))
            }
        }
    }
}

#[inline]
fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree.cmp(&b.degree) {
        Ordering::Equal => {
            for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    // smaller exponent in the last differing variable wins
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        }
        ord => ord,
    }
}

/// All exponent vectors of weighted degree exactly `d`, in a fixed order.
pub fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Monomial> {
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i + 1 == weights.len() {
            if left % weights[i] == 0 {
                cur[i] = left / weights[i];
                out.push(cur.clone());
                cur[i] = 0;
            }
            return;
        }
        let w = weights[i];
        let mut a = left / w;
        loop {
            cur[i] = a;
            rec(weights, i + 1, left - a * w, cur, out);
            if a == 0 {
                break;
            }
            a -= 1;
        }
        cur[i] = 0;
    }
    if weights.is_empty() {
        return if d == 0 { vec![Monomial::one(0)] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur: Exponents = SmallVec::from_elem(0, weights.len());
    rec(weights, 0, d, &mut cur, &mut out);
    out.into_iter().map(|e| Monomial::new(e, weights)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32], w: &[u32]) -> Monomial {
        Monomial::new(e.iter().copied().collect(), w)
    }

    #[test]
    fn grevlex_breaks_ties_reverse_lexicographically() {
        let w = [1, 1, 1];
        let o = MonomialOrder::WeightedGrevlex;
        // x*z < y^2 in grevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1], &w), &m(&[0, 2, 0], &w), &w), Ordering::Less);
        assert_eq!(o.cmp(&m(&[2, 0, 0], &w), &m(&[1, 1, 0], &w), &w), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 2], &w), &m(&[1, 0, 0], &w), &w), Ordering::Greater);
    }

    #[test]
    fn weights_change_the_degree_comparison() {
        let w = [2, 2, 3];
        let o = MonomialOrder::WeightedGrevlex;
        // z (deg 3) > x (deg 2)
        assert_eq!(o.cmp(&m(&[0, 0, 1], &w), &m(&[1, 0, 0], &w), &w), Ordering::Greater);
    }

    #[test]
    fn elimination_order_puts_tag_first() {
        let w = [1, 1, 1];
        let o = MonomialOrder::Elimination { count: 1 };
        assert_eq!(o.cmp(&m(&[1, 0, 0], &w), &m(&[0, 5, 0], &w), &w), Ordering::Greater);
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(&[1, 1, 1], 2).len(), 6);
        assert_eq!(monomials_of_degree(&[2, 2, 3], 6).len(), 5);
        assert!(monomials_of_degree(&[2, 2], 3).is_empty());
        assert_eq!(monomials_of_degree(&[1, 1], 0).len(), 1);
    }
}
