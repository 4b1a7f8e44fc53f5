//! Hilbert series numerators of monomial ideals and the integer polynomial
//! arithmetic they need.

use std::fmt;

use serde::Serialize;

use super::monomial::Exponents;

/// Integer polynomial in `t`, coefficient `k` at index `k`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn one() -> Self {
        IntPoly(vec![1])
    }

    pub fn zero() -> Self {
        IntPoly(vec![])
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    /// `1 - t^d`.
    pub fn one_minus_t_pow(d: u32) -> Self {
        if d == 0 {
            return IntPoly::zero();
        }
        let mut v = vec![0; d as usize + 1];
        v[0] = 1;
        v[d as usize] = -1;
        IntPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.0.len().max(other.0.len());
        IntPoly((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect()).trim()
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.0.len().max(other.0.len());
        IntPoly((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect()).trim()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly(v).trim()
    }

    /// Multiplication by `t^d`.
    pub fn shift(&self, d: u32) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![0; d as usize];
        v.extend(&self.0);
        IntPoly(v)
    }

    /// Exact division by `1 - t^d`. Returns `None` if it is not exact.
    pub fn div_one_minus_t_pow(&self, d: u32) -> Option<IntPoly> {
        // f = (1 - t^d) q  <=>  q_k = f_k + q_{k-d}
        let d = d as usize;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.0.len();
        if n <= d {
            return None;
        }
        let mut q = vec![0i64; n - d];
        for k in 0..n - d {
            q[k] = self.0[k] + if k >= d { q[k - d] } else { 0 };
        }
        // check the remaining coefficients: f_k = q_k - q_{k-d} for k >= n-d
        for k in n - d..n {
            let qk = 0;
            let prev = if k >= d { q[k - d] } else { 0 };
            if self.0[k] != qk - prev {
                return None;
            }
        }
        Some(IntPoly(q).trim())
    }

    pub fn eval_one(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Power-series coefficients of `self / prod (1 - t^{w_i})` up to `t^max_degree`.
    pub fn series(&self, weights: &[u32], max_degree: usize) -> Vec<i64> {
        let mut s: Vec<i64> = (0..=max_degree).map(|k| self.coeff(k)).collect();
        for &w in weights {
            let w = w as usize;
            for k in w..=max_degree {
                s[k] += s[k - w];
            }
        }
        s
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "t")?,
                1 => write!(f, "{a}*t")?,
                _ if a == 1 => write!(f, "t^{k}")?,
                _ => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

fn wdeg(e: &[u32], weights: &[u32]) -> u32 {
    e.iter().zip(weights).map(|(a, w)| a * w).sum()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Exponents>) -> Vec<Exponents> {
    gens.sort_by_key(|g| g.iter().sum::<u32>());
    gens.dedup();
    let mut out: Vec<Exponents> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator `N(t)` with `HS_{S/M}(t) = N(t) / prod (1 - t^{w_i})` for the
/// monomial ideal `M` generated by `gens`, via pivot splitting:
/// `N(M) = N(M + (p)) + t^{deg p} N(M : p)`.
pub fn hilbert_numerator(gens: &[Exponents], weights: &[u32]) -> IntPoly {
    numerator_rec(minimalize(gens.to_vec()), weights)
}

fn numerator_rec(gens: Vec<Exponents>, weights: &[u32]) -> IntPoly {
    if gens.is_empty() {
        return IntPoly::one();
    }
    if gens.iter().any(|g| g.iter().all(|&a| a == 0)) {
        return IntPoly::zero();
    }
    let nv = weights.len();
    // pairwise coprime generators: product formula
    let mut used = vec![false; nv];
    let mut coprime = true;
    'outer: for g in &gens {
        for (i, &a) in g.iter().enumerate() {
            if a > 0 {
                if used[i] {
                    coprime = false;
                    break 'outer;
                }
                used[i] = true;
            }
        }
    }
    if coprime {
        return gens.iter().fold(IntPoly::one(), |acc, g| {
            acc.mul(&IntPoly::one_minus_t_pow(wdeg(g, weights)))
        });
    }
    // pivot on the variable occurring in the most generators
    let mut counts = vec![0usize; nv];
    for g in &gens {
        for (i, &a) in g.iter().enumerate() {
            if a > 0 {
                counts[i] += 1;
            }
        }
    }
    let var = (0..nv).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).unwrap();
    let mut exps: Vec<u32> = gens.iter().map(|g| g[var]).filter(|&a| a > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut pivot: Exponents = Exponents::from_elem(0, nv);
    pivot[var] = e;

    let mut plus = gens.clone();
    plus.push(pivot.clone());
    let colon: Vec<Exponents> = gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[var] = h[var].saturating_sub(e);
            h
        })
        .collect();
    let a = numerator_rec(minimalize(plus), weights);
    let b = numerator_rec(minimalize(colon), weights);
    a.add(&b.shift(wdeg(&pivot, weights)))
}
