//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the Gröbner machinery: graded pieces of an ideal are spanned
//! directly by monomial multiples of the generators and row reduced.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use fsing::kernel::{FieldSpec, IdealHandle, MonomialOrder, PolyRing, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Exps = Vec<u32>;

/// Exponent vectors of weighted degree `d`, in a fixed order.
pub fn exps_of_degree(weights: &[u32], d: u32) -> Vec<Exps> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0;
        while k * weights[i] <= left {
            cur.push(k);
            go(weights, i + 1, left - k * weights[i], cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Row echelon form over F_p with membership queries.
pub struct Span {
    p: u64,
    /// pivot column -> normalized row
    rows: Vec<(usize, Vec<u64>)>,
    width: usize,
}

impl Span {
    pub fn new(p: u64, width: usize) -> Self {
        Span { p, rows: Vec::new(), width }
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat; p is tiny
        let mut r = 1;
        for _ in 0..self.p - 2 {
            r = r * a % self.p;
        }
        r
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + self.p - c * r % self.p) % self.p;
                }
            }
        }
        v
    }

    /// Adds a vector; true if the rank grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let s = self.inv(v[pivot]);
        let v: Vec<u64> = v.iter().map(|c| c * s % self.p).collect();
        // keep rows fully reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + self.p - c * r % self.p) % self.p;
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: Vec<u64>) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// The degree-`d` piece of the ideal generated by `gens`.
pub struct Piece {
    pub span: Span,
    index: HashMap<Exps, usize>,
}

impl Piece {
    pub fn build(ring: &PolyRing, gens: &[Polynomial], d: u32) -> Self {
        let w = ring.weights();
        let basis = exps_of_degree(w, d);
        let index: HashMap<Exps, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut span = Span::new(ring.p() as u64, basis.len());
        for g in gens {
            let gd = g.max_degree();
            if gd > d {
                continue;
            }
            for m in exps_of_degree(w, d - gd) {
                let mut v = vec![0u64; basis.len()];
                for (t, c) in g.terms() {
                    let e: Exps = t.exponents().iter().zip(&m).map(|(a, b)| a + b).collect();
                    v[index[&e]] = *c as u64;
                }
                span.insert(v);
            }
        }
        Piece { span, index }
    }

    pub fn vector(&self, f: &Polynomial) -> Vec<u64> {
        let mut v = vec![0u64; self.span.width()];
        for (t, c) in f.terms() {
            v[self.index[&t.exponents().to_vec()]] = *c as u64;
        }
        v
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.span.contains(self.vector(f))
    }
}

/// A random homogeneous ideal in at most three standard graded variables.
pub struct RandomIdeal {
    pub ring: Arc<PolyRing>,
    pub gens: Vec<Polynomial>,
}

pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

pub fn random_form(ring: &Arc<PolyRing>, rng: &mut ChaCha8Rng, d: u32, density: f64) -> Polynomial {
    let p = ring.p() as i64;
    loop {
        let mut terms: Vec<(fsing::kernel::Exponents, i64)> = Vec::new();
        for e in exps_of_degree(ring.weights(), d) {
            if rng.gen_bool(density) {
                terms.push((e.into_iter().collect(), rng.gen_range(1..p)));
            }
        }
        let f = Polynomial::from_terms(ring, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_ideal(seed: u64) -> RandomIdeal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let n = rng.gen_range(1..=3);
    let ring = PolyRing::new(
        FieldSpec::new(p).unwrap(),
        VAR_NAMES[..n].iter().map(|s| s.to_string()).collect(),
        vec![1; n],
        MonomialOrder::WeightedGrevlex,
    )
    .unwrap();
    let k = rng.gen_range(1..=3);
    let gens = (0..k)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            random_form(&ring, &mut rng, d, 0.5)
        })
        .collect();
    RandomIdeal { ring, gens }
}

/// Checks one ideal against the oracle in degrees `0..=max_degree`:
/// `dim I_d` must equal the number of non-standard monomials, and
/// `probes` random forms per degree must agree on membership, as must a
/// random combination of generator multiples (always a member).
/// Returns the number of membership comparisons made.
pub fn check_against_oracle(ideal: &RandomIdeal, max_degree: u32, probes: usize, seed: u64) -> Result<usize, String> {
    let handle = IdealHandle::new(&ideal.ring, ideal.gens.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compared = 0;
    for d in 0..=max_degree {
        let piece = Piece::build(&ideal.ring, &ideal.gens, d);
        let total = exps_of_degree(ideal.ring.weights(), d).len();
        let standard = handle.graded_piece_basis(d).map_err(|e| e.to_string())?.len();
        if total - standard != piece.span.rank() {
            return Err(format!(
                "{:?} degree {d}: oracle rank {} vs {} non-standard monomials",
                ideal.gens.iter().map(ToString::to_string).collect::<Vec<_>>(),
                piece.span.rank(),
                total - standard
            ));
        }
        if total == 0 {
            continue;
        }
        let mut samples: Vec<Polynomial> = (0..probes).map(|_| random_form(&ideal.ring, &mut rng, d, 0.6)).collect();
        // a guaranteed member
        let mut member = Polynomial::zero(&ideal.ring);
        for g in &ideal.gens {
            if g.max_degree() <= d {
                let m = random_form(&ideal.ring, &mut rng, d - g.max_degree(), 0.5);
                member = member.try_add(&m.try_mul(g).unwrap()).unwrap();
            }
        }
        samples.push(member);
        for f in samples {
            let gb = handle.contains(&f).map_err(|e| e.to_string())?;
            let oracle = f.is_zero() || piece.contains(&f);
            if gb != oracle {
                return Err(format!("membership of {f}: Gröbner {gb}, oracle {oracle}"));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// Hilbert function of `S/I` straight from the oracle.
pub fn oracle_hilbert_function(ring: &PolyRing, gens: &[Polynomial], d: u32) -> usize {
    let piece = Piece::build(ring, gens, d);
    exps_of_degree(ring.weights(), d).len() - piece.span.rank()
}
