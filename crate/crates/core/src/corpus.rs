//! Fixture rings with expected partial classifications, and seeded random
//! ring generators for the counterexample search.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::finjective::ClassificationReport;
use crate::kernel::monomial::monomials_of_degree;
use crate::kernel::{Exponents, FieldSpec, MonomialOrder, PolyRing, Polynomial};
use crate::ringkit::{RingError, RingPresentation};
use crate::verdict::Verdict;

/// One expected field of a classification report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "field", content = "value", rename_all = "snake_case")]
pub enum Expect {
    CohenMacaulay(bool),
    Buchsbaum(bool),
    FPure(bool),
    FInjective(bool),
    Reduced(bool),
    Flc(bool),
    /// Common value of `l - e` over sampled systems
    Delta(i64),
    /// Stabilized `l - e` on deep systems
    Constant(i64),
    /// Multiplicity and length on the classification system, when fixed
    LengthMultiplicity(u64, u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub expect: Expect,
    /// How the expected value was obtained.
    pub oracle: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureRing {
    pub name: &'static str,
    pub p: u64,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub gens: Vec<String>,
    pub expected: Vec<Expectation>,
}

impl FixtureRing {
    pub fn build(&self) -> Result<RingPresentation, RingError> {
        self.spec().build()
    }

    pub fn spec(&self) -> RingSpec {
        RingSpec {
            p: self.p,
            vars: self.vars.clone(),
            weights: self.weights.clone(),
            gens: self.gens.clone(),
        }
    }

    /// Mismatches between the report and the expectations.
    pub fn check(&self, report: &ClassificationReport) -> Vec<String> {
        self.expected
            .iter()
            .filter_map(|e| {
                let ok = matches_expectation(e.expect, report);
                (!ok).then(|| format!("{}: expected {:?} ({})", self.name, e.expect, e.oracle))
            })
            .collect()
    }
}

fn positive(v: &Verdict, want: bool) -> bool {
    if want {
        v.is_positive()
    } else {
        v.is_negative()
    }
}

fn matches_expectation(e: Expect, r: &ClassificationReport) -> bool {
    match e {
        Expect::CohenMacaulay(b) => {
            if b {
                r.cohen_macaulay.is_proven()
            } else {
                r.cohen_macaulay.is_refuted()
            }
        }
        Expect::Buchsbaum(b) => {
            let v = r.buchsbaum_verdict();
            if b {
                v.is_evidence_for()
            } else {
                v.is_refuted()
            }
        }
        Expect::FPure(b) => {
            if b {
                r.f_pure.is_proven()
            } else {
                r.f_pure.is_refuted()
            }
        }
        Expect::FInjective(b) => positive(&r.f_injective, b),
        Expect::Reduced(b) => {
            if b {
                r.reduced.is_proven()
            } else {
                r.reduced.is_refuted()
            }
        }
        Expect::Flc(b) => positive(&r.flc, b),
        Expect::Delta(d) => r.delta_values() == vec![d],
        Expect::Constant(c) => r.constant.as_ref().and_then(|k| k.constant) == Some(c),
        Expect::LengthMultiplicity(l, m) => matches!(
            r.cohen_macaulay.witness().or(match &r.cohen_macaulay {
                Verdict::Proven { certificate, .. } => Some(certificate),
                _ => None,
            }),
            Some(crate::verdict::Certificate::LengthMultiplicity { length, multiplicity }) if *length == l && *multiplicity == m
        ),
    }
}

fn exp(expect: Expect, oracle: &'static str) -> Expectation {
    Expectation { expect, oracle }
}

const REGULAR: &str = "polynomial ring: regular, hence Cohen-Macaulay with l = e";
const FEDDER_ONE: &str = "Fedder: J = 0 gives (1), not inside m^[p]";
const PURE_SQFREE: &str = "Fedder: (x_1...x_m)^(p-1) lies in J^[p] : J and outside m^[p] for squarefree monomial J";
const SQFREE: &str = "squarefree monomial ideal is radical";

fn names(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

fn polynomial_fixture(name: &'static str, p: u64, vars: &[&str]) -> FixtureRing {
    let weights = vec![1; vars.len()];
    FixtureRing {
        name,
        p,
        vars: names(vars),
        weights,
        gens: vec![],
        expected: vec![
            exp(Expect::CohenMacaulay(true), REGULAR),
            exp(Expect::Delta(0), REGULAR),
            exp(Expect::Constant(0), REGULAR),
            exp(Expect::Buchsbaum(true), "Cohen-Macaulay rings are Buchsbaum"),
            exp(Expect::FPure(true), FEDDER_ONE),
            exp(Expect::FInjective(true), "regular: every ideal is Frobenius closed"),
            exp(Expect::Reduced(true), "domain"),
        ],
    }
}

fn xy_fixture(name: &'static str, p: u64) -> FixtureRing {
    FixtureRing {
        name,
        p,
        vars: names(&["x", "y"]),
        weights: vec![1, 1],
        gens: vec!["x*y".into()],
        expected: vec![
            exp(Expect::CohenMacaulay(true), "hypersurface; l(R/(x+y)) = 2 = e"),
            exp(Expect::Delta(0), "hypersurface: Cohen-Macaulay"),
            exp(Expect::FPure(true), "Fedder: (xy)^(p-1) is outside (x^p, y^p)"),
            exp(Expect::FInjective(true), "F-pure implies F-injective"),
            exp(Expect::Reduced(true), SQFREE),
        ],
    }
}

/// The built-in corpus.
pub fn fixtures() -> Vec<FixtureRing> {
    let mut out = vec![
        polynomial_fixture("poly-2", 2, &["x", "y"]),
        polynomial_fixture("poly-3", 3, &["x", "y", "z"]),
        polynomial_fixture("poly-5", 5, &["x", "y"]),
        xy_fixture("xy-p2", 2),
        xy_fixture("xy-p3", 3),
        xy_fixture("xy-p5", 5),
        FixtureRing {
            name: "two-planes",
            p: 2,
            vars: names(&["x", "y", "u", "v"]),
            weights: vec![1, 1, 1, 1],
            gens: ["x*u", "x*v", "y*u", "y*v"].map(String::from).to_vec(),
            expected: vec![
                exp(Expect::CohenMacaulay(false), "l(R/(x+u, y+v)) = 3 from standard monomials 1, x, y; e = 2 from the Hilbert series"),
                exp(Expect::Buchsbaum(true), "every sampled system passes the colon and d-sequence channels"),
                exp(Expect::FPure(true), PURE_SQFREE),
                exp(Expect::Delta(1), "l - e = 3 - 2 on linear systems, constant on all samples"),
                exp(Expect::Constant(1), "binom(1,1) l(H^1) with l(H^1) = 1"),
                exp(Expect::Reduced(true), SQFREE),
                exp(Expect::FInjective(true), "F-pure implies F-injective"),
            ],
        },
        FixtureRing {
            name: "plane-line",
            p: 2,
            vars: names(&["x", "y", "z"]),
            weights: vec![1, 1, 1],
            gens: ["x*y", "x*z"].map(String::from).to_vec(),
            expected: vec![
                exp(Expect::Buchsbaum(false), "plane and line meet in a point: l - e grows along powers of a system"),
                exp(Expect::Flc(false), "H^1 has infinite length for a non-equidimensional ring"),
                exp(Expect::Reduced(true), SQFREE),
                exp(Expect::FPure(true), PURE_SQFREE),
            ],
        },
        FixtureRing {
            name: "char2-cusplike",
            p: 2,
            vars: names(&["x", "y", "z"]),
            weights: vec![2, 2, 3],
            gens: vec!["z^2 + x^3 + y^3".into()],
            expected: vec![
                exp(Expect::CohenMacaulay(true), "hypersurface; R/(x,y) = F_2[z]/(z^2)"),
                exp(Expect::Delta(0), "hypersurface: Cohen-Macaulay"),
                exp(Expect::Constant(0), "hypersurface: Cohen-Macaulay"),
                exp(Expect::FPure(false), "Fedder: f = z^2 + x^3 + y^3 has every term inside (x^2, y^2, z^2)"),
                exp(Expect::FInjective(false), "z^2 = x^3 + y^3 lies in (x^2, y^2) + J while z is outside (x, y)"),
                exp(Expect::Reduced(true), "hypersurface with isolated singularity"),
            ],
        },
        FixtureRing {
            name: "fermat-p5",
            p: 5,
            vars: names(&["x", "y", "z"]),
            weights: vec![1, 1, 1],
            gens: vec!["x^3 + y^3 + z^3".into()],
            expected: vec![
                exp(Expect::CohenMacaulay(true), "hypersurface"),
                exp(Expect::FPure(false), "expanding f^4: exponents 3a, 3b, 3c with a + b + c = 4 always include one >= 5"),
                exp(Expect::Reduced(true), "hypersurface with isolated singularity"),
            ],
        },
        FixtureRing {
            name: "fermat-p7",
            p: 7,
            vars: names(&["x", "y", "z"]),
            weights: vec![1, 1, 1],
            gens: vec!["x^3 + y^3 + z^3".into()],
            expected: vec![
                exp(Expect::CohenMacaulay(true), "hypersurface"),
                exp(Expect::FPure(true), "f^6 contains 90 x^6 y^6 z^6 and 90 = 6 mod 7"),
                exp(Expect::FInjective(true), "F-pure implies F-injective"),
                exp(Expect::Reduced(true), "hypersurface with isolated singularity"),
            ],
        },
    ];
    for (name, seed) in [("sqfree-s11", 11u64), ("sqfree-s23", 23u64)] {
        let ring = RingGenerator::new(Family::SquarefreeMonomial, seed).sample_spec(0);
        out.push(FixtureRing {
            name,
            p: ring.p,
            vars: ring.vars.clone(),
            weights: ring.weights.clone(),
            gens: ring.gens.clone(),
            expected: vec![
                exp(Expect::Reduced(true), SQFREE),
                exp(Expect::FPure(true), PURE_SQFREE),
            ],
        });
    }
    out
}

pub fn fixture(name: &str) -> Option<FixtureRing> {
    fixtures().into_iter().find(|f| f.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SquarefreeMonomial,
    Binomial,
    Hypersurface,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::SquarefreeMonomial => "squarefree-monomial",
            Family::Binomial => "binomial",
            Family::Hypersurface => "hypersurface",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "squarefree-monomial" | "squarefree" => Ok(Family::SquarefreeMonomial),
            "binomial" => Ok(Family::Binomial),
            "hypersurface" => Ok(Family::Hypersurface),
            _ => Err(format!("unknown family {s:?} (squarefree-monomial, binomial, hypersurface)")),
        }
    }
}

/// Textual ring data, as written to ring files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingSpec {
    pub p: u64,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub gens: Vec<String>,
}

impl RingSpec {
    pub fn build(&self) -> Result<RingPresentation, RingError> {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let gens: Vec<&str> = self.gens.iter().map(String::as_str).collect();
        RingPresentation::build(self.p, &vars, &self.weights, &gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingGenerator {
    pub family: Family,
    pub max_vars: usize,
    pub max_degree: u32,
    pub primes: Vec<u64>,
    pub seed: u64,
}

const NAMES: [&str; 5] = ["x", "y", "z", "u", "v"];

impl RingGenerator {
    pub fn new(family: Family, seed: u64) -> Self {
        Self {
            family,
            max_vars: 5,
            max_degree: 4,
            primes: vec![2, 3, 5],
            seed,
        }
    }

    /// The `k`-th ring of the stream, as text.
    pub fn sample_spec(&self, k: u64) -> RingSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::verdict::derive_seed(self.seed, &self.family.to_string(), k));
        let p = *self.primes.choose(&mut rng).unwrap();
        let nvars = rng.gen_range(2..=self.max_vars.max(2));
        let vars: Vec<String> = NAMES[..nvars].iter().map(|s| s.to_string()).collect();
        let (weights, gens) = match self.family {
            Family::SquarefreeMonomial => (vec![1; nvars], squarefree_gens(&mut rng, nvars, self.max_degree)),
            Family::Binomial => {
                let weights: Vec<u32> = (0..nvars).map(|_| rng.gen_range(1..=2)).collect();
                let gens = binomial_gens(&mut rng, p, &vars, &weights, self.max_degree);
                (weights, gens)
            }
            Family::Hypersurface => {
                let weights: Vec<u32> = (0..nvars).map(|_| rng.gen_range(1..=3)).collect();
                let gens = hypersurface_gen(&mut rng, p, &vars, &weights, self.max_degree);
                (weights, gens)
            }
        };
        RingSpec { p, vars, weights, gens }
    }

    /// Deterministic stream of validated rings (samples that fail validation are skipped).
    pub fn generate(&self, count: usize) -> impl Iterator<Item = (RingSpec, RingPresentation)> + '_ {
        (0u64..)
            .map(move |k| self.sample_spec(k))
            .filter_map(|spec| spec.build().ok().map(|r| (spec, r)))
            .take(count)
    }
}

fn squarefree_gens(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Vec<String> {
    let count = rng.gen_range(1..=3);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|i| b.contains(i));
    for _ in 0..50 {
        if gens.len() == count {
            break;
        }
        let d = rng.gen_range(2..=(max_degree as usize).min(nvars));
        let mut vars: Vec<usize> = (0..nvars).collect();
        vars.shuffle(rng);
        let mut g: Vec<usize> = vars[..d].to_vec();
        g.sort_unstable();
        if !gens.iter().any(|h| subset(h, &g) || subset(&g, h)) {
            gens.push(g);
        }
    }
    gens.iter()
        .map(|g| g.iter().map(|&i| NAMES[i]).collect::<Vec<_>>().join("*"))
        .collect()
}

fn ring_for(p: u64, vars: &[String], weights: &[u32]) -> std::sync::Arc<PolyRing> {
    PolyRing::new(
        FieldSpec::new(p).expect("generator primes are prime"),
        vars.to_vec(),
        weights.to_vec(),
        MonomialOrder::WeightedGrevlex,
    )
    .expect("generator rings are valid")
}

/// Monomials of weighted degree `d` with total exponent at most `max_total`.
fn small_monomials(weights: &[u32], d: u32, max_total: u32) -> Vec<Exponents> {
    monomials_of_degree(weights, d)
        .into_iter()
        .filter(|m| m.total_exponent() <= max_total)
        .map(|m| m.exponents().iter().copied().collect())
        .collect()
}

fn binomial_gens(rng: &mut ChaCha8Rng, p: u64, vars: &[String], weights: &[u32], max_degree: u32) -> Vec<String> {
    let ring = ring_for(p, vars, weights);
    let count = rng.gen_range(1..=2);
    let mut out = Vec::new();
    for _ in 0..50 {
        if out.len() == count {
            break;
        }
        let d = rng.gen_range(2..=max_degree * weights.iter().max().unwrap());
        let monos = small_monomials(weights, d, max_degree);
        if monos.len() < 2 {
            continue;
        }
        let a = monos.choose(rng).unwrap().clone();
        let b = monos.choose(rng).unwrap().clone();
        if a == b {
            continue;
        }
        let c = rng.gen_range(1..p) as i64;
        let f = Polynomial::from_terms(&ring, [(a, 1), (b, -c)]);
        let s = f.to_string();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    if out.is_empty() {
        out.push(format!("{}*{}", vars[0], vars[1]));
    }
    out
}

fn hypersurface_gen(rng: &mut ChaCha8Rng, p: u64, vars: &[String], weights: &[u32], max_degree: u32) -> Vec<String> {
    let ring = ring_for(p, vars, weights);
    for _ in 0..50 {
        let d = rng.gen_range(2..=max_degree * weights.iter().max().unwrap());
        let monos = small_monomials(weights, d, max_degree);
        if monos.len() < 2 {
            continue;
        }
        let mut terms: Vec<(Exponents, i64)> = Vec::new();
        for m in &monos {
            if rng.gen_bool(0.5) {
                terms.push((m.clone(), rng.gen_range(1..p) as i64));
            }
        }
        let f = Polynomial::from_terms(&ring, terms);
        if f.len() >= 2 {
            return vec![f.to_string()];
        }
    }
    vec![format!("{}*{}", vars[0], vars[1])]
}
