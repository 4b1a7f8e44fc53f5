//! Colon-ideal presentation `N_i / D_i` of local cohomology and the
//! Frobenius matrix on it.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::kernel::linalg::Echelon;
use crate::kernel::monomial::monomials_of_degree;
use crate::kernel::{IdealHandle, IntPoly, KernelError, Monomial, Polynomial};
use crate::parameters::lc_denominator;
use crate::ringkit::{ParameterSystem, RingError, RingPresentation};
use crate::verdict::{Certificate, Verdict};

pub const STANDARDNESS: &str = "standard system of parameters (Buchsbaum evidence)";

#[derive(Clone, Debug)]
pub struct LCPresentation {
    pub index: usize,
    pub sop: ParameterSystem,
    pub numerator: IdealHandle,
    pub denominator: IdealHandle,
    /// `(degree, lift)`; lifts are in normal form modulo the denominator
    pub basis: Vec<(u32, Polynomial)>,
    pub profile: BTreeMap<u32, usize>,
}

impl LCPresentation {
    pub fn length(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationSummary {
    pub index: usize,
    pub length: usize,
    pub profile: BTreeMap<u32, usize>,
    pub basis: Vec<Polynomial>,
}

impl From<&LCPresentation> for PresentationSummary {
    fn from(p: &LCPresentation) -> Self {
        Self {
            index: p.index,
            length: p.length(),
            profile: p.profile.clone(),
            basis: p.basis.iter().map(|(_, y)| y.clone()).collect(),
        }
    }
}

/// Coordinates of a homogeneous polynomial on a fixed monomial list.
fn coords(f: &Polynomial, index: &HashMap<Monomial, usize>, n: usize) -> Result<Vec<u32>, KernelError> {
    let mut v = vec![0u32; n];
    for (m, c) in f.terms() {
        let k = index
            .get(m)
            .ok_or_else(|| KernelError::Internal(format!("term {m:?} outside the standard monomials")))?;
        v[*k] = *c;
    }
    Ok(v)
}

/// `HS(S/D) - HS(S/N)` as a polynomial, when `N/D` has finite length.
fn quotient_profile(numerator: &IdealHandle, denominator: &IdealHandle) -> Result<Option<IntPoly>, KernelError> {
    let diff = denominator.hilbert_numerator()?.sub(&numerator.hilbert_numerator()?);
    let mut acc = diff;
    for &w in numerator.ring().weights() {
        match acc.div_one_minus_t_pow(w) {
            Some(q) => acc = q,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

/// Builds `N_i = (x_1..x_i) : I` and `D_i = (x_1..x_i) + sum_j (x_1..^x_j..x_i) : I`
/// with a degree-wise basis of `N_i / D_i`. For an artinian ring, `i = 0`
/// presents `R` itself.
pub fn lc_presentation(ring: &RingPresentation, sop: &ParameterSystem, i: usize) -> Result<LCPresentation, RingError> {
    let n = sop.len();
    if !sop.is_full(ring) {
        return Err(RingError::Argument("presentation needs a full system of parameters".into()));
    }
    if i >= n && !(i == 0 && n == 0) {
        return Err(RingError::Argument(format!(
            "index {i} out of range: H^{n} does not have finite length"
        )));
    }
    let full = sop.full_ideal();
    let numerator = sop.prefix_ideal(i).colon(full)?;
    let denominator = lc_denominator(ring, sop, i, full)?;
    if let Some(g) = numerator.first_outside(&denominator)? {
        return Err(KernelError::Internal(format!("denominator generator {g} outside the numerator")).into());
    }
    let series = quotient_profile(&numerator, &denominator)?.ok_or_else(|| {
        RingError::Argument(format!(
            "N_{i}/D_{i} has infinite length; the ring is probably not FLC"
        ))
    })?;
    let pring = ring.ring();
    let ngb = numerator.gb()?.to_vec();
    let mut basis = Vec::new();
    let mut profile = BTreeMap::new();
    for (d, &count) in series.0.iter().enumerate() {
        if count == 0 {
            continue;
        }
        if count < 0 {
            return Err(KernelError::Internal("negative Hilbert function of N/D".into()).into());
        }
        let d = d as u32;
        let standard = denominator.graded_piece_basis(d)?;
        let index: HashMap<Monomial, usize> = standard.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let mut ech = Echelon::new(pring.field(), &[], standard.len());
        let mut chosen = 0usize;
        'gens: for g in &ngb {
            let gd = g.max_degree();
            if gd > d {
                continue;
            }
            for m in monomials_of_degree(pring.weights(), d - gd) {
                let y = denominator.normal_form(&g.mul_term(&m, 1))?;
                if y.is_zero() {
                    continue;
                }
                let v = coords(&y, &index, standard.len())?;
                if ech.reduce(&v).iter().any(|&a| a != 0) {
                    ech = Echelon::new(
                        pring.field(),
                        &ech.rows.iter().cloned().chain(std::iter::once(v)).collect::<Vec<_>>(),
                        standard.len(),
                    );
                    basis.push((d, y.monic()));
                    chosen += 1;
                    if chosen == count as usize {
                        break 'gens;
                    }
                }
            }
        }
        if chosen != count as usize {
            return Err(KernelError::Internal(format!(
                "found {chosen} of {count} basis elements in degree {d}"
            ))
            .into());
        }
        profile.insert(d, chosen);
    }
    Ok(LCPresentation {
        index: i,
        sop: sop.clone(),
        numerator,
        denominator,
        basis,
        profile,
    })
}

/// `y ↦ y^p` from a presentation to its `p`-bracket counterpart.
#[derive(Clone, Debug)]
pub struct FrobeniusMatrix {
    pub index: usize,
    pub source: Vec<(u32, Polynomial)>,
    pub target: Vec<(u32, Polynomial)>,
    /// `columns[j]` = coordinates of `source[j]^p` on the target basis
    pub columns: Vec<Vec<u32>>,
    pub field: crate::kernel::FieldSpec,
}

pub fn frobenius_action_matrix(ring: &RingPresentation, pres: &LCPresentation) -> Result<FrobeniusMatrix, RingError> {
    let p = ring.p() as u64;
    let bracket_sop = pres.sop.power(ring, p as u32)?;
    let target = lc_presentation(ring, &bracket_sop, pres.index)?;
    for g in pres.denominator.gb()? {
        if !target.denominator.contains(&g.frobenius_power(p)?)? {
            return Err(KernelError::Internal(format!("Frobenius image of denominator generator {g} escapes")).into());
        }
    }
    let pring = ring.ring();
    // per target degree: echelon of the target lifts in standard-monomial coordinates
    let mut by_degree: HashMap<u32, (Vec<usize>, HashMap<Monomial, usize>, Echelon)> = HashMap::new();
    for (k, (d, _)) in target.basis.iter().enumerate() {
        by_degree.entry(*d).or_insert_with(|| (Vec::new(), HashMap::new(), Echelon::new(pring.field(), &[], 0))).0.push(k);
    }
    for (d, entry) in by_degree.iter_mut() {
        let standard = target.denominator.graded_piece_basis(*d)?;
        entry.1 = standard.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let rows = entry
            .0
            .iter()
            .map(|&k| coords(&target.basis[k].1, &entry.1, standard.len()))
            .collect::<Result<Vec<_>, _>>()?;
        entry.2 = Echelon::new(pring.field(), &rows, standard.len());
    }
    let f = pring.field();
    let mut columns = Vec::with_capacity(pres.basis.len());
    for (d, y) in &pres.basis {
        let img = y.frobenius_power(p)?;
        if !target.numerator.contains(&img)? {
            return Err(KernelError::Internal(format!("({y})^{p} is outside the bracket numerator")).into());
        }
        let img = target.denominator.normal_form(&img)?;
        let mut col = vec![0u32; target.basis.len()];
        if !img.is_zero() {
            let (members, index, ech) = by_degree.get(&(d * p as u32)).ok_or_else(|| {
                KernelError::Internal(format!("image of {y} lands in a degree with no target classes"))
            })?;
            let v = coords(&img, index, index.len())?;
            let c = ech
                .coordinates(&v)
                .ok_or_else(|| KernelError::Internal(format!("image of {y} is not in the target span")))?;
            for (r, &a) in c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in members.iter().zip(&ech.combos[r]) {
                    col[*slot] = f.add(col[*slot], f.mul(a, b));
                }
            }
        }
        columns.push(col);
    }
    Ok(FrobeniusMatrix {
        index: pres.index,
        source: pres.basis.clone(),
        target: target.basis,
        columns,
        field: f,
    })
}

impl FrobeniusMatrix {
    pub fn rank(&self) -> usize {
        Echelon::new(self.field, &self.columns, self.target.len()).rank()
    }

    /// Coefficient vectors (on the source basis) of classes killed by Frobenius.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        Echelon::new(self.field, &self.columns, self.target.len()).kernel
    }

    pub fn kernel_element(&self, coeffs: &[u32]) -> Option<Polynomial> {
        let ring = self.source.first()?.1.ring().clone();
        let mut acc = Polynomial::zero(&ring);
        for ((_, y), &c) in self.source.iter().zip(coeffs) {
            acc = acc.add_scaled(y, c);
        }
        Some(acc)
    }
}

/// `Proven` iff the matrix has trivial kernel; both outcomes are
/// conditional on the presentation being valid (standard system).
pub fn f_injective_on_hi(matrix: &FrobeniusMatrix) -> Verdict {
    let kernel = matrix.kernel();
    let v = match kernel.first() {
        None => Verdict::proven(Certificate::FullRank {
            index: matrix.index,
            rank: matrix.rank(),
            dimension: matrix.source.len(),
        }),
        Some(c) => Verdict::refuted(Certificate::KernelVector {
            index: matrix.index,
            element: matrix.kernel_element(c).unwrap(),
            coordinates: c.clone(),
        }),
    };
    v.conditional(STANDARDNESS)
}
