use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::poly::MultiPoly;
use super::rat::CRat;
use crate::error::{Error, Result};

/// Element of 𝔕^{C(ℓ,k)} = 𝔕 ⊗ ∧^k Λ: one polynomial per strictly
/// increasing index tuple (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulElement {
    pub n: usize,
    pub ell: usize,
    pub degree: usize,
    pub comps: BTreeMap<Vec<usize>, MultiPoly>,
}

/// Sign of the permutation sorting `idx`, or None when an index repeats.
fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let inversions = (0..idx.len()).flat_map(|i| (i + 1..idx.len()).map(move |j| (i, j))).filter(|&(i, j)| idx[i] > idx[j]).count();
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    let mut v = idx.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl KoszulElement {
    pub fn zero(n: usize, ell: usize, degree: usize) -> Self {
        KoszulElement { n, ell, degree, comps: BTreeMap::new() }
    }

    /// f ⊗ e_{i₁} ∧ … ∧ e_{i_k} for any index order; repeated indices
    /// give zero.
    pub fn basis(ell: usize, idx: &[usize], f: MultiPoly) -> Result<Self> {
        if let Some(i) = idx.iter().find(|i| **i >= ell) {
            return Err(Error::Invalid(format!("index {} exceeds ℓ = {ell}", i + 1)));
        }
        let mut e = KoszulElement::zero(f.n, ell, idx.len());
        if let Some((sorted, s)) = sort_sign(idx) {
            e.add_comp(sorted, f.scale(&CRat::int(s)));
        }
        Ok(e)
    }

    fn add_comp(&mut self, idx: Vec<usize>, f: MultiPoly) {
        let sum = match self.comps.remove(&idx) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.comps.insert(idx, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, o: &KoszulElement) -> Result<Self> {
        if self.degree != o.degree || self.ell != o.ell {
            return Err(Error::Invalid("Koszul elements of different degree or rank".into()));
        }
        let mut e = self.clone();
        for (i, f) in &o.comps {
            e.add_comp(i.clone(), f.clone());
        }
        Ok(e)
    }

    pub fn mul_poly(&self, h: &MultiPoly) -> Self {
        let mut e = KoszulElement::zero(self.n, self.ell, self.degree);
        for (i, f) in &self.comps {
            e.add_comp(i.clone(), f.mul(h));
        }
        e
    }

    pub fn neg(&self) -> Self {
        self.mul_poly(&MultiPoly::constant(self.n, CRat::int(-1)))
    }
}

impl fmt::Display for KoszulElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(i, p)| {
                let e: Vec<String> = i.iter().map(|k| format!("e{}", k + 1)).collect();
                let e = if e.is_empty() { "1".to_string() } else { e.join("∧") };
                format!("({p})⊗{e}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// d(f ⊗ e_I) = Σ_j P_j f ⊗ e_j ∧ e_I.
pub fn koszul_d(e: &KoszulElement, polys: &[MultiPoly]) -> Result<KoszulElement> {
    if polys.len() != e.ell {
        return Err(Error::DimensionMismatch { expected: e.ell, got: polys.len() });
    }
    if e.degree >= e.ell {
        return Err(Error::DegreeOverflow { degree: e.degree, len: e.ell });
    }
    let mut out = KoszulElement::zero(e.n, e.ell, e.degree + 1);
    for (idx, f) in &e.comps {
        for (j, p) in polys.iter().enumerate() {
            let full: Vec<usize> = std::iter::once(j).chain(idx.iter().copied()).collect();
            if let Some((sorted, s)) = sort_sign(&full) {
                out.add_comp(sorted, p.mul(f).scale(&CRat::int(s)));
            }
        }
    }
    Ok(out)
}

/// s(Σ f_α e_α) = Σ_β Σ_j a_j f_{jβ} e_β, where f_{jβ} is the coefficient
/// of e_j ∧ e_β. Degree-0 input maps to None (the complex starts at 0).
pub fn koszul_homotopy(e: &KoszulElement, a: &[MultiPoly]) -> Result<Option<KoszulElement>> {
    if a.len() != e.ell {
        return Err(Error::DimensionMismatch { expected: e.ell, got: a.len() });
    }
    if e.degree == 0 {
        return Ok(None);
    }
    let mut out = KoszulElement::zero(e.n, e.ell, e.degree - 1);
    for (idx, f) in &e.comps {
        for (pos, j) in idx.iter().enumerate() {
            let beta: Vec<usize> = idx.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, x)| *x).collect();
            let s = if pos % 2 == 0 { 1 } else { -1 };
            out.add_comp(beta, a[*j].mul(f).scale(&CRat::int(s)));
        }
    }
    Ok(Some(out))
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyReport {
    pub elements: usize,
    /// (s∘d + d∘s)(e) = h·e held exactly for every element.
    pub holds: bool,
    /// Number of elements for which s∘d − d∘s = h also held.
    pub minus_form_holds: usize,
    /// Nonzero coefficients left in the worst residual.
    pub max_residual_terms: usize,
}

/// Checks h = Σ a_j P_j, then the homotopy identity exactly on each test
/// element.
pub fn koszul_homotopy_check(polys: &[MultiPoly], a: &[MultiPoly], h: &MultiPoly, elements: &[KoszulElement]) -> Result<HomotopyReport> {
    if a.len() != polys.len() {
        return Err(Error::DimensionMismatch { expected: polys.len(), got: a.len() });
    }
    let n = polys.iter().chain(a).map(|p| p.n).chain([h.n]).max().unwrap_or(1);
    let combo = polys.iter().zip(a).fold(MultiPoly::zero(n), |acc, (p, q)| acc.add(&p.mul(q)));
    if combo.widen(n) != h.widen(n) {
        return Err(Error::CoefficientMismatch);
    }
    let mut rep = HomotopyReport { elements: elements.len(), holds: true, minus_form_holds: 0, max_residual_terms: 0 };
    for e in elements {
        let sd = if e.degree < e.ell {
            koszul_homotopy(&koszul_d(e, polys)?, a)?.expect("degree ≥ 1")
        } else {
            KoszulElement::zero(e.n, e.ell, e.degree)
        };
        let ds = match koszul_homotopy(e, a)? {
            Some(x) => koszul_d(&x, polys)?,
            None => KoszulElement::zero(e.n, e.ell, e.degree),
        };
        let he = e.mul_poly(h);
        let plus = sd.add(&ds)?.add(&he.neg())?;
        let minus = sd.add(&ds.neg())?.add(&he.neg())?;
        let terms: usize = plus.comps.values().map(|p| p.terms.len()).sum();
        rep.max_residual_terms = rep.max_residual_terms.max(terms);
        rep.holds &= plus.is_zero();
        if minus.is_zero() {
            rep.minus_form_holds += 1;
        }
    }
    Ok(rep)
}

/// Exponent vectors in n variables of total degree ≤ m.
pub fn monomials_upto(n: usize, m: i64) -> Vec<Vec<u32>> {
    if m < 0 {
        return vec![];
    }
    fn rec(n: usize, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=m {
            cur.push(k);
            rec(n, m - k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(n, m as u32, &mut vec![], &mut out);
    out
}

fn subsets(ell: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, ell: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..ell {
            cur.push(i);
            rec(i + 1, ell, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, ell, k, &mut vec![], &mut out);
    out
}

/// Incrementally built echelon basis of a subspace of CRat^m.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<CRat>)>,
}

impl Echelon {
    fn reduce(&self, v: &[CRat]) -> Vec<CRat> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x = &*x - &(&c * y);
                    }
                }
            }
        }
        v
    }

    /// Adds v to the span; returns false when it was already inside.
    fn insert(&mut self, v: &[CRat]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        let r: Vec<CRat> = r.iter().map(|x| x * &inv).collect();
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = &*x - &(&c * y);
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    fn contains(&self, v: &[CRat]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Null space of the linear map given by its columns (each of length m).
fn nullspace(cols: &[Vec<CRat>], m: usize) -> Vec<Vec<CRat>> {
    let k = cols.len();
    // Row-reduce the m × k matrix.
    let mut a: Vec<Vec<CRat>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].inv().expect("nonzero pivot");
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let c = a[i][col].clone();
                let pr = a[row].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x = &*x - &(&c * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![CRat::zero(); k];
            v[fc] = CRat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[r][fc];
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub cap: usize,
    /// Consistent with vanishing Koszul cohomology at position ℓ − 1 in
    /// every filtration degree up to the cap. Never a proof of regularity.
    pub consistent: bool,
    pub failed_degree: Option<usize>,
    /// (degree, kernel dimension, dimension of the kernel part outside the
    /// image).
    pub per_degree: Vec<(usize, usize, usize)>,
}

/// Bounded-degree check that ker d_{ℓ−1} = im d_{ℓ−2} on 𝔕 ⊗ ∧Λ, graded by
/// deg(f ⊗ e_I) = deg f + Σ_{i∉I} deg P_i (filtered for inhomogeneous P).
pub fn regular_sequence_check_bounded(polys: &[MultiPoly], cap: usize) -> Result<RegularityReport> {
    let ell = polys.len();
    if ell == 0 {
        return Err(Error::Invalid("empty sequence".into()));
    }
    let n = polys.iter().map(|p| p.n).max().unwrap();
    if ell > n {
        return Err(Error::Invalid(format!("ℓ = {ell} exceeds the number of variables {n}")));
    }
    let polys: Vec<MultiPoly> = polys.iter().map(|p| p.widen(n)).collect();
    let degs: Vec<i64> = polys.iter().map(|p| p.degree().max(0)).collect();
    let total: i64 = degs.iter().sum();
    if (cap as i64) < total {
        return Err(Error::CapTooSmall { cap, needed: total as usize });
    }
    let outside = |idx: &[usize]| -> i64 { (0..ell).filter(|i| !idx.contains(i)).map(|i| degs[i]).sum() };
    // Basis of V^k_{≤D}: (I, monomial) with deg ≤ D − Σ_{i∉I} deg P_i.
    let basis = |k: usize, d: i64| -> Vec<(Vec<usize>, Vec<u32>)> {
        subsets(ell, k)
            .into_iter()
            .flat_map(|i| {
                let m = d - outside(&i);
                monomials_upto(n, m).into_iter().map(move |e| (i.clone(), e))
            })
            .collect()
    };
    let top = ell - 1;
    let target = basis(top, cap as i64);
    let pos: HashMap<(Vec<usize>, Vec<u32>), usize> = target.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let coords = |e: &KoszulElement| -> Vec<CRat> {
        let mut v = vec![CRat::zero(); target.len()];
        for (i, p) in &e.comps {
            for (m, c) in &p.terms {
                v[pos[&(i.clone(), m.clone())]] = c.clone();
            }
        }
        v
    };
    let mut image = Echelon::default();
    if top > 0 {
        for (i, m) in basis(top - 1, cap as i64) {
            let e = KoszulElement::basis(ell, &i, MultiPoly::monomial(m, CRat::one()))?;
            image.insert(&coords(&koszul_d(&e, &polys)?));
        }
    }
    let mut rep = RegularityReport { cap, consistent: true, failed_degree: None, per_degree: vec![] };
    for d in 0..=cap {
        let src = basis(top, d as i64);
        let next = basis(top + 1, d as i64);
        let npos: HashMap<(Vec<usize>, Vec<u32>), usize> = next.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let cols: Vec<Vec<CRat>> = src
            .iter()
            .map(|(i, m)| {
                let e = KoszulElement::basis(ell, i, MultiPoly::monomial(m.clone(), CRat::one())).expect("valid index");
                let de = koszul_d(&e, &polys).expect("degree below ℓ");
                let mut v = vec![CRat::zero(); next.len()];
                for (j, p) in &de.comps {
                    for (mm, c) in &p.terms {
                        v[npos[&(j.clone(), mm.clone())]] = c.clone();
                    }
                }
                v
            })
            .collect();
        let kernel = nullspace(&cols, next.len());
        let mut missing = 0;
        for kv in &kernel {
            let mut v = vec![CRat::zero(); target.len()];
            for (c, b) in kv.iter().zip(&src) {
                v[pos[b]] = c.clone();
            }
            if !image.contains(&v) {
                missing += 1;
            }
        }
        rep.per_degree.push((d, kernel.len(), missing));
        if missing > 0 && rep.consistent {
            rep.consistent = false;
            rep.failed_degree = Some(d);
        }
    }
    Ok(rep)
}
