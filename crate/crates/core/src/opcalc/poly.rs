use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use super::rat::CRat;
use crate::error::{Error, Result};

/// Sparse polynomial in n variables with exact complex rational
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, CRat>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: CRat) -> Self {
        let mut p = MultiPoly::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        MultiPoly::constant(n, CRat::one())
    }

    /// The variable with index k (0-based).
    pub fn var(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MultiPoly::monomial(e, CRat::one())
    }

    pub fn monomial(exps: Vec<u32>, c: CRat) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Univariate polynomial from coefficients c₀, c₁, ….
    pub fn from_coeffs(coeffs: &[CRat]) -> Self {
        let mut p = MultiPoly::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: CRat) {
        debug_assert_eq!(exps.len(), self.n);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&exps) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exps, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum::<u32>() as i64).max().unwrap_or(-1)
    }

    pub fn coeff(&self, exps: &[u32]) -> CRat {
        self.terms.get(exps).cloned().unwrap_or_else(CRat::zero)
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&CRat::int(-1))
    }

    pub fn scale(&self, c: &CRat) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let n = self.n.max(o.n);
        let mut p = MultiPoly::zero(n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = (0..n)
                    .map(|k| e1.get(k).copied().unwrap_or(0) + e2.get(k).copied().unwrap_or(0))
                    .collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// The same polynomial viewed in n ≥ self.n variables.
    pub fn widen(&self, n: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(n.max(self.n));
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.resize(p.n, 0);
            p.add_term(e, c.clone());
        }
        p
    }

    /// Homogeneous part of total degree d.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                p.add_term(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    /// ∂/∂ζ_k.
    pub fn diff(&self, k: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut f = e.clone();
                f[k] -= 1;
                p.add_term(f, c * &CRat::int(e[k] as i64));
            }
        }
        p
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(z).fold(c.to_c64(), |acc, (k, w)| acc * w.powu(*k)))
            .sum()
    }

    /// Sum of |coefficients|, the scale used for relative thresholds.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).sum()
    }

    /// Coefficients c₀..c_d of a univariate polynomial.
    pub fn coeffs_1d(&self) -> Result<Vec<CRat>> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.n });
        }
        let d = self.degree().max(0) as usize;
        Ok((0..=d).map(|k| self.coeff(&[k as u32])).collect())
    }

    /// Roots of a univariate polynomial as eigenvalues of its companion
    /// matrix.
    pub fn roots_1d(&self) -> Result<Vec<C64>> {
        let c: Vec<C64> = self.coeffs_1d()?.iter().map(|c| c.to_c64()).collect();
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let d = c.len() - 1;
        if d == 0 {
            return Ok(vec![]);
        }
        let lead = c[d];
        let m = DMatrix::<C64>::from_fn(d, d, |i, j| {
            if i == 0 {
                -c[d - 1 - j] / lead
            } else if i == j + 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let schur = m.schur();
        let (_, t) = schur.unpack();
        let mut roots: Vec<C64> = (0..d).map(|k| t[(k, k)]).collect();
        // One Newton step per root against the original coefficients.
        for r in roots.iter_mut() {
            let (mut p, mut dp) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for k in (0..=d).rev() {
                dp = dp * *r + p;
                p = p * *r + c[k];
            }
            if dp.norm() > 0.0 {
                *r -= p / dp;
            }
        }
        Ok(roots)
    }

    /// Parses `text` in variables `<prefix>1 … <prefix>n` (or a bare
    /// `<prefix>` for the first variable), with `+ - * / ^`, parentheses,
    /// decimal literals and `i`. Division is by constants only.
    pub fn parse(text: &str, prefix: &str, n: Option<usize>) -> Result<MultiPoly> {
        let toks = lex(text, prefix)?;
        let nv = toks
            .iter()
            .filter_map(|(t, _)| match t {
                Tok::Var(k) => Some(*k + 1),
                _ => None,
            })
            .max()
            .unwrap_or(1);
        let n = match n {
            Some(n) if n < nv => return Err(Error::DimensionMismatch { expected: n, got: nv }),
            Some(n) => n,
            None => nv,
        };
        let mut p = PolyParser { toks, pos: 0, n };
        let out = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(Error::Syntax { pos: p.toks[p.pos].1, msg: "unexpected trailing input".into() });
        }
        Ok(out)
    }

    /// Text form in variables `<prefix>k`, parseable by [`MultiPoly::parse`].
    pub fn to_string_with(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(j, k)| if *k == 1 { format!("{prefix}{}", j + 1) } else { format!("{prefix}{}^{k}", j + 1) })
                .collect();
            let cs = c.to_string();
            let s = match (mono.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => mono.join("*"),
                (false, false) => format!("{cs}*{}", mono.join("*")),
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("zeta"))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    I,
    Op(char),
}

fn lex(src: &str, prefix: &str) -> Result<Vec<(Tok, usize)>> {
    let cs: Vec<char> = src.chars().collect();
    let mut out = vec![];
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            if i + 1 < cs.len() && (cs[i] == 'e' || cs[i] == 'E') && (cs[i + 1].is_ascii_digit() || cs[i + 1] == '-') {
                i += 2;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((Tok::Num(cs[start..i].iter().collect()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            let word: String = cs[start..i].iter().collect();
            if word == "i" {
                out.push((Tok::I, start));
            } else if let Some(rest) = word.strip_prefix(prefix) {
                let k = if rest.is_empty() {
                    1
                } else {
                    rest.parse::<usize>().map_err(|_| Error::UnknownIdentifier(word.clone()))?
                };
                if k == 0 {
                    return Err(Error::UnknownIdentifier(word));
                }
                out.push((Tok::Var(k - 1), start));
            } else {
                return Err(Error::UnknownIdentifier(word));
            }
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct PolyParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
}

impl PolyParser {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(usize::MAX)
    }

    fn sum(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                self.product()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek_op() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some('/') => {
                    let at = self.here();
                    self.pos += 1;
                    let d = self.power()?;
                    if d.degree() != 0 {
                        return Err(Error::Syntax { pos: at, msg: "division by a non-constant".into() });
                    }
                    acc = acc.scale(&d.coeff(&vec![0; self.n]).inv()?);
                }
                // Implicit product such as `2D1` or `D1 D2`.
                None if self.pos < self.toks.len() => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            let at = self.here();
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some((Tok::Num(s), _)) => {
                    let e: u32 = s.parse().map_err(|_| Error::Syntax { pos: at, msg: "exponent must be a natural number".into() })?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Syntax { pos: at, msg: "exponent must be a natural number".into() }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let at = self.here();
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some((Tok::Num(s), _)) => Ok(MultiPoly::constant(self.n, CRat::parse_decimal(&s)?)),
            Some((Tok::I, _)) => Ok(MultiPoly::constant(self.n, CRat::i())),
            Some((Tok::Var(k), _)) => Ok(MultiPoly::var(self.n, k)),
            Some((Tok::Op('('), _)) => {
                let e = self.sum()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(e)
            }
            Some((Tok::Op('-'), _)) => Ok(self.power()?.neg()),
            _ => Err(Error::Syntax { pos: at, msg: "expected a term".into() }),
        }
    }
}

/// Constant-coefficient differential operator P(∂), stored as the
/// polynomial P(ζ) with ζ_k standing for ∂/∂x_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp(pub MultiPoly);

impl DiffOp {
    /// Parses operators written in `D1 … Dn` (or `D` when n = 1).
    pub fn parse(text: &str, n: Option<usize>) -> Result<DiffOp> {
        Ok(DiffOp(MultiPoly::parse(text, "D", n)?))
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn order(&self) -> i64 {
        self.0.degree()
    }

    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        DiffOp(self.0.mul(&o.0))
    }

    /// P(ζ), the polynomial obtained by replacing ∂ with ζ.
    pub fn symbol(&self) -> &MultiPoly {
        &self.0
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_with("D"))
    }
}

/// σ(P)(ζ) = Σ_{|α| = ord P} c_α ζ^α.
pub fn principal_symbol(p: &DiffOp) -> Result<MultiPoly> {
    if p.0.is_zero() {
        return Err(Error::ZeroOperator);
    }
    Ok(p.0.homogeneous_part(p.0.degree() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = MultiPoly::parse("(zeta1 + 2*zeta2)^2 - i/2", "zeta", None).unwrap();
        assert_eq!(p.n, 2);
        assert_eq!(p.coeff(&[1, 1]), CRat::int(4));
        assert_eq!(p.coeff(&[0, 0]), -&CRat::new(CRat::zero().re, CRat::frac(1, 2).re));
        let q = MultiPoly::parse(&p.to_string(), "zeta", Some(2)).unwrap();
        assert_eq!(p, q);
        assert!(MultiPoly::parse("zeta1/zeta2", "zeta", None).is_err());
        assert!(MultiPoly::parse("x + 1", "zeta", None).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = MultiPoly::parse("zeta1 - zeta1", "zeta", None).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), -1);
    }

    #[test]
    fn companion_roots() {
        let p = MultiPoly::parse("zeta^2 - 1", "zeta", None).unwrap();
        let mut r: Vec<f64> = p.roots_1d().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] + 1.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
        let p = MultiPoly::parse("zeta^2 + 1", "zeta", None).unwrap();
        for z in p.roots_1d().unwrap() {
            assert!((z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12);
        }
        assert!(MultiPoly::parse("3", "zeta", None).unwrap().roots_1d().unwrap().is_empty());
    }

    #[test]
    fn symbol_examples() {
        let s = principal_symbol(&DiffOp::parse("D^2 - D + 1", None).unwrap()).unwrap();
        assert_eq!(s, MultiPoly::parse("zeta^2", "zeta", None).unwrap());
        let s = principal_symbol(&DiffOp::parse("D1 D2 - 3 D1", None).unwrap()).unwrap();
        assert_eq!(s, MultiPoly::parse("zeta1*zeta2", "zeta", None).unwrap());
        assert_eq!(principal_symbol(&DiffOp::parse("0", None).unwrap()), Err(Error::ZeroOperator));
    }
}
