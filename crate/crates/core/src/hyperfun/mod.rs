//! Hyperfunctions as finite sums of boundary values on wedges, their
//! cutoff-realized Čech–Dolbeault pairs, and pairings with test densities.
//!
//! Sign convention: a term (α, c, F) stands for c · b_α(F), and
//! ⟨b_α(F), φ⟩ = ∫_{ℝⁿ + i y α} F(z) φ(z) dz with y > 0 small. With this
//! convention delta(0) = −(1/2πi) b₊(1/z) + (1/2πi) b₋(1/z) pairs to φ(0).

mod density;
mod pair;
mod pairing;

pub use density::{GaussFactor, TestDensity};
pub use pair::{smooth_step, smooth_step_deriv, CechDolbeaultPair, Cutoff};
pub use pairing::{pairing, pairing_with, support_test, PairingOptions, Route, SupportReport};

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::{AnalyticFunction, Expr, GrowthCertificate, Sign, WedgeDescriptor};
use crate::geometry::{ClosedConicSet, PolyhedralCone};

/// Summand c · b_Ω(F).
#[derive(Debug, Clone)]
pub struct WedgeBV {
    pub wedge: WedgeDescriptor,
    pub func: AnalyticFunction,
    pub coeff: C64,
}

#[derive(Debug, Clone)]
pub struct Hyperfunction {
    pub dim: usize,
    pub terms: Vec<WedgeBV>,
    /// Claimed K with supp(u) ⊆ K.
    pub support: ClosedConicSet,
}

/// Added to |Re c| in the growth type of Y(x − a)e^{c(x − a)}.
pub const HEAVISIDE_MARGIN: f64 = 0.02;

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

impl Hyperfunction {
    pub fn zero(dim: usize) -> Self {
        Hyperfunction { dim, terms: vec![], support: ClosedConicSet::point(vec![0.0; dim]) }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dirac delta at `a` (n = 1, or a tensor product for n = 2).
    pub fn delta(a: &[f64]) -> Result<Self> {
        match a.len() {
            1 => {
                let a0 = a[0];
                let e = Expr::Div(
                    Box::new(Expr::Num(1.0)),
                    Box::new(Expr::Sub(Box::new(Expr::var("z1")), Box::new(Expr::constant(C64::new(a0, 0.0))))),
                );
                let c = -1.0 / two_pi_i();
                let growth = GrowthCertificate::new(0.0, 1.0);
                Ok(Hyperfunction {
                    dim: 1,
                    terms: vec![
                        WedgeBV {
                            wedge: WedgeDescriptor::upper(),
                            func: AnalyticFunction::in_z(e.clone(), WedgeDescriptor::upper(), growth.clone())?,
                            coeff: c,
                        },
                        WedgeBV {
                            wedge: WedgeDescriptor::lower(),
                            func: AnalyticFunction::in_z(e, WedgeDescriptor::lower(), growth)?,
                            coeff: -c,
                        },
                    ],
                    support: ClosedConicSet::point(vec![a0]),
                })
            }
            2 => Self::delta(&a[..1])?.tensor(&Self::delta(&a[1..])?),
            n => Err(Error::Unsupported(format!("delta in dimension {n}"))),
        }
    }

    /// Y(x − a) e^{c(x − a)} in one variable.
    pub fn heaviside_exp(c: C64, a: f64) -> Result<Self> {
        let za = Expr::Sub(Box::new(Expr::var("z1")), Box::new(Expr::constant(C64::new(a, 0.0))));
        let e = Expr::Mul(
            Box::new(Expr::Exp(Box::new(Expr::Mul(Box::new(Expr::constant(c)), Box::new(za.clone()))))),
            Box::new(Expr::Log(Box::new(Expr::Neg(Box::new(za))), 0.0)),
        );
        // log grows slower than any exponential; the margin absorbs it.
        let growth = GrowthCertificate::new(c.re.abs() + HEAVISIDE_MARGIN, 5.0 + a.abs());
        let k = -1.0 / two_pi_i();
        Ok(Hyperfunction {
            dim: 1,
            terms: vec![
                WedgeBV {
                    wedge: WedgeDescriptor::upper(),
                    func: AnalyticFunction::in_z(e.clone(), WedgeDescriptor::upper(), growth.clone())?,
                    coeff: k,
                },
                WedgeBV {
                    wedge: WedgeDescriptor::lower(),
                    func: AnalyticFunction::in_z(e, WedgeDescriptor::lower(), growth)?,
                    coeff: -k,
                },
            ],
            support: ClosedConicSet::new(vec![a], PolyhedralCone::new(1, vec![vec![1.0]])?)?,
        })
    }

    /// b_α(F) with coefficient 1. The support claim is the whole space unless
    /// set afterwards with [`Hyperfunction::with_support`].
    pub fn boundary_value(f: AnalyticFunction, alpha: &[Sign]) -> Result<Self> {
        let wedge = WedgeDescriptor::orthant(alpha.to_vec());
        if wedge.dim != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: wedge.dim });
        }
        if !wedge.is_subwedge_of(&f.domain) {
            return Err(Error::Domain(format!(
                "function domain {} does not contain the wedge {}",
                f.domain.label(),
                wedge.label()
            )));
        }
        let n = f.dim();
        Ok(Hyperfunction {
            dim: n,
            terms: vec![WedgeBV { wedge, func: f, coeff: C64::new(1.0, 0.0) }],
            support: ClosedConicSet::whole(n),
        })
    }

    pub fn with_support(mut self, k: ClosedConicSet) -> Self {
        self.support = k;
        self
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out
    }

    pub fn add(&self, other: &Hyperfunction) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.terms.is_empty() {
            return Ok(other.clone());
        }
        if other.terms.is_empty() {
            return Ok(self.clone());
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Hyperfunction { dim: self.dim, terms, support: self.support.hull_union(&other.support) })
    }

    pub fn sub(&self, other: &Hyperfunction) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// u ⊗ v on the product space.
    pub fn tensor(&self, other: &Hyperfunction) -> Result<Self> {
        let mut terms = vec![];
        for a in &self.terms {
            for b in &other.terms {
                let func = a.func.tensor(&b.func)?;
                let wedge = func.domain.clone();
                terms.push(WedgeBV { wedge, func, coeff: a.coeff * b.coeff });
            }
        }
        let vertex: Vec<f64> = self.support.vertex.iter().chain(&other.support.vertex).copied().collect();
        let n1 = self.dim;
        let n = n1 + other.dim;
        let mut gens = vec![];
        for g in &self.support.cone.generators {
            let mut v = g.clone();
            v.resize(n, 0.0);
            gens.push(v);
        }
        for g in &other.support.cone.generators {
            let mut v = vec![0.0; n1];
            v.extend(g);
            gens.push(v);
        }
        let support = ClosedConicSet::new(vertex, PolyhedralCone::new(n, gens)?)?;
        Ok(Hyperfunction { dim: n, terms, support })
    }

    /// ∂u/∂x_k, termwise on defining functions.
    pub fn derivative(&self, k: usize) -> Result<Self> {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.func = t.func.diff(k)?;
        }
        Ok(out)
    }

    /// c · x_k · u.
    pub fn mul_coord(&self, k: usize, c: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.func = t.func.mul_coord(k, c);
        }
        out
    }

    /// Largest exponential type among the defining functions.
    pub fn growth_type(&self) -> f64 {
        self.terms.iter().map(|t| t.func.growth.h_type).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_terms() {
        let d = Hyperfunction::delta(&[0.0]).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert!((d.terms[0].coeff - (-1.0 / two_pi_i())).norm() < 1e-16);
        assert_eq!(d.terms[0].wedge.label(), "+");
        let d2 = Hyperfunction::delta(&[1.0, 2.0]).unwrap();
        assert_eq!(d2.terms.len(), 4);
        assert_eq!(d2.support.vertex, vec![1.0, 2.0]);
        let labels: Vec<String> = d2.terms.iter().map(|t| t.wedge.label()).collect();
        assert_eq!(labels, vec!["++", "+-", "-+", "--"]);
    }

    #[test]
    fn boundary_value_domain_check() {
        let f = AnalyticFunction::in_z(crate::expr::parse("1/z").unwrap(), WedgeDescriptor::upper(), GrowthCertificate::bounded())
            .unwrap();
        assert!(Hyperfunction::boundary_value(f.clone(), &[Sign::Plus]).is_ok());
        assert!(matches!(Hyperfunction::boundary_value(f, &[Sign::Minus]), Err(Error::Domain(_))));
    }
}
