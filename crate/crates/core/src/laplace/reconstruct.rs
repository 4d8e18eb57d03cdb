use num_complex::Complex64 as C64;
use serde_json::json;
use std::any::Any;
use std::f64::consts::PI;
use std::sync::Arc;

use super::axis_supports;
use crate::chains::{integrate_path, RayLoop};
use crate::error::{Error, Result};
use crate::expr::{AnalyticFunction, GrowthCertificate, NumericFn, Sign, WedgeDescriptor};
use crate::hyperfun::{Hyperfunction, WedgeBV};
use crate::quadrature::Tol;

/// Output of the Cauchy-kernel reconstruction: one function h holomorphic
/// off the support, and the hyperfunction b₊(h) − b₋(h).
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub r: f64,
    pub h: AnalyticFunction,
    pub hyperfunction: Hyperfunction,
}

/// h(z) = (1/2πi) Σ c ∫_{arm} F(w) e^{(z−w)R} / (w − z) dw, with arms
/// closer to the support than z.
#[derive(Debug)]
struct CauchyKernelFn {
    u: Hyperfunction,
    r: f64,
    a: f64,
    d: f64,
    eps: f64,
    tol: Tol,
}

impl CauchyKernelFn {
    fn try_eval(&self, z: C64) -> Result<C64> {
        if z.im == 0.0 {
            return Err(Error::Domain("h is evaluated off the real axis only".into()));
        }
        let s = self.eps.min(z.im.abs() / 2.0);
        let lp = RayLoop::new(self.a, self.d, s);
        let mut acc = C64::new(0.0, 0.0);
        let per = self.tol.scaled(1.0 / self.u.terms.len() as f64);
        for t in &self.u.terms {
            let side = match t.wedge.signs() {
                Some([Sign::Minus]) => -1.0,
                _ => 1.0,
            };
            let path = lp.arm(s, side).with_damping(self.r - t.func.growth.h_type);
            let f = &t.func;
            let g = |w: C64| f.eval1(w) * ((z - w) * self.r).exp() / (w - z);
            acc += integrate_path(&g, &path, per)?.value * t.coeff;
        }
        Ok(acc / C64::new(0.0, 2.0 * PI))
    }
}

impl NumericFn for CauchyKernelFn {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, z: &[C64]) -> C64 {
        self.try_eval(z[0]).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "cauchy_kernel": { "R": self.r, "terms": self.u.terms.len() } })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Reconstructs a one-variable hyperfunction supported in a right
/// half-line (or a point) from the kernel e^{(z−w)R}/(w−z). `r = None`
/// doubles R from 4 until it exceeds the growth type by 1.
pub fn reconstruct(u: &Hyperfunction, r: Option<f64>, tol: Tol) -> Result<Reconstruction> {
    if u.dim != 1 {
        return Err(Error::Unsupported("reconstruction is implemented for n = 1".into()));
    }
    let h_type = u.growth_type();
    let r = match r {
        Some(r) if r > h_type => r,
        Some(r) => return Err(Error::ConvergenceFail(format!("R = {r} does not exceed the growth type {h_type}"))),
        None => {
            let mut r = 4.0;
            while r <= h_type + 1.0 {
                r *= 2.0;
                if r > 1024.0 {
                    return Err(Error::ConvergenceFail(format!("growth type {h_type} needs R above 2^10")));
                }
            }
            r
        }
    };
    if u.terms.is_empty() {
        return Ok(Reconstruction {
            r,
            h: AnalyticFunction::closure(1, "0", |_| C64::new(0.0, 0.0)),
            hyperfunction: Hyperfunction::zero(1),
        });
    }
    let (a, d) = axis_supports(&u.support)?[0];
    if d < 0.0 {
        return Err(Error::Unsupported("support must lie in a right half-line; reflect the coordinate first".into()));
    }
    let kernel = CauchyKernelFn { u: u.clone(), r, a, d, eps: 0.3, tol };
    let growth = GrowthCertificate::new(r + 0.1, 1.0);
    let h = AnalyticFunction::numeric(Arc::new(kernel), WedgeDescriptor::full(1), growth);
    let terms = vec![
        WedgeBV { wedge: WedgeDescriptor::upper(), func: h.clone().with_domain(WedgeDescriptor::upper()), coeff: C64::new(1.0, 0.0) },
        WedgeBV { wedge: WedgeDescriptor::lower(), func: h.clone().with_domain(WedgeDescriptor::lower()), coeff: C64::new(-1.0, 0.0) },
    ];
    Ok(Reconstruction { r, h, hyperfunction: Hyperfunction { dim: 1, terms, support: u.support.clone() } })
}
