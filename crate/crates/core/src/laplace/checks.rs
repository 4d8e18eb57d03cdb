use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{forward_with, ForwardOptions, TransformResult};
use crate::error::{Error, Result};
use crate::geometry::ExtReal;
use crate::hyperfun::Hyperfunction;

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeReport {
    /// max |∂𝓛(u)/∂ζ_k − 𝓛(−x_k u)| / max(1, |𝓛(−x_k u)|).
    pub d_zeta: f64,
    /// max |ζ_k 𝓛(u) − 𝓛(∂u/∂x_k)| / max(1, |𝓛(∂u/∂x_k)|).
    pub multiply: f64,
    pub samples: usize,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Checks ∂/∂ζ_k 𝓛(u) = 𝓛(−x_k u) (left side by a five-point difference)
/// and ζ_k 𝓛(u) = 𝓛(∂u/∂x_k) at the given points.
pub fn derivative_rules_check(u: &Hyperfunction, k: usize, zetas: &[Vec<C64>], opts: &ForwardOptions) -> Result<DerivativeReport> {
    if k >= u.dim {
        return Err(Error::DimensionMismatch { expected: u.dim, got: k + 1 });
    }
    let xu = u.mul_coord(k, C64::new(-1.0, 0.0));
    let du = u.derivative(k)?;
    let mut rep = DerivativeReport { d_zeta: 0.0, multiply: 0.0, samples: zetas.len() };
    for z in zetas {
        let l = |dz: f64| -> Result<C64> {
            let mut w = z.clone();
            w[k] += dz;
            Ok(forward_with(u, &w, opts)?.value)
        };
        let h = 1e-3 * z[k].norm().max(1.0);
        let fd = (l(-2.0 * h)? - l(-h)? * 8.0 + l(h)? * 8.0 - l(2.0 * h)?) / (12.0 * h);
        rep.d_zeta = rep.d_zeta.max(rel(fd, forward_with(&xu, z, opts)?.value));
        let lhs = z[k] * l(0.0)?;
        rep.multiply = rep.multiply.max(rel(lhs, forward_with(&du, z, opts)?.value));
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthRayReport {
    pub zeta0: Vec<[f64; 2]>,
    /// (t, in region, e^{t h_K(ζ₀) − εt}|𝓛(u)(tζ₀)|).
    pub samples: Vec<(f64, bool, f64)>,
    pub c_est: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub eps: f64,
    pub rays: Vec<GrowthRayReport>,
    pub passed: bool,
}

/// Along each ray tζ₀, checks e^{t h_K(ζ₀)}|𝓛(u)(tζ₀)| ≤ C e^{εt}: C is
/// estimated from the first half of the in-region samples and the second
/// half must stay below it. Samples where the transform integral does not
/// converge are flagged out of region.
pub fn growth_certificate(t: &TransformResult, rays: &[Vec<C64>], ts: &[f64], eps: f64) -> Result<GrowthReport> {
    let mut out = vec![];
    for z0 in rays {
        let hk = match t.h_k(z0) {
            ExtReal::Finite(h) => h,
            _ => return Err(Error::OutOfRegion(format!("ray {z0:?} is not in HPC of the support"))),
        };
        let mut samples = vec![];
        for &s in ts {
            let zeta: Vec<C64> = z0.iter().map(|z| z * s).collect();
            match t.eval(&zeta) {
                Ok(v) => samples.push((s, true, (s * hk - eps * s).exp() * v.norm())),
                Err(Error::OutOfRegion(_)) => samples.push((s, false, f64::NAN)),
                Err(e) => return Err(e),
            }
        }
        let inside: Vec<f64> = samples.iter().filter(|x| x.1).map(|x| x.2).collect();
        let half = inside.len() / 2;
        let c_est = inside[..half.max(1).min(inside.len())].iter().cloned().fold(0.0, f64::max);
        let passed = inside.len() >= 2 && inside[half..].iter().all(|v| *v <= c_est * (1.0 + 1e-9) + 1e-300);
        out.push(GrowthRayReport { zeta0: z0.iter().map(|z| [z.re, z.im]).collect(), samples, c_est, passed });
    }
    let passed = out.iter().all(|r| r.passed);
    Ok(GrowthReport { eps, rays: out, passed })
}
