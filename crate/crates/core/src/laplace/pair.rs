use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hyperfun::CechDolbeaultPair;
use crate::quadrature::{iterated, QuadratureResult, Range, Tol};

/// 𝓛 of a cutoff pair: 2i ∫∫ e^{−zζ} F ∂χ/∂z̄ dx dy over the shell where
/// ∂χ/∂z̄ is nonzero.
pub fn forward_pair(p: &CechDolbeaultPair, zeta: C64, tol: Tol) -> Result<QuadratureResult> {
    let c = p.cutoff;
    let (lo, hi) = c.core;
    let h = p.source.growth_type();
    let g = |z: C64| (-z * zeta).exp() * p.cech(z) * c.dbar_chi(z) * C64::new(0.0, 2.0);
    let margin = 0.05;
    let per = tol.scaled(0.25);
    let mut acc = QuadratureResult::zero();
    let radial = Range::finite(c.r0, c.r1);
    if lo.is_finite() {
        let polar = |th: f64, r: f64| g(C64::new(lo, 0.0) + C64::from_polar(r, th)) * r;
        acc = acc.combine(iterated(&polar, Range::finite(PI / 2.0, 1.5 * PI), &|_| radial, per)?);
    }
    if hi.is_finite() {
        let polar = |th: f64, r: f64| g(C64::new(hi, 0.0) + C64::from_polar(r, th)) * r;
        acc = acc.combine(iterated(&polar, Range::finite(-PI / 2.0, PI / 2.0), &|_| radial, per)?);
    }
    if lo < hi {
        for sgn in [1.0, -1.0] {
            let band = if sgn > 0.0 { Range::finite(c.r0, c.r1) } else { Range::finite(-c.r1, -c.r0) };
            let (outer, x_of): (Range, Box<dyn Fn(f64) -> f64>) = if lo.is_finite() && hi.is_finite() {
                (Range::finite(lo, hi), Box::new(|x| x))
            } else if lo.is_finite() {
                let s = zeta.re - h;
                if s <= margin {
                    return Err(Error::OutOfRegion(format!("strip damping {s:.3e} at ζ = {zeta}")));
                }
                (Range::tail(lo, s), Box::new(|x| x))
            } else if hi.is_finite() {
                let s = -zeta.re - h;
                if s <= margin {
                    return Err(Error::OutOfRegion(format!("strip damping {s:.3e} at ζ = {zeta}")));
                }
                (Range::tail(0.0, s), Box::new(move |t| hi - t))
            } else {
                return Err(Error::OutOfRegion("cutoff core is the whole line".into()));
            };
            let strip = |t: f64, y: f64| g(C64::new(x_of(t), y));
            acc = acc.combine(iterated(&strip, outer, &|_| band, per)?);
        }
    }
    Ok(acc)
}
