//! Forward Laplace transform over ray-loop and product chains, its
//! cutoff-pair form, the inverse over infra-linear chains, and the Cauchy
//! kernel reconstruction.

mod checks;
mod inverse;
mod pair;
mod reconstruct;

pub use checks::{derivative_rules_check, growth_certificate, DerivativeReport, GrowthRayReport, GrowthReport};
pub use inverse::{
    check_inverse_growth, inverse, inverse_kernel, inverse_with, orthant_extension_check, support_estimate,
    tilt_type, BromwichArm, BromwichSector, ExtensionReport, InverseOptions, KernelOmega, SectorChain,
};
pub use pair::forward_pair;
pub use reconstruct::{reconstruct, Reconstruction};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::json;
use std::any::Any;
use std::sync::Arc;

use crate::chains::{integrate_path, integrate_product, Path1D, RayLoop};
use crate::error::{Error, Result};
use crate::expr::{AnalyticFunction, Body, Expr, GrowthCertificate, NumericFn, Sign, WedgeDescriptor};
use crate::geometry::{in_hpc, support_complex, ClosedConicSet, ExtReal};
use crate::hyperfun::{Hyperfunction, Route, WedgeBV};
use crate::quadrature::{QuadratureResult, Tol};

/// ln of the integrand size below which it is taken as zero.
const UNDERFLOW_LOG: f64 = -700.0;

#[derive(Debug, Clone, Copy)]
pub struct ForwardOptions {
    /// Largest standoff of the ray loops from the support.
    pub eps: f64,
    pub tol: Tol,
    /// Required excess of the tail damping rate over zero.
    pub margin: f64,
    pub route: Route,
    /// Tail tilt used for quadrature-backed defining functions.
    pub kappa_numeric: f64,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        ForwardOptions { eps: 0.3, tol: Tol::new(1e-13, 1e-11), margin: 0.05, route: Route::Auto, kappa_numeric: 0.25 }
    }
}

/// Per axis, the vertex a_k and the direction (+1, −1 or 0 for bounded) of
/// a product of half-lines containing the support claim.
pub fn axis_supports(k: &ClosedConicSet) -> Result<Vec<(f64, f64)>> {
    let n = k.dim();
    (0..n)
        .map(|j| {
            let pos = k.cone.generators.iter().any(|g| g[j] > 1e-14);
            let neg = k.cone.generators.iter().any(|g| g[j] < -1e-14);
            match (pos, neg) {
                (true, true) => Err(Error::OutOfRegion(format!("support is unbounded in both directions along axis {}", j + 1))),
                (true, false) => Ok((k.vertex[j], 1.0)),
                (false, true) => Ok((k.vertex[j], -1.0)),
                (false, false) => Ok((k.vertex[j], 0.0)),
            }
        })
        .collect()
}

fn side_of(s: Sign) -> f64 {
    if s == Sign::Minus {
        -1.0
    } else {
        1.0
    }
}

fn term_sides(t: &WedgeBV) -> Result<Vec<f64>> {
    t.wedge
        .signs()
        .map(|s| s.iter().map(|x| side_of(*x)).collect())
        .ok_or_else(|| Error::Unsupported("forward transform of cone-wedge terms".into()))
}

fn norm_c(z: &[C64]) -> f64 {
    z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt()
}

/// 𝓛(u)(ζ).
pub fn forward(u: &Hyperfunction, zeta: &[C64]) -> Result<C64> {
    Ok(forward_with(u, zeta, &ForwardOptions::default())?.value)
}

pub fn forward_with(u: &Hyperfunction, zeta: &[C64], opts: &ForwardOptions) -> Result<QuadratureResult> {
    if zeta.len() != u.dim {
        return Err(Error::DimensionMismatch { expected: u.dim, got: zeta.len() });
    }
    if u.terms.is_empty() {
        return Ok(QuadratureResult::zero());
    }
    let axes = axis_supports(&u.support)?;
    let s = opts.eps.min(1.0 / (1.0 + norm_c(zeta)));
    let per = opts.tol.scaled(1.0 / u.terms.len() as f64);
    let mut acc = QuadratureResult::zero();
    for t in &u.terms {
        let sides = term_sides(t)?;
        let r = match u.dim {
            1 => forward_term_1d(t, axes[0], sides[0], zeta[0], s, opts, per)?,
            2 => forward_term_2d(t, &axes, &sides, zeta, s, opts, per)?,
            n => return Err(Error::Unsupported(format!("forward transform in dimension {n}"))),
        };
        acc = acc.combine(r.scale(t.coeff));
    }
    Ok(acc)
}

/// Tail damping rate along a ray of direction d tilted by κ, for an
/// integrand e^{−zζ}F(z) with |F| ≤ C e^{H|z|}.
fn ray_damping(d: f64, kappa: f64, zeta: C64, h: f64) -> f64 {
    (d * zeta.re - kappa * zeta.im.abs()) / (1.0 + kappa * kappa).sqrt() - h
}

fn forward_term_1d(
    t: &WedgeBV,
    (a, d): (f64, f64),
    side: f64,
    zeta: C64,
    s: f64,
    opts: &ForwardOptions,
    tol: Tol,
) -> Result<QuadratureResult> {
    let numeric = match &t.func.body {
        Body::Numeric(nf) => Some(nf.clone()),
        Body::Expr { .. } => None,
    };
    if let (Some(nf), true) = (&numeric, opts.route != Route::Contour) {
        let dd = if d == 0.0 { 1.0 } else { d };
        if let Some(r) = nf.forward_arm(C64::new(a - dd, 0.0), dd, zeta) {
            return Ok(QuadratureResult { value: r?, error_estimate: 0.0, evaluations: 0 });
        }
    }
    if opts.route == Route::Spectral {
        return Err(Error::Unsupported("no closed-form arm integral for this defining function".into()));
    }
    let kappa = if numeric.is_some() { opts.kappa_numeric } else { 0.0 };
    let lp = RayLoop { a, direction: d, eps: s, kappa };
    let mut path = lp.arm(s, side);
    if d != 0.0 {
        let sigma = ray_damping(d, kappa, zeta, t.func.growth.h_type);
        if sigma <= opts.margin {
            return Err(Error::OutOfRegion(format!(
                "tail damping {sigma:.3e} at ζ = {zeta} does not exceed the margin {}",
                opts.margin
            )));
        }
        path = path.with_damping(sigma);
    }
    let f = &t.func;
    let (h, lc) = (f.growth.h_type, f.growth.c.max(f64::MIN_POSITIVE).ln());
    // exp(g)·rest is integrated as exp(g − zζ)·rest so that long tails do
    // not overflow e^{g} against an underflowing e^{−zζ}.
    let split = match f.expr().and_then(split_exp) {
        Some((g, rest)) => Some((
            AnalyticFunction::in_z(g, f.domain.clone(), f.growth.clone())?,
            AnalyticFunction::in_z(rest, f.domain.clone(), f.growth.clone())?,
        )),
        None => None,
    };
    integrate_path(
        &|z: C64| {
            if h * z.norm() - (z * zeta).re + lc < UNDERFLOW_LOG {
                C64::new(0.0, 0.0)
            } else if let Some((g, rest)) = &split {
                (g.eval1(z) - z * zeta).exp() * rest.eval1(z)
            } else {
                (-z * zeta).exp() * f.eval1(z)
            }
        },
        &path,
        tol,
    )
}

fn split_exp(e: &Expr) -> Option<(Expr, Expr)> {
    match e {
        Expr::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Exp(g), rest) | (rest, Expr::Exp(g)) => Some((g.as_ref().clone(), rest.clone())),
            _ => None,
        },
        _ => None,
    }
}

fn forward_term_2d(
    t: &WedgeBV,
    axes: &[(f64, f64)],
    sides: &[f64],
    zeta: &[C64],
    s: f64,
    opts: &ForwardOptions,
    tol: Tol,
) -> Result<QuadratureResult> {
    if opts.route == Route::Spectral {
        return Err(Error::Unsupported("spectral route for two-variable transforms".into()));
    }
    let mut paths: Vec<Path1D> = vec![];
    for k in 0..2 {
        let (a, d) = axes[k];
        let lp = RayLoop::new(a, d, s);
        let mut p = lp.arm(s, sides[k]);
        if d != 0.0 {
            let sigma = ray_damping(d, 0.0, zeta[k], t.func.growth.h_type);
            if sigma <= opts.margin {
                return Err(Error::OutOfRegion(format!("tail damping {sigma:.3e} along axis {} at ζ", k + 1)));
            }
            p = p.with_damping(sigma);
        }
        paths.push(p);
    }
    let f = &t.func;
    let (h, lc) = (f.growth.h_type, f.growth.c.max(f64::MIN_POSITIVE).ln());
    let g = |z1: C64, z2: C64| {
        let w = z1 * zeta[0] + z2 * zeta[1];
        if h * (z1.norm_sqr() + z2.norm_sqr()).sqrt() - w.re + lc < UNDERFLOW_LOG {
            C64::new(0.0, 0.0)
        } else {
            (-w).exp() * f.eval(&[z1, z2])
        }
    };
    integrate_product(&g, &paths[0], &paths[1], tol)
}

/// Forward transform at many points; results keep the input order.
pub fn forward_batch(u: &Hyperfunction, zetas: &[Vec<C64>], opts: &ForwardOptions) -> Vec<Result<C64>> {
    zetas.par_iter().map(|z| forward_with(u, z, opts).map(|r| r.value)).collect()
}

/// 𝓛(u) as an evaluator together with its growth data.
#[derive(Debug, Clone)]
pub struct TransformResult {
    pub source: Hyperfunction,
    pub opts: ForwardOptions,
}

impl TransformResult {
    pub fn new(u: &Hyperfunction) -> Self {
        TransformResult { source: u.clone(), opts: ForwardOptions::default() }
    }

    pub fn with_options(mut self, opts: ForwardOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn eval(&self, zeta: &[C64]) -> Result<C64> {
        Ok(forward_with(&self.source, zeta, &self.opts)?.value)
    }

    /// h_K(ζ) = inf over K of Re⟨x, ζ⟩.
    pub fn h_k(&self, zeta: &[C64]) -> ExtReal {
        support_complex(&self.source.support, zeta)
    }

    /// Whether ζ is a direction of HPC{K}.
    pub fn in_hpc(&self, zeta: &[C64]) -> bool {
        in_hpc(&self.source.support, zeta)
    }

    /// The transform as an analytic function of ζ (evaluation failures
    /// become NaN).
    pub fn as_function(&self) -> AnalyticFunction {
        let n = self.source.dim;
        AnalyticFunction::numeric(
            Arc::new(Transformed { t: self.clone() }),
            WedgeDescriptor::full(n),
            GrowthCertificate::bounded(),
        )
    }
}

#[derive(Debug)]
struct Transformed {
    t: TransformResult,
}

impl NumericFn for Transformed {
    fn dim(&self) -> usize {
        self.t.source.dim
    }

    fn eval(&self, z: &[C64]) -> C64 {
        self.t.eval(z).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn derivative(&self, k: usize) -> Option<Arc<dyn NumericFn>> {
        let src = self.t.source.mul_coord(k, C64::new(-1.0, 0.0));
        Some(Arc::new(Transformed { t: TransformResult { source: src, opts: self.t.opts } }))
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "transform_terms": self.t.source.terms.len() })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
