use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{Hyperfunction, TestDensity, WedgeBV};
use crate::error::{Error, Result};
use crate::expr::Body;
use crate::quadrature::{integrate, iterated, QuadratureResult, Range, Tol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Spectral when a numeric body offers it, contour otherwise.
    Auto,
    Contour,
    Spectral,
}

#[derive(Debug, Clone, Copy)]
pub struct PairingOptions {
    /// Overrides the density's own push-in distance.
    pub push_in: Option<f64>,
    pub tol: Option<Tol>,
    pub route: Route,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions { push_in: None, tol: None, route: Route::Auto }
    }
}

/// ⟨u, φ⟩ with default options.
pub fn pairing(u: &Hyperfunction, phi: &TestDensity) -> Result<C64> {
    Ok(pairing_with(u, phi, &PairingOptions::default())?.value)
}

pub fn pairing_with(u: &Hyperfunction, phi: &TestDensity, opts: &PairingOptions) -> Result<QuadratureResult> {
    if phi.dim() != u.dim {
        return Err(Error::DimensionMismatch { expected: u.dim, got: phi.dim() });
    }
    let y = opts.push_in.unwrap_or(phi.push_in);
    let tol = opts.tol.unwrap_or(if u.dim == 1 { Tol::new(1e-13, 1e-12) } else { Tol::new(1e-11, 1e-10) });
    let per = tol.scaled(1.0 / u.terms.len().max(1) as f64);
    let mut acc = QuadratureResult::zero();
    for t in &u.terms {
        let r = pair_term(t, phi, y, per, opts.route)?;
        acc = acc.combine(r.scale(t.coeff));
    }
    Ok(acc)
}

fn pair_term(t: &WedgeBV, phi: &TestDensity, y: f64, tol: Tol, route: Route) -> Result<QuadratureResult> {
    let n = phi.dim();
    let dir = t.wedge.push_direction();
    let off: Vec<f64> = dir.iter().map(|d| d * y).collect();
    if let Body::Numeric(nf) = &t.func.body {
        if route != Route::Contour {
            if let Some(r) = nf.pair_density(phi, &off) {
                return Ok(QuadratureResult { value: r?, error_estimate: 0.0, evaluations: 0 });
            }
        }
    }
    if route == Route::Spectral {
        return Err(Error::Unsupported("no spectral pairing for this defining function".into()));
    }
    let h = t.func.growth.h_type;
    let mut ranges = vec![];
    for (k, f) in phi.factors.iter().enumerate() {
        let x = f.truncation(h, off[k], 1e-15)?;
        ranges.push((f.center - x, f.center + x));
    }
    let func = &t.func;
    match n {
        1 => {
            let g = |x: f64| {
                let z = C64::new(x, off[0]);
                func.eval1(z) * phi.eval1(z)
            };
            integrate(&g, Range::finite(ranges[0].0, ranges[0].1), tol)
        }
        2 => {
            let g = |x1: f64, x2: f64| {
                let z = [C64::new(x1, off[0]), C64::new(x2, off[1])];
                func.eval(&z) * phi.eval(&z)
            };
            let (a2, b2) = ranges[1];
            iterated(&g, Range::finite(ranges[0].0, ranges[0].1), &|_| Range::finite(a2, b2), tol)
        }
        _ => Err(Error::Unsupported(format!("pairing in dimension {n}"))),
    }
}

#[derive(Debug, Clone)]
pub struct SupportReport {
    pub passed: bool,
    pub tolerance: f64,
    pub max_abs: f64,
    /// Probe centers with the pairing values found there.
    pub probes: Vec<(Vec<f64>, C64)>,
}

/// Probes `u` with narrow Gaussians centered in the box `lo ≤ x ≤ hi`;
/// passes when every pairing is below `tol` (1e-7 by default).
pub fn support_test(u: &Hyperfunction, lo: &[f64], hi: &[f64], tol: Option<f64>) -> Result<SupportReport> {
    let n = u.dim;
    if lo.len() != n || hi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lo.len() });
    }
    let tol = tol.unwrap_or(1e-7);
    let per_axis = if n == 1 { 5 } else { 3 };
    let axis_pts: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            (0..per_axis)
                .map(|j| lo[k] + (hi[k] - lo[k]) * (j as f64 + 0.5) / per_axis as f64)
                .collect()
        })
        .collect();
    let mut centers: Vec<Vec<f64>> = vec![vec![]];
    for pts in &axis_pts {
        centers = centers
            .into_iter()
            .flat_map(|c| pts.iter().map(move |p| [c.clone(), vec![*p]].concat()))
            .collect();
    }
    let probes: Vec<(Vec<f64>, C64)> = centers
        .into_par_iter()
        .map(|c| {
            let d = u.support.distance_to(&c);
            let w = (25.0 / (d * d)).clamp(4.0, 1e4);
            let phi = TestDensity::new(c.iter().map(|x| super::GaussFactor::gaussian(*x, w)).collect())
                .with_push_in((0.5f64).min(0.5 / w.sqrt()));
            pairing(u, &phi).map(|v| (c, v))
        })
        .collect::<Result<_>>()?;
    let max_abs = probes.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    Ok(SupportReport { passed: max_abs < tol, tolerance: tol, max_abs, probes })
}
