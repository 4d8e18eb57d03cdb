//! Integration cycles: ray loops around supports, infra-linear inverse
//! chains, and products of one-dimensional paths.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{self, Aug, QuadratureResult, Range, Tol};

pub type ParamMap = Arc<dyn Fn(f64) -> (C64, C64) + Send + Sync>;

/// A smooth piece of a path. Tails carry the damping rate σ of the integrand
/// they are meant for.
#[derive(Clone)]
pub enum Segment {
    Line { from: C64, to: C64 },
    Arc { center: C64, radius: f64, theta0: f64, theta1: f64 },
    Ray { from: C64, dir: C64, damping: Option<f64> },
    Curve { map: ParamMap, t0: f64, t1: f64 },
    CurveTail { map: ParamMap, t0: f64, damping: Option<f64> },
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Line { from, to } => write!(f, "Line({from} -> {to})"),
            Segment::Arc { center, radius, theta0, theta1 } => write!(f, "Arc({center}, r={radius}, {theta0}..{theta1})"),
            Segment::Ray { from, dir, damping } => write!(f, "Ray({from} + t*{dir}, σ={damping:?})"),
            Segment::Curve { t0, t1, .. } => write!(f, "Curve({t0}..{t1})"),
            Segment::CurveTail { t0, damping, .. } => write!(f, "CurveTail({t0}.., σ={damping:?})"),
        }
    }
}

impl Segment {
    /// (z(t), z'(t)) and the parameter range.
    fn param(&self) -> (ParamMap, Range) {
        match self.clone() {
            Segment::Line { from, to } => (Arc::new(move |t| (from + (to - from) * t, to - from)), Range::finite(0.0, 1.0)),
            Segment::Arc { center, radius, theta0, theta1 } => (
                Arc::new(move |t| {
                    let e = C64::from_polar(radius, t);
                    (center + e, C64::new(0.0, 1.0) * e)
                }),
                Range::finite(theta0, theta1),
            ),
            Segment::Ray { from, dir, damping } => {
                (Arc::new(move |t| (from + dir * t, dir)), Range { t0: 0.0, t1: None, damping })
            }
            Segment::Curve { map, t0, t1 } => (map, Range::finite(t0, t1)),
            Segment::CurveTail { map, t0, damping } => (map, Range { t0, t1: None, damping }),
        }
    }

    pub fn start(&self) -> C64 {
        let (m, r) = self.param();
        m(r.t0).0
    }

    /// End point, `None` for tails.
    pub fn end(&self) -> Option<C64> {
        let (m, r) = self.param();
        r.t1.map(|t| m(t).0)
    }

    pub fn with_damping(self, sigma: f64) -> Segment {
        match self {
            Segment::Ray { from, dir, .. } => Segment::Ray { from, dir, damping: Some(sigma) },
            Segment::CurveTail { map, t0, .. } => Segment::CurveTail { map, t0, damping: Some(sigma) },
            s => s,
        }
    }

    /// A few points along the segment (tails sampled on [0, 10]).
    pub fn sample_points(&self, m: usize) -> Vec<C64> {
        let (map, r) = self.param();
        let t1 = r.t1.unwrap_or(r.t0 + 10.0);
        (0..=m).map(|j| map(r.t0 + (t1 - r.t0) * j as f64 / m as f64).0).collect()
    }
}

/// A segment with an orientation sign (+1 or −1).
#[derive(Debug, Clone)]
pub struct Piece {
    pub seg: Segment,
    pub sign: f64,
}

/// Chain made of oriented smooth pieces.
#[derive(Debug, Clone, Default)]
pub struct Path1D {
    pub pieces: Vec<Piece>,
}

impl Path1D {
    pub fn new(segs: Vec<Segment>) -> Self {
        Path1D { pieces: segs.into_iter().map(|seg| Piece { seg, sign: 1.0 }).collect() }
    }

    pub fn push(&mut self, seg: Segment, sign: f64) {
        self.pieces.push(Piece { seg, sign });
    }

    pub fn reversed(&self) -> Self {
        Path1D { pieces: self.pieces.iter().rev().map(|p| Piece { seg: p.seg.clone(), sign: -p.sign }).collect() }
    }

    pub fn concat(mut self, other: Path1D) -> Self {
        self.pieces.extend(other.pieces);
        self
    }

    pub fn with_damping(&self, sigma: f64) -> Self {
        Path1D {
            pieces: self.pieces.iter().map(|p| Piece { seg: p.seg.clone().with_damping(sigma), sign: p.sign }).collect(),
        }
    }

    /// Whether consecutive finite pieces connect (in traversal order) within 1e-12.
    pub fn is_connected(&self) -> bool {
        let ends: Vec<(C64, Option<C64>)> = self
            .pieces
            .iter()
            .map(|p| {
                let (a, b) = (p.seg.start(), p.seg.end());
                if p.sign > 0.0 {
                    (a, b)
                } else {
                    (b.unwrap_or(C64::new(f64::NAN, f64::NAN)), Some(a))
                }
            })
            .collect();
        ends.windows(2).all(|w| match w[0].1 {
            Some(e) => (e - w[1].0).norm() <= 1e-12 * (1.0 + e.norm()),
            None => false,
        })
    }

    pub fn sample_points(&self, m: usize) -> Vec<C64> {
        self.pieces.iter().flat_map(|p| p.seg.sample_points(m)).collect()
    }
}

/// ∫_γ f(z) dz. The tolerance is split evenly over the pieces.
pub fn integrate_path(f: &dyn Fn(C64) -> C64, path: &Path1D, tol: Tol) -> Result<QuadratureResult> {
    let run = integrate_path_aug(&|z| Aug { v: f(z), e: 0.0 }, path, tol)?;
    Ok(QuadratureResult { value: run.0.v, error_estimate: run.1 + run.0.e, evaluations: run.2 })
}

/// Path integration of an augmented integrand; the side quantity is
/// integrated against |dz|. Returns (value, error, evaluations).
pub(crate) fn integrate_path_aug(f: &dyn Fn(C64) -> Aug, path: &Path1D, tol: Tol) -> Result<(Aug, f64, usize)> {
    let n = path.pieces.len().max(1) as f64;
    let per = Tol { abs: tol.abs / n, rel: tol.rel };
    let mut total = Aug { v: C64::new(0.0, 0.0), e: 0.0 };
    let mut err = 0.0;
    let mut evals = 0;
    for p in &path.pieces {
        let (map, range) = p.seg.param();
        let g = |t: f64| {
            let (z, dz) = map(t);
            let v = f(z);
            Aug { v: v.v * dz, e: v.e * dz.norm() }
        };
        let run = quadrature::integrate_range(&g, range, per)?;
        total = total + Aug { v: run.value.v * p.sign, e: run.value.e };
        err += run.err;
        evals += run.evals;
    }
    Ok((total, err, evals))
}

/// ∫_{γ₁×γ₂} f(z₁, z₂) dz₁ dz₂ by iterated quadrature (outer factor γ₁).
pub fn integrate_product(f: &dyn Fn(C64, C64) -> C64, g1: &Path1D, g2: &Path1D, tol: Tol) -> Result<QuadratureResult> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let evals = RefCell::new(0usize);
    let inner_tol = tol.scaled(0.25);
    let h = |z1: C64| -> Aug {
        if failure.borrow().is_some() {
            return Aug { v: C64::new(0.0, 0.0), e: 0.0 };
        }
        match integrate_path(&|z2| f(z1, z2), g2, inner_tol) {
            Ok(r) => {
                *evals.borrow_mut() += r.evaluations;
                Aug { v: r.value, e: r.error_estimate }
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                Aug { v: C64::new(0.0, 0.0), e: 0.0 }
            }
        }
    };
    let (v, err, _) = integrate_path_aug(&h, g1, tol.scaled(0.5))?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(QuadratureResult { value: v.v, error_estimate: err + v.e, evaluations: evals.into_inner() })
}

/// |∫_{γ₁} f − ∫_{γ₂} f|.
pub fn stokes_check(f: &dyn Fn(C64) -> C64, g1: &Path1D, g2: &Path1D, tol: Tol) -> Result<f64> {
    let a = integrate_path(f, g1, tol)?;
    let b = integrate_path(f, g2, tol)?;
    Ok((a.value - b.value).norm())
}

/// A loop around a 1D support set. The upper and lower arms both run left to
/// right; the clockwise loop is upper minus lower.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayLoop {
    /// Vertex of the support.
    pub a: f64,
    /// +1 for [a, ∞), −1 for (−∞, a], 0 for the point {a}.
    pub direction: f64,
    /// Standoff ε from the support.
    pub eps: f64,
    /// Opening slope of the tails.
    pub kappa: f64,
}

impl RayLoop {
    pub fn new(a: f64, direction: f64, eps: f64) -> Self {
        RayLoop { a, direction, eps, kappa: 0.0 }
    }

    /// Upper arm (inside {Im z > 0}) with standoff `s`.
    pub fn upper(&self, s: f64) -> Path1D {
        self.arm(s, 1.0)
    }

    pub fn lower(&self, s: f64) -> Path1D {
        self.arm(s, -1.0)
    }

    /// Arm on the side `side` = ±1 with standoff `s`, oriented left to right.
    pub fn arm(&self, s: f64, side: f64) -> Path1D {
        let a = self.a;
        let up = C64::new(0.0, side * s);
        let k = C64::new(1.0, side * self.kappa);
        let k = k / k.norm();
        let mut p = Path1D::default();
        if self.direction > 0.0 {
            p.push(Segment::Line { from: C64::new(a - s, 0.0), to: C64::new(a, 0.0) + up }, 1.0);
            p.push(Segment::Ray { from: C64::new(a, 0.0) + up, dir: k, damping: None }, 1.0);
        } else if self.direction < 0.0 {
            let kl = C64::new(-1.0, side * self.kappa);
            let kl = kl / kl.norm();
            p.push(Segment::Ray { from: C64::new(a, 0.0) + up, dir: kl, damping: None }, -1.0);
            p.push(Segment::Line { from: C64::new(a, 0.0) + up, to: C64::new(a + s, 0.0) }, 1.0);
        } else {
            p.push(Segment::Line { from: C64::new(a - s, 0.0), to: C64::new(a, 0.0) + up }, 1.0);
            p.push(Segment::Line { from: C64::new(a, 0.0) + up, to: C64::new(a + s, 0.0) }, 1.0);
        }
        p
    }

    /// Closed clockwise loop: upper arm followed by the reversed lower arm.
    pub fn clockwise(&self, s: f64) -> Path1D {
        self.upper(s).concat(self.lower(s).reversed())
    }

    /// Unit vector along the tails (asymptotic direction of the upper arm).
    pub fn tail_direction(&self, side: f64) -> C64 {
        let k = C64::new(self.direction.signum(), side * self.kappa);
        k / k.norm()
    }
}

/// Infra-linear profile ψ(t) = c₀ + c₁(1 + t)^p with 0 < p < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub c0: f64,
    pub c1: f64,
    pub p: f64,
}

impl Profile {
    pub fn new(c0: f64, c1: f64, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) || c1 < 0.0 || !c0.is_finite() || !c1.is_finite() {
            return Err(Error::Invalid(format!("profile needs 0 < p < 1 and c1 ≥ 0, got c0={c0} c1={c1} p={p}")));
        }
        Ok(Profile { c0, c1, p })
    }

    pub fn psi(&self, t: f64) -> f64 {
        self.c0 + self.c1 * (1.0 + t).powf(self.p)
    }

    pub fn dpsi(&self, t: f64) -> f64 {
        self.c1 * self.p * (1.0 + t).powf(self.p - 1.0)
    }

    /// ψ(t)/t, which tends to 0.
    pub fn slope_at(&self, t: f64) -> f64 {
        self.psi(t) / t
    }
}

/// Bromwich-type chain ζ(η) = ψ(|η|)ξ₀ + iη (n = 1), or orthant pieces
/// ζ = a* + (ψ(|η|) − ψ(0))(|η₁|, |η₂|)/|η| + iη (n = 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseChain {
    pub xi0: Vec<f64>,
    pub psi: Profile,
    /// Anchor a* for the n = 2 orthant pieces; defaults to ψ(0)·(1, 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
}

impl InverseChain {
    pub fn dim(&self) -> usize {
        self.xi0.len()
    }

    pub fn anchor(&self) -> Vec<f64> {
        self.anchor.clone().unwrap_or_else(|| vec![self.psi.psi(0.0); self.dim()])
    }

    /// n = 1: the point on the chain at parameter η.
    pub fn zeta1(&self, eta: f64) -> C64 {
        C64::new(self.psi.psi(eta.abs()) * self.xi0[0], eta)
    }

    /// n = 1: dζ/dη.
    pub fn dzeta1(&self, eta: f64) -> C64 {
        C64::new(self.psi.dpsi(eta.abs()) * eta.signum() * self.xi0[0], 1.0)
    }

    /// n = 1 arm for the sign `s` = ±1, parametrized by t = |η| ∈ [0, ∞),
    /// and oriented with η increasing.
    pub fn arm1(&self, s: f64) -> (ParamMap, f64) {
        let c = self.clone();
        (Arc::new(move |t: f64| (c.zeta1(s * t), c.dzeta1(s * t) * s)), s)
    }

    /// Sampled distance from the chain to a set of points (η ∈ [−T, T]).
    pub fn distance_to(&self, points: &[C64]) -> f64 {
        let mut best = f64::INFINITY;
        if self.dim() != 1 {
            return best;
        }
        for p in points {
            // Coarse scan then golden-section refinement around the best sample.
            let scan = |eta: f64| (self.zeta1(eta) - p).norm();
            let span = 4.0 * (p.im.abs() + 10.0);
            let m = 4000;
            let mut bi = 0.0;
            let mut bv = f64::INFINITY;
            for j in 0..=m {
                let eta = -span + 2.0 * span * j as f64 / m as f64;
                let v = scan(eta);
                if v < bv {
                    bv = v;
                    bi = eta;
                }
            }
            let h = 2.0 * span / m as f64;
            let (mut lo, mut hi) = (bi - h, bi + h);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let x1 = hi - g * (hi - lo);
                let x2 = lo + g * (hi - lo);
                if scan(x1) < scan(x2) {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            best = best.min(bv.min(scan(0.5 * (lo + hi))));
        }
        best
    }
}

/// Builds an inverse chain and verifies it keeps `margin` away from `zeros`.
pub fn make_inverse_chain(xi0: &[f64], psi: Profile, zeros: &[C64], margin: f64) -> Result<InverseChain> {
    let n = crate::geometry::norm(xi0);
    if !(n > 0.0) {
        return Err(Error::Invalid("ξ₀ must be nonzero".into()));
    }
    let chain = InverseChain { xi0: xi0.iter().map(|x| x / n).collect(), psi, anchor: None };
    if !zeros.is_empty() {
        let d = chain.distance_to(zeros);
        if d < margin {
            return Err(Error::MarginViolation { distance: d, margin });
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn i() -> C64 {
        C64::new(0.0, 1.0)
    }

    #[test]
    fn ray_loop_delta_residue() {
        let lp = RayLoop::new(0.0, 1.0, 0.3);
        let f = |z: C64| (-2.0 * z).exp() * (-1.0 / (2.0 * PI * i() * z));
        let path = lp.clockwise(0.3).with_damping(2.0);
        assert!(path.is_connected() || path.pieces.len() == 4);
        let r = integrate_path(&f, &path, Tol::abs(1e-12)).unwrap();
        assert!((r.value - 1.0).norm() < 1e-10, "{r:?}");
        let g = |z: C64| (-z).exp();
        let r = integrate_path(&g, &lp.clockwise(0.3).with_damping(1.0), Tol::abs(1e-12)).unwrap();
        assert!(r.value.norm() < 1e-9);
    }

    #[test]
    fn point_loop_is_closed() {
        let lp = RayLoop::new(1.0, 0.0, 0.5);
        let p = lp.clockwise(0.5);
        assert!(p.is_connected());
        let f = |z: C64| 1.0 / (z - 1.0);
        let r = integrate_path(&f, &p, Tol::abs(1e-12)).unwrap();
        assert!((r.value + 2.0 * PI * i()).norm() < 1e-10);
    }

    #[test]
    fn left_ray_loop() {
        // ∫ over (−∞, 0] of e^{2x}: loop with the jump of log gives 1/2.
        let lp = RayLoop::new(0.0, -1.0, 0.3);
        let up = lp.upper(0.3).with_damping(2.0);
        assert!(up.is_connected());
        let f = |z: C64| (2.0 * z).exp() / z;
        let r = integrate_path(&f, &lp.clockwise(0.3).with_damping(2.0), Tol::abs(1e-12)).unwrap();
        assert!((r.value + 2.0 * PI * i()).norm() < 1e-9, "{r:?}");
    }

    #[test]
    fn reversal_negates() {
        let lp = RayLoop::new(0.0, 1.0, 0.4);
        let p = lp.upper(0.4).with_damping(1.0);
        let f = |z: C64| (-z).exp() / (z + 2.0);
        let a = integrate_path(&f, &p, Tol::abs(1e-12)).unwrap().value;
        let b = integrate_path(&f, &p.reversed(), Tol::abs(1e-12)).unwrap().value;
        assert_eq!(a, -b);
    }

    #[test]
    fn stokes_between_loops() {
        let f = |z: C64| (-2.0 * z).exp() / (z - 1.0);
        let a = RayLoop::new(0.0, 1.0, 0.3).clockwise(0.3).with_damping(2.0);
        let b = RayLoop::new(0.0, 1.0, 0.5).clockwise(0.5).with_damping(2.0);
        assert!(stokes_check(&f, &a, &b, Tol::abs(1e-11)).unwrap() < 1e-8);
        assert_eq!(stokes_check(&f, &a, &a, Tol::abs(1e-11)).unwrap(), 0.0);
    }

    #[test]
    fn product_of_tails() {
        let t = Path1D::new(vec![Segment::Ray { from: C64::new(0.0, 0.0), dir: C64::new(1.0, 0.0), damping: Some(1.0) }]);
        let r = integrate_product(&|a, b| (-a - b).exp(), &t, &t, Tol::abs(1e-11)).unwrap();
        assert!((r.value - 1.0).norm() < 1e-9);
    }

    #[test]
    fn inverse_chain_examples() {
        let psi = Profile::new(1.0, 1.0, 0.5).unwrap();
        let c = make_inverse_chain(&[1.0], psi, &[], 0.0).unwrap();
        assert!((c.zeta1(0.0) - 2.0).norm() < 1e-15);
        assert!(psi.slope_at(1e6) < 0.002);
        let psi2 = Profile::new(2.0, 1.0, 0.5).unwrap();
        let c2 = make_inverse_chain(&[1.0], psi2, &[C64::new(1.0, 0.0)], 1.0).unwrap();
        assert!(c2.distance_to(&[C64::new(1.0, 0.0)]) >= 1.0);
        assert!(matches!(
            make_inverse_chain(&[1.0], psi, &[C64::new(2.2, 0.0)], 0.5),
            Err(Error::MarginViolation { .. })
        ));
        assert!(Profile::new(0.0, 1.0, 1.0).is_err());
    }
}
