use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::Hyperfunction;
use crate::error::{Error, Result};
use crate::expr::Sign;

fn g(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn dg(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() / (t * t)
    }
}

/// C∞ step: 0 for t ≤ 0, 1 for t ≥ 1, built from e^{−1/t}.
pub fn smooth_step(t: f64) -> f64 {
    let (a, b) = (g(t), g(1.0 - t));
    if a + b == 0.0 {
        return if t >= 1.0 { 1.0 } else { 0.0 };
    }
    a / (a + b)
}

pub fn smooth_step_deriv(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let (a, b) = (g(t), g(1.0 - t));
    let (da, db) = (dg(t), -dg(1.0 - t));
    let s = a + b;
    if s == 0.0 {
        return 0.0;
    }
    (da * s - a * (da + db)) / (s * s)
}

/// Radial cutoff around the tube over a real interval `core = [lo, hi]`
/// (ends may be infinite): χ = 1 within distance r₀, χ = 0 beyond r₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub r0: f64,
    pub r1: f64,
    pub core: (f64, f64),
}

impl Cutoff {
    pub fn new(r0: f64, r1: f64, core: (f64, f64)) -> Result<Self> {
        if !(r0 > 0.0 && r1 > r0) {
            return Err(Error::Invalid(format!("cutoff radii need 0 < r0 < r1, got {r0}, {r1}")));
        }
        if core.0 > core.1 {
            return Err(Error::Invalid("empty cutoff core".into()));
        }
        Ok(Cutoff { r0, r1, core })
    }

    /// Default radii 0.5 and 1.0 around the support claim of `u`.
    pub fn around(u: &Hyperfunction) -> Result<Self> {
        Self::new(0.5, 1.0, u.support.interval()?)
    }

    fn foot(&self, z: C64) -> f64 {
        z.re.clamp(self.core.0, self.core.1)
    }

    pub fn dist(&self, z: C64) -> f64 {
        (z - self.foot(z)).norm()
    }

    fn t(&self, d: f64) -> f64 {
        (self.r1 - d) / (self.r1 - self.r0)
    }

    pub fn chi(&self, z: C64) -> f64 {
        smooth_step(self.t(self.dist(z)))
    }

    /// ∂χ/∂z̄.
    pub fn dbar_chi(&self, z: C64) -> C64 {
        let p = self.foot(z);
        let d = (z - p).norm();
        if d <= self.r0 || d >= self.r1 {
            return C64::new(0.0, 0.0);
        }
        let ds = smooth_step_deriv(self.t(d)) * (-1.0 / (self.r1 - self.r0));
        (z - p) / (2.0 * d) * ds
    }
}

/// Realization of a one-variable hyperfunction as a pair (ν̃₁, ν̃₀₁) built
/// from its defining functions and a cutoff: ν̃₀₁ = χ·F and ν̃₁ = ∂̄χ·F,
/// where F is the Čech cochain F₊ on Im z > 0 and −F₋ on Im z < 0.
#[derive(Debug, Clone)]
pub struct CechDolbeaultPair {
    pub source: Hyperfunction,
    pub cutoff: Cutoff,
}

impl CechDolbeaultPair {
    /// The Čech cochain; zero on the real axis, where it is undefined.
    pub fn cech(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        if z.im == 0.0 {
            return acc;
        }
        for t in &self.source.terms {
            let s = t.wedge.signs().map(|s| s[0]).unwrap_or(Sign::Free);
            match (s, z.im > 0.0) {
                (Sign::Plus | Sign::Free, true) => acc += t.coeff * t.func.eval1(z),
                (Sign::Minus, false) => acc -= t.coeff * t.func.eval1(z),
                _ => {}
            }
        }
        acc
    }

    pub fn nu01(&self, z: C64) -> C64 {
        let c = self.cutoff.chi(z);
        if c == 0.0 {
            return C64::new(0.0, 0.0);
        }
        self.cech(z) * c
    }

    /// Coefficient of dz̄ ∧ dz.
    pub fn nu1(&self, z: C64) -> C64 {
        let d = self.cutoff.dbar_chi(z);
        if d == C64::new(0.0, 0.0) {
            return d;
        }
        self.cech(z) * d
    }

    /// Largest |∂̄ν̃₀₁ − ν̃₁| over `points` (central differences with step h).
    pub fn dbar_defect(&self, points: &[C64], h: f64) -> f64 {
        points
            .iter()
            .map(|&z| {
                let dx = (self.nu01(z + h) - self.nu01(z - h)) / (2.0 * h);
                let dy = (self.nu01(z + C64::new(0.0, h)) - self.nu01(z - C64::new(0.0, h))) / (2.0 * h);
                let dbar = (dx + C64::i() * dy) * 0.5;
                (dbar - self.nu1(z)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest |ν̃₀₁| + |ν̃₁| over points farther than r₁ from the core.
    pub fn leak(&self, points: &[C64]) -> f64 {
        points
            .iter()
            .filter(|z| self.cutoff.dist(**z) >= self.cutoff.r1)
            .map(|&z| self.nu01(z).norm() + self.nu1(z).norm())
            .fold(0.0, f64::max)
    }

    /// Deterministic sample points in the annular shell r₀ < d < r₁.
    pub fn shell_points(&self, m: usize) -> Vec<C64> {
        let (lo, hi) = self.cutoff.core;
        let (lo, hi) = (if lo.is_finite() { lo } else { hi.min(0.0) - 3.0 }, if hi.is_finite() { hi } else { lo.max(0.0) + 3.0 });
        let mut pts = vec![];
        for j in 0..m {
            let f = (j as f64 + 0.5) / m as f64;
            let r = self.cutoff.r0 + f * (self.cutoff.r1 - self.cutoff.r0);
            let th = PI * (0.15 + 0.7 * f);
            pts.push(C64::new(hi, 0.0) + C64::from_polar(r, th - PI / 2.0));
            pts.push(C64::new(lo, 0.0) + C64::from_polar(r, th + PI / 2.0));
            let x = lo + f * (hi - lo);
            pts.push(C64::new(x, r));
            pts.push(C64::new(x, -r));
        }
        pts
    }
}

impl Hyperfunction {
    /// Cutoff realization; one variable only.
    pub fn to_pair(&self, cutoff: Cutoff) -> Result<CechDolbeaultPair> {
        if self.dim != 1 {
            return Err(Error::Unsupported("Čech–Dolbeault pairs are realized for n = 1 only".into()));
        }
        let (a, b) = self.support.interval()?;
        let (lo, hi) = cutoff.core;
        let slack = cutoff.r0 * 1e-9;
        if a < lo - cutoff.r0 + slack || b > hi + cutoff.r0 - slack {
            return Err(Error::SupportLeak(format!(
                "support [{a}, {b}] is not inside the region where the cutoff equals 1 around [{lo}, {hi}]"
            )));
        }
        Ok(CechDolbeaultPair { source: self.clone(), cutoff })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_profile() {
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(1.2), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        let h = 1e-6;
        for t in [0.2, 0.5, 0.8] {
            let fd = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
            assert!((fd - smooth_step_deriv(t)).abs() < 1e-7);
        }
    }

    #[test]
    fn delta_pair_is_dbar_closed() {
        let u = Hyperfunction::delta(&[0.0]).unwrap();
        let p = u.to_pair(Cutoff::around(&u).unwrap()).unwrap();
        let pts = p.shell_points(12);
        assert!(p.dbar_defect(&pts, 1e-5) < 1e-7);
        let far: Vec<C64> = (0..10).map(|j| C64::from_polar(1.2 + 0.3 * j as f64, j as f64)).collect();
        assert_eq!(p.leak(&far), 0.0);
    }

    #[test]
    fn leak_detected() {
        let u = Hyperfunction::heaviside_exp(C64::new(0.0, 0.0), 0.0).unwrap();
        let c = Cutoff::new(0.5, 1.0, (1.0, f64::INFINITY)).unwrap();
        assert!(matches!(u.to_pair(c), Err(Error::SupportLeak(_))));
    }
}
