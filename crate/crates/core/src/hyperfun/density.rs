//! Entire test densities of polynomial-times-Gaussian type. They are closed
//! under differentiation and have closed-form exponential moments.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// p(z − c) · e^{−w (z − c)²} in one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussFactor {
    /// Coefficients of p in powers of u = z − c.
    pub poly: Vec<C64>,
    pub center: f64,
    pub width: f64,
}

impl GaussFactor {
    pub fn gaussian(center: f64, width: f64) -> Self {
        GaussFactor { poly: vec![C64::new(1.0, 0.0)], center, width }
    }

    pub fn with_poly(center: f64, width: f64, poly: Vec<f64>) -> Self {
        GaussFactor { poly: poly.into_iter().map(|c| C64::new(c, 0.0)).collect(), center, width }
    }

    fn p(&self, u: C64) -> C64 {
        self.poly.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * u + c)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let u = z - self.center;
        self.p(u) * (-self.width * u * u).exp()
    }

    /// d/dz: (p'(u) − 2w u p(u)) e^{−w u²}.
    pub fn derivative(&self) -> Self {
        let m = self.poly.len();
        let mut q = vec![C64::new(0.0, 0.0); m + 1];
        for (j, c) in self.poly.iter().enumerate() {
            if j > 0 {
                q[j - 1] += c * j as f64;
            }
            q[j + 1] -= c * (2.0 * self.width);
        }
        while q.len() > 1 && q.last() == Some(&C64::new(0.0, 0.0)) {
            q.pop();
        }
        GaussFactor { poly: q, center: self.center, width: self.width }
    }

    /// ∫_ℝ φ(x) e^{ζx} dx in closed form.
    pub fn exp_moment(&self, zeta: C64) -> C64 {
        let w = self.width;
        let mu = zeta / (2.0 * w);
        let s2 = 1.0 / (2.0 * w);
        // E[(μ + σN)^m] = Σ_{j even} C(m, j) μ^{m−j} σ^j (j − 1)!!
        let mut acc = C64::new(0.0, 0.0);
        for (m, c) in self.poly.iter().enumerate() {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            let mut e = C64::new(0.0, 0.0);
            let mut binom = 1.0;
            let mut dfact = 1.0;
            for j in 0..=m {
                if j > 0 {
                    binom = binom * (m - j + 1) as f64 / j as f64;
                }
                if j % 2 == 0 {
                    if j >= 2 {
                        dfact *= (j - 1) as f64;
                    }
                    e += binom * mu.powi((m - j) as i32) * s2.powf(j as f64 / 2.0) * dfact;
                }
            }
            acc += c * e;
        }
        (zeta * self.center + zeta * zeta / (4.0 * w)).exp() * (PI / w).sqrt() * acc
    }

    /// Σ|p_j| r^j.
    fn poly_bound(&self, r: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Half-width X such that, for |u| > X, the factor against a weight
    /// e^{h|x|} on the line Im z = y is below `eps` relative to its peak.
    pub fn truncation(&self, h: f64, y: f64, eps: f64) -> Result<f64> {
        let w = self.width;
        let bound = |u: f64| self.poly_bound(u.abs() + y.abs()) * (-w * u * u + w * y * y + h * (self.center.abs() + u.abs())).exp();
        let mut peak = 0.0f64;
        let mut u = 0.0;
        while u < 400.0 {
            peak = peak.max(bound(u));
            u += 0.05;
        }
        let mut x = (h / (2.0 * w)).max(0.0) + 0.5;
        while x < 400.0 {
            // Remaining mass beyond x is at most bound(x) / (2wx − h) for Gaussian tails.
            let slope = 2.0 * w * x - h;
            if slope > 0.0 && bound(x) / slope < eps * peak.max(f64::MIN_POSITIVE) {
                return Ok(x);
            }
            x += 0.25;
        }
        Err(Error::GrowthMismatch(format!("Gaussian width {w} does not dominate growth rate {h}")))
    }
}

/// Product density φ(z) = Π_k φ_k(z_k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDensity {
    pub factors: Vec<GaussFactor>,
    /// Imaginary offset used for contour pairings.
    pub push_in: f64,
}

impl TestDensity {
    pub fn new(factors: Vec<GaussFactor>) -> Self {
        let wmax = factors.iter().map(|f| f.width).fold(0.0, f64::max);
        TestDensity { push_in: (0.5f64).min((0.25 / wmax).sqrt()), factors }
    }

    pub fn gaussian(center: f64, width: f64) -> Self {
        Self::new(vec![GaussFactor::gaussian(center, width)])
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.factors.iter().zip(z).map(|(f, w)| f.eval(*w)).product()
    }

    pub fn eval1(&self, z: C64) -> C64 {
        self.factors[0].eval(z)
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut d = self.clone();
        d.factors[k] = d.factors[k].derivative();
        d
    }

    /// ∂^m/∂z_k^m.
    pub fn derivative_n(&self, k: usize, m: usize) -> Self {
        (0..m).fold(self.clone(), |acc, _| acc.derivative(k))
    }

    /// ∫_{ℝⁿ} φ(x) e^{⟨ζ, x⟩} dx.
    pub fn exp_moment(&self, zeta: &[C64]) -> C64 {
        self.factors.iter().zip(zeta).map(|(f, z)| f.exp_moment(*z)).product()
    }

    pub fn with_push_in(mut self, y: f64) -> Self {
        self.push_in = y;
        self
    }

    pub fn to_expr(&self) -> Expr {
        let n = self.dim();
        let mut terms = vec![];
        for (k, f) in self.factors.iter().enumerate() {
            let v = if n == 1 { "z".to_string() } else { format!("z{}", k + 1) };
            let u = format!("({v} - {})", f.center);
            let poly: Vec<String> = f
                .poly
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != C64::new(0.0, 0.0))
                .map(|(j, c)| {
                    let cs = if c.im == 0.0 { format!("({})", c.re) } else { format!("({} + {}*i)", c.re, c.im) };
                    if j == 0 {
                        cs
                    } else {
                        format!("{cs}*{u}^{j}")
                    }
                })
                .collect();
            terms.push(format!("({})*exp(-{}*{u}^2)", poly.join(" + "), f.width));
        }
        crate::expr::parse(&terms.join("*")).expect("generated density expression parses")
    }

    /// Fixed 20-density battery in one variable.
    pub fn battery_1d() -> Vec<TestDensity> {
        let widths = [1.0, 2.0, 0.75, 1.5];
        (0..20)
            .map(|j| {
                let c = -1.0 + 0.2 * j as f64;
                let w = widths[j % 4];
                let poly = match j % 5 {
                    0 => vec![1.0],
                    1 => vec![0.0, 1.0],
                    2 => vec![1.0, 0.0, -0.5],
                    3 => vec![0.5, 1.0],
                    _ => vec![1.0, -0.3, 0.2],
                };
                TestDensity::new(vec![GaussFactor::with_poly(c, w, poly)])
            })
            .collect()
    }

    /// Fixed battery of product densities in two variables.
    pub fn battery_2d() -> Vec<TestDensity> {
        let pts = [(-0.5, 0.5), (0.5, 1.5), (1.5, 0.2), (1.0, 1.0), (2.0, 2.5), (0.0, -0.5), (2.5, 1.2), (1.2, 3.0)];
        pts.iter()
            .enumerate()
            .map(|(j, (a, b))| {
                let wa = [1.0, 1.5, 2.0][j % 3];
                let wb = [1.5, 1.0, 2.0][j % 3];
                let pa = if j % 2 == 0 { vec![1.0] } else { vec![1.0, 0.5] };
                TestDensity::new(vec![GaussFactor::with_poly(*a, wa, pa), GaussFactor::gaussian(*b, wb)])
            })
            .collect()
    }
}
