use num_complex::Complex64 as C64;
use serde_json::json;
use std::any::Any;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::chains::{InverseChain, Profile};
use crate::error::{Error, Result};
use crate::expr::{AnalyticFunction, GrowthCertificate, NumericFn, Sign, WedgeDescriptor};
use crate::geometry::{support_at, ClosedConicSet, Direction, ExtReal, HalfSpaceFamily, PolyhedralCone};
use crate::hyperfun::{Hyperfunction, TestDensity, WedgeBV};
use crate::quadrature::{integrate, iterated, Range, Tol};

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

fn nan() -> C64 {
    C64::new(f64::NAN, f64::NAN)
}

/// M(κ) = sup_{t ≥ 0} ψ(t) − κt, the exponential type of a chain arm
/// integral along tails tilted by κ.
pub fn tilt_type(psi: &Profile, kappa: f64) -> f64 {
    if psi.c1 == 0.0 || kappa <= 0.0 {
        return if psi.c1 == 0.0 { psi.c0 + psi.c1 } else { f64::INFINITY };
    }
    let t = ((kappa / (psi.c1 * psi.p)).powf(1.0 / (psi.p - 1.0)) - 1.0).max(0.0);
    psi.psi(t) - kappa * t
}

/// d·Re ζ − inf_κ (M(κ) + κ|Im ζ|): positive when some tilted ray makes
/// the arm integral of e^{z(ζ' − ζ)} converge for every ζ' on the chain.
fn arm_excess(psi: &Profile, d: f64, zeta: C64) -> f64 {
    let best = (0..60)
        .map(|j| {
            let k = 0.02 * 1.2f64.powi(j);
            tilt_type(psi, k) + k * zeta.im.abs()
        })
        .fold(f64::INFINITY, f64::min);
    d * zeta.re - best
}

#[derive(Debug, Clone, Copy)]
pub struct InverseOptions {
    pub tol: Tol,
    pub check_growth: bool,
    /// ε in the sampled bound |f| ≤ C e^{−h(ξ₀)Re⟨ζ,ξ₀⟩ + ε|ζ|}.
    pub eps: f64,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions { tol: Tol::new(1e-12, 1e-10), check_growth: true, eps: 0.1 }
    }
}

/// One half of the n = 1 inverse: G(z) = (1/2πi) ∫ e^{ζz} ζ^p f(ζ) dζ over
/// the arm of γ* with sign(η) = `side`, η increasing.
pub struct BromwichArm {
    pub f: AnalyticFunction,
    pub chain: InverseChain,
    pub side: f64,
    pub power: u32,
    pub tol: Tol,
    memo: Mutex<HashMap<u64, (C64, C64)>>,
}

impl fmt::Debug for BromwichArm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BromwichArm(side={}, power={}, psi={:?})", self.side, self.power, self.chain.psi)
    }
}

impl BromwichArm {
    pub fn new(f: AnalyticFunction, chain: InverseChain, side: f64, power: u32, tol: Tol) -> Self {
        BromwichArm { f, chain, side, power, tol, memo: Mutex::new(HashMap::new()) }
    }

    /// (ζ(t), ζ^p f(ζ) dζ/dt) at |η| = t.
    fn node(&self, t: f64) -> (C64, C64) {
        let key = t.to_bits();
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return *v;
        }
        let eta = self.side * t;
        let z = self.chain.zeta1(eta);
        let w = self.f.eval1(z) * z.powu(self.power) * self.chain.dzeta1(eta);
        let mut m = self.memo.lock().unwrap();
        if m.len() > 4_000_000 {
            m.clear();
        }
        m.insert(key, (z, w));
        (z, w)
    }

    fn d(&self) -> f64 {
        self.chain.xi0[0].signum()
    }

    fn integrate_arm(&self, g: &dyn Fn(C64, C64) -> C64, damping: f64) -> Result<C64> {
        let h = |t: f64| {
            let (z, w) = self.node(t);
            g(z, w)
        };
        Ok(integrate(&h, Range::tail(0.0, damping), self.tol)?.value / two_pi_i())
    }

    pub fn growth(&self) -> GrowthCertificate {
        GrowthCertificate::new(tilt_type(&self.chain.psi, 0.25), 1.0)
    }
}

impl NumericFn for BromwichArm {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, z: &[C64]) -> C64 {
        let z = z[0];
        let damping = (self.side * z.im).max(0.02);
        self.integrate_arm(&|zeta, w| w * (zeta * z).exp(), damping).unwrap_or_else(|_| nan())
    }

    fn derivative(&self, _k: usize) -> Option<Arc<dyn NumericFn>> {
        Some(Arc::new(BromwichArm::new(self.f.clone(), self.chain.clone(), self.side, self.power + 1, self.tol)))
    }

    fn pair_density(&self, phi: &TestDensity, _y: &[f64]) -> Option<Result<C64>> {
        Some(self.integrate_arm(&|zeta, w| w * phi.exp_moment(&[zeta]), 0.05))
    }

    fn forward_arm(&self, endpoint: C64, d: f64, zeta: C64) -> Option<Result<C64>> {
        if d != self.d() {
            return None;
        }
        let ex = arm_excess(&self.chain.psi, d, zeta);
        if ex <= 0.05 {
            return Some(Err(Error::OutOfRegion(format!(
                "ζ = {zeta} is too close to the inverse chain (excess {ex:.3e})"
            ))));
        }
        let g = |z: C64, w: C64| {
            let dw = z - zeta;
            w * (endpoint * dw).exp() / dw * (-d)
        };
        Some(self.integrate_arm(&g, 0.05))
    }

    fn describe(&self) -> serde_json::Value {
        json!({
            "bromwich": {
                "f": self.f.describe(),
                "xi0": self.chain.xi0,
                "psi": self.chain.psi,
                "side": self.side,
                "power": self.power,
            }
        })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Shape of a two-variable chain sector.
#[derive(Debug, Clone, PartialEq)]
pub enum SectorChain {
    /// ζ = a* + ((1−s)ψ̂(r) + s·r)|u| + i(1−s) r u with ψ̂ = ψ − ψ(0),
    /// u = (cos θ, sin θ); s = 0 is the orthant chain, s > 0 deforms it
    /// toward the real chain a* + ℝ₊².
    Orthant { anchor: Vec<f64>, deform: f64 },
    /// ζ = ψ(r)ξ₀ + i r u.
    Kernel { xi0: Vec<f64> },
}

/// (1/2πi)² ∫∫ e^{ζ·z} ζ^p f(ζ) dζ₁∧dζ₂ over the chain sector θ ∈ [θa, θb].
#[derive(Debug)]
pub struct BromwichSector {
    pub f: AnalyticFunction,
    pub chain: SectorChain,
    pub psi: Profile,
    pub theta: (f64, f64),
    pub power: [u32; 2],
    pub tol: Tol,
}

impl BromwichSector {
    /// (ζ, det[∂ζ/∂r, ∂ζ/∂θ]).
    pub fn point(&self, r: f64, th: f64) -> ([C64; 2], C64) {
        let (s, c) = th.sin_cos();
        let u = [c, s];
        let up = [-s, c];
        let i = C64::new(0.0, 1.0);
        let (z, dr, dt) = match &self.chain {
            SectorChain::Orthant { anchor, deform } => {
                let sd = *deform;
                let mag = (1.0 - sd) * (self.psi.psi(r) - self.psi.psi(0.0)) + sd * r;
                let dmag = (1.0 - sd) * self.psi.dpsi(r) + sd;
                let mut z = [C64::new(0.0, 0.0); 2];
                let mut dr = z;
                let mut dt = z;
                for k in 0..2 {
                    let ab = u[k].abs();
                    let dab = u[k].signum() * up[k];
                    z[k] = C64::new(anchor[k] + mag * ab, (1.0 - sd) * r * u[k]);
                    dr[k] = dmag * ab + i * (1.0 - sd) * u[k];
                    dt[k] = mag * dab + i * (1.0 - sd) * r * up[k];
                }
                (z, dr, dt)
            }
            SectorChain::Kernel { xi0 } => {
                let p = self.psi.psi(r);
                let dp = self.psi.dpsi(r);
                let mut z = [C64::new(0.0, 0.0); 2];
                let mut dr = z;
                let mut dt = z;
                for k in 0..2 {
                    z[k] = C64::new(p * xi0[k], r * u[k]);
                    dr[k] = dp * xi0[k] + i * u[k];
                    dt[k] = i * r * up[k];
                }
                (z, dr, dt)
            }
        };
        (z, dr[0] * dt[1] - dr[1] * dt[0])
    }

    fn weight(&self, r: f64, th: f64) -> ([C64; 2], C64) {
        let (z, det) = self.point(r, th);
        let w = self.f.eval(&z) * z[0].powu(self.power[0]) * z[1].powu(self.power[1]) * det;
        (z, w / (two_pi_i() * two_pi_i()))
    }

    fn integrate(&self, g: &dyn Fn([C64; 2], C64) -> C64, rate: &dyn Fn(f64) -> f64) -> Result<C64> {
        let h = |th: f64, r: f64| {
            let (z, w) = self.weight(r, th);
            g(z, w)
        };
        Ok(iterated(&h, Range::finite(self.theta.0, self.theta.1), &|th| Range::tail(0.0, rate(th).max(0.02)), self.tol)?.value)
    }

    /// Rough decay rate in r of |e^{ζ·z}| at angle θ.
    fn rate(&self, z: &[C64], th: f64) -> f64 {
        let (s, c) = th.sin_cos();
        let u = [c, s];
        match &self.chain {
            SectorChain::Orthant { deform, .. } => (0..2)
                .map(|k| (1.0 - deform) * u[k] * z[k].im - deform * u[k].abs() * z[k].re)
                .sum(),
            SectorChain::Kernel { .. } => (0..2).map(|k| u[k] * z[k].im).sum(),
        }
    }

    pub fn with_deform(&self, s: f64) -> Result<BromwichSector> {
        match &self.chain {
            SectorChain::Orthant { anchor, .. } => Ok(BromwichSector {
                f: self.f.clone(),
                chain: SectorChain::Orthant { anchor: anchor.clone(), deform: s },
                psi: self.psi,
                theta: self.theta,
                power: self.power,
                tol: self.tol,
            }),
            SectorChain::Kernel { .. } => Err(Error::Unsupported("deformation of kernel sectors".into())),
        }
    }

    pub fn try_eval(&self, z: &[C64]) -> Result<C64> {
        let (z0, z1) = (z[0], z[1]);
        self.integrate(&|zeta, w| w * (zeta[0] * z0 + zeta[1] * z1).exp(), &|th| self.rate(z, th))
    }
}

impl NumericFn for BromwichSector {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: &[C64]) -> C64 {
        self.try_eval(z).unwrap_or_else(|_| nan())
    }

    fn derivative(&self, k: usize) -> Option<Arc<dyn NumericFn>> {
        let mut power = self.power;
        power[k] += 1;
        Some(Arc::new(BromwichSector {
            f: self.f.clone(),
            chain: self.chain.clone(),
            psi: self.psi,
            theta: self.theta,
            power,
            tol: self.tol,
        }))
    }

    fn pair_density(&self, phi: &TestDensity, _y: &[f64]) -> Option<Result<C64>> {
        Some(self.integrate(&|zeta, w| w * phi.exp_moment(&zeta), &|_| 0.05))
    }

    fn describe(&self) -> serde_json::Value {
        let chain = match &self.chain {
            SectorChain::Orthant { anchor, deform } => json!({"orthant": {"anchor": anchor, "deform": deform}}),
            SectorChain::Kernel { xi0 } => json!({"kernel": {"xi0": xi0}}),
        };
        json!({
            "bromwich_sector": {
                "f": self.f.describe(),
                "chain": chain,
                "psi": self.psi,
                "theta": [self.theta.0, self.theta.1],
                "power": self.power,
            }
        })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Piecewise-constant kernel on S¹: arcs σ_λ with bracketing normals
/// (ν_{λ,1}, ν_{λ,2}).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOmega {
    pub arcs: Vec<(f64, f64)>,
    pub normals: Vec<[Vec<f64>; 2]>,
    pub delta: f64,
}

impl KernelOmega {
    /// `m` equal arcs; normals sit a quarter arc outside each end.
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 5 {
            return Err(Error::Invalid("need at least 5 arcs so that each arc is shorter than π/2".into()));
        }
        let w = 2.0 * PI / m as f64;
        let mut arcs = vec![];
        let mut normals = vec![];
        for j in 0..m {
            let (a, b) = (j as f64 * w, (j + 1) as f64 * w);
            arcs.push((a, b));
            let n1 = a - w / 4.0;
            let n2 = b + w / 4.0;
            normals.push([vec![n1.cos(), n1.sin()], vec![n2.cos(), n2.sin()]]);
        }
        let delta = normals.iter().map(|[p, q]| p[0] * q[1] - p[1] * q[0]).fold(f64::INFINITY, f64::min);
        let k = KernelOmega { arcs, normals, delta };
        k.check()?;
        Ok(k)
    }

    /// Coverage, det A_λ ≥ δ > 0, and every arc direction strictly inside
    /// the cone of its normals.
    pub fn check(&self) -> Result<()> {
        let mut end = 0.0;
        for (a, b) in &self.arcs {
            if (a - end).abs() > 1e-12 || b <= a {
                return Err(Error::Invalid("arcs do not tile the circle".into()));
            }
            end = *b;
        }
        if (end - 2.0 * PI).abs() > 1e-12 {
            return Err(Error::Invalid("arcs do not tile the circle".into()));
        }
        for ((a, b), [p, q]) in self.arcs.iter().zip(&self.normals) {
            let det = p[0] * q[1] - p[1] * q[0];
            if det < self.delta - 1e-15 || det <= 0.0 {
                return Err(Error::Invalid(format!("det A = {det} below δ = {}", self.delta)));
            }
            for j in 0..=16 {
                let th = a + (b - a) * j as f64 / 16.0;
                let v = [th.cos(), th.sin()];
                // Coefficients of v in the basis (p, q).
                let c1 = (v[0] * q[1] - v[1] * q[0]) / det;
                let c2 = (p[0] * v[1] - p[1] * v[0]) / det;
                if c1 <= 0.0 || c2 <= 0.0 {
                    return Err(Error::Invalid("arc leaves the cone of its normals".into()));
                }
            }
        }
        Ok(())
    }
}

/// Samples |f(ζ)| e^{h·Re⟨ζ,ξ₀⟩ − ε|ζ|} along ζ = (s + iηs)ξ₀ for s from
/// `s0` to 200; fails when a far sample exceeds ten times the largest
/// near one.
pub fn check_inverse_growth(f: &AnalyticFunction, xi0: &[f64], h: f64, s0: f64, eps: f64) -> Result<()> {
    let s0 = s0.max(0.5);
    let m = 24;
    let ratio = (200.0 / s0).powf(1.0 / (m - 1) as f64);
    let mut near = f64::NEG_INFINITY;
    let mut worst: Option<(f64, f64)> = None;
    for j in 0..m {
        let s = s0 * ratio.powi(j as i32);
        for eta in [0.0, 0.5, -0.5] {
            let c = C64::new(s, eta * s);
            let zeta: Vec<C64> = xi0.iter().map(|x| c * x).collect();
            let v = f.eval(&zeta);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::GrowthCertificateFail(format!("f is not finite at ζ = {zeta:?}")));
            }
            let size: f64 = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let l = v.norm().ln() + h * s - eps * size;
            if s <= 2.0 * s0 {
                near = near.max(l);
            } else if worst.map_or(true, |(_, w)| l > w) {
                worst = Some((s, l));
            }
        }
    }
    if let Some((s, l)) = worst {
        if l > near + 10f64.ln() {
            return Err(Error::GrowthCertificateFail(format!(
                "|f| e^(h s) grows faster than e^(ε|ζ|): log ratio {:.2} at s = {s:.1}",
                l - near
            )));
        }
    }
    Ok(())
}

/// {x : ⟨x, ξ⟩ ≥ h(ξ)} over the sampled directions.
pub fn support_estimate(f: &AnalyticFunction, h: &dyn Fn(&Direction) -> f64, dirs: &[Direction]) -> Result<HalfSpaceFamily> {
    let mut entries = vec![];
    for d in dirs {
        if d.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: d.dim() });
        }
        entries.push((d.clone(), h(d)));
    }
    Ok(HalfSpaceFamily { entries })
}

fn h_of(k: &ClosedConicSet, xi0: &[f64]) -> Result<f64> {
    match support_at(k, xi0) {
        ExtReal::Finite(h) => Ok(h),
        _ => Err(Error::OutOfRegion(format!("ξ₀ = {xi0:?} is not in HPC of the support"))),
    }
}

fn quadrant_signs(q: usize) -> [Sign; 2] {
    use Sign::*;
    [[Plus, Plus], [Minus, Plus], [Minus, Minus], [Plus, Minus]][q]
}

/// I𝓛(f) with default options.
pub fn inverse(f: &AnalyticFunction, k: &ClosedConicSet, chain: &InverseChain) -> Result<Hyperfunction> {
    inverse_with(f, k, chain, &InverseOptions::default())
}

/// n = 1: terms b₊(G₊) + b₋(G₋). n = 2: the four orthant sectors of the
/// chain anchored at a*, each with coefficient 1.
pub fn inverse_with(f: &AnalyticFunction, k: &ClosedConicSet, chain: &InverseChain, opts: &InverseOptions) -> Result<Hyperfunction> {
    let n = f.dim();
    if chain.dim() != n || k.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: chain.dim() });
    }
    let h = h_of(k, &chain.xi0)?;
    if opts.check_growth {
        check_inverse_growth(f, &chain.xi0, h, chain.psi.psi(0.0) + 0.5, opts.eps)?;
    }
    match n {
        1 => {
            let d = chain.xi0[0].signum();
            let mut terms = vec![];
            for side in [1.0, -1.0] {
                let arm = BromwichArm::new(f.clone(), chain.clone(), side, 0, opts.tol);
                let growth = arm.growth();
                let wedge = if side > 0.0 { WedgeDescriptor::upper() } else { WedgeDescriptor::lower() };
                terms.push(WedgeBV {
                    wedge: wedge.clone(),
                    func: AnalyticFunction::numeric(Arc::new(arm), wedge, growth),
                    coeff: C64::new(1.0, 0.0),
                });
            }
            let support = ClosedConicSet::new(vec![d * h], PolyhedralCone::new(1, vec![vec![d]])?)?;
            Ok(Hyperfunction { dim: 1, terms, support })
        }
        2 => {
            let anchor = chain.anchor();
            let mut terms = vec![];
            for q in 0..4 {
                let sector = BromwichSector {
                    f: f.clone(),
                    chain: SectorChain::Orthant { anchor: anchor.clone(), deform: 0.0 },
                    psi: chain.psi,
                    theta: (q as f64 * PI / 2.0, (q + 1) as f64 * PI / 2.0),
                    power: [0, 0],
                    tol: opts.tol,
                };
                let wedge = WedgeDescriptor::orthant(quadrant_signs(q).to_vec());
                let growth = GrowthCertificate::new(tilt_type(&chain.psi, 0.25) + anchor.iter().fold(0.0f64, |a, b| a.max(b.abs())), 1.0);
                terms.push(WedgeBV {
                    wedge: wedge.clone(),
                    func: AnalyticFunction::numeric(Arc::new(sector), wedge, growth),
                    coeff: C64::new(1.0, 0.0),
                });
            }
            Ok(Hyperfunction { dim: 2, terms, support: k.clone() })
        }
        _ => Err(Error::Unsupported(format!("inverse transform in dimension {n}"))),
    }
}

/// n = 2 inverse over the chain ζ = ψ(|η|)ξ₀ + iη cut into the kernel arcs;
/// arc λ contributes its sector on the wedge {y : ⟨y, ν_{λ,k}⟩ > 0}.
pub fn inverse_kernel(
    f: &AnalyticFunction,
    k: &ClosedConicSet,
    chain: &InverseChain,
    omega: &KernelOmega,
    opts: &InverseOptions,
) -> Result<Hyperfunction> {
    if f.dim() != 2 || chain.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.dim() });
    }
    omega.check()?;
    let h = h_of(k, &chain.xi0)?;
    if opts.check_growth {
        check_inverse_growth(f, &chain.xi0, h, chain.psi.psi(0.0) + 0.5, opts.eps)?;
    }
    let mut terms = vec![];
    for (arc, normals) in omega.arcs.iter().zip(&omega.normals) {
        let sector = BromwichSector {
            f: f.clone(),
            chain: SectorChain::Kernel { xi0: chain.xi0.clone() },
            psi: chain.psi,
            theta: *arc,
            power: [0, 0],
            tol: opts.tol,
        };
        let wedge = WedgeDescriptor::cone(normals.to_vec());
        terms.push(WedgeBV {
            wedge: wedge.clone(),
            func: AnalyticFunction::numeric(Arc::new(sector), wedge, GrowthCertificate::new(tilt_type(&chain.psi, 0.25), 1.0)),
            coeff: C64::new(1.0, 0.0),
        });
    }
    Ok(Hyperfunction { dim: 2, terms, support: k.clone() })
}

#[derive(Debug, Clone)]
pub struct ExtensionReport {
    /// Largest |sgn(α)H_α − sgn(β)H_β| over the grid.
    pub max_pairwise: f64,
    /// Largest |sgn(α)H_α − J| against the real-chain integral J.
    pub max_vs_real: f64,
    /// Largest change of a piece between the original and deformed chain
    /// at points inside its own wedge.
    pub max_deformation: f64,
    /// Per grid point: sgn(α)H_α for the four quadrants, then J.
    pub values: Vec<(Vec<C64>, [C64; 5])>,
}

impl ExtensionReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_pairwise < tol && self.max_vs_real < tol && self.max_deformation < tol
    }
}

/// Evaluates the four orthant pieces of I𝓛(f) on points with Re z_k < 0 and
/// |Im z_k| < |Re z_k|, through the chain deformed halfway to a* + ℝ₊².
pub fn orthant_extension_check(f: &AnalyticFunction, chain: &InverseChain, points: &[[C64; 2]], tol: Tol) -> Result<ExtensionReport> {
    if f.dim() != 2 || chain.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.dim() });
    }
    let anchor = chain.anchor();
    let sector = |q: usize, s: f64| BromwichSector {
        f: f.clone(),
        chain: SectorChain::Orthant { anchor: anchor.clone(), deform: s },
        psi: chain.psi,
        theta: (q as f64 * PI / 2.0, (q + 1) as f64 * PI / 2.0),
        power: [0, 0],
        tol,
    };
    let mut report = ExtensionReport { max_pairwise: 0.0, max_vs_real: 0.0, max_deformation: 0.0, values: vec![] };
    for z in points {
        if !(z[0].re < 0.0 && z[1].re < 0.0 && z[0].im.abs() < -z[0].re && z[1].im.abs() < -z[1].re) {
            return Err(Error::Invalid(format!("grid point {z:?} is outside the overlap region")));
        }
        let mut vals = [C64::new(0.0, 0.0); 5];
        for q in 0..4 {
            let sg: f64 = quadrant_signs(q).iter().map(|s| s.value()).product();
            vals[q] = sector(q, 0.5).try_eval(z)? * sg;
        }
        let a = anchor.clone();
        let g = |x1: f64, x2: f64| {
            let zeta = [C64::new(a[0] + x1, 0.0), C64::new(a[1] + x2, 0.0)];
            f.eval(&zeta) * (zeta[0] * z[0] + zeta[1] * z[1]).exp()
        };
        let j = iterated(&g, Range::tail(0.0, -z[0].re), &|_| Range::tail(0.0, -z[1].re), tol)?.value / (two_pi_i() * two_pi_i());
        vals[4] = j;
        for p in 0..4 {
            report.max_vs_real = report.max_vs_real.max((vals[p] - j).norm());
            for q in p + 1..4 {
                report.max_pairwise = report.max_pairwise.max((vals[p] - vals[q]).norm());
            }
        }
        for q in 0..4 {
            let sg = quadrant_signs(q);
            let zq = [
                C64::new(z[0].re, sg[0].value() * 0.5 * z[0].re.abs()),
                C64::new(z[1].re, sg[1].value() * 0.5 * z[1].re.abs()),
            ];
            let d = (sector(q, 0.0).try_eval(&zq)? - sector(q, 0.5).try_eval(&zq)?).norm();
            report.max_deformation = report.max_deformation.max(d);
        }
        report.values.push((z.to_vec(), vals));
    }
    Ok(report)
}
