use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::any::Any;
use std::fmt;
use std::sync::Arc;

use super::{Compiled, Expr};
use crate::error::{Error, Result};
use crate::geometry::{dot, ExtReal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    Free,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
            Sign::Free => 0.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Free => '.',
        }
    }

    pub fn from_symbol(c: char) -> Result<Sign> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            '.' | '·' => Ok(Sign::Free),
            _ => Err(Error::Invalid(format!("bad wedge sign `{c}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WedgeKind {
    /// Γ_α = {y : α_k y_k > 0 for constrained k}.
    Orthant(Vec<Sign>),
    /// Γ = {y : ⟨y, ν⟩ > 0 for every listed ν}.
    Cone(Vec<Vec<f64>>),
}

/// Ω = M ×̂ iΓ over the whole base space, or over a named box.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeDescriptor {
    pub dim: usize,
    pub kind: WedgeKind,
    pub base: Option<String>,
}

impl WedgeDescriptor {
    pub fn orthant(signs: Vec<Sign>) -> Self {
        WedgeDescriptor { dim: signs.len(), kind: WedgeKind::Orthant(signs), base: None }
    }

    /// All of ℂⁿ (no constraint).
    pub fn full(dim: usize) -> Self {
        Self::orthant(vec![Sign::Free; dim])
    }

    pub fn upper() -> Self {
        Self::orthant(vec![Sign::Plus])
    }

    pub fn lower() -> Self {
        Self::orthant(vec![Sign::Minus])
    }

    pub fn cone(normals: Vec<Vec<f64>>) -> Self {
        let dim = normals.first().map(|v| v.len()).unwrap_or(0);
        WedgeDescriptor { dim, kind: WedgeKind::Cone(normals), base: None }
    }

    pub fn is_full(&self) -> bool {
        match &self.kind {
            WedgeKind::Orthant(s) => s.iter().all(|x| *x == Sign::Free),
            WedgeKind::Cone(n) => n.is_empty(),
        }
    }

    pub fn signs(&self) -> Option<&[Sign]> {
        match &self.kind {
            WedgeKind::Orthant(s) => Some(s),
            WedgeKind::Cone(_) => None,
        }
    }

    /// Product of the orthant signs (constrained coordinates only).
    pub fn sign_product(&self) -> f64 {
        match &self.kind {
            WedgeKind::Orthant(s) => s.iter().map(|x| if *x == Sign::Free { 1.0 } else { x.value() }).product(),
            WedgeKind::Cone(_) => 1.0,
        }
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        if z.len() != self.dim {
            return false;
        }
        match &self.kind {
            WedgeKind::Orthant(s) => s.iter().zip(z).all(|(a, w)| *a == Sign::Free || a.value() * w.im > 0.0),
            WedgeKind::Cone(ns) => {
                let y: Vec<f64> = z.iter().map(|w| w.im).collect();
                ns.iter().all(|n| dot(n, &y) > 0.0)
            }
        }
    }

    /// Whether `self` ⊆ `other` as wedges (so a function on `other` restricts).
    pub fn is_subwedge_of(&self, other: &WedgeDescriptor) -> bool {
        if other.is_full() {
            return true;
        }
        match (&self.kind, &other.kind) {
            (WedgeKind::Orthant(a), WedgeKind::Orthant(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| *y == Sign::Free || x == y)
            }
            _ => self == other,
        }
    }

    /// A unit vector inside Γ along which contours are pushed in.
    pub fn push_direction(&self) -> Vec<f64> {
        match &self.kind {
            WedgeKind::Orthant(s) => s.iter().map(|x| x.value()).collect(),
            WedgeKind::Cone(ns) => {
                let mut v = vec![0.0; self.dim];
                for n in ns {
                    let l = dot(n, n).sqrt();
                    for (vi, ni) in v.iter_mut().zip(n) {
                        *vi += ni / l;
                    }
                }
                let l = dot(&v, &v).sqrt();
                v.iter().map(|x| x / l).collect()
            }
        }
    }

    /// Label such as "+-" for orthants.
    pub fn label(&self) -> String {
        match &self.kind {
            WedgeKind::Orthant(s) => s.iter().map(|x| x.symbol()).collect(),
            WedgeKind::Cone(_) => "cone".into(),
        }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Ok(Self::orthant(label.chars().map(Sign::from_symbol).collect::<Result<_>>()?))
    }
}

/// Sample-checked growth claim |f(z)| ≤ C e^{H|z|}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    #[serde(rename = "H")]
    pub h_type: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// ε values used when checking infra-h-exponential claims.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps: Vec<f64>,
}

impl GrowthCertificate {
    pub fn new(h_type: f64, c: f64) -> Self {
        GrowthCertificate { h_type, c, eps: vec![] }
    }

    pub fn bounded() -> Self {
        Self::new(0.0, 1.0)
    }
}

/// A quadrature-backed or otherwise non-symbolic holomorphic function.
pub trait NumericFn: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[C64]) -> C64;
    /// ∂/∂z_k when available in closed numeric form.
    fn derivative(&self, _k: usize) -> Option<Arc<dyn NumericFn>> {
        None
    }
    /// ∫ F(z) φ(z) dz over ℝⁿ + i·y, when a faster route than contour
    /// quadrature is available.
    fn pair_density(&self, _phi: &crate::hyperfun::TestDensity, _y: &[f64]) -> Option<Result<C64>> {
        None
    }
    /// ∫ e^{−zζ}F(z) dz along a path in F's wedge that runs from `endpoint`
    /// to infinity in the real direction `d` (d = +1), or arrives at
    /// `endpoint` from infinity (d = −1); paths are oriented left to right.
    /// Offered by functions that are themselves integrals in ζ, for which
    /// the inner integral has a closed form.
    fn forward_arm(&self, _endpoint: C64, _d: f64, _zeta: C64) -> Option<Result<C64>> {
        None
    }
    /// JSON description used in hyperfunction literals.
    fn describe(&self) -> serde_json::Value;
    fn as_any(&self) -> &dyn Any;
}

#[derive(Clone)]
pub enum Body {
    Expr { expr: Expr, vars: Vec<String>, compiled: Arc<Compiled> },
    Numeric(Arc<dyn NumericFn>),
}

impl fmt::Debug for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Expr { expr, .. } => write!(f, "Expr({expr})"),
            Body::Numeric(n) => write!(f, "Numeric({n:?})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyticFunction {
    pub body: Body,
    pub domain: WedgeDescriptor,
    pub growth: GrowthCertificate,
}

/// Canonical variable names with accepted aliases.
fn z_vars(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["z1|z|x".into()]
    } else {
        (1..=n).map(|k| format!("z{k}")).collect()
    }
}

fn zeta_vars(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["zeta1|zeta|s".into()]
    } else {
        (1..=n).map(|k| format!("zeta{k}")).collect()
    }
}

impl AnalyticFunction {
    /// Builds from an expression; `vars[k]` lists '|'-separated aliases of
    /// coordinate k, the first being canonical.
    pub fn from_expr(expr: Expr, vars: Vec<String>, domain: WedgeDescriptor, growth: GrowthCertificate) -> Result<Self> {
        if domain.dim != vars.len() {
            return Err(Error::DimensionMismatch { expected: vars.len(), got: domain.dim });
        }
        let canon = |name: &str| -> Option<String> {
            vars.iter()
                .find(|v| v.split('|').any(|a| a == name))
                .map(|v| v.split('|').next().unwrap().to_string())
        };
        for v in expr.variables() {
            if canon(&v).is_none() {
                return Err(Error::UnknownIdentifier(v));
            }
        }
        let expr = expr.rename(&canon);
        let canonical: Vec<String> = vars.iter().map(|v| v.split('|').next().unwrap().to_string()).collect();
        let compiled = Arc::new(Compiled::new(&expr, &canonical)?);
        Ok(AnalyticFunction { body: Body::Expr { expr, vars: canonical, compiled }, domain, growth })
    }

    /// Function of z1..zn (aliases z, x when n = 1).
    pub fn in_z(expr: Expr, domain: WedgeDescriptor, growth: GrowthCertificate) -> Result<Self> {
        let n = domain.dim;
        Self::from_expr(expr, z_vars(n), domain, growth)
    }

    /// Function of ζ1..ζn (aliases zeta, s when n = 1) on all of ℂⁿ.
    pub fn in_zeta(expr: Expr, n: usize, growth: GrowthCertificate) -> Result<Self> {
        Self::from_expr(expr, zeta_vars(n), WedgeDescriptor::full(n), growth)
    }

    pub fn parse_zeta(text: &str, n: usize) -> Result<Self> {
        Self::in_zeta(super::parse(text)?, n, GrowthCertificate::bounded())
    }

    pub fn numeric(f: Arc<dyn NumericFn>, domain: WedgeDescriptor, growth: GrowthCertificate) -> Self {
        AnalyticFunction { body: Body::Numeric(f), domain, growth }
    }

    /// Wraps a closure of ζ as a function on all of ℂⁿ.
    pub fn closure<F>(n: usize, label: &str, f: F) -> Self
    where
        F: Fn(&[C64]) -> C64 + Send + Sync + 'static,
    {
        Self::numeric(
            Arc::new(ClosureFn { dim: n, label: label.to_string(), f: Arc::new(f) }),
            WedgeDescriptor::full(n),
            GrowthCertificate::bounded(),
        )
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expr { expr, .. } => Some(expr),
            Body::Numeric(_) => None,
        }
    }

    #[inline]
    pub fn eval(&self, z: &[C64]) -> C64 {
        match &self.body {
            Body::Expr { compiled, .. } => compiled.eval(z),
            Body::Numeric(f) => f.eval(z),
        }
    }

    #[inline]
    pub fn eval1(&self, z: C64) -> C64 {
        self.eval(&[z])
    }

    pub fn with_domain(mut self, domain: WedgeDescriptor) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_growth(mut self, growth: GrowthCertificate) -> Self {
        self.growth = growth;
        self
    }

    /// ∂F/∂z_k.
    pub fn diff(&self, k: usize) -> Result<Self> {
        match &self.body {
            Body::Expr { expr, vars, .. } => {
                let d = expr.diff(&vars[k]);
                let compiled = Arc::new(Compiled::new(&d, vars)?);
                Ok(AnalyticFunction {
                    body: Body::Expr { expr: d, vars: vars.clone(), compiled },
                    domain: self.domain.clone(),
                    growth: self.growth.clone(),
                })
            }
            Body::Numeric(f) => {
                let d = f
                    .derivative(k)
                    .ok_or_else(|| Error::Unsupported(format!("no derivative available for {f:?}")))?;
                Ok(AnalyticFunction::numeric(d, self.domain.clone(), self.growth.clone()))
            }
        }
    }

    /// c · z_k · F.
    pub fn mul_coord(&self, k: usize, c: C64) -> Self {
        match &self.body {
            Body::Expr { expr, vars, .. } => {
                let e = Expr::Mul(
                    Box::new(Expr::Mul(Box::new(Expr::constant(c)), Box::new(Expr::Var(vars[k].clone())))),
                    Box::new(expr.clone()),
                );
                let compiled = Arc::new(Compiled::new(&e, vars).expect("same variables"));
                AnalyticFunction {
                    body: Body::Expr { expr: e, vars: vars.clone(), compiled },
                    domain: self.domain.clone(),
                    growth: self.growth.clone(),
                }
            }
            Body::Numeric(_) => AnalyticFunction::numeric(
                Arc::new(CoordMul { inner: self.clone(), k, c }),
                self.domain.clone(),
                self.growth.clone(),
            ),
        }
    }

    /// F(z') · G(z'') on the concatenated variables.
    pub fn tensor(&self, other: &AnalyticFunction) -> Result<Self> {
        let n1 = self.dim();
        let n = n1 + other.dim();
        let kind = match (&self.domain.kind, &other.domain.kind) {
            (WedgeKind::Orthant(a), WedgeKind::Orthant(b)) => WedgeKind::Orthant(a.iter().chain(b).copied().collect()),
            _ => return Err(Error::Unsupported("tensor products of non-orthant wedges".into())),
        };
        let domain = WedgeDescriptor { dim: n, kind, base: None };
        let growth = GrowthCertificate::new(
            self.growth.h_type + other.growth.h_type,
            self.growth.c * other.growth.c,
        );
        if let (Body::Expr { expr: e1, vars: v1, .. }, Body::Expr { expr: e2, vars: v2, .. }) = (&self.body, &other.body) {
            let names: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
            if v1.iter().chain(v2).all(|v| v.starts_with('z') && !v.starts_with("zeta")) {
                let a = e1.rename(&|s| v1.iter().position(|v| v == s).map(|i| names[i].clone()));
                let b = e2.rename(&|s| v2.iter().position(|v| v == s).map(|i| names[n1 + i].clone()));
                return Self::from_expr(Expr::Mul(Box::new(a), Box::new(b)), names, domain, growth);
            }
        }
        Ok(AnalyticFunction::numeric(Arc::new(Tensor { a: self.clone(), b: other.clone() }), domain, growth))
    }

    /// JSON description of the body.
    pub fn describe(&self) -> serde_json::Value {
        match &self.body {
            Body::Expr { expr, .. } => serde_json::Value::String(expr.to_string()),
            Body::Numeric(f) => f.describe(),
        }
    }
}

struct ClosureFn {
    dim: usize,
    label: String,
    f: Arc<dyn Fn(&[C64]) -> C64 + Send + Sync>,
}

impl fmt::Debug for ClosureFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Closure({})", self.label)
    }
}

impl NumericFn for ClosureFn {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[C64]) -> C64 {
        (self.f)(z)
    }
    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "kind": "closure", "label": self.label })
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[derive(Debug)]
struct CoordMul {
    inner: AnalyticFunction,
    k: usize,
    c: C64,
}

impl NumericFn for CoordMul {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, z: &[C64]) -> C64 {
        self.c * z[self.k] * self.inner.eval(z)
    }
    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "kind": "coord_mul", "k": self.k, "c": [self.c.re, self.c.im], "inner": self.inner.describe() })
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[derive(Debug)]
struct Tensor {
    a: AnalyticFunction,
    b: AnalyticFunction,
}

impl NumericFn for Tensor {
    fn dim(&self) -> usize {
        self.a.dim() + self.b.dim()
    }
    fn eval(&self, z: &[C64]) -> C64 {
        let n1 = self.a.dim();
        self.a.eval(&z[..n1]) * self.b.eval(&z[n1..])
    }
    fn derivative(&self, k: usize) -> Option<Arc<dyn NumericFn>> {
        let n1 = self.a.dim();
        let (a, b) = if k < n1 {
            (self.a.diff(k).ok()?, self.b.clone())
        } else {
            (self.a.clone(), self.b.diff(k - n1).ok()?)
        };
        Some(Arc::new(Tensor { a, b }))
    }
    fn describe(&self) -> serde_json::Value {
        serde_json::json!({ "kind": "tensor", "factors": [self.a.describe(), self.b.describe()] })
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    /// (sample index, ratio |f| / (C e^{H|z|})) for every ratio above 1.
    pub violations: Vec<(usize, f64)>,
    pub worst_ratio: f64,
    pub samples: usize,
}

fn znorm(z: &[C64]) -> f64 {
    z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt()
}

/// Checks |f(z)| ≤ C e^{H|z|} at each sample.
pub fn check_growth(f: &AnalyticFunction, samples: &[Vec<C64>]) -> Result<GrowthReport> {
    let mut violations = vec![];
    let mut worst = 0.0f64;
    for (i, z) in samples.iter().enumerate() {
        if !f.domain.contains(z) {
            return Err(Error::Domain(format!("sample {i} lies outside the wedge {}", f.domain.label())));
        }
        let ratio = f.eval(z).norm() / (f.growth.c * (f.growth.h_type * znorm(z)).exp());
        let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
        worst = worst.max(ratio);
        if ratio > 1.0 {
            violations.push((i, ratio));
        }
    }
    Ok(GrowthReport { violations, worst_ratio: worst, samples: samples.len() })
}

#[derive(Debug, Clone, Serialize)]
pub struct InfraSample {
    pub ray: usize,
    pub t: f64,
    /// e^{h(tζ₀)} |f(tζ₀)| / (C e^{ε t |ζ₀|}).
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfraReport {
    pub samples: Vec<InfraSample>,
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Checks e^{h(ζ)} |f(ζ)| ≤ C e^{ε|ζ|} along rays ζ = tζ₀. Here `h` is the
/// homogeneous support function, h(ζ) = |ζ| h(π(ζ)).
pub fn check_infra_exponential(
    f: &AnalyticFunction,
    h: &dyn Fn(&[C64]) -> ExtReal,
    eps: f64,
    rays: &[Vec<C64>],
    ts: &[f64],
) -> Result<InfraReport> {
    let mut samples = vec![];
    let mut worst = 0.0f64;
    for (r, z0) in rays.iter().enumerate() {
        for &t in ts {
            let z: Vec<C64> = z0.iter().map(|w| w * t).collect();
            if !f.domain.contains(&z) {
                return Err(Error::Domain(format!("ray {r} at t = {t} leaves the domain")));
            }
            let fz = f.eval(&z).norm();
            let weight = match h(&z) {
                ExtReal::NegInf => 0.0,
                ExtReal::PosInf => {
                    if fz == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                }
                ExtReal::Finite(v) => v.exp(),
            };
            let mut ratio = if weight == 0.0 { 0.0 } else { weight * fz / (f.growth.c * (eps * znorm(&z)).exp()) };
            if ratio.is_nan() {
                ratio = f64::INFINITY;
            }
            worst = worst.max(ratio);
            samples.push(InfraSample { ray: r, t, ratio });
        }
    }
    Ok(InfraReport { passed: worst <= 1.0, samples, worst_ratio: worst })
}
