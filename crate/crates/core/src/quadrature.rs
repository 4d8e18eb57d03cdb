//! Adaptive Gauss–Kronrod (G7K15) quadrature on real parameter intervals,
//! finite or semi-infinite, for complex-valued integrands.

use num_complex::Complex64 as C64;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Bisection depth limit; panels also stop splitting when their width
/// nears the floating-point spacing at their endpoints.
pub const MAX_DEPTH: u32 = 64;
const MAX_INTERVALS: usize = 20_000;
const MAX_TAIL_CHUNKS: usize = 80;

/// Requested accuracy: the run stops when the error estimate is below
/// max(abs, rel·|value|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
}

impl Tol {
    pub fn abs(abs: f64) -> Self {
        Tol { abs, rel: 0.0 }
    }

    pub fn new(abs: f64, rel: f64) -> Self {
        Tol { abs, rel }
    }

    pub fn scaled(self, f: f64) -> Self {
        Tol { abs: self.abs * f, rel: self.rel * f }
    }

    pub fn target(self, value: f64) -> f64 {
        self.abs.max(self.rel * value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult { value: C64::new(0.0, 0.0), error_estimate: 0.0, evaluations: 0 }
    }

    pub fn scale(self, c: C64) -> Self {
        QuadratureResult { value: self.value * c, error_estimate: self.error_estimate * c.norm(), evaluations: self.evaluations }
    }

    pub fn combine(self, other: QuadratureResult) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// Values the engine can integrate. Adaptivity is driven by `norm`.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        C64::norm(*self)
    }
}

/// A value with a carried nonnegative side quantity (an inner error bound).
#[derive(Debug, Clone, Copy)]
pub struct Aug {
    pub v: C64,
    pub e: f64,
}

impl Add for Aug {
    type Output = Aug;
    fn add(self, o: Aug) -> Aug {
        Aug { v: self.v + o.v, e: self.e + o.e }
    }
}

impl Sub for Aug {
    type Output = Aug;
    fn sub(self, o: Aug) -> Aug {
        // The side quantity only accumulates; differences are taken on values.
        Aug { v: self.v - o.v, e: self.e + o.e }
    }
}

impl Mul<f64> for Aug {
    type Output = Aug;
    fn mul(self, s: f64) -> Aug {
        Aug { v: self.v * s, e: self.e * s.abs() }
    }
}

impl QuadValue for Aug {
    fn zero() -> Self {
        Aug { v: C64::new(0.0, 0.0), e: 0.0 }
    }
    fn norm(&self) -> f64 {
        self.v.norm()
    }
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    resabs: f64,
    depth: u32,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err).then(o.a.total_cmp(&self.a))
    }
}

/// One G7K15 application: (Kronrod value, error estimate, ∫|f|).
pub fn gk15<V: QuadValue>(f: &dyn Fn(f64) -> V, a: f64, b: f64) -> (V, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut fv1 = [V::zero(); 7];
    let mut fv2 = [V::zero(); 7];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let h = h.abs();
    let result = resk * h;
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut err = ((resk - resg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !err.is_finite() || !result.norm().is_finite() {
        err = f64::INFINITY;
    }
    (result, err, resabs)
}

/// Output of a finite-interval run.
#[derive(Debug, Clone, Copy)]
pub struct Run<V> {
    pub value: V,
    pub err: f64,
    pub resabs: f64,
    pub evals: usize,
}

/// Globally adaptive bisection on [a, b].
pub fn adaptive<V: QuadValue>(f: &dyn Fn(f64) -> V, a: f64, b: f64, tol: Tol) -> Result<Run<V>> {
    if a == b {
        return Ok(Run { value: V::zero(), err: 0.0, resabs: 0.0, evals: 0 });
    }
    let (v, e, r) = gk15(f, a, b);
    let mut evals = 15;
    let mut heap = BinaryHeap::new();
    let mut total = v;
    let mut err_sum = e;
    let mut abs_sum = r;
    let mut frozen_err = 0.0;
    let mut frozen = V::zero();
    let mut frozen_abs = 0.0;
    heap.push(Panel { a, b, value: v, err: e, resabs: r, depth: 0 });
    loop {
        let target = tol.target(total.norm()).max(200.0 * f64::EPSILON * abs_sum);
        if err_sum <= target {
            break;
        }
        let Some(p) = heap.pop() else {
            return Err(Error::NoConvergence(format!(
                "error {err_sum:.3e} above target {target:.3e} with every panel at depth {MAX_DEPTH}"
            )));
        };
        if !p.err.is_finite() && (p.depth >= MAX_DEPTH || p.b - p.a <= 64.0 * f64::EPSILON * p.a.abs().max(p.b.abs())) {
            return Err(Error::NoConvergence("non-finite integrand values".into()));
        }
        if p.depth >= MAX_DEPTH || p.b - p.a <= 64.0 * f64::EPSILON * p.a.abs().max(p.b.abs()) {
            frozen = frozen + p.value;
            frozen_err += p.err;
            frozen_abs += p.resabs;
            if frozen_err > target {
                return Err(Error::NoConvergence(format!(
                    "error {frozen_err:.3e} on unsplittable panels near {} exceeds target {target:.3e}",
                    p.a
                )));
            }
            continue;
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence(format!("interval budget exhausted, error {err_sum:.3e}")));
        }
        let m = 0.5 * (p.a + p.b);
        let (v1, e1, r1) = gk15(f, p.a, m);
        let (v2, e2, r2) = gk15(f, m, p.b);
        evals += 30;
        total = total - p.value + v1 + v2;
        err_sum += e1 + e2 - p.err;
        abs_sum += r1 + r2 - p.resabs;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1, resabs: r1, depth: p.depth + 1 });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2, resabs: r2, depth: p.depth + 1 });
        if heap.len() % 64 == 0 {
            err_sum = frozen_err + heap.iter().map(|q| q.err).sum::<f64>();
        }
    }
    // Final sums in a fixed order, independent of heap history.
    let mut panels: Vec<&Panel<V>> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut total = frozen;
    let mut err_sum = frozen_err;
    let mut abs_sum = frozen_abs;
    for q in panels {
        total = total + q.value;
        err_sum += q.err;
        abs_sum += q.resabs;
    }
    Ok(Run { value: total, err: err_sum, resabs: abs_sum, evals })
}

/// Integral over [t0, ∞) of an integrand bounded by C e^{−σ(t − t0)}.
pub fn tail<V: QuadValue>(f: &dyn Fn(f64) -> V, t0: f64, damping: Option<f64>, tol: Tol) -> Result<Run<V>> {
    let sigma = match damping {
        Some(s) if s > 0.0 && s.is_finite() => s,
        _ => return Err(Error::MissingDampingCertificate),
    };
    let len0 = (1.0 / sigma).clamp(0.25, 4.0);
    let mut total = V::zero();
    let mut err = 0.0;
    let mut resabs = 0.0;
    let mut evals = 0;
    let mut s = t0;
    let mut len = len0;
    for k in 0..MAX_TAIL_CHUNKS {
        let budget = tol.target(total.norm()).max(tol.abs) / (2.0f64).powi(k as i32 + 1);
        let chunk_tol = Tol { abs: budget, rel: tol.rel * 0.5 };
        let run = adaptive(f, s, s + len, chunk_tol)?;
        total = total + run.value;
        err += run.err;
        resabs += run.resabs;
        evals += run.evals;
        s += len;
        len *= 2.0;
        let stop = 0.1 * tol.target(total.norm()).max(f64::MIN_POSITIVE);
        let edge = f(s).norm();
        evals += 1;
        let remainder = edge / sigma;
        if run.resabs < stop && remainder < stop {
            err += remainder;
            return Ok(Run { value: total, err, resabs, evals });
        }
    }
    Err(Error::NoConvergence(format!("tail not exhausted by t = {s:.3e}")))
}

/// Integration range in a real parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub t0: f64,
    /// `None` means +∞.
    pub t1: Option<f64>,
    pub damping: Option<f64>,
}

impl Range {
    pub fn finite(t0: f64, t1: f64) -> Self {
        Range { t0, t1: Some(t1), damping: None }
    }

    pub fn tail(t0: f64, damping: f64) -> Self {
        Range { t0, t1: None, damping: Some(damping) }
    }
}

pub fn integrate_range<V: QuadValue>(f: &dyn Fn(f64) -> V, r: Range, tol: Tol) -> Result<Run<V>> {
    match r.t1 {
        Some(t1) => adaptive(f, r.t0, t1, tol),
        None => tail(f, r.t0, r.damping, tol),
    }
}

/// ∫ f(t) dt over a range, as a QuadratureResult.
pub fn integrate(f: &dyn Fn(f64) -> C64, r: Range, tol: Tol) -> Result<QuadratureResult> {
    let run = integrate_range(f, r, tol)?;
    Ok(QuadratureResult { value: run.value, error_estimate: run.err, evaluations: run.evals })
}

/// ∫∫ g(t, s) ds dt with the inner range depending on t. The combined error
/// adds the integrated inner error estimates to the outer estimate.
pub fn iterated(
    g: &dyn Fn(f64, f64) -> C64,
    outer: Range,
    inner: &dyn Fn(f64) -> Range,
    tol: Tol,
) -> Result<QuadratureResult> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let evals = RefCell::new(0usize);
    let inner_tol = tol.scaled(0.25);
    let h = |t: f64| -> Aug {
        if failure.borrow().is_some() {
            return Aug::zero();
        }
        let gi = |s: f64| g(t, s);
        match integrate_range(&gi, inner(t), inner_tol) {
            Ok(run) => {
                *evals.borrow_mut() += run.evals;
                Aug { v: run.value, e: run.err }
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                Aug::zero()
            }
        }
    };
    let run = integrate_range(&h, outer, tol.scaled(0.5))?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(QuadratureResult { value: run.value.v, error_estimate: run.err + run.value.e, evaluations: evals.into_inner() })
}
