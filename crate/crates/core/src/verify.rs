//! Self-checks run by `hyperlap verify` and the acceptance target. Each
//! suite compares the library against closed forms, direct real-line
//! integrals or exact algebra and returns one [`Check`] per comparison.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

use crate::chains::{make_inverse_chain, InverseChain, Profile};
use crate::error::{Error, Result};
use crate::expr::AnalyticFunction;
use crate::geometry::{fan, ClosedConicSet, Direction};
use crate::hyperfun::{pairing, support_test, Cutoff, Hyperfunction, TestDensity};
use crate::laplace::{
    derivative_rules_check, forward, forward_pair, forward_with, growth_certificate, inverse, orthant_extension_check,
    reconstruct, support_estimate, ForwardOptions, TransformResult,
};
use crate::literal::parse_builtin;
use crate::opcalc::{
    char_infinity, check_solvable, koszul_d, koszul_homotopy_check, projective_distance, solve, CRat, DiffOp,
    KoszulElement, MultiPoly, SolvableOptions, SolveOptions,
};
use crate::quadrature::{integrate, Range, Tol};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value < tol` (NaN fails).
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Check {
        Check { name: name.into(), value, tol, passed: value < tol }
    }

    /// A yes/no outcome; value is 1 for yes.
    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, tol: 1.0, passed: ok }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criterion: u8,
    pub passed: bool,
    pub seconds: f64,
    pub time_limit: Option<f64>,
    pub checks: Vec<Check>,
    pub error: Option<String>,
}

pub struct Suite {
    pub name: &'static str,
    pub criterion: u8,
    pub summary: &'static str,
    pub time_limit: Option<f64>,
    run: fn() -> Result<Vec<Check>>,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "anchors", criterion: 1, summary: "transforms of delta and Y(x)e^{cx} against closed forms", time_limit: Some(5.0), run: anchors },
    Suite { name: "roundtrip", criterion: 2, summary: "forward of inverse and inverse of forward are the identity", time_limit: Some(60.0), run: roundtrip },
    Suite { name: "independence", criterion: 3, summary: "results do not depend on loop standoff or chain profile", time_limit: None, run: independence },
    Suite { name: "stokes", criterion: 3, summary: "cutoff-pair transform agrees with the contour transform", time_limit: None, run: stokes },
    Suite { name: "derivative", criterion: 4, summary: "d/dzeta L(u) = L(-x u) and zeta L(u) = L(u')", time_limit: None, run: derivative },
    Suite { name: "growth", criterion: 5, summary: "transform growth along rays in HPC", time_limit: None, run: growth },
    Suite { name: "support", criterion: 6, summary: "inverse transforms vanish off the predicted support", time_limit: None, run: support },
    Suite { name: "reconstruct", criterion: 7, summary: "Cauchy-kernel reconstruction round trip and R independence", time_limit: None, run: reconstruction },
    Suite { name: "orthant", criterion: 8, summary: "two-variable orthant pieces continue to the same function", time_limit: None, run: orthant },
    Suite { name: "opcalc", criterion: 9, summary: "Koszul identities, solve residuals, characteristic scan, solvability", time_limit: None, run: opcalc },
    Suite { name: "quadrature", criterion: 10, summary: "quadrature error estimates bound refinement deltas", time_limit: None, run: quadrature },
];

pub fn find_suite(name: &str) -> Result<&'static Suite> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        Error::Invalid(format!("unknown suite `{name}`; known: {}", names.join(", ")))
    })
}

pub fn run(suite: &Suite) -> SuiteReport {
    let t0 = Instant::now();
    let out = (suite.run)();
    let seconds = t0.elapsed().as_secs_f64();
    let in_time = suite.time_limit.map_or(true, |l| seconds < l);
    let (checks, error) = match out {
        Ok(c) => (c, None),
        Err(e) => (vec![], Some(e.to_string())),
    };
    let passed = error.is_none() && !checks.is_empty() && checks.iter().all(|c| c.passed) && in_time;
    SuiteReport {
        suite: suite.name.to_string(),
        criterion: suite.criterion,
        passed,
        seconds,
        time_limit: suite.time_limit,
        checks,
        error,
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn u(text: &str) -> Result<Hyperfunction> {
    parse_builtin(text)
}

fn ray(a: f64) -> Result<ClosedConicSet> {
    ClosedConicSet::from_interval_str(&format!("[{a},inf)"))
}

fn chain1(c0: f64, c1: f64, p: f64) -> Result<InverseChain> {
    make_inverse_chain(&[1.0], Profile::new(c0, c1, p)?, &[], 0.0)
}

fn zeta_fn(text: &str, n: usize) -> Result<AnalyticFunction> {
    AnalyticFunction::parse_zeta(text, n)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

/// ∫ φ(x) g(x) dx over [lo, hi] on the real line.
fn real_pairing(phi: &TestDensity, g: &dyn Fn(f64) -> C64, lo: f64, hi: f64) -> Result<C64> {
    Ok(integrate(&|x: f64| phi.eval1(c(x, 0.0)) * g(x), Range::finite(lo, hi), Tol::abs(1e-14))?.value)
}

fn anchors() -> Result<Vec<Check>> {
    let mut checks = vec![];
    let shifts = [-1.0, 0.0, 0.5, 1.0, 2.0];
    let mut worst = 0.0f64;
    for j in 0..10 {
        let a = shifts[j % 5];
        let zeta = c(-1.0 + 0.5 * j as f64, -2.0 + 0.45 * j as f64);
        let v = forward(&Hyperfunction::delta(&[a])?, &[zeta])?;
        worst = worst.max(rel(v, (-a * zeta).exp()));
    }
    checks.push(Check::below("delta(a): max relative error vs e^{-a zeta}", worst, 1e-6));
    let cs = [c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.3), c(-1.0, 0.0), c(0.0, 2.0)];
    let (mut worst, mut oracle_gap) = (0.0f64, 0.0f64);
    for j in 0..10 {
        let cc = cs[j % 5];
        let zeta = c(cc.re.abs() + 0.4 + 0.3 * j as f64, cc.im + 1.5 - 0.35 * j as f64);
        let v = forward(&Hyperfunction::heaviside_exp(cc, 0.0)?, &[zeta])?;
        let closed = 1.0 / (zeta - cc);
        let direct = integrate(&|x: f64| ((cc - zeta) * x).exp(), Range::tail(0.0, (zeta - cc).re), Tol::abs(1e-15))?.value;
        worst = worst.max(rel(v, closed)).max(rel(v, direct));
        oracle_gap = oracle_gap.max(rel(direct, closed));
    }
    checks.push(Check::below("heaviside_exp(c,0): max relative error vs 1/(zeta-c) and the real integral", worst, 1e-6));
    checks.push(Check::below("residue and real-integral oracles agree", oracle_gap, 1e-10));
    Ok(checks)
}

fn zeta_points() -> Vec<C64> {
    (0..10).map(|j| c(4.5 + 0.25 * j as f64, -2.0 + 0.4 * j as f64)).collect()
}

fn roundtrip() -> Result<Vec<Check>> {
    let mut checks = vec![];
    let ch = chain1(1.5, 1.0, 0.5)?;
    let corpus = [("1/zeta", 0.0), ("1/zeta^2", 0.0), ("1/(zeta - 1)", 0.0), ("exp(-zeta)/zeta", 1.0), ("exp(-zeta)", 1.0)];
    for (text, a) in corpus {
        let f = zeta_fn(text, 1)?;
        let v = inverse(&f, &ray(a)?, &ch)?;
        let d = zeta_points()
            .par_iter()
            .map(|z| forward(&v, &[*z]).map(|w| (w - f.eval1(*z)).norm()))
            .collect::<Result<Vec<f64>>>()?;
        checks.push(Check::below(format!("L(IL f) - f for f = {text}"), max_of(d), 1e-5));
    }
    let battery = TestDensity::battery_1d();
    let ch = chain1(1.0, 1.0, 0.5)?;
    for text in ["delta(0.5)", "heaviside_exp(0.5, 0)", "diff(delta(0.5))", "diff(heaviside_exp(0.5, 0))"] {
        let src = u(text)?;
        let (a, _) = src.support.interval()?;
        let back = inverse(&TransformResult::new(&src).as_function(), &ray(a)?, &ch)?;
        let d = battery
            .par_iter()
            .map(|phi| Ok((pairing(&back, phi)? - pairing(&src, phi)?).norm()))
            .collect::<Result<Vec<f64>>>()?;
        checks.push(Check::below(format!("IL(L u) - u on the battery for u = {text}"), max_of(d), 1e-5));
    }
    Ok(checks)
}

fn independence() -> Result<Vec<Check>> {
    let mut checks = vec![];
    let a = ForwardOptions { eps: 0.2, ..Default::default() };
    let b = ForwardOptions { eps: 0.45, ..Default::default() };
    let zs = [c(1.5, 0.0), c(2.0, 1.5), c(1.2, -0.7), c(3.0, 4.0), c(2.5, -3.0)];
    for text in ["delta(0.5)", "heaviside_exp(0.3, 0.5)", "diff(delta(0))", "heaviside_exp(0.5 + 0.5*i, -1)"] {
        let v = u(text)?;
        let mut d = vec![];
        for z in zs {
            d.push((forward_with(&v, &[z], &a)?.value - forward_with(&v, &[z], &b)?.value).norm());
        }
        checks.push(Check::below(format!("forward, loop standoff 0.2 vs 0.45, u = {text}"), max_of(d), 1e-6));
    }
    let battery = TestDensity::battery_1d();
    let ca = chain1(0.5, 1.0, 0.5)?;
    let cb = chain1(1.0, 1.0, 0.7)?;
    for (text, k) in [("1/zeta^2", 0.0), ("exp(-zeta)/zeta^2", 1.0), ("1/(zeta + 1)", 0.0)] {
        let f = zeta_fn(text, 1)?;
        let va = inverse(&f, &ray(k)?, &ca)?;
        let vb = inverse(&f, &ray(k)?, &cb)?;
        let d = battery
            .par_iter()
            .step_by(2)
            .map(|phi| Ok((pairing(&va, phi)? - pairing(&vb, phi)?).norm()))
            .collect::<Result<Vec<f64>>>()?;
        checks.push(Check::below(format!("inverse, two profiles, f = {text}"), max_of(d), 1e-6));
    }
    Ok(checks)
}

fn stokes() -> Result<Vec<Check>> {
    let mut checks = vec![];
    let tol = Tol::abs(1e-10);
    let zs = [c(2.0, 0.0), c(1.5, 1.0), c(3.0, -2.0)];
    for text in ["delta(0)", "heaviside(0)", "heaviside_exp(0.5, 0.2) + delta(0.7)"] {
        let v = u(text)?;
        let pair = v.to_pair(Cutoff::around(&v)?)?;
        let mut d = vec![];
        for z in zs {
            d.push((forward(&v, &[z])? - forward_pair(&pair, z, tol)?.value).norm());
        }
        checks.push(Check::below(format!("pair vs contour transform, u = {text}"), max_of(d), 1e-6));
    }
    let h = u("heaviside(0)")?;
    let wide = forward_pair(&h.to_pair(Cutoff::around(&h)?)?, c(2.0, 0.0), tol)?.value;
    let narrow = forward_pair(&h.to_pair(Cutoff::new(0.25, 0.5, (0.0, f64::INFINITY))?)?, c(2.0, 0.0), tol)?.value;
    checks.push(Check::below("pair transform, two cutoffs", (wide - narrow).norm(), 1e-6));
    Ok(checks)
}

fn derivative() -> Result<Vec<Check>> {
    let opts = ForwardOptions::default();
    let zs: Vec<Vec<C64>> = (0..4).map(|j| vec![c(1.0 + 0.5 * j as f64, 0.4 * j as f64)]).collect();
    let mut checks = vec![];
    for text in ["heaviside(0)", "delta(0)", "delta(1)", "heaviside_exp(0.3 + 0.2*i, 0.5)", "diff(delta(-0.5))"] {
        let r = derivative_rules_check(&u(text)?, 0, &zs, &opts)?;
        checks.push(Check::below(format!("d/dzeta rule, u = {text}"), r.d_zeta, 1e-6));
        checks.push(Check::below(format!("multiplication rule, u = {text}"), r.multiply, 1e-6));
    }
    Ok(checks)
}

fn growth() -> Result<Vec<Check>> {
    let rays: Vec<Vec<C64>> = [-0.8f64, -0.4, 0.0, 0.4, 0.8].iter().map(|t| vec![C64::from_polar(1.0, *t)]).collect();
    // |L(u)| <= C e^{eps t} is a statement for large t: t e^{-0.1 t} peaks at 10.
    let ts: Vec<f64> = (1..=48).map(|j| 0.5 * j as f64).collect();
    let mut checks = vec![];
    for text in ["delta(1)", "heaviside(0)", "heaviside_exp(2, 0)", "diff(delta(0))", "heaviside_exp(0.5*i, 1)"] {
        let r = growth_certificate(&TransformResult::new(&u(text)?), &rays, &ts, 0.1)?;
        checks.push(Check::holds(format!("5 rays, eps = 0.1, u = {text}"), r.passed));
    }
    Ok(checks)
}

fn support() -> Result<Vec<Check>> {
    let mut checks = vec![];
    let f = zeta_fn("exp(-zeta)/zeta", 1)?;
    let fam = support_estimate(&f, &|_| 1.0, &[Direction::new(&[1.0])?])?;
    checks.push(Check::holds("support estimate of exp(-zeta)/zeta is [1, inf)", fam.contains(&[1.0]) && !fam.contains(&[0.99])));
    let v = inverse(&f, &ray(1.0)?, &chain1(1.0, 1.0, 0.5)?)?;
    for (lo, hi) in [(-6.0, -3.0), (-3.0, -2.0), (-1.0, 0.0), (0.0, 0.5), (0.4, 0.9)] {
        let r = support_test(&v, &[lo], &[hi], Some(1e-7))?;
        checks.push(Check::below(format!("probe box [{lo}, {hi}]"), r.max_abs, 1e-7));
    }
    let r = support_test(&v, &[1.5], &[2.5], Some(1e-7))?;
    checks.push(Check::holds("probe box [1.5, 2.5] inside the support is detected", !r.passed));
    let f2 = zeta_fn("exp(-(zeta1 + zeta2))/(zeta1*zeta2)", 2)?;
    let fam = support_estimate(&f2, &|d: &Direction| d.unit[0] + d.unit[1], &fan(0.0, PI / 2.0, 8))?;
    checks.push(Check::holds(
        "support estimate of the 2D product is [1, inf)^2",
        fam.contains(&[1.0, 1.0]) && fam.contains(&[3.0, 1.5]) && !fam.contains(&[0.9, 1.0]),
    ));
    let ch = InverseChain { xi0: vec![0.5f64.sqrt(); 2], psi: Profile::new(1.0, 1.0, 0.5)?, anchor: None };
    let v2 = inverse(&f2, &ClosedConicSet::shifted_orthant(vec![1.0, 1.0]), &ch)?;
    for (lo, hi) in [([-1.0, -1.0], [0.0, 0.0]), ([0.0, 1.5], [0.8, 2.5]), ([1.5, -0.5], [2.5, 0.5]), ([-2.0, 2.0], [-1.0, 3.0])] {
        let r = support_test(&v2, &lo, &hi, Some(1e-7))?;
        checks.push(Check::below(format!("2D probe box {lo:?}..{hi:?}"), r.max_abs, 1e-7));
    }
    Ok(checks)
}

fn reconstruction() -> Result<Vec<Check>> {
    let tol = Tol::new(1e-11, 1e-10);
    let mut checks = vec![];
    let battery = TestDensity::battery_1d();
    for text in ["delta(1)", "heaviside_exp(0.5, 0)", "diff(delta(0.5))", "heaviside(0.2) + 2*delta(1.5)"] {
        let v = u(text)?;
        let rec = reconstruct(&v, None, tol)?;
        let d = battery
            .par_iter()
            .step_by(2)
            .map(|phi| {
                let phi = phi.clone().with_push_in(0.3);
                Ok((pairing(&rec.hyperfunction, &phi)? - pairing(&v, &phi)?).norm())
            })
            .collect::<Result<Vec<f64>>>()?;
        checks.push(Check::below(format!("reconstruction round trip, u = {text}"), max_of(d), 1e-5));
    }
    for text in ["heaviside_exp(0.5, 0)", "delta(1)"] {
        let v = u(text)?;
        let r1 = reconstruct(&v, Some(4.0), tol)?;
        let r2 = reconstruct(&v, Some(8.0), tol)?;
        let phi = TestDensity::gaussian(0.5, 2.0);
        let d = (pairing(&r1.hyperfunction, &phi)? - pairing(&r2.hyperfunction, &phi)?).norm();
        checks.push(Check::below(format!("R = 4 vs R = 8, u = {text}"), d, 1e-6));
    }
    Ok(checks)
}

fn orthant() -> Result<Vec<Check>> {
    let ch = InverseChain { xi0: vec![0.5f64.sqrt(); 2], psi: Profile::new(1.0, 1.0, 0.5)?, anchor: None };
    let mut pts = vec![];
    for re in [-1.5, -0.7] {
        for im in [-0.4, 0.3] {
            pts.push([c(re, im), c(-1.0, -im / 2.0)]);
        }
    }
    let mut checks = vec![];
    for text in ["exp(-(zeta1 + zeta2))/(zeta1*zeta2)", "1/(zeta1*zeta2*(zeta1 + zeta2))"] {
        let f = zeta_fn(text, 2)?;
        let r = orthant_extension_check(&f, &ch, &pts, Tol::new(1e-11, 1e-9))?;
        checks.push(Check::below(format!("four pieces agree, f = {text}"), r.max_pairwise, 1e-6));
        checks.push(Check::below(format!("pieces match the real-chain integral, f = {text}"), r.max_vs_real, 1e-6));
        checks.push(Check::below(format!("chain deformation invariance, f = {text}"), r.max_deformation, 1e-6));
    }
    Ok(checks)
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> MultiPoly {
    let mut q = MultiPoly::zero(n);
    for _ in 0..rng.gen_range(1..5) {
        let mut e = vec![0u32; n];
        let mut left = rng.gen_range(0..=max_deg);
        for x in e.iter_mut() {
            let k = rng.gen_range(0..=left);
            *x = k;
            left -= k;
        }
        let c = CRat::frac(rng.gen_range(-5..=5), rng.gen_range(1..4));
        let c = if rng.gen_bool(0.3) { &c * &CRat::i() } else { c };
        q.add_term(e, c);
    }
    q
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, ell: usize, degree: usize, max_deg: u32) -> Result<KoszulElement> {
    let mut e = KoszulElement::zero(n, ell, degree);
    for _ in 0..3 {
        let mut idx: Vec<usize> = (0..ell).collect();
        for i in (1..ell).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        idx.truncate(degree);
        e = e.add(&KoszulElement::basis(ell, &idx, random_poly(rng, n, max_deg))?)?;
    }
    Ok(e)
}

fn opcalc() -> Result<Vec<Check>> {
    let mut checks = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nonzero = 0;
    for _ in 0..50 {
        let ell = rng.gen_range(2..=4);
        let polys: Vec<MultiPoly> = (0..ell).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let deg = rng.gen_range(0..=ell - 2);
        let e = random_element(&mut rng, 2, ell, deg, 6)?;
        if !koszul_d(&e, &polys)?.is_zero() {
            nonzero += 1;
        }
        if !koszul_d(&koszul_d(&e, &polys)?, &polys)?.is_zero() {
            checks.push(Check::holds(format!("d(d e) = 0 for e = {e}"), false));
        }
    }
    checks.push(Check::holds(format!("d(d e) = 0 exactly on 50 random elements ({nonzero} with d e != 0)"), true));
    let mut holds = 0;
    for _ in 0..10 {
        let ell = rng.gen_range(1..=3);
        let polys: Vec<MultiPoly> = (0..ell).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let a: Vec<MultiPoly> = (0..ell).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let h = polys.iter().zip(&a).fold(MultiPoly::zero(2), |acc, (x, y)| acc.add(&x.mul(y)));
        let els = (0..5).map(|_| {
            let d = rng.gen_range(0..=ell);
            random_element(&mut rng, 2, ell, d, 6)
        });
        let els: Vec<KoszulElement> = els.collect::<Result<_>>()?;
        let r = koszul_homotopy_check(&polys, &a, &h, &els)?;
        if r.holds {
            holds += r.elements;
        }
    }
    checks.push(Check::below("homotopy s d + d s = h fails on (of 50 random elements)", (50 - holds) as f64, 0.5));

    let k = ray(0.0)?;
    let f = u("delta(0)")?;
    for (op, g) in [("D - 1", (|x: f64| x.exp()) as fn(f64) -> f64), ("D^2 - 1", |x: f64| x.sinh())] {
        let sol = solve(&DiffOp::parse(op, Some(1))?, &f, &k, &SolveOptions::default())?;
        checks.push(Check::below(format!("solve ({op})u = delta: max residual pairing"), sol.max_residual(), 1e-4));
        let d = TestDensity::battery_1d()
            .par_iter()
            .step_by(3)
            .map(|phi| Ok((pairing(&sol.u, phi)? - real_pairing(phi, &|x| c(g(x), 0.0), 0.0, 30.0)?).norm()))
            .collect::<Result<Vec<f64>>>()?;
        checks.push(Check::below(format!("solve ({op})u = delta vs closed-form pairings"), max_of(d), 1e-4));
    }

    let mesh = 0.02;
    let lap = DiffOp::parse("D1^2 + D2^2", None)?;
    let r = char_infinity(&[lap.clone()], mesh, None)?;
    let s = 0.5f64.sqrt();
    let lines = [vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]];
    let flagged: Vec<_> = r.flagged().collect();
    let stray = flagged.iter().map(|p| lines.iter().map(|l| projective_distance(l, &p.zeta)).fold(f64::INFINITY, f64::min));
    checks.push(Check::below("Laplacian: largest distance of a flagged direction from zeta2 = +-i zeta1", max_of(stray), mesh + 1e-12));
    let cover = lines.iter().map(|l| flagged.iter().map(|p| projective_distance(l, &p.zeta)).fold(f64::INFINITY, f64::min));
    checks.push(Check::below("Laplacian: both lines zeta2 = +-i zeta1 flagged within the mesh", max_of(cover), mesh + 1e-12));

    let o = SolvableOptions::default();
    let quad = ClosedConicSet::shifted_orthant(vec![0.0, 0.0]);
    let r = check_solvable(&DiffOp::parse("D - 1", None)?, &k, &o)?;
    checks.push(Check::holds("D - 1 on [0, inf) is solvable (symbol zeta never vanishes)", r.solvable));
    let r = check_solvable(&DiffOp::parse("D1 D2", None)?, &quad, &o)?;
    let oracle = o.depth * (1.0 - o.depth * o.depth).sqrt();
    checks.push(Check::holds("D1 D2 on the quadrant is solvable", r.solvable));
    checks.push(Check::below("D1 D2: grid minimum vs hand value depth*sqrt(1-depth^2)", (r.min_rel - oracle).abs(), 1e-3));
    let r = check_solvable(&lap, &quad, &o)?;
    checks.push(Check::holds("Laplacian on the quadrant is not solvable", !r.solvable));
    Ok(checks)
}

/// 50 integrals in five families: damped oscillations on a half-line,
/// Lorentzian peaks, endpoint power singularities, Gaussian spikes and
/// complex oscillations with a logarithm.
fn quadrature_corpus() -> Vec<(String, Box<dyn Fn(f64) -> C64 + Send + Sync>, Range)> {
    let mut out: Vec<(String, Box<dyn Fn(f64) -> C64 + Send + Sync>, Range)> = vec![];
    for j in 0..10 {
        let (a, b) = (0.5 + 0.1 * j as f64, j as f64);
        out.push((format!("exp(-{a}x)cos({b}x) on [0,inf)"), Box::new(move |x: f64| c((-a * x).exp() * (b * x).cos(), 0.0)), Range::tail(0.0, a)));
    }
    for j in 0..10 {
        let s = 1.0 + 3.0 * j as f64;
        out.push((format!("1/(1+({s}x)^2) on [-1,2]"), Box::new(move |x: f64| c(1.0 / (1.0 + (s * x).powi(2)), 0.0)), Range::finite(-1.0, 2.0)));
    }
    for j in 0..10 {
        let p = -0.45 + 0.1 * j as f64;
        out.push((format!("x^{p} on [0,1]"), Box::new(move |x: f64| c(x.powf(p), 0.0)), Range::finite(0.0, 1.0)));
    }
    for j in 0..10 {
        let w = 10.0 * 2f64.powi(j);
        out.push((format!("exp(-{w}(x-0.3)^2) on [0,1]"), Box::new(move |x: f64| c((-w * (x - 0.3).powi(2)).exp(), 0.0)), Range::finite(0.0, 1.0)));
    }
    for j in 0..10 {
        let k = 1.0 + 2.0 * j as f64;
        out.push((format!("exp(i{k}x)log(1+x) on [0,5]"), Box::new(move |x: f64| c(0.0, k * x).exp() * (1.0 + x).ln()), Range::finite(0.0, 5.0)));
    }
    out
}

fn quadrature() -> Result<Vec<Check>> {
    let tol = Tol::new(1e-7, 1e-7);
    let fine = Tol::new(1e-9, 1e-9);
    Ok(quadrature_corpus()
        .par_iter()
        .map(|(name, f, r)| {
            let run = || -> Result<f64> {
                let coarse = integrate(f.as_ref(), *r, tol)?;
                let refined = integrate(f.as_ref(), *r, fine)?;
                Ok((coarse.value - refined.value).norm() / (3.0 * coarse.error_estimate))
            };
            match run() {
                Ok(ratio) => Check::below(format!("{name}: |delta| / (3 err_est)"), ratio, 1.0 + 1e-12),
                Err(e) => Check::below(format!("{name}: {e}"), f64::NAN, 1.0),
            }
        })
        .collect())
}
