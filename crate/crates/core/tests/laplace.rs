use hyperlap::chains::{make_inverse_chain, InverseChain, Profile};
use hyperlap::expr::AnalyticFunction;
use hyperlap::geometry::{fan, ClosedConicSet, Direction};
use hyperlap::hyperfun::{pairing, support_test, Cutoff, Hyperfunction, PairingOptions, Route, TestDensity};
use hyperlap::laplace::*;
use hyperlap::quadrature::{integrate, Range, Tol};
use hyperlap::C64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ray(a: f64) -> ClosedConicSet {
    ClosedConicSet::from_interval_str(&format!("[{a},inf)")).unwrap()
}

fn chain(c0: f64, c1: f64, p: f64) -> InverseChain {
    make_inverse_chain(&[1.0], Profile::new(c0, c1, p).unwrap(), &[], 0.0).unwrap()
}

#[test]
fn forward_anchors() {
    let v = forward(&Hyperfunction::delta(&[1.0]).unwrap(), &[c(2.0, 0.0)]).unwrap();
    assert!((v - (-2.0f64).exp()).norm() < 1e-12, "{v}");
    let v = forward(&Hyperfunction::heaviside_exp(c(1.0, 0.0), 0.0).unwrap(), &[c(3.0, 0.0)]).unwrap();
    assert!((v - 0.5).norm() < 1e-10, "{v}");
    assert_eq!(forward(&Hyperfunction::zero(1), &[c(3.0, 0.0)]).unwrap(), c(0.0, 0.0));
}

#[test]
fn forward_against_real_integral() {
    // ∫_a^∞ e^{−xζ} e^{c(x−a)} dx computed directly on the real line.
    let (cc, a) = (c(0.5, 0.3), 0.4);
    let u = Hyperfunction::heaviside_exp(cc, a).unwrap();
    for zeta in [c(1.5, 0.0), c(2.0, 3.0), c(1.2, -1.0)] {
        let f = |x: f64| (-(x * zeta) + cc * (x - a)).exp();
        let oracle = integrate(&f, Range::tail(a, zeta.re - cc.re), Tol::abs(1e-14)).unwrap().value;
        let v = forward(&u, &[zeta]).unwrap();
        assert!((v - oracle).norm() < 1e-9, "{zeta}: {v} vs {oracle}");
    }
}

#[test]
fn forward_out_of_region() {
    let u = Hyperfunction::heaviside_exp(c(2.0, 0.0), 0.0).unwrap();
    assert!(matches!(forward(&u, &[c(1.5, 0.0)]), Err(hyperlap::Error::OutOfRegion(_))));
}

#[test]
fn forward_contour_independence() {
    let u = Hyperfunction::heaviside_exp(c(0.3, 0.0), 0.5).unwrap().add(&Hyperfunction::delta(&[1.5]).unwrap()).unwrap();
    let a = ForwardOptions { eps: 0.2, ..Default::default() };
    let b = ForwardOptions { eps: 0.4, ..Default::default() };
    for zeta in [c(1.0, 0.0), c(2.0, 1.5), c(0.8, -0.2)] {
        let va = forward_with(&u, &[zeta], &a).unwrap().value;
        let vb = forward_with(&u, &[zeta], &b).unwrap().value;
        assert!((va - vb).norm() < 1e-10);
    }
}

#[test]
fn forward_2d_product() {
    let d = Hyperfunction::delta(&[0.5, 1.0]).unwrap();
    let z = [c(1.0, 0.5), c(2.0, -0.3)];
    let v = forward(&d, &z).unwrap();
    let w = (-(z[0] * 0.5 + z[1])).exp();
    assert!((v - w).norm() < 1e-10, "{v} vs {w}");
    let h = Hyperfunction::heaviside_exp(c(0.0, 0.0), 0.0).unwrap();
    let hh = h.tensor(&h).unwrap();
    let v = forward(&hh, &z).unwrap();
    assert!((v - 1.0 / (z[0] * z[1])).norm() < 1e-9, "{v}");
}

#[test]
fn pair_transform_matches_chain_transform() {
    let d = Hyperfunction::delta(&[0.0]).unwrap();
    let p = d.to_pair(Cutoff::around(&d).unwrap()).unwrap();
    let v = forward_pair(&p, c(2.0, 0.0), Tol::abs(1e-10)).unwrap().value;
    assert!((v - 1.0).norm() < 1e-6, "{v}");
    let h = Hyperfunction::heaviside_exp(c(0.0, 0.0), 0.0).unwrap();
    let p = h.to_pair(Cutoff::around(&h).unwrap()).unwrap();
    let v = forward_pair(&p, c(2.0, 0.0), Tol::abs(1e-10)).unwrap().value;
    assert!((v - 0.5).norm() < 1e-6, "{v}");
    let half = Cutoff::new(0.25, 0.5, (0.0, f64::INFINITY)).unwrap();
    let v2 = forward_pair(&h.to_pair(half).unwrap(), c(2.0, 0.0), Tol::abs(1e-10)).unwrap().value;
    assert!((v - v2).norm() < 1e-6);
    let u = Hyperfunction::heaviside_exp(c(0.5, 0.0), 0.2).unwrap().add(&Hyperfunction::delta(&[0.7]).unwrap()).unwrap();
    let p = u.to_pair(Cutoff::around(&u).unwrap()).unwrap();
    for j in 0..10 {
        let zeta = c(1.5 + 0.2 * j as f64, 0.3 * j as f64 - 1.0);
        let a = forward(&u, &[zeta]).unwrap();
        let b = forward_pair(&p, zeta, Tol::abs(1e-10)).unwrap().value;
        assert!((a - b).norm() < 1e-5, "{zeta}: {a} vs {b}");
    }
}

#[test]
fn derivative_rules() {
    let opts = ForwardOptions::default();
    let zs: Vec<Vec<C64>> = (0..4).map(|j| vec![c(1.0 + 0.5 * j as f64, 0.4 * j as f64)]).collect();
    for u in [
        Hyperfunction::heaviside_exp(c(0.0, 0.0), 0.0).unwrap(),
        Hyperfunction::delta(&[0.0]).unwrap(),
        Hyperfunction::delta(&[1.0]).unwrap(),
        Hyperfunction::heaviside_exp(c(0.3, 0.2), 0.5).unwrap(),
    ] {
        let r = derivative_rules_check(&u, 0, &zs, &opts).unwrap();
        assert!(r.d_zeta < 1e-6 && r.multiply < 1e-6, "{r:?}");
    }
}

#[test]
fn growth_rays() {
    let rays: Vec<Vec<C64>> = [-0.8f64, -0.4, 0.0, 0.4, 0.8].iter().map(|t| vec![C64::from_polar(1.0, *t)]).collect();
    let ts: Vec<f64> = (1..=16).map(|j| 0.5 * j as f64).collect();
    for u in [Hyperfunction::delta(&[1.0]).unwrap(), Hyperfunction::heaviside_exp(c(0.0, 0.0), 0.0).unwrap()] {
        let r = growth_certificate(&TransformResult::new(&u), &rays, &ts, 0.1).unwrap();
        assert!(r.passed, "{r:?}");
    }
    let u = Hyperfunction::heaviside_exp(c(2.0, 0.0), 0.0).unwrap();
    let r = growth_certificate(&TransformResult::new(&u), &[vec![c(1.0, 0.0)]], &ts, 0.1).unwrap();
    assert!(r.passed);
    for (t, inside, _) in &r.rays[0].samples {
        if *t <= 2.0 {
            assert!(!inside);
        }
    }
}

fn zeta_f(text: &str) -> AnalyticFunction {
    AnalyticFunction::parse_zeta(text, 1).unwrap()
}

#[test]
fn inverse_anchors() {
    let ch = chain(1.0, 1.0, 0.5);
    let phi = TestDensity::gaussian(0.0, 1.0);
    let u = inverse(&zeta_f("1/zeta"), &ray(0.0), &ch).unwrap();
    let v = pairing(&u, &phi).unwrap();
    assert!((v - PI.sqrt() / 2.0).norm() < 1e-5, "{v}");
    let u = inverse(&zeta_f("exp(-zeta)"), &ray(1.0), &ch).unwrap();
    for phi in TestDensity::battery_1d().iter().step_by(3) {
        let v = pairing(&u, phi).unwrap();
        assert!((v - phi.eval1(c(1.0, 0.0))).norm() < 1e-5, "{v}");
    }
    let u = inverse(&zeta_f("1/(zeta - 1)"), &ray(0.0), &chain(2.0, 1.0, 0.5)).unwrap();
    let oracle = integrate(&|x: f64| phi.eval1(c(x, 0.0)) * x.exp(), Range::finite(0.0, 40.0), Tol::abs(1e-14)).unwrap().value;
    let v = pairing(&u, &phi).unwrap();
    assert!((v - oracle).norm() < 1e-5, "{v} vs {oracle}");
}

#[test]
fn inverse_contour_pairing_agrees_with_spectral() {
    let u = inverse(&zeta_f("1/zeta^2"), &ray(0.0), &chain(1.0, 1.0, 0.5)).unwrap();
    let phi = TestDensity::gaussian(0.5, 2.0);
    let a = pairing(&u, &phi).unwrap();
    let b = hyperlap::hyperfun::pairing_with(&u, &phi, &PairingOptions { route: Route::Contour, tol: Some(Tol::new(1e-9, 1e-8)), ..Default::default() })
        .unwrap()
        .value;
    assert!((a - b).norm() < 1e-6, "{a} vs {b}");
}

#[test]
fn inverse_growth_failure() {
    let ch = chain(1.0, 1.0, 0.5);
    let r = inverse(&zeta_f("1/zeta"), &ray(1.0), &ch);
    assert!(matches!(r, Err(hyperlap::Error::GrowthCertificateFail(_))), "{r:?}");
    let r = inverse(&zeta_f("exp(zeta^2)"), &ray(0.0), &ch);
    assert!(matches!(r, Err(hyperlap::Error::GrowthCertificateFail(_))));
}

#[test]
fn inverse_path_independence() {
    let f = zeta_f("exp(-zeta)/zeta^2");
    let a = inverse(&f, &ray(1.0), &chain(0.0, 1.0, 0.5)).unwrap();
    let b = inverse(&f, &ray(1.0), &chain(2.0, 1.0, 0.6)).unwrap();
    for phi in TestDensity::battery_1d().iter().step_by(4) {
        let (x, y) = (pairing(&a, phi).unwrap(), pairing(&b, phi).unwrap());
        assert!((x - y).norm() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn round_trip_forward_of_inverse() {
    let ch = chain(1.0, 1.0, 0.5);
    let u = inverse(&zeta_f("exp(-zeta)/zeta"), &ray(1.0), &ch).unwrap();
    for zeta in [c(3.0, 0.0), c(3.5, 1.0), c(4.0, -2.0)] {
        let v = forward(&u, &[zeta]).unwrap();
        let w = (-zeta).exp() / zeta;
        assert!((v - w).norm() < 1e-7, "{zeta}: {v} vs {w}");
    }
    // Nested quadrature over tilted tails gives the same value.
    let opts = ForwardOptions { route: Route::Contour, tol: Tol::new(1e-9, 1e-8), ..Default::default() };
    let u = inverse(&zeta_f("1/zeta^2"), &ray(0.0), &ch).unwrap();
    let v = forward_with(&u, &[c(4.0, 0.0)], &opts).unwrap().value;
    assert!((v - 1.0 / 16.0).norm() < 1e-6, "{v}");
}

#[test]
fn support_estimate_and_probes() {
    let f = zeta_f("exp(-zeta)/zeta");
    let fam = support_estimate(&f, &|_| 1.0, &[Direction::new(&[1.0]).unwrap()]).unwrap();
    assert!(fam.contains(&[1.0]) && !fam.contains(&[0.99]));
    let u = inverse(&f, &ray(1.0), &chain(1.0, 1.0, 0.5)).unwrap();
    for (lo, hi) in [(-3.0, -2.0), (-1.0, 0.0), (0.0, 0.5), (0.4, 0.9), (-6.0, -3.0)] {
        let r = support_test(&u, &[lo], &[hi], None).unwrap();
        assert!(r.passed, "[{lo}, {hi}]: {}", r.max_abs);
    }
    let r = support_test(&u, &[1.5], &[2.5], None).unwrap();
    assert!(!r.passed);
    let f2 = AnalyticFunction::parse_zeta("exp(-(zeta1 + zeta2))/(zeta1*zeta2)", 2).unwrap();
    let fam = support_estimate(&f2, &|d: &Direction| d.unit[0] + d.unit[1], &fan(0.0, PI / 2.0, 8)).unwrap();
    assert!(fam.contains(&[1.0, 1.0]) && fam.contains(&[3.0, 1.5]) && !fam.contains(&[0.9, 1.0]));
}

#[test]
fn reconstruction_round_trip() {
    let tol = Tol::new(1e-11, 1e-10);
    let d = Hyperfunction::delta(&[1.0]).unwrap();
    let rec = reconstruct(&d, None, tol).unwrap();
    assert_eq!(rec.r, 4.0);
    for phi in TestDensity::battery_1d().iter().step_by(2) {
        let phi = phi.clone().with_push_in(0.3);
        let v = pairing(&rec.hyperfunction, &phi).unwrap();
        assert!((v - phi.eval1(c(1.0, 0.0))).norm() < 1e-5, "{v}");
    }
    let h = Hyperfunction::heaviside_exp(c(0.5, 0.0), 0.0).unwrap();
    let r1 = reconstruct(&h, Some(4.0), tol).unwrap();
    let r2 = reconstruct(&h, Some(8.0), tol).unwrap();
    let phi = TestDensity::gaussian(0.5, 2.0);
    let (a, b) = (pairing(&r1.hyperfunction, &phi).unwrap(), pairing(&r2.hyperfunction, &phi).unwrap());
    let direct = pairing(&h, &phi).unwrap();
    assert!((a - b).norm() < 1e-6, "{a} vs {b}");
    assert!((a - direct).norm() < 1e-5);
    assert!(reconstruct(&Hyperfunction::zero(1), None, tol).unwrap().hyperfunction.is_zero_literal());
}

#[test]
fn orthant_extension() {
    let f = AnalyticFunction::parse_zeta("exp(-(zeta1 + zeta2))/(zeta1*zeta2)", 2).unwrap();
    let ch = InverseChain { xi0: vec![1.0 / 2f64.sqrt(); 2], psi: Profile::new(1.0, 1.0, 0.5).unwrap(), anchor: None };
    let pts = [[c(-1.0, -0.5), c(-1.0, 0.5)], [c(-0.7, 0.2), c(-1.5, -0.4)]];
    let r = orthant_extension_check(&f, &ch, &pts, Tol::new(1e-11, 1e-9)).unwrap();
    assert!(r.passed(1e-6), "{r:?}");
}

#[test]
fn kernel_is_admissible() {
    let k = KernelOmega::uniform(8).unwrap();
    assert_eq!(k.arcs.len(), 8);
    assert!(k.delta > 0.9);
    assert!(KernelOmega::uniform(3).is_err());
}

#[test]
fn inverse_2d_pairs_as_shifted_quadrant() {
    let f = AnalyticFunction::parse_zeta("exp(-(zeta1 + zeta2))/(zeta1*zeta2)", 2).unwrap();
    let ch = InverseChain { xi0: vec![1.0 / 2f64.sqrt(); 2], psi: Profile::new(1.0, 1.0, 0.5).unwrap(), anchor: None };
    let k = ClosedConicSet::shifted_orthant(vec![1.0, 1.0]);
    let u = inverse(&f, &k, &ch).unwrap();
    let uk = inverse_kernel(&f, &k, &ch, &KernelOmega::uniform(8).unwrap(), &InverseOptions::default()).unwrap();
    for phi in TestDensity::battery_2d().iter().take(4) {
        let g = |x: f64| phi.factors[0].eval(c(x, 0.0));
        let h = |x: f64| phi.factors[1].eval(c(x, 0.0));
        let oracle = integrate(&g, Range::finite(1.0, 30.0), Tol::abs(1e-14)).unwrap().value
            * integrate(&h, Range::finite(1.0, 30.0), Tol::abs(1e-14)).unwrap().value;
        let a = pairing(&u, phi).unwrap();
        let b = pairing(&uk, phi).unwrap();
        assert!((a - oracle).norm() < 1e-6, "{a} vs {oracle}");
        assert!((b - oracle).norm() < 1e-6, "{b} vs {oracle}");
    }
}
