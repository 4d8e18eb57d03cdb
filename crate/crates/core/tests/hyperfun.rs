use hyperlap::expr::{parse, AnalyticFunction, GrowthCertificate, Sign, WedgeDescriptor};
use hyperlap::hyperfun::{pairing, pairing_with, support_test, GaussFactor, Hyperfunction, PairingOptions, TestDensity};
use hyperlap::quadrature::{integrate, Range, Tol};
use hyperlap::C64;
use std::f64::consts::PI;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn gauss() -> TestDensity {
    TestDensity::gaussian(0.0, 1.0)
}

/// ∫_a^∞ e^{c(x−a)} φ(x) dx on the real line.
fn real_half_line(phi: &TestDensity, cc: f64, a: f64) -> C64 {
    let f = |x: f64| phi.eval1(c(x)) * (cc * (x - a)).exp();
    integrate(&f, Range::finite(a, a + 40.0), Tol::abs(1e-14)).unwrap().value
}

#[test]
fn delta_pairs_to_point_value() {
    let v = pairing(&Hyperfunction::delta(&[0.0]).unwrap(), &gauss()).unwrap();
    assert!((v - 1.0).norm() < 1e-9, "{v}");
    let phi = TestDensity::new(vec![GaussFactor::with_poly(0.0, 1.0, vec![0.0, 1.0])]);
    let v = pairing(&Hyperfunction::delta(&[1.0]).unwrap(), &phi).unwrap();
    assert!((v - (-1.0f64).exp()).norm() < 1e-9, "{v}");
    let phi = TestDensity::new(vec![GaussFactor::with_poly(0.0, 1.0, vec![0.0, 0.0, 1.0])]);
    let v = pairing(&Hyperfunction::delta(&[0.0]).unwrap(), &phi).unwrap();
    assert!(v.norm() < 1e-9);
}

#[test]
fn delta_battery_matches_point_values() {
    for a in [-0.7, 0.0, 0.4] {
        let d = Hyperfunction::delta(&[a]).unwrap();
        for phi in TestDensity::battery_1d() {
            let v = pairing(&d, &phi).unwrap();
            assert!((v - phi.eval1(c(a))).norm() < 1e-9);
        }
    }
}

#[test]
fn heaviside_pairs_to_half_line_integral() {
    let v = pairing(&Hyperfunction::heaviside_exp(c(0.0), 0.0).unwrap(), &gauss()).unwrap();
    assert!((v.re - PI.sqrt() / 2.0).abs() < 1e-9 && v.im.abs() < 1e-9, "{v}");
    let v = pairing(&Hyperfunction::heaviside_exp(c(1.0), 0.0).unwrap(), &gauss()).unwrap();
    let oracle = real_half_line(&gauss(), 1.0, 0.0);
    assert!((v - oracle).norm() < 1e-9, "{v} vs {oracle}");
    for phi in TestDensity::battery_1d().iter().step_by(3) {
        let u = Hyperfunction::heaviside_exp(c(-0.5), 0.3).unwrap();
        let v = pairing(&u, phi).unwrap();
        assert!((v - real_half_line(phi, -0.5, 0.3)).norm() < 1e-9);
    }
}

#[test]
fn heaviside_far_from_narrow_density() {
    let phi = TestDensity::gaussian(0.0, 100.0);
    let v = pairing(&Hyperfunction::heaviside_exp(c(0.0), 2.0).unwrap(), &phi).unwrap();
    assert!(v.norm() < 1e-9);
}

#[test]
fn boundary_values_of_reciprocal_recover_delta() {
    let f = |w: WedgeDescriptor| AnalyticFunction::in_z(parse("1/z").unwrap(), w, GrowthCertificate::bounded()).unwrap();
    let up = Hyperfunction::boundary_value(f(WedgeDescriptor::upper()), &[Sign::Plus]).unwrap();
    let lo = Hyperfunction::boundary_value(f(WedgeDescriptor::lower()), &[Sign::Minus]).unwrap();
    let u = up.sub(&lo).unwrap().scale(-1.0 / C64::new(0.0, 2.0 * PI));
    let d = Hyperfunction::delta(&[0.0]).unwrap();
    for phi in TestDensity::battery_1d() {
        assert!((pairing(&u, &phi).unwrap() - pairing(&d, &phi).unwrap()).norm() < 1e-9);
    }
}

#[test]
fn entire_boundary_values_cancel() {
    let e = parse("exp(z)*(z^2 - 1)").unwrap();
    let g = GrowthCertificate::new(1.0, 2.0);
    let up = Hyperfunction::boundary_value(AnalyticFunction::in_z(e.clone(), WedgeDescriptor::full(1), g.clone()).unwrap(), &[Sign::Plus]).unwrap();
    let lo = Hyperfunction::boundary_value(AnalyticFunction::in_z(e, WedgeDescriptor::full(1), g).unwrap(), &[Sign::Minus]).unwrap();
    let diff = up.sub(&lo).unwrap();
    for phi in TestDensity::battery_1d() {
        assert!(pairing(&diff, &phi).unwrap().norm() < 1e-9);
    }
}

#[test]
fn pairing_is_linear() {
    let d = Hyperfunction::delta(&[0.2]).unwrap();
    let h = Hyperfunction::heaviside_exp(c(0.5), -0.1).unwrap();
    let k = C64::new(0.3, -1.2);
    let s = d.add(&h.scale(k)).unwrap();
    for phi in TestDensity::battery_1d().iter().take(6) {
        let lhs = pairing(&s, phi).unwrap();
        let rhs = pairing(&d, phi).unwrap() + k * pairing(&h, phi).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }
}

#[test]
fn push_in_independence() {
    let u = Hyperfunction::heaviside_exp(C64::new(0.4, 0.7), 0.1).unwrap().add(&Hyperfunction::delta(&[-0.3]).unwrap()).unwrap();
    for phi in TestDensity::battery_1d().iter().step_by(4) {
        let y = phi.push_in;
        let a = pairing_with(&u, phi, &PairingOptions { push_in: Some(y), ..Default::default() }).unwrap().value;
        let b = pairing_with(&u, phi, &PairingOptions { push_in: Some(y / 2.0), ..Default::default() }).unwrap().value;
        assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        let tight = PairingOptions { tol: Some(Tol::new(1e-15, 1e-14)), ..Default::default() };
        let r = pairing_with(&u, phi, &tight).unwrap().value;
        assert!((a - r).norm() < 1e-8);
    }
}

#[test]
fn derivative_rules() {
    let h = Hyperfunction::heaviside_exp(c(0.0), 0.0).unwrap();
    let d = Hyperfunction::delta(&[0.0]).unwrap();
    let hd = h.derivative(0).unwrap();
    for phi in TestDensity::battery_1d() {
        assert!((pairing(&hd, &phi).unwrap() - phi.eval1(c(0.0))).norm() < 1e-9);
        let lhs = pairing(&d.derivative(0).unwrap(), &phi).unwrap();
        let rhs = -phi.derivative(0).eval1(c(0.0));
        assert!((lhs - rhs).norm() < 1e-9);
    }
    let u = Hyperfunction::heaviside_exp(c(0.7), 0.5).unwrap();
    for phi in TestDensity::battery_1d().iter().step_by(5) {
        let lhs = pairing(&u.derivative(0).unwrap(), phi).unwrap();
        let rhs = -pairing(&u, &phi.derivative(0)).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }
    assert!(Hyperfunction::zero(1).derivative(0).unwrap().is_zero_literal());
}

#[test]
fn restricted_wedge_gives_same_pairing() {
    let e = parse("1/((z1 - 1 + i)*(z2 + 2 - i))").unwrap();
    let f = AnalyticFunction::in_z(e, WedgeDescriptor::orthant(vec![Sign::Plus, Sign::Minus]), GrowthCertificate::bounded()).unwrap();
    let narrow = WedgeDescriptor::cone(vec![vec![1.0, -0.2], vec![0.2, -1.0]]);
    let mut u2 = Hyperfunction::boundary_value(f.clone(), &[Sign::Plus, Sign::Minus]).unwrap();
    let u1 = u2.clone();
    u2.terms[0].wedge = narrow.clone();
    u2.terms[0].func = f.with_domain(narrow);
    let phi = &TestDensity::battery_2d()[1];
    let a = pairing(&u1, phi).unwrap();
    let b = pairing(&u2, phi).unwrap();
    assert!((a - b).norm() < 1e-8, "{a} vs {b}");
}

#[test]
fn delta_2d_pairs_to_point_value() {
    let d = Hyperfunction::delta(&[0.5, 1.0]).unwrap();
    for phi in TestDensity::battery_2d().iter().take(4) {
        let v = pairing(&d, phi).unwrap();
        let w = phi.eval(&[c(0.5), c(1.0)]);
        assert!((v - w).norm() < 1e-8, "{v} vs {w}");
    }
}

#[test]
fn support_tests() {
    let h1 = Hyperfunction::heaviside_exp(c(0.0), 1.0).unwrap();
    assert!(support_test(&h1, &[-2.0], &[0.0], None).unwrap().passed);
    let d = Hyperfunction::delta(&[0.0]).unwrap();
    assert!(support_test(&d, &[1.0], &[2.0], None).unwrap().passed);
    let h0 = Hyperfunction::heaviside_exp(c(0.0), 0.0).unwrap();
    let r = support_test(&h0, &[1.0], &[2.0], None).unwrap();
    assert!(!r.passed);
    assert!(r.max_abs > 0.01);
}
