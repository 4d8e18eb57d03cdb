use hyperlap::chains::Profile;
use hyperlap::geometry::ClosedConicSet;
use hyperlap::hyperfun::{pairing, Hyperfunction, TestDensity};
use hyperlap::opcalc::*;
use hyperlap::quadrature::{integrate, Range, Tol};
use hyperlap::{Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> MultiPoly {
    MultiPoly::parse(s, "zeta", Some(2)).unwrap()
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

fn random_element(rng: &mut ChaCha8Rng, n: usize, ell: usize, max_deg: u32) -> KoszulElement {
    let k = rng.gen_range(0..=ell);
    let mut e = KoszulElement::zero(n, ell, k);
    for _ in 0..3 {
        let mut idx: Vec<usize> = (0..ell).collect();
        for i in (1..ell).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        idx.truncate(k);
        e = e.add(&KoszulElement::basis(ell, &idx, random_poly(rng, n, max_deg)).unwrap()).unwrap();
    }
    e
}

#[test]
fn d_squared_vanishes_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let ell = rng.gen_range(2..=4);
        let polys: Vec<MultiPoly> = (0..ell).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let mut e = random_element(&mut rng, 2, ell, 6);
        if e.degree + 2 > ell {
            e = KoszulElement::basis(ell, &[], random_poly(&mut rng, 2, 6)).unwrap();
        }
        let dd = koszul_d(&koszul_d(&e, &polys).unwrap(), &polys).unwrap();
        assert!(dd.is_zero(), "{e}");
    }
    let f = KoszulElement::basis(2, &[], p("zeta1*zeta2")).unwrap();
    let polys = [p("zeta1"), p("zeta2")];
    assert!(koszul_d(&koszul_d(&f, &polys).unwrap(), &polys).unwrap().is_zero());
}

#[test]
fn d_examples() {
    let polys = [p("zeta1 + 1"), p("zeta2^2")];
    let e = KoszulElement::basis(2, &[0], p("zeta1")).unwrap();
    let de = koszul_d(&e, &polys).unwrap();
    // Direct expansion: P₂ f e₂∧e₁ = −P₂ f e₁∧e₂.
    let expected = KoszulElement::basis(2, &[1, 0], p("zeta1*zeta2^2")).unwrap();
    assert_eq!(de, expected);
    assert_eq!(de.comps[&vec![0, 1]], p("-zeta1*zeta2^2"));
    assert!(matches!(koszul_d(&de, &polys), Err(Error::DegreeOverflow { .. })));
}

#[test]
fn homotopy_identity_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut total = 0;
    for _ in 0..10 {
        let ell = rng.gen_range(1..=3);
        let polys: Vec<MultiPoly> = (0..ell).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let a: Vec<MultiPoly> = (0..ell).map(|_| random_poly(&mut rng, 2, 3)).collect();
        let h = polys.iter().zip(&a).fold(MultiPoly::zero(2), |acc, (x, y)| acc.add(&x.mul(y)));
        let els: Vec<KoszulElement> = (0..5).map(|_| random_element(&mut rng, 2, ell, 6)).collect();
        let r = koszul_homotopy_check(&polys, &a, &h, &els).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.max_residual_terms, 0);
        total += r.elements;
    }
    assert_eq!(total, 50);
}

#[test]
fn homotopy_examples() {
    let polys = [p("zeta1"), p("zeta2")];
    let one = MultiPoly::one(2);
    let e = KoszulElement::basis(2, &[0], p("zeta1*zeta2")).unwrap();
    let r = koszul_homotopy_check(&polys, &[one.clone(), one.clone()], &p("zeta1 + zeta2"), &[e.clone()]).unwrap();
    assert!(r.holds);
    // By hand: s d e = ζ₁ζ₂²(e₁ − e₂), d s e = ζ₁²ζ₂ e₁ + ζ₁ζ₂² e₂, so only
    // the sum reproduces (ζ₁ + ζ₂)ζ₁ζ₂ e₁.
    assert_eq!(r.minus_form_holds, 0);
    let se = koszul_homotopy(&koszul_d(&e, &polys).unwrap(), &[one.clone(), one.clone()]).unwrap().unwrap();
    assert_eq!(se.comps[&vec![0]], p("zeta1*zeta2^2"));
    assert_eq!(se.comps[&vec![1]], p("-zeta1*zeta2^2"));

    let zero = KoszulElement::zero(2, 2, 1);
    assert!(koszul_homotopy_check(&polys, &[one.clone(), one.clone()], &p("zeta1 + zeta2"), &[zero]).unwrap().holds);

    let polys = [p("zeta1"), p("zeta1*zeta2")];
    let a = [one.clone(), MultiPoly::zero(2)];
    let e = KoszulElement::basis(2, &[1], one.clone()).unwrap();
    assert!(koszul_homotopy_check(&polys, &a, &p("zeta1"), &[e]).unwrap().holds);
    assert!(matches!(koszul_homotopy_check(&polys, &a, &p("zeta2"), &[]), Err(Error::CoefficientMismatch)));
}

#[test]
fn regular_sequences() {
    let r = regular_sequence_check_bounded(&[p("zeta1"), p("zeta2")], 6).unwrap();
    assert!(r.consistent && r.failed_degree.is_none(), "{r:?}");
    let r = regular_sequence_check_bounded(&[p("zeta1"), p("zeta1")], 6).unwrap();
    assert!(!r.consistent);
    assert_eq!(r.failed_degree, Some(1));
    let r = regular_sequence_check_bounded(&[p("zeta1^2 + zeta2^2 - 1")], 4).unwrap();
    assert!(r.consistent);
    let r = regular_sequence_check_bounded(&[p("zeta1*zeta2"), p("zeta1*(zeta2 + 1)")], 6).unwrap();
    assert!(!r.consistent);
    assert!(matches!(regular_sequence_check_bounded(&[p("zeta1^2"), p("zeta2^3")], 4), Err(Error::CapTooSmall { .. })));
}

#[test]
fn symbol_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let a = DiffOp(random_poly(&mut rng, 2, 4));
        let b = DiffOp(random_poly(&mut rng, 2, 4));
        if a.0.is_zero() || b.0.is_zero() {
            continue;
        }
        let lhs = principal_symbol(&a.compose(&b)).unwrap();
        let rhs = principal_symbol(&a).unwrap().mul(&principal_symbol(&b).unwrap());
        assert_eq!(lhs, rhs);
    }
    let lap = DiffOp::parse("D1^2 + D2^2", None).unwrap();
    assert_eq!(principal_symbol(&lap).unwrap(), p("zeta1^2 + zeta2^2"));
}

fn lap_char() -> [Vec<C64>; 2] {
    let s = 0.5f64.sqrt();
    [vec![C64::new(s, 0.0), C64::new(0.0, s)], vec![C64::new(s, 0.0), C64::new(0.0, -s)]]
}

#[test]
fn laplacian_characteristic_directions() {
    let mesh = 0.02;
    let lap = DiffOp::parse("D1^2 + D2^2", None).unwrap();
    let r = char_infinity(&[lap], mesh, None).unwrap();
    let chars = lap_char();
    let flagged: Vec<&CharSample> = r.flagged().collect();
    assert!(!flagged.is_empty());
    for s in &flagged {
        let d = chars.iter().map(|c| projective_distance(c, &s.zeta)).fold(f64::INFINITY, f64::min);
        assert!(d <= mesh, "flagged direction {:?} at distance {d}", s.zeta);
    }
    for c in &chars {
        let d = flagged.iter().map(|s| projective_distance(c, &s.zeta)).fold(f64::INFINITY, f64::min);
        assert!(d <= mesh, "{d}");
    }
    let scaled = DiffOp(MultiPoly::parse("(3 - 2*i)*(D1^2 + D2^2)", "D", None).unwrap());
    let r2 = char_infinity(&[scaled], mesh, None).unwrap();
    let a: Vec<bool> = r.samples.iter().map(|s| s.flagged).collect();
    let b: Vec<bool> = r2.samples.iter().map(|s| s.flagged).collect();
    assert_eq!(a, b);
    let mut csv = vec![];
    r.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("zeta1_re,zeta1_im,zeta2_re,zeta2_im,sigma_rel,flagged"));
    assert_eq!(text.lines().count(), r.samples.len() + 1);
}

#[test]
fn first_order_characteristics() {
    let mesh = 0.05;
    let dx = DiffOp::parse("D1", Some(2)).unwrap();
    let r = char_infinity(&[dx.clone()], mesh, None).unwrap();
    for s in &r.samples {
        // Distance to the line ζ₁ = 0 is arcsin|ζ₁|.
        let d = s.zeta[0].norm().asin();
        if s.flagged {
            assert!(d <= mesh);
        }
        if d < 0.5 * mesh {
            assert!(s.flagged);
        }
    }
    let dy = DiffOp::parse("D2", Some(2)).unwrap();
    assert_eq!(char_infinity(&[dx, dy], mesh, None).unwrap().flagged().count(), 0);
}

#[test]
fn solvability_fixtures() {
    let o = SolvableOptions::default();
    let half = ClosedConicSet::from_interval_str("[0,inf)").unwrap();
    let r = check_solvable(&DiffOp::parse("D - 1", None).unwrap(), &half, &o).unwrap();
    assert!(r.solvable && (r.min_rel - 1.0).abs() < 1e-12, "{r:?}");
    let quad = ClosedConicSet::shifted_orthant(vec![0.0, 0.0]);
    let r = check_solvable(&DiffOp::parse("D1 D2", None).unwrap(), &quad, &o).unwrap();
    // Minimum of |ζ₁ζ₂| with Re ζ_k ≥ 0.05 on the unit sphere.
    let oracle = 0.05 * (1.0f64 - 0.0025).sqrt();
    assert!(r.solvable && (r.min_rel - oracle).abs() < 1e-3, "{r:?}");
    let r = check_solvable(&DiffOp::parse("D1^2 + D2^2", None).unwrap(), &quad, &o).unwrap();
    assert!(!r.solvable && r.min_rel < 1e-8, "{r:?}");
    let d = lap_char().iter().map(|c| projective_distance(c, &r.worst)).fold(f64::INFINITY, f64::min);
    assert!(d < 1e-6);
    let whole = ClosedConicSet::from_interval_str("(-inf,inf)").unwrap();
    assert!(matches!(check_solvable(&DiffOp::parse("D", None).unwrap(), &whole, &o), Err(Error::EmptyHpc)));
}

fn real_oracle(phi: &TestDensity, g: &dyn Fn(f64) -> f64) -> C64 {
    integrate(&|x: f64| phi.eval1(C64::new(x, 0.0)) * g(x), Range::finite(0.0, 30.0), Tol::abs(1e-13)).unwrap().value
}

#[test]
fn solve_first_order() {
    let k = ClosedConicSet::from_interval_str("[0,inf)").unwrap();
    let f = Hyperfunction::delta(&[0.0]).unwrap();
    let sol = solve(&DiffOp::parse("D - 1", None).unwrap(), &f, &k, &SolveOptions::default()).unwrap();
    assert!(sol.max_residual() < 1e-4, "{}", sol.max_residual());
    for phi in TestDensity::battery_1d().iter().step_by(3) {
        let v = pairing(&sol.u, phi).unwrap();
        let o = real_oracle(phi, &|x| x.exp());
        assert!((v - o).norm() < 1e-4, "{v} vs {o}");
    }
}

#[test]
fn solve_second_order() {
    let k = ClosedConicSet::from_interval_str("[0,inf)").unwrap();
    let f = Hyperfunction::delta(&[0.0]).unwrap();
    let sol = solve(&DiffOp::parse("D^2 - 1", None).unwrap(), &f, &k, &SolveOptions::default()).unwrap();
    assert!(sol.max_residual() < 1e-4, "{}", sol.max_residual());
    for phi in TestDensity::battery_1d().iter().step_by(3) {
        let v = pairing(&sol.u, phi).unwrap();
        let o = real_oracle(phi, &|x| x.sinh());
        assert!((v - o).norm() < 1e-4, "{v} vs {o}");
    }
}

#[test]
fn solve_identity_and_poles() {
    let k = ClosedConicSet::from_interval_str("[0,inf)").unwrap();
    let f = Hyperfunction::delta(&[0.0]).unwrap();
    let sol = solve(&DiffOp::parse("1", None).unwrap(), &f, &k, &SolveOptions::default()).unwrap();
    assert_eq!(sol.max_residual(), 0.0);
    let phi = TestDensity::gaussian(0.3, 2.0);
    assert!((pairing(&sol.u, &phi).unwrap() - phi.eval1(C64::new(0.0, 0.0))).norm() < 1e-10);
    let opts = SolveOptions { profile: Some(Profile::new(0.2, 1.0, 0.5).unwrap()), ..Default::default() };
    let r = solve(&DiffOp::parse("D - 1", None).unwrap(), &f, &k, &opts);
    assert!(matches!(r, Err(Error::PoleOnChain(_))), "{r:?}");
    let opts = SolveOptions { profile: Some(Profile::new(-0.5, 1.0, 0.5).unwrap()), ..Default::default() };
    let r = solve(&DiffOp::parse("D - 1", None).unwrap(), &f, &k, &opts);
    assert!(matches!(r, Err(Error::PoleOnChain(_))));
}
