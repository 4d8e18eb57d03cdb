use hyperlap::chains::{make_inverse_chain, InverseChain, Profile};
use hyperlap::expr::AnalyticFunction;
use hyperlap::geometry::ClosedConicSet;
use hyperlap::hyperfun::{pairing, TestDensity};
use hyperlap::laplace::inverse;
use hyperlap::literal::*;
use hyperlap::opcalc::{solve, DiffOp, SolveOptions};

fn same_pairings(a: &hyperlap::hyperfun::Hyperfunction, b: &hyperlap::hyperfun::Hyperfunction, step: usize) {
    for phi in TestDensity::battery_1d().iter().step_by(step) {
        let (x, y) = (pairing(a, phi).unwrap(), pairing(b, phi).unwrap());
        assert!((x - y).norm() < 1e-12, "{x} vs {y}");
    }
}

#[test]
fn inverse_result_round_trips() {
    let f = AnalyticFunction::parse_zeta("exp(-zeta)/zeta", 1).unwrap();
    let k = ClosedConicSet::from_interval_str("[1,inf)").unwrap();
    let ch = make_inverse_chain(&[1.0], Profile::new(1.0, 1.0, 0.5).unwrap(), &[], 0.0).unwrap();
    let u = inverse(&f, &k, &ch).unwrap();
    let text = serde_json::to_string(&to_json(&u).unwrap()).unwrap();
    let v = parse_hyperfunction(&text).unwrap();
    assert_eq!(v.support, u.support);
    same_pairings(&u, &v, 5);
    // Derivatives stay representable (the arm power is recorded).
    let du = u.derivative(0).unwrap();
    let dv = from_json(&to_json(&du).unwrap()).unwrap();
    same_pairings(&du, &dv, 7);
}

#[test]
fn two_variable_inverse_round_trips() {
    let f = AnalyticFunction::parse_zeta("exp(-(zeta1 + zeta2))/(zeta1*zeta2)", 2).unwrap();
    let ch = InverseChain { xi0: vec![1.0 / 2f64.sqrt(); 2], psi: Profile::new(1.0, 1.0, 0.5).unwrap(), anchor: None };
    let u = inverse(&f, &ClosedConicSet::shifted_orthant(vec![1.0, 1.0]), &ch).unwrap();
    let v = from_json(&to_json(&u).unwrap()).unwrap();
    let phi = &TestDensity::battery_2d()[0];
    let (x, y) = (pairing(&u, phi).unwrap(), pairing(&v, phi).unwrap());
    assert!((x - y).norm() < 1e-12);
}

#[test]
fn solution_round_trips() {
    let p = DiffOp::parse("D1 - 1", Some(1)).unwrap();
    let f = parse_builtin("delta(0)").unwrap();
    let k = ClosedConicSet::from_interval_str("[0,inf)").unwrap();
    let opts = SolveOptions { verify: false, ..Default::default() };
    let sol = solve(&p, &f, &k, &opts).unwrap();
    let v = from_json(&to_json(&sol.u).unwrap()).unwrap();
    same_pairings(&sol.u, &v, 9);
}

#[test]
fn file_reference() {
    let dir = std::env::temp_dir().join(format!("hyperlap-literal-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("u.json");
    let u = parse_builtin("heaviside_exp(-1, 0.5)").unwrap();
    std::fs::write(&path, serde_json::to_string(&to_json(&u).unwrap()).unwrap()).unwrap();
    let v = parse_hyperfunction(&format!("@{}", path.display())).unwrap();
    same_pairings(&u, &v, 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
