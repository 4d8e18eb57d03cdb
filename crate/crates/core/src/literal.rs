//! JSON hyperfunction literals and the short builtin notation used on the
//! command line.
//!
//! A literal is `{"dim", "terms": [{"alpha", "coeff", "f", "growth"}], "support"}`.
//! `f` is either an expression string in z1..zn or the JSON produced by
//! `AnalyticFunction::describe` for the quadrature-backed bodies that can be
//! rebuilt (`bromwich`, `bromwich_sector`, `transform_quotient`,
//! `coord_mul`, `tensor`).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::sync::Arc;

use crate::chains::{InverseChain, Profile};
use crate::error::{Error, Result};
use crate::expr::{parse, AnalyticFunction, Body, GrowthCertificate, WedgeDescriptor};
use crate::geometry::ClosedConicSet;
use crate::hyperfun::{Hyperfunction, WedgeBV};
use crate::laplace::{BromwichArm, BromwichSector, InverseOptions, SectorChain};
use crate::opcalc::{transform_quotient, DiffOp};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperfunctionLiteral {
    pub dim: usize,
    pub terms: Vec<TermLiteral>,
    pub support: ClosedConicSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLiteral {
    /// Orthant label such as "+" or "+-".
    pub alpha: String,
    pub coeff: [f64; 2],
    pub f: Value,
    #[serde(default = "GrowthCertificate::bounded")]
    pub growth: GrowthCertificate,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArmLit {
    f: Value,
    xi0: Vec<f64>,
    psi: Profile,
    side: f64,
    power: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectorLit {
    f: Value,
    chain: SectorChainLit,
    psi: Profile,
    theta: [f64; 2],
    power: [u32; 2],
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum SectorChainLit {
    Orthant { anchor: Vec<f64>, deform: f64 },
    Kernel { xi0: Vec<f64> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientLit {
    u: HyperfunctionLiteral,
    #[serde(rename = "P")]
    p: String,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| bad(format!("{what}: {e}")))
}

/// Whether `f` is written in z (terms) or ζ (integrands of the inverse).
#[derive(Clone, Copy, PartialEq)]
enum Vars {
    Z,
    Zeta,
}

fn decode_fn(v: &Value, n: usize, vars: Vars, domain: WedgeDescriptor, growth: GrowthCertificate) -> Result<AnalyticFunction> {
    let tol = InverseOptions::default().tol;
    if let Value::String(s) = v {
        let e = parse(s)?;
        return match vars {
            Vars::Z => AnalyticFunction::in_z(e, domain, growth),
            Vars::Zeta => AnalyticFunction::in_zeta(e, n, growth),
        };
    }
    let obj = v.as_object().ok_or_else(|| bad("function must be a string or an object"))?;
    if let Some(a) = obj.get("bromwich") {
        let a: ArmLit = field(a, "bromwich")?;
        if n != 1 || a.xi0.len() != 1 {
            return Err(bad("bromwich arms are one-variable"));
        }
        let f = decode_fn(&a.f, 1, Vars::Zeta, WedgeDescriptor::full(1), GrowthCertificate::bounded())?;
        let chain = InverseChain { xi0: a.xi0, psi: a.psi, anchor: None };
        let arm = BromwichArm::new(f, chain, a.side, a.power, tol);
        return Ok(AnalyticFunction::numeric(Arc::new(arm), domain, growth));
    }
    if let Some(s) = obj.get("bromwich_sector") {
        let s: SectorLit = field(s, "bromwich_sector")?;
        if n != 2 {
            return Err(bad("bromwich sectors are two-variable"));
        }
        let f = decode_fn(&s.f, 2, Vars::Zeta, WedgeDescriptor::full(2), GrowthCertificate::bounded())?;
        let chain = match s.chain {
            SectorChainLit::Orthant { anchor, deform } => SectorChain::Orthant { anchor, deform },
            SectorChainLit::Kernel { xi0 } => SectorChain::Kernel { xi0 },
        };
        let sector = BromwichSector { f, chain, psi: s.psi, theta: (s.theta[0], s.theta[1]), power: s.power, tol };
        return Ok(AnalyticFunction::numeric(Arc::new(sector), domain, growth));
    }
    if let Some(q) = obj.get("transform_quotient") {
        let q: QuotientLit = field(q, "transform_quotient")?;
        let u = from_literal(&q.u)?;
        let p = DiffOp::parse(&q.p, Some(1))?;
        return Ok(transform_quotient(&u, &p).with_domain(domain).with_growth(growth));
    }
    match obj.get("kind").and_then(Value::as_str) {
        Some("coord_mul") => {
            let k: usize = field(&obj["k"], "coord_mul.k")?;
            let c: [f64; 2] = field(&obj["c"], "coord_mul.c")?;
            let inner = decode_fn(&obj["inner"], n, vars, domain, growth)?;
            Ok(inner.mul_coord(k, C64::new(c[0], c[1])))
        }
        Some("tensor") if n == 2 => {
            let fs: [Value; 2] = field(&obj["factors"], "tensor.factors")?;
            let dom = |k: usize| match domain.signs() {
                Some(s) => WedgeDescriptor::orthant(vec![s[k]]),
                None => WedgeDescriptor::full(1),
            };
            let a = decode_fn(&fs[0], 1, vars, dom(0), growth.clone())?;
            let b = decode_fn(&fs[1], 1, vars, dom(1), growth.clone())?;
            Ok(a.tensor(&b)?.with_domain(domain).with_growth(growth))
        }
        _ => Err(Error::Unsupported(format!("function body {v} cannot be rebuilt from a literal"))),
    }
}

/// Builds the hyperfunction described by a literal.
pub fn from_literal(lit: &HyperfunctionLiteral) -> Result<Hyperfunction> {
    let n = lit.dim;
    if lit.support.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lit.support.dim() });
    }
    let mut terms = vec![];
    for t in &lit.terms {
        let wedge = WedgeDescriptor::from_label(&t.alpha)?;
        if wedge.dim != n {
            return Err(Error::DimensionMismatch { expected: n, got: wedge.dim });
        }
        let func = decode_fn(&t.f, n, Vars::Z, wedge.clone(), t.growth.clone())?;
        terms.push(WedgeBV { wedge, func, coeff: C64::new(t.coeff[0], t.coeff[1]) });
    }
    Ok(Hyperfunction { dim: n, terms, support: lit.support.clone() })
}

/// Literal of a hyperfunction; fails with `Unsupported` when a defining
/// function has no rebuildable description (closures, Cauchy kernels).
pub fn to_literal(u: &Hyperfunction) -> Result<HyperfunctionLiteral> {
    let mut terms = vec![];
    for t in &u.terms {
        let f = match &t.func.body {
            Body::Expr { .. } => t.func.describe(),
            Body::Numeric(_) => {
                let v = t.func.describe();
                decode_fn(&v, u.dim, Vars::Z, t.wedge.clone(), t.func.growth.clone())?;
                v
            }
        };
        terms.push(TermLiteral {
            alpha: t.wedge.label(),
            coeff: [t.coeff.re, t.coeff.im],
            f,
            growth: t.func.growth.clone(),
        });
    }
    Ok(HyperfunctionLiteral { dim: u.dim, terms, support: u.support.clone() })
}

pub fn to_json(u: &Hyperfunction) -> Result<Value> {
    serde_json::to_value(to_literal(u)?).map_err(|e| bad(e.to_string()))
}

pub fn from_json(v: &Value) -> Result<Hyperfunction> {
    from_literal(&field(v, "hyperfunction literal")?)
}

/// Reads a hyperfunction from a JSON literal, `@path` to a JSON file, or
/// the builtin notation (see [`parse_builtin`]).
pub fn parse_hyperfunction(text: &str) -> Result<Hyperfunction> {
    let t = text.trim();
    if let Some(path) = t.strip_prefix('@') {
        let s = std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?;
        return parse_hyperfunction(&s);
    }
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| bad(format!("hyperfunction literal: {e}")))?;
        return from_json(&v);
    }
    parse_builtin(t)
}

/// Sums of `[c*]name(args)` with names
/// `delta(a)`, `delta(a,b)`, `heaviside(a)`, `heaviside_exp(c,a)` = Y(x−a)e^{c(x−a)},
/// and `diff(u)` / `diff(u,k)` for the k-th derivative of a one-variable u.
/// `0` is the zero hyperfunction in one variable.
pub fn parse_builtin(text: &str) -> Result<Hyperfunction> {
    let pieces = split_sum(text)?;
    let mut acc: Option<Hyperfunction> = None;
    for (sign, piece) in pieces {
        let u = parse_product(piece.trim())?.scale(C64::new(sign, 0.0));
        acc = Some(match acc {
            None => u,
            Some(a) => a.add(&u)?,
        });
    }
    acc.ok_or_else(|| Error::Syntax { pos: 0, msg: "empty hyperfunction".into() })
}

fn split_sum(text: &str) -> Result<Vec<(f64, &str)>> {
    let mut out = vec![];
    let mut depth = 0i32;
    let mut start = 0;
    let mut sign = 1.0;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let s = if b == b'-' { -1.0 } else { 1.0 };
                let prev = text[start..i].trim_end();
                let exponent = prev.len() > 1
                    && prev.ends_with(['e', 'E'])
                    && prev.as_bytes()[prev.len() - 2].is_ascii_digit();
                if prev.is_empty() {
                    sign *= s;
                    start = i + 1;
                } else if !exponent && !prev.ends_with('*') {
                    out.push((sign, &text[start..i]));
                    sign = s;
                    start = i + 1;
                }
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Syntax { pos: i, msg: "unbalanced ')'".into() });
        }
    }
    if depth != 0 {
        return Err(Error::Syntax { pos: text.len(), msg: "unbalanced '('".into() });
    }
    out.push((sign, &text[start..]));
    if out.iter().any(|(_, p)| p.trim().is_empty()) {
        return Err(Error::Syntax { pos: 0, msg: format!("empty summand in `{text}`") });
    }
    Ok(out)
}

fn split_args(text: &str) -> Vec<&str> {
    let mut out = vec![];
    let mut depth = 0;
    let mut start = 0;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

/// A constant expression such as `1+2*i`, `-0.5` or `pi/2`.
pub fn parse_complex(text: &str) -> Result<C64> {
    parse(text)?.eval_with(&|_| None)
}

fn real(text: &str) -> Result<f64> {
    let v = parse_complex(text)?;
    if v.im != 0.0 {
        return Err(bad(format!("`{text}` must be real")));
    }
    Ok(v.re)
}

fn parse_product(text: &str) -> Result<Hyperfunction> {
    // Optional constant factor before the last top-level '*'.
    let mut depth = 0;
    let mut star = None;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => star = Some(i),
            _ => {}
        }
    }
    if let Some(i) = star {
        let c = parse_complex(&text[..i])?;
        return Ok(parse_call(text[i + 1..].trim())?.scale(c));
    }
    parse_call(text)
}

fn parse_call(text: &str) -> Result<Hyperfunction> {
    if let Ok(c) = parse_complex(text) {
        if c == C64::new(0.0, 0.0) {
            return Ok(Hyperfunction::zero(1));
        }
        return Err(bad(format!("`{text}` is a nonzero constant, not a hyperfunction")));
    }
    let open = text.find('(').ok_or_else(|| Error::Syntax { pos: 0, msg: format!("expected name(args), got `{text}`") })?;
    if !text.ends_with(')') {
        return Err(Error::Syntax { pos: text.len(), msg: "expected ')'".into() });
    }
    let name = text[..open].trim();
    let args = split_args(&text[open + 1..text.len() - 1]);
    let arity = |k: &[usize]| -> Result<()> {
        if k.contains(&args.len()) {
            Ok(())
        } else {
            Err(bad(format!("{name} takes {k:?} arguments, got {}", args.len())))
        }
    };
    match name {
        "delta" => {
            arity(&[1, 2])?;
            let a: Vec<f64> = args.iter().map(|s| real(s)).collect::<Result<_>>()?;
            Hyperfunction::delta(&a)
        }
        "heaviside" => {
            arity(&[0, 1])?;
            let a = if args[0].is_empty() { 0.0 } else { real(args[0])? };
            Hyperfunction::heaviside_exp(C64::new(0.0, 0.0), a)
        }
        "heaviside_exp" => {
            arity(&[2])?;
            Hyperfunction::heaviside_exp(parse_complex(args[0])?, real(args[1])?)
        }
        "diff" => {
            arity(&[1, 2])?;
            let u = parse_builtin(args[0])?;
            let k = if args.len() == 2 { real(args[1])? } else { 1.0 };
            if k < 0.0 || k.fract() != 0.0 {
                return Err(bad("derivative order must be a nonnegative integer"));
            }
            let mut u = u;
            for _ in 0..k as usize {
                u = u.derivative(0)?;
            }
            Ok(u)
        }
        _ => Err(Error::UnknownIdentifier(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_forms() {
        assert!(parse_builtin("0").unwrap().is_zero_literal());
        let u = parse_builtin("delta(1) - 2*heaviside_exp(0.5, 0)").unwrap();
        assert_eq!(u.terms.len(), 4);
        assert!((u.terms[2].coeff + 2.0 * Hyperfunction::delta(&[0.0]).unwrap().terms[0].coeff).norm() < 1e-15);
        assert_eq!(parse_builtin("-delta(0)").unwrap().terms[0].coeff, -Hyperfunction::delta(&[0.0]).unwrap().terms[0].coeff);
        assert_eq!(parse_builtin("delta(1e-3)").unwrap().support.vertex, vec![1e-3]);
        assert_eq!(parse_builtin("delta(0, 1)").unwrap().dim, 2);
        assert_eq!(parse_builtin("diff(delta(0), 2)").unwrap().terms.len(), 2);
        assert!(parse_builtin("delta(").is_err());
        assert!(parse_builtin("gamma(1)").is_err());
        assert!(parse_builtin("3").is_err());
    }

    #[test]
    fn expr_literal_round_trip() {
        let u = parse_builtin("delta(1) + heaviside_exp(0.5 + 0.25*i, 0)").unwrap();
        let v = to_json(&u).unwrap();
        let w = from_json(&v).unwrap();
        assert_eq!(to_json(&w).unwrap(), v);
        let z = [C64::new(0.3, 0.7)];
        for (a, b) in u.terms.iter().zip(&w.terms) {
            assert!((a.func.eval(&z) - b.func.eval(&z)).norm() < 1e-14);
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let v = serde_json::json!({"dim": 1, "terms": [], "support": {"vertex": [0.0], "generators": []}, "extra": 1});
        assert!(from_json(&v).is_err());
    }
}
