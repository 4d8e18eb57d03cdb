//! Complex-analytic expressions: AST, parser, printer, evaluator and
//! symbolic derivative, plus analytic functions carrying growth claims.

mod compile;
mod diff;
mod function;
mod parse;

pub use compile::Compiled;
pub use function::{
    check_growth, check_infra_exponential, AnalyticFunction, Body, GrowthCertificate, GrowthReport,
    InfraReport, InfraSample, NumericFn, Sign, WedgeDescriptor, WedgeKind,
};
pub use parse::parse;

use num_complex::Complex64 as C64;
use std::fmt;

/// Expression tree. `Num` and `Imag` come from source text; `Const` only from
/// programmatic construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Imag,
    Pi,
    Const(C64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    /// Logarithm with arg taken in (θ − π, θ + π]; θ = 0 is the principal branch.
    Log(Box<Expr>, f64),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn constant(c: C64) -> Expr {
        if c.im == 0.0 && c.re >= 0.0 {
            Expr::Num(c.re)
        } else {
            Expr::Const(c)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0) || matches!(self, Expr::Const(c) if *c == C64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 1.0) || matches!(self, Expr::Const(c) if *c == C64::new(1.0, 0.0))
    }

    /// Names of all variables, in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = vec![];
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Log(a, _) | Expr::Sqrt(a) => a.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Replaces variables by name.
    pub fn rename(&self, map: &dyn Fn(&str) -> Option<String>) -> Expr {
        self.substitute(&|v| map(v).map(Expr::Var))
    }

    /// Replaces variables by expressions.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let r = |a: &Expr| Box::new(a.substitute(map));
        match self {
            Expr::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Expr::Neg(a) => Expr::Neg(r(a)),
            Expr::Add(a, b) => Expr::Add(r(a), r(b)),
            Expr::Sub(a, b) => Expr::Sub(r(a), r(b)),
            Expr::Mul(a, b) => Expr::Mul(r(a), r(b)),
            Expr::Div(a, b) => Expr::Div(r(a), r(b)),
            Expr::Pow(a, k) => Expr::Pow(r(a), *k),
            Expr::Exp(a) => Expr::Exp(r(a)),
            Expr::Log(a, t) => Expr::Log(r(a), *t),
            Expr::Sqrt(a) => Expr::Sqrt(r(a)),
            _ => self.clone(),
        }
    }

    pub fn diff(&self, var: &str) -> Expr {
        diff::diff(self, var)
    }

    /// Evaluates with a name lookup; unknown names are an error.
    pub fn eval_with(&self, env: &dyn Fn(&str) -> Option<C64>) -> crate::Result<C64> {
        let vars = self.variables();
        let mut vals = Vec::with_capacity(vars.len());
        for v in &vars {
            vals.push(env(v).ok_or_else(|| crate::Error::UnknownIdentifier(v.clone()))?);
        }
        Ok(Compiled::new(self, &vars)?.eval(&vals))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if c.im != 0.0 || c.re < 0.0 => 5,
            Expr::Num(v) if *v < 0.0 => 5,
            _ => 6,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "(-{})", -v),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Imag => write!(f, "i"),
            Expr::Pi => write!(f, "pi"),
            Expr::Const(c) => {
                if c.im == 0.0 && c.re >= 0.0 {
                    write!(f, "{}", c.re)
                } else if c.im == 0.0 {
                    write!(f, "(-{})", -c.re)
                } else if c.im < 0.0 {
                    write!(f, "({} - {}*i)", c.re, -c.im)
                } else {
                    write!(f, "({} + {}*i)", c.re, c.im)
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.fmt_prec(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.fmt_prec(f, 3)
            }
            Expr::Pow(a, k) => {
                a.fmt_prec(f, 5)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Log(a, t) => {
                if *t == 0.0 {
                    write!(f, "log({a})")
                } else {
                    write!(f, "log({a}, cut={t})")
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Complex logarithm with arg in (θ − π, θ + π].
pub fn log_cut(w: C64, theta: f64) -> C64 {
    use std::f64::consts::PI;
    let mut a = w.arg();
    if theta != 0.0 {
        let k = ((a - theta + PI) / (2.0 * PI)).floor();
        a -= 2.0 * PI * k;
        // arg now in [θ − π, θ + π); move the lower endpoint up.
        if a <= theta - PI {
            a += 2.0 * PI;
        }
    }
    C64::new(w.norm().ln(), a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, vars: &[(&str, C64)]) -> C64 {
        parse(s)
            .unwrap()
            .eval_with(&|n| vars.iter().find(|(k, _)| *k == n).map(|(_, v)| *v))
            .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert!((ev("1/(zeta1-2)", &[("zeta1", C64::new(3.0, 0.0))]) - 1.0).norm() < 1e-15);
        assert!((ev("exp(-zeta1)", &[("zeta1", C64::new(0.0, 0.0))]) - 1.0).norm() < 1e-15);
        let v = ev("log(-(z1-1))", &[("z1", C64::new(1.0, 1.0))]);
        assert!((v - C64::new(0.0, -std::f64::consts::FRAC_PI_2)).norm() < 1e-15);
    }

    #[test]
    fn log_cut_jump() {
        use std::f64::consts::PI;
        for theta in [0.0, 1.0, -2.0, PI / 2.0] {
            // Crossing the cut ray at angle θ + π flips the imaginary part by 2π.
            let r = 1.7;
            let above = log_cut(C64::from_polar(r, theta + PI - 1e-9), theta);
            let below = log_cut(C64::from_polar(r, theta + PI + 1e-9), theta);
            assert!(((above.im - below.im) - 2.0 * PI).abs() < 1e-6, "theta {theta}");
            // Continuous elsewhere, e.g. across the ray at angle θ.
            let a = log_cut(C64::from_polar(r, theta - 1e-9), theta);
            let b = log_cut(C64::from_polar(r, theta + 1e-9), theta);
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn printer_shapes() {
        for (src, printed) in [
            ("a - (b - c)", "a - (b - c)"),
            ("a - b - c", "a - b - c"),
            ("-x^2", "-x^2"),
            ("(-x)^2", "(-x)^2"),
            ("a/(b*c)", "a/(b*c)"),
            ("z^-2", "z^(-2)"),
            ("log(z, cut=1.5)", "log(z, cut=1.5)"),
            ("2*i + 1e-7", "2*i + 0.0000001"),
        ] {
            assert_eq!(parse(src).unwrap().to_string(), printed);
        }
    }
}
