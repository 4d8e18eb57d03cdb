use num_complex::Complex64 as C64;

use super::{log_cut, Expr};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Node {
    Const(C64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Exp(Box<Node>),
    Log(Box<Node>, f64),
    Sqrt(Box<Node>),
}

/// An expression with variables resolved to slot indices.
#[derive(Debug, Clone)]
pub struct Compiled {
    root: Node,
    arity: usize,
}

impl Compiled {
    /// `vars[k]` is bound to slot k. Each entry may list aliases separated by '|'.
    pub fn new(e: &Expr, vars: &[String]) -> Result<Self> {
        let slot = |name: &str| vars.iter().position(|v| v.split('|').any(|a| a == name));
        Ok(Compiled { root: build(e, &slot)?, arity: vars.len() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        eval(&self.root, x)
    }
}

fn build(e: &Expr, slot: &dyn Fn(&str) -> Option<usize>) -> Result<Node> {
    let b = |a: &Expr| -> Result<Box<Node>> { Ok(Box::new(build(a, slot)?)) };
    Ok(match e {
        Expr::Num(v) => Node::Const(C64::new(*v, 0.0)),
        Expr::Imag => Node::Const(C64::new(0.0, 1.0)),
        Expr::Pi => Node::Const(C64::new(std::f64::consts::PI, 0.0)),
        Expr::Const(c) => Node::Const(*c),
        Expr::Var(v) => Node::Var(slot(v).ok_or_else(|| Error::UnknownIdentifier(v.clone()))?),
        Expr::Neg(a) => Node::Neg(b(a)?),
        Expr::Add(x, y) => Node::Add(b(x)?, b(y)?),
        Expr::Sub(x, y) => Node::Sub(b(x)?, b(y)?),
        Expr::Mul(x, y) => Node::Mul(b(x)?, b(y)?),
        Expr::Div(x, y) => {
            let d = b(y)?;
            if let Node::Const(c) = *d {
                if c == C64::new(0.0, 0.0) {
                    return Err(Error::Domain("division by a literal zero".into()));
                }
            }
            Node::Div(b(x)?, d)
        }
        Expr::Pow(a, k) => Node::Pow(b(a)?, *k),
        Expr::Exp(a) => Node::Exp(b(a)?),
        Expr::Log(a, t) => Node::Log(b(a)?, *t),
        Expr::Sqrt(a) => Node::Sqrt(b(a)?),
    })
}

fn eval(n: &Node, x: &[C64]) -> C64 {
    match n {
        Node::Const(c) => *c,
        Node::Var(i) => x[*i],
        Node::Neg(a) => -eval(a, x),
        Node::Add(a, b) => eval(a, x) + eval(b, x),
        Node::Sub(a, b) => eval(a, x) - eval(b, x),
        Node::Mul(a, b) => eval(a, x) * eval(b, x),
        Node::Div(a, b) => eval(a, x) / eval(b, x),
        Node::Pow(a, k) => {
            let v = eval(a, x);
            match k {
                0 => C64::new(1.0, 0.0),
                1 => v,
                2 => v * v,
                _ => v.powi(*k),
            }
        }
        Node::Exp(a) => eval(a, x).exp(),
        Node::Log(a, t) => log_cut(eval(a, x), *t),
        Node::Sqrt(a) => eval(a, x).sqrt(),
    }
}
