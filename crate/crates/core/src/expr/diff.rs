use super::Expr;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn add(x: Expr, y: Expr) -> Expr {
    if x.is_zero() {
        y
    } else if y.is_zero() {
        x
    } else {
        Expr::Add(b(x), b(y))
    }
}

fn sub(x: Expr, y: Expr) -> Expr {
    if y.is_zero() {
        x
    } else if x.is_zero() {
        neg(y)
    } else {
        Expr::Sub(b(x), b(y))
    }
}

fn neg(x: Expr) -> Expr {
    match x {
        e if e.is_zero() => e,
        Expr::Neg(a) => *a,
        e => Expr::Neg(b(e)),
    }
}

fn mul(x: Expr, y: Expr) -> Expr {
    if x.is_zero() || y.is_zero() {
        Expr::Num(0.0)
    } else if x.is_one() {
        y
    } else if y.is_one() {
        x
    } else {
        Expr::Mul(b(x), b(y))
    }
}

fn div(x: Expr, y: Expr) -> Expr {
    if x.is_zero() {
        Expr::Num(0.0)
    } else if y.is_one() {
        x
    } else {
        Expr::Div(b(x), b(y))
    }
}

fn int(k: i32) -> Expr {
    if k >= 0 {
        Expr::Num(k as f64)
    } else {
        Expr::Neg(b(Expr::Num(-k as f64)))
    }
}

/// Symbolic derivative with light 0/1 folding.
pub fn diff(e: &Expr, v: &str) -> Expr {
    match e {
        Expr::Num(_) | Expr::Imag | Expr::Pi | Expr::Const(_) => Expr::Num(0.0),
        Expr::Var(n) => Expr::Num(if n == v { 1.0 } else { 0.0 }),
        Expr::Neg(a) => neg(diff(a, v)),
        Expr::Add(x, y) => add(diff(x, v), diff(y, v)),
        Expr::Sub(x, y) => sub(diff(x, v), diff(y, v)),
        Expr::Mul(x, y) => add(mul(diff(x, v), (**y).clone()), mul((**x).clone(), diff(y, v))),
        Expr::Div(x, y) => {
            let dx = diff(x, v);
            let dy = diff(y, v);
            if dy.is_zero() {
                div(dx, (**y).clone())
            } else {
                let num = sub(mul(dx, (**y).clone()), mul((**x).clone(), dy));
                div(num, Expr::Pow(y.clone(), 2))
            }
        }
        Expr::Pow(a, k) => {
            let da = diff(a, v);
            match k {
                0 => Expr::Num(0.0),
                1 => da,
                _ => {
                    let p = if *k == 2 { (**a).clone() } else { Expr::Pow(a.clone(), k - 1) };
                    mul(mul(int(*k), p), da)
                }
            }
        }
        Expr::Exp(a) => mul(e.clone(), diff(a, v)),
        Expr::Log(a, _) => div(diff(a, v), (**a).clone()),
        Expr::Sqrt(a) => div(diff(a, v), mul(Expr::Num(2.0), e.clone())),
    }
}
