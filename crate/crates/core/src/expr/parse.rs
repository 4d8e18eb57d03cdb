use super::Expr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = vec![];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == 'e' || bytes[i] == 'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == '+' || bytes[j] == '-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = bytes[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .map_err(|_| Error::Syntax { pos: start, msg: format!("bad number `{text}`") })?;
            out.push((Tok::Num(v), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(bytes[start..i].iter().collect()), start));
        } else if "+-*/^(),=".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.here(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{c}`"))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.int_exponent()?;
            Ok(Expr::Pow(Box::new(base), k))
        } else {
            Ok(base)
        }
    }

    fn int_exponent(&mut self) -> Result<i32> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let k = match self.peek() {
            Some(Tok::Num(v)) if v.fract() == 0.0 && v.abs() < 1e6 => *v as i32,
            _ => return self.err("exponent must be an integer literal"),
        };
        self.pos += 1;
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -k } else { k })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let at = self.here();
                self.pos += 1;
                if self.peek() == Some(&Tok::Op('(')) {
                    self.pos += 1;
                    return self.call(&name, at);
                }
                Ok(match name.as_str() {
                    "i" => Expr::Imag,
                    "pi" => Expr::Pi,
                    _ => Expr::Var(name),
                })
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }

    fn call(&mut self, name: &str, at: usize) -> Result<Expr> {
        let arg = self.sum()?;
        let e = match name {
            "exp" => Expr::Exp(Box::new(arg)),
            "sqrt" => Expr::Sqrt(Box::new(arg)),
            "log" => {
                let mut cut = 0.0;
                if self.eat(',') {
                    if matches!(self.peek(), Some(Tok::Ident(s)) if s == "cut") {
                        self.pos += 1;
                        self.expect('=')?;
                    }
                    let at = self.here();
                    let c = self.sum()?;
                    if !c.variables().is_empty() {
                        return Err(Error::Syntax { pos: at, msg: "cut angle must be a real constant".into() });
                    }
                    let v = c.eval_with(&|_| None)?;
                    if v.im != 0.0 || !v.re.is_finite() {
                        return Err(Error::Syntax { pos: at, msg: "cut angle must be a real constant".into() });
                    }
                    cut = v.re;
                }
                Expr::Log(Box::new(arg), cut)
            }
            _ => {
                let _ = at;
                return Err(Error::UnknownIdentifier(name.to_string()));
            }
        };
        self.expect(')')?;
        Ok(e)
    }
}

/// Parses an expression. Grammar is documented in docs/expr.md.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: text.chars().count() };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_position() {
        match parse("1 + * 2") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse("sin(z)"), Err(Error::UnknownIdentifier("sin".into())));
        assert!(matches!(parse("z^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(z"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse("log(z, cut=w)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn precedence() {
        let e = parse("1 + 2*z^2").unwrap();
        let z = crate::C64::new(3.0, 0.0);
        assert_eq!(e.eval_with(&|_| Some(z)).unwrap().re, 19.0);
        assert_eq!(parse("-2^2").unwrap().eval_with(&|_| None).unwrap().re, -4.0);
        assert_eq!(parse("2/4/2").unwrap().eval_with(&|_| None).unwrap().re, 0.25);
        let c = parse("log(z, cut=pi/2)").unwrap();
        assert!(matches!(c, Expr::Log(_, t) if (t - std::f64::consts::FRAC_PI_2).abs() < 1e-15));
    }
}
