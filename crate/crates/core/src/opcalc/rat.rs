use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Complex rational re + i·im.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn int(v: i64) -> Self {
        CRat::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    pub fn frac(p: i64, q: i64) -> Self {
        CRat::new(BigRational::new(BigInt::from(p), BigInt::from(q)), BigRational::zero())
    }

    pub fn i() -> Self {
        CRat::new(BigRational::zero(), BigRational::one())
    }

    /// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`.
    pub fn parse_decimal(text: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("bad number `{text}`"));
        let (mant, exp) = match text.find(['e', 'E']) {
            Some(k) => (&text[..k], text[k + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (text, 0),
        };
        let (ip, fp) = match mant.split_once('.') {
            Some((a, b)) => (a, b),
            None => (mant, ""),
        };
        if ip.is_empty() && fp.is_empty() {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let shift = exp - fp.len() as i32;
        let ten = BigInt::from(10);
        let v = if shift >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, shift as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-shift) as usize))
        };
        Ok(CRat::new(v, BigRational::zero()))
    }

    pub fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(CRat::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = CRat::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl Zero for CRat {
    fn zero() -> Self {
        CRat::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CRat {
    fn one() -> Self {
        CRat::int(1)
    }
}

impl Add for &CRat {
    type Output = CRat;
    fn add(self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Add for CRat {
    type Output = CRat;
    fn add(self, o: CRat) -> CRat {
        &self + &o
    }
}

impl AddAssign<&CRat> for CRat {
    fn add_assign(&mut self, o: &CRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Sub for &CRat {
    type Output = CRat;
    fn sub(self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Sub for CRat {
    type Output = CRat;
    fn sub(self, o: CRat) -> CRat {
        &self - &o
    }
}

impl Mul for &CRat {
    type Output = CRat;
    fn mul(self, o: &CRat) -> CRat {
        CRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Mul for CRat {
    type Output = CRat;
    fn mul(self, o: CRat) -> CRat {
        &self * &o
    }
}

impl Div for &CRat {
    type Output = CRat;
    /// Panics on a zero divisor; use [`CRat::inv`] for a checked version.
    fn div(self, o: &CRat) -> CRat {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re, -self.im)
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                let s = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {s} {}*i)", self.re, self.im.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(CRat::parse_decimal("0.25").unwrap(), CRat::frac(1, 4));
        assert_eq!(CRat::parse_decimal("12").unwrap(), CRat::int(12));
        assert_eq!(CRat::parse_decimal("1.5e-3").unwrap(), CRat::frac(3, 2000));
        assert_eq!(CRat::parse_decimal("2e2").unwrap(), CRat::int(200));
        assert!(CRat::parse_decimal(".").is_err());
    }

    #[test]
    fn field_ops() {
        let a = CRat::new(CRat::frac(1, 2).re, CRat::int(3).re);
        let b = &a * &a.inv().unwrap();
        assert!(b.is_one());
        assert_eq!(&CRat::i() * &CRat::i(), CRat::int(-1));
        assert!(CRat::zero().inv().is_err());
        assert_eq!(a.to_c64(), C64::new(0.5, 3.0));
    }
}
