//! Arbitrary-precision complex scalars.
//!
//! A [`Scalar`] wraps an MPC complex number. Working precision is carried by a
//! [`Precision`] value that every constructor takes explicitly; arithmetic
//! between two scalars keeps the precision of the left operand, so a single
//! computation stays uniform as long as its inputs were built from one
//! `Precision`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 16;

/// Working precision, in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(Self::DEFAULT_DIGITS)
    }
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 128;

    pub fn new(digits: u32) -> Self {
        assert!(digits >= 8, "precision below 8 digits is not supported");
        Self { digits }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    pub fn bits(self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// `10^(-digits + offset)` as a real number at this precision.
    pub fn epsilon_with_offset(self, offset: i32) -> Float {
        let exp = offset - self.digits as i32;
        Float::with_val(self.bits(), 10).pow(exp)
    }

    /// Denominators below this modulus are treated as poles.
    pub fn singularity_threshold(self) -> Float {
        self.epsilon_with_offset(10)
    }

    pub fn zero(self) -> Scalar {
        Scalar(Complex::new(self.bits()))
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (n, 0)))
    }

    pub fn ratio(self, num: i64, den: i64) -> Scalar {
        self.int(num) / self.int(den)
    }

    /// Exact binary value of an `f64`.
    pub fn real(self, x: f64) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (x, 0.0)))
    }

    pub fn complex(self, re: f64, im: f64) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (re, im)))
    }

    pub fn from_float(self, x: &Float) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (x, 0)))
    }

    pub fn pi(self) -> Scalar {
        let pi = Float::with_val(self.bits(), Constant::Pi);
        Scalar(Complex::with_val(self.bits(), (pi, 0)))
    }

    pub fn factorial(self, n: u32) -> Scalar {
        let f = Float::with_val(self.bits(), Float::factorial(n));
        self.from_float(&f)
    }

    pub fn binomial(self, n: u32, k: u32) -> Scalar {
        if k > n {
            return self.zero();
        }
        let b = rug::Integer::from(rug::Integer::binomial_u(n, k));
        Scalar(Complex::with_val(self.bits(), (b, 0)))
    }

    /// Parses a decimal literal (`0.5235987`, `-1e-3`).
    pub fn parse_decimal(self, text: &str) -> Result<Scalar> {
        let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse {
            input: text.to_string(),
            reason: e.to_string(),
        })?;
        let f = Float::with_val(self.bits(), parsed);
        Ok(self.from_float(&f))
    }

    /// Parses an angle given either as decimal radians or as a rational
    /// multiple of pi: `pi`, `pi/6`, `2pi/3`, `2*pi/3`, `-pi/4`, `0.25*pi`.
    pub fn parse_angle(self, text: &str) -> Result<Scalar> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        let Some(pos) = lower.find("pi") else {
            return self.parse_decimal(&t);
        };
        let bad = |reason: &str| Error::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        let head = lower[..pos].trim_end_matches('*');
        let tail = &lower[pos + 2..];
        let coeff = match head {
            "" | "+" => self.one(),
            "-" => -self.one(),
            h => self.parse_decimal(h)?,
        };
        let den = if tail.is_empty() {
            self.one()
        } else if let Some(d) = tail.strip_prefix('/') {
            let v = self.parse_decimal(d)?;
            if v.is_zero() {
                return Err(bad("division by zero"));
            }
            v
        } else {
            return Err(bad("expected `/` after pi"));
        };
        Ok(coeff * self.pi() / den)
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, PartialEq)]
pub struct Scalar(pub(crate) Complex);

impl Scalar {
    pub fn from_complex(c: Complex) -> Self {
        Scalar(c)
    }

    pub fn as_complex(&self) -> &Complex {
        &self.0
    }

    pub fn bits(&self) -> u32 {
        self.0.prec().0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.0.imag().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.bits(), self.0.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// Modulus strictly below `thr`.
    pub fn is_below(&self, thr: &Float) -> bool {
        self.abs() < *thr
    }

    pub fn zero_like(&self) -> Scalar {
        Scalar(Complex::new(self.bits()))
    }

    pub fn one_like(&self) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (1, 0)))
    }

    pub fn int_like(&self, n: i64) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (n, 0)))
    }

    pub fn sin(&self) -> Scalar {
        Scalar(self.0.clone().sin())
    }

    pub fn cos(&self) -> Scalar {
        Scalar(self.0.clone().cos())
    }

    pub fn sin_cos(&self) -> (Scalar, Scalar) {
        let (s, c) = self
            .0
            .clone()
            .sin_cos(Complex::new(self.bits()));
        (Scalar(s), Scalar(c))
    }

    pub fn atan(&self) -> Scalar {
        Scalar(self.0.clone().atan())
    }

    pub fn exp(&self) -> Scalar {
        Scalar(self.0.clone().exp())
    }

    pub fn sqrt(&self) -> Scalar {
        Scalar(self.0.clone().sqrt())
    }

    pub fn sinh(&self) -> Scalar {
        Scalar(self.0.clone().sinh())
    }

    pub fn recip(&self) -> Scalar {
        Scalar(self.0.clone().recip())
    }

    pub fn conj(&self) -> Scalar {
        Scalar(self.0.clone().conj())
    }

    pub fn powu(&self, n: u32) -> Scalar {
        if n == 0 {
            return self.one_like();
        }
        Scalar(Complex::with_val(self.bits(), (&self.0).pow(n)))
    }

    pub fn powi(&self, n: i32) -> Scalar {
        if n >= 0 {
            self.powu(n as u32)
        } else {
            self.powu(n.unsigned_abs()).recip()
        }
    }

    pub fn mul_int(&self, n: i64) -> Scalar {
        Scalar(Complex::with_val(self.bits(), &self.0 * n))
    }

    pub fn div_int(&self, n: i64) -> Scalar {
        Scalar(Complex::with_val(self.bits(), &self.0 / n))
    }

    /// Real part as a scalar (imaginary part dropped).
    pub fn real_part(&self) -> Scalar {
        Scalar(Complex::with_val(self.bits(), (self.0.real(), 0)))
    }

    /// `|imag| ≤ 10^(-digits/2) · max(1, |real|)`.
    pub fn is_physically_real(&self, prec: Precision) -> bool {
        let half = prec.epsilon_with_offset(prec.digits() as i32 / 2);
        let scale = Float::with_val(self.bits(), self.0.real().abs_ref()).max(&Float::with_val(self.bits(), 1));
        Float::with_val(self.bits(), self.0.imag().abs_ref()) <= half * scale
    }

    /// Modulus of the difference, relative to `|reference|` (absolute when the
    /// reference vanishes).
    pub fn rel_dev(&self, reference: &Scalar) -> f64 {
        let diff = (self - reference).abs();
        let r = reference.abs();
        if r.is_zero() {
            diff.to_f64()
        } else {
            Float::with_val(self.bits(), diff / r).to_f64()
        }
    }

    pub fn abs_dev(&self, reference: &Scalar) -> f64 {
        (self - reference).abs_f64()
    }

    /// Real part rendered with `digits` significant digits.
    pub fn format_real(&self, digits: usize) -> String {
        format_float(self.0.real(), digits)
    }

    /// Real part in positional notation with `sig` significant digits
    /// (scientific beyond 60 places either side of the point).
    pub fn format_decimal(&self, sig: usize) -> String {
        format_positional(self.0.real(), sig)
    }

    pub fn format_imag(&self, digits: usize) -> String {
        format_float(self.0.imag(), digits)
    }
}

fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    format!("{:.*e}", digits.max(1), x)
}

fn format_positional(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    // rug counts significant digits here
    let sci = format!("{:.*e}", sig, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i64 = exp.parse().expect("integer exponent");
    if exp.abs() > 60 {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            format!("{digits}{}", "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{body}")
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.20e}, {:.20e})", self.0.real(), self.0.imag())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        if self.0.imag().is_zero() {
            write!(f, "{}", format_float(self.0.real(), digits))
        } else {
            write!(
                f,
                "{} + {}i",
                format_float(self.0.real(), digits),
                format_float(self.0.imag(), digits)
            )
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(Complex::with_val(self.0.prec(), &self.0 $op &rhs.0))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(Complex::with_val(self.0.prec(), &self.0 $op &rhs.0))
            }
        }
        impl $atr<&Scalar> for Scalar {
            fn $amethod(&mut self, rhs: &Scalar) {
                self.0.$amethod(&rhs.0);
            }
        }
        impl $atr<Scalar> for Scalar {
            fn $amethod(&mut self, rhs: Scalar) {
                self.0.$amethod(rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);
binop!(Div, div, DivAssign, div_assign, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(Complex::with_val(self.0.prec(), -&self.0))
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(mut iter: I) -> Scalar {
        let mut acc = iter.next().expect("sum of an empty scalar iterator");
        for x in iter {
            acc += x;
        }
        acc
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(mut iter: I) -> Scalar {
        let mut acc = iter.next().expect("product of an empty scalar iterator");
        for x in iter {
            acc *= x;
        }
        acc
    }
}

/// Product of a possibly empty sequence; `one` is returned for no factors.
pub fn product_or(one: &Scalar, factors: impl IntoIterator<Item = Scalar>) -> Scalar {
    factors.into_iter().fold(one.clone(), |acc, x| acc * x)
}

/// Sum of a possibly empty sequence.
pub fn sum_or(zero: &Scalar, terms: impl IntoIterator<Item = Scalar>) -> Scalar {
    terms.into_iter().fold(zero.clone(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_angles() {
        let p = Precision::new(60);
        let pi = p.pi();
        assert!(p.parse_angle("pi/2").unwrap().rel_dev(&(pi.clone() / p.int(2))) < 1e-58);
        assert!(p.parse_angle("2*pi/3").unwrap().rel_dev(&(pi.mul_int(2) / p.int(3))) < 1e-58);
        assert!(p.parse_angle("-pi/4").unwrap().rel_dev(&(-pi.clone() / p.int(4))) < 1e-58);
        assert!(p.parse_angle("0.25pi").unwrap().rel_dev(&(pi.clone() / p.int(4))) < 1e-58);
        assert!(p.parse_angle("pi").unwrap().rel_dev(&pi) < 1e-58);
        let d = p.parse_angle("0.5235987").unwrap();
        assert_eq!(d.format_real(7), "5.235987e-1");
        assert_eq!(d.format_decimal(7), "0.5235987");
        assert_eq!(p.real(-1234.5).format_decimal(6), "-1234.50");
        assert_eq!(p.int(42).format_decimal(2), "42");
        assert_eq!(p.real(0.00125).format_decimal(2), "0.0013");
        assert!(p.parse_angle("pi*3").is_err());
        assert!(p.parse_angle("pi/0").is_err());
        assert!(p.parse_angle("abc").is_err());
    }

    #[test]
    fn trig_and_threshold() {
        let p = Precision::new(80);
        let x = p.pi() / p.int(6);
        assert!(x.sin().rel_dev(&p.ratio(1, 2)) < 1e-78);
        let (s, c) = x.sin_cos();
        assert!((s.powu(2) + c.powu(2)).rel_dev(&p.one()) < 1e-78);
        assert!(p.singularity_threshold() < 1e-69);
        assert!(p.singularity_threshold() > 1e-71);
    }

    #[test]
    fn physically_real() {
        let p = Precision::new(40);
        assert!(p.complex(2.0, 1e-25).is_physically_real(p));
        assert!(!p.complex(2.0, 1e-15).is_physically_real(p));
    }

    #[test]
    fn factorials_and_binomials() {
        let p = Precision::new(40);
        assert_eq!(p.factorial(5), p.int(120));
        assert_eq!(p.binomial(6, 2), p.int(15));
        assert!(p.binomial(2, 3).is_zero());
    }
}
