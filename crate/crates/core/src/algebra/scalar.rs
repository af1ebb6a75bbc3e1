//! Exact scalars in the field ℚ(i, √2).
//!
//! An [`ExactScalar`] is stored as `a + b·√2` where `a` and `b` are Gaussian
//! rationals. Every constant that shows up in the Dye and conjugator
//! constructions (±1, ±i, 1/2, 1/√2) lives here, so the symbolic layers never
//! touch floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A Gaussian rational `p + q·i`.
pub type Gaussian = Complex<BigRational>;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn gaussian_is_zero(z: &Gaussian) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

fn gaussian_inv(z: &Gaussian) -> Result<Gaussian> {
    let norm = &z.re * &z.re + &z.im * &z.im;
    if norm.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Complex::new(&z.re / &norm, -&z.im / &norm))
}

/// Element `a + b·√2` of ℚ(i, √2).
///
/// Both components are kept in lowest terms by `BigRational`, so the
/// representation is unique and derived equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: Gaussian,
    b: Gaussian,
}

impl ExactScalar {
    pub fn new(a: Gaussian, b: Gaussian) -> Self {
        ExactScalar { a, b }
    }

    pub fn zero() -> Self {
        ExactScalar::new(Gaussian::zero(), Gaussian::zero())
    }

    pub fn one() -> Self {
        ExactScalar::integer(1)
    }

    pub fn integer(k: i64) -> Self {
        ExactScalar::rational(k, 1)
    }

    /// `p / q`. Panics if `q == 0`.
    pub fn rational(p: i64, q: i64) -> Self {
        ExactScalar::new(Complex::new(rat(p, q), rat(0, 1)), Gaussian::zero())
    }

    pub fn from_gaussian(a: Gaussian) -> Self {
        ExactScalar::new(a, Gaussian::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar::new(Complex::new(rat(0, 1), rat(1, 1)), Gaussian::zero())
    }

    pub fn sqrt2() -> Self {
        ExactScalar::new(Gaussian::zero(), Complex::new(rat(1, 1), rat(0, 1)))
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        ExactScalar::new(Gaussian::zero(), Complex::new(rat(1, 2), rat(0, 1)))
    }

    /// Gaussian-rational component `a` of `a + b√2`.
    pub fn a(&self) -> &Gaussian {
        &self.a
    }

    /// Gaussian-rational component `b` of `a + b√2`.
    pub fn b(&self) -> &Gaussian {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        gaussian_is_zero(&self.a) && gaussian_is_zero(&self.b)
    }

    pub fn is_one(&self) -> bool {
        self.a.re.is_one() && self.a.im.is_zero() && gaussian_is_zero(&self.b)
    }

    /// Complex conjugation. `√2` is real, so both Gaussian parts are conjugated.
    pub fn conj(&self) -> Self {
        ExactScalar::new(self.a.conj(), self.b.conj())
    }

    /// Multiplicative inverse through the `√2`-conjugate:
    /// `1/(a + b√2) = (a − b√2) / (a² − 2b²)`.
    ///
    /// `a² − 2b²` vanishes only at zero because `√2 ∉ ℚ(i)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let two = Complex::new(rat(2, 1), rat(0, 1));
        let norm = &self.a * &self.a - &two * &self.b * &self.b;
        let norm_inv = gaussian_inv(&norm)?;
        Ok(ExactScalar::new(
            &self.a * &norm_inv,
            -(&self.b * &norm_inv),
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Machine-precision value.
    pub fn to_complex64(&self) -> Complex64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let s = std::f64::consts::SQRT_2;
        Complex64::new(
            f(&self.a.re) + s * f(&self.b.re),
            f(&self.a.im) + s * f(&self.b.im),
        )
    }

    /// The four rational coordinates `(a_re, a_im, b_re, b_im)`.
    pub fn parts(&self) -> [&BigRational; 4] {
        [&self.a.re, &self.a.im, &self.b.re, &self.b.im]
    }

    pub fn from_parts(parts: [BigRational; 4]) -> Self {
        let [ar, ai, br, bi] = parts;
        ExactScalar::new(Complex::new(ar, ai), Complex::new(br, bi))
    }

    /// Natural power.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactScalar::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(k: i64) -> Self {
        ExactScalar::integer(k)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let bd = &self.b * &rhs.b;
        let a = &self.a * &rhs.a + &bd + &bd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        ExactScalar::new(a, b)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

/// `p/q` with the denominator always written out.
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a fraction: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

fn push_rational_term(out: &mut String, r: &BigRational, suffix: &str) {
    if r.is_zero() {
        return;
    }
    let neg = r.is_negative();
    let mag = r.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mag.denom().is_one() {
        out.push_str(&mag.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", mag.numer(), mag.denom()));
    }
    out.push_str(suffix);
}

/// Renders in the expression language: `1/2 - 3*i + 1/2*r2`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        push_rational_term(&mut s, &self.a.re, "");
        push_rational_term(&mut s, &self.a.im, "*i");
        push_rational_term(&mut s, &self.b.re, "*r2");
        push_rational_term(&mut s, &self.b.im, "*i*r2");
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}
