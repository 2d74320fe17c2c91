//! Exact coefficient fields.
//!
//! Two fields are supported: the rationals and the Gaussian rationals
//! `a + bi` with `a, b` rational. Everything that builds polynomials is
//! generic over [`Coeff`], so a computation only pays for complex
//! arithmetic when a representation actually has entries in `Q(i)`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type Gaussian = Complex<BigRational>;

/// An exact field usable as a polynomial coefficient.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when the field is `Q` (no imaginary part can occur).
    const REAL: bool;

    fn from_int(n: i64) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn from_gaussian(g: &Gaussian) -> Option<Self>;
    fn to_gaussian(&self) -> Gaussian;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;

    /// `(re, im)` as rationals; `im` is zero for `Q`.
    fn parts(&self) -> (Rational, Rational) {
        let g = self.to_gaussian();
        (g.re, g.im)
    }

    /// Least common multiple of the denominators of the real and
    /// imaginary parts.
    fn denominator_lcm(&self) -> BigInt {
        let (re, im) = self.parts();
        re.denom().lcm(im.denom())
    }
}

impl Coeff for Rational {
    const REAL: bool = true;

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn from_gaussian(g: &Gaussian) -> Option<Self> {
        g.im.is_zero().then(|| g.re.clone())
    }
    fn to_gaussian(&self) -> Gaussian {
        Complex::new(self.clone(), Rational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn denominator_lcm(&self) -> BigInt {
        self.denom().clone()
    }
}

impl Coeff for Gaussian {
    const REAL: bool = false;

    fn from_int(n: i64) -> Self {
        Complex::new(Rational::from_int(n), Rational::zero())
    }
    fn from_rational(q: Rational) -> Self {
        Complex::new(q, Rational::zero())
    }
    fn from_gaussian(g: &Gaussian) -> Option<Self> {
        Some(g.clone())
    }
    fn to_gaussian(&self) -> Gaussian {
        self.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

/// Canonical text of a rational: `p` or `p/q`.
pub fn rational_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Text of a coefficient with its sign folded in, used by the polynomial
/// printer. Gaussian values with a nonzero imaginary part are wrapped in
/// parentheses.
pub fn coeff_text<C: Coeff>(c: &C) -> String {
    let (re, im) = c.parts();
    if im.is_zero() {
        return rational_text(&re);
    }
    if re.is_zero() {
        return format!("({}*i)", rational_text(&im));
    }
    let sign = if im.is_negative() { "-" } else { "+" };
    format!("({}{}{}*i)", rational_text(&re), sign, rational_text(&im.abs()))
}

/// JSON value of a coefficient: `"p/q"` over `Q`, `["re","im"]` over `Q(i)`.
pub fn coeff_json<C: Coeff>(c: &C) -> serde_json::Value {
    let (re, im) = c.parts();
    if C::REAL {
        serde_json::Value::String(rational_text(&re))
    } else {
        serde_json::json!([rational_text(&re), rational_text(&im)])
    }
}

pub fn gaussian(re: i64, im: i64) -> Gaussian {
    Complex::new(Rational::from_int(re), Rational::from_int(im))
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
