//! Sparse bivariate polynomials in `u` and `s`.
//!
//! The second variable is `s`, standing for the square root of `t`, so that
//! every determinant is a polynomial. Hypergraph-level results are moved to
//! `t` with [`collapse_to_t`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::coeff::{coeff_json, coeff_text, parse_rational, Coeff, Gaussian};
use super::upoly::UPoly;
use super::AlgebraError;

/// Exponent pair `(deg_u, deg_s)`.
pub type Exponent = (u32, u32);

/// Bivariate polynomial with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<C> {
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> BiPoly<C> {
    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }

    pub fn monomial(c: C, deg_u: u32, deg_s: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg_u, deg_s), c);
        }
        BiPoly { terms }
    }

    pub fn u() -> Self {
        Self::monomial(C::one(), 1, 0)
    }

    pub fn s() -> Self {
        Self::monomial(C::one(), 0, 1)
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = BiPoly::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                let v = slot.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, deg_u: u32, deg_s: u32) -> C {
        self.terms.get(&(deg_u, deg_s)).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree_u(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn degree_s(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(0, 0)
    }

    /// Coefficient of `s^k` as a polynomial in `u`.
    pub fn s_coeff(&self, k: u32) -> UPoly<C> {
        let deg = self
            .terms
            .keys()
            .filter(|e| e.1 == k)
            .map(|e| e.0 as usize)
            .max();
        let Some(deg) = deg else { return UPoly::zero() };
        let mut cs = vec![C::zero(); deg + 1];
        for (&(a, b), c) in &self.terms {
            if b == k {
                cs[a as usize] = c.clone();
            }
        }
        UPoly::new(cs)
    }

    /// Builds `sum_k coeffs[k](u) s^k`.
    pub fn from_s_coeffs(coeffs: &[UPoly<C>]) -> Self {
        let mut p = BiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (a, x) in c.coeffs().iter().enumerate() {
                p.add_term((a as u32, k as u32), x.clone());
            }
        }
        p
    }

    pub fn from_upoly(p: &UPoly<C>) -> Self {
        Self::from_s_coeffs(std::slice::from_ref(p))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(&e, x)| (e, x.clone() * c.clone())))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        BiPoly::from_terms(self.terms.iter().map(|(&e, c)| (e, f(c))))
    }

    /// Exact evaluation in the coefficient field.
    pub fn eval(&self, u: &C, s: &C) -> C {
        let mut acc = C::zero();
        for k in (0..=self.degree_s().unwrap_or(0)).rev() {
            acc = acc * s.clone() + self.s_coeff(k).eval(u);
        }
        acc
    }

    /// Substitutes a field value for `u`.
    pub fn subst_u(&self, u: &C) -> Self {
        let mut p = BiPoly::zero();
        for (&(a, b), c) in &self.terms {
            let mut x = c.clone();
            for _ in 0..a {
                x = x * u.clone();
            }
            p.add_term((0, b), x);
        }
        p
    }

    /// Substitutes `s -> s^k`.
    pub fn stretch_s(&self, k: u32) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(&(a, b), c)| ((a, b * k), c.clone())))
    }

    /// Drops every term with `s`-degree above `order`.
    pub fn truncate_s(&self, order: u32) -> Self {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.1 <= order)
                .map(|(&e, c)| (e, c.clone())),
        )
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly<C>) -> Option<BiPoly<C>> {
        let lead_d = d.leading()?;
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some((e, c)) = rem.leading() {
            if e.0 < lead_d.0 .0 || e.1 < lead_d.0 .1 {
                return None;
            }
            let t = BiPoly::monomial(c / lead_d.1.clone(), e.0 - lead_d.0 .0, e.1 - lead_d.0 .1);
            rem = rem - &t * d;
            quot = quot + t;
        }
        Some(quot)
    }

    /// Leading term in graded order (total degree, then `u`-degree).
    fn leading(&self) -> Option<(Exponent, C)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| (e.0 + e.1, e.0))
            .map(|(&e, c)| (e, c.clone()))
    }

    /// Terms in canonical printing order: total degree ascending, then
    /// `u`-degree descending.
    pub fn canonical_terms(&self) -> Vec<(Exponent, C)> {
        let mut v: Vec<(Exponent, C)> = self.terms.iter().map(|(&e, c)| (e, c.clone())).collect();
        v.sort_by(|a, b| {
            let ka = (a.0 .0 + a.0 .1, std::cmp::Reverse(a.0 .0));
            let kb = (b.0 .0 + b.0 .1, std::cmp::Reverse(b.0 .0));
            ka.cmp(&kb)
        });
        v
    }

    /// Canonical text with the given name for the second variable.
    pub fn to_text(&self, second: char) -> String {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((a, b), c)) in terms.iter().enumerate() {
            let mut text = coeff_text(c);
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            let mut factors = Vec::new();
            let is_one = text == "1";
            if !is_one || (*a == 0 && *b == 0) {
                factors.push(text);
            }
            if *a > 0 {
                factors.push(power_text('u', *a));
            }
            if *b > 0 {
                factors.push(power_text(second, *b));
            }
            let body = factors.join("*");
            match (i, negative) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    /// JSON coefficient map `{"a,b": coeff}` keyed by `deg_u,deg_s`.
    pub fn to_json_map(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for ((a, b), c) in self.canonical_terms() {
            map.insert(format!("{a},{b}"), coeff_json(&c));
        }
        serde_json::Value::Object(map)
    }

    /// Parses the canonical text form (and ordinary expressions built from
    /// `+ - * / ^`, parentheses, integers, `u`, the second variable and the
    /// imaginary unit `i`).
    pub fn parse(text: &str, second: char) -> Result<Self, AlgebraError> {
        let mut parser = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, second };
        let p = parser.expr()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p)
    }
}

fn power_text(var: char, e: u32) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// Complex evaluation of an exact polynomial, Horner in `s` over Horner in
/// `u`.
pub fn eval_complex<C: Coeff>(p: &BiPoly<C>, u: Complex64, s: Complex64) -> Complex64 {
    let Some(ds) = p.degree_s() else { return Complex64::new(0.0, 0.0) };
    let mut rows: Vec<Vec<(u32, Complex64)>> = vec![Vec::new(); ds as usize + 1];
    for (&(a, b), c) in p.terms() {
        rows[b as usize].push((a, c.to_c64()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for row in rows.iter().rev() {
        let du = row.iter().map(|t| t.0).max().unwrap_or(0) as usize;
        let mut dense = vec![Complex64::new(0.0, 0.0); du + 1];
        for &(a, c) in row {
            dense[a as usize] = c;
        }
        let inner = dense.iter().rev().fold(Complex64::new(0.0, 0.0), |x, c| x * u + c);
        acc = acc * s + inner;
    }
    acc
}

/// A polynomial in `u` and `t`, the hypergraph-level variables.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly<C>(BiPoly<C>);

impl<C: Coeff> TPoly<C> {
    /// Wraps a polynomial whose second exponent already counts powers of `t`.
    pub fn from_t_exponents(p: BiPoly<C>) -> Self {
        TPoly(p)
    }

    /// The same polynomial with the second exponent read as `t`.
    pub fn as_t_exponents(&self) -> &BiPoly<C> {
        &self.0
    }

    /// Back to `s` with `t = s^2`.
    pub fn to_s(&self) -> BiPoly<C> {
        self.0.stretch_s(2)
    }

    pub fn to_text(&self) -> String {
        self.0.to_text('t')
    }

    pub fn to_json_map(&self) -> serde_json::Value {
        self.0.to_json_map()
    }

    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        BiPoly::parse(text, 't').map(TPoly)
    }
}

impl<C: Coeff> fmt::Display for TPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Maps `s^2 -> t`. Fails on any odd power of `s`.
pub fn collapse_to_t<C: Coeff>(p: &BiPoly<C>) -> Result<TPoly<C>, AlgebraError> {
    let mut out = BiPoly::zero();
    for (&(a, b), c) in p.terms() {
        if b % 2 == 1 {
            return Err(AlgebraError::OddPowerOfS { deg_u: a, deg_s: b });
        }
        out.add_term((a, b / 2), c.clone());
    }
    Ok(TPoly(out))
}

impl<C: Coeff> fmt::Display for BiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text('s'))
    }
}

impl<C: Coeff> Zero for BiPoly<C> {
    fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for BiPoly<C> {
    fn one() -> Self {
        BiPoly::constant(C::one())
    }
}

impl<C: Coeff> Add for BiPoly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<C: Coeff> Add for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn add(self, rhs: Self) -> BiPoly<C> {
        self.clone() + rhs.clone()
    }
}

impl<C: Coeff> Neg for BiPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        BiPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<C: Coeff> Sub for BiPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff> Sub for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn sub(self, rhs: Self) -> BiPoly<C> {
        self.clone() - rhs.clone()
    }
}

impl<C: Coeff> Mul for &BiPoly<C> {
    type Output = BiPoly<C>;
    fn mul(self, rhs: Self) -> BiPoly<C> {
        let mut out = BiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Mul for BiPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    second: char,
}

impl Parser {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { position: self.pos, message: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr<C: Coeff>(&mut self) -> Result<BiPoly<C>, AlgebraError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<BiPoly<C>, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d: BiPoly<C> = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.error("division only by a nonzero constant"));
                    }
                    acc = acc.scale(&(C::one() / d.constant_term()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power<C: Coeff>(&mut self) -> Result<BiPoly<C>, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.digits().ok_or_else(|| self.error("expected exponent"))?;
            let e: u32 = e.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn atom<C: Coeff>(&mut self) -> Result<BiPoly<C>, AlgebraError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some('u') => {
                self.pos += 1;
                Ok(BiPoly::u())
            }
            Some(c) if c == self.second => {
                self.pos += 1;
                Ok(BiPoly::s())
            }
            Some('i') => {
                self.pos += 1;
                let i = C::from_gaussian(&super::coeff::gaussian(0, 1))
                    .ok_or_else(|| self.error("imaginary unit in a rational polynomial"))?;
                Ok(BiPoly::constant(i))
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap_or_default();
                let q = parse_rational(&d).ok_or_else(|| self.error("bad number"))?;
                Ok(BiPoly::constant(C::from_rational(q)))
            }
            _ => Err(self.error("unexpected character")),
        }
    }
}

/// Imaginary unit as a Gaussian polynomial constant.
pub fn imaginary_unit() -> BiPoly<Gaussian> {
    BiPoly::constant(super::coeff::gaussian(0, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{rat, Rational};

    type P = BiPoly<Rational>;

    fn parse(text: &str) -> P {
        P::parse(text, 's').unwrap()
    }

    #[test]
    fn canonical_text_order() {
        let p = parse("s^2*u - 3 + u^2 + 2*s");
        assert_eq!(p.to_string(), "-3 + 2*s + u^2 + u*s^2");
        assert_eq!(parse("1 - s^2").to_string(), "1 - s^2");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrip_with_fractions() {
        let p = parse("1/2*u*s - 7/3*s^4 + 5");
        assert_eq!(p.coeff(1, 1), rat(1, 2));
        assert_eq!(parse(&p.to_string()), p);
    }

    #[test]
    fn collapse_examples() {
        let t = collapse_to_t(&parse("1 - s^2")).unwrap();
        assert_eq!(t.to_text(), "1 - t");
        let t = collapse_to_t(&parse("1 - (1-u)^2*s^2")).unwrap();
        assert_eq!(t, TPoly::parse("1 - (1-u)^2*t").unwrap());
        assert_eq!(
            collapse_to_t(&parse("1 + s")),
            Err(AlgebraError::OddPowerOfS { deg_u: 0, deg_s: 1 })
        );
    }

    #[test]
    fn exact_division() {
        let a = parse("1 - u*s + 3*s^2");
        let b = parse("2 + u^2 - s");
        assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&parse("1 + s")), None);
    }

    #[test]
    fn complex_evaluation_examples() {
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(eval_complex(&parse("1 - s^2"), z, z), one);
        let v = eval_complex(&parse("u*s"), Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0));
        assert_eq!(v, Complex64::new(6.0, 0.0));
    }

    #[test]
    fn gaussian_parse() {
        let p = BiPoly::<Gaussian>::parse("(1+2*i)*u - i", 's').unwrap();
        assert_eq!(p.to_string(), "(-1*i) + (1+2*i)*u");
        assert!(P::parse("i*u", 's').is_err());
    }
}
