//! Dense univariate polynomials in `u`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::coeff::Coeff;

/// Dense polynomial, `coeffs[i]` is the coefficient of `u^i`. Trailing
/// zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        UPoly::new(vec![c])
    }

    /// `u`
    pub fn var() -> Self {
        UPoly::new(vec![C::zero(), C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &C) -> Self {
        UPoly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Coeff> Zero for UPoly<C> {
    fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Coeff> One for UPoly<C> {
    fn one() -> Self {
        UPoly::constant(C::one())
    }
}

impl<C: Coeff> Add for UPoly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        UPoly::new(long)
    }
}

impl<C: Coeff> Neg for UPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        UPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<C: Coeff> Sub for UPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff> Mul for UPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Mul for &UPoly<C> {
    type Output = UPoly<C>;
    fn mul(self, rhs: Self) -> UPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(out)
    }
}

/// Newton interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn interpolate<C: Coeff>(xs: &[C], ys: &[C]) -> UPoly<C> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd: Vec<C> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
    }
    let mut acc = UPoly::zero();
    for i in (0..n).rev() {
        let shift = UPoly::new(vec![-xs[i].clone(), C::one()]);
        acc = &acc * &shift + UPoly::constant(dd[i].clone());
    }
    acc
}
