//! Power series in `s` truncated at a fixed order, with coefficients in
//! `C[u]`.

use num_traits::{One, Zero};

use super::bipoly::BiPoly;
use super::coeff::Coeff;
use super::upoly::UPoly;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    order: usize,
    coeffs: Vec<UPoly<C>>,
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![UPoly::zero(); order + 1];
        coeffs[0] = UPoly::one();
        TruncatedSeries { order, coeffs }
    }

    /// `p mod s^(order+1)`.
    pub fn from_bipoly(p: &BiPoly<C>, order: usize) -> Self {
        let coeffs = (0..=order).map(|k| p.s_coeff(k as u32)).collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `s^k`, `k <= order`.
    pub fn coeff(&self, k: usize) -> &UPoly<C> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[UPoly<C>] {
        &self.coeffs
    }

    pub fn to_bipoly(&self) -> BiPoly<C> {
        BiPoly::from_s_coeffs(&self.coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![UPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].clone() + a * b;
                }
            }
        }
        TruncatedSeries { order, coeffs }
    }

    /// Multiplies in place by `(1 - w s^len)^-1`, where `w` is a polynomial
    /// in `u`.
    pub fn mul_geometric(&mut self, w: &UPoly<C>, len: usize) {
        assert!(len >= 1);
        // q_k += w q_{k-len} in increasing k realizes the geometric sum
        for k in len..=self.order {
            let add = w * &self.coeffs[k - len];
            self.coeffs[k] = self.coeffs[k].clone() + add;
        }
    }
}

/// `q` with `p q ≡ 1 (mod s^(order+1))`.
pub fn series_inverse<C: Coeff>(p: &BiPoly<C>, order: usize) -> Result<TruncatedSeries<C>, AlgebraError> {
    if p.s_coeff(0) != UPoly::one() {
        return Err(AlgebraError::NonUnitConstantTerm);
    }
    let pc: Vec<UPoly<C>> = (0..=order).map(|k| p.s_coeff(k as u32)).collect();
    let mut q: Vec<UPoly<C>> = Vec::with_capacity(order + 1);
    q.push(UPoly::one());
    for k in 1..=order {
        let mut acc = UPoly::zero();
        for j in 1..=k {
            if !pc[j].is_zero() {
                acc = acc + &pc[j] * &q[k - j];
            }
        }
        q.push(-acc);
    }
    Ok(TruncatedSeries { order, coeffs: q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::Rational;
    use proptest::prelude::*;

    type P = BiPoly<Rational>;

    fn poly(t: &str) -> P {
        P::parse(t, 's').unwrap()
    }

    #[test]
    fn geometric_series() {
        let q = series_inverse(&poly("1 - s"), 3).unwrap();
        assert_eq!(q.to_bipoly(), poly("1 + s + s^2 + s^3"));
    }

    #[test]
    fn inverse_of_one() {
        assert_eq!(series_inverse(&P::one(), 5).unwrap().to_bipoly(), P::one());
    }

    #[test]
    fn non_unit_rejected() {
        assert_eq!(series_inverse(&poly("2 - s"), 3), Err(AlgebraError::NonUnitConstantTerm));
        assert_eq!(series_inverse(&poly("1 + u - s"), 3), Err(AlgebraError::NonUnitConstantTerm));
    }

    #[test]
    fn geometric_factor_matches_inverse() {
        let mut a = TruncatedSeries::<Rational>::one(6);
        a.mul_geometric(&UPoly::new(vec![Rational::zero(), Rational::zero(), Rational::one()]), 2);
        assert_eq!(a.to_bipoly(), poly("1 + u^2*s^2 + u^4*s^4 + u^6*s^6"));
    }

    proptest! {
        #[test]
        fn inverse_times_p_is_one(cs in proptest::collection::vec((-3i64..=3, 0u32..3, 1u32..5), 0..6), order in 1usize..7) {
            let mut p = P::one();
            for (c, a, b) in cs {
                p = p + P::monomial(Rational::from_int(c), a, b);
            }
            let q = series_inverse(&p, order).unwrap();
            let prod = (&p * &q.to_bipoly()).truncate_s(order as u32);
            prop_assert_eq!(prod, P::one());
        }
    }
}
