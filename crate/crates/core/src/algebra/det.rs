//! Exact determinants of polynomial matrices.
//!
//! Three independent routes produce the same polynomial:
//!
//! * **pencil**: matrices of the form `I + s X1(u) + s^2 X2(u)` (every zeta
//!   determinant has this shape) are linearized to `I - s X(u)` and expanded
//!   through characteristic polynomials of `X` at integer points `u = a`,
//!   computed modulo word-size primes and recombined by Chinese remaindering
//!   against a coefficient bound.
//! * **Bareiss**: fraction-free elimination over `C[u, s]` with exact
//!   division, abandoned once the working matrix exceeds the term budget.
//! * **interpolation**: exact field determinants on an integer grid sized by
//!   per-row degree bounds, interpolated in `s` and then `u`.
//!
//! [`det_exact`] picks the pencil route when it applies and otherwise runs
//! Bareiss with interpolation as the fallback.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bipoly::BiPoly;
use super::coeff::{Coeff, Gaussian, Rational};
use super::matrix::{Matrix, PolyMatrix};
use super::modular::{self, Crt};
use super::upoly::{interpolate, UPoly};
use super::AlgebraError;

/// Default cap on the total number of stored terms during Bareiss
/// elimination.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_TERM_BUDGET`].
pub const TERM_BUDGET_ENV: &str = "HYPERZETA_TERM_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetStrategy {
    Auto,
    Pencil,
    Bareiss,
    Interpolation,
}

#[derive(Clone, Copy, Debug)]
pub struct DetOptions {
    pub term_budget: usize,
    pub strategy: DetStrategy,
}

impl Default for DetOptions {
    fn default() -> Self {
        DetOptions { term_budget: DEFAULT_TERM_BUDGET, strategy: DetStrategy::Auto }
    }
}

impl DetOptions {
    /// Defaults, with the term budget taken from `HYPERZETA_TERM_BUDGET`
    /// when it is set to a positive integer.
    pub fn from_env() -> Self {
        let term_budget = std::env::var(TERM_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_TERM_BUDGET);
        DetOptions { term_budget, ..Default::default() }
    }

    pub fn with_strategy(strategy: DetStrategy) -> Self {
        DetOptions { strategy, ..DetOptions::from_env() }
    }
}

pub fn det_exact<C: Coeff>(m: &PolyMatrix<C>) -> Result<BiPoly<C>, AlgebraError> {
    det_exact_with(m, &DetOptions::from_env())
}

pub fn det_exact_with<C: Coeff>(m: &PolyMatrix<C>, opts: &DetOptions) -> Result<BiPoly<C>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() == 0 {
        return Ok(BiPoly::one());
    }
    match opts.strategy {
        DetStrategy::Pencil => {
            let (x1, x2) = pencil_parts(m).ok_or(AlgebraError::NotAPencil)?;
            Ok(det_pencil(&x1, x2.as_ref()).unwrap_or_else(|| det_interpolation(m)))
        }
        DetStrategy::Bareiss => Ok(det_bareiss(m, usize::MAX).expect("unbounded Bareiss always finishes")),
        DetStrategy::Interpolation => Ok(det_interpolation(m)),
        DetStrategy::Auto => {
            if let Some((x1, x2)) = pencil_parts(m) {
                if let Some(d) = det_pencil(&x1, x2.as_ref()) {
                    return Ok(d);
                }
            }
            Ok(det_bareiss(m, opts.term_budget).unwrap_or_else(|| det_interpolation(m)))
        }
    }
}

/// Splits `M = I + s X1 + s^2 X2` when `M` has that shape. `X2` is `None`
/// when it vanishes.
#[allow(clippy::type_complexity)]
fn pencil_parts<C: Coeff>(m: &PolyMatrix<C>) -> Option<(Matrix<UPoly<C>>, Option<Matrix<UPoly<C>>>)> {
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            let e = &m[(i, j)];
            if e.degree_s().unwrap_or(0) > 2 {
                return None;
            }
            let c0 = e.s_coeff(0);
            let want = if i == j { UPoly::one() } else { UPoly::zero() };
            if c0 != want {
                return None;
            }
        }
    }
    let x1 = m.map(|e| e.s_coeff(1));
    let x2 = m.map(|e| e.s_coeff(2));
    let x2 = (!x2.data().iter().all(|p| p.is_zero())).then_some(x2);
    Some((x1, x2))
}

/// `det(I + s X1 + s^2 X2)` through the linearization
/// `[[I + s X1, s X2], [-s I, I]] = I - s [[-X1, -X2], [I, 0]]`.
/// Returns `None` only if the coefficient bound outgrows the prime pool.
pub fn det_pencil<C: Coeff>(x1: &Matrix<UPoly<C>>, x2: Option<&Matrix<UPoly<C>>>) -> Option<BiPoly<C>> {
    let n = x1.rows();
    let x = match x2 {
        None => -x1,
        Some(x2) => {
            let mut x = Matrix::zeros(2 * n, 2 * n);
            x.set_block(0, 0, &-x1);
            x.set_block(0, n, &-x2);
            x.set_block(n, 0, &Matrix::identity(n));
            x
        }
    };
    det_one_minus_s(&x)
}

/// `det(I - s X)` for a matrix `X` over `C[u]`, expanded exactly.
pub fn det_one_minus_s<C: Coeff>(x: &Matrix<UPoly<C>>) -> Option<BiPoly<C>> {
    let n = x.rows();
    assert!(x.is_square());
    if n == 0 {
        return Some(BiPoly::one());
    }
    // clear denominators: X = X' / d with X' over Z[i]
    let mut d = BigInt::one();
    for e in x.data() {
        for c in e.coeffs() {
            d = num_integer::Integer::lcm(&d, &c.denominator_lcm());
        }
    }
    let d_rat = BigRational::from_integer(d.clone());
    // scaled[k] = X' entries as (re, im) integers, row-major, per u-power
    let scaled: Vec<Vec<(BigInt, BigInt)>> = x
        .data()
        .iter()
        .map(|e| {
            e.coeffs()
                .iter()
                .map(|c| {
                    let (re, im) = c.parts();
                    let re = re * &d_rat;
                    let im = im * &d_rat;
                    (re.to_integer(), im.to_integer())
                })
                .collect()
        })
        .collect();

    // u-degree bound: sum over rows of the row's maximal entry degree
    let mut du_bound = 0usize;
    let mut bound = BigInt::one();
    for i in 0..n {
        let mut row_deg = 0usize;
        let mut row_weight = BigInt::one();
        for j in 0..n {
            let cs = &scaled[i * n + j];
            if let Some(deg) = cs.iter().rposition(|(re, im)| !re.is_zero() || !im.is_zero()) {
                row_deg = row_deg.max(deg);
            }
            for (re, im) in cs {
                row_weight += re.abs() + im.abs();
            }
        }
        du_bound += row_deg;
        bound *= row_weight;
    }
    let nprimes = modular::primes_needed(&bound)?;
    let points = du_bound + 1;

    // residues[j][a] over primes: coefficient of u^a s^j
    let mut re_crt = vec![vec![Crt::default(); points]; n + 1];
    let mut im_crt = vec![vec![Crt::default(); points]; n + 1];
    for pr in &modular::primes()[..nprimes] {
        let p = pr.p;
        let embeddings: Vec<u64> = if C::REAL { vec![0] } else { vec![pr.iota, p - pr.iota] };
        let mut per_embedding: Vec<Vec<Vec<u64>>> = Vec::with_capacity(embeddings.len());
        for &iota in &embeddings {
            let entries: Vec<Vec<u64>> = scaled
                .iter()
                .map(|cs| {
                    cs.iter()
                        .map(|(re, im)| {
                            let r = modular::reduce(re, p);
                            let i = modular::reduce(im, p);
                            (r + modular::mul_mod(i, iota, p)) % p
                        })
                        .collect()
                })
                .collect();
            // values[j][a] = coefficient of s^j at u = a
            let mut values = vec![vec![0u64; points]; n + 1];
            for a in 0..points {
                let au = a as u64 % p;
                let numeric: Vec<u64> = entries
                    .iter()
                    .map(|cs| cs.iter().rev().fold(0u64, |acc, &c| (modular::mul_mod(acc, au, p) + c) % p))
                    .collect();
                let cp = modular::charpoly_mod(numeric, n, p);
                for j in 0..=n {
                    values[j][a] = cp[n - j];
                }
            }
            let coeffs: Vec<Vec<u64>> = values.iter().map(|ys| modular::interpolate_mod(ys, p)).collect();
            per_embedding.push(coeffs);
        }
        for j in 0..=n {
            for a in 0..points {
                if C::REAL {
                    re_crt[j][a].push(per_embedding[0][j][a], p);
                } else {
                    let r1 = per_embedding[0][j][a];
                    let r2 = per_embedding[1][j][a];
                    let inv2 = modular::inv_mod(2, p);
                    let re = modular::mul_mod((r1 + r2) % p, inv2, p);
                    let im = modular::mul_mod(
                        modular::mul_mod((r1 + p - r2) % p, inv2, p),
                        modular::inv_mod(pr.iota, p),
                        p,
                    );
                    re_crt[j][a].push(re, p);
                    im_crt[j][a].push(im, p);
                }
            }
        }
    }

    let mut out = BiPoly::zero();
    let mut dpow = BigInt::one();
    for j in 0..=n {
        for a in 0..points {
            let re = re_crt[j][a].symmetric();
            let im = if C::REAL { BigInt::zero() } else { im_crt[j][a].symmetric() };
            if re.is_zero() && im.is_zero() {
                continue;
            }
            let re = BigRational::new(re, dpow.clone());
            let im = BigRational::new(im, dpow.clone());
            let c = if C::REAL {
                C::from_rational(re)
            } else {
                C::from_gaussian(&Gaussian::new(re, im)).expect("Gaussian field")
            };
            out = out + BiPoly::monomial(c, a as u32, j as u32);
        }
        dpow *= &d;
    }
    Some(out)
}

/// Fraction-free elimination. Returns `None` once the total term count of
/// the working matrix exceeds `budget`.
pub fn det_bareiss<C: Coeff>(m: &PolyMatrix<C>, budget: usize) -> Option<BiPoly<C>> {
    let n = m.rows();
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BiPoly::<C>::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(r) = ((k + 1)..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Some(BiPoly::zero());
            };
            a.swap_rows(k, r);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        let pivot = a[(k, k)].clone();
        for i in (k + 1)..n {
            let aik = a[(i, k)].clone();
            for j in (k + 1)..n {
                let num = &(&a[(i, j)] * &pivot) - &(&aik * &a[(k, j)]);
                a[(i, j)] = num.div_exact(&prev).expect("Bareiss quotient is exact");
            }
            a[(i, k)] = BiPoly::zero();
        }
        prev = pivot;
        let terms: usize = a.data().iter().map(|p| p.term_count()).sum();
        if terms > budget {
            return None;
        }
    }
    let d = a[(n - 1, n - 1)].clone();
    Some(if negate { -d } else { d })
}

/// Per-variable degree bounds `(deg_u, deg_s)`: the smaller of the row-wise
/// and column-wise sums of maximal entry degrees.
pub fn degree_bounds<C: Coeff>(m: &PolyMatrix<C>) -> (u32, u32) {
    let n = m.rows();
    let mut rows = (0u32, 0u32);
    let mut cols = (0u32, 0u32);
    for i in 0..n {
        let (mut ru, mut rs, mut cu, mut cs) = (0, 0, 0, 0);
        for j in 0..n {
            ru = ru.max(m[(i, j)].degree_u().unwrap_or(0));
            rs = rs.max(m[(i, j)].degree_s().unwrap_or(0));
            cu = cu.max(m[(j, i)].degree_u().unwrap_or(0));
            cs = cs.max(m[(j, i)].degree_s().unwrap_or(0));
        }
        rows = (rows.0 + ru, rows.1 + rs);
        cols = (cols.0 + cu, cols.1 + cs);
    }
    (rows.0.min(cols.0), rows.1.min(cols.1))
}

/// Evaluation on the integer grid `0..=deg_u x 0..=deg_s` with exact field
/// determinants, followed by interpolation in `s` then `u`.
pub fn det_interpolation<C: Coeff>(m: &PolyMatrix<C>) -> BiPoly<C> {
    let (du, ds) = degree_bounds(m);
    let us: Vec<C> = (0..=du as i64).map(C::from_int).collect();
    let ss: Vec<C> = (0..=ds as i64).map(C::from_int).collect();
    // per u-node, the s-coefficients
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(us.len());
    for uv in &us {
        let partial = m.map(|e| e.subst_u(uv));
        let ys: Vec<C> = ss.iter().map(|sv| det_field(&partial.map(|e| e.eval(uv, sv)))).collect();
        let poly = interpolate(&ss, &ys);
        rows.push((0..=ds as usize).map(|b| poly.coeff(b)).collect());
    }
    let mut s_coeffs = Vec::with_capacity(ds as usize + 1);
    for b in 0..=ds as usize {
        let ys: Vec<C> = rows.iter().map(|r| r[b].clone()).collect();
        s_coeffs.push(interpolate(&us, &ys));
    }
    BiPoly::from_s_coeffs(&s_coeffs)
}

/// Determinant over the coefficient field by Gaussian elimination.
pub fn det_field<C: Coeff>(m: &Matrix<C>) -> C {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = C::one();
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !a[(r, k)].is_zero()) else { return C::zero() };
        if r != k {
            a.swap_rows(r, k);
            det = -det;
        }
        let pivot = a[(k, k)].clone();
        det = det * pivot.clone();
        let inv = C::one() / pivot;
        for i in (k + 1)..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() * inv.clone();
            for j in (k + 1)..n {
                let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
            a[(i, k)] = C::zero();
        }
    }
    det
}

/// Characteristic polynomial `det(λI - M)` over the coefficient field,
/// ascending coefficients.
pub fn charpoly_field<C: Coeff>(m: &Matrix<C>) -> UPoly<C> {
    let n = m.rows();
    let mut h = m.clone();
    for k in 1..n.saturating_sub(1) {
        let Some(piv) = (k..n).find(|&i| !h[(i, k - 1)].is_zero()) else { continue };
        if piv != k {
            h.swap_rows(piv, k);
            for r in 0..n {
                let tmp = h[(r, piv)].clone();
                h[(r, piv)] = h[(r, k)].clone();
                h[(r, k)] = tmp;
            }
        }
        let inv = C::one() / h[(k, k - 1)].clone();
        for j in (k + 1)..n {
            let f = h[(j, k - 1)].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = h[(j, c)].clone() - f.clone() * h[(k, c)].clone();
                h[(j, c)] = v;
            }
            for r in 0..n {
                let v = h[(r, k)].clone() + f.clone() * h[(r, j)].clone();
                h[(r, k)] = v;
            }
        }
    }
    let lambda = UPoly::<C>::var();
    let mut polys: Vec<UPoly<C>> = vec![UPoly::one()];
    for m_ in 1..=n {
        let mut cur = &(lambda.clone() - UPoly::constant(h[(m_ - 1, m_ - 1)].clone())) * &polys[m_ - 1];
        let mut t = C::one();
        for i in 1..m_ {
            t = t * h[(m_ - i, m_ - i - 1)].clone();
            let coef = h[(m_ - i - 1, m_ - 1)].clone() * t.clone();
            cur = cur - polys[m_ - i - 1].scale(&coef);
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// `det(I - z M)` as a polynomial in `z` (ascending coefficients) for a
/// field matrix, i.e. the reversed characteristic polynomial.
pub fn det_one_minus_z_field<C: Coeff>(m: &Matrix<C>) -> Vec<C> {
    let n = m.rows();
    let cp = charpoly_field(m);
    (0..=n).map(|j| cp.coeff(n - j)).collect()
}

/// Numeric determinant with partial pivoting.
pub fn det_c64(m: &Matrix<Complex64>) -> Complex64 {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (r, best) = (k..n)
            .map(|r| (r, a[(r, k)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if r != k {
            a.swap_rows(r, k);
            det = -det;
        }
        let pivot = a[(k, k)];
        det *= pivot;
        for i in (k + 1)..n {
            let f = a[(i, k)] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in (k + 1)..n {
                let v = a[(k, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    det
}

/// Convenience: rational field determinant of an integer matrix.
pub fn det_int(m: &Matrix<i64>) -> Rational {
    det_field(&m.to_field::<Rational>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::rat;

    type P = BiPoly<Rational>;

    fn poly(t: &str) -> P {
        P::parse(t, 's').unwrap()
    }

    fn pm(n: usize, entries: &[&str]) -> PolyMatrix<Rational> {
        Matrix::from_vec(n, n, entries.iter().map(|e| poly(e)).collect())
    }

    fn all_strategies(m: &PolyMatrix<Rational>) -> Vec<P> {
        let mut out = vec![
            det_exact_with(m, &DetOptions::with_strategy(DetStrategy::Bareiss)).unwrap(),
            det_exact_with(m, &DetOptions::with_strategy(DetStrategy::Interpolation)).unwrap(),
            det_exact(m).unwrap(),
        ];
        if let Ok(d) = det_exact_with(m, &DetOptions::with_strategy(DetStrategy::Pencil)) {
            out.push(d);
        }
        out
    }

    #[test]
    fn identity_one_by_one() {
        for d in all_strategies(&pm(1, &["1"])) {
            assert_eq!(d, P::one());
        }
    }

    #[test]
    fn two_by_two_cofactor() {
        for d in all_strategies(&pm(2, &["1", "s", "s", "1"])) {
            assert_eq!(d, poly("1 - s^2"));
        }
    }

    #[test]
    fn inverse_pair_lemma_case() {
        // I_2 - (1-u) s J_2
        let m = pm(2, &["1", "-(1-u)*s", "-(1-u)*s", "1"]);
        for d in all_strategies(&m) {
            assert_eq!(d, poly("1 - (1-u)^2*s^2"));
        }
    }

    #[test]
    fn non_square_rejected() {
        let m: PolyMatrix<Rational> = Matrix::zeros(2, 3);
        assert_eq!(det_exact(&m), Err(AlgebraError::NonSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn pencil_with_quadratic_part_and_fractions() {
        let m = pm(
            3,
            &[
                "1 - s + 1/2*u*s^2",
                "2*s",
                "-u*s",
                "s^2",
                "1 + 3*u*s",
                "1/3*s",
                "0",
                "-s + s^2",
                "1 - (1-u)*s^2",
            ],
        );
        let strategies = all_strategies(&m);
        assert_eq!(strategies.len(), 4);
        for d in &strategies[1..] {
            assert_eq!(d, &strategies[0]);
        }
    }

    #[test]
    fn gaussian_pencil_matches_bareiss() {
        let i = crate::algebra::coeff::gaussian(0, 1);
        let entries = vec![
            BiPoly::<Gaussian>::one() - BiPoly::monomial(i.clone(), 1, 1),
            BiPoly::monomial(Gaussian::from_rational(rat(1, 2)), 0, 1),
            BiPoly::monomial(-i.clone(), 0, 2),
            BiPoly::one() + BiPoly::monomial(i, 0, 1),
        ];
        let m = Matrix::from_vec(2, 2, entries);
        let a = det_exact_with(&m, &DetOptions::with_strategy(DetStrategy::Pencil)).unwrap();
        let b = det_exact_with(&m, &DetOptions::with_strategy(DetStrategy::Bareiss)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn charpoly_field_matches_modular() {
        let m = Matrix::from_vec(3, 3, vec![2, -1, 0, 4, 0, 3, 1, 1, -5]).to_field::<Rational>();
        let cp = charpoly_field(&m);
        // det(λI - M) evaluated at λ = 2 equals det(2I - M)
        let two = Rational::from_int(2);
        let direct = det_field(&(&Matrix::<Rational>::identity(3).scale(&two) - &m));
        assert_eq!(cp.eval(&two), direct);
        assert_eq!(cp.coeff(3), Rational::one());
    }

    #[test]
    fn numeric_det() {
        let m = Matrix::from_vec(
            2,
            2,
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0, 1.0), Complex64::new(1.0, 0.0)],
        );
        let d = det_c64(&m);
        assert!((d - Complex64::new(-6.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn budget_fallback_still_exact() {
        let m = pm(3, &["u + s", "1", "s^3", "u", "2 + s", "1", "s", "u*s", "3"]);
        let opts = DetOptions { term_budget: 1, strategy: DetStrategy::Auto };
        let a = det_exact_with(&m, &opts).unwrap();
        let b = det_exact_with(&m, &DetOptions::with_strategy(DetStrategy::Bareiss)).unwrap();
        assert_eq!(a, b);
    }
}
