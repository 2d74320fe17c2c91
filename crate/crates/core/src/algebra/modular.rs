//! Word-size prime field arithmetic for the multi-modular determinant
//! route: primes `p ≡ 1 (mod 4)` below `2^31`, each with a square root of
//! `-1` so Gaussian integers embed as well as integers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug)]
pub struct Prime {
    pub p: u64,
    /// A square root of `-1` modulo `p`.
    pub iota: u64,
}

const PRIME_POOL: usize = 256;

pub fn primes() -> &'static [Prime] {
    static POOL: OnceLock<Vec<Prime>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_POOL);
        // largest candidate ≡ 1 (mod 4) below 2^31
        let mut n: u64 = (1u64 << 31) - 3;
        while out.len() < PRIME_POOL {
            if is_prime(n) {
                out.push(Prime { p: n, iota: sqrt_minus_one(n) });
            }
            n -= 4;
        }
        out
    })
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all `n < 3_215_031_751`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn sqrt_minus_one(p: u64) -> u64 {
    for a in 2..p {
        // a is a non-residue iff a^((p-1)/2) = -1
        if pow_mod(a, (p - 1) / 2, p) == p - 1 {
            return pow_mod(a, (p - 1) / 4, p);
        }
    }
    unreachable!("p ≡ 1 (mod 4) always has a non-residue")
}

pub fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i64().expect("residue fits in i64");
    if r < 0 {
        (r + p as i64) as u64
    } else {
        r as u64
    }
}

/// Characteristic polynomial `det(λI - H)` of an `n x n` matrix over
/// `F_p`, by reduction to upper Hessenberg form. Returns the coefficients
/// `a_0..=a_n` (ascending, `a_n = 1`).
pub fn charpoly_mod(mut h: Vec<u64>, n: usize, p: u64) -> Vec<u64> {
    let idx = |r: usize, c: usize| r * n + c;
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[idx(i, m - 1)] != 0) else { continue };
        if piv != m {
            for c in 0..n {
                h.swap(idx(piv, c), idx(m, c));
            }
            for r in 0..n {
                h.swap(idx(r, piv), idx(r, m));
            }
        }
        let inv = inv_mod(h[idx(m, m - 1)], p);
        for j in (m + 1)..n {
            let f = mul_mod(h[idx(j, m - 1)], inv, p);
            if f == 0 {
                continue;
            }
            let neg_f = p - f;
            for c in (m - 1)..n {
                let v = h[idx(m, c)];
                if v != 0 {
                    let k = idx(j, c);
                    h[k] = (h[k] + mul_mod(neg_f, v, p)) % p;
                }
            }
            for r in 0..n {
                let v = h[idx(r, j)];
                if v != 0 {
                    let k = idx(r, m);
                    h[k] = (h[k] + mul_mod(f, v, p)) % p;
                }
            }
        }
    }
    // p_m = (λ - h_mm) p_{m-1} - Σ_i h_{m-i,m} (Π h_{j,j-1}) p_{m-i-1}
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        let diag = h[idx(m - 1, m - 1)];
        for (k, &c) in prev.iter().enumerate() {
            cur[k + 1] = (cur[k + 1] + c) % p;
            cur[k] = (cur[k] + mul_mod(p - diag, c, p)) % p;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = mul_mod(t, h[idx(m - i, m - i - 1)], p);
            if t == 0 {
                break;
            }
            let coef = mul_mod(h[idx(m - i - 1, m - 1)], t, p);
            if coef == 0 {
                continue;
            }
            let neg = p - coef;
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                cur[k] = (cur[k] + mul_mod(neg, c, p)) % p;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Newton interpolation over `F_p` through the nodes `0, 1, .., ys.len()-1`.
/// Returns ascending coefficients, length `ys.len()`.
pub fn interpolate_mod(ys: &[u64], p: u64) -> Vec<u64> {
    let n = ys.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        let inv = inv_mod(level as u64 % p, p);
        for i in (level..n).rev() {
            // nodes are consecutive integers, so x_i - x_{i-level} = level
            dd[i] = mul_mod((dd[i] + p - dd[i - 1]) % p, inv, p);
        }
    }
    let mut acc = vec![0u64; n];
    let mut len = 0usize;
    for i in (0..n).rev() {
        // acc = acc * (x - i) + dd[i]
        let shift = p - (i as u64 % p);
        let mut next = vec![0u64; n];
        for k in 0..len {
            next[k + 1] = (next[k + 1] + acc[k]) % p;
            next[k] = (next[k] + mul_mod(acc[k], shift, p)) % p;
        }
        next[0] = (next[0] + dd[i]) % p;
        acc = next;
        len = (len + 1).min(n);
    }
    acc
}

/// Incremental Chinese remaindering with a symmetric final lift.
#[derive(Clone, Debug)]
pub struct Crt {
    value: BigInt,
    modulus: BigInt,
}

impl Default for Crt {
    fn default() -> Self {
        Crt { value: BigInt::zero(), modulus: BigInt::one() }
    }
}

impl Crt {
    pub fn push(&mut self, residue: u64, p: u64) {
        let cur = reduce(&self.value, p);
        let m_mod = reduce(&self.modulus, p);
        let delta = mul_mod((residue + p - cur) % p, inv_mod(m_mod, p), p);
        self.value += &self.modulus * BigInt::from(delta);
        self.modulus *= BigInt::from(p);
    }

    /// Representative in `(-M/2, M/2]`.
    pub fn symmetric(&self) -> BigInt {
        let half: BigInt = &self.modulus / 2;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

/// Number of pool primes whose product exceeds `2 * bound`.
pub fn primes_needed(bound: &BigInt) -> Option<usize> {
    let target: BigInt = bound.abs() * 2 + 1;
    let mut prod = BigInt::one();
    for (i, pr) in primes().iter().enumerate() {
        prod *= BigInt::from(pr.p);
        if prod > target {
            return Some(i + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_pool_is_valid() {
        let pool = primes();
        assert_eq!(pool.len(), PRIME_POOL);
        for pr in pool.iter().take(20) {
            assert_eq!(pr.p % 4, 1);
            assert!(is_prime(pr.p));
            assert_eq!(mul_mod(pr.iota, pr.iota, pr.p), pr.p - 1);
        }
        assert!(!is_prime(2147483649));
    }

    #[test]
    fn charpoly_of_small_matrix() {
        let p = primes()[0].p;
        // [[2,1],[1,3]] -> λ^2 - 5λ + 5
        let cp = charpoly_mod(vec![2, 1, 1, 3], 2, p);
        assert_eq!(cp, vec![5, p - 5, 1]);
        // companion-like 3x3 that needs a pivot swap
        let m = vec![0, 0, 1, 0, 0, 0, 1, 1, 0];
        let cp = charpoly_mod(m, 3, p);
        // det(λI - M) = λ^3 - λ
        assert_eq!(cp, vec![0, p - 1, 0, 1]);
    }

    #[test]
    fn crt_recovers_negative() {
        let x = BigInt::from(-123456789012345678i64);
        let mut crt = Crt::default();
        for pr in primes().iter().take(3) {
            crt.push(reduce(&x, pr.p), pr.p);
        }
        assert_eq!(crt.symmetric(), x);
    }

    #[test]
    fn interpolation_mod_p() {
        let p = primes()[1].p;
        // 3 + 2x + x^3
        let ys: Vec<u64> = (0..4u64).map(|x| (3 + 2 * x + x * x * x) % p).collect();
        assert_eq!(interpolate_mod(&ys, p), vec![3, 2, 0, 1]);
    }
}
