//! Prime cycles with bump counts, truncated Euler products, Lyndon words,
//! Amitsur's factorization and row-selected matrices. These are brute-force
//! oracles for the determinant formulas.

use num_traits::{One, Zero};

use crate::algebra::{det_one_minus_s, det_one_minus_z_field, BiPoly, Coeff, Matrix, TruncatedSeries, UPoly};
use crate::hypergraph::SymmetricDigraph;
use crate::zeta::EdgeMatrices;

pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycleError {
    #[error("more than {cap} prime cycle classes; complete through length {completed}")]
    ExplosionGuard { cap: usize, completed: usize },
    #[error("classes are complete through length {complete} but order {order} was requested")]
    IncompleteClasses { complete: usize, order: usize },
    #[error("arc sequence is not closed")]
    NotACycle,
}

/// Closed arc sequence in a symmetric digraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedCycle {
    arcs: Vec<usize>,
}

impl DirectedCycle {
    pub fn new(r: &SymmetricDigraph, arcs: Vec<usize>) -> Result<Self, CycleError> {
        if is_closed_walk(r, &arcs) {
            Ok(DirectedCycle { arcs })
        } else {
            Err(CycleError::NotACycle)
        }
    }

    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn rotate(&self, k: usize) -> Self {
        let mut arcs = self.arcs.clone();
        if !arcs.is_empty() {
            let n = arcs.len();
            arcs.rotate_left(k % n);
        }
        DirectedCycle { arcs }
    }

    /// Least rotation of the index word.
    pub fn canonical(&self) -> Self {
        DirectedCycle { arcs: least_rotation(&self.arcs) }
    }

    pub fn is_prime(&self) -> bool {
        is_primitive(&self.arcs)
    }
}

pub fn is_walk(r: &SymmetricDigraph, arcs: &[usize]) -> bool {
    arcs.windows(2).all(|w| r.terminus(w[0]) == r.origin(w[1]))
}

pub fn is_closed_walk(r: &SymmetricDigraph, arcs: &[usize]) -> bool {
    !arcs.is_empty() && is_walk(r, arcs) && r.terminus(*arcs.last().unwrap()) == r.origin(arcs[0])
}

/// Cyclic bump count: positions `j` with `e_{j+1} = e_j^{-1}`, wrapping
/// around.
pub fn cbc(r: &SymmetricDigraph, c: &DirectedCycle) -> usize {
    let a = c.arcs();
    let n = a.len();
    (0..n).filter(|&j| a[(j + 1) % n] == r.inverse(a[j])).count()
}

/// Smallest `p` with `w[i] = w[i + p]` everywhere and `p | len`.
pub fn minimal_period<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p])).unwrap_or(0)
}

pub fn is_primitive<T: PartialEq>(w: &[T]) -> bool {
    !w.is_empty() && minimal_period(w) == w.len()
}

pub fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let n = w.len();
    (0..n)
        .map(|k| w[k..].iter().chain(&w[..k]).cloned().collect::<Vec<T>>())
        .min()
        .unwrap_or_default()
}

pub fn is_lyndon<T: Ord + Clone>(w: &[T]) -> bool {
    is_primitive(w) && least_rotation(w) == w
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    pub cycle: DirectedCycle,
    pub cbc: usize,
}

/// Prime cycle classes through a given length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleEnumeration {
    pub classes: Vec<CycleClass>,
    /// Every class of length at most this is present.
    pub complete_through: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Descend,
    Prune,
    Stop,
}

/// Visits every pre-necklace (prefix of a Lyndon word) over `0..alphabet`
/// with length at most `max_len` in lexicographic order, passing a Lyndon
/// flag. Returns false when stopped.
fn prenecklace_walk(
    alphabet: usize,
    max_len: usize,
    word: &mut Vec<usize>,
    period: usize,
    visit: &mut dyn FnMut(&[usize], bool) -> Step,
) -> bool {
    let t = word.len();
    if t == max_len {
        return true;
    }
    let start = if t == 0 { 0 } else { word[t - period] };
    for a in start..alphabet {
        let p = if t > 0 && a == word[t - period] { period } else { t + 1 };
        word.push(a);
        let go = match visit(word, p == word.len()) {
            Step::Stop => false,
            Step::Prune => true,
            Step::Descend => prenecklace_walk(alphabet, max_len, word, p, visit),
        };
        word.pop();
        if !go {
            return false;
        }
    }
    true
}

fn extends_walk(r: &SymmetricDigraph, w: &[usize]) -> bool {
    w.len() < 2 || r.terminus(w[w.len() - 2]) == r.origin(w[w.len() - 1])
}

/// One canonical representative per prime cycle class of length at most
/// `max_len`, sorted by length then index word.
pub fn enumerate_prime_cycles(r: &SymmetricDigraph, max_len: usize, cap: usize) -> Result<CycleEnumeration, CycleError> {
    let mut classes = Vec::new();
    for len in 1..=max_len {
        let mut found = Vec::new();
        let mut overflow = false;
        let budget = cap.saturating_sub(classes.len());
        let mut visit = |w: &[usize], lyndon: bool| {
            if !extends_walk(r, w) {
                return Step::Prune;
            }
            if w.len() == len && lyndon && r.terminus(w[len - 1]) == r.origin(w[0]) {
                if found.len() == budget {
                    overflow = true;
                    return Step::Stop;
                }
                found.push(w.to_vec());
            }
            Step::Descend
        };
        prenecklace_walk(r.arc_count(), len, &mut Vec::new(), 1, &mut visit);
        if overflow {
            return Err(CycleError::ExplosionGuard { cap, completed: len - 1 });
        }
        for arcs in found {
            let cycle = DirectedCycle { arcs };
            let c = cbc(r, &cycle);
            classes.push(CycleClass { cycle, cbc: c });
        }
    }
    Ok(CycleEnumeration { classes, complete_through: max_len })
}

/// `Π (1 - u^cbc s^|C|)^-1` through `s^order`.
pub fn euler_product_series<C: Coeff>(e: &CycleEnumeration, order: usize) -> Result<TruncatedSeries<C>, CycleError> {
    if order > e.complete_through {
        return Err(CycleError::IncompleteClasses { complete: e.complete_through, order });
    }
    let mut out = TruncatedSeries::one(order);
    for c in e.classes.iter().filter(|c| c.cycle.len() <= order) {
        out.mul_geometric(&monomial_u(c.cbc), c.cycle.len());
    }
    Ok(out)
}

fn monomial_u<C: Coeff>(k: usize) -> UPoly<C> {
    let mut v = vec![C::zero(); k + 1];
    v[k] = C::one();
    UPoly::new(v)
}

/// `ρ(φ(C))`: the ordered product of the arc values along the cycle.
pub fn cycle_value<C: Coeff>(arc_values: &[Matrix<C>], c: &DirectedCycle) -> Matrix<C> {
    let l = arc_values[0].rows();
    c.arcs().iter().fold(Matrix::identity(l), |acc, &a| &acc * &arc_values[a])
}

/// `det(I_l - ρ(φ(C)) u^cbc s^|C|)`.
pub fn cycle_factor<C: Coeff>(r: &SymmetricDigraph, arc_values: &[Matrix<C>], c: &DirectedCycle) -> BiPoly<C> {
    let x = cycle_value(arc_values, c);
    let bumps = cbc(r, c) as u32;
    let len = c.len() as u32;
    det_one_minus_z_field(&x)
        .into_iter()
        .enumerate()
        .map(|(j, cj)| BiPoly::monomial(cj, bumps * j as u32, len * j as u32))
        .fold(BiPoly::zero(), |a, b| a + b)
}

/// `Π det(I_l - ρ(φ(C)) u^cbc s^|C|)` over the classes, through `s^order`.
pub fn weighted_euler_reciprocal<C: Coeff>(
    r: &SymmetricDigraph,
    e: &CycleEnumeration,
    arc_values: &[Matrix<C>],
    order: usize,
) -> Result<BiPoly<C>, CycleError> {
    if order > e.complete_through {
        return Err(CycleError::IncompleteClasses { complete: e.complete_through, order });
    }
    let mut out = BiPoly::one();
    for c in e.classes.iter().filter(|c| c.cycle.len() <= order) {
        out = (&out * &cycle_factor(r, arc_values, &c.cycle)).truncate_s(order as u32);
    }
    Ok(out)
}

/// Lyndon words of length at most `max_len` over `1..=alphabet`, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(alphabet: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if alphabet == 0 || max_len == 0 {
        return out;
    }
    let mut w = vec![1usize];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&alphabet) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

pub fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of Lyndon words of length exactly `n` over `a` letters:
/// `(1/n) Σ_{d|n} μ(d) a^{n/d}`.
pub fn necklace_count(a: usize, n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let total: i128 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(d) as i128 * (a as i128).pow((n / d) as u32))
        .sum();
    (total / n as i128) as u64
}

fn is_zero_row<C: Coeff>(m: &Matrix<UPoly<C>>, i: usize) -> bool {
    (0..m.cols()).all(|j| m[(i, j)].is_zero())
}

/// Product that only visits nonzero rows of `a` and nonzero entries.
fn sparse_mul<C: Coeff>(a: &Matrix<UPoly<C>>, b: &Matrix<UPoly<C>>) -> Matrix<UPoly<C>> {
    let n = a.rows();
    let mut out: Matrix<UPoly<C>> = Matrix::zeros(n, b.cols());
    for i in 0..n {
        for k in 0..a.cols() {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                let y = &b[(k, j)];
                if !y.is_zero() {
                    out[(i, j)] = out[(i, j)].clone() + x * y;
                }
            }
        }
    }
    out
}

/// `det(I - z M)` as a polynomial in `(u, z)`. Rows of `M` that vanish give
/// identity rows, so only the principal block on the nonzero rows is used.
pub fn det_one_minus_z<C: Coeff>(m: &Matrix<UPoly<C>>) -> BiPoly<C> {
    let rows: Vec<usize> = (0..m.rows()).filter(|&i| !is_zero_row(m, i)).collect();
    let sub = Matrix::from_fn(rows.len(), rows.len(), |i, j| m[(rows[i], rows[j])].clone());
    det_one_minus_s(&sub).expect("enough primes for determinant bound")
}

/// Both sides of Amitsur's identity through `s^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmitsurSides<C> {
    pub lhs: BiPoly<C>,
    pub rhs: BiPoly<C>,
    /// Lyndon words whose matrix product is nonzero.
    pub words: usize,
}

/// `det(I - (M_1+…+M_k)s)` and `Π_p det(I - M_p s^|p|)` over Lyndon words,
/// both truncated at `order`. Words whose prefix product vanishes are
/// skipped, since their factors are 1.
pub fn amitsur_sides<C: Coeff>(mats: &[Matrix<UPoly<C>>], order: usize) -> AmitsurSides<C> {
    let n = mats.first().map_or(0, |m| m.rows());
    let mut sum = Matrix::zeros(n, n);
    for m in mats {
        sum = &sum + m;
    }
    let lhs = det_one_minus_z(&sum).truncate_s(order as u32);
    let mut rhs = BiPoly::one();
    let mut words = 0;
    // stack[d] is the product of the first d+1 letters of the current word
    let mut stack: Vec<Matrix<UPoly<C>>> = Vec::new();
    let mut visit = |w: &[usize], lyndon: bool| {
        stack.truncate(w.len() - 1);
        let m = &mats[*w.last().unwrap()];
        let p = match stack.last() {
            Some(prev) => sparse_mul(prev, m),
            None => m.clone(),
        };
        if p.is_zero_matrix() {
            return Step::Prune;
        }
        if lyndon {
            words += 1;
            let f = det_one_minus_z(&p).stretch_s(w.len() as u32);
            rhs = (&rhs * &f).truncate_s(order as u32);
        }
        stack.push(p);
        Step::Descend
    };
    prenecklace_walk(mats.len(), order, &mut Vec::new(), 1, &mut visit);
    AmitsurSides { lhs, rhs, words }
}

pub fn amitsur_check<C: Coeff>(mats: &[Matrix<UPoly<C>>], order: usize) -> bool {
    let sides = amitsur_sides(mats, order);
    sides.lhs == sides.rhs
}

/// `M_i`: the `i`-th block row of `B + uJ`, all other rows zero.
pub fn row_selected_matrices<C: Coeff>(em: &EdgeMatrices<C>) -> Vec<Matrix<UPoly<C>>> {
    let l = em.l;
    let n = em.b.rows();
    let arcs = if l == 0 { 0 } else { n / l };
    let u = UPoly::<C>::var();
    (0..arcs)
        .map(|i| {
            Matrix::from_fn(n, n, |r, c| {
                if r / l == i {
                    UPoly::constant(em.b[(r, c)].clone()) + u.scale(&em.j[(r, c)])
                } else {
                    UPoly::zero()
                }
            })
        })
        .collect()
}

/// Lemma check for one arc sequence: `det(I - M_{s_1}⋯M_{s_k} s^k)` against
/// the cycle factor when the sequence is closed and against 1 otherwise.
pub fn row_selected_check<C: Coeff>(
    r: &SymmetricDigraph,
    em: &EdgeMatrices<C>,
    arc_values: &[Matrix<C>],
    sequence: &[usize],
) -> bool {
    if sequence.is_empty() {
        return true;
    }
    let mats = row_selected_matrices(em);
    let mut p = mats[sequence[0]].clone();
    for &a in &sequence[1..] {
        p = sparse_mul(&p, &mats[a]);
    }
    let lhs = det_one_minus_z(&p).stretch_s(sequence.len() as u32);
    let rhs = if is_closed_walk(r, sequence) {
        cycle_factor(r, arc_values, &DirectedCycle { arcs: sequence.to_vec() })
    } else {
        BiPoly::one()
    };
    lhs == rhs
}

/// The Lyndon-word product for the row-selected matrices restricted to
/// words that are closed walks, through `s^order`.
pub fn lyndon_cycle_product<C: Coeff>(
    r: &SymmetricDigraph,
    arc_values: &[Matrix<C>],
    order: usize,
) -> BiPoly<C> {
    let mut out = BiPoly::one();
    let mut words = Vec::new();
    let mut visit = |w: &[usize], lyndon: bool| {
        if !extends_walk(r, w) {
            return Step::Prune;
        }
        if lyndon && is_closed_walk(r, w) {
            words.push(w.to_vec());
        }
        Step::Descend
    };
    prenecklace_walk(r.arc_count(), order, &mut Vec::new(), 1, &mut visit);
    for w in words {
        let f = cycle_factor(r, arc_values, &DirectedCycle { arcs: w });
        out = (&out * &f).truncate_s(order as u32);
    }
    out
}
