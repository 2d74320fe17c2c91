//! Determinant formulas for Bartholdi zeta functions and L-functions: the
//! vertex form, the edge form, decomposition factors of a cover and the
//! B/J/K/L matrix identities.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    collapse_to_t, det_c64, det_exact, eval_complex, kron_swap, AlgebraError, BiPoly, Coeff, Gaussian, IntMatrix,
    Matrix, PolyMatrix, Rational, TPoly,
};
use crate::covering::{
    adjacency_summands, covering_hypergraph, derived_graph, group_closure, CoverError, GroupTable, VoltageAssignment,
    DEFAULT_GROUP_CAP,
};
use crate::hypergraph::{
    adjacency_matrix, bipartite_graph, degree_matrix, symmetric_digraph, validate_hypergraph, Diagnostics, Graph,
    Hypergraph, SymmetricDigraph,
};
use crate::reptheory::{
    check_representation, multiplicities, permutation_representation, FieldTag, IrrepCatalog, RepError,
    Representation,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ZetaError {
    #[error("hypergraph fails: {}", .0.join(", "))]
    PreconditionFailed(Vec<&'static str>),
    #[error("covering hypergraph fails: {}", .0.join(", "))]
    CoverInvalid(Vec<&'static str>),
    #[error("representation {0:?} is not unitary")]
    NotUnitary(String),
    #[error("representation {0:?} is not a homomorphism of the voltage group")]
    NotHomomorphism(String),
    #[error("representation {0:?} has no exact matrices")]
    NotExact(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `1 - (1-u)^2 s^2`.
pub fn bump_factor<C: Coeff>() -> BiPoly<C> {
    let w = BiPoly::one() - BiPoly::u();
    BiPoly::one() - &(&w * &w) * &BiPoly::s().pow(2)
}

/// `p * (1 - (1-u)^2 s^2)^e` for any integer `e`; negative powers are
/// exact divisions.
pub fn with_bump_power<C: Coeff>(p: &BiPoly<C>, e: i64) -> BiPoly<C> {
    let f = bump_factor::<C>().pow(e.unsigned_abs() as u32);
    if e >= 0 {
        p * &f
    } else {
        p.div_exact(&f).expect("prefactor divides the determinant")
    }
}

fn lift<C: Coeff>(m: &IntMatrix) -> Matrix<C> {
    m.map(|&x| C::from_int(x))
}

fn lift_c64(m: &IntMatrix) -> Matrix<Complex64> {
    m.map(|&x| Complex64::new(x as f64, 0.0))
}

/// A graph with voltages on its symmetric digraph and the generated group.
#[derive(Debug, Clone)]
pub struct VoltageGraph {
    pub graph: Graph,
    pub digraph: SymmetricDigraph,
    pub phi: VoltageAssignment,
    pub group: GroupTable,
    /// Group index of `φ(e_α)` for each arc.
    pub arc_element: Vec<usize>,
    /// `A_g` in group order.
    pub summands: Vec<IntMatrix>,
}

impl VoltageGraph {
    pub fn new(graph: &Graph, phi: VoltageAssignment, cap: usize) -> Result<Self, CoverError> {
        let digraph = symmetric_digraph(graph);
        let group = group_closure(&phi, cap)?;
        let arc_element = (0..digraph.arc_count()).map(|a| group.index_of(phi.get(a)).unwrap()).collect();
        let summands = adjacency_summands(graph, &digraph, &phi, &group);
        Ok(VoltageGraph { graph: graph.clone(), digraph, phi, group, arc_element, summands })
    }

    /// Identity voltages with `k = 1`.
    pub fn trivial(graph: &Graph) -> Self {
        let digraph = symmetric_digraph(graph);
        VoltageGraph::new(graph, VoltageAssignment::identity(1, &digraph), 1).expect("trivial group")
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `ρ(φ(e_α))` per arc.
    pub fn arc_values<T: Clone>(&self, rho: &[Matrix<T>]) -> Vec<Matrix<T>> {
        self.arc_element.iter().map(|&g| rho[g].clone()).collect()
    }

    pub fn degree_matrix(&self) -> IntMatrix {
        degree_matrix(&self.graph)
    }

    /// `Σ_g ρ(g) ⊗ A_g`.
    pub fn weighted_adjacency<C: Coeff>(&self, rho: &[Matrix<C>]) -> Matrix<C> {
        let l = rho[0].rows();
        let n = self.vertex_count();
        let mut w = Matrix::zeros(n * l, n * l);
        for (r, a) in rho.iter().zip(&self.summands) {
            w = &w + &r.kron(&lift::<C>(a));
        }
        w
    }

    pub fn weighted_adjacency_c64(&self, rho: &[Matrix<Complex64>]) -> Matrix<Complex64> {
        let l = rho[0].rows();
        let n = self.vertex_count();
        let mut w = Matrix::zeros(n * l, n * l);
        for (r, a) in rho.iter().zip(&self.summands) {
            w = &w + &r.kron(&lift_c64(a));
        }
        w
    }
}

/// `I - s W + (1-u) s^2 (I_l ⊗ (D - (1-u) I_n))`.
fn vertex_matrix<C: Coeff>(w: &Matrix<C>, degree: &IntMatrix, l: usize) -> PolyMatrix<C> {
    let n = degree.rows();
    let one_minus_u = BiPoly::<C>::one() - BiPoly::u();
    let s = BiPoly::<C>::s();
    let s2 = s.pow(2);
    let inner: PolyMatrix<C> = Matrix::from_fn(n, n, |i, j| {
        let d = BiPoly::int(degree[(i, j)]);
        if i == j {
            d - one_minus_u.clone()
        } else {
            d
        }
    });
    let big = Matrix::<BiPoly<C>>::identity(l).kron(&inner);
    let coef = &one_minus_u * &s2;
    Matrix::from_fn(n * l, n * l, |i, j| {
        let id = if i == j { BiPoly::one() } else { BiPoly::zero() };
        let lin = &s * &BiPoly::constant(w[(i, j)].clone());
        id - lin + &coef * &big[(i, j)]
    })
}

fn vertex_matrix_c64(w: &Matrix<Complex64>, degree: &IntMatrix, l: usize, u: Complex64, s: Complex64) -> Matrix<Complex64> {
    let n = degree.rows();
    let a = 1.0 - u;
    Matrix::from_fn(n * l, n * l, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        let (bi, bj) = (i / n, j / n);
        let inner = if bi == bj {
            let d = degree[(i % n, j % n)] as f64;
            Complex64::new(d, 0.0) - if i == j { a } else { Complex64::new(0.0, 0.0) }
        } else {
            Complex64::new(0.0, 0.0)
        };
        id - s * w[(i, j)] + a * s * s * inner
    })
}

/// `(1-(1-u)^2 s^2)^(m-n) det(I - sA + (1-u)s^2(D - (1-u)I))` for a graph.
pub fn graph_bartholdi<C: Coeff>(g: &Graph) -> Result<BiPoly<C>, ZetaError> {
    let a = lift::<C>(&adjacency_matrix(g));
    let m = vertex_matrix(&a, &degree_matrix(g), 1);
    let det = det_exact(&m)?;
    Ok(with_bump_power(&det, g.edge_count() as i64 - g.vertex_count() as i64))
}

/// Same, with `u = 0` fixed before the determinant:
/// `(1 - s^2)^(m-n) det(I - sA + s^2(D - I))`.
pub fn graph_ihara<C: Coeff>(g: &Graph) -> Result<BiPoly<C>, ZetaError> {
    let n = g.vertex_count();
    let a = adjacency_matrix(g);
    let d = degree_matrix(g);
    let s = BiPoly::<C>::s();
    let m = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1 } else { 0 };
        BiPoly::int(id) - &s * &BiPoly::int(a[(i, j)]) + &s.pow(2) * &BiPoly::int(d[(i, j)] - id)
    });
    let det = det_exact(&m)?;
    let e = g.edge_count() as i64 - n as i64;
    let f = BiPoly::one() - s.pow(2);
    Ok(if e >= 0 { &det * &f.pow(e as u32) } else { det.div_exact(&f.pow((-e) as u32)).expect("exact") })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub name: String,
    pub mode: Mode,
    pub equal: bool,
    /// Largest relative residual over sample points; zero for exact
    /// comparisons.
    pub max_residual: f64,
}

impl Comparison {
    pub fn exact(name: impl Into<String>, equal: bool) -> Self {
        Comparison { name: name.into(), mode: Mode::Exact, equal, max_residual: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaReport {
    /// Reciprocal in `u, s`.
    pub reciprocal: BiPoly<Rational>,
    /// Reciprocal in `u, t`.
    pub reciprocal_t: TPoly<Rational>,
    pub route: &'static str,
    pub comparisons: Vec<Comparison>,
}

impl ZetaReport {
    pub fn all_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal)
    }
}

fn require_valid(d: &Diagnostics) -> Result<(), ZetaError> {
    if d.passes() {
        Ok(())
    } else {
        Err(ZetaError::PreconditionFailed(d.failures()))
    }
}

/// `ζ(H,u,t)^-1` through the incidence graph, cross-checked against the
/// edge form with the trivial representation.
pub fn bartholdi_zeta(h: &Hypergraph) -> Result<ZetaReport, ZetaError> {
    require_valid(&validate_hypergraph(h))?;
    let b = bipartite_graph(h);
    let reciprocal = graph_bartholdi::<Rational>(&b)?;
    let reciprocal_t = collapse_to_t(&reciprocal)?;
    let vg = VoltageGraph::trivial(&b);
    let edge = lfunction_edge(&edge_matrices(&vg, &trivial_matrices(&vg.group)))?;
    Ok(ZetaReport {
        comparisons: vec![Comparison::exact("vertex=edge", edge == reciprocal)],
        reciprocal,
        reciprocal_t,
        route: "vertex",
    })
}

pub fn trivial_matrices<C: Coeff>(group: &GroupTable) -> Vec<Matrix<C>> {
    vec![Matrix::identity(1); group.order()]
}

/// Edge-indexed block matrices for a representation of degree `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeMatrices<T> {
    pub l: usize,
    pub b: Matrix<T>,
    pub j: Matrix<T>,
    pub k: Matrix<T>,
    pub lmat: Matrix<T>,
}

fn build_edge_matrices<T: Clone + Zero + One>(vg: &VoltageGraph, rho: &[Matrix<T>]) -> EdgeMatrices<T> {
    let r = &vg.digraph;
    let l = rho[0].rows();
    let values = vg.arc_values(rho);
    let arcs = r.arc_count();
    let n = r.vertex_count();
    let mut b = Matrix::zeros(arcs * l, arcs * l);
    let mut j = Matrix::zeros(arcs * l, arcs * l);
    let mut k = Matrix::zeros(arcs * l, n * l);
    let mut lm = Matrix::zeros(arcs * l, n * l);
    let id = Matrix::<T>::identity(l);
    for alpha in 0..arcs {
        let rho = &values[alpha];
        for beta in 0..arcs {
            if beta == r.inverse(alpha) {
                j.set_block(alpha * l, beta * l, rho);
            } else if r.terminus(alpha) == r.origin(beta) {
                b.set_block(alpha * l, beta * l, rho);
            }
        }
        k.set_block(alpha * l, r.terminus(alpha) * l, rho);
        lm.set_block(alpha * l, r.origin(alpha) * l, &id);
    }
    EdgeMatrices { l, b, j, k, lmat: lm }
}

pub fn edge_matrices<C: Coeff>(vg: &VoltageGraph, rho: &[Matrix<C>]) -> EdgeMatrices<C> {
    build_edge_matrices(vg, rho)
}

pub fn edge_matrices_c64(vg: &VoltageGraph, rho: &[Matrix<Complex64>]) -> EdgeMatrices<Complex64> {
    build_edge_matrices(vg, rho)
}

/// `det(I - s(B + uJ))`.
pub fn lfunction_edge<C: Coeff>(em: &EdgeMatrices<C>) -> Result<BiPoly<C>, ZetaError> {
    let n = em.b.rows();
    let s = BiPoly::<C>::s();
    let us = &BiPoly::<C>::u() * &s;
    let m = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { BiPoly::one() } else { BiPoly::zero() };
        id - &s * &BiPoly::constant(em.b[(i, j)].clone()) - &us * &BiPoly::constant(em.j[(i, j)].clone())
    });
    Ok(det_exact(&m)?)
}

pub fn lfunction_edge_c64(em: &EdgeMatrices<Complex64>, u: Complex64, s: Complex64) -> Complex64 {
    let n = em.b.rows();
    let m = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - s * (em.b[(i, j)] + u * em.j[(i, j)])
    });
    det_c64(&m)
}

fn require_unitary(rep_name: &str, rho_unitary: bool) -> Result<(), ZetaError> {
    if rho_unitary {
        Ok(())
    } else {
        Err(ZetaError::NotUnitary(rep_name.to_string()))
    }
}

fn is_unitary<C: Coeff>(rho: &[Matrix<C>]) -> bool {
    let l = rho.first().map_or(0, |m| m.rows());
    rho.iter().all(|m| &m.adjoint() * m == Matrix::identity(l))
}

/// `det(I_nl - s Σ ρ(g)⊗A_g + (1-u)s^2 (I_l ⊗ (D - (1-u)I_n)))`, without
/// the prefactor.
pub fn vertex_determinant<C: Coeff>(vg: &VoltageGraph, rho: &[Matrix<C>]) -> Result<BiPoly<C>, ZetaError> {
    let l = rho[0].rows();
    let w = vg.weighted_adjacency(rho);
    Ok(det_exact(&vertex_matrix(&w, &vg.degree_matrix(), l))?)
}

/// The vertex form of the reciprocal L-function. The representation must
/// be unitary.
pub fn lfunction_vertex<C: Coeff>(vg: &VoltageGraph, rho: &[Matrix<C>], name: &str) -> Result<BiPoly<C>, ZetaError> {
    require_unitary(name, is_unitary(rho))?;
    let l = rho[0].rows();
    let det = vertex_determinant(vg, rho)?;
    let e = (vg.edge_count() as i64 - vg.vertex_count() as i64) * l as i64;
    Ok(with_bump_power(&det, e))
}

pub fn lfunction_vertex_c64(vg: &VoltageGraph, rho: &[Matrix<Complex64>], u: Complex64, s: Complex64) -> Complex64 {
    let l = rho[0].rows();
    let w = vg.weighted_adjacency_c64(rho);
    let det = det_c64(&vertex_matrix_c64(&w, &vg.degree_matrix(), l, u, s));
    let e = (vg.edge_count() as i64 - vg.vertex_count() as i64) * l as i64;
    let a = 1.0 - u;
    det * (1.0 - a * a * s * s).powi(e as i32)
}

/// `det(I - s Σ ρ(g)⊗A_g + s^2 (I_l ⊗ (D - I)))`, the factor shape of the
/// Ihara case.
pub fn ihara_factor<C: Coeff>(vg: &VoltageGraph, rho: &[Matrix<C>]) -> Result<BiPoly<C>, ZetaError> {
    let l = rho[0].rows();
    let n = vg.vertex_count();
    let w = vg.weighted_adjacency(rho);
    let d = vg.degree_matrix();
    let big = IntMatrix::identity(l).kron(&(&d - &IntMatrix::identity(n)));
    let s = BiPoly::<C>::s();
    let s2 = s.pow(2);
    let m = Matrix::from_fn(n * l, n * l, |i, j| {
        let id = if i == j { BiPoly::one() } else { BiPoly::zero() };
        id - &s * &BiPoly::constant(w[(i, j)].clone()) + &s2 * &BiPoly::int(big[(i, j)])
    });
    Ok(det_exact(&m)?)
}

/// Sample points `(u, s)` with moduli in `[0.1, 0.6]` and uniform
/// arguments.
pub fn sample_points(seed: u64, count: usize) -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let r: f64 = rng.gen_range(0.1..0.6);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, theta)
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

pub fn relative_residual(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

#[derive(Clone, Debug)]
pub struct SampleOptions {
    pub count: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { count: 25, tolerance: 1e-8, seed: 0 }
    }
}

/// A reciprocal L-function in whichever exact field the representation
/// needs.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactPoly {
    Rational(BiPoly<Rational>),
    Gaussian(BiPoly<Gaussian>),
}

impl ExactPoly {
    pub fn to_gaussian(&self) -> BiPoly<Gaussian> {
        match self {
            ExactPoly::Rational(p) => p.map_coeffs(|c| c.to_gaussian()),
            ExactPoly::Gaussian(p) => p.clone(),
        }
    }

    pub fn eval(&self, u: Complex64, s: Complex64) -> Complex64 {
        match self {
            ExactPoly::Rational(p) => eval_complex(p, u, s),
            ExactPoly::Gaussian(p) => eval_complex(p, u, s),
        }
    }

    pub fn text(&self) -> Result<String, AlgebraError> {
        Ok(match self {
            ExactPoly::Rational(p) => collapse_to_t(p)?.to_text(),
            ExactPoly::Gaussian(p) => collapse_to_t(p)?.to_text(),
        })
    }

    pub fn json(&self) -> Result<serde_json::Value, AlgebraError> {
        Ok(match self {
            ExactPoly::Rational(p) => collapse_to_t(p)?.to_json_map(),
            ExactPoly::Gaussian(p) => collapse_to_t(p)?.to_json_map(),
        })
    }

    pub fn subst_u_zero(&self) -> ExactPoly {
        match self {
            ExactPoly::Rational(p) => ExactPoly::Rational(p.subst_u(&Rational::zero())),
            ExactPoly::Gaussian(p) => ExactPoly::Gaussian(p.subst_u(&Gaussian::zero())),
        }
    }
}

/// Both L-function routes for one representation.
#[derive(Clone, Debug, PartialEq)]
pub struct LFunctionReport {
    pub name: String,
    pub degree: usize,
    pub field: FieldTag,
    pub mode: Mode,
    /// Exact reciprocal from the edge form, when the field is exact.
    pub reciprocal: Option<ExactPoly>,
    pub comparison: Comparison,
}

fn check_rep(rep: &Representation, group: &GroupTable) -> Result<(), ZetaError> {
    let d = check_representation(rep, group);
    if !d.is_homomorphism() {
        return Err(ZetaError::NotHomomorphism(rep.name.clone()));
    }
    if !d.is_unitary() {
        return Err(ZetaError::NotUnitary(rep.name.clone()));
    }
    Ok(())
}

fn exact_lfunction<C: Coeff>(vg: &VoltageGraph, rep: &Representation) -> Result<(BiPoly<C>, bool), ZetaError> {
    let rho = rep.exact_matrices::<C>().ok_or_else(|| ZetaError::NotExact(rep.name.clone()))?;
    let edge = lfunction_edge(&edge_matrices(vg, &rho))?;
    let vertex = lfunction_vertex(vg, &rho, &rep.name)?;
    let equal = edge == vertex;
    Ok((edge, equal))
}

/// Edge and vertex forms of the L-function of `rep`, exactly when the
/// representation is exact and at sample points otherwise.
pub fn lfunction(vg: &VoltageGraph, rep: &Representation, samples: &SampleOptions) -> Result<LFunctionReport, ZetaError> {
    check_rep(rep, &vg.group)?;
    let (reciprocal, comparison) = match rep.field() {
        FieldTag::Rational => {
            let (p, eq) = exact_lfunction::<Rational>(vg, rep)?;
            (Some(ExactPoly::Rational(p)), Comparison::exact("edge=vertex", eq))
        }
        FieldTag::Gaussian => {
            let (p, eq) = exact_lfunction::<Gaussian>(vg, rep)?;
            (Some(ExactPoly::Gaussian(p)), Comparison::exact("edge=vertex", eq))
        }
        FieldTag::Sampled => {
            let rho = rep.numeric_matrices();
            let em = edge_matrices_c64(vg, &rho);
            let mut worst: f64 = 0.0;
            for (u, s) in sample_points(samples.seed, samples.count) {
                let a = lfunction_edge_c64(&em, u, s);
                let b = lfunction_vertex_c64(vg, &rho, u, s);
                worst = worst.max(relative_residual(a, b));
            }
            let cmp = Comparison {
                name: "edge=vertex".into(),
                mode: Mode::Sampled,
                equal: worst < samples.tolerance,
                max_residual: worst,
            };
            (None, cmp)
        }
    };
    Ok(LFunctionReport {
        name: rep.name.clone(),
        degree: rep.degree(),
        field: rep.field(),
        mode: comparison.mode,
        reciprocal,
        comparison,
    })
}

/// One row of the decomposition table.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorReport {
    pub index: usize,
    pub lfunction: Option<LFunctionReport>,
    pub name: String,
    pub degree: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub k: usize,
    pub group_order: usize,
    pub multiplicities: Vec<usize>,
    pub cover: Hypergraph,
    pub cover_diagnostics: Diagnostics,
    /// `|V(B_H̄)|` and `|E(B_H̄)|`.
    pub cover_size: (usize, usize),
    pub kronecker_identity: bool,
    /// `ζ(H̄)^-1` in `u, s`.
    pub cover_reciprocal: BiPoly<Rational>,
    pub base_reciprocal: BiPoly<Rational>,
    pub factors: Vec<FactorReport>,
    pub mode: Mode,
    pub comparisons: Vec<Comparison>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.kronecker_identity && self.comparisons.iter().all(|c| c.equal)
    }
}

/// The cover of `h` defined by `phi`, checked against the hypotheses.
pub fn build_cover(h: &Hypergraph, phi: &VoltageAssignment) -> Result<(Hypergraph, Diagnostics), ZetaError> {
    let b = bipartite_graph(h);
    let cover = covering_hypergraph(&derived_graph(&b, phi))?;
    let diag = validate_hypergraph(&cover);
    if !diag.no_loops() || !diag.min_incidence_ok() {
        let mut f = diag.failures();
        f.retain(|x| *x != "connected");
        return Err(ZetaError::CoverInvalid(f));
    }
    Ok((cover, diag))
}

/// Checks `ζ(H̄)^-1 = Π_i L_i^{m_i}` and the factor identity
/// `ζ(H̄)^-1 = ζ(H)^{-m_1} (1-(1-u)^2 t)^{(k-m_1)(m-n)} Π_{i>=2} M_i^{m_i}`.
pub fn verify_decomposition(
    h: &Hypergraph,
    phi: &VoltageAssignment,
    catalog: &IrrepCatalog,
    samples: &SampleOptions,
) -> Result<DecompositionReport, ZetaError> {
    require_valid(&validate_hypergraph(h))?;
    let b = bipartite_graph(h);
    let vg = VoltageGraph::new(&b, phi.clone(), DEFAULT_GROUP_CAP)?;
    let (cover, cover_diagnostics) = build_cover(h, phi)?;
    let bc = bipartite_graph(&cover);
    let kronecker_identity = crate::covering::check_kronecker_identity(&b, &vg.digraph, phi, &vg.group);
    let perm = permutation_representation(&vg.group);
    let mult = multiplicities(catalog, &perm, &vg.group)?;
    let k = phi.k();
    let cover_reciprocal = graph_bartholdi::<Rational>(&bc)?;
    let base_reciprocal = graph_bartholdi::<Rational>(&b)?;

    let mut factors = Vec::new();
    let mut comparisons = Vec::new();
    for (index, (rep, &m)) in catalog.irreps.iter().zip(&mult).enumerate() {
        let lf = if m > 0 {
            let r = lfunction(&vg, rep, samples)?;
            comparisons.push(Comparison { name: format!("edge=vertex[{}]", index + 1), ..r.comparison.clone() });
            Some(r)
        } else {
            None
        };
        factors.push(FactorReport { index: index + 1, lfunction: lf, name: rep.name.clone(), degree: rep.degree(), multiplicity: m });
    }
    let used: Vec<(&FactorReport, &Representation)> =
        factors.iter().zip(&catalog.irreps).filter(|(f, _)| f.multiplicity > 0).collect();
    let exact = used.iter().all(|(f, _)| f.lfunction.as_ref().unwrap().reciprocal.is_some());
    let e_bump = (k as i64 - mult[0] as i64) * (b.edge_count() as i64 - b.vertex_count() as i64);
    let mode = if exact { Mode::Exact } else { Mode::Sampled };

    if exact {
        let any_gaussian = used.iter().any(|(f, _)| matches!(f.lfunction.as_ref().unwrap().reciprocal, Some(ExactPoly::Gaussian(_))));
        let product_ok;
        let factor_ok;
        if any_gaussian {
            let mut prod = BiPoly::<Gaussian>::one();
            for (f, _) in &used {
                prod = &prod * &f.lfunction.as_ref().unwrap().reciprocal.as_ref().unwrap().to_gaussian().pow(f.multiplicity as u32);
            }
            let lhs = cover_reciprocal.map_coeffs(|c| c.to_gaussian());
            product_ok = prod == lhs;
            let mut rhs = with_bump_power(&base_reciprocal.map_coeffs(|c| c.to_gaussian()).pow(mult[0] as u32), e_bump);
            for (f, rep) in used.iter().skip_while(|(f, _)| f.index == 1) {
                let rho = rep.exact_matrices::<Gaussian>().unwrap();
                rhs = &rhs * &vertex_determinant(&vg, &rho)?.pow(f.multiplicity as u32);
            }
            factor_ok = rhs == lhs;
        } else {
            let mut prod = BiPoly::<Rational>::one();
            for (f, _) in &used {
                match f.lfunction.as_ref().unwrap().reciprocal.as_ref().unwrap() {
                    ExactPoly::Rational(p) => prod = &prod * &p.pow(f.multiplicity as u32),
                    ExactPoly::Gaussian(_) => unreachable!(),
                }
            }
            product_ok = prod == cover_reciprocal;
            let mut rhs = with_bump_power(&base_reciprocal.pow(mult[0] as u32), e_bump);
            for (f, rep) in used.iter().skip_while(|(f, _)| f.index == 1) {
                let rho = rep.exact_matrices::<Rational>().unwrap();
                rhs = &rhs * &vertex_determinant(&vg, &rho)?.pow(f.multiplicity as u32);
            }
            factor_ok = rhs == cover_reciprocal;
        }
        comparisons.push(Comparison::exact("cover=product", product_ok));
        comparisons.push(Comparison::exact("cover=factors", factor_ok));
    } else {
        let mut worst_product: f64 = 0.0;
        let mut worst_factor: f64 = 0.0;
        let numeric: Vec<(usize, bool, Vec<Matrix<Complex64>>, EdgeMatrices<Complex64>)> = used
            .iter()
            .map(|(f, rep)| {
                let rho = rep.numeric_matrices();
                let em = edge_matrices_c64(&vg, &rho);
                (f.multiplicity, f.index == 1, rho, em)
            })
            .collect();
        for (u, s) in sample_points(samples.seed, samples.count) {
            let lhs = eval_complex(&cover_reciprocal, u, s);
            let mut prod = Complex64::one();
            let a = 1.0 - u;
            let bump = 1.0 - a * a * s * s;
            let mut fac = eval_complex(&base_reciprocal, u, s).powi(mult[0] as i32) * bump.powi(e_bump as i32);
            for (m, trivial, rho, em) in &numeric {
                prod *= lfunction_edge_c64(em, u, s).powi(*m as i32);
                if !trivial {
                    let l = rho[0].rows();
                    let w = vg.weighted_adjacency_c64(rho);
                    fac *= det_c64(&vertex_matrix_c64(&w, &vg.degree_matrix(), l, u, s)).powi(*m as i32);
                }
            }
            worst_product = worst_product.max(relative_residual(lhs, prod));
            worst_factor = worst_factor.max(relative_residual(lhs, fac));
        }
        comparisons.push(Comparison {
            name: "cover=product".into(),
            mode: Mode::Sampled,
            equal: worst_product < samples.tolerance,
            max_residual: worst_product,
        });
        comparisons.push(Comparison {
            name: "cover=factors".into(),
            mode: Mode::Sampled,
            equal: worst_factor < samples.tolerance,
            max_residual: worst_factor,
        });
    }
    comparisons.push(Comparison::exact("kronecker", kronecker_identity));

    Ok(DecompositionReport {
        k,
        group_order: vg.group.order(),
        multiplicities: mult,
        cover_size: (bc.vertex_count(), bc.edge_count()),
        cover,
        cover_diagnostics,
        kronecker_identity,
        cover_reciprocal,
        base_reciprocal,
        factors,
        mode,
        comparisons,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// The seven matrix identities behind the edge and vertex forms, checked
/// exactly. The conjugate-transpose identities need a unitary `rho`.
pub fn matrix_identity_suite<C: Coeff>(vg: &VoltageGraph, rho: &[Matrix<C>]) -> Result<Vec<LemmaCheck>, ZetaError> {
    let em = edge_matrices(vg, rho);
    let l = em.l;
    let n = vg.vertex_count();
    let arcs = vg.digraph.arc_count();
    let two_ml = arcs * l;
    let mut out = Vec::new();

    out.push(LemmaCheck { name: "K tL = B + J", passed: &em.k * &em.lmat.transpose() == &em.b + &em.j });

    let mut sum_ag_rho = Matrix::<C>::zeros(n * l, n * l);
    for (r, a) in rho.iter().zip(&vg.summands) {
        sum_ag_rho = &sum_ag_rho + &lift::<C>(a).kron(r);
    }
    out.push(LemmaCheck { name: "tL K = sum A_g (x) rho(g)", passed: &em.lmat.transpose() * &em.k == sum_ag_rho });

    let kbar_t = em.k.adjoint();
    let d = lift::<C>(&vg.degree_matrix());
    out.push(LemmaCheck { name: "t(conj K) K = D (x) I", passed: &kbar_t * &em.k == d.kron(&Matrix::identity(l)) });
    out.push(LemmaCheck {
        name: "K t(conj K) = BJ + I",
        passed: &em.k * &kbar_t == &(&em.b * &em.j) + &Matrix::identity(two_ml),
    });
    out.push(LemmaCheck { name: "J^2 = I", passed: &em.j * &em.j == Matrix::identity(two_ml) });

    let one_minus_u = BiPoly::<C>::one() - BiPoly::u();
    let coef = &one_minus_u * &BiPoly::s();
    let m = Matrix::from_fn(two_ml, two_ml, |i, j| {
        let id = if i == j { BiPoly::one() } else { BiPoly::zero() };
        id - &coef * &BiPoly::constant(em.j[(i, j)].clone())
    });
    let det = det_exact(&m)?;
    out.push(LemmaCheck {
        name: "det(I - (1-u)sJ) = (1-(1-u)^2 s^2)^(ml)",
        passed: det == bump_factor::<C>().pow((arcs / 2 * l) as u32),
    });

    // P (ρ-outer sum) P^-1 = A-outer sum, and the determinants agree
    let w = vg.weighted_adjacency(rho);
    let p: Matrix<C> = kron_swap(l, n);
    let conj = &(&p * &w) * &p.transpose();
    let swapped_det = {
        let deg = vg.degree_matrix();
        let one_minus_u = BiPoly::<C>::one() - BiPoly::u();
        let s = BiPoly::<C>::s();
        let inner: PolyMatrix<C> = Matrix::from_fn(n, n, |i, j| {
            let x = BiPoly::int(deg[(i, j)]);
            if i == j {
                x - one_minus_u.clone()
            } else {
                x
            }
        });
        let big = inner.kron(&Matrix::identity(l));
        let coef = &one_minus_u * &s.pow(2);
        let mm = Matrix::from_fn(n * l, n * l, |i, j| {
            let id = if i == j { BiPoly::one() } else { BiPoly::zero() };
            id - &s * &BiPoly::constant(sum_ag_rho[(i, j)].clone()) + &coef * &big[(i, j)]
        });
        det_exact(&mm)?
    };
    let direct_det = vertex_determinant(vg, rho)?;
    out.push(LemmaCheck { name: "Kronecker swap", passed: conj == sum_ag_rho && swapped_det == direct_det });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::fixtures;
    use crate::reptheory::builtin_irreps;

    fn example_vg() -> VoltageGraph {
        let (h, phi) = fixtures::worked_cover();
        VoltageGraph::new(&bipartite_graph(&h), phi, DEFAULT_GROUP_CAP).unwrap()
    }

    fn sign(vg: &VoltageGraph) -> Vec<Matrix<Rational>> {
        builtin_irreps("S2", &vg.group).unwrap().irreps[1].exact_matrices().unwrap()
    }

    #[test]
    fn base_zeta_matches_factored_display() {
        let report = bartholdi_zeta(&fixtures::worked_hypergraph()).unwrap();
        assert_eq!(report.reciprocal, fixtures::expected_base());
        assert!(report.all_equal());
        assert!(report.reciprocal_t.to_s() == report.reciprocal);
    }

    #[test]
    fn sign_lfunction_matches_display() {
        let vg = example_vg();
        let rho = sign(&vg);
        let edge = lfunction_edge(&edge_matrices(&vg, &rho)).unwrap();
        assert_eq!(edge, fixtures::expected_sign());
        assert_eq!(lfunction_vertex(&vg, &rho, "sign").unwrap(), edge);
    }

    #[test]
    fn precondition_failure() {
        let h = Hypergraph::new(["v1", "v2"], [("e1".to_string(), vec!["v1", "v2"])]).unwrap();
        assert!(matches!(bartholdi_zeta(&h), Err(ZetaError::PreconditionFailed(_))));
    }

    #[test]
    fn k2_edge_matrices() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let vg = VoltageGraph::trivial(&g);
        let em = edge_matrices(&vg, &trivial_matrices::<Rational>(&vg.group));
        assert!(em.b.is_zero_matrix());
        assert_eq!(em.j, IntMatrix::from_vec(2, 2, vec![0, 1, 1, 0]).to_field());
    }

    #[test]
    fn empty_graph_lfunction_is_one() {
        let g = Graph::from_edges(3, &[]).unwrap();
        let vg = VoltageGraph::trivial(&g);
        let em = edge_matrices(&vg, &trivial_matrices::<Rational>(&vg.group));
        assert_eq!(lfunction_edge(&em).unwrap(), BiPoly::one());
    }

    #[test]
    fn trivial_vertex_form_is_graph_formula() {
        let b = bipartite_graph(&fixtures::worked_hypergraph());
        let vg = VoltageGraph::trivial(&b);
        let v = lfunction_vertex(&vg, &trivial_matrices::<Rational>(&vg.group), "trivial").unwrap();
        assert_eq!(v, graph_bartholdi::<Rational>(&b).unwrap());
    }

    #[test]
    fn not_unitary_rejected() {
        let vg = example_vg();
        let bad = vec![Matrix::identity(1), Matrix::from_vec(1, 1, vec![rat(2, 1)])];
        assert_eq!(lfunction_vertex(&vg, &bad, "bad"), Err(ZetaError::NotUnitary("bad".into())));
    }

    #[test]
    fn example_decomposition() {
        let (h, phi) = fixtures::worked_cover();
        let vg = example_vg();
        let cat = builtin_irreps("S2", &vg.group).unwrap();
        let rep = verify_decomposition(&h, &phi, &cat, &SampleOptions::default()).unwrap();
        assert!(rep.passed(), "{:?}", rep.comparisons);
        assert_eq!(rep.mode, Mode::Exact);
        assert_eq!(rep.multiplicities, vec![1, 1]);
        assert_eq!(rep.cover_size, (12, 14));
        assert_eq!(rep.cover_reciprocal, fixtures::expected_cover());
    }

    #[test]
    fn second_factor_is_lfunction_without_prefactor() {
        let vg = example_vg();
        let rho = sign(&vg);
        let m2 = vertex_determinant(&vg, &rho).unwrap();
        let l2 = lfunction_edge(&edge_matrices(&vg, &rho)).unwrap();
        assert_eq!(with_bump_power(&l2, -1), m2);
    }

    #[test]
    fn ihara_reduction() {
        let vg = example_vg();
        let rho = sign(&vg);
        let m2 = vertex_determinant(&vg, &rho).unwrap();
        assert_eq!(m2.subst_u(&Rational::zero()), ihara_factor(&vg, &rho).unwrap());
        let b = bipartite_graph(&fixtures::worked_hypergraph());
        let z = graph_bartholdi::<Rational>(&b).unwrap();
        assert_eq!(z.subst_u(&Rational::zero()), graph_ihara::<Rational>(&b).unwrap());
    }

    #[test]
    fn identity_voltages_decompose_into_copies() {
        let h = fixtures::worked_hypergraph();
        let b = bipartite_graph(&h);
        let phi = VoltageAssignment::identity(2, &symmetric_digraph(&b));
        let vg = VoltageGraph::new(&b, phi.clone(), DEFAULT_GROUP_CAP).unwrap();
        let cat = builtin_irreps("cyclic-1", &vg.group).unwrap();
        let rep = verify_decomposition(&h, &phi, &cat, &SampleOptions::default()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.multiplicities, vec![2]);
        assert_eq!(rep.cover_reciprocal, rep.base_reciprocal.pow(2));
        assert_eq!(rep.cover_diagnostics.components, 2);
    }

    #[test]
    fn lemma_suite_on_example() {
        let vg = example_vg();
        for checks in [
            matrix_identity_suite(&vg, &sign(&vg)).unwrap(),
            matrix_identity_suite(&vg, &trivial_matrices::<Rational>(&vg.group)).unwrap(),
        ] {
            assert_eq!(checks.len(), 7);
            for c in checks {
                assert!(c.passed, "{}", c.name);
            }
        }
    }

    #[test]
    fn twisting_both_arcs_squares_the_base() {
        let h = fixtures::worked_hypergraph();
        let phi = fixtures::voltages(&h, 2, &[("v1", "e1", &[2, 1]), ("v1", "e3", &[2, 1])]);
        let b = bipartite_graph(&h);
        let (cover, _) = build_cover(&h, &phi).unwrap();
        let lhs = graph_bartholdi::<Rational>(&bipartite_graph(&cover)).unwrap();
        assert_eq!(lhs, graph_bartholdi::<Rational>(&b).unwrap().pow(2));
    }

    #[test]
    fn sample_points_in_range() {
        let pts = sample_points(7, 30);
        assert_eq!(pts, sample_points(7, 30));
        for (u, s) in pts {
            assert!((0.1..0.6).contains(&u.norm()) && (0.1..0.6).contains(&s.norm()));
        }
    }
}
