//! Permutation voltage assignments, the voltage group, derived graphs and
//! covering hypergraphs.

use std::collections::{HashMap, VecDeque};

use crate::algebra::IntMatrix;
use crate::hypergraph::{BipartiteGraph, Graph, Hypergraph, HypergraphError, SymmetricDigraph};

pub const DEFAULT_GROUP_CAP: usize = 10080;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("{0:?} is not a permutation of 1..={1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("permutation has degree {got}, expected {expected}")]
    WrongDegree { expected: usize, got: usize },
    #[error("voltages on arc {0} and its inverse are inconsistent")]
    ConflictingVoltage(usize),
    #[error("voltage for arc {0} given twice")]
    RepeatedVoltage(usize),
    #[error("group order exceeds the cap {0}")]
    GroupTooLarge(usize),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("{0:?} -> {1:?} is not an edge of the incidence graph")]
    NotAnIncidence(String, String),
    #[error("hyperedge {0:?} of the cover has no vertices")]
    EmptyHyperedge(String),
    #[error("element list is not a group: {0}")]
    NotAGroup(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// A permutation of `0..k`, stored as images. Text and file formats use
/// one-line notation on `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation { img: (0..k).collect() }
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(img: &[usize]) -> Result<Self, CoverError> {
        let k = img.len();
        let mut seen = vec![false; k];
        for &x in img {
            if x == 0 || x > k || seen[x - 1] {
                return Err(CoverError::BadPermutation(img.to_vec(), k));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { img: img.iter().map(|x| x - 1).collect() })
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|x| x + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// `g(j)` for 0-based `j`.
    pub fn apply(&self, j: usize) -> usize {
        self.img[j]
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.degree(), other.degree());
        Permutation { img: other.img.iter().map(|&x| self.img[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.img.len()];
        for (j, &x) in self.img.iter().enumerate() {
            inv[x] = j;
        }
        Permutation { img: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.img.iter().enumerate().filter(|(i, &x)| *i == x).count()
    }

    /// Smallest `n >= 1` with `g^n = id`.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    /// Permutation matrix with entries `δ_{i, g(j)}`.
    pub fn matrix(&self) -> IntMatrix {
        let k = self.degree();
        let mut m = IntMatrix::zeros(k, k);
        for j in 0..k {
            m[(self.img[j], j)] = 1;
        }
        m
    }
}

/// A voltage on every arc of `R(B_H)`, closed under inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageAssignment {
    k: usize,
    perms: Vec<Permutation>,
    given: Vec<usize>,
}

impl VoltageAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, arc: usize) -> &Permutation {
        &self.perms[arc]
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// Arcs whose voltages were supplied, in input order.
    pub fn given(&self) -> &[usize] {
        &self.given
    }

    pub fn identity(k: usize, r: &SymmetricDigraph) -> Self {
        VoltageAssignment { k, perms: vec![Permutation::identity(k); r.arc_count()], given: Vec::new() }
    }
}

/// Fills unspecified arcs with the identity and inverse arcs with inverse
/// permutations.
pub fn complete_voltage(
    partial: &[(usize, Permutation)],
    k: usize,
    r: &SymmetricDigraph,
) -> Result<VoltageAssignment, CoverError> {
    let mut perms: Vec<Option<Permutation>> = vec![None; r.arc_count()];
    let mut given = Vec::new();
    for (arc, p) in partial {
        if p.degree() != k {
            return Err(CoverError::WrongDegree { expected: k, got: p.degree() });
        }
        if given.contains(arc) {
            return Err(CoverError::RepeatedVoltage(*arc));
        }
        let inv = r.inverse(*arc);
        if perms[*arc].as_ref().is_some_and(|q| q != p) {
            return Err(CoverError::ConflictingVoltage(*arc.min(&inv)));
        }
        perms[*arc] = Some(p.clone());
        perms[inv] = Some(p.inverse());
        given.push(*arc);
    }
    let perms = perms.into_iter().map(|p| p.unwrap_or_else(|| Permutation::identity(k))).collect();
    Ok(VoltageAssignment { k, perms, given })
}

/// Arc of `R(B_H)` named by its endpoint names. Only incidence arcs exist.
pub fn resolve_arc(b: &BipartiteGraph, r: &SymmetricDigraph, origin: &str, terminus: &str) -> Result<usize, CoverError> {
    let find = |name: &str| {
        b.names().iter().position(|n| n == name).ok_or_else(|| CoverError::UnknownVertex(name.to_string()))
    };
    let o = find(origin)?;
    let t = find(terminus)?;
    r.find(o, t).ok_or_else(|| CoverError::NotAnIncidence(origin.to_string(), terminus.to_string()))
}

/// A finite permutation group with the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    k: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl GroupTable {
    /// Checks that `elements` lists a group without repetition, identity
    /// first.
    pub fn from_elements(k: usize, elements: Vec<Permutation>) -> Result<Self, CoverError> {
        if elements.first().map(|e| e.is_identity()) != Some(true) {
            return Err(CoverError::NotAGroup("first element must be the identity".into()));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if e.degree() != k {
                return Err(CoverError::WrongDegree { expected: k, got: e.degree() });
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(CoverError::NotAGroup(format!("element {:?} repeated", e.one_line())));
            }
        }
        for a in &elements {
            for b in &elements {
                if !index.contains_key(&a.compose(b)) {
                    return Err(CoverError::NotAGroup("not closed under composition".into()));
                }
            }
        }
        Ok(GroupTable { k, elements, index })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `elements[a] ∘ elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }
}

/// Breadth-first closure of the voltages, supplied arcs first.
pub fn group_closure(assignment: &VoltageAssignment, cap: usize) -> Result<GroupTable, CoverError> {
    let mut gens: Vec<&Permutation> = Vec::new();
    let order = assignment.given.iter().copied().chain(0..assignment.perms.len());
    for arc in order {
        let p = &assignment.perms[arc];
        if !p.is_identity() && !gens.contains(&p) {
            gens.push(p);
        }
    }
    let id = Permutation::identity(assignment.k);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = elements[x].compose(g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(CoverError::GroupTooLarge(cap));
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }
    Ok(GroupTable { k: assignment.k, elements, index })
}

/// `A(B_H)_g` for each group element, in group order.
pub fn adjacency_summands(
    b: &Graph,
    r: &SymmetricDigraph,
    assignment: &VoltageAssignment,
    group: &GroupTable,
) -> Vec<IntMatrix> {
    let n = b.vertex_count();
    let mut out = vec![IntMatrix::zeros(n, n); group.order()];
    for (a, &(o, t)) in r.arcs().iter().enumerate() {
        let g = group.index_of(assignment.get(a)).expect("voltage lies in the group");
        out[g][(o, t)] = 1;
    }
    out
}

/// The derived graph on `V(B_H) × [k]`, vertex `(x, f)` at index
/// `f * |V(B_H)| + x`. Vertex `(v, φ(e)(j))` is joined to `(w, j)` for
/// every arc `e = (v, w)`.
pub fn derived_graph(b: &BipartiteGraph, assignment: &VoltageAssignment) -> BipartiteGraph {
    let n = b.vertex_count();
    let k = assignment.k();
    let mut names = Vec::with_capacity(n * k);
    let mut side = Vec::with_capacity(n * k);
    for f in 0..k {
        for x in 0..n {
            names.push(format!("{}@{}", b.names()[x], f + 1));
            side.push(b.is_vertex_side(x));
        }
    }
    let mut edges = Vec::with_capacity(b.edge_count() * k);
    for (e, &(v, w)) in b.edges().iter().enumerate() {
        let g = assignment.get(e);
        for j in 0..k {
            edges.push((g.apply(j) * n + v, j * n + w));
        }
    }
    BipartiteGraph::new(Graph::new(names, edges).expect("derived graph is simple"), side)
}

/// Reads a hypergraph off a bipartite graph: hypervertex-side vertices
/// become hypervertices, hyperedge-side vertices become hyperedges on
/// their neighborhoods.
pub fn covering_hypergraph(derived: &BipartiteGraph) -> Result<Hypergraph, CoverError> {
    let adj = derived.neighbors();
    let names = derived.names();
    let vertices: Vec<String> = (0..names.len()).filter(|&x| derived.is_vertex_side(x)).map(|x| names[x].clone()).collect();
    let mut edges = Vec::new();
    for x in (0..names.len()).filter(|&x| !derived.is_vertex_side(x)) {
        if adj[x].is_empty() {
            return Err(CoverError::EmptyHyperedge(names[x].clone()));
        }
        let mut members = adj[x].clone();
        members.sort_unstable();
        edges.push((names[x].clone(), members.into_iter().map(|y| names[y].clone()).collect::<Vec<_>>()));
    }
    Ok(Hypergraph::new(vertices, edges)?)
}

/// `A(derived) = Σ_g ℙ(g) ⊗ A(B_H)_g`, compared entrywise.
pub fn check_kronecker_identity(
    b: &BipartiteGraph,
    r: &SymmetricDigraph,
    assignment: &VoltageAssignment,
    group: &GroupTable,
) -> bool {
    let lhs = crate::hypergraph::adjacency_matrix(&derived_graph(b, assignment));
    lhs == kronecker_sum(b, r, assignment, group)
}

pub fn kronecker_sum(
    b: &Graph,
    r: &SymmetricDigraph,
    assignment: &VoltageAssignment,
    group: &GroupTable,
) -> IntMatrix {
    let n = b.vertex_count();
    let k = assignment.k();
    let mut rhs = IntMatrix::zeros(n * k, n * k);
    for (g, ag) in group.elements().iter().zip(adjacency_summands(b, r, assignment, group)) {
        rhs = &rhs + &g.matrix().kron(&ag);
    }
    rhs
}
