//! Hypergraphs, their bipartite incidence graphs, symmetric digraphs and
//! integer adjacency/degree matrices.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::algebra::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate hyperedge name {0:?}")]
    DuplicateEdge(String),
    #[error("hyperedge {0:?} is empty")]
    EmptyEdge(String),
    #[error("hyperedge {edge:?} names unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("hyperedge {edge:?} lists vertex {vertex:?} twice")]
    RepeatedMember { edge: String, vertex: String },
    #[error("vertex {0:?} lies in no hyperedge")]
    UncoveredVertex(String),
    #[error("graph has a loop at vertex {0}")]
    Loop(usize),
    #[error("graph has a repeated edge {0}-{1}")]
    MultiEdge(usize, usize),
    #[error("edge endpoint {0} out of range")]
    BadEndpoint(usize),
}

/// A finite hypergraph. Hyperedge members are stored as sorted vertex
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: Vec<String>,
    edges: Vec<(String, Vec<usize>)>,
}

impl Hypergraph {
    pub fn new<V, E, M>(vertices: V, edges: E) -> Result<Self, HypergraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, M)>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(HypergraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut names = HashSet::new();
        let mut out = Vec::new();
        let mut covered = vec![false; vertices.len()];
        for (name, members) in edges {
            if !names.insert(name.clone()) {
                return Err(HypergraphError::DuplicateEdge(name));
            }
            let mut idx = Vec::new();
            for m in members {
                let m: String = m.into();
                let Some(&i) = index.get(&m) else {
                    return Err(HypergraphError::UnknownVertex { edge: name, vertex: m });
                };
                if idx.contains(&i) {
                    return Err(HypergraphError::RepeatedMember { edge: name, vertex: m });
                }
                idx.push(i);
                covered[i] = true;
            }
            if idx.is_empty() {
                return Err(HypergraphError::EmptyEdge(name));
            }
            idx.sort_unstable();
            out.push((name, idx));
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(HypergraphError::UncoveredVertex(vertices[i].clone()));
        }
        Ok(Hypergraph { vertices, edges: out })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(String, Vec<usize>)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|(e, _)| e == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub connected: bool,
    pub components: usize,
    /// Hyperedges of cardinality one.
    pub loops: Vec<String>,
    /// Hypervertices lying in fewer than two hyperedges, with their count.
    pub low_incidence: Vec<(String, usize)>,
    /// Pairs of distinct hyperedges with the same vertex set.
    pub duplicate_vertex_sets: Vec<(String, String)>,
}

impl Diagnostics {
    pub fn no_loops(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn min_incidence_ok(&self) -> bool {
        self.low_incidence.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.connected && self.no_loops() && self.min_incidence_ok()
    }

    /// Human-readable names of the failed hypotheses.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.connected {
            out.push("connected");
        }
        if !self.no_loops() {
            out.push("no loops");
        }
        if !self.min_incidence_ok() {
            out.push("every hypervertex in at least two hyperedges");
        }
        out
    }
}

pub fn validate_hypergraph(h: &Hypergraph) -> Diagnostics {
    let b = bipartite_graph(h);
    let components = b.graph().component_count();
    let loops = h.edges.iter().filter(|(_, m)| m.len() == 1).map(|(n, _)| n.clone()).collect();
    let mut incidence = vec![0usize; h.vertex_count()];
    for (_, m) in &h.edges {
        for &v in m {
            incidence[v] += 1;
        }
    }
    let low_incidence = incidence
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 2)
        .map(|(v, &c)| (h.vertices[v].clone(), c))
        .collect();
    let mut duplicate_vertex_sets = Vec::new();
    for (i, (a, ma)) in h.edges.iter().enumerate() {
        for (b, mb) in &h.edges[i + 1..] {
            if ma == mb {
                duplicate_vertex_sets.push((a.clone(), b.clone()));
            }
        }
    }
    Diagnostics { connected: components == 1, components, loops, low_incidence, duplicate_vertex_sets }
}

/// A simple undirected graph. Each edge is stored as `(origin, terminus)`
/// of its canonical orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are kept in the given order and orientation.
    pub fn new(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, HypergraphError> {
        let n = names.len();
        let mut seen = HashSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(HypergraphError::BadEndpoint(a.max(b)));
            }
            if a == b {
                return Err(HypergraphError::Loop(a));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(HypergraphError::MultiEdge(a.min(b), a.max(b)));
            }
        }
        Ok(Graph { names, edges })
    }

    /// Vertices named `0..n`, each edge oriented from its smaller endpoint.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, HypergraphError> {
        let names = (0..n).map(|i| i.to_string()).collect();
        Graph::new(names, edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let adj = self.neighbors();
        let mut seen = vec![false; adj.len()];
        let mut count = 0;
        for start in 0..adj.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }
}

/// A bipartite graph whose vertices are marked as hypervertex side
/// (`true`) or hyperedge side (`false`). Edges are oriented from the
/// hypervertex side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    graph: Graph,
    vertex_side: Vec<bool>,
}

impl BipartiteGraph {
    pub fn new(graph: Graph, vertex_side: Vec<bool>) -> Self {
        assert_eq!(graph.vertex_count(), vertex_side.len());
        debug_assert!(graph.edges.iter().all(|&(a, b)| vertex_side[a] && !vertex_side[b]));
        BipartiteGraph { graph, vertex_side }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn is_vertex_side(&self, x: usize) -> bool {
        self.vertex_side[x]
    }

    pub fn vertex_side(&self) -> &[bool] {
        &self.vertex_side
    }
}

impl std::ops::Deref for BipartiteGraph {
    type Target = Graph;
    fn deref(&self) -> &Graph {
        &self.graph
    }
}

/// `B_H`: hypervertices in declaration order, then hyperedges; one edge per
/// incidence, listed hyperedge by hyperedge.
pub fn bipartite_graph(h: &Hypergraph) -> BipartiteGraph {
    let nv = h.vertex_count();
    let names: Vec<String> = h.vertices.iter().chain(h.edges.iter().map(|(n, _)| n)).cloned().collect();
    let edges = h
        .edges
        .iter()
        .enumerate()
        .flat_map(|(j, (_, m))| m.iter().map(move |&v| (v, nv + j)))
        .collect();
    let side = (0..names.len()).map(|i| i < nv).collect();
    BipartiteGraph::new(Graph::new(names, edges).expect("incidence graph is simple"), side)
}

/// `R(G)`: directed edges `e_1..e_2r` with `e_{i+r}` the inverse of `e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricDigraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
}

impl SymmetricDigraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Number of undirected edges `r`.
    pub fn edge_count(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn origin(&self, a: usize) -> usize {
        self.arcs[a].0
    }

    pub fn terminus(&self, a: usize) -> usize {
        self.arcs[a].1
    }

    pub fn inverse(&self, a: usize) -> usize {
        let r = self.edge_count();
        if a < r {
            a + r
        } else {
            a - r
        }
    }

    /// Arc index of the directed edge `(o, t)`.
    pub fn find(&self, o: usize, t: usize) -> Option<usize> {
        self.arcs.iter().position(|&a| a == (o, t))
    }

    /// Arcs leaving each vertex, in index order.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count];
        for (i, &(o, _)) in self.arcs.iter().enumerate() {
            out[o].push(i);
        }
        out
    }
}

pub fn symmetric_digraph(g: &Graph) -> SymmetricDigraph {
    let mut arcs = g.edges.clone();
    arcs.extend(g.edges.iter().map(|&(a, b)| (b, a)));
    SymmetricDigraph { vertex_count: g.vertex_count(), arcs }
}

pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    let n = g.vertex_count();
    let mut a = IntMatrix::zeros(n, n);
    for &(x, y) in &g.edges {
        a[(x, y)] = 1;
        a[(y, x)] = 1;
    }
    a
}

pub fn degree_matrix(g: &Graph) -> IntMatrix {
    let n = g.vertex_count();
    let mut d = IntMatrix::zeros(n, n);
    for &(x, y) in &g.edges {
        d[(x, x)] += 1;
        d[(y, y)] += 1;
    }
    d
}
