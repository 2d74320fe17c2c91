//! Seeded random instances: hypergraphs, graphs, voltages and exact unitary
//! representations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{rat, Matrix, Rational};
use crate::covering::{complete_voltage, GroupTable, Permutation, VoltageAssignment};
use crate::hypergraph::{bipartite_graph, symmetric_digraph, validate_hypergraph, Graph, Hypergraph};
use crate::reptheory::{builtin_irreps, detect_builtin, permutation_representation, RepData, Representation};

/// A valid hypergraph (connected, no loops, every hypervertex in two
/// hyperedges) with `2..=max_vertices` hypervertices and
/// `2..=max_edges` hyperedges, by rejection sampling.
pub fn random_hypergraph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Hypergraph {
    loop {
        let n = rng.gen_range(2..=max_vertices.max(2));
        let m = rng.gen_range(2..=max_edges.max(2));
        let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, Vec<String>)> = (1..=m)
            .map(|j| {
                let size = rng.gen_range(2..=n);
                let members = vertices.choose_multiple(rng, size).cloned().collect();
                (format!("e{j}"), members)
            })
            .collect();
        if let Ok(h) = Hypergraph::new(vertices, edges) {
            if validate_hypergraph(&h).passes() {
                return h;
            }
        }
    }
}

/// A simple graph on `1..=max_vertices` vertices, each pair joined with
/// probability `p`.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, p: f64) -> Graph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("simple by construction")
}

/// Voltages drawn from `pool` on the canonical arcs, with at least one
/// non-identity value.
pub fn random_voltages<R: Rng>(rng: &mut R, g: &Graph, k: usize, pool: &[Permutation]) -> VoltageAssignment {
    let r = symmetric_digraph(g);
    let edges = r.edge_count();
    loop {
        let partial: Vec<(usize, Permutation)> = (0..edges).map(|a| (a, pool.choose(rng).unwrap().clone())).collect();
        if edges > 0 && partial.iter().all(|(_, p)| p.is_identity()) {
            continue;
        }
        return complete_voltage(&partial, k, &r).expect("consistent by construction");
    }
}

pub fn s2_pool() -> Vec<Permutation> {
    vec![Permutation::identity(2), Permutation::from_one_line(&[2, 1]).unwrap()]
}

pub fn c3_pool() -> Vec<Permutation> {
    vec![
        Permutation::identity(3),
        Permutation::from_one_line(&[2, 3, 1]).unwrap(),
        Permutation::from_one_line(&[3, 1, 2]).unwrap(),
    ]
}

pub fn c4_pool() -> Vec<Permutation> {
    let g = Permutation::from_one_line(&[2, 3, 4, 1]).unwrap();
    let mut out = vec![Permutation::identity(4)];
    for _ in 0..3 {
        out.push(out.last().unwrap().compose(&g));
    }
    out
}

pub fn s3_pool() -> Vec<Permutation> {
    [[1, 2, 3], [2, 1, 3], [1, 3, 2], [3, 2, 1], [2, 3, 1], [3, 1, 2]]
        .iter()
        .map(|p| Permutation::from_one_line(p).unwrap())
        .collect()
}

/// `S₂` voltages on `B_H` with at least one twisted incidence.
pub fn random_s2_voltages<R: Rng>(rng: &mut R, h: &Hypergraph) -> VoltageAssignment {
    random_voltages(rng, &bipartite_graph(h), 2, &s2_pool())
}

/// Voltages in the cyclic group generated by `(1 2 3)`.
pub fn random_c3_voltages<R: Rng>(rng: &mut R, h: &Hypergraph) -> VoltageAssignment {
    random_voltages(rng, &bipartite_graph(h), 3, &c3_pool())
}

pub fn sign(p: &Permutation) -> i64 {
    let k = p.degree();
    let mut seen = vec![false; k];
    let mut cycles = 0;
    for i in 0..k {
        if !seen[i] {
            cycles += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p.apply(j);
            }
        }
    }
    if (k - cycles).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn sign_representation(group: &GroupTable) -> Representation {
    let mats: Vec<Matrix<Rational>> =
        group.elements().iter().map(|g| Matrix::from_vec(1, 1, vec![rat(sign(g), 1)])).collect();
    Representation::new("sign", RepData::Rational(mats))
}

/// Exact unitary representations of `group`: permutation, sign, and the
/// builtin characters when the group is cyclic of order up to 4.
pub fn exact_unitary_representations(group: &GroupTable) -> Vec<Representation> {
    let mut out = vec![permutation_representation(group), sign_representation(group)];
    if let Some(kind) = detect_builtin(group) {
        if let Ok(cat) = builtin_irreps(kind, group) {
            out.extend(cat.irreps.into_iter().filter(|r| r.exact_matrices::<crate::algebra::Gaussian>().is_some()));
        }
    }
    out
}
