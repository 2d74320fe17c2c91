//! The worked example: three hypervertices, hyperedges `{v1,v2}`,
//! `{v2,v3}`, `{v1,v2,v3}`, and a 2-fold cover twisted on `(v1,e1)`.
//! Expected reciprocals are stored factored, as polynomials in `u` and
//! `s = √t`.

use crate::algebra::{BiPoly, IntMatrix, Rational};
use crate::covering::{complete_voltage, resolve_arc, Permutation, VoltageAssignment};
use crate::hypergraph::{bipartite_graph, symmetric_digraph, Hypergraph};

pub fn worked_hypergraph() -> Hypergraph {
    Hypergraph::new(
        ["v1", "v2", "v3"],
        [
            ("e1".to_string(), vec!["v1", "v2"]),
            ("e2".to_string(), vec!["v2", "v3"]),
            ("e3".to_string(), vec!["v1", "v2", "v3"]),
        ],
    )
    .expect("valid hypergraph")
}

/// Voltages from `(origin, terminus, one-line image)` triples.
pub fn voltages(h: &Hypergraph, k: usize, twists: &[(&str, &str, &[usize])]) -> VoltageAssignment {
    let b = bipartite_graph(h);
    let r = symmetric_digraph(&b);
    let partial: Vec<_> = twists
        .iter()
        .map(|(o, t, img)| (resolve_arc(&b, &r, o, t).unwrap(), Permutation::from_one_line(img).unwrap()))
        .collect();
    complete_voltage(&partial, k, &r).expect("consistent voltages")
}

pub fn worked_cover() -> (Hypergraph, VoltageAssignment) {
    let h = worked_hypergraph();
    let phi = voltages(&h, 2, &[("v1", "e1", &[2, 1])]);
    (h, phi)
}

/// Adjacency of the cover's incidence graph in the basis
/// `v^(1), v^(2), e^(1), e^(2)`.
#[rustfmt::skip]
pub fn worked_cover_adjacency() -> IntMatrix {
    let top: [[i64; 6]; 6] = [
        [0, 0, 1, 1, 0, 0],
        [1, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0, 0],
        [1, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 1, 1],
    ];
    IntMatrix::from_fn(12, 12, |i, j| match (i < 6, j < 6) {
        (true, false) => top[i][j - 6],
        (false, true) => top[j][i - 6],
        _ => 0,
    })
}

pub const PREFACTOR: &str = "1 - (1-u)^2*s^2";

pub const LINEAR_FACTORS: [&str; 2] = ["u*s - s - 1", "u*s - s + 1"];

pub const QUADRATIC_FACTORS: [&str; 2] = ["u^2*s^2 - s^2 - s - 1", "u^2*s^2 - s^2 + s - 1"];

pub const CUBIC_FACTORS: [&str; 2] = [
    "u^3*s^3 + 2*u^2*s^3 - u^2*s^2 - u*s^3 - u*s^2 - 2*s^3 - u*s + s^2 - s + 1",
    "u^3*s^3 + 2*u^2*s^3 + u^2*s^2 - u*s^3 + u*s^2 - 2*s^3 - u*s - s^2 - s - 1",
];

pub const SEXTIC_FACTORS: [&str; 2] = [
    "u^6*s^6 + u^5*s^6 - 4*u^4*s^6 - u^4*s^5 - 2*u^3*s^6 - 3*u^4*s^4 + 5*u^2*s^6 - 2*u^3*s^4 + 2*u^2*s^5 + u*s^6 \
     + 5*u^2*s^4 - 2*s^6 + 2*u^2*s^3 + u*s^4 - s^5 + 3*u^2*s^2 - s^4 + u*s^2 - s^3 - s^2 - s - 1",
    "u^6*s^6 + u^5*s^6 - 4*u^4*s^6 + u^4*s^5 - 2*u^3*s^6 - 3*u^4*s^4 + 5*u^2*s^6 - 2*u^3*s^4 - 2*u^2*s^5 + u*s^6 \
     + 5*u^2*s^4 - 2*s^6 - 2*u^2*s^3 + u*s^4 + s^5 + 3*u^2*s^2 - s^4 + u*s^2 + s^3 - s^2 + s - 1",
];

fn product(factors: &[&str]) -> BiPoly<Rational> {
    factors
        .iter()
        .map(|f| BiPoly::parse(f, 's').expect("factor parses"))
        .fold(BiPoly::int(1), |acc, f| &acc * &f)
}

/// Reciprocal of the base zeta function, equal to the trivial-character
/// L-function.
pub fn expected_base() -> BiPoly<Rational> {
    let mut fs = vec![PREFACTOR];
    fs.extend(LINEAR_FACTORS);
    fs.extend(QUADRATIC_FACTORS);
    fs.extend(CUBIC_FACTORS);
    product(&fs)
}

/// Reciprocal L-function of the sign character.
pub fn expected_sign() -> BiPoly<Rational> {
    let mut fs = vec![PREFACTOR];
    fs.extend(SEXTIC_FACTORS);
    product(&fs)
}

/// Reciprocal zeta function of the cover.
pub fn expected_cover() -> BiPoly<Rational> {
    let mut fs = vec![PREFACTOR, PREFACTOR];
    fs.extend(LINEAR_FACTORS);
    fs.extend(QUADRATIC_FACTORS);
    fs.extend(CUBIC_FACTORS);
    fs.extend(SEXTIC_FACTORS);
    product(&fs)
}
