use hyperzeta::algebra::{IntMatrix, Matrix, Rational};
use hyperzeta::covering::{
    adjacency_summands, check_kronecker_identity, covering_hypergraph, derived_graph, group_closure,
    VoltageAssignment, DEFAULT_GROUP_CAP,
};
use hyperzeta::hypergraph::{adjacency_matrix, bipartite_graph, degree_matrix, symmetric_digraph, Hypergraph};
use hyperzeta::random::{
    c3_pool, c4_pool, random_c3_voltages, random_graph, random_hypergraph, random_s2_voltages, random_voltages,
    s3_pool,
};
use hyperzeta::reptheory::{
    builtin_irreps, check_representation, detect_builtin, multiplicities, permutation_representation,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn instance(seed: u64) -> (Hypergraph, VoltageAssignment) {
    let mut r = rng(seed);
    let h = random_hypergraph(&mut r, 5, 5);
    let phi = match seed % 2 {
        0 => random_s2_voltages(&mut r, &h),
        _ => random_c3_voltages(&mut r, &h),
    };
    (h, phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn degree_is_row_sum(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 8, 0.4);
        let a = adjacency_matrix(&g);
        let d = degree_matrix(&g);
        for i in 0..g.vertex_count() {
            let row: i64 = (0..g.vertex_count()).map(|j| a[(i, j)]).sum();
            prop_assert_eq!(d[(i, i)], row);
        }
    }

    #[test]
    fn incidence_graph_degrees(seed in any::<u64>()) {
        let h = random_hypergraph(&mut rng(seed), 5, 5);
        let b = bipartite_graph(&h);
        let d = degree_matrix(&b);
        let n = h.vertex_count();
        for v in 0..n {
            let count = h.edges().iter().filter(|(_, m)| m.contains(&v)).count() as i64;
            prop_assert_eq!(d[(v, v)], count);
        }
        for (j, (_, m)) in h.edges().iter().enumerate() {
            prop_assert_eq!(d[(n + j, n + j)], m.len() as i64);
        }
        for &(a, c) in b.edges() {
            prop_assert!(b.is_vertex_side(a) != b.is_vertex_side(c));
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, c) in b.edges() {
            prop_assert!(a != c);
            prop_assert!(seen.insert((a.min(c), a.max(c))));
        }
    }

    #[test]
    fn digraph_inverse_arcs(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 7, 0.5);
        let r = symmetric_digraph(&g);
        let m = r.edge_count();
        for i in 0..m {
            prop_assert_eq!(r.origin(i + m), r.terminus(i));
            prop_assert_eq!(r.terminus(i + m), r.origin(i));
            prop_assert_eq!(r.inverse(r.inverse(i)), i);
        }
    }

    #[test]
    fn summands_and_kronecker(seed in any::<u64>()) {
        let (h, phi) = instance(seed);
        let b = bipartite_graph(&h);
        let r = symmetric_digraph(&b);
        let group = group_closure(&phi, DEFAULT_GROUP_CAP).unwrap();
        let parts = adjacency_summands(&b, &r, &phi, &group);
        let n = b.vertex_count();
        let total = parts.iter().fold(IntMatrix::zeros(n, n), |acc, a| &acc + a);
        prop_assert_eq!(total, adjacency_matrix(&b));
        for (g, a) in parts.iter().enumerate() {
            prop_assert_eq!(&parts[group.inv(g)], &a.transpose());
        }
        prop_assert!(check_kronecker_identity(&b, &r, &phi, &group));

        let derived = derived_graph(&b, &phi);
        let expected = IntMatrix::identity(phi.k()).kron(&degree_matrix(&b));
        prop_assert_eq!(degree_matrix(derived.graph()), expected);
    }

    #[test]
    fn identity_voltages_give_copies(seed in any::<u64>(), k in 1usize..4) {
        let h = random_hypergraph(&mut rng(seed), 4, 4);
        let b = bipartite_graph(&h);
        let r = symmetric_digraph(&b);
        let phi = VoltageAssignment::identity(k, &r);
        let cover = covering_hypergraph(&derived_graph(&b, &phi)).unwrap();
        let bc = bipartite_graph(&cover);
        prop_assert_eq!(bc.component_count(), k * b.component_count());
        prop_assert_eq!(cover.vertex_count(), k * h.vertex_count());
    }

    #[test]
    fn permutation_representation_facts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 5, 0.7);
        let pools = [c3_pool(), c4_pool(), s3_pool()];
        let pool = &pools[(seed % 3) as usize];
        let k = pool[0].degree();
        let phi = random_voltages(&mut r, &g, k, pool);
        let group = group_closure(&phi, DEFAULT_GROUP_CAP).unwrap();
        let perm = permutation_representation(&group);
        prop_assert!(check_representation(&perm, &group).is_homomorphism());
        let mats: Vec<Matrix<Rational>> = perm.exact_matrices().unwrap();
        for (x, m) in mats.iter().enumerate() {
            let fixed = group.element(x).fixed_points();
            prop_assert_eq!(m.trace(), Rational::from_integer(fixed.into()));
        }
        if let Some(kind) = detect_builtin(&group) {
            let cat = builtin_irreps(kind, &group).unwrap();
            let mult = multiplicities(&cat, &perm, &group).unwrap();
            prop_assert!(mult[0] >= 1);
            let dim: usize = mult.iter().zip(cat.degrees()).map(|(m, f)| m * f).sum();
            prop_assert_eq!(dim, k);
            for rep in &cat.irreps {
                let d = check_representation(rep, &group);
                prop_assert!(d.unitarity_residual < 1e-12);
            }
        }
    }
}
