use std::collections::BTreeSet;

use hyperzeta::algebra::{collapse_to_t, rat, series_inverse, BiPoly, Gaussian, Matrix, Rational, UPoly};
use hyperzeta::cycles::{
    amitsur_check, cbc, cycle_factor, enumerate_prime_cycles, euler_product_series, is_primitive,
    lyndon_words, necklace_count, row_selected_check, weighted_euler_reciprocal, CycleError, DirectedCycle,
};
use hyperzeta::hypergraph::{bipartite_graph, Hypergraph};
use hyperzeta::random::{
    c4_pool, exact_unitary_representations, random_c3_voltages, random_graph, random_hypergraph,
    random_s2_voltages, random_voltages,
};
use hyperzeta::reptheory::{builtin_irreps, detect_builtin, Representation};
use hyperzeta::zeta::{
    edge_matrices, graph_bartholdi, graph_ihara, lfunction_edge, lfunction_vertex, matrix_identity_suite,
    trivial_matrices, verify_decomposition, Mode, SampleOptions, VoltageGraph,
};
use hyperzeta::covering::DEFAULT_GROUP_CAP;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn routes_agree<C: hyperzeta::algebra::Coeff>(vg: &VoltageGraph, rep: &Representation) -> Option<(BiPoly<C>, bool)> {
    let rho = rep.exact_matrices::<C>()?;
    let edge = lfunction_edge(&edge_matrices(vg, &rho)).unwrap();
    let vertex = lfunction_vertex(vg, &rho, &rep.name).unwrap();
    Some((edge.clone(), edge == vertex))
}

/// Random graph with voltages in `C₄` and one of its exact unitary reps.
fn voltage_instance(seed: u64) -> (VoltageGraph, Representation) {
    let mut r = rng(seed);
    let g = random_graph(&mut r, 5, 0.6);
    let pool = c4_pool();
    let phi = random_voltages(&mut r, &g, 4, &pool);
    let vg = VoltageGraph::new(&g, phi, DEFAULT_GROUP_CAP).unwrap();
    let reps = exact_unitary_representations(&vg.group);
    let rep = reps[r.gen_range(0..reps.len())].clone();
    (vg, rep)
}

/// Prime cycle classes of a hypergraph as `(length, cbc)`, enumerated on
/// `(v_i, e_i)` sequences with the hypergraph bump count.
fn hypergraph_cycle_profile(h: &Hypergraph, max_len: usize) -> Vec<(usize, usize)> {
    let mut steps = Vec::new();
    for (e, (_, members)) in h.edges().iter().enumerate() {
        for &v in members {
            steps.push((v, e));
        }
    }
    let mut out = Vec::new();
    for n in 1..=max_len {
        let mut classes = BTreeSet::new();
        let mut word = Vec::new();
        fn extend(
            h: &Hypergraph,
            steps: &[(usize, usize)],
            n: usize,
            word: &mut Vec<(usize, usize)>,
            classes: &mut BTreeSet<Vec<(usize, usize)>>,
        ) {
            if word.len() == n {
                let close = h.edges()[word[n - 1].1].1.contains(&word[0].0);
                if close && is_primitive(word) {
                    let canon = (0..n).map(|k| [&word[k..], &word[..k]].concat()).min().unwrap();
                    classes.insert(canon);
                }
                return;
            }
            for &(v, e) in steps {
                if let Some(&(_, pe)) = word.last() {
                    if !h.edges()[pe].1.contains(&v) {
                        continue;
                    }
                }
                word.push((v, e));
                extend(h, steps, n, word, classes);
                word.pop();
            }
        }
        extend(h, &steps, n, &mut word, &mut classes);
        for c in classes {
            let bumps = (0..n).filter(|&i| c[i].0 == c[(i + 1) % n].0).count()
                + (0..n).filter(|&i| c[i].1 == c[(i + 1) % n].1).count();
            out.push((n, bumps));
        }
    }
    out.sort();
    out
}

#[test]
fn hypergraph_cbc_matches_incidence_graph_cbc() {
    for seed in 0..12 {
        let h = random_hypergraph(&mut rng(seed), 3, 3);
        let b = bipartite_graph(&h);
        let vg = VoltageGraph::trivial(&b);
        let e = enumerate_prime_cycles(&vg.digraph, 8, 1_000_000).unwrap();
        let mut graph: Vec<(usize, usize)> = e.classes.iter().map(|c| (c.cycle.len() / 2, c.cbc)).collect();
        graph.sort();
        assert!(e.classes.iter().all(|c| c.cycle.len() % 2 == 0));
        assert_eq!(graph, hypergraph_cycle_profile(&h, 4), "seed {seed}");
    }
}

#[test]
fn lyndon_counts_match_necklace_formula() {
    for a in 1..=4 {
        let words = lyndon_words(a, 10);
        for n in 1..=10 {
            assert_eq!(words.iter().filter(|w| w.len() == n).count() as u64, necklace_count(a, n), "a={a} n={n}");
        }
        assert!(words.windows(2).all(|w| w[0] < w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_routes_agree(seed in any::<u64>()) {
        let (vg, rep) = voltage_instance(seed);
        let (p, ok) = match rep.exact_matrices::<Rational>() {
            Some(_) => {
                let (p, ok) = routes_agree::<Rational>(&vg, &rep).unwrap();
                (p.map_coeffs(hyperzeta::algebra::Coeff::to_gaussian), ok)
            }
            None => routes_agree::<Gaussian>(&vg, &rep).unwrap(),
        };
        prop_assert!(ok);
        let full = 2 * vg.edge_count() * rep.degree();
        prop_assert_eq!(p.degree_s().unwrap_or(0) as usize, full);
    }

    #[test]
    fn lemma_suite_random(seed in any::<u64>()) {
        let (vg, rep) = voltage_instance(seed);
        let checks = match rep.exact_matrices::<Rational>() {
            Some(rho) => matrix_identity_suite(&vg, &rho).unwrap(),
            None => matrix_identity_suite(&vg, &rep.exact_matrices::<Gaussian>().unwrap()).unwrap(),
        };
        for c in checks {
            prop_assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn ihara_is_u_zero_and_powers_are_even(seed in any::<u64>()) {
        let h = random_hypergraph(&mut rng(seed), 4, 4);
        let b = bipartite_graph(&h);
        let z = graph_bartholdi::<Rational>(&b).unwrap();
        prop_assert_eq!(z.subst_u(&rat(0, 1)), graph_ihara::<Rational>(&b).unwrap());
        prop_assert!(collapse_to_t(&z).is_ok());
    }

    #[test]
    fn cycle_factor_rotation_invariant(seed in any::<u64>()) {
        let (vg, rep) = voltage_instance(seed);
        prop_assume!(vg.edge_count() > 0);
        let rho = rep.exact_matrices::<Gaussian>().unwrap();
        let values = vg.arc_values(&rho);
        let r = &vg.digraph;
        let mut rr = rng(seed ^ 0x5eed);
        // random closed walk: wander, then return along a shortest path home
        let start = rr.gen_range(0..r.arc_count());
        let mut walk = vec![start];
        let out = r.out_arcs();
        for _ in 0..rr.gen_range(0..6) {
            let here = r.terminus(*walk.last().unwrap());
            walk.push(out[here][rr.gen_range(0..out[here].len())]);
        }
        walk.push(r.inverse(*walk.last().unwrap()));
        let back: Vec<usize> = walk[..walk.len() - 1].iter().rev().map(|&a| r.inverse(a)).collect();
        walk.extend(back.into_iter().skip(1));
        let c = DirectedCycle::new(r, walk).unwrap();
        let f = cycle_factor(r, &values, &c);
        for k in 0..c.len() {
            let rot = c.rotate(k);
            prop_assert_eq!(cbc(r, &rot), cbc(r, &c));
            prop_assert_eq!(&cycle_factor(r, &values, &rot), &f);
        }
    }

    #[test]
    fn euler_product_matches_determinant(seed in any::<u64>(), order in 1usize..=10) {
        let g = random_graph(&mut rng(seed), 8, 0.25);
        let vg = VoltageGraph::trivial(&g);
        let det = lfunction_edge(&edge_matrices(&vg, &trivial_matrices::<Rational>(&vg.group))).unwrap();
        let e = match enumerate_prime_cycles(&vg.digraph, order, 200_000) {
            Ok(e) => e,
            Err(CycleError::ExplosionGuard { .. }) => return Ok(()),
            Err(x) => panic!("{x}"),
        };
        let euler = euler_product_series::<Rational>(&e, order).unwrap();
        prop_assert_eq!(euler, series_inverse(&det, order).unwrap());
    }

    #[test]
    fn weighted_euler_product_matches_edge_form(seed in any::<u64>()) {
        let (vg, rep) = voltage_instance(seed);
        let rho = rep.exact_matrices::<Gaussian>().unwrap();
        let det = lfunction_edge(&edge_matrices(&vg, &rho)).unwrap();
        let e = enumerate_prime_cycles(&vg.digraph, 5, 200_000).unwrap();
        let prod = weighted_euler_reciprocal(&vg.digraph, &e, &vg.arc_values(&rho), 5).unwrap();
        prop_assert_eq!(prod, det.truncate_s(5));
    }

    #[test]
    fn amitsur_random_families(seed in any::<u64>()) {
        let mut r = rng(seed);
        let count = r.gen_range(1..=3);
        let n = r.gen_range(1..=3);
        let order = r.gen_range(1..=6);
        let mats: Vec<Matrix<UPoly<Rational>>> = (0..count)
            .map(|_| Matrix::from_fn(n, n, |_, _| UPoly::constant(rat(r.gen_range(-2..=2), 1))))
            .collect();
        prop_assert!(amitsur_check(&mats, order));
    }

    #[test]
    fn primitive_words_conjugate_to_primitive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let len = r.gen_range(1..=8);
        let a = r.gen_range(1..=3);
        let w: Vec<u8> = (0..len).map(|_| r.gen_range(0..a)).collect();
        let p = is_primitive(&w);
        for k in 0..len {
            let rot = [&w[k..], &w[..k]].concat();
            prop_assert_eq!(is_primitive(&rot), p);
        }
    }

    #[test]
    fn row_selected_sequences(seed in any::<u64>()) {
        let (vg, rep) = voltage_instance(seed);
        prop_assume!(vg.edge_count() > 0);
        let rho = rep.exact_matrices::<Gaussian>().unwrap();
        let em = edge_matrices(&vg, &rho);
        let values = vg.arc_values(&rho);
        let r = &vg.digraph;
        let mut rr = rng(seed.rotate_left(7));
        let len = rr.gen_range(1..=5);
        let seq: Vec<usize> = (0..len).map(|_| rr.gen_range(0..r.arc_count())).collect();
        prop_assert!(row_selected_check(r, &em, &values, &seq));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decomposition_random_s2(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_hypergraph(&mut r, 5, 5);
        let phi = random_s2_voltages(&mut r, &h);
        let vg = VoltageGraph::new(&bipartite_graph(&h), phi.clone(), DEFAULT_GROUP_CAP).unwrap();
        let cat = builtin_irreps(detect_builtin(&vg.group).unwrap(), &vg.group).unwrap();
        let rep = verify_decomposition(&h, &phi, &cat, &SampleOptions::default()).unwrap();
        prop_assert_eq!(rep.mode, Mode::Exact);
        prop_assert!(rep.passed(), "{:?}", rep.comparisons);
    }

    #[test]
    fn decomposition_random_c3_sampled(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_hypergraph(&mut r, 4, 4);
        let phi = random_c3_voltages(&mut r, &h);
        let vg = VoltageGraph::new(&bipartite_graph(&h), phi.clone(), DEFAULT_GROUP_CAP).unwrap();
        let cat = builtin_irreps("cyclic-3", &vg.group).unwrap();
        let opts = SampleOptions { count: 25, tolerance: 1e-8, seed };
        let rep = verify_decomposition(&h, &phi, &cat, &opts).unwrap();
        prop_assert_eq!(rep.mode, Mode::Sampled);
        prop_assert!(rep.passed(), "{:?}", rep.comparisons);
    }
}
