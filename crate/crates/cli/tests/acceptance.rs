//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use hyperzeta::algebra::{collapse_to_t, rat, series_inverse, BiPoly, Gaussian, Matrix, Rational, UPoly};
use hyperzeta::covering::{check_kronecker_identity, Permutation, VoltageAssignment, DEFAULT_GROUP_CAP};
use hyperzeta::cycles::{
    amitsur_check, enumerate_prime_cycles, euler_product_series, is_closed_walk, lyndon_words, necklace_count,
    row_selected_check,
};
use hyperzeta::fixtures;
use hyperzeta::hypergraph::{adjacency_matrix, bipartite_graph, Hypergraph};
use hyperzeta::random::{
    c4_pool, exact_unitary_representations, random_c3_voltages, random_graph, random_hypergraph,
    random_s2_voltages, random_voltages, s2_pool, s3_pool,
};
use hyperzeta::reptheory::{builtin_irreps, detect_builtin, IrrepCatalog};
use hyperzeta::zeta::{
    build_cover, edge_matrices, ihara_factor, lfunction_edge, lfunction_vertex, matrix_identity_suite,
    trivial_matrices, verify_decomposition, vertex_determinant, DecompositionReport, ExactPoly, Mode,
    SampleOptions, VoltageGraph,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run_cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperzeta")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap_or(-1), report)
}

fn t_text(p: &BiPoly<Rational>) -> String {
    collapse_to_t(p).expect("even in s").to_text()
}

fn factor_poly(rep: &DecompositionReport, i: usize) -> Option<BiPoly<Rational>> {
    match rep.factors[i].lfunction.as_ref()?.reciprocal.as_ref()? {
        ExactPoly::Rational(p) => Some(p.clone()),
        ExactPoly::Gaussian(_) => None,
    }
}

struct Instance {
    h: Hypergraph,
    phi: VoltageAssignment,
    vg: VoltageGraph,
    cat: IrrepCatalog,
}

/// 50 instances with `S₂` voltages, then 20 with cyclic-3 voltages.
fn corpus() -> Vec<Instance> {
    (0..70u64)
        .map(|i| {
            let mut r = rng(0xacce_0000 + i);
            let h = random_hypergraph(&mut r, 5, 5);
            let phi = if i < 50 { random_s2_voltages(&mut r, &h) } else { random_c3_voltages(&mut r, &h) };
            let vg = VoltageGraph::new(&bipartite_graph(&h), phi.clone(), DEFAULT_GROUP_CAP).unwrap();
            let cat = builtin_irreps(detect_builtin(&vg.group).unwrap(), &vg.group).unwrap();
            Instance { h, phi, vg, cat }
        })
        .collect()
}

fn criterion_1() -> (bool, String) {
    let (h, phi) = fixtures::worked_cover();
    let vg = VoltageGraph::new(&bipartite_graph(&h), phi.clone(), DEFAULT_GROUP_CAP).unwrap();
    let cat = builtin_irreps("S2", &vg.group).unwrap();
    let rep = verify_decomposition(&h, &phi, &cat, &SampleOptions::default()).unwrap();
    let lib_ok = rep.group_order == 2
        && rep.multiplicities == vec![1, 1]
        && rep.cover_size == (12, 14)
        && rep.cover_reciprocal == fixtures::expected_cover()
        && factor_poly(&rep, 0) == Some(fixtures::expected_base())
        && factor_poly(&rep, 1) == Some(fixtures::expected_sign())
        && rep.passed();

    let hp = data("worked.json");
    let vp = data("worked_s2.json");
    let (code, j) = run_cli(&["--json", "--no-timing", "verify", hp.to_str().unwrap(), vp.to_str().unwrap()]);
    let cli_ok = code == 0
        && j["group"]["order"] == 2
        && j["multiplicities"] == serde_json::json!([1, 1])
        && j["cover"]["incidence_graph"]["vertices"] == 12
        && j["cover"]["incidence_graph"]["edges"] == 14
        && j["cover_reciprocal"]["text"] == t_text(&fixtures::expected_cover()).as_str()
        && j["factors"][0]["reciprocal"]["text"] == t_text(&fixtures::expected_base()).as_str()
        && j["factors"][1]["reciprocal"]["text"] == t_text(&fixtures::expected_sign()).as_str();
    (lib_ok && cli_ok, format!("library {lib_ok}, cli {cli_ok}"))
}

fn criterion_2(c: &[Instance]) -> (bool, String) {
    let mut exact = 0;
    let mut sampled = 0;
    let mut worst: f64 = 0.0;
    for (i, x) in c.iter().enumerate() {
        let opts = SampleOptions { count: 25, tolerance: 1e-8, seed: i as u64 };
        let rep = verify_decomposition(&x.h, &x.phi, &x.cat, &opts).unwrap();
        if !rep.passed() {
            continue;
        }
        if i < 50 && rep.mode == Mode::Exact && rep.comparisons.iter().all(|c| c.mode == Mode::Exact) {
            exact += 1;
        }
        if i >= 50 && rep.mode == Mode::Sampled {
            sampled += 1;
            worst = rep.comparisons.iter().map(|c| c.max_residual).fold(worst, f64::max);
        }
    }
    (
        exact == 50 && sampled == 20 && worst < 1e-8,
        format!("{exact}/50 exact S2, {sampled}/20 sampled cyclic-3, worst residual {worst:e}"),
    )
}

fn criterion_3(c: &[Instance]) -> (bool, String) {
    let mut checked = 0;
    let mut agree = 0;
    for x in c.iter().filter(|x| x.vg.group.order() <= 2) {
        for irrep in &x.cat.irreps {
            let Some(rho) = irrep.exact_matrices::<Rational>() else { continue };
            checked += 1;
            let edge = lfunction_edge(&edge_matrices(&x.vg, &rho)).unwrap();
            let vertex = lfunction_vertex(&x.vg, &rho, &irrep.name).unwrap();
            agree += usize::from(edge == vertex);
        }
    }
    (checked > 0 && agree == checked, format!("{agree}/{checked} exact L-functions"))
}

fn criterion_4() -> (bool, String) {
    let mut graphs = vec![bipartite_graph(&fixtures::worked_hypergraph()).graph().clone()];
    let mut r = rng(0xe0_1e4);
    while graphs.len() < 11 {
        let g = random_graph(&mut r, 6, 0.45);
        if g.edge_count() > 0 {
            graphs.push(g);
        }
    }
    let mut ok = 0;
    let mut classes = 0;
    for g in &graphs {
        let vg = VoltageGraph::trivial(g);
        let det = lfunction_edge(&edge_matrices(&vg, &trivial_matrices::<Rational>(&vg.group))).unwrap();
        let Ok(e) = enumerate_prime_cycles(&vg.digraph, 8, 2_000_000) else { continue };
        classes += e.classes.len();
        let euler = euler_product_series::<Rational>(&e, 8).unwrap();
        ok += usize::from(euler == series_inverse(&det, 8).unwrap());
    }
    (ok == graphs.len(), format!("{ok}/{} graphs through s^8, {classes} prime cycle classes", graphs.len()))
}

fn criterion_5() -> (bool, String) {
    let mut passed = 0;
    for i in 0..100u64 {
        let mut r = rng(0x1e_aa00 + i);
        let g = random_graph(&mut r, 5, 0.6);
        let (k, pool): (usize, Vec<Permutation>) = match i % 3 {
            0 => (2, s2_pool()),
            1 => (4, c4_pool()),
            _ => (3, s3_pool()),
        };
        let phi = random_voltages(&mut r, &g, k, &pool);
        let vg = VoltageGraph::new(&g, phi, DEFAULT_GROUP_CAP).unwrap();
        let reps = exact_unitary_representations(&vg.group);
        let rep = &reps[r.gen_range(0..reps.len())];
        let checks = match rep.exact_matrices::<Rational>() {
            Some(rho) => matrix_identity_suite(&vg, &rho).unwrap(),
            None => matrix_identity_suite(&vg, &rep.exact_matrices::<Gaussian>().unwrap()).unwrap(),
        };
        passed += usize::from(checks.len() == 7 && checks.iter().all(|c| c.passed));
    }
    (passed == 100, format!("{passed}/100 instances, 7 identities each"))
}

fn criterion_6() -> (bool, String) {
    let mut amitsur = 0;
    for i in 0..50u64 {
        let mut r = rng(0xa417_0000 + i);
        let count = r.gen_range(1..=3);
        let n = r.gen_range(1..=3);
        let mats: Vec<Matrix<UPoly<Rational>>> = (0..count)
            .map(|_| {
                Matrix::from_fn(n, n, |_, _| {
                    UPoly::new(vec![rat(r.gen_range(-2..=2), 1), rat(r.gen_range(-1..=1), 1)])
                })
            })
            .collect();
        amitsur += usize::from(amitsur_check(&mats, 6));
    }

    let mut lyndon = true;
    for a in 2..=4 {
        let words = lyndon_words(a, 10);
        for n in 1..=10 {
            lyndon &= words.iter().filter(|w| w.len() == n).count() as u64 == necklace_count(a, n);
        }
    }

    let (mut rows, mut cycles, mut others) = (0, 0, 0);
    for i in 0..100u64 {
        let mut r = rng(0x4e5_0000 + i);
        let g = random_graph(&mut r, 5, 0.6);
        if g.edge_count() == 0 {
            rows += 1;
            continue;
        }
        let phi = random_voltages(&mut r, &g, 4, &c4_pool());
        let vg = VoltageGraph::new(&g, phi, DEFAULT_GROUP_CAP).unwrap();
        let reps = exact_unitary_representations(&vg.group);
        let rho = reps[r.gen_range(0..reps.len())].exact_matrices::<Gaussian>().unwrap();
        let em = edge_matrices(&vg, &rho);
        let values = vg.arc_values(&rho);
        let d = &vg.digraph;
        let out = d.out_arcs();
        let seq: Vec<usize> = if i % 2 == 0 {
            // a walk there and back is closed
            let mut w = vec![r.gen_range(0..d.arc_count())];
            for _ in 0..r.gen_range(0..3) {
                let here = d.terminus(*w.last().unwrap());
                w.push(out[here][r.gen_range(0..out[here].len())]);
            }
            let back: Vec<usize> = w.iter().rev().map(|&a| d.inverse(a)).collect();
            w.extend(back);
            w
        } else {
            (0..r.gen_range(1..=5)).map(|_| r.gen_range(0..d.arc_count())).collect()
        };
        if is_closed_walk(d, &seq) {
            cycles += 1;
        } else {
            others += 1;
        }
        rows += usize::from(row_selected_check(d, &em, &values, &seq));
    }
    (
        amitsur == 50 && lyndon && rows == 100 && cycles > 0 && others > 0,
        format!(
            "Amitsur {amitsur}/50, necklace counts {}, row-selected {rows}/100 ({cycles} closed, {others} not)",
            if lyndon { "match" } else { "differ" }
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let hp = data("worked.json");
    let vp = data("worked_s2.json");
    let (code, j) =
        run_cli(&["--json", "--no-timing", "--ihara", "verify", hp.to_str().unwrap(), vp.to_str().unwrap()]);
    let zero = rat(0, 1);
    let want = |p: BiPoly<Rational>| t_text(&p.subst_u(&zero));
    let displays = code == 0
        && j["cover_reciprocal"]["text"] == want(fixtures::expected_cover()).as_str()
        && j["factors"][0]["reciprocal"]["text"] == want(fixtures::expected_base()).as_str()
        && j["factors"][1]["reciprocal"]["text"] == want(fixtures::expected_sign()).as_str();

    let (h, phi) = fixtures::worked_cover();
    let vg = VoltageGraph::new(&bipartite_graph(&h), phi, DEFAULT_GROUP_CAP).unwrap();
    let cat = builtin_irreps("S2", &vg.group).unwrap();
    let mut factors = 0;
    for irrep in &cat.irreps {
        let rho = irrep.exact_matrices::<Rational>().unwrap();
        let m = vertex_determinant(&vg, &rho).unwrap().subst_u(&zero);
        factors += usize::from(ihara_factor(&vg, &rho).unwrap() == m);
    }
    (displays && factors == 2, format!("u=0 displays {displays}, M_i at u=0 {factors}/2"))
}

fn criterion_8(c: &[Instance]) -> (bool, String) {
    let mut ok = 0;
    for x in c {
        ok += usize::from(check_kronecker_identity(&bipartite_graph(&x.h), &x.vg.digraph, &x.phi, &x.vg.group));
    }
    let (h, phi) = fixtures::worked_cover();
    let vg = VoltageGraph::new(&bipartite_graph(&h), phi.clone(), DEFAULT_GROUP_CAP).unwrap();
    let identity = check_kronecker_identity(&bipartite_graph(&h), &vg.digraph, &phi, &vg.group);
    let (cover, _) = build_cover(&h, &phi).unwrap();
    let display = adjacency_matrix(bipartite_graph(&cover).graph()) == fixtures::worked_cover_adjacency();
    (
        ok == c.len() && identity && display,
        format!("{ok}/{} corpus instances, worked example {identity}, 12x12 display {display}", c.len()),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, limit: Option<Duration>, f: &dyn Fn() -> (bool, String)| {
        let started = Instant::now();
        let (ok, detail) = f();
        let took = started.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = ok && in_time;
        failed += usize::from(!pass);
        let budget = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
        println!(
            "criterion {n}: {} {detail}; {:.2}s{budget}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, secs(5), &criterion_1);
    let c = corpus();
    report(2, secs(60), &|| criterion_2(&c));
    report(3, None, &|| criterion_3(&c));
    report(4, secs(30), &criterion_4);
    report(5, None, &criterion_5);
    report(6, None, &criterion_6);
    report(7, None, &criterion_7);
    report(8, None, &|| criterion_8(&c));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
