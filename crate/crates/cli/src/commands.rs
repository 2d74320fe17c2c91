//! The five commands. Each returns an [`Outcome`]; failures become reports
//! with an `error` field and the matching exit code.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use hyperzeta::algebra::{series_inverse, Rational};
use hyperzeta::covering::{GroupTable, VoltageAssignment};
use hyperzeta::cycles::{enumerate_prime_cycles, euler_product_series, CycleError};
use hyperzeta::hypergraph::{bipartite_graph, validate_hypergraph, Hypergraph};
use hyperzeta::random::{random_c3_voltages, random_hypergraph, random_s2_voltages};
use hyperzeta::reptheory::{builtin_irreps, check_catalog, detect_builtin, IrrepCatalog, RepError};
use hyperzeta::zeta::{
    bartholdi_zeta, build_cover, edge_matrices, lfunction, lfunction_edge, trivial_matrices, verify_decomposition,
    Comparison, DecompositionReport, ExactPoly, Mode, VoltageGraph, ZetaError,
};

use crate::input::{load_catalog, load_hypergraph, load_voltages, Source};
use crate::report::{diagnostics_value, hypergraph_value, poly_value, upoly_value, voltage_value, Envelope};
use crate::{CliError, Outcome, RunConfig};

fn zeta_error(e: ZetaError) -> CliError {
    match e {
        ZetaError::PreconditionFailed(f) => CliError::Precondition {
            failures: f.iter().map(|s| s.to_string()).collect(),
            detail: "the hypergraph does not satisfy the hypotheses".into(),
        },
        ZetaError::CoverInvalid(f) => CliError::Precondition {
            failures: f.iter().map(|s| s.to_string()).collect(),
            detail: "the covering hypergraph does not satisfy the hypotheses".into(),
        },
        ZetaError::NotUnitary(_) | ZetaError::NotHomomorphism(_) | ZetaError::NotExact(_) | ZetaError::Rep(_) => {
            CliError::Representation(e.to_string())
        }
        ZetaError::Cover(c) => CliError::Voltage(c.to_string()),
        ZetaError::Algebra(a) => CliError::Disagreement(a.to_string()),
    }
}

fn rep_error(e: RepError) -> CliError {
    CliError::Representation(e.to_string())
}

fn require_valid(h: &Hypergraph) -> Result<(), CliError> {
    let d = validate_hypergraph(h);
    if d.passes() {
        Ok(())
    } else {
        Err(CliError::Precondition {
            failures: d.failures().iter().map(|s| s.to_string()).collect(),
            detail: "the hypergraph does not satisfy the hypotheses".into(),
        })
    }
}

fn comparison_value(c: &Comparison) -> Value {
    json!({"name": c.name, "mode": c.mode.name(), "equal": c.equal, "max_residual": c.max_residual})
}

fn exact_value(p: &ExactPoly, ihara: bool) -> Result<(Value, String), CliError> {
    match p {
        ExactPoly::Rational(q) => poly_value(q, ihara),
        ExactPoly::Gaussian(q) => poly_value(q, ihara),
    }
}

fn group_value(g: &GroupTable) -> Value {
    json!({"k": g.k(), "order": g.order(), "elements": g.elements().iter().map(|p| p.one_line()).collect::<Vec<_>>()})
}

/// Runs `body`; errors become failure reports carrying `partial`.
fn guarded(
    env: &Envelope,
    cfg: &RunConfig,
    body: impl FnOnce(&mut Map<String, Value>) -> Result<Outcome, CliError>,
) -> Outcome {
    let mut partial = Map::new();
    match body(&mut partial) {
        Ok(o) => o,
        Err(e) => env.failure(cfg, &e, partial),
    }
}

fn read(path: &std::path::Path) -> Result<Source, CliError> {
    Source::read(path)
}

pub fn zeta(cfg: &RunConfig, hypergraph: &Source) -> Outcome {
    let env = Envelope::new("zeta", &[hypergraph]);
    guarded(&env, cfg, |partial| {
        let h = load_hypergraph(hypergraph)?;
        let d = validate_hypergraph(&h);
        partial.insert("diagnostics".into(), diagnostics_value(&d));
        require_valid(&h)?;
        let report = bartholdi_zeta(&h).map_err(zeta_error)?;
        let (poly, text) = poly_value(&report.reciprocal, cfg.ihara)?;
        let b = bipartite_graph(&h);
        let agree = report.all_equal();
        let mut body = std::mem::take(partial);
        body.insert("incidence_graph".into(), json!({"vertices": b.vertex_count(), "edges": b.edge_count()}));
        body.insert("reciprocal".into(), poly);
        body.insert("route".into(), json!(report.route));
        body.insert("checks".into(), json!(report.comparisons.iter().map(comparison_value).collect::<Vec<_>>()));
        let name = if cfg.ihara { "zeta(H,t)^-1" } else { "zeta(H,u,t)^-1" };
        let mut out = format!("{name} = {text}\n");
        let _ = writeln!(out, "vertex and edge routes agree: {agree}");
        let exit = if agree { 0 } else { 5 };
        Ok(env.finish(cfg, "exact", body, exit, out))
    })
}

fn load_base(h_src: &Source, v_src: &Source) -> Result<(Hypergraph, VoltageAssignment), CliError> {
    let h = load_hypergraph(h_src)?;
    let phi = load_voltages(&h, v_src)?;
    Ok((h, phi))
}

fn voltage_graph(cfg: &RunConfig, h: &Hypergraph, phi: &VoltageAssignment) -> Result<VoltageGraph, CliError> {
    VoltageGraph::new(&bipartite_graph(h), phi.clone(), cfg.group_cap).map_err(|e| CliError::Voltage(e.to_string()))
}

pub fn cover(cfg: &RunConfig, hypergraph: &Source, voltages: &Source) -> Outcome {
    let env = Envelope::new("cover", &[hypergraph, voltages]);
    guarded(&env, cfg, |_| {
        let (h, phi) = load_base(hypergraph, voltages)?;
        let vg = voltage_graph(cfg, &h, &phi)?;
        let (cover, diag) = build_cover(&h, &phi).map_err(zeta_error)?;
        let kron = hyperzeta::covering::check_kronecker_identity(&bipartite_graph(&h), &vg.digraph, &phi, &vg.group);
        let bc = bipartite_graph(&cover);
        let mut body = Map::new();
        body.insert("k".into(), json!(phi.k()));
        body.insert("group".into(), group_value(&vg.group));
        body.insert("kronecker_identity".into(), json!(kron));
        body.insert("components".into(), json!(diag.components));
        body.insert("incidence_graph".into(), json!({"vertices": bc.vertex_count(), "edges": bc.edge_count()}));
        body.insert("diagnostics".into(), diagnostics_value(&diag));
        body.insert("cover".into(), hypergraph_value(&cover));
        let mut out = String::new();
        let _ = writeln!(out, "{}-fold cover: {} hypervertices, {} hyperedges", phi.k(), cover.vertex_count(), cover.edge_count());
        let _ = writeln!(out, "voltage group order: {}", vg.group.order());
        let _ = writeln!(out, "components: {}", diag.components);
        let _ = writeln!(out, "Kronecker identity: {}", if kron { "pass" } else { "fail" });
        let _ = writeln!(out, "{}", serde_json::to_string(&hypergraph_value(&cover)).unwrap());
        Ok(env.finish(cfg, "exact", body, if kron { 0 } else { 5 }, out))
    })
}

/// `builtin:NAME`, a catalog file, or the builtin detected from the group.
fn resolve_catalog(spec: Option<&str>, group: &GroupTable) -> Result<(IrrepCatalog, Option<Source>), CliError> {
    match spec {
        Some(s) if s.starts_with("builtin:") => {
            Ok((builtin_irreps(&s["builtin:".len()..], group).map_err(rep_error)?, None))
        }
        Some(path) => {
            let src = read(std::path::Path::new(path))?;
            let cat = load_catalog(&src, group)?;
            Ok((cat, Some(src)))
        }
        None => {
            let kind = detect_builtin(group).ok_or_else(|| {
                CliError::Representation(format!("no builtin catalog for this group of order {}; pass --rep", group.order()))
            })?;
            Ok((builtin_irreps(kind, group).map_err(rep_error)?, None))
        }
    }
}

pub fn lfun(cfg: &RunConfig, hypergraph: &Source, voltages: &Source, rep: Option<&str>, irrep: usize) -> Outcome {
    let rep_src = rep.filter(|s| !s.starts_with("builtin:")).map(|p| read(std::path::Path::new(p)));
    let rep_src = match rep_src {
        Some(Ok(s)) => Some(s),
        Some(Err(e)) => return Envelope::new("lfun", &[hypergraph, voltages]).failure(cfg, &e, Map::new()),
        None => None,
    };
    let mut sources = vec![hypergraph, voltages];
    if let Some(s) = &rep_src {
        sources.push(s);
    }
    let env = Envelope::new("lfun", &sources);
    guarded(&env, cfg, |_| {
        let (h, phi) = load_base(hypergraph, voltages)?;
        require_valid(&h)?;
        let vg = voltage_graph(cfg, &h, &phi)?;
        let cat = match &rep_src {
            Some(src) => crate::input::load_catalog(src, &vg.group)?,
            None => resolve_catalog(rep, &vg.group)?.0,
        };
        if irrep == 0 || irrep > cat.irreps.len() {
            return Err(CliError::Representation(format!(
                "irrep index {irrep} out of range 1..={}",
                cat.irreps.len()
            )));
        }
        let r = &cat.irreps[irrep - 1];
        let report = lfunction(&vg, r, &cfg.sample_options()).map_err(zeta_error)?;
        let mut body = Map::new();
        body.insert("group".into(), group_value(&vg.group));
        body.insert(
            "representation".into(),
            json!({"index": irrep, "name": r.name, "degree": r.degree(), "field": r.field().name()}),
        );
        let mut out = String::new();
        let name = if cfg.ihara { format!("zeta(H,rho_{irrep},phi,t)^-1") } else { format!("zeta(H,rho_{irrep},phi,u,t)^-1") };
        match &report.reciprocal {
            Some(p) => {
                let (v, text) = exact_value(p, cfg.ihara)?;
                body.insert("reciprocal".into(), v);
                let _ = writeln!(out, "{name} = {text}");
            }
            None => {
                body.insert("reciprocal".into(), Value::Null);
                let _ = writeln!(out, "{name}: sampled-complex representation, no exact polynomial");
            }
        }
        body.insert("routes".into(), json!(["edge", "vertex"]));
        body.insert("agreement".into(), comparison_value(&report.comparison));
        let _ = writeln!(
            out,
            "edge and vertex routes agree: {} ({}, max residual {:e})",
            report.comparison.equal,
            report.mode.name(),
            report.comparison.max_residual
        );
        let exit = if report.comparison.equal { 0 } else { 5 };
        Ok(env.finish(cfg, report.mode.name(), body, exit, out))
    })
}

fn decomposition_body(
    cfg: &RunConfig,
    rep: &DecompositionReport,
    cat: &IrrepCatalog,
) -> Result<(Map<String, Value>, String), CliError> {
    let mut body = Map::new();
    let mut out = String::new();
    let (cover_poly, cover_text) = poly_value(&rep.cover_reciprocal, cfg.ihara)?;
    let (base_poly, _) = poly_value(&rep.base_reciprocal, cfg.ihara)?;
    body.insert("group".into(), json!({"k": rep.k, "order": rep.group_order}));
    body.insert("catalog".into(), json!({
        "degrees": cat.degrees(),
        "fields": cat.irreps.iter().map(|r| r.field().name()).collect::<Vec<_>>(),
    }));
    body.insert("multiplicities".into(), json!(rep.multiplicities));
    body.insert("cover".into(), json!({
        "hypervertices": rep.cover.vertex_count(),
        "hyperedges": rep.cover.edge_count(),
        "incidence_graph": {"vertices": rep.cover_size.0, "edges": rep.cover_size.1},
        "components": rep.cover_diagnostics.components,
    }));
    body.insert("kronecker_identity".into(), json!(rep.kronecker_identity));
    body.insert("cover_reciprocal".into(), cover_poly);
    body.insert("base_reciprocal".into(), base_poly);
    let v = if cfg.ihara { "" } else { "u," };
    let _ = writeln!(out, "group order {}, k = {}, multiplicities {:?}", rep.group_order, rep.k, rep.multiplicities);
    let _ = writeln!(out, "cover incidence graph: {} vertices, {} edges", rep.cover_size.0, rep.cover_size.1);
    let _ = writeln!(out, "zeta(cover,{v}t)^-1 = {cover_text}");
    let mut factors = Vec::new();
    for f in &rep.factors {
        let mut row = Map::new();
        row.insert("i".into(), json!(f.index));
        row.insert("name".into(), json!(f.name));
        row.insert("f".into(), json!(f.degree));
        row.insert("m".into(), json!(f.multiplicity));
        match &f.lfunction {
            Some(l) => {
                row.insert("route".into(), json!("edge+vertex"));
                row.insert("mode".into(), json!(l.mode.name()));
                row.insert("verdict".into(), json!(if l.comparison.equal { "pass" } else { "fail" }));
                row.insert("max_residual".into(), json!(l.comparison.max_residual));
                match &l.reciprocal {
                    Some(p) => {
                        let (pv, text) = exact_value(p, cfg.ihara)?;
                        row.insert("reciprocal".into(), pv);
                        let _ = writeln!(out, "zeta(H,rho_{},phi,{v}t)^-1 = {text}", f.index);
                    }
                    None => {
                        row.insert("reciprocal".into(), Value::Null);
                    }
                }
            }
            None => {
                row.insert("route".into(), json!("skipped (m = 0)"));
                row.insert("verdict".into(), json!("n/a"));
            }
        }
        factors.push(Value::Object(row));
    }
    body.insert("factors".into(), Value::Array(factors));
    let _ = writeln!(out, "{:>3} {:>3} {:>3}  {:<12} {:<8} verdict", "i", "f_i", "m_i", "route", "mode");
    for f in &rep.factors {
        let (route, mode, verdict) = match &f.lfunction {
            Some(l) => ("edge+vertex", l.mode.name(), if l.comparison.equal { "pass" } else { "FAIL" }),
            None => ("skipped", "-", "n/a"),
        };
        let _ = writeln!(out, "{:>3} {:>3} {:>3}  {:<12} {:<8} {}", f.index, f.degree, f.multiplicity, route, mode, verdict);
    }
    body.insert("identities".into(), json!(rep.comparisons.iter().map(comparison_value).collect::<Vec<_>>()));
    for c in &rep.comparisons {
        let _ = writeln!(out, "{}: {} ({}, max residual {:e})", c.name, if c.equal { "pass" } else { "FAIL" }, c.mode.name(), c.max_residual);
    }
    let _ = writeln!(out, "overall: {}", if rep.passed() { "PASS" } else { "FAIL" });
    Ok((body, out))
}

fn catalog_checked(cat: IrrepCatalog, group: &GroupTable) -> Result<IrrepCatalog, CliError> {
    let d = check_catalog(&cat, group);
    if !d.passes() {
        return Err(CliError::Representation(format!(
            "catalog fails: trivial first {}, degree squares {} vs order {}, orthonormality residual {:e}",
            d.first_is_trivial, d.degree_square_sum, d.group_order, d.orthonormality_residual
        )));
    }
    Ok(cat)
}

pub fn verify(cfg: &RunConfig, hypergraph: &Source, voltages: &Source, rep: Option<&str>) -> Outcome {
    let rep_src = rep.filter(|s| !s.starts_with("builtin:")).map(|p| read(std::path::Path::new(p)));
    let rep_src = match rep_src {
        Some(Ok(s)) => Some(s),
        Some(Err(e)) => return Envelope::new("verify", &[hypergraph, voltages]).failure(cfg, &e, Map::new()),
        None => None,
    };
    let mut sources = vec![hypergraph, voltages];
    if let Some(s) = &rep_src {
        sources.push(s);
    }
    let env = Envelope::new("verify", &sources);
    guarded(&env, cfg, |_| {
        let (h, phi) = load_base(hypergraph, voltages)?;
        require_valid(&h)?;
        let vg = voltage_graph(cfg, &h, &phi)?;
        let cat = match &rep_src {
            Some(src) => crate::input::load_catalog(src, &vg.group)?,
            None => resolve_catalog(rep, &vg.group)?.0,
        };
        let cat = catalog_checked(cat, &vg.group)?;
        let report = verify_decomposition(&h, &phi, &cat, &cfg.sample_options()).map_err(zeta_error)?;
        let (body, out) = decomposition_body(cfg, &report, &cat)?;
        let exit = if report.passed() { 0 } else { 5 };
        Ok(env.finish(cfg, report.mode.name(), body, exit, out))
    })
}

/// `count` seeded instances alternating between `S₂` and cyclic-3 voltages.
pub fn verify_random(cfg: &RunConfig, count: usize) -> Outcome {
    let env = Envelope::new("verify", &[]);
    guarded(&env, cfg, |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut instances = Vec::new();
        let mut out = String::new();
        let mut all = true;
        let mut sampled = false;
        for i in 0..count {
            let h = random_hypergraph(&mut rng, 5, 5);
            let phi = if i % 2 == 0 { random_s2_voltages(&mut rng, &h) } else { random_c3_voltages(&mut rng, &h) };
            let vg = voltage_graph(cfg, &h, &phi)?;
            let kind = detect_builtin(&vg.group).ok_or_else(|| CliError::Representation("no builtin catalog".into()))?;
            let cat = builtin_irreps(kind, &vg.group).map_err(rep_error)?;
            let opts = hyperzeta::zeta::SampleOptions { seed: cfg.seed.wrapping_add(i as u64), ..cfg.sample_options() };
            let rep = verify_decomposition(&h, &phi, &cat, &opts).map_err(zeta_error)?;
            let worst = rep.comparisons.iter().map(|c| c.max_residual).fold(0.0, f64::max);
            all &= rep.passed();
            sampled |= rep.mode == Mode::Sampled;
            let _ = writeln!(
                out,
                "instance {i}: group {kind}, {} hypervertices, {} hyperedges, m = {:?}, {}: {}",
                h.vertex_count(),
                h.edge_count(),
                rep.multiplicities,
                rep.mode.name(),
                if rep.passed() { "pass" } else { "FAIL" }
            );
            instances.push(json!({
                "index": i,
                "hypergraph": hypergraph_value(&h),
                "voltages": voltage_value(&h, &phi),
                "group": kind,
                "multiplicities": rep.multiplicities,
                "mode": rep.mode.name(),
                "max_residual": worst,
                "identities": rep.comparisons.iter().map(comparison_value).collect::<Vec<_>>(),
                "verdict": if rep.passed() { "pass" } else { "fail" },
            }));
        }
        let _ = writeln!(out, "overall: {}", if all { "PASS" } else { "FAIL" });
        let mut body = Map::new();
        body.insert("random".into(), json!(count));
        body.insert("instances".into(), Value::Array(instances));
        let mode = if sampled { "mixed" } else { "exact" };
        Ok(env.finish(cfg, mode, body, if all { 0 } else { 5 }, out))
    })
}

pub fn series(cfg: &RunConfig, hypergraph: &Source) -> Outcome {
    let env = Envelope::new("series", &[hypergraph]);
    guarded(&env, cfg, |partial| {
        let h = load_hypergraph(hypergraph)?;
        require_valid(&h)?;
        let b = bipartite_graph(&h);
        let vg = VoltageGraph::trivial(&b);
        let det = lfunction_edge(&edge_matrices(&vg, &trivial_matrices::<Rational>(&vg.group))).map_err(zeta_error)?;
        let (enumeration, guard) = match enumerate_prime_cycles(&vg.digraph, cfg.order, cfg.class_cap) {
            Ok(e) => (e, None),
            Err(CycleError::ExplosionGuard { cap, completed }) => {
                let e = enumerate_prime_cycles(&vg.digraph, completed, cfg.class_cap).expect("completed orders fit");
                (e, Some(CliError::Explosion(format!("more than {cap} prime cycle classes; orders 0..={completed} completed"))))
            }
            Err(other) => return Err(CliError::Disagreement(other.to_string())),
        };
        let order = enumeration.complete_through;
        let det_series = series_inverse(&det, order).map_err(|e| CliError::Disagreement(e.to_string()))?;
        let euler = euler_product_series::<Rational>(&enumeration, order).expect("complete through order");
        let sub = |p: &hyperzeta::algebra::UPoly<Rational>| {
            if cfg.ihara {
                hyperzeta::algebra::UPoly::constant(p.coeff(0))
            } else {
                p.clone()
            }
        };
        let mut rows = Vec::new();
        let mut all = true;
        let mut out = String::new();
        let _ = writeln!(out, "{:>5}  {:<6} coefficient of s^j", "j", "match");
        for j in 0..=order {
            let a = sub(det_series.coeff(j));
            let e = sub(euler.coeff(j));
            let ok = a == e;
            all &= ok;
            let text = upoly_value(&a)["text"].as_str().unwrap_or("").to_string();
            let _ = writeln!(out, "{j:>5}  {:<6} {text}", ok);
            rows.push(json!({"order": j, "determinant": upoly_value(&a), "euler_product": upoly_value(&e), "match": ok}));
        }
        partial.insert("classes".into(), json!(enumeration.classes.len()));
        partial.insert("completed_order".into(), json!(order));
        partial.insert("requested_order".into(), json!(cfg.order));
        partial.insert("orders".into(), Value::Array(rows));
        partial.insert("match".into(), json!(all));
        if let Some(g) = guard {
            let _ = write!(out, "{g}");
            return Err(g);
        }
        let _ = writeln!(out, "prime cycle classes: {}; match: {all}", enumeration.classes.len());
        let body = std::mem::take(partial);
        Ok(env.finish(cfg, "exact", body, if all { 0 } else { 5 }, out))
    })
}
