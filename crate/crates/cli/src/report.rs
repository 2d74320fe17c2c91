//! Report envelope and polynomial rendering.

use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use hyperzeta::algebra::{collapse_to_t, BiPoly, Coeff, UPoly};
use hyperzeta::covering::VoltageAssignment;
use hyperzeta::hypergraph::{bipartite_graph, symmetric_digraph, Diagnostics, Hypergraph};

use crate::input::Source;
use crate::{CliError, Outcome, RunConfig};

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Collects the fields shared by every report.
pub struct Envelope {
    command: &'static str,
    inputs: Vec<Value>,
    started: Instant,
}

impl Envelope {
    pub fn new(command: &'static str, sources: &[&Source]) -> Self {
        let inputs = sources.iter().map(|s| json!({"path": s.path, "sha256": sha256_hex(&s.bytes)})).collect();
        Envelope { command, inputs, started: Instant::now() }
    }

    fn head(&self, cfg: &RunConfig, mode: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!({"name": "hyperzeta", "version": env!("CARGO_PKG_VERSION")}));
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), Value::Array(self.inputs.clone()));
        m.insert("seed".into(), json!(cfg.seed));
        m.insert("mode".into(), json!(mode));
        m.insert("ihara".into(), json!(cfg.ihara));
        m
    }

    fn tail(&self, cfg: &RunConfig, m: &mut Map<String, Value>, exit: i32) {
        m.insert("verdict".into(), json!(if exit == 0 { "pass" } else { "fail" }));
        m.insert("exit_code".into(), json!(exit));
        let timing = if cfg.timing { json!(self.started.elapsed().as_secs_f64() * 1000.0) } else { Value::Null };
        m.insert("timing_ms".into(), timing);
    }

    pub fn finish(&self, cfg: &RunConfig, mode: &str, body: Map<String, Value>, exit: i32, text: String) -> Outcome {
        let mut m = self.head(cfg, mode);
        m.extend(body);
        self.tail(cfg, &mut m, exit);
        Outcome { exit, report: Value::Object(m), text }
    }

    pub fn failure(&self, cfg: &RunConfig, err: &CliError, extra: Map<String, Value>) -> Outcome {
        let mut m = self.head(cfg, "exact");
        m.extend(extra);
        let mut e = Map::new();
        e.insert("kind".into(), json!(err.kind()));
        e.insert("message".into(), json!(err.to_string()));
        if let CliError::Precondition { failures, .. } = err {
            e.insert("hypotheses".into(), json!(failures));
        }
        m.insert("error".into(), Value::Object(e));
        self.tail(cfg, &mut m, err.exit_code());
        Outcome { exit: err.exit_code(), report: Value::Object(m), text: format!("error: {err}") }
    }
}

/// `{"text", "coefficients"}` in `u, t`, after `u = 0` when requested.
pub fn poly_value<C: Coeff>(p: &BiPoly<C>, ihara: bool) -> Result<(Value, String), CliError> {
    let p = if ihara { p.subst_u(&C::zero()) } else { p.clone() };
    let t = collapse_to_t(&p).map_err(|e| CliError::Disagreement(format!("reciprocal is not a polynomial in t: {e}")))?;
    let text = t.to_text();
    Ok((json!({"text": text, "coefficients": t.to_json_map()}), text))
}

/// A `u`-polynomial coefficient as `{"text", "coefficients"}`, keyed by
/// the `u` exponent.
pub fn upoly_value<C: Coeff>(p: &UPoly<C>) -> Value {
    let b = BiPoly::from_upoly(p);
    let mut coeffs = Map::new();
    for (a, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            coeffs.insert(a.to_string(), hyperzeta::algebra::coeff::coeff_json(c));
        }
    }
    json!({"text": b.to_text('s'), "coefficients": coeffs})
}

pub fn diagnostics_value(d: &Diagnostics) -> Value {
    json!({
        "connected": d.connected,
        "components": d.components,
        "loops": d.loops,
        "low_incidence": d.low_incidence.iter().map(|(v, c)| json!({"vertex": v, "hyperedges": c})).collect::<Vec<_>>(),
        "duplicate_vertex_sets": d.duplicate_vertex_sets.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "passes": d.passes(),
    })
}

/// The hypergraph JSON input format.
pub fn hypergraph_value(h: &Hypergraph) -> Value {
    let mut edges = Map::new();
    for (name, members) in h.edges() {
        edges.insert(name.clone(), json!(members.iter().map(|&v| h.vertices()[v].clone()).collect::<Vec<_>>()));
    }
    json!({"vertices": h.vertices(), "edges": edges})
}

/// The voltage JSON input format, listing the non-identity canonical arcs.
pub fn voltage_value(h: &Hypergraph, phi: &VoltageAssignment) -> Value {
    let b = bipartite_graph(h);
    let r = symmetric_digraph(&b);
    let mut a = Map::new();
    for arc in 0..r.edge_count() {
        let p = phi.get(arc);
        if !p.is_identity() {
            let key = format!("{}|{}", b.names()[r.origin(arc)], b.names()[r.terminus(arc)]);
            a.insert(key, json!(p.one_line()));
        }
    }
    json!({"k": phi.k(), "assignments": a})
}
