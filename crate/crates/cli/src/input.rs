//! The three JSON input formats: hypergraphs, voltages and representation
//! catalogs.

use std::collections::HashSet;
use std::fmt;
use std::marker::PhantomData;
use std::path::Path;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;

use hyperzeta::algebra::coeff::parse_rational;
use hyperzeta::algebra::{Gaussian, Matrix, Rational};
use hyperzeta::covering::{complete_voltage, resolve_arc, GroupTable, Permutation, VoltageAssignment};
use hyperzeta::hypergraph::{bipartite_graph, symmetric_digraph, Hypergraph, HypergraphError};
use hyperzeta::reptheory::{CatalogSource, IrrepCatalog, RepData, Representation};
use num_complex::Complex64;

use crate::CliError;

/// A JSON object read in declaration order, rejecting repeated keys.
#[derive(Debug, Clone, PartialEq)]
pub struct UniqueMap<V>(pub Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visit<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for Visit<V> {
            type Value = UniqueMap<V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                let mut seen = HashSet::new();
                while let Some(key) = map.next_key::<String>()? {
                    if !seen.insert(key.clone()) {
                        return Err(de::Error::custom(format!("duplicate key {key:?}")));
                    }
                    out.push((key, map.next_value()?));
                }
                Ok(UniqueMap(out))
            }
        }

        d.deserialize_map(Visit(PhantomData))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphFile {
    pub vertices: Vec<String>,
    pub edges: UniqueMap<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoltageFile {
    pub k: usize,
    pub assignments: UniqueMap<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub k: usize,
    pub elements: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepSpec {
    pub name: String,
    pub degree: usize,
    pub matrices: Vec<Vec<Vec<[Value; 2]>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub group: GroupSpec,
    pub irreps: Vec<IrrepSpec>,
}

/// File contents with their path, for digests and error messages.
#[derive(Debug, Clone)]
pub struct Source {
    pub path: String,
    pub bytes: Vec<u8>,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Ok(Source { path: path.display().to_string(), bytes })
    }

    pub fn from_text(path: &str, text: &str) -> Self {
        Source { path: path.to_string(), bytes: text.as_bytes().to_vec() }
    }

    pub fn parse<'a, T: Deserialize<'a>>(&'a self) -> Result<T, CliError> {
        serde_json::from_slice(&self.bytes).map_err(|e| {
            CliError::Parse(format!("{}:{}:{}: {}", self.path, e.line(), e.column(), strip_position(&e)))
        })
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    }
}

pub fn hypergraph_from(file: HypergraphFile) -> Result<Hypergraph, CliError> {
    Hypergraph::new(file.vertices, file.edges.0).map_err(|e| match e {
        HypergraphError::UncoveredVertex(v) => CliError::Precondition {
            failures: vec!["every hypervertex in at least two hyperedges".into()],
            detail: format!("hypervertex {v:?} lies in no hyperedge"),
        },
        other => CliError::Parse(other.to_string()),
    })
}

pub fn load_hypergraph(src: &Source) -> Result<Hypergraph, CliError> {
    hypergraph_from(src.parse()?)
}

/// Voltages keyed `"origin|terminus"` by incidence-graph vertex names.
pub fn voltages_from(h: &Hypergraph, file: &VoltageFile) -> Result<VoltageAssignment, CliError> {
    let b = bipartite_graph(h);
    let r = symmetric_digraph(&b);
    let mut partial = Vec::new();
    for (key, img) in &file.assignments.0 {
        let (o, t) = key
            .split_once('|')
            .ok_or_else(|| CliError::Voltage(format!("key {key:?} is not of the form \"origin|terminus\"")))?;
        let arc = resolve_arc(&b, &r, o, t).map_err(|e| CliError::Voltage(format!("key {key:?}: {e}")))?;
        let p = Permutation::from_one_line(img).map_err(|e| CliError::Voltage(format!("key {key:?}: {e}")))?;
        if p.degree() != file.k {
            return Err(CliError::Voltage(format!(
                "key {key:?}: permutation of degree {} but k = {}",
                p.degree(),
                file.k
            )));
        }
        partial.push((arc, p));
    }
    if file.k == 0 {
        return Err(CliError::Voltage("k must be at least 1".into()));
    }
    complete_voltage(&partial, file.k, &r).map_err(|e| CliError::Voltage(e.to_string()))
}

pub fn load_voltages(h: &Hypergraph, src: &Source) -> Result<VoltageAssignment, CliError> {
    voltages_from(h, &src.parse()?)
}

enum Number {
    Exact(Rational),
    Float(f64),
}

fn number(v: &Value, at: &str) -> Result<Number, CliError> {
    let bad = || CliError::Representation(format!("{at}: expected an integer, \"num/den\" or a float"));
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Number::Exact(Rational::from_integer(i.into())))
            } else {
                n.as_f64().map(Number::Float).ok_or_else(bad)
            }
        }
        Value::String(s) => parse_rational(s).map(Number::Exact).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn to_f64(n: &Number) -> f64 {
    match n {
        Number::Exact(r) => hyperzeta::algebra::coeff::rational_to_f64(r),
        Number::Float(x) => *x,
    }
}

/// Matrices reordered to `group`'s element order.
fn irrep_from(spec: &IrrepSpec, index: usize, order: &[usize]) -> Result<Representation, CliError> {
    let at = format!("irreps[{index}]");
    if spec.matrices.len() != order.len() {
        return Err(CliError::Representation(format!(
            "{at}: {} matrices for a group of order {}",
            spec.matrices.len(),
            order.len()
        )));
    }
    let mut entries: Vec<Vec<(Number, Number)>> = Vec::new();
    for (g, m) in spec.matrices.iter().enumerate() {
        if m.len() != spec.degree || m.iter().any(|row| row.len() != spec.degree) {
            return Err(CliError::Representation(format!("{at}: matrix {g} is not {0}x{0}", spec.degree)));
        }
        let mut flat = Vec::new();
        for (i, row) in m.iter().enumerate() {
            for (j, [re, im]) in row.iter().enumerate() {
                let here = format!("{at}.matrices[{g}][{i}][{j}]");
                flat.push((number(re, &here)?, number(im, &here)?));
            }
        }
        entries.push(flat);
    }
    // entries[file index] -> group index
    let mut by_group: Vec<Option<&Vec<(Number, Number)>>> = vec![None; order.len()];
    for (file_idx, &g) in order.iter().enumerate() {
        by_group[g] = Some(&entries[file_idx]);
    }
    let by_group: Vec<&Vec<(Number, Number)>> = by_group.into_iter().map(|x| x.unwrap()).collect();
    let d = spec.degree;
    let floats = by_group.iter().any(|m| m.iter().any(|(a, b)| matches!(a, Number::Float(_)) || matches!(b, Number::Float(_))));
    let data = if floats {
        RepData::Sampled(
            by_group
                .iter()
                .map(|m| Matrix::from_vec(d, d, m.iter().map(|(a, b)| Complex64::new(to_f64(a), to_f64(b))).collect()))
                .collect(),
        )
    } else {
        let exact = |x: &Number| match x {
            Number::Exact(r) => r.clone(),
            Number::Float(_) => unreachable!(),
        };
        let imaginary = by_group.iter().any(|m| m.iter().any(|(_, b)| exact(b) != Rational::from_integer(0.into())));
        if imaginary {
            RepData::Gaussian(
                by_group
                    .iter()
                    .map(|m| Matrix::from_vec(d, d, m.iter().map(|(a, b)| Gaussian::new(exact(a), exact(b))).collect()))
                    .collect(),
            )
        } else {
            RepData::Rational(
                by_group.iter().map(|m| Matrix::from_vec(d, d, m.iter().map(|(a, _)| exact(a)).collect())).collect(),
            )
        }
    };
    Ok(Representation::new(spec.name.clone(), data))
}

/// A catalog whose group must equal `group` as a set of permutations.
pub fn catalog_from(file: &RepFile, group: &GroupTable) -> Result<IrrepCatalog, CliError> {
    let mut order = Vec::new();
    for (i, img) in file.group.elements.iter().enumerate() {
        let p = Permutation::from_one_line(img)
            .map_err(|e| CliError::Representation(format!("group.elements[{i}]: {e}")))?;
        if p.degree() != file.group.k {
            return Err(CliError::Representation(format!("group.elements[{i}] has degree {}", p.degree())));
        }
        let g = group.index_of(&p).ok_or_else(|| {
            CliError::Representation(format!("group.elements[{i}] = {img:?} is not in the voltage group"))
        })?;
        order.push(g);
    }
    let distinct: HashSet<usize> = order.iter().copied().collect();
    if file.group.k != group.k() || distinct.len() != order.len() || order.len() != group.order() {
        return Err(CliError::Representation(format!(
            "catalog group (k = {}, {} elements) differs from the voltage group (k = {}, order {})",
            file.group.k,
            order.len(),
            group.k(),
            group.order()
        )));
    }
    let irreps = file.irreps.iter().enumerate().map(|(i, s)| irrep_from(s, i, &order)).collect::<Result<_, _>>()?;
    Ok(IrrepCatalog { irreps, source: CatalogSource::File })
}

pub fn load_catalog(src: &Source, group: &GroupTable) -> Result<IrrepCatalog, CliError> {
    catalog_from(&src.parse()?, group)
}
