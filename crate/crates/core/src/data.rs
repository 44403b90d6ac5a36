//! Shipped data files: fundamental KR restrictions, cluster-variable tables and
//! worked-example decompositions. Every file carries a provenance string and a
//! SHA-256 checksum of its canonical payload, verified on load.
//!
//! Files are embedded at build time; setting `VERLINDE_DATA_DIR` makes the
//! loaders read `<dir>/<file name>` instead.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::cartan::{CartanDatum, Family};
use crate::cluster::YMonomial;
use crate::error::{Error, Result};
use crate::repring::{KRBranchingData, RepRingElement};

pub const DATA_DIR_ENV: &str = "VERLINDE_DATA_DIR";

const EMBEDDED: &[(&str, &str)] = &[
    ("kr_branching_E6.json", include_str!("../data/kr_branching_E6.json")),
    ("kr_branching_E7.json", include_str!("../data/kr_branching_E7.json")),
    ("kr_branching_E8.json", include_str!("../data/kr_branching_E8.json")),
    ("cluster_table_E6.json", include_str!("../data/cluster_table_E6.json")),
    ("cluster_table_E7.json", include_str!("../data/cluster_table_E7.json")),
    ("example_A2.json", include_str!("../data/example_A2.json")),
    ("example_B3.json", include_str!("../data/example_B3.json")),
];

/// Raw text of a data file, honoring the directory override.
pub fn read_data_file(name: &str) -> Result<String> {
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        let path = std::path::Path::new(&dir).join(name);
        if path.exists() {
            return std::fs::read_to_string(&path).map_err(|e| Error::Schema {
                source_name: path.display().to_string(),
                message: e.to_string(),
            });
        }
    }
    EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Schema {
            source_name: name.to_string(),
            message: "no such data file".into(),
        })
}

/// Compact JSON with object keys sorted at every level.
fn canonical_json(v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (n, k) in keys.into_iter().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push(':');
                canonical_json(&map[k], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (n, x) in items.iter().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                canonical_json(x, out);
            }
            out.push(']');
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalars serialize")),
    }
}

pub fn checksum(payload: &Value) -> String {
    let mut canonical = String::new();
    canonical_json(payload, &mut canonical);
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn schema(source: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        source_name: source.to_string(),
        message: message.into(),
    }
}

/// Parse a document, check its checksum over `payload_key`, and return the whole value.
pub fn parse_checked(source: &str, text: &str, payload_key: &str) -> Result<Value> {
    if text.trim().is_empty() {
        return Err(schema(source, "empty file"));
    }
    let v: Value = serde_json::from_str(text).map_err(|e| schema(source, e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| schema(source, "top level must be an object"))?;
    let payload = obj
        .get(payload_key)
        .ok_or_else(|| schema(source, format!("missing field {payload_key:?}")))?;
    if !obj.get("provenance").map(Value::is_string).unwrap_or(false) {
        return Err(schema(source, "missing provenance"));
    }
    let stated = obj
        .get("sha256")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(source, "missing sha256"))?;
    if stated != checksum(payload) {
        return Err(Error::Checksum(source.to_string()));
    }
    Ok(v)
}

#[derive(Debug, Serialize, Deserialize)]
struct WeightMult {
    weight: Vec<i64>,
    mult: i64,
}

/// Serialize a branching table in the shipped format.
pub fn render_branching(type_label: &str, map: &BTreeMap<usize, BTreeMap<Vec<i64>, i64>>, provenance: &str) -> String {
    let mut fk = serde_json::Map::new();
    for (a, terms) in map {
        let list: Vec<Value> = terms
            .iter()
            .rev()
            .map(|(w, m)| serde_json::to_value(WeightMult { weight: w.clone(), mult: *m }).unwrap())
            .collect();
        fk.insert(a.to_string(), Value::Array(list));
    }
    let payload = Value::Object(fk);
    let doc = serde_json::json!({
        "type": type_label,
        "provenance": provenance,
        "sha256": checksum(&payload),
        "fundamental_kr": payload,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

/// Parse a branching file and check it against the Cartan datum.
pub fn parse_branching(source: &str, text: &str, datum: &CartanDatum) -> Result<KRBranchingData> {
    let v = parse_checked(source, text, "fundamental_kr")?;
    let ty = v.get("type").and_then(Value::as_str).unwrap_or_default();
    if ty != datum.ty.to_string() {
        return Err(schema(source, format!("type {ty:?} does not match {}", datum.ty)));
    }
    let fk: BTreeMap<String, Vec<WeightMult>> =
        serde_json::from_value(v["fundamental_kr"].clone()).map_err(|e| schema(source, e.to_string()))?;
    let n = datum.rank();
    let mut out = BTreeMap::new();
    for (key, list) in fk {
        let a: usize = key.parse().map_err(|_| schema(source, format!("bad node {key:?}")))?;
        if a == 0 || a > n {
            return Err(schema(source, format!("node {a} out of range")));
        }
        let mut elt = RepRingElement::zero();
        for wm in list {
            if wm.weight.len() != n || wm.weight.iter().any(|&c| c < 0) || wm.mult <= 0 {
                return Err(schema(source, format!("bad term {:?} x{}", wm.weight, wm.mult)));
            }
            elt.add_term(&wm.weight, wm.mult);
        }
        out.insert(a, elt);
    }
    if out.len() != n {
        return Err(schema(source, "every node needs an entry"));
    }
    Ok(KRBranchingData {
        type_label: datum.ty.to_string(),
        fundamental_kr: out,
    })
}

/// Fundamental KR restrictions for a type: closed form for A–D, shipped files for E.
pub fn branching_for(datum: &CartanDatum) -> Result<KRBranchingData> {
    match datum.ty.family {
        Family::A | Family::B | Family::C | Family::D => KRBranchingData::classical(datum),
        Family::E => {
            let name = format!("kr_branching_{}.json", datum.ty);
            parse_branching(&name, &read_data_file(&name)?, datum)
        }
        Family::F | Family::G => Err(Error::MissingBranching(datum.ty.to_string())),
    }
}

/// One row of a shipped cluster-variable table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub index: usize,
    pub monomial: YMonomial,
    pub image: String,
}

/// Cluster variables with dominant monomials and level-`k` images over a named basis `V_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTable {
    #[serde(skip)]
    pub type_label: String,
    pub k: i64,
    /// affine weights `(c_0..c_n)` of `V_0, V_1, ...`
    pub basis: Vec<Vec<i64>>,
    pub kr_indices: Vec<usize>,
    pub rows: Vec<TableRow>,
}

impl ClusterTable {
    pub fn row(&self, index: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.index == index)
    }
}

/// `"V_0 + V_4 + 2 V_5"` to a coefficient vector of the given length.
pub fn parse_v_image(s: &str, size: usize) -> Result<Vec<i64>> {
    let bad = || Error::Parse { what: "Verlinde image", input: s.to_string() };
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = vec![0i64; size];
    if t == "0" {
        return Ok(out);
    }
    for term in t.split('+') {
        let pos = term.find("V_").ok_or_else(bad)?;
        let coeff = match &term[..pos] {
            "" => 1,
            c => c.trim_end_matches('*').parse::<i64>().map_err(|_| bad())?,
        };
        let idx = term[pos + 2..].trim_matches(|c| c == '{' || c == '}');
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx >= size {
            return Err(Error::Parse { what: "Verlinde basis index", input: s.to_string() });
        }
        out[idx] += coeff;
    }
    Ok(out)
}

pub fn parse_cluster_table(source: &str, text: &str) -> Result<ClusterTable> {
    let v = parse_checked(source, text, "table")?;
    let mut table: ClusterTable =
        serde_json::from_value(v["table"].clone()).map_err(|e| schema(source, e.to_string()))?;
    table.type_label = v.get("type").and_then(Value::as_str).unwrap_or_default().to_string();
    let mut seen = std::collections::BTreeSet::new();
    for r in &table.rows {
        if !seen.insert(r.index) {
            return Err(schema(source, format!("duplicate index {}", r.index)));
        }
        parse_v_image(&r.image, table.basis.len())?;
    }
    for i in &table.kr_indices {
        if !seen.contains(i) {
            return Err(schema(source, format!("KR index {i} has no row")));
        }
    }
    Ok(table)
}

/// The shipped table for a type, if any.
pub fn cluster_table_for(type_label: &str) -> Result<Option<ClusterTable>> {
    let name = format!("cluster_table_{type_label}.json");
    if !EMBEDDED.iter().any(|(n, _)| *n == name) {
        return Ok(None);
    }
    parse_cluster_table(&name, &read_data_file(&name)?).map(Some)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedImage {
    pub sign: i64,
    pub weight: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub mult: i64,
    pub weight: Vec<i64>,
    pub dim: u64,
    pub image: Option<SignedImage>,
    pub qdim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageTerm {
    pub coeff: i64,
    pub weight: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterTerm {
    pub sign: i64,
    pub modules: Vec<YMonomial>,
    pub restrictions: Vec<Vec<i64>>,
}

/// A worked example: a simple module, its decomposition and its level-`k` image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleData {
    #[serde(rename = "type")]
    pub type_label: String,
    pub k: i64,
    #[serde(default)]
    pub ell: Option<i64>,
    pub height: Vec<i64>,
    pub monomial: YMonomial,
    pub dimension: u64,
    pub rows: Vec<DecompositionRow>,
    pub final_image: Vec<ImageTerm>,
    #[serde(default)]
    pub character_expression: Vec<CharacterTerm>,
    #[serde(default)]
    pub x_vertices: Vec<(usize, i64)>,
    #[serde(default)]
    pub laurent_numerator: Option<String>,
    #[serde(default)]
    pub laurent_denominator: Option<String>,
}

pub fn parse_example(source: &str, text: &str) -> Result<ExampleData> {
    let v = parse_checked(source, text, "example")?;
    serde_json::from_value(v["example"].clone()).map_err(|e| schema(source, e.to_string()))
}

pub fn example(name: &str) -> Result<ExampleData> {
    let file = format!("example_{name}.json");
    parse_example(&file, &read_data_file(&file)?)
}
