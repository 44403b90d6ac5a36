//! Text, JSON and DOT renderings of registries, relations and quivers, with importers.

use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly;
use super::qdatum::YMonomial;
use super::registry::VariableRegistry;
use super::{ExchangeMatrix, ExchangeRelation};
use crate::error::{Error, Result};

fn monomial_text(ids: &[usize]) -> String {
    if ids.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < ids.len() {
        let mut j = i;
        while j < ids.len() && ids[j] == ids[i] {
            j += 1;
        }
        let e = j - i;
        parts.push(if e == 1 { format!("x{}", ids[i] + 1) } else { format!("x{}^{e}", ids[i] + 1) });
        i = j;
    }
    parts.join("*")
}

fn parse_monomial(s: &str, line: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse { what: "exchange relation", input: line.to_string() };
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut ids = Vec::new();
    for f in s.split('*') {
        let f = f.strip_prefix('x').ok_or_else(bad)?;
        let (id, e) = match f.split_once('^') {
            Some((a, b)) => (a, b.parse::<usize>().map_err(|_| bad())?),
            None => (f, 1),
        };
        let id: usize = id.parse().map_err(|_| bad())?;
        if id == 0 {
            return Err(bad());
        }
        ids.extend(std::iter::repeat_n(id - 1, e));
    }
    ids.sort_unstable();
    Ok(ids)
}

/// One relation per line: `xA * xB = xC*xD + xE`, ids 1-based.
pub fn relations_to_text(relations: &[ExchangeRelation]) -> String {
    let mut out = String::new();
    for r in relations {
        out.push_str(&format!(
            "x{} * x{} = {} + {}\n",
            r.left.0 + 1,
            r.left.1 + 1,
            monomial_text(&r.right[0]),
            monomial_text(&r.right[1])
        ));
    }
    out
}

pub fn import_relations(text: &str) -> Result<Vec<ExchangeRelation>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse { what: "exchange relation", input: line.to_string() };
        let (lhs, rhs) = compact.split_once('=').ok_or_else(bad)?;
        let left = parse_monomial(lhs, line)?;
        let (m1, m2) = rhs.split_once('+').ok_or_else(bad)?;
        if left.len() != 2 {
            return Err(bad());
        }
        out.push(ExchangeRelation::canonical(left[0], left[1], parse_monomial(m1, line)?, parse_monomial(m2, line)?));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    /// 1-based
    pub id: usize,
    pub laurent: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<YMonomial>,
    pub frozen: bool,
}

/// JSON list of `{id, laurent, label?, frozen}`.
pub fn registry_to_json(reg: &VariableRegistry) -> String {
    let entries: Vec<RegistryEntry> = reg
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| RegistryEntry {
            id: i + 1,
            laurent: v.laurent.to_text(),
            label: v.label.clone(),
            frozen: v.frozen,
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("registry entries serialize")
}

/// Rebuild a registry from its JSON export; the first `n_initial` entries must be the
/// initial variables in order.
pub fn import_registry(text: &str) -> Result<VariableRegistry> {
    let schema = |m: String| Error::Schema { source_name: "registry".into(), message: m };
    let entries: Vec<RegistryEntry> = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    // the initial variables are the single-letter ones at the front
    let mut n = 0;
    for (pos, e) in entries.iter().enumerate() {
        if e.id != pos + 1 {
            return Err(schema(format!("entry {} has id {}", pos + 1, e.id)));
        }
        if e.laurent == format!("x{}", pos + 1) {
            n = pos + 1;
        } else {
            break;
        }
    }
    if n == 0 {
        return Err(schema("no initial variables".into()));
    }
    let frozen: Vec<bool> = entries[..n].iter().map(|e| e.frozen).collect();
    let labels = entries[..n].iter().map(|e| e.label.clone()).collect();
    let mut reg = VariableRegistry::new(&frozen, labels);
    for e in &entries[n..] {
        let p = LaurentPoly::parse(&e.laurent, n)?;
        let id = reg.insert(p, e.label.clone(), e.frozen)?;
        if id + 1 != e.id {
            return Err(schema(format!("duplicate variable at id {}", e.id)));
        }
    }
    Ok(reg)
}

/// DOT digraph; frozen vertices are boxed and arrows between frozen vertices are omitted.
pub fn quiver_to_dot(m: &ExchangeMatrix, names: &[String]) -> String {
    let mut out = String::from("digraph quiver {\n");
    for (i, name) in names.iter().enumerate() {
        let shape = if m.frozen[i] { "box" } else { "ellipse" };
        out.push_str(&format!("  v{i} [label=\"{name}\", shape={shape}];\n"));
    }
    for (a, b, k) in m.arrows(false) {
        for _ in 0..k {
            out.push_str(&format!("  v{a} -> v{b};\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_line() {
        let r = ExchangeRelation::canonical(0, 33, vec![1, 2], vec![3]);
        let text = relations_to_text(std::slice::from_ref(&r));
        assert_eq!(text, "x1 * x34 = x2*x3 + x4\n");
        assert_eq!(import_relations(&text).unwrap(), vec![r]);
        let sq = ExchangeRelation::canonical(4, 5, vec![], vec![2, 2]);
        assert_eq!(import_relations(&relations_to_text(std::slice::from_ref(&sq))).unwrap(), vec![sq]);
        assert!(import_relations("x1 = x2 + x3").is_err());
    }
}
