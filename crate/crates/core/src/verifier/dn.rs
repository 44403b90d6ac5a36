//! Closed-form images for `C_1` of type `D_n` at level 2, checked against the cluster structure.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_relations, verify_type, ImageTable, VerifyOptions};
use crate::cartan::{CartanDatum, CartanType, Family};
use crate::cluster::YMonomial;
use crate::error::{Error, Result};
use crate::fusion::{FusionRing, VerlindeElement};

fn y(pairs: &[(usize, i64)]) -> YMonomial {
    let mut m = BTreeMap::new();
    for &(i, p) in pairs {
        *m.entry((i, p)).or_insert(0) += 1;
    }
    YMonomial(m)
}

/// Affine weight over `Lambda_0..Lambda_n` with the listed indices (repeats add up).
fn lam(n: usize, idx: &[usize]) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    for &i in idx {
        v[i] += 1;
    }
    v
}

/// `Lambda_{2s+off}` for `s = 0..=upper` (empty when `upper < 0`).
fn stride(n: usize, from: i64, upper: i64, off: i64) -> Vec<Vec<i64>> {
    (from..=upper).map(|s| lam(n, &[(2 * s + off) as usize])).collect()
}

fn four_factor_image(n: usize, big_n: i64) -> Vec<Vec<i64>> {
    let mut out;
    if big_n % 2 == 0 {
        out = vec![lam(n, &[0, 1])];
        out.extend(stride(n, 0, (big_n - 4) / 2, 3));
    } else {
        out = vec![if n % 2 == 1 { lam(n, &[0, 0]) } else { lam(n, &[1, 1]) }];
        out.extend(stride(n, 0, (big_n - 3) / 2, 2));
    }
    out
}

/// Which closed form to use for `Y_{i,i-4}Y_{j,j-2}` with `j - i` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DnFormula {
    /// leading class `2 Lambda_1` for every `i`
    Uniform,
    /// leading class `2 Lambda_1` for odd `i` and `2 Lambda_0` for even `i`
    Corrected,
}

/// Every dominant monomial of `C_1` for `D_n` (frozen ones included) with its conjectured
/// image as a list of level-2 classes.
pub fn dn_conjecture(n: usize, formula: DnFormula) -> Vec<(YMonomial, Vec<Vec<i64>>)> {
    let ni = n as i64;
    let mut out = Vec::new();
    for i in 1..=n - 2 {
        let ii = i as i64;
        let single = if i % 2 == 1 {
            let mut v = vec![lam(n, &[0, 1])];
            v.extend(stride(n, 1, (ii - 1) / 2, 1));
            v
        } else {
            let mut v = vec![lam(n, &[0, 0])];
            v.extend(stride(n, 1, ii / 2, 0));
            v
        };
        out.push((y(&[(i, ii - 2)]), single.clone()));
        out.push((y(&[(i, ii - 4)]), single));
        let pair = if i % 2 == 1 { lam(n, &[1, 1]) } else { lam(n, &[0, 0]) };
        out.push((y(&[(i, ii - 2), (i, ii - 4)]), vec![pair]));
    }
    for i in [n - 1, n] {
        out.push((y(&[(i, ni - 3)]), vec![lam(n, &[0, i])]));
        out.push((y(&[(i, ni - 5)]), vec![lam(n, &[0, i])]));
        out.push((y(&[(i, ni - 5), (i, ni - 3)]), vec![lam(n, &[i, i])]));
    }
    for i in 1..=n - 2 {
        for j in [n - 1, n] {
            let base = if i % 2 == 1 { 1 } else { 0 };
            out.push((y(&[(i, i as i64 - 4), (j, ni - 3)]), vec![lam(n, &[base, j])]));
        }
    }
    for i in 1..=n - 2 {
        for j in i + 1..=n - 2 {
            let d = (j - i) as i64;
            let img = if d % 2 == 1 {
                let mut v = vec![lam(n, &[0, 1])];
                v.extend(stride(n, 0, (d - 3) / 2, 3));
                v
            } else {
                let lead = match formula {
                    DnFormula::Corrected if i % 2 == 0 => lam(n, &[0, 0]),
                    _ => lam(n, &[1, 1]),
                };
                let mut v = vec![lead];
                v.extend(stride(n, 0, (d - 2) / 2, 2));
                v
            };
            out.push((y(&[(i, i as i64 - 4), (j, j as i64 - 2)]), img));
        }
    }
    for i in 1..=n - 2 {
        let m = y(&[(i, i as i64 - 4), (n - 1, ni - 3), (n, ni - 3)]);
        out.push((m, four_factor_image(n, ni - i as i64)));
    }
    for i in 1..=n - 2 {
        for j in i + 1..=n - 2 {
            let m = y(&[(i, i as i64 - 4), (j, j as i64 - 4), (n - 1, ni - 3), (n, ni - 3)]);
            out.push((m, four_factor_image(n, ni - j as i64 + i as i64)));
        }
    }
    out
}

pub fn dn_conjectured_image(n: usize, formula: DnFormula, label: &YMonomial) -> Option<Vec<Vec<i64>>> {
    dn_conjecture(n, formula).into_iter().find(|(m, _)| m == label).map(|(_, v)| v)
}

/// Exchangeable dominant monomials by degree, as tabulated for `D_n`.
pub fn dn_census(n: usize) -> [usize; 4] {
    [2 * n, (n - 2) * (n + 1) / 2, n - 2, (n - 2) * (n - 3) / 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnReport {
    pub n: usize,
    pub exchangeable: usize,
    pub census: [usize; 4],
    pub expected_census: [usize; 4],
    /// enumerated exchangeable labels equal the tabulated set
    pub labels_match: bool,
    /// ids (1-based) whose label has no closed-form image
    pub missing: Vec<usize>,
    pub relations_hold: bool,
    pub failing_relations: Vec<usize>,
    pub positive: bool,
    /// the closed forms equal the images forced by propagation from KR data
    pub agrees_with_propagation: bool,
    /// labels where the uniform and corrected forms differ
    pub uniform_deviations: Vec<String>,
    /// the uniform forms alone satisfy every relation
    pub uniform_relations_hold: bool,
}

impl DnReport {
    /// Consistent with the conjecture on every check.
    pub fn consistent(&self) -> bool {
        self.exchangeable == self.n * self.n
            && self.census == self.expected_census
            && self.labels_match
            && self.missing.is_empty()
            && self.relations_hold
            && self.positive
    }
}

/// Images from the closed forms; ids whose label has none are returned separately.
fn conjectured_table(
    n: usize,
    formula: DnFormula,
    reg: &crate::cluster::VariableRegistry,
    fusion: &FusionRing,
) -> Result<(ImageTable, Vec<usize>)> {
    let conj = dn_conjecture(n, formula);
    let mut table = ImageTable::new(reg.len(), fusion.size());
    let mut missing = Vec::new();
    for id in 0..reg.len() {
        let img = reg.get(id).label.as_ref().and_then(|l| conj.iter().find(|(m, _)| m == l));
        match img {
            Some((_, classes)) => {
                let mut v = VerlindeElement::zero(fusion.size());
                for c in classes {
                    v.coeffs[fusion.index_of(c)?] += 1;
                }
                table.set_known(id, &v)?;
            }
            None => missing.push(id + 1),
        }
    }
    Ok((table, missing))
}

/// Check the closed forms (corrected for the parity of `i`) against the cluster structure of
/// `C_1`; the uniform forms are checked alongside.
pub fn check_dn(n: usize) -> Result<DnReport> {
    if n < 4 {
        return Err(Error::UnsupportedType(format!("D{n} needs n >= 4")));
    }
    let datum = Arc::new(CartanDatum::build(CartanType::new(Family::D, n)?)?);
    let (_, ctx, propagated) = verify_type(datum.clone(), 2, &VerifyOptions::default())?;
    let fusion = FusionRing::new(datum, 2)?;
    let reg = &ctx.enumeration.registry;
    let relations = &ctx.enumeration.relations;
    let frozen: BTreeSet<usize> = ctx.enumeration.frozen_ids().into_iter().collect();

    let mut census = [0usize; 4];
    let mut seen = BTreeSet::new();
    for id in (0..reg.len()).filter(|id| !frozen.contains(id)) {
        if let Some(l) = &reg.get(id).label {
            let deg = l.degree() as usize;
            if (1..=4).contains(&deg) {
                census[deg - 1] += 1;
            }
            seen.insert(l.clone());
        }
    }
    let frozen_labels: BTreeSet<YMonomial> = frozen.iter().filter_map(|&id| reg.get(id).label.clone()).collect();
    let tabulated: BTreeSet<YMonomial> = dn_conjecture(n, DnFormula::Corrected)
        .into_iter()
        .map(|(m, _)| m)
        .filter(|m| !frozen_labels.contains(m))
        .collect();

    let (table, missing) = conjectured_table(n, DnFormula::Corrected, reg, &fusion)?;
    let (failing, relations_hold) = if missing.is_empty() {
        let f = check_relations(relations, &table, &fusion)?;
        let ok = f.is_empty();
        (f.into_iter().map(|i| i + 1).collect(), ok)
    } else {
        (Vec::new(), false)
    };
    let positive = missing.is_empty()
        && (0..reg.len()).all(|id| table.known(id).map(|v| v.is_positive()).unwrap_or(false));

    let (uniform, uniform_missing) = conjectured_table(n, DnFormula::Uniform, reg, &fusion)?;
    let uniform_relations_hold =
        uniform_missing.is_empty() && check_relations(relations, &uniform, &fusion)?.is_empty();
    let uniform_deviations = (0..reg.len())
        .filter(|&id| uniform.coeffs[id] != table.coeffs[id])
        .filter_map(|id| reg.get(id).label.as_ref().map(|l| l.to_string()))
        .collect();

    Ok(DnReport {
        n,
        exchangeable: ctx.enumeration.n_exchangeable(),
        census,
        expected_census: dn_census(n),
        labels_match: seen == tabulated,
        missing,
        relations_hold,
        failing_relations: failing,
        positive,
        agrees_with_propagation: propagated == table,
        uniform_deviations,
        uniform_relations_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_count_matches_census_plus_frozen() {
        for n in 4..=8 {
            let total: usize = dn_census(n).iter().sum();
            assert_eq!(total, n * n);
            assert_eq!(dn_conjecture(n, DnFormula::Uniform).len(), n * n + n);
        }
    }

    #[test]
    fn d5_spin_pair() {
        // Y_{1,-3} Y_{5,2}: i odd, j = n
        let img = dn_conjectured_image(5, DnFormula::Uniform, &"Y_{1,-3}Y_{5,2}".parse().unwrap()).unwrap();
        assert_eq!(img, vec![vec![0, 1, 0, 0, 0, 1]]);
    }

    #[test]
    fn every_class_has_level_two() {
        let d = CartanDatum::build(CartanType::new(Family::D, 7).unwrap()).unwrap();
        for (_, classes) in dn_conjecture(7, DnFormula::Corrected) {
            for c in classes {
                assert_eq!(d.level(&c), 2, "{c:?}");
            }
        }
    }

    #[test]
    fn uniform_and_corrected_differ_only_for_even_i_and_even_gap() {
        let n = 8;
        let a = dn_conjecture(n, DnFormula::Uniform);
        let b = dn_conjecture(n, DnFormula::Corrected);
        let diff: Vec<String> = a.iter().zip(&b).filter(|(x, y)| x.1 != y.1).map(|(x, _)| x.0.to_string()).collect();
        assert_eq!(diff, ["Y_{2,-2}Y_{4,2}", "Y_{2,-2}Y_{6,4}", "Y_{4,0}Y_{6,4}"]);
    }
}
