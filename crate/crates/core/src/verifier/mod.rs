//! Images of cluster variables in the Verlinde ring: KR seeding, iterative linear
//! solving along exchange relations, and certification of positivity and units.

mod atype;
mod dn;
mod examples;
mod solve;

pub use atype::{check_a1, check_a_rank, ATypeReport};
pub use dn::{check_dn, dn_census, dn_conjecture, dn_conjectured_image, DnFormula, DnReport};
pub use examples::{check_example_a2, check_example_b3, check_example_b3_with, ExampleReport, NamedCheck, RowCheck};
pub use solve::{Eliminator, Equation};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::cluster::{
    assign_labels, build_initial_seed, detect_kr, enumerate_finite, Enumeration, ExchangeRelation, HeightChoice, Limits,
    QDatumGrid, VariableRegistry,
};
use crate::data::{branching_for, cluster_table_for, parse_v_image, ClusterTable};
use crate::error::{Error, Result};
use crate::fusion::{FusionRing, VerlindeElement};
use crate::repring::KRBranchingData;

/// Per-variable images, coefficient by coefficient; `None` marks an unknown `c(j, lambda)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageTable {
    pub size: usize,
    pub coeffs: Vec<Vec<Option<i64>>>,
}

impl ImageTable {
    pub fn new(n_vars: usize, size: usize) -> Self {
        ImageTable { size, coeffs: vec![vec![None; size]; n_vars] }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    /// Known entries are immutable: setting a different value is an error.
    pub fn set_known(&mut self, id: usize, v: &VerlindeElement) -> Result<()> {
        for (slot, &c) in self.coeffs[id].iter_mut().zip(&v.coeffs) {
            match slot {
                Some(old) if *old != c => {
                    return Err(Error::Internal(format!("image of x{} already fixed differently", id + 1)))
                }
                _ => *slot = Some(c),
            }
        }
        Ok(())
    }

    pub fn is_known(&self, id: usize) -> bool {
        self.coeffs[id].iter().all(Option::is_some)
    }

    pub fn known(&self, id: usize) -> Option<VerlindeElement> {
        let c: Option<Vec<i64>> = self.coeffs[id].iter().copied().collect();
        c.map(|coeffs| VerlindeElement { coeffs })
    }

    /// Known part of an image, zeros in unknown slots.
    pub fn known_part(&self, id: usize) -> VerlindeElement {
        VerlindeElement { coeffs: self.coeffs[id].iter().map(|c| c.unwrap_or(0)).collect() }
    }

    pub fn known_count(&self) -> usize {
        self.coeffs.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn unknown_count(&self) -> usize {
        self.coeffs.iter().flatten().filter(|c| c.is_none()).count()
    }

    pub fn undetermined_vars(&self) -> Vec<usize> {
        (0..self.n_vars()).filter(|&i| !self.is_known(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    /// KR restrictions from branching data, projected by `pi_k`.
    Pipeline,
    /// The shipped table keyed by dominant monomial.
    Data,
    /// Both, required to agree.
    Both,
}

/// `phi_k(W^{(i)}_m)`. For simply-laced types and `m <= 2` the Q-system is applied in
/// the Verlinde ring directly, avoiding large tensor products.
pub fn kr_image(fusion: &FusionRing, branching: &KRBranchingData, i: usize, m: i64) -> Result<VerlindeElement> {
    let d = fusion.datum();
    match m {
        0 => Ok(fusion.one()),
        1 => fusion.phi_image(branching.get(i)?),
        2 if d.ty.is_simply_laced() => {
            let q1 = fusion.phi_image(branching.get(i)?)?;
            let mut sq = fusion.multiply(&q1, &q1)?;
            let mut prod = fusion.one();
            for j in d.neighbors(i - 1) {
                prod = fusion.multiply(&prod, &fusion.phi_image(branching.get(j + 1)?)?)?;
            }
            sq = sq.sub(&prod);
            Ok(sq)
        }
        _ => fusion.phi_image(&fusion.rep().kr_restriction(branching, i, m)?),
    }
}

fn table_image_by_label(table: &ClusterTable, reg: &VariableRegistry, id: usize, size: usize) -> Result<Option<VerlindeElement>> {
    let Some(label) = &reg.get(id).label else { return Ok(None) };
    match table.rows.iter().find(|r| &r.monomial == label) {
        Some(r) => Ok(Some(VerlindeElement { coeffs: parse_v_image(&r.image, size)? })),
        None => Ok(None),
    }
}

/// Fix the images of all KR variables.
pub fn seed_known_images(
    reg: &VariableRegistry,
    kr: &BTreeMap<usize, (usize, i64)>,
    fusion: &FusionRing,
    source: SeedSource,
    branching: Option<&KRBranchingData>,
    table: Option<&ClusterTable>,
) -> Result<ImageTable> {
    let d = fusion.datum();
    let mut out = ImageTable::new(reg.len(), fusion.size());
    for (&id, &(i, m)) in kr {
        if m > d.t[i - 1] * fusion.k {
            return Err(Error::DataInconsistency(format!(
                "KR variable x{} has length {m} beyond t_i k = {}",
                id + 1,
                d.t[i - 1] * fusion.k
            )));
        }
        let from_pipeline = match source {
            SeedSource::Pipeline | SeedSource::Both => {
                let b = branching.ok_or_else(|| Error::MissingBranching(d.ty.to_string()))?;
                Some(kr_image(fusion, b, i, m)?)
            }
            SeedSource::Data => None,
        };
        let from_data = match source {
            SeedSource::Data | SeedSource::Both => {
                let t = table.ok_or_else(|| Error::Schema {
                    source_name: format!("cluster_table_{}", d.ty),
                    message: "no shipped table".into(),
                })?;
                let img = table_image_by_label(t, reg, id, fusion.size())?;
                if img.is_none() && source == SeedSource::Data {
                    return Err(Error::SourceDisagreement {
                        id: id + 1,
                        message: "no table row for this KR label".into(),
                    });
                }
                img
            }
            SeedSource::Pipeline => None,
        };
        if let (Some(a), Some(b)) = (&from_pipeline, &from_data) {
            if a != b {
                return Err(Error::SourceDisagreement {
                    id: id + 1,
                    message: format!("pipeline gives {}, table gives {}", a.to_v_string(), b.to_v_string()),
                });
            }
        }
        let img = from_pipeline.or(from_data).expect("one source is always consulted");
        out.set_known(id, &img)?;
    }
    Ok(out)
}

/// Substitute the table into one product of variables. `None` when the product is not
/// linear in the unknowns. Otherwise the constant part and one vector per unknown symbol.
#[allow(clippy::type_complexity)]
fn linearize(
    ids: &[usize],
    table: &ImageTable,
    fusion: &FusionRing,
) -> Result<Option<(VerlindeElement, Vec<(usize, VerlindeElement)>)>> {
    let mut unknown: Option<usize> = None;
    let mut known = fusion.one();
    for &id in ids {
        if table.is_known(id) {
            known = fusion.multiply(&known, &table.known(id).unwrap())?;
        } else if unknown.is_some() {
            return Ok(None);
        } else {
            unknown = Some(id);
        }
    }
    let Some(u) = unknown else { return Ok(Some((known, Vec::new()))) };
    let constant = fusion.multiply(&known, &table.known_part(u))?;
    let size = table.size;
    let mut terms = Vec::new();
    for lam in 0..size {
        if table.coeffs[u][lam].is_none() {
            let v = fusion.multiply(&known, &VerlindeElement::basis(size, lam))?;
            terms.push((u * size + lam, v));
        }
    }
    Ok(Some((constant, terms)))
}

/// One linear equation per basis weight, or `None` when the relation is not linear.
fn relation_equations(rel: &ExchangeRelation, table: &ImageTable, fusion: &FusionRing) -> Result<Option<Vec<Equation>>> {
    let size = table.size;
    let mut parts = Vec::new();
    for (sign, ids) in [(1i64, vec![rel.left.0, rel.left.1]), (-1, rel.right[0].clone()), (-1, rel.right[1].clone())] {
        match linearize(&ids, table, fusion)? {
            None => return Ok(None),
            Some(p) => parts.push((sign, p)),
        }
    }
    let mut out = Vec::with_capacity(size);
    for nu in 0..size {
        let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
        let mut constant = 0i64;
        for (sign, (c, terms)) in &parts {
            constant += sign * c.coeffs[nu];
            for (s, v) in terms {
                *coeffs.entry(*s).or_insert(0) += sign * v.coeffs[nu];
            }
        }
        out.push(Equation::from_ints(&coeffs, constant));
    }
    Ok(Some(out))
}

/// Iterate: gather the linear relations, solve exactly, fix every forced coefficient.
/// Returns the number of newly determined coefficients per productive iteration.
pub fn propagate(relations: &[ExchangeRelation], table: &mut ImageTable, fusion: &FusionRing) -> Result<Vec<usize>> {
    let mut stats = Vec::new();
    loop {
        if table.unknown_count() == 0 {
            break;
        }
        let mut elim = Eliminator::default();
        for rel in relations {
            let Some(eqs) = relation_equations(rel, table, fusion)? else { continue };
            for eq in eqs {
                elim.add(eq).map_err(|_| Error::Contradiction {
                    relation: relation_name(rel),
                    message: "the linear system became inconsistent".into(),
                })?;
            }
        }
        let forced = elim.determined();
        let mut newly = 0;
        for (sym, val) in forced {
            let (id, lam) = (sym / table.size, sym % table.size);
            if table.coeffs[id][lam].is_some() {
                continue;
            }
            if !val.is_integer() {
                return Err(Error::Contradiction {
                    relation: format!("c({}, {lam})", id + 1),
                    message: format!("forced value {val} is not an integer"),
                });
            }
            let v = val.to_integer().to_i64().ok_or_else(|| Error::Internal("forced value overflows".into()))?;
            table.coeffs[id][lam] = Some(v);
            newly += 1;
        }
        if newly == 0 {
            break;
        }
        stats.push(newly);
    }
    Ok(stats)
}

fn relation_name(rel: &ExchangeRelation) -> String {
    crate::cluster::relations_to_text(std::slice::from_ref(rel)).trim().to_string()
}

/// Relations that fail under the (fully known) table.
pub fn check_relations(relations: &[ExchangeRelation], table: &ImageTable, fusion: &FusionRing) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    let prod = |ids: &[usize]| -> Result<VerlindeElement> {
        let mut acc = fusion.one();
        for &id in ids {
            let v = table
                .known(id)
                .ok_or_else(|| Error::Internal(format!("x{} has no image", id + 1)))?;
            acc = fusion.multiply(&acc, &v)?;
        }
        Ok(acc)
    };
    for (n, rel) in relations.iter().enumerate() {
        let l = prod(&[rel.left.0, rel.left.1])?;
        let r = prod(&rel.right[0])?.add(&prod(&rel.right[1])?);
        if l != r {
            bad.push(n);
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdCertificate {
    /// 1-based
    pub id: usize,
    pub frozen: bool,
    pub nonzero: bool,
    pub nonnegative: bool,
    pub qdim: f64,
    /// multiplication matrix has determinant +-1
    pub det_unit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub ids: Vec<IdCertificate>,
    /// every image nonzero with non-negative coefficients
    pub positivity: bool,
    pub qdim_positive: bool,
    /// every frozen image is a unit with quantum dimension 1
    pub frozen_units: bool,
    /// non-frozen images that are units of the integral ring (determinant criterion)
    pub nonfrozen_units: Vec<usize>,
    /// quantum dimension equals 1 exactly on the frozen variables
    pub qdim_one_iff_frozen: bool,
    /// every fusion structure constant met on the way is non-negative
    pub structure_constants_nonnegative: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.positivity && self.qdim_positive && self.frozen_units && self.qdim_one_iff_frozen
    }
}

/// Positivity, quantum dimensions and units of a fully known table.
pub fn certify(table: &ImageTable, fusion: &FusionRing, frozen: &BTreeSet<usize>) -> Result<Certificate> {
    let mut ids = Vec::new();
    for id in 0..table.n_vars() {
        let Some(v) = table.known(id) else {
            return Err(Error::Internal(format!("x{} is not determined", id + 1)));
        };
        ids.push(IdCertificate {
            id: id + 1,
            frozen: frozen.contains(&id),
            nonzero: !v.is_zero(),
            nonnegative: v.coeffs.iter().all(|&c| c >= 0),
            qdim: fusion.qdim_element(&v),
            det_unit: !v.is_zero() && fusion.is_unit(&v)?,
        });
    }
    let positivity = ids.iter().all(|c| c.nonzero && c.nonnegative);
    let qdim_positive = ids.iter().all(|c| c.qdim > 0.0);
    let frozen_units = ids.iter().filter(|c| c.frozen).all(|c| c.det_unit && (c.qdim - 1.0).abs() < 1e-9);
    let nonfrozen_units = ids.iter().filter(|c| !c.frozen && c.det_unit).map(|c| c.id).collect();
    let qdim_one_iff_frozen = ids.iter().all(|c| ((c.qdim - 1.0).abs() < 1e-9) == c.frozen);
    let structure_constants_nonnegative = {
        let mut ok = true;
        for a in 0..fusion.size() {
            for b in a..fusion.size() {
                ok &= fusion.mul_basis(a, b)?.iter().all(|&c| c >= 0);
            }
        }
        ok
    };
    Ok(Certificate {
        ids,
        positivity,
        qdim_positive,
        frozen_units,
        nonfrozen_units,
        qdim_one_iff_frozen,
        structure_constants_nonnegative,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub variables: usize,
    pub exchangeable: usize,
    pub frozen: usize,
    pub clusters: usize,
    pub relations: usize,
    pub kr: usize,
    pub known: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iteration {
    pub determined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRow {
    /// 1-based registry id
    pub id: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub coeffs: Vec<Option<i64>>,
    /// index in the shipped table, matched by label
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_index: Option<usize>,
    pub kr: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableComparison {
    pub rows: usize,
    /// table indices whose label matches no variable, or more than one
    pub unmatched: Vec<usize>,
    /// table indices whose image differs from the computed one
    pub mismatched: Vec<usize>,
    /// table KR indices that agree with the detected KR variables
    pub kr_indices_match: bool,
}

impl TableComparison {
    pub fn identical(&self) -> bool {
        self.unmatched.is_empty() && self.mismatched.is_empty() && self.kr_indices_match
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "type")]
    pub type_label: String,
    pub k: i64,
    pub basis: Vec<Vec<i64>>,
    pub counts: Counts,
    pub iterations: Vec<Iteration>,
    pub images: Vec<ImageRow>,
    pub undetermined: Vec<usize>,
    pub relations_sound: bool,
    pub positivity: bool,
    pub frozen_units: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableComparison>,
}

impl VerifyReport {
    /// All requested certifications hold.
    pub fn passed(&self) -> bool {
        self.undetermined.is_empty()
            && self.relations_sound
            && self.certificate.as_ref().map(Certificate::passed).unwrap_or(false)
            && self.table.as_ref().map(TableComparison::identical).unwrap_or(true)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# {} at level {}\n\n", self.type_label, self.k);
        let c = &self.counts;
        s.push_str(&format!(
            "{} variables ({} exchangeable, {} frozen), {} clusters, {} relations\n\n",
            c.variables, c.exchangeable, c.frozen, c.clusters, c.relations
        ));
        s.push_str(&format!("{} KR variables: {} coefficients known, {} unknown\n\n", c.kr, c.known, c.unknown));
        for (n, it) in self.iterations.iter().enumerate() {
            s.push_str(&format!("- iteration {}: {} determined\n", n + 1, it.determined));
        }
        s.push_str(&format!(
            "\npositivity: {}, frozen units: {}, relations sound: {}, undetermined: {}\n",
            self.positivity,
            self.frozen_units,
            self.relations_sound,
            self.undetermined.len()
        ));
        if let Some(cert) = &self.certificate {
            s.push_str(&format!(
                "qdim positive: {}, qdim = 1 exactly on frozen: {}, non-frozen determinant units: {:?}\n",
                cert.qdim_positive, cert.qdim_one_iff_frozen, cert.nonfrozen_units
            ));
        }
        if let Some(t) = &self.table {
            s.push_str(&format!(
                "table: {} rows, unmatched {:?}, mismatched {:?}, KR indices agree: {}\n",
                t.rows, t.unmatched, t.mismatched, t.kr_indices_match
            ));
        }
        s.push_str("\n| id | table | label | image |\n|---|---|---|---|\n");
        for r in &self.images {
            let img = if r.coeffs.iter().all(Option::is_some) {
                VerlindeElement { coeffs: r.coeffs.iter().map(|c| c.unwrap()).collect() }.to_v_string()
            } else {
                "undetermined".into()
            };
            s.push_str(&format!(
                "| x{} | {} | {} | {} |\n",
                r.id,
                r.table_index.map(|i| format!("x{i}")).unwrap_or_default(),
                r.label.clone().unwrap_or_default(),
                img
            ));
        }
        s
    }
}

/// The cluster structure of `C_ell` with labels and KR classification.
pub struct ClusterContext {
    pub datum: Arc<CartanDatum>,
    pub grid: QDatumGrid,
    pub enumeration: Enumeration,
    pub kr: BTreeMap<usize, (usize, i64)>,
}

pub fn cluster_context(datum: Arc<CartanDatum>, ell: i64, height: &HeightChoice, limits: Limits) -> Result<ClusterContext> {
    let (seed, grid, reg) = build_initial_seed(&datum, ell, height)?;
    let mut enumeration = enumerate_finite(&seed, reg, limits)?;
    assign_labels(&datum, &grid, &mut enumeration.registry);
    let (kr, _) = detect_kr(&datum, &enumeration.registry);
    Ok(ClusterContext { datum, grid, enumeration, kr })
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub source: SeedSource,
    pub height: HeightChoice,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { source: SeedSource::Pipeline, height: HeightChoice::Default, limits: Limits::default() }
    }
}

/// The whole procedure for `C_{k-1}`: enumerate, seed KR images, propagate, certify, and
/// compare with the shipped table when one exists.
pub fn verify_type(datum: Arc<CartanDatum>, k: i64, opts: &VerifyOptions) -> Result<(VerifyReport, ClusterContext, ImageTable)> {
    if k < 2 {
        return Err(Error::Level { min: 2, got: k });
    }
    let ctx = cluster_context(datum.clone(), k - 1, &opts.height, opts.limits)?;
    let fusion = FusionRing::new(datum.clone(), k)?;
    let table_data = if k == 2 { cluster_table_for(&datum.ty.to_string())? } else { None };
    if let Some(t) = &table_data {
        if t.basis != fusion.basis[..t.basis.len().min(fusion.size())] || t.basis.len() != fusion.size() {
            return Err(Error::Schema {
                source_name: format!("cluster_table_{}", datum.ty),
                message: "basis does not match P_k^+ order".into(),
            });
        }
    }
    let branching = match opts.source {
        SeedSource::Data => None,
        _ => Some(branching_for(&datum)?),
    };
    let reg = &ctx.enumeration.registry;
    let mut table = seed_known_images(reg, &ctx.kr, &fusion, opts.source, branching.as_ref(), table_data.as_ref())?;
    let known0 = table.known_count();
    let unknown0 = table.unknown_count();
    let stats = propagate(&ctx.enumeration.relations, &mut table, &fusion)?;
    let undetermined = table.undetermined_vars();
    let frozen: BTreeSet<usize> = ctx.enumeration.frozen_ids().into_iter().collect();
    let (relations_sound, certificate) = if undetermined.is_empty() {
        let bad = check_relations(&ctx.enumeration.relations, &table, &fusion)?;
        (bad.is_empty(), Some(certify(&table, &fusion, &frozen)?))
    } else {
        (false, None)
    };

    let label_of = |id: usize| reg.get(id).label.clone();
    let mut index_of_id = BTreeMap::new();
    let comparison = table_data.as_ref().map(|t| {
        let mut unmatched = Vec::new();
        let mut mismatched = Vec::new();
        for row in &t.rows {
            let hits: Vec<usize> = (0..reg.len()).filter(|&i| label_of(i).as_ref() == Some(&row.monomial)).collect();
            if hits.len() != 1 {
                unmatched.push(row.index);
                continue;
            }
            index_of_id.insert(hits[0], row.index);
            let want = parse_v_image(&row.image, fusion.size()).ok();
            if want.as_ref().map(|w| w.iter().map(|&c| Some(c)).collect::<Vec<_>>()) != Some(table.coeffs[hits[0]].clone()) {
                mismatched.push(row.index);
            }
        }
        let detected: BTreeSet<usize> = ctx.kr.keys().filter_map(|id| index_of_id.get(id).copied()).collect();
        let stated: BTreeSet<usize> = t.kr_indices.iter().copied().collect();
        TableComparison {
            rows: t.rows.len(),
            unmatched,
            mismatched,
            kr_indices_match: detected == stated && ctx.kr.len() == stated.len(),
        }
    });

    let images = (0..reg.len())
        .map(|id| ImageRow {
            id: id + 1,
            label: label_of(id).map(|l| l.to_string()),
            coeffs: table.coeffs[id].clone(),
            table_index: index_of_id.get(&id).copied(),
            kr: ctx.kr.contains_key(&id),
        })
        .collect();
    let report = VerifyReport {
        type_label: datum.ty.to_string(),
        k,
        basis: fusion.basis.clone(),
        counts: Counts {
            variables: reg.len(),
            exchangeable: ctx.enumeration.n_exchangeable(),
            frozen: ctx.enumeration.n_frozen(),
            clusters: ctx.enumeration.clusters.len(),
            relations: ctx.enumeration.relations.len(),
            kr: ctx.kr.len(),
            known: known0,
            unknown: unknown0,
        },
        iterations: stats.into_iter().map(|determined| Iteration { determined }).collect(),
        images,
        undetermined: undetermined.iter().map(|i| i + 1).collect(),
        relations_sound,
        positivity: certificate.as_ref().map(|c| c.positivity).unwrap_or(false),
        frozen_units: certificate.as_ref().map(|c| c.frozen_units).unwrap_or(false),
        certificate,
        table: comparison,
    };
    Ok((report, ctx, table))
}
