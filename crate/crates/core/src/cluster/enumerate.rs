//! Breadth-first closure of a seed's mutation class, with exchange-relation capture.

use std::collections::{BTreeMap, HashSet, VecDeque};

use super::qdatum::{QDatumGrid, YMonomial};
use super::registry::VariableRegistry;
use super::{mutate, ExchangeMatrix, ExchangeRelation, Seed};
use crate::cartan::CartanDatum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_seeds: usize,
    pub max_vars: usize,
    /// Mutate exchangeable indices in decreasing order instead of increasing.
    pub reverse_order: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_seeds: 200_000, max_vars: 1_000, reverse_order: false }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub registry: VariableRegistry,
    pub relations: Vec<ExchangeRelation>,
    /// Sorted exchangeable ids of every cluster, in discovery order.
    pub clusters: Vec<Vec<usize>>,
    pub initial: Seed,
}

impl Enumeration {
    pub fn n_frozen(&self) -> usize {
        self.registry.variables().iter().filter(|v| v.frozen).count()
    }

    pub fn n_exchangeable(&self) -> usize {
        self.registry.len() - self.n_frozen()
    }

    pub fn frozen_ids(&self) -> Vec<usize> {
        (0..self.registry.len()).filter(|&i| self.registry.get(i).frozen).collect()
    }
}

/// Every seed of a finite-type cluster algebra has `|b_ij b_ji| <= 3` on its principal part.
fn check_two_finite(m: &ExchangeMatrix) -> Result<()> {
    let ex = m.exchangeable();
    for (a, &i) in ex.iter().enumerate() {
        for &j in &ex[a + 1..] {
            let product = (m.get(i, j) as i64 * m.get(j, i) as i64).abs();
            if product > 3 {
                return Err(Error::InfiniteType { i: i + 1, j: j + 1, product });
            }
        }
    }
    Ok(())
}

/// Enumerate all clusters reachable from `seed`; fails on a seed that rules out finite type,
/// or once a limit is exceeded.
pub fn enumerate_finite(seed: &Seed, registry: VariableRegistry, limits: Limits) -> Result<Enumeration> {
    check_two_finite(&seed.matrix)?;
    let mut reg = registry;
    let mut order = seed.matrix.exchangeable();
    if limits.reverse_order {
        order.reverse();
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut clusters = Vec::new();
    let mut rel_seen: HashSet<ExchangeRelation> = HashSet::new();
    let mut relations = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.cluster_key());
    clusters.push(seed.cluster_key());
    queue.push_back(seed.clone());
    while let Some(s) = queue.pop_front() {
        for &k in &order {
            let (next, rel) = mutate(&s, k, &mut reg)?;
            if reg.len() > limits.max_vars {
                return Err(Error::LimitExceeded { what: "variable", bound: limits.max_vars });
            }
            if rel_seen.insert(rel.clone()) {
                relations.push(rel);
            }
            let key = next.cluster_key();
            if seen.insert(key.clone()) {
                check_two_finite(&next.matrix)?;
                if seen.len() > limits.max_seeds {
                    return Err(Error::LimitExceeded { what: "seed", bound: limits.max_seeds });
                }
                clusters.push(key);
                queue.push_back(next);
            }
        }
    }
    Ok(Enumeration { registry: reg, relations, clusters, initial: seed.clone() })
}

/// Dominant monomial of a variable from its Laurent expansion: the term of highest weight,
/// with every initial variable replaced by its label.
pub fn leading_label(datum: &CartanDatum, grid: &QDatumGrid, exps: &[(&Vec<i32>, i128)]) -> Option<YMonomial> {
    let n = datum.rank();
    let weights: Vec<Vec<i64>> = grid.labels.iter().map(|z| z.weight(n)).collect();
    let mut best: Option<(i64, &Vec<i32>)> = None;
    let mut tie = false;
    for (e, _) in exps {
        let mut w = vec![0i64; n];
        for (v, &k) in e.iter().enumerate() {
            if k != 0 {
                for i in 0..n {
                    w[i] += k as i64 * weights[v][i];
                }
            }
        }
        let h = datum.height_scaled(&w);
        match best {
            Some((bh, _)) if h < bh => {}
            Some((bh, _)) if h == bh => tie = true,
            _ => {
                best = Some((h, e));
                tie = false;
            }
        }
    }
    if tie {
        return None;
    }
    let (_, e) = best?;
    let mut m = YMonomial::one();
    for (v, &k) in e.iter().enumerate() {
        if k != 0 {
            m.mul_pow(&grid.labels[v], k as i64);
        }
    }
    m.is_dominant().then_some(m)
}

/// Label every unlabeled variable by its leading term.
pub fn assign_labels(datum: &CartanDatum, grid: &QDatumGrid, reg: &mut VariableRegistry) {
    for id in 0..reg.len() {
        if reg.get(id).label.is_some() {
            continue;
        }
        let terms: Vec<(&Vec<i32>, i128)> = reg.get(id).laurent.terms.iter().map(|(e, c)| (e, *c)).collect();
        let label = leading_label(datum, grid, &terms);
        reg.set_label(id, label);
    }
}

/// KR variables: labels of the form `Y_{i,p} Y_{i,p+2d_i} ... `; returns `(i, m)` per id.
/// Unlabeled ids are listed separately.
pub fn detect_kr(datum: &CartanDatum, reg: &VariableRegistry) -> (BTreeMap<usize, (usize, i64)>, Vec<usize>) {
    let mut kr = BTreeMap::new();
    let mut unlabeled = Vec::new();
    for id in 0..reg.len() {
        match &reg.get(id).label {
            None => unlabeled.push(id),
            Some(m) => {
                if let Some(im) = m.kr_shape(|i| datum.fold_degree[i - 1]) {
                    kr.insert(id, im);
                }
            }
        }
    }
    (kr, unlabeled)
}
