//! Cluster algebras: exchange matrices, mutation, finite-type enumeration and
//! the initial seeds of the categories `C_ell` built from a Q-datum.

mod enumerate;
mod export;
mod laurent;
mod qdatum;
mod registry;

pub use enumerate::{assign_labels, detect_kr, enumerate_finite, leading_label, Enumeration, Limits};
pub use export::{import_registry, import_relations, quiver_to_dot, registry_to_json, relations_to_text, RegistryEntry};
pub use laurent::LaurentPoly;
pub use qdatum::{build_initial_seed, default_height, unfolding, HeightChoice, QDatumGrid, Unfolding, YMonomial};
pub use registry::{ClusterVariable, VariableRegistry};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::determinant;

/// Skew-symmetric integer matrix over all vertices, with a frozen flag per vertex.
/// Entries between two frozen vertices are kept but play no role in mutation of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    pub n: usize,
    pub frozen: Vec<bool>,
    entries: Vec<i32>,
}

impl ExchangeMatrix {
    pub fn zero(frozen: Vec<bool>) -> Self {
        let n = frozen.len();
        ExchangeMatrix { n, frozen, entries: vec![0; n * n] }
    }

    /// From a dense matrix; the principal part must be skew-symmetric.
    pub fn from_rows(rows: &[Vec<i32>], frozen: Vec<bool>) -> Result<Self> {
        let n = frozen.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Internal("exchange matrix must be square".into()));
        }
        let mut m = Self::zero(frozen);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = rows[i][j];
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !(m.frozen[i] && m.frozen[j]) && m.get(i, j) != -m.get(j, i) {
                    return Err(Error::Internal(format!("entries ({i},{j}) and ({j},{i}) are not skew")));
                }
            }
        }
        Ok(m)
    }

    /// A quiver on `n` vertices; parallel arrows add up.
    pub fn from_arrows(frozen: Vec<bool>, arrows: &[(usize, usize)]) -> Self {
        let mut m = Self::zero(frozen);
        for &(a, b) in arrows {
            m.add_arrow(a, b);
        }
        m
    }

    pub fn add_arrow(&mut self, a: usize, b: usize) {
        let n = self.n;
        self.entries[a * n + b] += 1;
        self.entries[b * n + a] -= 1;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.entries[i * self.n + j]
    }

    pub fn exchangeable(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.frozen[i]).collect()
    }

    /// Arrows `i -> j` with multiplicity, optionally dropping frozen-to-frozen ones.
    pub fn arrows(&self, include_frozen_pairs: bool) -> Vec<(usize, usize, i32)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let b = self.get(i, j);
                if b > 0 && (include_frozen_pairs || !(self.frozen[i] && self.frozen[j])) {
                    out.push((i, j, b));
                }
            }
        }
        out
    }

    /// Matrix mutation at an exchangeable index.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        if k >= self.n || self.frozen[k] {
            return Err(Error::NotExchangeable(k));
        }
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            let bik = self.get(i, k);
            for j in 0..n {
                let v = if i == k || j == k {
                    -self.get(i, j)
                } else {
                    let prod = bik * self.get(k, j);
                    if prod > 0 {
                        self.get(i, j) + bik.signum() * prod
                    } else {
                        self.get(i, j)
                    }
                };
                out.entries[i * n + j] = v;
            }
        }
        Ok(out)
    }
}

/// A cluster together with its exchange matrix; `vars[i]` is a registry id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub matrix: ExchangeMatrix,
    pub vars: Vec<usize>,
}

impl Seed {
    /// Sorted exchangeable ids: the identity of the cluster.
    pub fn cluster_key(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.matrix.exchangeable().into_iter().map(|i| self.vars[i]).collect();
        v.sort_unstable();
        v
    }
}

/// `left.0 * left.1 = prod(right[0]) + prod(right[1])` over registry ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExchangeRelation {
    pub left: (usize, usize),
    pub right: [Vec<usize>; 2],
}

impl ExchangeRelation {
    pub fn canonical(a: usize, b: usize, mut m1: Vec<usize>, mut m2: Vec<usize>) -> Self {
        m1.sort_unstable();
        m2.sort_unstable();
        if m2 < m1 {
            std::mem::swap(&mut m1, &mut m2);
        }
        ExchangeRelation { left: (a.min(b), a.max(b)), right: [m1, m2] }
    }

    /// Every id mentioned by the relation.
    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        [self.left.0, self.left.1].into_iter().chain(self.right.iter().flatten().copied())
    }

    /// Exact check with the registry's Laurent polynomials.
    pub fn holds(&self, reg: &VariableRegistry) -> Result<bool> {
        let l = reg.get(self.left.0).laurent.mul(&reg.get(self.left.1).laurent)?;
        let mut r = LaurentPoly::zero(reg.n_initial());
        for mono in &self.right {
            let mut p = LaurentPoly::one(reg.n_initial());
            for &id in mono {
                p = p.mul(&reg.get(id).laurent)?;
            }
            r = r.add(&p)?;
        }
        Ok(l == r)
    }
}

/// `mu_k`: the mutated seed and the emitted exchange relation. New variables are
/// added to the registry.
pub fn mutate(seed: &Seed, k: usize, reg: &mut VariableRegistry) -> Result<(Seed, ExchangeRelation)> {
    let b = &seed.matrix;
    if k >= b.n || b.frozen[k] {
        return Err(Error::NotExchangeable(k));
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in 0..b.n {
        let bik = b.get(i, k);
        let target = if bik > 0 { &mut pos } else { &mut neg };
        for _ in 0..bik.unsigned_abs() {
            target.push(seed.vars[i]);
        }
    }
    let xk = seed.vars[k];
    let new_id = reg.exchange(xk, &pos, &neg)?;
    let mut vars = seed.vars.clone();
    vars[k] = new_id;
    let rel = ExchangeRelation::canonical(xk, new_id, pos, neg);
    Ok((Seed { matrix: b.mutate(k)?, vars }, rel))
}

/// `C(B)` on the exchangeable indices: 2 on the diagonal, `-|b_ij|` off it.
pub fn cartan_counterpart(m: &ExchangeMatrix) -> Vec<Vec<i64>> {
    let ex = m.exchangeable();
    ex.iter()
        .map(|&i| ex.iter().map(|&j| if i == j { 2 } else { -(m.get(i, j).abs() as i64) }).collect())
        .collect()
}

/// Whether a generalized Cartan matrix is of finite type (every component positive definite
/// after symmetrization).
pub fn is_finite_cartan(c: &[Vec<i64>]) -> bool {
    let n = c.len();
    if n == 0 {
        return true;
    }
    // symmetrizer by propagation along edges; rational entries kept as (num, den)
    let mut sym: Vec<Option<(i64, i64)>> = vec![None; n];
    for start in 0..n {
        if sym[start].is_some() {
            continue;
        }
        sym[start] = Some((1, 1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (p, q) = sym[i].unwrap();
            for j in 0..n {
                if j == i || c[i][j] == 0 {
                    continue;
                }
                if c[j][i] == 0 {
                    return false;
                }
                // d_j c_ji = d_i c_ij
                let (np, nq) = (p * c[i][j], q * c[j][i]);
                let g = num_integer::gcd(np, nq);
                let cand = (np / g * nq.signum(), (nq / g).abs());
                match sym[j] {
                    None => {
                        sym[j] = Some(cand);
                        stack.push(j);
                    }
                    Some(old) => {
                        if old.0 * cand.1 != cand.0 * old.1 {
                            return false;
                        }
                    }
                }
            }
        }
    }
    let lcm = sym.iter().fold(1i64, |acc, s| num_integer::lcm(acc, s.unwrap().1));
    let d: Vec<i64> = sym.iter().map(|s| s.unwrap().0 * (lcm / s.unwrap().1)).collect();
    if d.iter().any(|&x| x <= 0) {
        return false;
    }
    let s: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| d[i] * c[i][j]).collect()).collect();
    (1..=n).all(|m| {
        let minor: Vec<Vec<i64>> = s[..m].iter().map(|r| r[..m].to_vec()).collect();
        determinant(&minor) > 0.into()
    })
}

/// Heuristic gate: the counterpart of the given matrix is of finite type.
pub fn classify_finite(m: &ExchangeMatrix) -> bool {
    is_finite_cartan(&cartan_counterpart(m))
}

/// Connected components of the principal part and their Dynkin types, when the
/// counterpart is a simply-laced finite Cartan matrix.
pub fn principal_components(m: &ExchangeMatrix) -> Option<Vec<String>> {
    let c = cartan_counterpart(m);
    if !is_finite_cartan(&c) {
        return None;
    }
    let n = c.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut idx = 0;
        while idx < comp.len() {
            let i = comp[idx];
            idx += 1;
            for j in 0..n {
                if !seen[j] && c[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
        }
        if comp.iter().any(|&i| comp.iter().any(|&j| c[i][j] < -1)) {
            out.push(format!("non-simply-laced rank {}", comp.len()));
            continue;
        }
        let deg = |i: usize| comp.iter().filter(|&&j| j != i && c[i][j] != 0).count();
        let r = comp.len();
        let Some(branch) = comp.iter().copied().find(|&i| deg(i) == 3) else {
            out.push(format!("A{r}"));
            continue;
        };
        // arm lengths from the branch node
        let mut arms = Vec::new();
        for &nb in comp.iter().filter(|&&j| j != branch && c[branch][j] != 0) {
            let (mut prev, mut cur, mut len) = (branch, nb, 1);
            loop {
                let next = comp.iter().copied().find(|&j| j != prev && j != cur && c[cur][j] != 0);
                match next {
                    Some(nx) => {
                        prev = cur;
                        cur = nx;
                        len += 1;
                    }
                    None => break,
                }
            }
            arms.push(len);
        }
        arms.sort_unstable();
        out.push(match arms.as_slice() {
            [1, 1, _] => format!("D{r}"),
            [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => format!("E{r}"),
            _ => format!("unknown rank {r}"),
        });
    }
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_counterpart() {
        let m = ExchangeMatrix::from_arrows(vec![false, false], &[(0, 1)]);
        assert_eq!(cartan_counterpart(&m), vec![vec![2, -1], vec![-1, 2]]);
        assert!(classify_finite(&m));
        assert_eq!(principal_components(&m).unwrap(), vec!["A2".to_string()]);
    }

    #[test]
    fn markov_is_not_finite() {
        let m = ExchangeMatrix::from_arrows(
            vec![false; 3],
            &[(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)],
        );
        assert!(!classify_finite(&m));
        assert_eq!(m.mutate(0).unwrap().arrows(true).len(), 3);
    }

    #[test]
    fn matrix_mutation_is_involutive() {
        let m = ExchangeMatrix::from_arrows(vec![false, false, false, true], &[(0, 1), (1, 2), (2, 0), (3, 1)]);
        for k in 0..3 {
            assert_eq!(m.mutate(k).unwrap().mutate(k).unwrap(), m);
        }
        assert!(m.mutate(3).is_err());
    }

    #[test]
    fn non_simply_laced_finite() {
        assert!(is_finite_cartan(&[vec![2, -1], vec![-2, 2]]));
        assert!(is_finite_cartan(&[vec![2, -1], vec![-3, 2]]));
        assert!(!is_finite_cartan(&[vec![2, -2], vec![-2, 2]]));
        assert!(!is_finite_cartan(&[vec![2, -1], vec![-4, 2]]));
    }
}
