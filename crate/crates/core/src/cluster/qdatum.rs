//! Q-data, the vertex sets `sigma_ell` and the Kirillov–Reshetikhin initial seeds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::registry::VariableRegistry;
use super::{ExchangeMatrix, Seed};
use crate::cartan::{CartanDatum, CartanType, Family};
use crate::error::{Error, Result};

/// A monomial in the variables `Y_{i,p}` (node `i` is 1-based over `I_0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct YMonomial(pub BTreeMap<(usize, i64), i64>);

impl YMonomial {
    pub fn one() -> Self {
        YMonomial(BTreeMap::new())
    }

    pub fn mul_pow(&mut self, other: &YMonomial, e: i64) {
        for (&k, &v) in &other.0 {
            let slot = self.0.entry(k).or_insert(0);
            *slot += v * e;
            if *slot == 0 {
                self.0.remove(&k);
            }
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.0.values().all(|&e| e > 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    /// Finite weight: `sum u_{i,p} varpi_i`.
    pub fn weight(&self, rank: usize) -> Vec<i64> {
        let mut w = vec![0; rank];
        for (&(i, _), &e) in &self.0 {
            w[i - 1] += e;
        }
        w
    }

    /// `(i, m)` when the monomial is `Y_{i,p} Y_{i,p+2s} ... Y_{i,p+2(m-1)s}` with spacing `2s`.
    pub fn kr_shape(&self, spacing: impl Fn(usize) -> i64) -> Option<(usize, i64)> {
        let first = self.0.keys().next()?;
        let i = first.0;
        if self.0.keys().any(|k| k.0 != i) || self.0.values().any(|&e| e != 1) {
            return None;
        }
        let ps: Vec<i64> = self.0.keys().map(|k| k.1).collect();
        let step = 2 * spacing(i);
        ps.windows(2).all(|w| w[1] - w[0] == step).then_some((i, ps.len() as i64))
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (&(i, p), &e) in &self.0 {
            if e > 0 && e <= 3 {
                for _ in 0..e {
                    write!(f, "Y_{{{i},{p}}}")?;
                }
            } else {
                write!(f, "Y_{{{i},{p}}}^{{{e}}}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for YMonomial {
    type Err = Error;

    /// `Y_{i,p}` tokens with optional `^e` (or `^{e}`), whitespace-insensitive; `1` is the empty monomial.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "Y-monomial", input: s.to_string() };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut m = YMonomial::one();
        if t == "1" {
            return Ok(m);
        }
        if t.is_empty() {
            return Err(bad());
        }
        let mut rest = t.as_str();
        while !rest.is_empty() {
            rest = rest.strip_prefix("Y_{").ok_or_else(bad)?;
            let close = rest.find('}').ok_or_else(bad)?;
            let (i, p) = rest[..close].split_once(',').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let p: i64 = p.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            rest = &rest[close + 1..];
            let mut e = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let (digits, tail) = if let Some(r) = r.strip_prefix('{') {
                    let c = r.find('}').ok_or_else(bad)?;
                    (&r[..c], &r[c + 1..])
                } else {
                    let c = r.find(|ch: char| !(ch.is_ascii_digit() || ch == '-')).unwrap_or(r.len());
                    (&r[..c], &r[c..])
                };
                e = digits.parse().map_err(|_| bad())?;
                rest = tail;
            }
            let mut single = BTreeMap::new();
            single.insert((i, p), 1);
            m.mul_pow(&YMonomial(single), e);
        }
        Ok(m)
    }
}

impl From<YMonomial> for String {
    fn from(m: YMonomial) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for YMonomial {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// The simply-laced diagram `g_fin` with the folding `pi: I_fin -> I_0`.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub fin: CartanDatum,
    /// zero-based `pi`
    pub pi: Vec<usize>,
}

/// `A_{2n-1} -> B_n`, `D_{n+1} -> C_n`, `E_6 -> F_4`, `D_4 -> G_2`; identity on ADE.
pub fn unfolding(datum: &CartanDatum) -> Result<Unfolding> {
    let n = datum.rank();
    let (fin_ty, pi): (CartanType, Vec<usize>) = match datum.ty.family {
        Family::A | Family::D | Family::E => (datum.ty, (0..n).collect()),
        Family::B => (
            CartanType::new(Family::A, 2 * n - 1)?,
            (1..2 * n).map(|i| i.min(2 * n - i) - 1).collect(),
        ),
        // D_3 is A_3 with the branch node in the middle
        Family::C if n == 2 => (CartanType::new(Family::A, 3)?, vec![1, 0, 1]),
        Family::C => (
            CartanType::new(Family::D, n + 1)?,
            (1..=n + 1).map(|i| i.min(n) - 1).collect(),
        ),
        Family::F => (CartanType::new(Family::E, 6)?, vec![0, 3, 1, 2, 1, 0]),
        Family::G => (CartanType::new(Family::D, 4)?, vec![1, 0, 1, 1]),
    };
    let fin = CartanDatum::build(fin_ty)?;
    for i in 0..n {
        let size = pi.iter().filter(|&&p| p == i).count() as i64;
        if size != datum.fold_degree[i] {
            return Err(Error::Internal(format!("fold of node {} has size {size}", i + 1)));
        }
    }
    Ok(Unfolding { fin, pi })
}

/// The height function used for the finite-type computations; ADE only.
pub fn default_height(datum: &CartanDatum) -> Result<Vec<i64>> {
    let n = datum.rank() as i64;
    match datum.ty.family {
        Family::A => Ok((1..=n).map(|i| 2 - i).collect()),
        Family::D => Ok((1..=n).map(|i| if i < n { i - 2 } else { n - 3 }).collect()),
        Family::E => Ok((1..=n)
            .map(|i| match i {
                1 => -1,
                2 => 2,
                3 => 0,
                _ => i - 3,
            })
            .collect()),
        _ => Err(Error::Height(format!("no default height function for {}; pass one explicitly", datum.ty))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightChoice {
    Default,
    Explicit(Vec<i64>),
}

/// Vertex data of the initial seed of `C_ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDatumGrid {
    pub type_label: String,
    pub ell: i64,
    /// `xi` over `I_fin` (zero-based index)
    pub height: Vec<i64>,
    /// zero-based `pi`
    pub pi: Vec<usize>,
    /// `d_i` over `I_fin`
    pub d_fin: Vec<i64>,
    pub d: i64,
    /// `(i, p)` over `I_fin` (1-based node) in vertex order
    pub points: Vec<(usize, i64)>,
    pub frozen: Vec<bool>,
    /// `z_{i,p}` per vertex
    pub labels: Vec<YMonomial>,
}

impl QDatumGrid {
    pub fn vertex_of(&self, node: usize, p: i64) -> Option<usize> {
        self.points.iter().position(|&x| x == (node, p))
    }

    /// `"(i,p)"` names in vertex order.
    pub fn vertex_names(&self) -> Vec<String> {
        self.points.iter().map(|(i, p)| format!("({i},{p})")).collect()
    }
}

fn check_height(u: &Unfolding, d_fin: &[i64], xi: &[i64]) -> Result<()> {
    let m = u.fin.rank();
    if xi.len() != m {
        return Err(Error::Height(format!("expected {m} values, got {}", xi.len())));
    }
    for a in 0..m {
        for b in u.fin.neighbors(a) {
            let need = d_fin[a].min(d_fin[b]);
            if (xi[a] - xi[b]).abs() != need {
                return Err(Error::Height(format!(
                    "adjacent nodes {} and {} need |xi difference| = {need}, got {}",
                    a + 1,
                    b + 1,
                    (xi[a] - xi[b]).abs()
                )));
            }
        }
    }
    Ok(())
}

/// The KR initial seed of `C_ell` with its registry of initial variables.
pub fn build_initial_seed(
    datum: &CartanDatum,
    ell: i64,
    height: &HeightChoice,
) -> Result<(Seed, QDatumGrid, VariableRegistry)> {
    if ell < 1 {
        return Err(Error::Level { min: 1, got: ell });
    }
    let u = unfolding(datum)?;
    let m = u.fin.rank();
    let d_fin: Vec<i64> = u.pi.iter().map(|&i| datum.fold_degree[i]).collect();
    let xi = match height {
        HeightChoice::Default => default_height(datum)?,
        HeightChoice::Explicit(v) => v.clone(),
    };
    check_height(&u, &d_fin, &xi)?;
    let big_d = datum.d;

    let mut nodes: Vec<usize> = (0..m).collect();
    nodes.sort_by_key(|&a| (xi[a], a));
    let mut points = Vec::new();
    let mut frozen = Vec::new();
    let mut labels = Vec::new();
    for &a in &nodes {
        let lo = xi[a] - 2 * big_d * ell - 2 * (big_d - 1);
        let step = 2 * d_fin[a];
        let mut p = xi[a];
        let mut col = Vec::new();
        while p >= lo {
            col.push(p);
            p -= step;
        }
        let pmin = *col.last().expect("every node has a vertex");
        for &p in &col {
            points.push((a + 1, p));
            frozen.push(p == pmin);
            let mut z = BTreeMap::new();
            let mut q = p;
            while q <= xi[a] {
                z.insert((u.pi[a] + 1, q), 1);
                q += step;
            }
            labels.push(YMonomial(z));
        }
    }

    let mut matrix = ExchangeMatrix::zero(frozen.clone());
    for (va, &(a, r)) in points.iter().enumerate() {
        for (vb, &(b, s)) in points.iter().enumerate() {
            let aij = datum.cartan[u.pi[a - 1]][u.pi[b - 1]];
            if aij != 0 && s == r + d_fin[a - 1] * aij + d_fin[b - 1] - d_fin[a - 1] {
                matrix.add_arrow(va, vb);
            }
        }
    }
    let registry = VariableRegistry::new(&frozen, labels.iter().cloned().map(Some).collect());
    let seed = Seed { matrix, vars: (0..points.len()).collect() };
    let grid = QDatumGrid {
        type_label: datum.ty.to_string(),
        ell,
        height: xi,
        pi: u.pi,
        d_fin,
        d: big_d,
        points,
        frozen,
        labels,
    };
    Ok((seed, grid, registry))
}
