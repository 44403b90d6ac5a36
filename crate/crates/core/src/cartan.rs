//! Cartan data for the finite types A–G and their untwisted affinizations.
//!
//! Nodes use Bourbaki numbering; the E-series is `1-3-4-5-6-7-8` with `2`
//! attached to `4`. Internally node `i` of the finite diagram lives at index
//! `i - 1`; affine vectors carry the extra node at index `0`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A finite Cartan type such as `E6`; the affine datum is always built alongside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::UnsupportedType(format!("{family:?}{rank}")))
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => {
                return Err(Error::Parse {
                    what: "Cartan type",
                    input: s.to_string(),
                })
            }
        };
        let rest: String = chars.collect();
        let rank = rest.trim_start_matches('_').parse().map_err(|_| Error::Parse {
            what: "Cartan type",
            input: s.to_string(),
        })?;
        CartanType::new(family, rank)
    }
}

/// Finite and affine root-system data. Immutable once built.
#[derive(Debug, Clone)]
pub struct CartanDatum {
    pub ty: CartanType,
    /// Finite Cartan matrix `a_{i,j} = <h_i, alpha_j>`, indices `0..n` for nodes `1..=n`.
    pub cartan: Vec<Vec<i64>>,
    /// Affine Cartan matrix, index 0 is the extra node.
    pub affine_cartan: Vec<Vec<i64>>,
    /// Marks `a_0..a_n` with `a_0 = 1`.
    pub marks: Vec<i64>,
    /// Comarks `a_0^v..a_n^v` with `a_0^v = 1`.
    pub comarks: Vec<i64>,
    pub coxeter_h: i64,
    pub dual_coxeter_hvee: i64,
    /// `(alpha_i|alpha_i)` normalized so long roots have norm 2.
    pub root_norms: Vec<Rational64>,
    /// `d_i` for each finite node, and `d = max d_i`.
    pub fold_degree: Vec<i64>,
    pub d: i64,
    /// `t_i = d / d_i`.
    pub t: Vec<i64>,
    /// `(varpi_i | varpi_j)`.
    pub gram: Vec<Vec<Rational64>>,
    /// Positive roots in simple-root coordinates, heights nondecreasing.
    pub positive_roots: Vec<Vec<i64>>,
    /// Positive roots in fundamental-weight coordinates (same order).
    pub positive_roots_weight: Vec<Vec<i64>>,
    /// `rho_bar` over the fundamental weights.
    pub rho_finite: Vec<i64>,
    /// Column `j` is `alpha_j` over the fundamental weights (the finite Cartan matrix, transposed view).
    pub simple_root_coords: Vec<Vec<i64>>,
    /// `gram * gram_scale` is integral.
    pub gram_scale: i64,
    pub gram_int: Vec<Vec<i64>>,
    /// Inverse of the finite Cartan matrix scaled by `inv_scale` to integers.
    inv_scale: i64,
    inv_int: Vec<Vec<i64>>,
    /// Nonzero entries `(j, a_{j,i})` of column `i` of the finite Cartan matrix.
    pub(crate) finite_cols: Vec<Vec<(usize, i64)>>,
    /// Same for the affine Cartan matrix.
    pub(crate) affine_cols: Vec<Vec<(usize, i64)>>,
}

struct FiniteShape {
    norms: Vec<Rational64>,
    /// `(i, j, (alpha_i|alpha_j))`, zero-based.
    bonds: Vec<(usize, usize, Rational64)>,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn finite_shape(ty: CartanType) -> FiniteShape {
    let n = ty.rank;
    let two = r(2, 1);
    let one = r(1, 1);
    let mut bonds = Vec::new();
    let norms;
    match ty.family {
        Family::A => {
            norms = vec![two; n];
            for i in 0..n.saturating_sub(1) {
                bonds.push((i, i + 1, -one));
            }
        }
        Family::B => {
            let mut v = vec![two; n];
            v[n - 1] = one;
            norms = v;
            for i in 0..n - 1 {
                bonds.push((i, i + 1, -one));
            }
        }
        Family::C => {
            let mut v = vec![one; n];
            v[n - 1] = two;
            norms = v;
            for i in 0..n - 2 {
                bonds.push((i, i + 1, r(-1, 2)));
            }
            bonds.push((n - 2, n - 1, -one));
        }
        Family::D => {
            norms = vec![two; n];
            for i in 0..n - 2 {
                bonds.push((i, i + 1, -one));
            }
            bonds.push((n - 3, n - 1, -one));
        }
        Family::E => {
            norms = vec![two; n];
            bonds.push((0, 2, -one));
            bonds.push((1, 3, -one));
            for i in 2..n - 1 {
                bonds.push((i, i + 1, -one));
            }
        }
        Family::F => {
            norms = vec![two, two, one, one];
            bonds.push((0, 1, -one));
            bonds.push((1, 2, -one));
            bonds.push((2, 3, r(-1, 2)));
        }
        Family::G => {
            norms = vec![r(2, 3), two];
            bonds.push((0, 1, -one));
        }
    }
    FiniteShape { norms, bonds }
}

/// Inverse of a square rational matrix by Gauss–Jordan.
pub(crate) fn invert(m: &[Vec<Rational64>]) -> Option<Vec<Vec<Rational64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m.to_vec();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[row][j] -= f * x;
                    inv[row][j] -= f * y;
                }
            }
        }
    }
    Some(inv)
}

fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a Rational64>) -> i64 {
    it.fold(1i64, |acc, x| acc.lcm(x.denom()))
}

/// Positive roots by closure of the simple roots under root strings.
fn closure_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // <beta, alpha_i^v> = sum_j beta_j a_{i,j}
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if seen.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
    roots
}

impl CartanDatum {
    pub fn build(ty: CartanType) -> Result<Self> {
        let ty = CartanType::new(ty.family, ty.rank)?;
        let n = ty.rank;
        let shape = finite_shape(ty);
        let mut sym = vec![vec![Rational64::zero(); n]; n];
        for i in 0..n {
            sym[i][i] = shape.norms[i];
        }
        for &(i, j, v) in &shape.bonds {
            sym[i][j] = v;
            sym[j][i] = v;
        }
        let to_int = |x: Rational64| -> i64 {
            assert!(x.is_integer(), "non-integral Cartan entry");
            x.to_integer()
        };
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| to_int(r(2, 1) * sym[i][j] / sym[i][i])).collect())
            .collect();

        let positive_roots = closure_positive_roots(&cartan);
        let theta = positive_roots.last().cloned().expect("nonempty root system");

        // (theta|alpha_j)
        let theta_dot: Vec<Rational64> = (0..n)
            .map(|j| (0..n).map(|i| sym[i][j] * theta[i]).fold(Rational64::zero(), |a, b| a + b))
            .collect();
        let mut asym = vec![vec![Rational64::zero(); n + 1]; n + 1];
        asym[0][0] = r(2, 1);
        for j in 0..n {
            asym[0][j + 1] = -theta_dot[j];
            asym[j + 1][0] = -theta_dot[j];
            for i in 0..n {
                asym[i + 1][j + 1] = sym[i][j];
            }
        }
        let affine_cartan: Vec<Vec<i64>> = (0..=n)
            .map(|i| (0..=n).map(|j| to_int(r(2, 1) * asym[i][j] / asym[i][i])).collect())
            .collect();

        let mut marks = vec![1i64];
        marks.extend(theta.iter().copied());
        let mut comarks = vec![1i64];
        for i in 0..n {
            comarks.push(to_int(shape.norms[i] * theta[i] / r(2, 1)));
        }
        let coxeter_h = marks.iter().sum();
        let dual_coxeter_hvee = comarks.iter().sum();

        let t: Vec<i64> = shape.norms.iter().map(|&x| to_int(r(2, 1) / x)).collect();
        let d = *t.iter().max().unwrap();
        let fold_degree: Vec<i64> = t.iter().map(|&ti| d / ti).collect();

        let cartan_q: Vec<Vec<Rational64>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        let inv = invert(&cartan_q).ok_or_else(|| Error::Internal("singular Cartan matrix".into()))?;
        let gram: Vec<Vec<Rational64>> = (0..n)
            .map(|i| (0..n).map(|j| inv[j][i] * shape.norms[j] / r(2, 1)).collect())
            .collect();
        let gram_scale = lcm_of_denominators(gram.iter().flatten());
        let gram_int = gram
            .iter()
            .map(|row| row.iter().map(|x| to_int(*x * gram_scale)).collect())
            .collect();
        let inv_scale = lcm_of_denominators(inv.iter().flatten());
        let inv_int = inv
            .iter()
            .map(|row| row.iter().map(|x| to_int(*x * inv_scale)).collect())
            .collect();

        let simple_root_coords: Vec<Vec<i64>> =
            (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
        let positive_roots_weight = positive_roots
            .iter()
            .map(|root| {
                (0..n)
                    .map(|i| (0..n).map(|j| cartan[i][j] * root[j]).sum())
                    .collect()
            })
            .collect();

        let cols = |m: &Vec<Vec<i64>>| -> Vec<Vec<(usize, i64)>> {
            (0..m.len())
                .map(|i| (0..m.len()).filter(|&j| m[j][i] != 0).map(|j| (j, m[j][i])).collect())
                .collect()
        };
        let finite_cols = cols(&cartan);
        let affine_cols = cols(&affine_cartan);

        Ok(CartanDatum {
            ty,
            cartan,
            affine_cartan,
            marks,
            comarks,
            coxeter_h,
            dual_coxeter_hvee,
            root_norms: shape.norms,
            fold_degree,
            d,
            t,
            gram,
            positive_roots,
            positive_roots_weight,
            rho_finite: vec![1; n],
            simple_root_coords,
            gram_scale,
            gram_int,
            inv_scale,
            inv_int,
            finite_cols,
            affine_cols,
        })
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    /// Highest root in simple-root coordinates.
    pub fn theta(&self) -> &[i64] {
        self.positive_roots.last().unwrap()
    }

    /// `(x|y)` for weights over the fundamental weights.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Rational64 {
        Rational64::new(self.bilinear_scaled(x, y), self.gram_scale)
    }

    /// `gram_scale * (x|y)`, exact integer.
    pub fn bilinear_scaled(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0;
            for j in 0..n {
                row += self.gram_int[i][j] * y[j];
            }
            s += x[i] * row;
        }
        s
    }

    /// `(x|alpha)` for `x` over the fundamental weights and `alpha` over the simple roots.
    pub fn pair_weight_root(&self, x: &[i64], alpha: &[i64]) -> Rational64 {
        let mut s = Rational64::zero();
        for j in 0..self.rank() {
            if alpha[j] != 0 {
                s += self.root_norms[j] * Rational64::from_integer(x[j] * alpha[j]) / 2;
            }
        }
        s
    }

    /// Expansion of a weight over the simple roots.
    pub fn to_root_coords(&self, x: &[i64]) -> Vec<Rational64> {
        let n = self.rank();
        // varpi_i = sum_k ((A^T)^{-1})_{ik} alpha_k = sum_k inv[k][i] alpha_k
        (0..n)
            .map(|k| {
                let s: i64 = (0..n).map(|i| self.inv_int[k][i] * x[i]).sum();
                Rational64::new(s, self.inv_scale)
            })
            .collect()
    }

    /// Height (sum of simple-root coordinates) scaled by an internal constant; order-compatible.
    pub fn height_scaled(&self, x: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for k in 0..n {
            for i in 0..n {
                s += self.inv_int[k][i] * x[i];
            }
        }
        s
    }

    /// Expansion of a root-lattice element over the fundamental weights.
    pub fn root_to_weight(&self, beta: &[i64]) -> Vec<i64> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.cartan[i][j] * beta[j]).sum())
            .collect()
    }

    /// Level of an affine weight `(c_0, ..., c_n)`.
    pub fn level(&self, c: &[i64]) -> i64 {
        c.iter().zip(&self.comarks).map(|(a, b)| a * b).sum()
    }

    /// Order of the finite Weyl group.
    pub fn weyl_order(&self) -> u128 {
        let n = self.rank() as u128;
        let fact = |m: u128| (1..=m).product::<u128>();
        match self.ty.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// Nodes adjacent to `i` in the finite diagram (zero-based).
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&j| j != i && self.cartan[i][j] != 0).collect()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.rank();
        let fail = |m: String| Err(Error::Internal(format!("{}: {m}", self.ty)));
        for i in 0..=n {
            let s: i64 = (0..=n).map(|j| self.affine_cartan[i][j] * self.marks[j]).sum();
            let t: i64 = (0..=n).map(|j| self.affine_cartan[j][i] * self.comarks[j]).sum();
            if s != 0 || t != 0 {
                return fail(format!("marks/comarks not in kernel at {i}"));
            }
        }
        if self.marks[0] != 1 || self.comarks[0] != 1 {
            return fail("a_0 normalization".into());
        }
        let theta_w = self.root_to_weight(self.theta());
        if self.bilinear(&theta_w, &theta_w) != Rational64::from_integer(2) {
            return fail("(theta|theta) != 2".into());
        }
        if (self.coxeter_h * n as i64) % 2 != 0
            || self.positive_roots.len() as i64 != self.coxeter_h * n as i64 / 2
        {
            return fail("positive root count".into());
        }
        for i in 0..n {
            let ai = &self.simple_root_coords[i];
            if Rational64::from_integer(self.t[i]) != Rational64::from_integer(2) / self.bilinear(ai, ai) {
                return fail(format!("t_{} mismatch", i + 1));
            }
            for j in 0..n {
                let aj = &self.simple_root_coords[j];
                let v = Rational64::from_integer(2) * self.bilinear(ai, aj) / self.bilinear(ai, ai);
                if v != Rational64::from_integer(self.cartan[i][j]) {
                    return fail(format!("<h_{}, alpha_{}> mismatch", i + 1, j + 1));
                }
            }
        }
        if !self.is_gram_positive_definite() {
            return fail("gram not positive definite".into());
        }
        Ok(())
    }

    fn is_gram_positive_definite(&self) -> bool {
        // Sylvester: leading principal minors via fraction-free elimination.
        let n = self.rank();
        let mut a = self.gram.clone();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return false;
            }
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    let v = a[k][j];
                    a[i][j] -= f * v;
                }
            }
        }
        true
    }
}

/// Convenience: parse and build in one go.
pub fn build_cartan(family: Family, rank: usize) -> Result<CartanDatum> {
    CartanDatum::build(CartanType::new(family, rank)?)
}

/// All types the engine catalogs, up to the given classical rank.
pub fn catalog(max_classical_rank: usize) -> Vec<CartanType> {
    let mut out = Vec::new();
    for n in 1..=max_classical_rank {
        out.push(CartanType { family: Family::A, rank: n });
    }
    for n in 2..=max_classical_rank {
        out.push(CartanType { family: Family::B, rank: n });
        out.push(CartanType { family: Family::C, rank: n });
    }
    for n in 4..=max_classical_rank {
        out.push(CartanType { family: Family::D, rank: n });
    }
    for n in 6..=8 {
        out.push(CartanType { family: Family::E, rank: n });
    }
    out.push(CartanType { family: Family::F, rank: 4 });
    out.push(CartanType { family: Family::G, rank: 2 });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(s: &str) -> CartanDatum {
        CartanDatum::build(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn whole_catalog_passes_invariants() {
        for ty in catalog(9) {
            let d = CartanDatum::build(ty).unwrap();
            d.check_invariants().unwrap();
        }
    }

    #[test]
    fn a1_affine_data() {
        let d = datum("A1");
        assert_eq!(d.coxeter_h, 2);
        assert_eq!(d.dual_coxeter_hvee, 2);
        assert_eq!(d.marks, vec![1, 1]);
        assert_eq!(d.affine_cartan, vec![vec![2, -2], vec![-2, 2]]);
    }

    #[test]
    fn e6_dual_coxeter_from_kernel() {
        // Kernel of the transposed affine matrix, computed independently by
        // solving A^T v = 0 with v_0 = 1 through rational elimination.
        let d = datum("E6");
        let n = d.affine_cartan.len();
        let mut m: Vec<Vec<Rational64>> = (1..n)
            .map(|i| (1..n).map(|j| Rational64::from_integer(d.affine_cartan[j][i])).collect())
            .collect();
        let rhs: Vec<Rational64> = (1..n).map(|i| Rational64::from_integer(-d.affine_cartan[0][i])).collect();
        let inv = invert(&m).unwrap();
        let v: Vec<Rational64> = (0..n - 1)
            .map(|i| (0..n - 1).map(|j| inv[i][j] * rhs[j]).fold(Rational64::zero(), |a, b| a + b))
            .collect();
        let sum = v.iter().fold(Rational64::one(), |a, b| a + b);
        assert_eq!(sum, Rational64::from_integer(12));
        assert_eq!(d.dual_coxeter_hvee, 12);
        m.clear();
    }

    #[test]
    fn b3_fold_degrees() {
        let d = datum("B3");
        assert_eq!(d.d, 2);
        assert_eq!(d.fold_degree, vec![2, 2, 1]);
        assert_eq!(d.t, vec![1, 1, 2]);
        assert_eq!(d.comarks, vec![1, 1, 2, 1]);
        assert_eq!(d.dual_coxeter_hvee, 5);
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(datum("A2").positive_roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(datum("B3").positive_roots.len(), 9);
        assert_eq!(datum("E8").positive_roots.len(), 120);
        assert_eq!(datum("G2").positive_roots.len(), 6);
    }

    #[test]
    fn bilinear_values() {
        let a1 = datum("A1");
        assert_eq!(a1.bilinear(&[1], &[1]), Rational64::new(1, 2));
        let a2 = datum("A2");
        assert_eq!(a2.bilinear(&[1, 0], &[0, 1]), Rational64::new(1, 3));
        for ty in ["A3", "B4", "C3", "D5", "E7", "F4", "G2"] {
            let d = datum(ty);
            let th = d.root_to_weight(d.theta());
            assert_eq!(d.bilinear(&th, &th), Rational64::from_integer(2), "{ty}");
        }
    }

    #[test]
    fn affine_matrices_have_corank_one() {
        for ty in catalog(6) {
            let d = CartanDatum::build(ty).unwrap();
            let n = d.rank();
            let q: Vec<Vec<Rational64>> = d
                .affine_cartan
                .iter()
                .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
                .collect();
            assert!(invert(&q).is_none(), "{ty} affine matrix must be singular");
            let fin: Vec<Vec<Rational64>> = (1..=n).map(|i| q[i][1..].to_vec()).collect();
            assert!(invert(&fin).is_some());
        }
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!("E9".parse::<CartanType>().is_err());
        assert!("D3".parse::<CartanType>().is_err());
        assert!("B1".parse::<CartanType>().is_err());
        assert!("X2".parse::<CartanType>().is_err());
    }
}
