//! The Verlinde ring at level k: Kac–Walton fusion, quantum dimensions, units,
//! and the numeric modular S-matrix used as an independent check.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::repring::{RepRing, RepRingElement};
use crate::weyl::{alcove_project, enumerate_pk_plus, finite_reflect, AlcoveResult};

/// Default feasibility bound on `|W_0|` for the S-matrix.
pub const S_MATRIX_GATE: u128 = 10_000_000;

/// Integer combination of `[L(lambda)]`, `lambda` in `P_k^+`, stored densely in basis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerlindeElement {
    pub coeffs: Vec<i64>,
}

impl VerlindeElement {
    pub fn zero(size: usize) -> Self {
        VerlindeElement { coeffs: vec![0; size] }
    }

    pub fn basis(size: usize, idx: usize) -> Self {
        let mut v = Self::zero(size);
        v.coeffs[idx] = 1;
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero with every coefficient non-negative.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        VerlindeElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VerlindeElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        VerlindeElement {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `V_0 + 2 V_5` style rendering over the basis indices.
    pub fn to_v_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("V_{i}")),
                -1 => parts.push(format!("-V_{i}")),
                _ => parts.push(format!("{c} V_{i}")),
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Numeric modular S-matrix with rows and columns in `P_k^+` order.
#[derive(Debug, Clone)]
pub struct SMatrix {
    pub labels: Vec<Vec<i64>>,
    pub entries: Vec<Vec<Complex64>>,
    /// Modulus of the factor that was divided out to normalize the matrix.
    pub normalization: f64,
}

impl SMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn max_symmetry_defect(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[i][j] - self.entries[j][i]).norm());
            }
        }
        worst
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut re = CompensatedSum::default();
                let mut im = CompensatedSum::default();
                for l in 0..n {
                    let z = self.entries[i][l] * self.entries[j][l].conj();
                    re.add(z.re);
                    im.add(z.im);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(Complex64::new(re.value() - target, im.value()).norm());
            }
        }
        worst
    }
}

/// Result of a fusion-ring construction: basis, lookup, and lazily computed structure constants.
pub struct FusionRing {
    datum: Arc<CartanDatum>,
    rep: Arc<RepRing>,
    pub k: i64,
    pub basis: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    products: Mutex<HashMap<(usize, usize), Arc<Vec<i64>>>>,
    table: OnceLock<Vec<Vec<Vec<i64>>>>,
}

impl FusionRing {
    pub fn new(datum: Arc<CartanDatum>, k: i64) -> Result<Self> {
        let rep = Arc::new(RepRing::new(datum.clone()));
        Self::with_rep(rep, k)
    }

    pub fn with_rep(rep: Arc<RepRing>, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Level { min: 1, got: k });
        }
        let datum = Arc::new(rep.datum().clone());
        let basis = enumerate_pk_plus(&datum, k);
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        Ok(FusionRing {
            datum,
            rep,
            k,
            basis,
            index,
            products: Mutex::new(HashMap::new()),
            table: OnceLock::new(),
        })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn rep(&self) -> &Arc<RepRing> {
        &self.rep
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, lam: &[i64]) -> Result<usize> {
        self.index.get(lam).copied().ok_or_else(|| {
            let level = if lam.len() == self.datum.rank() + 1 { self.datum.level(lam) } else { -1 };
            if lam.len() != self.datum.rank() + 1 {
                Error::WeightLength {
                    weight: lam.to_vec(),
                    got: lam.len(),
                    expected: self.datum.rank() + 1,
                }
            } else if level != self.k {
                Error::LevelMismatch {
                    weight: lam.to_vec(),
                    got: level,
                    expected: self.k,
                }
            } else {
                Error::NotDominant(lam.to_vec())
            }
        })
    }

    pub fn one(&self) -> VerlindeElement {
        VerlindeElement::basis(self.size(), 0)
    }

    pub fn element_from(&self, pairs: &[(Vec<i64>, i64)]) -> Result<VerlindeElement> {
        let mut v = VerlindeElement::zero(self.size());
        for (lam, c) in pairs {
            v.coeffs[self.index_of(lam)?] += c;
        }
        Ok(v)
    }

    /// Signed image of a single finite weight under `pi_k`, as `(sign, basis index)`.
    pub fn project(&self, w: &[i64]) -> Result<Option<(i64, usize)>> {
        match alcove_project(&self.datum, w, self.k)? {
            AlcoveResult::Null => Ok(None),
            AlcoveResult::Signed { sign, weight } => Ok(Some((sign as i64, self.index_of(&weight)?))),
        }
    }

    /// `pi_k` applied termwise to a representation-ring class.
    pub fn phi_image(&self, r: &RepRingElement) -> Result<VerlindeElement> {
        let mut v = VerlindeElement::zero(self.size());
        for (lam, c) in &r.terms {
            if let Some((s, idx)) = self.project(lam)? {
                v.coeffs[idx] += s * c;
            }
        }
        Ok(v)
    }

    /// Kac–Walton product of two basis classes.
    pub fn mul_basis(&self, a: usize, b: usize) -> Result<Arc<Vec<i64>>> {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(v) = self.products.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let (la, lb) = (&self.basis[key.0][1..], &self.basis[key.1][1..]);
        // Walk the weights of the smaller module.
        let (outer, inner) = if self.rep.dim(la) <= self.rep.dim(lb) { (lb, la) } else { (la, lb) };
        let ws = self.rep.weight_system(inner)?;
        let mut out = vec![0i64; self.size()];
        let mut buf = vec![0i64; outer.len()];
        let mut err = None;
        ws.for_each(|tau, m| {
            for (i, x) in buf.iter_mut().enumerate() {
                *x = outer[i] + tau[i];
            }
            match self.project(&buf) {
                Ok(Some((s, idx))) => out[idx] += s * m,
                Ok(None) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let out = Arc::new(out);
        self.products.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Dense table `N[a][b][c]`.
    pub fn structure_constants(&self) -> Result<&Vec<Vec<Vec<i64>>>> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let n = self.size();
        let mut t = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in a..n {
                let row = self.mul_basis(a, b)?.as_ref().clone();
                t[b][a] = row.clone();
                t[a][b] = row;
            }
        }
        let _ = self.table.set(t);
        Ok(self.table.get().unwrap())
    }

    pub fn multiply(&self, x: &VerlindeElement, y: &VerlindeElement) -> Result<VerlindeElement> {
        let n = self.size();
        if x.coeffs.len() != n || y.coeffs.len() != n {
            return Err(Error::LevelMismatch {
                weight: vec![],
                got: x.coeffs.len().max(y.coeffs.len()) as i64,
                expected: n as i64,
            });
        }
        let mut out = VerlindeElement::zero(n);
        for (a, &ca) in x.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in y.coeffs.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let row = self.mul_basis(a, b)?;
                for (c, &v) in row.iter().enumerate() {
                    out.coeffs[c] += ca * cb * v;
                }
            }
        }
        Ok(out)
    }

    pub fn power(&self, x: &VerlindeElement, e: u32) -> Result<VerlindeElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `v` on the basis, column `b` is `v * V_b`.
    pub fn multiplication_matrix(&self, v: &VerlindeElement) -> Result<Vec<Vec<i64>>> {
        let n = self.size();
        let mut m = vec![vec![0i64; n]; n];
        for b in 0..n {
            let col = self.multiply(v, &VerlindeElement::basis(n, b))?;
            for c in 0..n {
                m[c][b] = col.coeffs[c];
            }
        }
        Ok(m)
    }

    /// Unit iff the multiplication matrix has determinant `+-1`.
    pub fn is_unit(&self, v: &VerlindeElement) -> Result<bool> {
        let m = self.multiplication_matrix(v)?;
        let det = determinant(&m);
        Ok(det.abs() == BigInt::from(1))
    }

    /// Quantum dimension of a finite weight at level `k` (zero on walls, signed off the alcove).
    pub fn qdim_finite(&self, w: &[i64]) -> f64 {
        qdim_finite(&self.datum, self.k, w)
    }

    pub fn qdim(&self, lam: &[i64]) -> f64 {
        self.qdim_finite(&lam[1..])
    }

    pub fn qdim_element(&self, v: &VerlindeElement) -> f64 {
        let mut s = CompensatedSum::default();
        for (i, &c) in v.coeffs.iter().enumerate() {
            if c != 0 {
                s.add(c as f64 * self.qdim(&self.basis[i]));
            }
        }
        s.value()
    }

    pub fn conjugate_index(&self, a: usize) -> usize {
        let c = crate::weyl::conjugate_weight(&self.datum, &self.basis[a]).expect("basis is dominant");
        self.index[&c]
    }

    pub fn s_matrix(&self, gate: u128) -> Result<SMatrix> {
        let order = self.datum.weyl_order();
        if order > gate {
            return Err(Error::SMatrixGate { order, bound: gate });
        }
        let d = &*self.datum;
        let kk = (self.k + d.dual_coxeter_hvee) as f64;
        let n = self.size();
        let shifted: Vec<Vec<i64>> = self.basis.iter().map(|b| b[1..].iter().map(|c| c + 1).collect()).collect();
        let mut raw = vec![vec![Complex64::zero(); n]; n];
        for (i, li) in shifted.iter().enumerate() {
            let orbit = signed_orbit(d, li);
            for (j, mj) in shifted.iter().enumerate().skip(i) {
                let mut re = CompensatedSum::default();
                let mut im = CompensatedSum::default();
                for (v, s) in &orbit {
                    let q = d.bilinear(v, mj);
                    let x = *q.numer() as f64 / *q.denom() as f64;
                    let ang = -2.0 * PI * x / kk;
                    re.add(*s as f64 * ang.cos());
                    im.add(*s as f64 * ang.sin());
                }
                raw[i][j] = Complex64::new(re.value(), im.value());
                raw[j][i] = raw[i][j];
            }
        }
        let mut norm = CompensatedSum::default();
        for j in 0..n {
            norm.add(raw[0][j].norm_sqr());
        }
        let scale = norm.value().sqrt();
        let phase = raw[0][0] / raw[0][0].norm();
        let entries = raw
            .into_iter()
            .map(|row| row.into_iter().map(|z| z / (phase * scale)).collect())
            .collect();
        Ok(SMatrix {
            labels: self.basis.clone(),
            entries,
            normalization: scale,
        })
    }

    /// Verlinde formula for `N_{lam mu}^{nu}` with residual check.
    pub fn verlinde_coefficient(&self, s: &SMatrix, lam: usize, mu: usize, nu: usize) -> Result<i64> {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for w in 0..s.size() {
            let z = s.entries[lam][w] * s.entries[mu][w] * s.entries[nu][w].conj() / s.entries[0][w];
            re.add(z.re);
            im.add(z.im);
        }
        let raw = re.value();
        let rounded = raw.round();
        let residual = ((raw - rounded).powi(2) + im.value().powi(2)).sqrt();
        if residual >= 1e-6 {
            return Err(Error::NumericInstability { raw, residual });
        }
        Ok(rounded as i64)
    }
}

/// `sum_{alpha>0}` sine-product formula.
pub fn qdim_finite(datum: &CartanDatum, k: i64, w: &[i64]) -> f64 {
    let kk = (k + datum.dual_coxeter_hvee) as f64;
    let lr: Vec<i64> = w.iter().map(|c| c + 1).collect();
    let mut q = 1.0;
    for root in &datum.positive_roots {
        let a = datum.pair_weight_root(&lr, root);
        let b = datum.pair_weight_root(&datum.rho_finite, root);
        let a = *a.numer() as f64 / *a.denom() as f64;
        let b = *b.numer() as f64 / *b.denom() as f64;
        q *= (PI * a / kk).sin() / (PI * b / kk).sin();
    }
    q
}

/// `W_0`-orbit of a regular dominant weight with signs `(-1)^{l(w)}`.
pub fn signed_orbit(datum: &CartanDatum, v: &[i64]) -> Vec<(Vec<i64>, i8)> {
    let mut seen: HashMap<Vec<i64>, i8> = HashMap::new();
    seen.insert(v.to_vec(), 1);
    let mut out = vec![(v.to_vec(), 1i8)];
    let mut idx = 0;
    while idx < out.len() {
        let (w, s) = out[idx].clone();
        idx += 1;
        for i in 0..datum.rank() {
            if w[i] > 0 {
                let mut u = w.clone();
                finite_reflect(datum, i, &mut u);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(u.clone()) {
                    e.insert(-s);
                    out.push((u, -s));
                }
            }
        }
    }
    out
}

/// Bareiss fraction-free determinant.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Helper for callers holding an `f64` view of a big integer.
pub fn big_as_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
