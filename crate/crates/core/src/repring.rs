//! The representation ring of the finite-dimensional simple Lie algebra:
//! weight systems (Freudenthal), dimensions (Weyl), tensor products (Klimyk),
//! exact division and KR restrictions through the Q-system.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Family};
use crate::error::{Error, Result};
use crate::weyl::{check_dominant, dominant_representative, finite_reflect, reduce_shifted_in_place};

/// Integer combination of classes `[L(lambda)]`, keyed by dominant weights.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepRingElement {
    pub terms: BTreeMap<Vec<i64>, i64>,
}

impl RepRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(lam: Vec<i64>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lam, 1);
        RepRingElement { terms }
    }

    pub fn one(rank: usize) -> Self {
        Self::basis(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, lam: &[i64], c: i64) {
        if c == 0 {
            return;
        }
        if let Some(v) = self.terms.get_mut(lam) {
            *v += c;
            if *v == 0 {
                self.terms.remove(lam);
            }
        } else {
            self.terms.insert(lam.to_vec(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &RepRingElement, c: i64) {
        for (k, v) in &other.terms {
            self.add_term(k, v * c);
        }
    }

    pub fn add(&self, other: &RepRingElement) -> RepRingElement {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn sub(&self, other: &RepRingElement) -> RepRingElement {
        let mut out = self.clone();
        out.add_scaled(other, -1);
        out
    }

    pub fn coeff(&self, lam: &[i64]) -> i64 {
        self.terms.get(lam).copied().unwrap_or(0)
    }

    /// All multiplicities positive and at least one term.
    pub fn is_genuine(&self) -> bool {
        !self.terms.is_empty() && self.terms.values().all(|&c| c > 0)
    }

    pub fn from_pairs<I: IntoIterator<Item = (Vec<i64>, i64)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (k, v) in it {
            out.add_term(&k, v);
        }
        out
    }
}

impl fmt::Display for RepRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (lam, c) in &self.terms {
            let sep = if first { "" } else { " + " };
            first = false;
            if *c == 1 {
                write!(f, "{sep}L{lam:?}")?;
            } else {
                write!(f, "{sep}{c} L{lam:?}")?;
            }
        }
        Ok(())
    }
}

/// Weights of an irreducible module: dominant weights with multiplicity; the full
/// system is walked orbit by orbit without being stored.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    datum: Arc<CartanDatum>,
    /// Dominant weights with multiplicity, ordered from the highest weight down.
    pub dominant: Vec<(Vec<i64>, i64)>,
}

impl WeightSystem {
    /// Call `f(weight, multiplicity)` for every weight.
    pub fn for_each(&self, mut f: impl FnMut(&[i64], i64)) {
        for (mu, m) in &self.dominant {
            walk_orbit(&self.datum, mu, |w| f(w, *m));
        }
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        let mut n = 0;
        self.for_each(|_, _| n += 1);
        n
    }

    pub fn is_empty(&self) -> bool {
        self.dominant.is_empty()
    }

    pub fn to_map(&self) -> BTreeMap<Vec<i64>, i64> {
        let mut out = BTreeMap::new();
        self.for_each(|w, m| {
            out.insert(w.to_vec(), m);
        });
        out
    }

    /// Dimension, as the sum of all multiplicities.
    pub fn total(&self) -> i64 {
        let mut t = 0;
        self.for_each(|_, m| t += m);
        t
    }
}

/// Visit the W-orbit of a dominant weight. Each non-dominant weight is reached once,
/// from the parent obtained by reflecting at its smallest negative coordinate.
pub fn walk_orbit(datum: &CartanDatum, dom: &[i64], mut f: impl FnMut(&[i64])) {
    let n = dom.len();
    let mut stack: Vec<i64> = dom.to_vec();
    let mut cur = vec![0i64; n];
    while !stack.is_empty() {
        let base = stack.len() - n;
        cur.copy_from_slice(&stack[base..]);
        stack.truncate(base);
        f(&cur);
        for i in 0..n {
            if cur[i] <= 0 {
                continue;
            }
            // The child is s_i(cur); keep it only if i is its smallest negative coordinate.
            let start = stack.len();
            stack.extend_from_slice(&cur);
            finite_reflect(datum, i, &mut stack[start..]);
            if stack[start..start + i].iter().any(|&c| c < 0) {
                stack.truncate(start);
            }
        }
    }
}

/// Fundamental KR restrictions `res W^{(i)}_1`, keyed by node `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRBranchingData {
    pub type_label: String,
    pub fundamental_kr: BTreeMap<usize, RepRingElement>,
}

impl KRBranchingData {
    /// Closed-form restrictions for the classical families.
    pub fn classical(datum: &CartanDatum) -> Result<Self> {
        let n = datum.rank();
        let fund = |a: usize| -> Vec<i64> {
            let mut w = vec![0; n];
            if a >= 1 {
                w[a - 1] = 1;
            }
            w
        };
        let mut map = BTreeMap::new();
        for a in 1..=n {
            let elt = match datum.ty.family {
                Family::A | Family::C => RepRingElement::basis(fund(a)),
                Family::B | Family::D => {
                    let spin = match datum.ty.family {
                        Family::B => a == n,
                        _ => a + 1 >= n,
                    };
                    if spin {
                        RepRingElement::basis(fund(a))
                    } else {
                        let mut e = RepRingElement::zero();
                        let mut b = a as i64;
                        while b >= 0 {
                            e.add_term(&fund(b as usize), 1);
                            b -= 2;
                        }
                        e
                    }
                }
                _ => return Err(Error::MissingBranching(datum.ty.to_string())),
            };
            map.insert(a, elt);
        }
        Ok(KRBranchingData {
            type_label: datum.ty.to_string(),
            fundamental_kr: map,
        })
    }

    pub fn get(&self, i: usize) -> Result<&RepRingElement> {
        self.fundamental_kr
            .get(&i)
            .ok_or_else(|| Error::MissingBranching(format!("{} node {i}", self.type_label)))
    }
}

/// Outcome of a Q-system audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QSystemReport {
    pub checked: usize,
    pub first_failure: Option<QSystemFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QSystemFailure {
    pub node: usize,
    pub m: i64,
    pub message: String,
}

impl QSystemReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Representation-ring arithmetic for one Cartan type, with a shared weight-system memo.
pub struct RepRing {
    datum: Arc<CartanDatum>,
    cache: Mutex<HashMap<Vec<i64>, Arc<WeightSystem>>>,
    kr_cache: Mutex<HashMap<(usize, i64), RepRingElement>>,
}

impl RepRing {
    pub fn new(datum: Arc<CartanDatum>) -> Self {
        RepRing {
            datum,
            cache: Mutex::new(HashMap::new()),
            kr_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    /// Dominant weights below `lam`, by chains of dominant weights differing by positive roots.
    fn dominant_weights_below(&self, lam: &[i64]) -> Vec<Vec<i64>> {
        let d = &*self.datum;
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(lam.to_vec());
        let mut queue = VecDeque::from([lam.to_vec()]);
        while let Some(mu) = queue.pop_front() {
            for root in &d.positive_roots_weight {
                let nu: Vec<i64> = mu.iter().zip(root).map(|(a, b)| a - b).collect();
                if nu.iter().all(|&c| c >= 0) && seen.insert(nu.clone()) {
                    queue.push_back(nu);
                }
            }
        }
        let top = d.height_scaled(lam);
        let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
        out.sort_by_key(|mu| (top - d.height_scaled(mu), std::cmp::Reverse(mu.clone())));
        out
    }

    /// Freudenthal multiplicities of the dominant weights of `L(lam)`.
    pub fn dominant_multiplicities(&self, lam: &[i64]) -> Result<Vec<(Vec<i64>, i64)>> {
        check_dominant(&self.datum, lam)?;
        let d = &*self.datum;
        let n = d.rank();
        let doms = self.dominant_weights_below(lam);
        let mut mult: HashMap<Vec<i64>, i64> = HashMap::new();
        let lr: Vec<i64> = lam.iter().map(|c| c + 1).collect();
        let norm_lr = d.bilinear_scaled(&lr, &lr) as i128;
        let mut out = Vec::with_capacity(doms.len());
        for mu in doms {
            if mu == lam {
                mult.insert(mu.clone(), 1);
                out.push((mu, 1));
                continue;
            }
            let mr: Vec<i64> = mu.iter().map(|c| c + 1).collect();
            let denom = norm_lr - d.bilinear_scaled(&mr, &mr) as i128;
            let mut num: i128 = 0;
            for root in &d.positive_roots_weight {
                let mut nu = mu.clone();
                loop {
                    for (a, b) in nu.iter_mut().zip(root) {
                        *a += b;
                    }
                    let (_, rep) = dominant_representative(d, &nu, false).expect("unshifted");
                    let Some(&m) = mult.get(&rep) else { break };
                    num += 2 * d.bilinear_scaled(&nu, root) as i128 * m as i128;
                }
            }
            if denom <= 0 || num % denom != 0 {
                return Err(Error::Internal(format!(
                    "Freudenthal recursion is not integral at {mu:?} for {lam:?}"
                )));
            }
            let m = (num / denom) as i64;
            debug_assert_eq!(mu.len(), n);
            if m > 0 {
                mult.insert(mu.clone(), m);
                out.push((mu, m));
            }
        }
        Ok(out)
    }

    /// The W-orbit of a dominant weight.
    pub fn orbit(&self, dom: &[i64]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        walk_orbit(&self.datum, dom, |w| out.push(w.to_vec()));
        out
    }

    /// Full weight system of `L(lam)`, memoized.
    pub fn weight_system(&self, lam: &[i64]) -> Result<Arc<WeightSystem>> {
        if let Some(ws) = self.cache.lock().unwrap().get(lam) {
            return Ok(ws.clone());
        }
        let dominant = self.dominant_multiplicities(lam)?;
        let ws = Arc::new(WeightSystem {
            datum: self.datum.clone(),
            dominant,
        });
        self.cache.lock().unwrap().insert(lam.to_vec(), ws.clone());
        Ok(ws)
    }

    /// Weyl dimension formula.
    pub fn dim(&self, lam: &[i64]) -> BigUint {
        let d = &*self.datum;
        let lr: Vec<i64> = lam.iter().map(|c| c + 1).collect();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for root in &d.positive_roots {
            let a = d.pair_weight_root(&lr, root);
            let b = d.pair_weight_root(&d.rho_finite, root);
            let q = a / b;
            num *= BigInt::from(*q.numer());
            den *= BigInt::from(*q.denom());
        }
        let (q, r) = num.div_rem(&den);
        assert!(r.is_zero(), "Weyl dimension must be integral");
        q.to_biguint().expect("dimension is positive")
    }

    pub fn dim_of(&self, a: &RepRingElement) -> BigInt {
        let mut s = BigInt::zero();
        for (lam, c) in &a.terms {
            s += BigInt::from(self.dim(lam)) * BigInt::from(*c);
        }
        s
    }

    /// Klimyk: `sum_lam c_lam L(lam) x L(mu)` by reducing `lam + tau + rho` for every weight `tau` of `L(mu)`.
    fn tensor_into(&self, outer: &[(&Vec<i64>, i64)], ws: &WeightSystem, out: &mut HashMap<Vec<i64>, i64>) {
        let d = &*self.datum;
        let mut buf = vec![0i64; d.rank()];
        ws.for_each(|tau, m| {
            for (lam, coeff) in outer {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = lam[i] + tau[i];
                }
                if let Some(sign) = reduce_shifted_in_place(d, &mut buf) {
                    let delta = sign as i64 * m * coeff;
                    if let Some(v) = out.get_mut(buf.as_slice()) {
                        *v += delta;
                    } else {
                        out.insert(buf.clone(), delta);
                    }
                }
            }
        });
    }

    pub fn tensor(&self, a: &RepRingElement, b: &RepRingElement) -> Result<RepRingElement> {
        if a.is_zero() || b.is_zero() {
            return Ok(RepRingElement::zero());
        }
        // Expand the factor whose weight systems are cheaper to walk.
        let cost = |x: &RepRingElement, y: &RepRingElement| -> f64 {
            let w: f64 = y.terms.keys().map(|l| self.dim(l).to_f64().unwrap_or(f64::MAX)).sum();
            w * x.terms.len() as f64
        };
        let (outer, inner) = if cost(a, b) <= cost(b, a) { (a, b) } else { (b, a) };
        let mut acc: HashMap<Vec<i64>, i64> = HashMap::new();
        for (mu, cm) in &inner.terms {
            let ws = self.weight_system(mu)?;
            let scaled: Vec<(&Vec<i64>, i64)> = outer.terms.iter().map(|(l, c)| (l, c * cm)).collect();
            self.tensor_into(&scaled, &ws, &mut acc);
        }
        Ok(RepRingElement::from_pairs(acc))
    }

    /// Key of the division order: height first, then lexicographic.
    fn order_key(&self, lam: &[i64]) -> (i64, Vec<i64>) {
        (self.datum.height_scaled(lam), lam.to_vec())
    }

    fn leading(&self, a: &RepRingElement) -> Option<(Vec<i64>, i64)> {
        a.terms
            .iter()
            .max_by_key(|(lam, _)| self.order_key(lam))
            .map(|(l, c)| (l.clone(), *c))
    }

    /// `q` with `q * b = a`, by leading-term elimination.
    pub fn divide_exact(&self, a: &RepRingElement, b: &RepRingElement) -> Result<RepRingElement> {
        let (lb, cb) = self
            .leading(b)
            .ok_or_else(|| Error::InexactDivision { term: vec![], reason: "division by zero".into() })?;
        let mut rem = a.clone();
        let mut q = RepRingElement::zero();
        let mut guard = 0usize;
        while let Some((lr, cr)) = self.leading(&rem) {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::Internal("division did not terminate".into()));
            }
            let qt: Vec<i64> = lr.iter().zip(&lb).map(|(x, y)| x - y).collect();
            if qt.iter().any(|&c| c < 0) {
                return Err(Error::InexactDivision {
                    term: lr,
                    reason: "quotient term is not dominant".into(),
                });
            }
            if cr % cb != 0 {
                return Err(Error::InexactDivision {
                    term: lr,
                    reason: "leading coefficient not divisible".into(),
                });
            }
            let c = cr / cb;
            let piece = RepRingElement::from_pairs([(qt.clone(), c)]);
            let prod = self.tensor(&piece, b)?;
            rem = rem.sub(&prod);
            q.add_term(&qt, c);
        }
        Ok(q)
    }

    /// Right-hand side of the Q-system at `(i, m)`.
    fn qsystem_rhs(&self, branching: &KRBranchingData, i: usize, m: i64) -> Result<RepRingElement> {
        let d = &*self.datum;
        let n = d.rank();
        let mut rhs = RepRingElement::one(n);
        for j in 0..n {
            let aij = d.cartan[i - 1][j];
            if j + 1 == i || aij >= 0 {
                continue;
            }
            let aji = d.cartan[j][i - 1];
            for nn in 0..(-aij) {
                let idx = Integer::div_floor(&(aji * m - nn), &aij);
                let q = self.kr_restriction(branching, j + 1, idx)?;
                rhs = self.tensor(&rhs, &q)?;
            }
        }
        Ok(rhs)
    }

    /// `res W^{(i)}_m` from the Q-system with the given fundamental data.
    pub fn kr_restriction(&self, branching: &KRBranchingData, i: usize, m: i64) -> Result<RepRingElement> {
        let n = self.datum.rank();
        if i == 0 || i > n {
            return Err(Error::Internal(format!("node {i} out of range")));
        }
        if m < 0 {
            return Err(Error::Internal(format!("negative KR length {m}")));
        }
        if m == 0 {
            return Ok(RepRingElement::one(n));
        }
        if m == 1 {
            return Ok(branching.get(i)?.clone());
        }
        if let Some(v) = self.kr_cache.lock().unwrap().get(&(i, m)) {
            return Ok(v.clone());
        }
        let qm = self.kr_restriction(branching, i, m - 1)?;
        let qmm = self.kr_restriction(branching, i, m - 2)?;
        let rhs = self.qsystem_rhs(branching, i, m - 1)?;
        let sq = self.tensor(&qm, &qm)?;
        let num = sq.sub(&rhs);
        let q = self.divide_exact(&num, &qmm).map_err(|e| {
            Error::DataInconsistency(format!("Q-system division for W^({i})_{m} failed: {e}"))
        })?;
        if !q.is_genuine() {
            return Err(Error::DataInconsistency(format!(
                "W^({i})_{m} restriction has a non-positive multiplicity"
            )));
        }
        let mut top = vec![0; n];
        top[i - 1] = m;
        if q.coeff(&top) != 1 || self.leading(&q).map(|x| x.0) != Some(top.clone()) {
            return Err(Error::DataInconsistency(format!(
                "W^({i})_{m} restriction does not have top term L({top:?})"
            )));
        }
        self.kr_cache.lock().unwrap().insert((i, m), q.clone());
        Ok(q)
    }

    /// Validate fundamental data and the Q-system for `1 <= m <= max_m`.
    pub fn check_qsystem(&self, branching: &KRBranchingData, max_m: i64) -> QSystemReport {
        let n = self.datum.rank();
        let mut checked = 0;
        // Fresh memo so a previous run with other data cannot leak in.
        self.kr_cache.lock().unwrap().clear();
        let fail = |node, m, message: String| QSystemReport {
            checked: 0,
            first_failure: Some(QSystemFailure { node, m, message }),
        };
        for i in 1..=n {
            let Ok(w1) = branching.get(i) else {
                return fail(i, 1, "missing fundamental data".into());
            };
            let mut top = vec![0; n];
            top[i - 1] = 1;
            if !w1.is_genuine() || w1.coeff(&top) != 1 || self.leading(w1).map(|x| x.0) != Some(top) {
                return fail(i, 1, "fundamental restriction is not headed by L(varpi_i)".into());
            }
        }
        for m in 1..=max_m {
            for i in 1..=n {
                let result = (|| -> Result<()> {
                    let qm = self.kr_restriction(branching, i, m)?;
                    let qp = self.kr_restriction(branching, i, m + 1)?;
                    let qn = self.kr_restriction(branching, i, m - 1)?;
                    let lhs = self.tensor(&qm, &qm)?.sub(&self.tensor(&qp, &qn)?);
                    let rhs = self.qsystem_rhs(branching, i, m)?;
                    if lhs != rhs {
                        return Err(Error::DataInconsistency("identity does not hold".into()));
                    }
                    Ok(())
                })();
                if let Err(e) = result {
                    self.kr_cache.lock().unwrap().clear();
                    let mut r = fail(i, m, e.to_string());
                    r.checked = checked;
                    return r;
                }
                checked += 1;
            }
        }
        QSystemReport {
            checked,
            first_failure: None,
        }
    }
}

/// Signed magnitude of a big integer as `f64`, for reporting.
pub fn big_to_f64(x: &BigInt) -> f64 {
    let v = x.abs().to_f64().unwrap_or(f64::INFINITY);
    if x.is_negative() {
        -v
    } else {
        v
    }
}
