//! Independent oracles shared by the rep-ring tests and the acceptance run.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::ToPrimitive;
use verlinde_core::fusion::qdim_finite;
use verlinde_core::repring::{KRBranchingData, RepRing};
use verlinde_core::CartanDatum;

/// Weyl orbit of a regular dominant weight by simple reflections, with `det w` from BFS depth parity.
/// `alpha_i` in weight coordinates is column `i` of the Cartan matrix.
pub fn signed_orbit(d: &CartanDatum, v: &[i64]) -> Vec<(Vec<i64>, i64)> {
    let mut seen: HashMap<Vec<i64>, i64> = HashMap::from([(v.to_vec(), 1)]);
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(x) = queue.pop_front() {
        let s = seen[&x];
        for i in 0..d.rank() {
            let mut y = x.clone();
            for j in 0..d.rank() {
                y[j] -= x[i] * d.cartan[j][i];
            }
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), -s);
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Kostant partition function over positive roots (weight coordinates).
struct Kostant<'a> {
    d: &'a CartanDatum,
    memo: HashMap<(Vec<i64>, usize), i64>,
}

impl Kostant<'_> {
    fn count(&mut self, g: &[i64], idx: usize) -> i64 {
        if g.iter().all(|&c| c == 0) {
            return 1;
        }
        if idx == self.d.positive_roots_weight.len() || self.d.to_root_coords(g).iter().any(|c| *c < 0.into()) {
            return 0;
        }
        let key = (g.to_vec(), idx);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let beta = self.d.positive_roots_weight[idx].clone();
        let mut total = 0;
        let mut rest = g.to_vec();
        loop {
            total += self.count(&rest, idx + 1);
            for (a, b) in rest.iter_mut().zip(&beta) {
                *a -= b;
            }
            if self.d.to_root_coords(&rest).iter().any(|c| *c < 0.into()) {
                break;
            }
        }
        self.memo.insert(key, total);
        total
    }
}

/// Dominant multiplicities of `L(lam)` by Kostant's formula.
pub fn kostant_dominant(d: &CartanDatum, lam: &[i64], doms: &[Vec<i64>]) -> BTreeMap<Vec<i64>, i64> {
    let lr: Vec<i64> = lam.iter().map(|c| c + 1).collect();
    let orbit = signed_orbit(d, &lr);
    let mut k = Kostant { d, memo: HashMap::new() };
    let mut out = BTreeMap::new();
    for mu in doms {
        let mut m = 0;
        for (w, s) in &orbit {
            let g: Vec<i64> = w.iter().zip(mu).map(|(a, b)| a - b - 1).collect();
            m += s * k.count(&g, 0);
        }
        if m != 0 {
            out.insert(mu.clone(), m);
        }
    }
    out
}

pub fn dominant_box(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..=bound).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

/// Full characters multiplied weight by weight, then decomposed by peeling highest weights.
pub fn brute_tensor(rep: &RepRing, a: &[i64], b: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    let d = rep.datum();
    let full = |lam: &[i64]| -> HashMap<Vec<i64>, i64> {
        let mut out = HashMap::new();
        for (mu, m) in rep.dominant_multiplicities(lam).unwrap() {
            for w in rep.orbit(&mu) {
                out.insert(w, m);
            }
        }
        out
    };
    let (ca, cb) = (full(a), full(b));
    let mut prod: HashMap<Vec<i64>, i64> = HashMap::new();
    for (x, m) in &ca {
        for (y, n) in &cb {
            let s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            *prod.entry(s).or_insert(0) += m * n;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        prod.retain(|_, m| *m != 0);
        let Some(top) = prod.keys().filter(|w| w.iter().all(|&c| c >= 0)).max_by_key(|w| d.height_scaled(w)).cloned() else {
            break;
        };
        let c = prod[&top];
        out.insert(top.clone(), c);
        for (w, m) in full(&top) {
            *prod.entry(w).or_insert(0) -= c * m;
        }
    }
    assert!(prod.is_empty());
    out
}

/// Compare Freudenthal with Kostant for every `L(lam)`, `lam` in a box, of dimension at most `max_dim`.
/// Returns the number of weights compared, or the first disagreement.
pub fn freudenthal_vs_kostant(rep: &RepRing, max_dim: u64) -> Result<usize, String> {
    let d = rep.datum();
    let mut checked = 0;
    for lam in dominant_box(d.rank(), 6) {
        if rep.dim(&lam).to_u64().unwrap() > max_dim {
            continue;
        }
        let fr: BTreeMap<Vec<i64>, i64> = rep.dominant_multiplicities(&lam).unwrap().into_iter().collect();
        let doms: Vec<Vec<i64>> = dominant_box(d.rank(), lam.iter().sum::<i64>() * 2)
            .into_iter()
            .filter(|mu| {
                let diff: Vec<i64> = lam.iter().zip(mu).map(|(a, b)| a - b).collect();
                d.to_root_coords(&diff).iter().all(|c| *c >= 0.into() && c.is_integer())
            })
            .collect();
        let ko = kostant_dominant(d, &lam, &doms);
        if fr != ko {
            return Err(format!("{} {lam:?}: Freudenthal {fr:?}, Kostant {ko:?}", d.ty));
        }
        let orbit_total: i64 = fr.iter().map(|(mu, m)| m * rep.orbit(mu).len() as i64).sum();
        if orbit_total as u64 != rep.dim(&lam).to_u64().unwrap() {
            return Err(format!("{} {lam:?}: weights do not add up to the dimension", d.ty));
        }
        checked += 1;
    }
    Ok(checked)
}

pub fn kr_qdims(rep: &RepRing, k: i64, branching: &KRBranchingData) -> Vec<(usize, Vec<f64>)> {
    let d = rep.datum();
    (1..=d.rank())
        .map(|i| {
            let top = d.t[i - 1] * k;
            let seq = (0..=top)
                .map(|m| {
                    let w = rep.kr_restriction(branching, i, m).unwrap();
                    w.terms.iter().map(|(lam, c)| *c as f64 * qdim_finite(d, k, lam)).sum()
                })
                .collect();
            (i, seq)
        })
        .collect()
}

/// `D_m = qdim phi_k(W^{(i)}_m)` for `0 <= m <= t_i k`: positive, log-concave, `D_0 = D_{t_i k} = 1`.
pub fn kr_qdim_shape(rep: &RepRing, k: i64, branching: &KRBranchingData) -> Result<(), String> {
    let ty = &rep.datum().ty;
    for (i, seq) in kr_qdims(rep, k, branching) {
        let last = *seq.last().unwrap();
        if (seq[0] - 1.0).abs() > 1e-9 || (last - 1.0).abs() > 1e-9 {
            return Err(format!("{ty} k={k} i={i}: ends {seq:?}"));
        }
        if seq.iter().any(|&x| x <= 0.0) {
            return Err(format!("{ty} k={k} i={i}: not positive {seq:?}"));
        }
        for m in 1..seq.len() - 1 {
            if seq[m] * seq[m] < seq[m - 1] * seq[m + 1] - 1e-9 {
                return Err(format!("{ty} k={k} i={i} m={m}: not log-concave {seq:?}"));
            }
        }
    }
    Ok(())
}
