//! Fermionic-formula oracle for `res W^{(a)}_1` in simply-laced types.
//!
//! Sums over sequences `beta_1 >= beta_2 >= ... > 0` in the positive root cone with
//! `lambda_j = varpi_a - C(beta_1 + ... + beta_j)` dominant; each sequence contributes
//! `prod_j prod_b binom(<lambda_j, alpha_b> + m_j^b, m_j^b)` with `m_j = beta_j - beta_{j+1}`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use verlinde_core::CartanDatum;

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

/// Dominant weights strictly below `lam`, with the root-lattice difference.
fn dominant_steps(d: &CartanDatum, lam: &[i64]) -> Vec<(Vec<i64>, Vec<i64>)> {
    let n = d.rank();
    let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let mut queue = VecDeque::from([(lam.to_vec(), vec![0i64; n])]);
    seen.insert(lam.to_vec(), vec![0; n]);
    while let Some((mu, beta)) = queue.pop_front() {
        for (root, root_w) in d.positive_roots.iter().zip(&d.positive_roots_weight) {
            let nu: Vec<i64> = mu.iter().zip(root_w).map(|(a, b)| a - b).collect();
            if nu.iter().all(|&c| c >= 0) && !seen.contains_key(&nu) {
                let nb: Vec<i64> = beta.iter().zip(root).map(|(a, b)| a + b).collect();
                seen.insert(nu.clone(), nb.clone());
                queue.push_back((nu, nb));
            }
        }
    }
    seen.into_iter().filter(|(mu, _)| mu != lam).collect()
}

struct Oracle<'a> {
    d: &'a CartanDatum,
    memo: HashMap<(Vec<i64>, Vec<i64>), BTreeMap<Vec<i64>, i64>>,
}

impl Oracle<'_> {
    fn vacancy_factor(lam: &[i64], m: &[i64]) -> i64 {
        lam.iter().zip(m).map(|(&p, &mb)| binom(p + mb, mb)).product()
    }

    /// Completions from state `(lambda_j, beta_j)`, `j >= 1`.
    fn tail(&mut self, lam: &[i64], beta: &[i64]) -> BTreeMap<Vec<i64>, i64> {
        let key = (lam.to_vec(), beta.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = BTreeMap::new();
        let stop = Self::vacancy_factor(lam, beta);
        if stop != 0 {
            *out.entry(lam.to_vec()).or_insert(0) += stop;
        }
        for (mu, next) in dominant_steps(self.d, lam) {
            if next.iter().zip(beta).any(|(a, b)| a > b) {
                continue;
            }
            let m: Vec<i64> = beta.iter().zip(&next).map(|(a, b)| a - b).collect();
            let f = Self::vacancy_factor(lam, &m);
            if f == 0 {
                continue;
            }
            for (w, c) in self.tail(&mu, &next) {
                *out.entry(w).or_insert(0) += f * c;
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

/// Decomposition of `res W^{(a)}_1` (node `a` is 1-based) into irreducibles.
pub fn fundamental_kr(d: &CartanDatum, a: usize) -> BTreeMap<Vec<i64>, i64> {
    assert!(d.ty.is_simply_laced(), "oracle covers simply-laced types only");
    let mut top = vec![0i64; d.rank()];
    top[a - 1] = 1;
    let mut oracle = Oracle { d, memo: HashMap::new() };
    let mut out = BTreeMap::from([(top.clone(), 1i64)]);
    for (mu, beta) in dominant_steps(d, &top) {
        for (w, c) in oracle.tail(&mu, &beta) {
            *out.entry(w).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}
