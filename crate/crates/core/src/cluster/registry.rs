//! Registry of cluster variables: exact Laurent expansions plus modular fingerprints
//! used to recognise variables without recomputing them.

use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use super::laurent::{invmod, mulmod, LaurentPoly};
use super::qdatum::YMonomial;
use crate::error::{Error, Result};

const PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 62) - 57];
const FINGERPRINT_SEED: u64 = 0x5eed_c1a5_7e12_0001;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterVariable {
    pub laurent: LaurentPoly,
    pub label: Option<YMonomial>,
    pub frozen: bool,
}

type Fingerprint = [u64; 2];

#[derive(Debug, Clone)]
pub struct VariableRegistry {
    n_initial: usize,
    vars: Vec<ClusterVariable>,
    by_poly: HashMap<LaurentPoly, usize>,
    fps: Vec<Fingerprint>,
    by_fp: HashMap<Fingerprint, usize>,
    points: [Vec<u64>; 2],
    inv_points: [Vec<u64>; 2],
}

impl VariableRegistry {
    /// Registry holding the initial cluster `x_1..x_n`; ids `0..n` are the initial variables.
    pub fn new(frozen: &[bool], labels: Vec<Option<YMonomial>>) -> Self {
        let n = frozen.len();
        let mut rng = ChaCha8Rng::seed_from_u64(FINGERPRINT_SEED);
        let mut points = [Vec::with_capacity(n), Vec::with_capacity(n)];
        for (pi, &p) in PRIMES.iter().enumerate() {
            for _ in 0..n {
                points[pi].push(2 + rng.next_u64() % (p - 3));
            }
        }
        let inv_points = [
            points[0].iter().map(|&x| invmod(x, PRIMES[0])).collect(),
            points[1].iter().map(|&x| invmod(x, PRIMES[1])).collect(),
        ];
        let mut reg = VariableRegistry {
            n_initial: n,
            vars: Vec::new(),
            by_poly: HashMap::new(),
            fps: Vec::new(),
            by_fp: HashMap::new(),
            points,
            inv_points,
        };
        for i in 0..n {
            let label = labels.get(i).cloned().flatten();
            reg.insert(LaurentPoly::var(n, i), label, frozen[i]).expect("initial variables are distinct");
        }
        reg
    }

    pub fn n_initial(&self) -> usize {
        self.n_initial
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, id: usize) -> &ClusterVariable {
        &self.vars[id]
    }

    pub fn variables(&self) -> &[ClusterVariable] {
        &self.vars
    }

    pub fn set_label(&mut self, id: usize, label: Option<YMonomial>) {
        self.vars[id].label = label;
    }

    pub fn id_of(&self, p: &LaurentPoly) -> Option<usize> {
        self.by_poly.get(p).copied()
    }

    fn fingerprint(&self, p: &LaurentPoly) -> Fingerprint {
        [0, 1].map(|i| p.eval_mod(&self.points[i], &self.inv_points[i], PRIMES[i]))
    }

    /// Insert a variable, or return the id of an equal one.
    pub fn insert(&mut self, p: LaurentPoly, label: Option<YMonomial>, frozen: bool) -> Result<usize> {
        if let Some(&id) = self.by_poly.get(&p) {
            return Ok(id);
        }
        let fp = self.fingerprint(&p);
        if fp.contains(&0) {
            return Err(Error::Internal("fingerprint vanished at the sample point".into()));
        }
        if self.by_fp.contains_key(&fp) {
            return Err(Error::Internal("fingerprint collision between distinct variables".into()));
        }
        let id = self.vars.len();
        self.by_poly.insert(p.clone(), id);
        self.by_fp.insert(fp, id);
        self.fps.push(fp);
        self.vars.push(ClusterVariable { laurent: p, label, frozen });
        Ok(id)
    }

    fn product_fp(&self, ids: &[usize]) -> Fingerprint {
        let mut acc = [1u64, 1u64];
        for &id in ids {
            for i in 0..2 {
                acc[i] = mulmod(acc[i], self.fps[id][i], PRIMES[i]);
            }
        }
        acc
    }

    fn product(&self, ids: &[usize]) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::one(self.n_initial);
        for &id in ids {
            p = p.mul(&self.vars[id].laurent)?;
        }
        Ok(p)
    }

    /// Id of `(prod pos + prod neg) / x_k`. The fingerprint decides whether the variable is
    /// already known; new variables are computed exactly.
    pub fn exchange(&mut self, xk: usize, pos: &[usize], neg: &[usize]) -> Result<usize> {
        let a = self.product_fp(pos);
        let b = self.product_fp(neg);
        let fp = [0, 1].map(|i| {
            let s = (a[i] + b[i]) % PRIMES[i];
            mulmod(s, invmod(self.fps[xk][i], PRIMES[i]), PRIMES[i])
        });
        if let Some(&id) = self.by_fp.get(&fp) {
            return Ok(id);
        }
        let num = self.product(pos)?.add(&self.product(neg)?)?;
        let p = num.div_exact(&self.vars[xk].laurent)?;
        let frozen = false;
        let id = self.insert(p, None, frozen)?;
        if self.fps[id] != fp {
            return Err(Error::Internal("fingerprint of an exchanged variable is inconsistent".into()));
        }
        Ok(id)
    }

    /// Recompute every exchanged variable's fingerprint from its Laurent polynomial.
    pub fn check_fingerprints(&self) -> bool {
        self.vars.iter().zip(&self.fps).all(|(v, fp)| self.fingerprint(&v.laurent) == *fp)
    }
}
