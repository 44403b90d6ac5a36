//! Weyl group actions, the level-k alcove projection and the dominant alcove.
//!
//! Finite weights are integer vectors over the fundamental weights `varpi_i`.
//! Affine weights are vectors `(c_0, ..., c_n)` over `Lambda_i`, modulo `delta`.

use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};

/// Output of the alcove projection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlcoveResult {
    Null,
    Signed { sign: i8, weight: Vec<i64> },
}

impl AlcoveResult {
    pub fn is_null(&self) -> bool {
        matches!(self, AlcoveResult::Null)
    }
}

/// Which negative coordinate to reflect at first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionPolicy {
    MinIndex,
    MaxIndex,
}

pub fn check_finite(datum: &CartanDatum, w: &[i64]) -> Result<()> {
    if w.len() != datum.rank() {
        return Err(Error::WeightLength {
            weight: w.to_vec(),
            got: w.len(),
            expected: datum.rank(),
        });
    }
    Ok(())
}

pub fn check_dominant(datum: &CartanDatum, w: &[i64]) -> Result<()> {
    check_finite(datum, w)?;
    if w.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(w.to_vec()));
    }
    Ok(())
}

/// `c_0 = k - sum a_i^v w_i`, `c_i = w_i`.
pub fn lift_to_level(datum: &CartanDatum, w: &[i64], k: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let s: i64 = w.iter().zip(&datum.comarks[1..]).map(|(a, b)| a * b).sum();
    out.push(k - s);
    out.extend_from_slice(w);
    out
}

/// `s_i` on an affine weight over `Lambda_0..Lambda_n`.
pub fn affine_reflect(datum: &CartanDatum, i: usize, mu: &mut [i64]) {
    let ci = mu[i];
    if ci == 0 {
        return;
    }
    for &(j, a) in &datum.affine_cols[i] {
        mu[j] -= ci * a;
    }
}

/// `s_i` on a finite weight (`i` zero-based over the finite nodes).
pub fn finite_reflect(datum: &CartanDatum, i: usize, w: &mut [i64]) {
    let ci = w[i];
    if ci == 0 {
        return;
    }
    for &(j, a) in &datum.finite_cols[i] {
        w[j] -= ci * a;
    }
}

/// In place: replace `w` by `x - rho` where `x` is the dominant conjugate of `w + rho`.
/// Returns the sign of the Weyl element, or `None` when `w + rho` lies on a wall.
pub fn reduce_shifted_in_place(datum: &CartanDatum, w: &mut [i64]) -> Option<i8> {
    for c in w.iter_mut() {
        *c += 1;
    }
    let mut sign = 1i8;
    let result = loop {
        let mut pick = None;
        for (i, &c) in w.iter().enumerate() {
            if c == 0 {
                pick = Some(usize::MAX);
                break;
            }
            if c < 0 && pick.is_none() {
                pick = Some(i);
            }
        }
        match pick {
            None => break Some(sign),
            Some(usize::MAX) => break None,
            Some(i) => {
                finite_reflect(datum, i, w);
                sign = -sign;
            }
        }
    };
    for c in w.iter_mut() {
        *c -= 1;
    }
    result
}

/// Safety net on the number of reflections.
pub fn iteration_bound(datum: &CartanDatum, k: i64, w: &[i64]) -> u64 {
    let size: i64 = w.iter().map(|x| x.abs()).sum::<i64>() + 1;
    let base = ((k + datum.dual_coxeter_hvee) * datum.coxeter_h * (datum.rank() as i64 + 1)) as u64;
    base.saturating_mul(size as u64)
}

/// `pi_k` on the class of `L(w)`: reflect `lambda + rho` into the fundamental alcove.
pub fn alcove_project(datum: &CartanDatum, w: &[i64], k: i64) -> Result<AlcoveResult> {
    alcove_project_with(datum, w, k, ReflectionPolicy::MinIndex)
}

pub fn alcove_project_with(
    datum: &CartanDatum,
    w: &[i64],
    k: i64,
    policy: ReflectionPolicy,
) -> Result<AlcoveResult> {
    check_finite(datum, w)?;
    if k < 1 {
        return Err(Error::Level { min: 1, got: k });
    }
    let mut mu = lift_to_level(datum, w, k);
    for c in mu.iter_mut() {
        *c += 1;
    }
    let bound = iteration_bound(datum, k, w);
    let mut sign: i8 = 1;
    let mut steps = 0u64;
    loop {
        if mu.contains(&0) {
            return Ok(AlcoveResult::Null);
        }
        let pick = match policy {
            ReflectionPolicy::MinIndex => mu.iter().position(|&c| c < 0),
            ReflectionPolicy::MaxIndex => mu.iter().rposition(|&c| c < 0),
        };
        let Some(i) = pick else { break };
        affine_reflect(datum, i, &mut mu);
        sign = -sign;
        steps += 1;
        if steps > bound {
            return Err(Error::Internal(format!(
                "alcove projection of {w:?} at level {k} did not terminate"
            )));
        }
    }
    for c in mu.iter_mut() {
        *c -= 1;
    }
    Ok(AlcoveResult::Signed { sign, weight: mu })
}

/// Reflect a finite weight into the dominant chamber; returns `None` if `w + rho` lies on a wall
/// when `shifted` is set, else the plain dominant representative together with the parity.
pub fn dominant_representative(datum: &CartanDatum, w: &[i64], shifted: bool) -> Option<(i8, Vec<i64>)> {
    let mut v = w.to_vec();
    if shifted {
        for c in v.iter_mut() {
            *c += 1;
        }
    }
    let mut sign = 1i8;
    loop {
        if shifted && v.contains(&0) {
            return None;
        }
        let Some(i) = v.iter().position(|&c| c < 0) else { break };
        finite_reflect(datum, i, &mut v);
        sign = -sign;
    }
    if shifted {
        for c in v.iter_mut() {
            *c -= 1;
        }
    }
    Some((sign, v))
}

/// All dominant level-`k` affine weights, in descending lexicographic order of `(c_0, ..., c_n)`;
/// `k Lambda_0` comes first.
pub fn enumerate_pk_plus(datum: &CartanDatum, k: i64) -> Vec<Vec<i64>> {
    fn rec(comarks: &[i64], pos: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == comarks.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let a = comarks[pos];
        let mut c = left / a;
        loop {
            cur.push(c);
            rec(comarks, pos + 1, left - c * a, cur, out);
            cur.pop();
            if c == 0 {
                break;
            }
            c -= 1;
        }
    }
    let mut out = Vec::new();
    if k >= 0 {
        rec(&datum.comarks, 0, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `lambda^*`: the level-`k` weight whose finite part is `-w_0(lambda_bar)`.
pub fn conjugate_weight(datum: &CartanDatum, lam: &[i64]) -> Result<Vec<i64>> {
    if lam.len() != datum.rank() + 1 {
        return Err(Error::WeightLength {
            weight: lam.to_vec(),
            got: lam.len(),
            expected: datum.rank() + 1,
        });
    }
    if lam.iter().any(|&c| c < 0) {
        return Err(Error::NotDominant(lam.to_vec()));
    }
    let k = datum.level(lam);
    let neg: Vec<i64> = lam[1..].iter().map(|c| -c).collect();
    let (_, dom) = dominant_representative(datum, &neg, false).expect("unshifted reduction always succeeds");
    Ok(lift_to_level(datum, &dom, k))
}

/// Render `2Lambda_0+Lambda_3` style labels.
pub fn format_affine(c: &[i64]) -> String {
    let mut parts = Vec::new();
    for (i, &x) in c.iter().enumerate() {
        match x {
            0 => {}
            1 => parts.push(format!("L{i}")),
            _ => parts.push(format!("{x}L{i}")),
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}
