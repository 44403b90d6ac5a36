//! Sparse Laurent polynomials with integer coefficients over the initial cluster.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sum c_e x^e` with `e` in `Z^n`; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i32>, i128>,
}

fn overflow() -> Error {
    Error::Internal("Laurent coefficient overflow".into())
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exps: Vec<i32>, c: i128) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], 1)
    }

    /// The initial variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: &[i32], c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        if let Some(v) = self.terms.get_mut(e) {
            *v = v.checked_add(c).ok_or_else(overflow)?;
            if *v == 0 {
                self.terms.remove(e);
            }
        } else {
            self.terms.insert(e.to_vec(), c);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, *c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, -*c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.nvars);
        let mut e = vec![0i32; self.nvars];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for i in 0..self.nvars {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(&e, ca.checked_mul(*cb).ok_or_else(overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn coordinate_bounds(&self) -> (Vec<i32>, Vec<i32>) {
        let mut lo = vec![i32::MAX; self.nvars];
        let mut hi = vec![i32::MIN; self.nvars];
        for e in self.terms.keys() {
            for i in 0..self.nvars {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        (lo, hi)
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self` in the Laurent ring.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (lead_d, cd) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), *c)).ok_or(Error::LaurentDivision)?;
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        // Quotient exponents are confined to the box allowed by the coordinate ranges.
        let (alo, ahi) = self.coordinate_bounds();
        let (dlo, dhi) = d.coordinate_bounds();
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((lead_r, cr)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
            if cr % cd != 0 {
                return Err(Error::LaurentDivision);
            }
            let qe: Vec<i32> = lead_r.iter().zip(&lead_d).map(|(a, b)| a - b).collect();
            for i in 0..self.nvars {
                if qe[i] < alo[i] - dlo[i] || qe[i] > ahi[i] - dhi[i] {
                    return Err(Error::LaurentDivision);
                }
            }
            let qt = Self::monomial(qe.clone(), cr / cd);
            rem = rem.sub(&qt.mul(d)?)?;
            q.add_term(&qe, cr / cd)?;
        }
        Ok(q)
    }

    /// Evaluate at a point modulo a prime, with inverses for negative exponents.
    pub fn eval_mod(&self, point: &[u64], inv_point: &[u64], p: u64) -> u64 {
        let mut s: u64 = 0;
        for (e, c) in &self.terms {
            let mut t = (c.rem_euclid(p as i128)) as u64;
            for i in 0..self.nvars {
                let (base, k) = if e[i] >= 0 { (point[i], e[i] as u64) } else { (inv_point[i], (-e[i]) as u64) };
                if k > 0 {
                    t = mulmod(t, powmod(base, k, p), p);
                }
            }
            s = (s + t) % p;
        }
        s
    }

    /// All coefficients non-negative.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Render with 1-based variable names, denominators folded into negative exponents.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, k)),
                }
            }
            let mono = factors.join("*");
            parts.push(match (*c, mono.is_empty()) {
                (c, true) => c.to_string(),
                (1, false) => mono,
                (-1, false) => format!("-{mono}"),
                (c, false) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    /// Parse the output of [`LaurentPoly::to_text`].
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let bad = || Error::Parse { what: "Laurent polynomial", input: text.to_string() };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Self::zero(nvars));
        }
        let mut out = Self::zero(nvars);
        // Split into signed terms.
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1i128, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let mut coeff: i128 = sign;
            let mut e = vec![0i32; nvars];
            for f in body.split('*') {
                if let Some(v) = f.strip_prefix('x') {
                    let (idx, pw) = match v.split_once('^') {
                        Some((a, b)) => (a, b.parse::<i32>().map_err(|_| bad())?),
                        None => (v, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad())?;
                    if idx == 0 || idx > nvars {
                        return Err(bad());
                    }
                    e[idx - 1] += pw;
                } else {
                    coeff *= f.parse::<i128>().map_err(|_| bad())?;
                }
            }
            out.add_term(&e, coeff)?;
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime by Fermat.
pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_roundtrip() {
        let x = LaurentPoly::var(3, 0);
        let y = LaurentPoly::var(3, 1);
        let z = LaurentPoly::var(3, 2);
        let a = x.add(&y).unwrap().mul(&z.add(&LaurentPoly::one(3)).unwrap()).unwrap();
        let b = z.add(&LaurentPoly::one(3)).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), x.add(&y).unwrap());
        let inv = LaurentPoly::monomial(vec![-1, 0, 0], 1);
        assert_eq!(a.mul(&inv).unwrap().div_exact(&b).unwrap(), x.add(&y).unwrap().mul(&inv).unwrap());
    }

    #[test]
    fn inexact_division_fails() {
        let x = LaurentPoly::var(2, 0);
        let y = LaurentPoly::var(2, 1);
        let num = x.add(&LaurentPoly::one(2)).unwrap();
        assert!(num.div_exact(&x.add(&y).unwrap()).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let p = LaurentPoly::parse("x1*x2^-1 + 2*x3 - 1", 3).unwrap();
        assert_eq!(LaurentPoly::parse(&p.to_text(), 3).unwrap(), p);
        assert_eq!(p.len(), 3);
    }
}
