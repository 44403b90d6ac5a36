//! Exact sparse Gaussian elimination over the rationals, one equation at a time.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `sum coeffs[s] * s + constant = 0`.
#[derive(Debug, Clone, Default)]
pub struct Equation {
    pub coeffs: BTreeMap<usize, BigRational>,
    pub constant: BigRational,
}

impl Equation {
    pub fn from_ints(coeffs: &BTreeMap<usize, i64>, constant: i64) -> Self {
        Equation {
            coeffs: coeffs
                .iter()
                .filter(|(_, &c)| c != 0)
                .map(|(&s, &c)| (s, BigRational::from_integer(BigInt::from(c))))
                .collect(),
            constant: BigRational::from_integer(BigInt::from(constant)),
        }
    }

    fn axpy(&mut self, a: &BigRational, other: &Equation) {
        for (s, c) in &other.coeffs {
            let slot = self.coeffs.entry(*s).or_insert_with(BigRational::zero);
            *slot -= a * c;
            if slot.is_zero() {
                self.coeffs.remove(s);
            }
        }
        self.constant -= a * &other.constant;
    }
}

/// Rows in reduced echelon form: each row has a pivot with coefficient 1 that appears in no other row.
#[derive(Debug, Default)]
pub struct Eliminator {
    rows: Vec<(usize, Equation)>,
    pivot_row: BTreeMap<usize, usize>,
}

/// Raised when a new equation reduces to `0 = c` with `c != 0`.
#[derive(Debug)]
pub struct Inconsistent;

impl Eliminator {
    pub fn add(&mut self, mut eq: Equation) -> Result<(), Inconsistent> {
        let pivots: Vec<usize> = eq.coeffs.keys().filter(|s| self.pivot_row.contains_key(s)).copied().collect();
        for s in pivots {
            if let Some(c) = eq.coeffs.get(&s).cloned() {
                let r = self.pivot_row[&s];
                eq.axpy(&c, &self.rows[r].1);
            }
        }
        let Some((&p, c)) = eq.coeffs.iter().next() else {
            return if eq.constant.is_zero() { Ok(()) } else { Err(Inconsistent) };
        };
        let inv = BigRational::one() / c.clone();
        for v in eq.coeffs.values_mut() {
            *v *= &inv;
        }
        eq.constant *= &inv;
        for (_, row) in self.rows.iter_mut() {
            if let Some(c) = row.coeffs.get(&p).cloned() {
                row.axpy(&c, &eq);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push((p, eq));
        Ok(())
    }

    /// Symbols whose value is forced: pivot rows with no free symbol left.
    pub fn determined(&self) -> BTreeMap<usize, BigRational> {
        self.rows
            .iter()
            .filter(|(_, row)| row.coeffs.len() == 1)
            .map(|(p, row)| (*p, -row.constant.clone()))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: &[(usize, i64)], k: i64) -> Equation {
        Equation::from_ints(&c.iter().copied().collect(), k)
    }

    #[test]
    fn solves_and_leaves_free_symbols() {
        let mut e = Eliminator::default();
        e.add(eq(&[(0, 1), (1, 1)], -3)).unwrap();
        e.add(eq(&[(0, 1), (1, -1)], -1)).unwrap();
        e.add(eq(&[(2, 1), (3, 1)], 0)).unwrap();
        let d = e.determined();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&0], BigRational::from_integer(2.into()));
        assert_eq!(d[&1], BigRational::from_integer(1.into()));
        assert!(e.add(eq(&[(0, 2), (1, 2)], -7)).is_err());
        e.add(eq(&[(0, 2), (1, 2)], -6)).unwrap();
        assert_eq!(e.rank(), 3);
    }
}
