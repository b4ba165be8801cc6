//! Small square matrices over `Z/p^m` (`N ≤ 3`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 3;

/// An `N × N` matrix with entries reduced mod `modulus`, stored row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatrixModPm {
    n: u8,
    modulus: u16,
    e: [u16; MAX_RANK * MAX_RANK],
}

impl fmt::Debug for MatrixModPm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u16>> = (0..self.rank()).map(|i| (0..self.rank()).map(|j| self.get(i, j)).collect()).collect();
        write!(f, "{rows:?}")
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `modulus`, if it exists.
pub fn inverse_mod(a: i64, modulus: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(modulus), modulus);
    (g == 1).then(|| x.rem_euclid(modulus))
}

impl MatrixModPm {
    /// Row-major entries, reduced into `[0, modulus)`.
    pub fn new(n: usize, modulus: u16, entries: &[i64]) -> Result<Self> {
        if n == 0 || n > MAX_RANK || entries.len() != n * n {
            return Err(Error::OutOfRange(format!("{n}x{n} matrix with {} entries", entries.len())));
        }
        let mut e = [0u16; MAX_RANK * MAX_RANK];
        for i in 0..n {
            for j in 0..n {
                e[i * MAX_RANK + j] = entries[i * n + j].rem_euclid(i64::from(modulus)) as u16;
            }
        }
        Ok(MatrixModPm { n: n as u8, modulus, e })
    }

    pub fn identity(n: usize, modulus: u16) -> Self {
        let mut e = [0u16; MAX_RANK * MAX_RANK];
        for i in 0..n {
            e[i * MAX_RANK + i] = 1 % modulus;
        }
        MatrixModPm { n: n as u8, modulus, e }
    }

    pub fn rank(&self) -> usize {
        usize::from(self.n)
    }

    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.e[i * MAX_RANK + j]
    }

    pub fn entries(&self) -> Vec<u16> {
        let n = self.rank();
        (0..n * n).map(|k| self.get(k / n, k % n)).collect()
    }

    #[inline]
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.rank();
        let m = u32::from(self.modulus);
        let mut e = [0u16; MAX_RANK * MAX_RANK];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for k in 0..n {
                    acc += u32::from(self.get(i, k)) * u32::from(other.get(k, j));
                }
                e[i * MAX_RANK + j] = (acc % m) as u16;
            }
        }
        MatrixModPm { n: self.n, modulus: self.modulus, e }
    }

    pub fn det(&self) -> u16 {
        let m = i64::from(self.modulus);
        let g = |i, j| i64::from(self.get(i, j));
        let d = match self.rank() {
            1 => g(0, 0),
            2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
            _ => {
                g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
        };
        d.rem_euclid(m) as u16
    }

    pub fn is_invertible(&self) -> bool {
        inverse_mod(i64::from(self.det()), i64::from(self.modulus)).is_some()
    }

    pub fn inverse(&self) -> Option<Self> {
        let m = i64::from(self.modulus);
        let dinv = inverse_mod(i64::from(self.det()), m)?;
        let n = self.rank();
        let g = |i: usize, j: usize| i64::from(self.get(i, j));
        let mut adj = vec![0i64; n * n];
        match n {
            1 => adj[0] = 1,
            2 => {
                adj = vec![g(1, 1), -g(0, 1), -g(1, 0), g(0, 0)];
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i)
                        let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                        let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                        let minor = g(rows[0], cols[0]) * g(rows[1], cols[1]) - g(rows[0], cols[1]) * g(rows[1], cols[0]);
                        adj[i * 3 + j] = if (i + j) % 2 == 0 { minor } else { -minor };
                    }
                }
            }
        }
        let entries: Vec<i64> = adj.iter().map(|a| a * dinv).collect();
        Some(Self::new(n, self.modulus, &entries).expect("shape"))
    }

    /// `g·v` for a column vector.
    #[inline]
    pub fn apply(&self, v: &[u16]) -> [u16; MAX_RANK] {
        let n = self.rank();
        let m = u32::from(self.modulus);
        let mut out = [0u16; MAX_RANK];
        for (i, slot) in out.iter_mut().enumerate().take(n) {
            let mut acc = 0u32;
            for (k, &x) in v.iter().enumerate().take(n) {
                acc += u32::from(self.get(i, k)) * u32::from(x);
            }
            *slot = (acc % m) as u16;
        }
        out
    }

    /// `self - 1`, as a matrix (not necessarily invertible).
    pub fn minus_identity(&self) -> Self {
        let mut out = *self;
        for i in 0..self.rank() {
            let k = i * MAX_RANK + i;
            out.e[k] = ((u32::from(out.e[k]) + u32::from(self.modulus) - 1) % u32::from(self.modulus)) as u16;
        }
        out
    }

    /// Reduction to a smaller modulus dividing this one.
    pub fn reduce(&self, modulus: u16) -> Self {
        let mut out = *self;
        out.modulus = modulus;
        for x in out.e.iter_mut() {
            *x %= modulus;
        }
        out
    }

    /// The matrix with `entries[i][j]` given by a closure.
    pub fn from_fn(n: usize, modulus: u16, f: impl Fn(usize, usize) -> i64) -> Self {
        let entries: Vec<i64> = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(n, modulus, &entries).expect("shape")
    }
}

/// `p`-adic valuation of `x` in `Z/p^m` (`m` for zero).
pub fn valuation(x: u16, p: u16, m: u32) -> u32 {
    if x == 0 {
        return m;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_and_det() {
        let a = MatrixModPm::new(2, 8, &[1, 2, 3, 5]).unwrap();
        assert_eq!(a.det(), 7);
        let b = a.inverse().unwrap();
        assert_eq!(a.mul(&b), MatrixModPm::identity(2, 8));
        let sing = MatrixModPm::new(2, 4, &[2, 0, 0, 1]).unwrap();
        assert!(sing.inverse().is_none());
        assert_eq!(valuation(4, 2, 3), 2);
        assert_eq!(valuation(0, 2, 3), 3);
    }

    proptest! {
        #[test]
        fn inverse_3x3(es in proptest::collection::vec(0i64..9, 9)) {
            let a = MatrixModPm::new(3, 9, &es).unwrap();
            if let Some(b) = a.inverse() {
                prop_assert_eq!(a.mul(&b), MatrixModPm::identity(3, 9));
                prop_assert_eq!(b.mul(&a), MatrixModPm::identity(3, 9));
            } else {
                prop_assert_eq!(a.det() % 3, 0);
            }
        }

        #[test]
        fn det_is_multiplicative(a in proptest::collection::vec(0i64..4, 9), b in proptest::collection::vec(0i64..4, 9)) {
            let a = MatrixModPm::new(3, 4, &a).unwrap();
            let b = MatrixModPm::new(3, 4, &b).unwrap();
            prop_assert_eq!(u32::from(a.mul(&b).det()), u32::from(a.det()) * u32::from(b.det()) % 4);
        }
    }
}
