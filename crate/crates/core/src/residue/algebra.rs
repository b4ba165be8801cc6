//! Functions on `G_m` under convolution with counting measure.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::group::{GroupSpec, Subgroup};
use super::matrix::MatrixModPm;
use crate::error::{Error, Result};
use crate::rational::{q_frac, q_int, Q};

/// A finitely supported function `G_m → Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    spec: GroupSpec,
    terms: BTreeMap<MatrixModPm, Q>,
}

impl GroupAlgebraElement {
    pub fn zero(spec: GroupSpec) -> Self {
        GroupAlgebraElement { spec, terms: BTreeMap::new() }
    }

    pub fn delta(spec: GroupSpec, g: MatrixModPm) -> Self {
        Self::indicator(spec, [g], Q::one())
    }

    /// `c · 1_S`.
    pub fn indicator(spec: GroupSpec, set: impl IntoIterator<Item = MatrixModPm>, c: Q) -> Self {
        let mut out = Self::zero(spec);
        for g in set {
            out.add_at(g, c.clone());
        }
        out
    }

    /// `e_H = |H|^{-1} 1_H`.
    pub fn idempotent(h: &Subgroup) -> Self {
        Self::indicator(h.spec(), h.elements().iter().copied(), q_frac(1, h.order() as i64))
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn terms(&self) -> &BTreeMap<MatrixModPm, Q> {
        &self.terms
    }

    pub fn value(&self, g: &MatrixModPm) -> Q {
        self.terms.get(g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &MatrixModPm> {
        self.terms.keys()
    }

    fn add_at(&mut self, g: MatrixModPm, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.spec);
        for (g, x) in &self.terms {
            out.add_at(*g, x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (g, x) in &other.terms {
            out.add_at(*g, x.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&q_int(-1)))
    }

    /// Level sets `{value: support}`, used by the counting fast path.
    fn level_sets(&self) -> Vec<(Q, Vec<MatrixModPm>)> {
        let mut by_value: HashMap<Q, Vec<MatrixModPm>> = HashMap::new();
        for (g, x) in &self.terms {
            by_value.entry(x.clone()).or_default().push(*g);
        }
        let mut out: Vec<_> = by_value.into_iter().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// `(f ⋆ g)(x) = Σ_y f(y) g(y^{-1} x)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.spec);
        let right = other.level_sets();
        for (a, ys) in self.level_sets() {
            for (b, zs) in &right {
                let mut counts: HashMap<MatrixModPm, u64> = HashMap::new();
                for y in &ys {
                    for z in zs {
                        *counts.entry(y.mul(z)).or_insert(0) += 1;
                    }
                }
                let ab = &a * b;
                let mut keys: Vec<_> = counts.into_iter().collect();
                keys.sort_unstable();
                for (x, k) in keys {
                    out.add_at(x, &ab * q_int(k as i64));
                }
            }
        }
        Ok(out)
    }

    /// Left-to-right convolution of several factors.
    pub fn product(factors: &[&Self]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or_else(|| Error::Precondition("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, f| acc.convolve(f))
    }

    /// `x ↦ f(x^{-1})`, an anti-automorphism of the convolution algebra.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.spec);
        for (g, x) in &self.terms {
            out.add_at(g.inverse().expect("group element"), x.clone());
        }
        out
    }
}
