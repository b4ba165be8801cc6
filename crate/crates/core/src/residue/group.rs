//! The finite groups `GL(N, Z/p^m)` and their subgroups.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::matrix::MatrixModPm;
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};

/// Default cap on enumerated group elements.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// `(p, m, N)`: which congruence quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub p: u16,
    pub m: u32,
    pub n: usize,
}

fn is_prime(p: u16) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl GroupSpec {
    pub fn new(p: u16, m: u32, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::OutOfRange(format!("p = {p} is not prime")));
        }
        if m == 0 || !(2..=super::matrix::MAX_RANK).contains(&n) {
            return Err(Error::OutOfRange(format!("depth {m}, rank {n}")));
        }
        let modulus = u64::from(p).checked_pow(m).filter(|&x| x <= u64::from(u16::MAX) / 2);
        if modulus.is_none() {
            return Err(Error::OutOfRange(format!("p^m = {p}^{m} too large")));
        }
        Ok(GroupSpec { p, m, n })
    }

    pub fn modulus(&self) -> u16 {
        self.p.pow(self.m)
    }

    /// `|GL(N, F_p)| · p^{(m-1)N²}`, saturating.
    pub fn order(&self) -> u64 {
        let p = u64::from(self.p);
        let n = self.n as u32;
        let mut ord: u64 = 1;
        for k in 0..n {
            ord = ord.saturating_mul(p.pow(n) - p.pow(k));
        }
        for _ in 0..(self.m - 1) * n * n {
            ord = ord.saturating_mul(p);
        }
        ord
    }

    /// Number of vectors in `(Z/p^m)^N`.
    pub fn vector_count(&self) -> usize {
        usize::from(self.modulus()).pow(self.n as u32)
    }

    pub fn encode(&self, v: &[u16]) -> u32 {
        let m = u32::from(self.modulus());
        v.iter().take(self.n).rev().fold(0, |acc, &x| acc * m + u32::from(x))
    }

    pub fn decode(&self, mut code: u32) -> [u16; 3] {
        let m = u32::from(self.modulus());
        let mut out = [0u16; 3];
        for slot in out.iter_mut().take(self.n) {
            *slot = (code % m) as u16;
            code /= m;
        }
        out
    }

    pub fn identity(&self) -> MatrixModPm {
        MatrixModPm::identity(self.n, self.modulus())
    }
}

/// A fully enumerated `GL(N, Z/p^m)`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    spec: GroupSpec,
    elements: Vec<MatrixModPm>,
}

impl FiniteGroup {
    pub fn gl(spec: GroupSpec, budget: u64) -> Result<Self> {
        let order = spec.order();
        if order > budget {
            return Err(Error::BudgetExceeded { needed: order, budget });
        }
        let modulus = spec.modulus();
        let n = spec.n;
        let cells = n * n;
        let total = u64::from(modulus).pow(cells as u32);
        let firsts: Vec<u16> = (0..modulus).collect();
        let per_first = total / u64::from(modulus);
        let chunks = exec::map(ExecMode::Parallel, &firsts, |&first| {
            let mut out = Vec::new();
            let mut entries = vec![0i64; cells];
            for code in 0..per_first {
                let mut c = code;
                entries[0] = i64::from(first);
                for slot in entries.iter_mut().skip(1) {
                    *slot = (c % u64::from(modulus)) as i64;
                    c /= u64::from(modulus);
                }
                let g = MatrixModPm::new(n, modulus, &entries).expect("shape");
                if g.is_invertible() {
                    out.push(g);
                }
            }
            out
        });
        let mut elements: Vec<MatrixModPm> = chunks.into_iter().flatten().collect();
        elements.sort();
        if elements.len() as u64 != order {
            return Err(Error::InvariantBreach(format!("enumerated {} elements, expected {order}", elements.len())));
        }
        Ok(FiniteGroup { spec, elements })
    }

    /// Rebuilds from a previously enumerated (e.g. cached) element list.
    pub fn from_elements(spec: GroupSpec, mut elements: Vec<MatrixModPm>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.len() as u64 != spec.order() || elements.iter().any(|g| !g.is_invertible() || g.rank() != spec.n) {
            return Err(Error::InvariantBreach("cached group does not match its header".into()));
        }
        Ok(FiniteGroup { spec, elements })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[MatrixModPm] {
        &self.elements
    }

    pub fn contains(&self, g: &MatrixModPm) -> bool {
        g.rank() == self.spec.n && g.modulus() == self.spec.modulus() && g.is_invertible()
    }

    pub fn identity(&self) -> MatrixModPm {
        self.spec.identity()
    }

    /// Deterministic pseudo-random element.
    pub fn sample(&self, rng: &mut impl rand::Rng) -> MatrixModPm {
        self.elements[rng.gen_range(0..self.elements.len())]
    }

    /// The subgroup of elements satisfying `pred` (which must define one).
    pub fn filter(&self, pred: impl Fn(&MatrixModPm) -> bool + Sync + Send) -> Subgroup {
        let keep = exec::map(ExecMode::Parallel, &self.elements, |g| pred(g));
        let elements = self.elements.iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| *g).collect();
        Subgroup::from_sorted(self.spec, elements)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.spec, self.elements.clone())
    }
}

/// A subgroup, stored as its sorted element list plus a membership set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    spec: GroupSpec,
    elements: Vec<MatrixModPm>,
    set: HashSet<MatrixModPm>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    fn from_sorted(spec: GroupSpec, elements: Vec<MatrixModPm>) -> Self {
        let set = elements.iter().copied().collect();
        Subgroup { spec, elements, set }
    }

    pub fn from_elements(spec: GroupSpec, mut elements: Vec<MatrixModPm>) -> Self {
        elements.sort();
        elements.dedup();
        Self::from_sorted(spec, elements)
    }

    pub fn trivial(spec: GroupSpec) -> Self {
        Self::from_sorted(spec, vec![spec.identity()])
    }

    /// Closure of `gens` under multiplication (breadth-first).
    pub fn generated(spec: GroupSpec, gens: &[MatrixModPm]) -> Self {
        let id = spec.identity();
        let mut seen: HashSet<MatrixModPm> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.mul(g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<MatrixModPm> = seen.iter().copied().collect();
        elements.sort();
        Subgroup { spec, elements, set: seen }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[MatrixModPm] {
        &self.elements
    }

    pub fn contains(&self, g: &MatrixModPm) -> bool {
        self.set.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let (small, big) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        Self::from_sorted(self.spec, small.elements.iter().filter(|g| big.contains(g)).copied().collect())
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<MatrixModPm> {
        let mut gens = Vec::new();
        let mut closure: HashSet<MatrixModPm> = HashSet::from([self.spec.identity()]);
        for g in &self.elements {
            if closure.contains(g) {
                continue;
            }
            gens.push(*g);
            closure = Subgroup::generated(self.spec, &gens).set;
            if closure.len() == self.order() {
                break;
            }
        }
        gens
    }

    /// `⟨self, other⟩`.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Subgroup::generated(self.spec, &gens)
    }

    /// `|AB| = |A||B| / |A ∩ B|`.
    pub fn product_order(&self, other: &Subgroup) -> usize {
        self.order() * other.order() / self.intersect(other).order()
    }

    /// The set `AB`, enumerated.
    pub fn product_set(&self, other: &Subgroup) -> HashSet<MatrixModPm> {
        let mut out = HashSet::with_capacity(self.product_order(other));
        for a in &self.elements {
            for b in &other.elements {
                out.insert(a.mul(b));
            }
        }
        out
    }

    /// Whether `self` is normalised by every element of `ambient`.
    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        let mine = self.generators();
        ambient.generators().iter().all(|g| {
            let gi = g.inverse().expect("group element");
            mine.iter().all(|u| self.contains(&g.mul(u).mul(&gi)))
        })
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, g: &MatrixModPm) -> Subgroup {
        let gi = g.inverse().expect("invertible");
        Subgroup::from_elements(self.spec, self.elements.iter().map(|h| g.mul(h).mul(&gi)).collect())
    }

    /// Left coset representatives of `sub` in `self`, and the coset index of
    /// every element of `self`.
    pub fn left_cosets(&self, sub: &Subgroup) -> (Vec<MatrixModPm>, HashMap<MatrixModPm, u32>) {
        let mut reps = Vec::new();
        let mut index = HashMap::with_capacity(self.order());
        for g in &self.elements {
            if index.contains_key(g) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(*g);
            for h in &sub.elements {
                index.insert(g.mul(h), id);
            }
        }
        (reps, index)
    }
}

/// `|GL(e, F_p)|`.
pub fn gl_order(e: u32, p: u64) -> u64 {
    (0..e).map(|k| p.pow(e) - p.pow(k)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u16, m: u32, n: usize) -> FiniteGroup {
        FiniteGroup::gl(GroupSpec::new(p, m, n).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group(2, 1, 2).order(), 6);
        assert_eq!(group(2, 2, 2).order(), 96);
        assert_eq!(group(2, 1, 3).order(), 168);
        assert_eq!(group(3, 1, 2).order(), 48);
        assert_eq!(group(2, 3, 2).order(), 1536);
        assert_eq!(GroupSpec::new(3, 3, 2).unwrap().order(), 314_928);
        assert_eq!(GroupSpec::new(2, 2, 3).unwrap().order(), 86_016);
    }

    #[test]
    fn budget_and_validation() {
        let spec = GroupSpec::new(5, 1, 3).unwrap();
        assert!(matches!(FiniteGroup::gl(spec, DEFAULT_BUDGET), Err(Error::BudgetExceeded { .. })));
        assert!(GroupSpec::new(4, 1, 2).is_err());
        assert!(GroupSpec::new(2, 1, 4).is_err());
        assert!(GroupSpec::new(2, 0, 2).is_err());
    }

    #[test]
    fn vector_codes_roundtrip() {
        let spec = GroupSpec::new(3, 2, 3).unwrap();
        for code in [0u32, 1, 80, 728] {
            assert_eq!(spec.encode(&spec.decode(code)), code);
        }
    }

    #[test]
    fn closure_and_cosets() {
        let g = group(2, 1, 2);
        let spec = g.spec();
        let lower = g.filter(|x| x.get(0, 1) == 0);
        assert_eq!(lower.order(), 2);
        assert_eq!(Subgroup::generated(spec, &lower.generators()), lower);
        let (reps, idx) = g.whole().left_cosets(&lower);
        assert_eq!(reps.len(), 3);
        assert_eq!(idx.len(), 6);
        assert_eq!(g.whole().join(&Subgroup::trivial(spec)), g.whole());
        let kernel = group(2, 2, 2).filter(|x| x.reduce(2) == MatrixModPm::identity(2, 2));
        assert_eq!(kernel.order(), 16);
        assert!(kernel.is_normal_in(&group(2, 2, 2).whole()));
        assert!(!lower.is_normal_in(&g.whole()));
    }

    #[test]
    fn product_counts_agree_with_enumeration() {
        let g = group(3, 1, 2);
        let lower = g.filter(|x| x.get(0, 1) == 0);
        let upper = g.filter(|x| x.get(1, 0) == 0);
        assert_eq!(lower.product_set(&upper).len(), lower.product_order(&upper));
        assert_eq!(gl_order(2, 3), 48);
    }
}
