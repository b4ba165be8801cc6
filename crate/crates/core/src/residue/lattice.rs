//! Lattices of `(Z/p^m)^N` and lattice chains (simplices of the building
//! visible at depth `m`).
//!
//! A lattice `L` with `p^m O^N ⊆ L ⊆ O^N` is determined by its image
//! `L / p^m O^N`, stored here as a bitset over `(Z/p^m)^N`. The apartment
//! vertex `x` (canonical representative with minimum 0) corresponds to
//! `⊕ p^{x_i} O e_i`.

use std::fmt;

use super::group::GroupSpec;
use super::matrix::MatrixModPm;
use crate::apartment::{ApartmentSimplex, ApartmentVertex};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Lattice {
    spec: GroupSpec,
    bits: Vec<u64>,
    size: usize,
    gens: Vec<[u16; 3]>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.bits == other.bits
    }
}

impl Eq for Lattice {}

impl std::hash::Hash for Lattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (other.size, &self.bits).cmp(&(self.size, &other.bits))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<Vec<u16>> = self.gens.iter().map(|g| g[..self.spec.n].to_vec()).collect();
        write!(f, "Lattice(|M|={}, gens={gens:?})", self.size)
    }
}

impl Lattice {
    /// The submodule spanned by `gens`.
    pub fn span(spec: GroupSpec, gens: &[[u16; 3]]) -> Self {
        let total = spec.vector_count();
        let modulus = spec.modulus();
        let mut bits = vec![0u64; total.div_ceil(64)];
        let mut members: Vec<[u16; 3]> = vec![[0; 3]];
        bits[0] |= 1;
        for g in gens {
            let mut next = Vec::new();
            for v in &members {
                let mut cur = *v;
                for _ in 1..modulus {
                    for i in 0..spec.n {
                        cur[i] = (cur[i] + g[i]) % modulus;
                    }
                    let code = spec.encode(&cur) as usize;
                    if bits[code / 64] >> (code % 64) & 1 == 0 {
                        bits[code / 64] |= 1 << (code % 64);
                        next.push(cur);
                    }
                }
            }
            members.extend(next);
        }
        Lattice { spec, size: members.len(), bits, gens: gens.to_vec() }
    }

    /// `⊕ p^{x_i} e_i`; requires `0 ≤ x_i ≤ m`.
    pub fn diagonal(spec: GroupSpec, x: &[i64]) -> Result<Self> {
        if x.iter().any(|&v| v < 0 || v > i64::from(spec.m)) {
            return Err(Error::NotVisible { depth: spec.m, what: format!("lattice exponents {x:?}") });
        }
        let gens: Vec<[u16; 3]> = (0..spec.n)
            .map(|i| {
                let mut g = [0u16; 3];
                g[i] = (u32::from(spec.p).pow(x[i] as u32) % u32::from(spec.modulus())) as u16;
                g
            })
            .collect();
        Ok(Self::span(spec, &gens))
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generators(&self) -> &[[u16; 3]] {
        &self.gens
    }

    /// `log_p |M|`.
    pub fn log_size(&self) -> u32 {
        let mut s = self.size;
        let mut k = 0;
        while s > 1 {
            s /= usize::from(self.spec.p);
            k += 1;
        }
        k
    }

    /// Vertex type of the homothety class.
    pub fn vertex_type(&self) -> usize {
        let n = self.spec.n as i64;
        (i64::from(self.spec.m) * n - i64::from(self.log_size())).rem_euclid(n) as usize
    }

    #[inline]
    pub fn contains(&self, v: &[u16]) -> bool {
        let code = self.spec.encode(v) as usize;
        self.bits[code / 64] >> (code % 64) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// `g·M`.
    pub fn image(&self, g: &MatrixModPm) -> Lattice {
        let gens: Vec<[u16; 3]> = self.gens.iter().map(|v| g.apply(v)).collect();
        Self::span(self.spec, &gens)
    }

    pub fn is_stable_under(&self, g: &MatrixModPm) -> bool {
        self.gens.iter().all(|v| self.contains(&g.apply(v)))
    }

    /// Vectors of `M`.
    pub fn vectors(&self) -> impl Iterator<Item = [u16; 3]> + '_ {
        (0..self.spec.vector_count()).filter(|c| self.bits[c / 64] >> (c % 64) & 1 == 1).map(|c| self.spec.decode(c as u32))
    }

    /// The homothetic lattice contained in `O^N` but not in `p O^N`; a
    /// canonical label for the vertex.
    pub fn primitive(&self) -> Lattice {
        let (p, n) = (self.spec.p, self.spec.n);
        let top = self.spec.modulus() / p;
        let mut cur = self.clone();
        while cur.gens.iter().all(|v| v[..n].iter().all(|&x| x % p == 0)) {
            let mut gens: Vec<[u16; 3]> = cur.gens.iter().map(|v| v.map(|x| x / p)).collect();
            for i in 0..n {
                let mut e = [0u16; 3];
                e[i] = top;
                gens.push(e);
            }
            cur = Lattice::span(self.spec, &gens);
        }
        cur
    }

    /// Submodules `M` with `lower ⊊ M ⊊ upper`.
    pub fn intermediate(lower: &Lattice, upper: &Lattice) -> Vec<Lattice> {
        let mut seen: std::collections::HashSet<Lattice> = std::collections::HashSet::new();
        let mut queue = vec![lower.clone()];
        let mut out = Vec::new();
        while let Some(m) = queue.pop() {
            for v in upper.vectors() {
                if m.contains(&v) {
                    continue;
                }
                let mut gens = m.gens.clone();
                gens.push(v);
                let next = Lattice::span(m.spec, &gens);
                if next.size < upper.size && seen.insert(next.clone()) {
                    out.push(next.clone());
                    queue.push(next);
                }
            }
        }
        out.sort();
        out
    }

    /// `p·M`.
    pub fn times_p(&self) -> Lattice {
        let modulus = self.spec.modulus();
        let gens: Vec<[u16; 3]> =
            self.gens.iter().map(|v| v.map(|x| ((u32::from(x) * u32::from(self.spec.p)) % u32::from(modulus)) as u16)).collect();
        Self::span(self.spec, &gens)
    }
}

/// A chain `L_0 ⊋ L_1 ⊋ … ⊋ L_q ⊋ p L_0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainSimplex {
    lattices: Vec<Lattice>,
    bottom: Lattice,
}

impl ChainSimplex {
    pub fn new(lattices: Vec<Lattice>) -> Result<Self> {
        let n = lattices.first().map(|l| l.spec.n).ok_or_else(|| Error::InvalidSimplex("empty chain".into()))?;
        if lattices.len() > n {
            return Err(Error::InvalidSimplex(format!("chain of length {} in rank {n}", lattices.len())));
        }
        let bottom = lattices[0].times_p();
        let mut all = lattices.clone();
        all.push(bottom.clone());
        for w in all.windows(2) {
            if !(w[1].is_subset_of(&w[0]) && w[1].size < w[0].size) {
                return Err(Error::InvalidSimplex("chain inclusions are not strict".into()));
            }
        }
        Ok(ChainSimplex { lattices, bottom })
    }

    /// The chain of an apartment simplex, anchored at its first vertex (in
    /// type order) whose spread is at most `m - 1`.
    pub fn from_apartment(spec: GroupSpec, sigma: &ApartmentSimplex) -> Result<Self> {
        let reps = sigma.chain_reps();
        let q = reps.len();
        let anchor = (0..q)
            .rev()
            .find(|&j| ApartmentVertex::new(&reps[j]).spread() < i64::from(spec.m))
            .ok_or_else(|| Error::NotVisible { depth: spec.m, what: format!("simplex {sigma:?}") })?;
        // descending from reps[anchor]: reps[anchor-1], …, reps[0], reps[q-1]+1, …, reps[anchor+1]+1
        let shift = *reps[anchor].iter().min().unwrap();
        let mut coords = Vec::with_capacity(q);
        for j in (0..=anchor).rev() {
            coords.push(reps[j].clone());
        }
        for j in (anchor + 1..q).rev() {
            coords.push(reps[j].iter().map(|x| x + 1).collect::<Vec<i64>>());
        }
        let lattices = coords
            .iter()
            .map(|c| Lattice::diagonal(spec, &c.iter().map(|x| x - shift).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattices)
    }

    pub fn lattices(&self) -> &[Lattice] {
        &self.lattices
    }

    /// `p L_0`.
    pub fn bottom(&self) -> &Lattice {
        &self.bottom
    }

    pub fn dim(&self) -> usize {
        self.lattices.len() - 1
    }

    pub fn spec(&self) -> GroupSpec {
        self.lattices[0].spec
    }

    /// `g·L_0 ⊋ g·L_1 ⊋ …`.
    pub fn image(&self, g: &MatrixModPm) -> ChainSimplex {
        ChainSimplex {
            lattices: self.lattices.iter().map(|l| l.image(g)).collect(),
            bottom: self.bottom.image(g),
        }
    }

    /// `L_{i+1}`, with `L_{q+1} = p L_0`.
    pub fn next(&self, i: usize) -> &Lattice {
        self.lattices.get(i + 1).unwrap_or(&self.bottom)
    }

    /// `dim_{F_p} L_i / L_{i+1}`.
    pub fn jumps(&self) -> Vec<u32> {
        (0..self.lattices.len()).map(|i| self.lattices[i].log_size() - self.next(i).log_size()).collect()
    }

    /// Primitive vertex lattices, sorted: equal exactly for equal simplices.
    pub fn vertex_key(&self) -> Vec<Lattice> {
        let mut key: Vec<Lattice> = self.lattices.iter().map(Lattice::primitive).collect();
        key.sort();
        key
    }

    /// Lattices that refine the chain by one vertex, i.e. the extra vertex
    /// of every coface.
    pub fn coface_vertices(&self) -> Vec<Lattice> {
        (0..self.lattices.len()).flat_map(|i| Lattice::intermediate(self.next(i), &self.lattices[i])).collect()
    }

    pub fn types(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.lattices.iter().map(Lattice::vertex_type).collect();
        t.sort_unstable();
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::{fundamental_chamber, Truncation};

    #[test]
    fn primitive_labels_homothety_classes() {
        let spec = GroupSpec::new(2, 3, 2).unwrap();
        let a = Lattice::diagonal(spec, &[0, 1]).unwrap();
        let b = Lattice::diagonal(spec, &[1, 2]).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.primitive(), b.primitive());
        assert_eq!(a.primitive(), a);
        assert_eq!(Lattice::diagonal(spec, &[3, 3]).unwrap().primitive(), Lattice::diagonal(spec, &[0, 0]).unwrap());
    }

    #[test]
    fn intermediate_lattices_are_lines_of_the_quotient() {
        // between p O^N and O^N sit the p + 1 lines of F_p^2, and 7 + 7 subspaces of F_2^3
        let spec = GroupSpec::new(3, 2, 2).unwrap();
        let top = Lattice::diagonal(spec, &[0, 0]).unwrap();
        assert_eq!(Lattice::intermediate(&top.times_p(), &top).len(), 4);
        let spec = GroupSpec::new(2, 2, 3).unwrap();
        let top = Lattice::diagonal(spec, &[0, 0, 0]).unwrap();
        assert_eq!(Lattice::intermediate(&top.times_p(), &top).len(), 14);
        let chain = ChainSimplex::from_apartment(spec, &fundamental_chamber(3)).unwrap();
        assert!(chain.coface_vertices().is_empty());
    }

    #[test]
    fn diagonal_lattices() {
        let spec = GroupSpec::new(2, 2, 2).unwrap();
        let top = Lattice::diagonal(spec, &[0, 0]).unwrap();
        assert_eq!(top.size(), 16);
        assert_eq!(top.vertex_type(), 0);
        let l = Lattice::diagonal(spec, &[1, 0]).unwrap();
        assert_eq!(l.size(), 8);
        assert_eq!(l.vertex_type(), 1);
        assert!(l.is_subset_of(&top));
        assert_eq!(top.times_p(), Lattice::diagonal(spec, &[1, 1]).unwrap());
        assert!(Lattice::diagonal(spec, &[3, 0]).is_err());
    }

    #[test]
    fn chamber_chain_jumps() {
        let spec = GroupSpec::new(2, 2, 3).unwrap();
        let c = ChainSimplex::from_apartment(spec, &fundamental_chamber(3)).unwrap();
        assert_eq!(c.jumps(), vec![1, 1, 1]);
        assert_eq!(c.types(), vec![0, 1, 2]);
        let edge = fundamental_chamber(3).faces().into_iter().find(|f| f.types() == vec![0, 1]).unwrap();
        let e = ChainSimplex::from_apartment(spec, &edge).unwrap();
        assert_eq!(e.jumps().iter().sum::<u32>(), 3);
        assert_eq!(e.types(), vec![0, 1]);
    }

    #[test]
    fn apartment_chains_preserve_types() {
        let spec = GroupSpec::new(2, 3, 3).unwrap();
        let t = Truncation::enumerate(3, 2).unwrap();
        for s in t.all_simplices() {
            let c = ChainSimplex::from_apartment(spec, s).unwrap();
            assert_eq!(c.types(), s.types(), "{s:?}");
            assert_eq!(c.jumps().iter().sum::<u32>(), 3);
        }
        // too deep for m = 1
        let far = ApartmentSimplex::from_coords(2, &[&[2, 0]]).unwrap();
        assert!(ChainSimplex::from_apartment(GroupSpec::new(2, 1, 2).unwrap(), &far).is_err());
    }
}
