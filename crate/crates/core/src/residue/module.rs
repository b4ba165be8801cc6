//! Permutation modules `Q[G_m / H]` and their fixed spaces.

use std::collections::HashMap;

use num_traits::Zero;

use super::algebra::GroupAlgebraElement;
use super::group::{FiniteGroup, GroupSpec, Subgroup};
use super::matrix::MatrixModPm;
use crate::error::{Error, Result};
use crate::linalg::{basis_of_span, span_rank, Matrix};
use crate::rational::{q_frac, Q};

/// `Q[G/H]` with basis the left cosets `gH`; `G` acts by left translation.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    spec: GroupSpec,
    reps: Vec<MatrixModPm>,
    coset_of: HashMap<MatrixModPm, u32>,
    stabilizer_order: usize,
}

pub fn permutation_module(group: &FiniteGroup, h: &Subgroup, budget: u64) -> Result<FiniteModule> {
    if h.spec() != group.spec() {
        return Err(Error::GroupMismatch);
    }
    let index = (group.order() / h.order()) as u64;
    if index > budget {
        return Err(Error::BudgetExceeded { needed: index, budget });
    }
    let (reps, coset_of) = group.whole().left_cosets(h);
    Ok(FiniteModule { spec: group.spec(), reps, coset_of, stabilizer_order: h.order() })
}

impl FiniteModule {
    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_reps(&self) -> &[MatrixModPm] {
        &self.reps
    }

    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer_order
    }

    /// Index of the coset `g·(basis element i)`.
    #[inline]
    pub fn act_basis(&self, g: &MatrixModPm, i: usize) -> usize {
        self.coset_of[&g.mul(&self.reps[i])] as usize
    }

    /// The permutation of the basis induced by `g`.
    pub fn permutation(&self, g: &MatrixModPm) -> Vec<usize> {
        (0..self.dim()).map(|i| self.act_basis(g, i)).collect()
    }

    pub fn act(&self, g: &MatrixModPm, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[self.act_basis(g, i)] += x;
            }
        }
        out
    }

    /// `f·v = Σ_g f(g) g·v`.
    pub fn apply(&self, f: &GroupAlgebraElement, v: &[Q]) -> Result<Vec<Q>> {
        if f.spec() != self.spec {
            return Err(Error::GroupMismatch);
        }
        let mut out = vec![Q::zero(); self.dim()];
        for (g, c) in f.terms() {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out[self.act_basis(g, i)] += c * x;
                }
            }
        }
        Ok(out)
    }

    /// `e_H · v` by summing over all of `H`.
    pub fn average(&self, h: &Subgroup, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        let w = q_frac(1, h.order() as i64);
        for g in h.elements() {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out[self.act_basis(g, i)] += x * &w;
                }
            }
        }
        out
    }

    /// Smallest subspace containing `vectors` and stable under `gens`.
    pub fn span_under(&self, gens: &[MatrixModPm], vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let mut basis = basis_of_span(vectors);
        loop {
            let mut all = basis.clone();
            for g in gens {
                for b in &basis {
                    all.push(self.act(g, b));
                }
            }
            let next = basis_of_span(&all);
            if next.len() == basis.len() {
                return basis;
            }
            basis = next;
        }
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::from_integer(1.into());
        v
    }
}

/// Basis of `V^H` together with the rank of the averaging operator.
#[derive(Clone, Debug)]
pub struct FixedSpace {
    /// Orbit sums of `H` on the coset basis.
    pub basis: Vec<Vec<Q>>,
    pub averaging_rank: usize,
}

impl FixedSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `H`-orbits on the coset basis, found with a generating set of `H`.
pub fn orbits(v: &FiniteModule, h: &Subgroup) -> Vec<Vec<usize>> {
    let gens = h.generators();
    let mut label = vec![usize::MAX; v.dim()];
    let mut out = Vec::new();
    for start in 0..v.dim() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut k = 0;
        while k < orbit.len() {
            let i = orbit[k];
            k += 1;
            for g in &gens {
                let j = v.act_basis(g, i);
                if label[j] == usize::MAX {
                    label[j] = id;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

pub fn fixed_vectors(v: &FiniteModule, h: &Subgroup) -> FixedSpace {
    let basis: Vec<Vec<Q>> = orbits(v, h)
        .into_iter()
        .map(|orbit| {
            let mut x = vec![Q::zero(); v.dim()];
            for i in orbit {
                x[i] = Q::from_integer(1.into());
            }
            x
        })
        .collect();
    let columns: Vec<Vec<Q>> = (0..v.dim()).map(|i| v.average(h, &v.unit_vector(i))).collect();
    let averaging_rank = Matrix::from_columns(v.dim(), &columns).rank();
    FixedSpace { basis, averaging_rank }
}

/// Whether the `G`-span of `V^I` is all of `V`.
pub fn generated_by_fixed(v: &FiniteModule, group: &FiniteGroup, i: &Subgroup) -> bool {
    let fixed = fixed_vectors(v, i);
    span_rank(&v.span_under(&group.whole().generators(), &fixed.basis)) == v.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::fundamental_chamber;
    use crate::residue::group::DEFAULT_BUDGET;
    use crate::residue::lattice::ChainSimplex;
    use crate::residue::subgroup::{subgroup_of_simplex, SubgroupKind};

    fn gl(p: u16, m: u32, n: usize) -> FiniteGroup {
        FiniteGroup::gl(GroupSpec::new(p, m, n).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    fn iwahori(g: &FiniteGroup) -> Subgroup {
        let chain = ChainSimplex::from_apartment(g.spec(), &fundamental_chamber(g.spec().n)).unwrap();
        subgroup_of_simplex(g, &chain, SubgroupKind::IwahoriOfChamber).unwrap()
    }

    #[test]
    fn module_dimensions() {
        let g = gl(2, 1, 2);
        assert_eq!(permutation_module(&g, &g.whole(), DEFAULT_BUDGET).unwrap().dim(), 1);
        let b = iwahori(&g);
        assert_eq!(permutation_module(&g, &b, DEFAULT_BUDGET).unwrap().dim(), 3);
        let g4 = gl(2, 2, 2);
        assert_eq!(permutation_module(&g4, &iwahori(&g4), DEFAULT_BUDGET).unwrap().dim(), 3);
        assert!(permutation_module(&g4, &Subgroup::trivial(g4.spec()), 10).is_err());
    }

    #[test]
    fn fixed_space_examples() {
        let g = gl(2, 1, 2);
        let b = iwahori(&g);
        let v = permutation_module(&g, &b, DEFAULT_BUDGET).unwrap();
        let f = fixed_vectors(&v, &b);
        assert_eq!(f.dim(), 2);
        assert_eq!(f.averaging_rank, 2);
        let all = fixed_vectors(&v, &Subgroup::trivial(g.spec()));
        assert_eq!(all.dim(), 3);
        for x in &f.basis {
            for h in b.elements() {
                assert_eq!(&v.act(h, x), x);
            }
        }
    }

    #[test]
    fn iwahori_fixed_dimension_is_finite_weyl_order() {
        // I \ G_m / I is indexed by the chambers through the standard vertex
        let through_origin = |n: usize| {
            crate::affine_weyl::parabolic_subgroup(n, &(1..n).collect()).unwrap().len()
        };
        for (p, m, n) in [(2, 1, 2), (2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 1, 3), (2, 2, 3)] {
            let g = gl(p, m, n);
            let i = iwahori(&g);
            let v = permutation_module(&g, &i, DEFAULT_BUDGET).unwrap();
            let f = fixed_vectors(&v, &i);
            assert_eq!(f.dim(), through_origin(n));
            assert_eq!(f.averaging_rank, f.dim());
            assert!(generated_by_fixed(&v, &g, &i));
        }
    }

    #[test]
    fn apply_matches_average() {
        let g = gl(3, 1, 2);
        let b = iwahori(&g);
        let v = permutation_module(&g, &b, DEFAULT_BUDGET).unwrap();
        let e = GroupAlgebraElement::idempotent(&b);
        for i in 0..v.dim() {
            let x = v.unit_vector(i);
            assert_eq!(v.apply(&e, &x).unwrap(), v.average(&b, &x));
        }
    }
}
