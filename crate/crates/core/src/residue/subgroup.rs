//! Parahoric, Iwahori and pro-unipotent images attached to lattice chains.

use serde::{Deserialize, Serialize};

use super::group::{gl_order, FiniteGroup, Subgroup};
use super::lattice::ChainSimplex;
use super::matrix::MatrixModPm;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupKind {
    Parahoric,
    ProUnipotent,
    IwahoriOfChamber,
}

/// Whether `g` stabilises every lattice of the chain.
pub fn stabilizes(chain: &ChainSimplex, g: &MatrixModPm) -> bool {
    chain.lattices().iter().all(|l| l.is_stable_under(g))
}

/// Whether `(g - 1) L_i ⊆ L_{i+1}` for every `i`.
pub fn acts_trivially_on_quotients(chain: &ChainSimplex, g: &MatrixModPm) -> bool {
    let h = g.minus_identity();
    chain
        .lattices()
        .iter()
        .enumerate()
        .all(|(i, l)| l.generators().iter().all(|v| chain.next(i).contains(&h.apply(v))))
}

pub fn subgroup_of_simplex(group: &FiniteGroup, chain: &ChainSimplex, kind: SubgroupKind) -> Result<Subgroup> {
    if chain.spec() != group.spec() {
        return Err(Error::GroupMismatch);
    }
    match kind {
        SubgroupKind::Parahoric => Ok(group.filter(|g| stabilizes(chain, g))),
        SubgroupKind::ProUnipotent => Ok(group.filter(|g| stabilizes(chain, g) && acts_trivially_on_quotients(chain, g))),
        SubgroupKind::IwahoriOfChamber => {
            if chain.dim() + 1 != group.spec().n {
                return Err(Error::InvalidSimplex(format!("an Iwahori needs a chamber, got dimension {}", chain.dim())));
            }
            Ok(group.filter(|g| stabilizes(chain, g)))
        }
    }
}

/// `P_σ` and `U_σ` together with the structural checks.
#[derive(Clone, Debug)]
pub struct ParahoricPair {
    pub parahoric: Subgroup,
    pub radical: Subgroup,
    pub jumps: Vec<u32>,
    /// Whether `(Z/p^m)^N` itself is one of the chain lattices.
    pub through_standard_lattice: bool,
}

impl ParahoricPair {
    pub fn build(group: &FiniteGroup, chain: &ChainSimplex) -> Result<Self> {
        let parahoric = subgroup_of_simplex(group, chain, SubgroupKind::Parahoric)?;
        let radical = Subgroup::from_elements(
            group.spec(),
            parahoric.elements().iter().filter(|g| acts_trivially_on_quotients(chain, g)).copied().collect(),
        );
        let full = group.spec().vector_count();
        let through_standard_lattice = chain.lattices().iter().any(|l| l.size() == full);
        Ok(ParahoricPair { parahoric, radical, jumps: chain.jumps(), through_standard_lattice })
    }

    /// `Π_i |GL(e_i, F_p)|`.
    pub fn expected_quotient_order(&self) -> u64 {
        let p = u64::from(self.parahoric.spec().p);
        self.jumps.iter().map(|&e| gl_order(e, p)).product()
    }

    pub fn quotient_order(&self) -> u64 {
        (self.parahoric.order() / self.radical.order()) as u64
    }

    /// Normality of the radical and the Levi-quotient order.
    ///
    /// Inside `GL(N, Z/p^m)` the parahoric image is that of `P_σ ∩ GL(N, O)`;
    /// the full Levi order is reached exactly when the chain passes through
    /// the standard lattice, and otherwise the quotient is a parabolic of the
    /// Levi, whose order divides it.
    pub fn validate(&self) -> Result<()> {
        if !self.radical.is_normal_in(&self.parahoric) {
            return Err(Error::InvariantBreach("pro-unipotent image is not normal".into()));
        }
        let (got, full) = (self.quotient_order(), self.expected_quotient_order());
        let ok = self.parahoric.order().is_multiple_of(self.radical.order())
            && if self.through_standard_lattice { got == full } else { full % got == 0 };
        if !ok {
            return Err(Error::InvariantBreach(format!(
                "|P/U| = {got} but the jumps {:?} predict {full}",
                self.jumps
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::{fundamental_chamber, ApartmentSimplex, Truncation};
    use crate::residue::group::{GroupSpec, DEFAULT_BUDGET};

    fn group(p: u16, m: u32, n: usize) -> FiniteGroup {
        FiniteGroup::gl(GroupSpec::new(p, m, n).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn iwahori_of_standard_chamber() {
        let g = group(2, 2, 2);
        let chain = ChainSimplex::from_apartment(g.spec(), &fundamental_chamber(2)).unwrap();
        let i = subgroup_of_simplex(&g, &chain, SubgroupKind::IwahoriOfChamber).unwrap();
        assert_eq!(i.order(), 32);
        // lower triangular mod p
        assert!(i.elements().iter().all(|x| x.get(0, 1) % 2 == 0));
        let vertex = ApartmentSimplex::from_coords(2, &[&[0, 0]]).unwrap();
        let vchain = ChainSimplex::from_apartment(g.spec(), &vertex).unwrap();
        assert!(subgroup_of_simplex(&g, &vchain, SubgroupKind::IwahoriOfChamber).is_err());
    }

    #[test]
    fn standard_vertex() {
        let g = group(2, 2, 2);
        let vertex = ApartmentSimplex::from_coords(2, &[&[0, 0]]).unwrap();
        let pair = ParahoricPair::build(&g, &ChainSimplex::from_apartment(g.spec(), &vertex).unwrap()).unwrap();
        assert_eq!(pair.parahoric, g.whole());
        let kernel = g.filter(|x| x.reduce(2) == MatrixModPm::identity(2, 2));
        assert_eq!(pair.radical, kernel);
        pair.validate().unwrap();
    }

    #[test]
    fn edge_quotient_order() {
        let g = group(2, 1, 3);
        let edge = fundamental_chamber(3).faces().into_iter().find(|f| f.types() == vec![0, 1]).unwrap();
        let pair = ParahoricPair::build(&g, &ChainSimplex::from_apartment(g.spec(), &edge).unwrap()).unwrap();
        let mut jumps = pair.jumps.clone();
        jumps.sort_unstable();
        assert_eq!(jumps, vec![1, 2]);
        assert_eq!(pair.quotient_order(), 6);
        pair.validate().unwrap();
    }

    #[test]
    fn quotient_orders_on_truncations() {
        for (p, m, n, l) in [(2, 2, 2, 1), (3, 2, 2, 1), (2, 2, 3, 1)] {
            let g = group(p, m, n);
            let t = Truncation::enumerate(n, l).unwrap();
            for s in t.all_simplices() {
                let pair = ParahoricPair::build(&g, &ChainSimplex::from_apartment(g.spec(), s).unwrap()).unwrap();
                pair.validate().unwrap_or_else(|e| panic!("{s:?}: {e}"));
                let origin = s.vertices().iter().any(|v| v.coords().iter().all(|&x| x == 0));
                assert_eq!(pair.through_standard_lattice, origin);
                if origin {
                    assert_eq!(pair.quotient_order(), pair.expected_quotient_order());
                }
            }
        }
    }

    #[test]
    fn stabilizer_of_translate_matches_conjugate() {
        // permutation matrices are integral lifts of the finite Weyl group
        let g = group(2, 2, 3);
        let c = fundamental_chamber(3);
        let base = ChainSimplex::from_apartment(g.spec(), &c).unwrap();
        let i = subgroup_of_simplex(&g, &base, SubgroupKind::Parahoric).unwrap();
        let perm = MatrixModPm::new(3, 4, &[0, 1, 0, 0, 0, 1, 1, 0, 0]).unwrap();
        let moved = base.image(&perm);
        let direct = subgroup_of_simplex(&g, &moved, SubgroupKind::Parahoric).unwrap();
        assert_eq!(direct, i.conjugate(&perm));
    }
}
