//! A quotient `G_m` together with cached simplex stabilisers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::group::{FiniteGroup, GroupSpec, Subgroup};
use super::lattice::ChainSimplex;
use super::subgroup::ParahoricPair;
use crate::affine_weyl::AffinePermutation;
use crate::apartment::{fundamental_chamber, weyl_action, ApartmentSimplex};
use crate::error::Result;

#[derive(Debug)]
pub struct ResidueContext {
    group: FiniteGroup,
    iwahori: Subgroup,
    pairs: Mutex<HashMap<ApartmentSimplex, Arc<ParahoricPair>>>,
}

impl ResidueContext {
    pub fn new(spec: GroupSpec, budget: u64) -> Result<Self> {
        Self::from_group(FiniteGroup::gl(spec, budget)?)
    }

    pub fn from_group(group: FiniteGroup) -> Result<Self> {
        let c = fundamental_chamber(group.spec().n);
        let chain = ChainSimplex::from_apartment(group.spec(), &c)?;
        let pair = ParahoricPair::build(&group, &chain)?;
        let iwahori = pair.parahoric.clone();
        let pairs = Mutex::new(HashMap::from([(c, Arc::new(pair))]));
        Ok(ResidueContext { group, iwahori, pairs })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn spec(&self) -> GroupSpec {
        self.group.spec()
    }

    /// The Iwahori image `I_m` of `C_o`.
    pub fn iwahori(&self) -> &Subgroup {
        &self.iwahori
    }

    pub fn chain(&self, sigma: &ApartmentSimplex) -> Result<ChainSimplex> {
        ChainSimplex::from_apartment(self.spec(), sigma)
    }

    /// `P_σ` and `U_σ` for an apartment simplex.
    pub fn pair(&self, sigma: &ApartmentSimplex) -> Result<Arc<ParahoricPair>> {
        if let Some(p) = self.pairs.lock().expect("poisoned").get(sigma) {
            return Ok(p.clone());
        }
        let pair = Arc::new(ParahoricPair::build(&self.group, &self.chain(sigma)?)?);
        self.pairs.lock().expect("poisoned").insert(sigma.clone(), pair.clone());
        Ok(pair)
    }

    pub fn parahoric(&self, sigma: &ApartmentSimplex) -> Result<Subgroup> {
        Ok(self.pair(sigma)?.parahoric.clone())
    }

    pub fn radical(&self, sigma: &ApartmentSimplex) -> Result<Subgroup> {
        Ok(self.pair(sigma)?.radical.clone())
    }

    pub fn chamber_of(&self, w: &AffinePermutation) -> Result<ApartmentSimplex> {
        weyl_action(w, &fundamental_chamber(self.spec().n))
    }

    /// Iwahori image of the chamber `w C_o`.
    pub fn chamber_iwahori(&self, w: &AffinePermutation) -> Result<Subgroup> {
        self.parahoric(&self.chamber_of(w)?)
    }

    pub fn is_visible(&self, sigma: &ApartmentSimplex) -> bool {
        self.chain(sigma).is_ok()
    }
}
