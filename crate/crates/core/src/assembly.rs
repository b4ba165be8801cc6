//! The `I`-invariant chain complex of the coefficient system `σ ↦ V^{U_σ}`
//! on the depth-`m` building, its comparison with the apartment complex
//! `C_•(A_L, V^I)`, and the resulting exactness certificate.
//!
//! Every `I`-orbit of simplices of the building meets the apartment in
//! exactly one simplex, so an invariant chain is a tuple indexed by the
//! truncation with the `τ`-component in `V^{⟨U_τ, I ∩ P_τ⟩}`. The boundary
//! is computed in the building itself: cofaces of a chain are found by
//! inserting a lattice, then located in their `I`-orbit.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::apartment::{
    boundary_matrices_with, fundamental_chamber, omitted_sign, ApartmentSimplex, Orientation, RationalChainComplex, Truncation,
};
use crate::certificate::Certificate;
use crate::convexity::projection_chamber;
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::linalg::{span_rank, Matrix, SparseMatrix};
use crate::rational::{q_int, Q};
use crate::residue::lattice::{ChainSimplex, Lattice};
use crate::residue::module::{fixed_vectors, orbits};
use crate::residue::subgroup::{subgroup_of_simplex, ParahoricPair, SubgroupKind};
use crate::residue::{FiniteModule, MatrixModPm, ResidueContext, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyOptions {
    pub orientation: Orientation,
    pub seed: u64,
    /// Represent each orbit by `k·τ` for a random `k ∈ I` instead of `τ`.
    pub twist_representatives: bool,
    pub mode: ExecMode,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { orientation: Orientation::TypeOrder, seed: 0, twist_representatives: false, mode: ExecMode::default() }
    }
}

fn check_module(ctx: &ResidueContext, v: &FiniteModule, t: &Truncation) -> Result<()> {
    if v.spec() != ctx.spec() {
        return Err(Error::GroupMismatch);
    }
    if t.rank() != ctx.spec().n {
        return Err(Error::RankMismatch(ctx.spec().n, t.rank()));
    }
    if t.simplices(0).is_empty() {
        return Err(Error::EmptyTruncation);
    }
    Ok(())
}

fn visible_chain(ctx: &ResidueContext, sigma: &ApartmentSimplex) -> Result<ChainSimplex> {
    ctx.chain(sigma)
}

/// Per-simplex fixed spaces `V^{U_σ}` over the truncation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientSystem {
    /// `dims[q][i]` is `dim V^{U_σ}` for the `i`-th `q`-simplex.
    pub dims: Vec<Vec<usize>>,
    pub certificate: Certificate,
}

/// `σ ↦ V^{U_σ}` with its restriction inclusions and orbit transport.
pub fn build_coefficient_system(ctx: &ResidueContext, v: &FiniteModule, t: &Truncation, seed: u64) -> Result<CoefficientSystem> {
    check_module(ctx, v, t)?;
    let all: Vec<(usize, ApartmentSimplex)> = (0..t.rank()).flat_map(|q| t.simplices(q).iter().map(move |s| (q, s.clone()))).collect();
    for (_, s) in &all {
        visible_chain(ctx, s)?;
        ctx.pair(s)?;
    }
    let spaces: Vec<Vec<Vec<Q>>> = all.iter().map(|(_, s)| fixed_vectors(v, &ctx.radical(s).expect("cached")).basis).collect();
    let index: HashMap<&ApartmentSimplex, usize> = all.iter().enumerate().map(|(i, (_, s))| (s, i)).collect();
    let mut cert = Certificate::new("coefficient_system")
        .param("n", t.rank())
        .param("p", ctx.spec().p)
        .param("m", ctx.spec().m)
        .param("radius", t.radius());
    // restriction maps are inclusions: V^{U_σ} ⊆ V^{U_τ}
    for (i, (_, s)) in all.iter().enumerate() {
        for f in s.faces() {
            if f == *s {
                continue;
            }
            let j = index[&f];
            let mut joint = spaces[j].clone();
            joint.extend(spaces[i].iter().cloned());
            cert.record((span_rank(&joint) != spaces[j].len()).then(|| format!("V^U of {s:?} is not inside that of its face {f:?}")));
        }
    }
    // V^{U_{kσ}} = k V^{U_σ} for a sampled orbit member, computed directly
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let iw = ctx.iwahori();
    for (i, (_, s)) in all.iter().enumerate() {
        let k = iw.elements()[rng.gen_range(0..iw.order())];
        let moved = ctx.chain(s)?.image(&k);
        let direct = fixed_vectors(v, &subgroup_of_simplex(ctx.group(), &moved, SubgroupKind::ProUnipotent)?).basis;
        let transported: Vec<Vec<Q>> = spaces[i].iter().map(|b| v.act(&k, b)).collect();
        let mut joint = direct.clone();
        joint.extend(transported.iter().cloned());
        let same = direct.len() == transported.len() && span_rank(&joint) == direct.len();
        cert.record((!same).then(|| format!("fixed space of the translate of {s:?} is not the translate of its fixed space")));
    }
    let mut dims = vec![Vec::new(); t.rank()];
    for ((q, _), b) in all.iter().zip(&spaces) {
        dims[*q].push(b.len());
    }
    cert.detail("dims", serde_json::to_value(&dims).expect("serialisable"));
    Ok(CoefficientSystem { dims, certificate: cert })
}

/// One summand `V^{I_{σ,w}}` of the invariant chains.
#[derive(Clone, Debug)]
pub struct InvariantBlock {
    pub simplex: ApartmentSimplex,
    pub pair: Arc<ParahoricPair>,
    /// `⟨U_σ, I ∩ P_σ⟩`.
    pub local_iwahori: Subgroup,
    /// Whether `local_iwahori` is the Iwahori of the projection of `σ` onto `C_o`.
    pub projection_agrees: bool,
    /// Orbits of `local_iwahori` on the coset basis; orbit sums span the block.
    pub orbits: Vec<Vec<usize>>,
    /// Left coset representatives of `I / (I ∩ P_σ)`.
    pub coset_reps: Vec<MatrixModPm>,
    /// The orbit is represented by `twist·σ`.
    pub twist: MatrixModPm,
}

impl InvariantBlock {
    pub fn dim(&self) -> usize {
        self.orbits.len()
    }

    /// `|I / (I ∩ P_σ)|`.
    pub fn orbit_size(&self) -> usize {
        self.coset_reps.len()
    }

    fn basis_vector(&self, v: &FiniteModule, j: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); v.dim()];
        for &i in &self.orbits[j] {
            x[i] = Q::one();
        }
        v.act(&self.twist, &x)
    }

    /// Coordinates of a vector of the block in its orbit-sum basis.
    fn coordinates(&self, v: &FiniteModule, x: &[Q]) -> Option<Vec<Q>> {
        let back = v.act(&self.twist.inverse().expect("invertible"), x);
        orbit_coordinates(&self.orbits, &back)
    }
}

fn orbit_coordinates(orbits: &[Vec<usize>], x: &[Q]) -> Option<Vec<Q>> {
    let covered: usize = orbits.iter().map(Vec::len).sum();
    debug_assert_eq!(covered, x.len());
    orbits.iter().map(|o| o.iter().all(|&i| x[i] == x[o[0]]).then(|| x[o[0]].clone())).collect()
}

/// Decomposition of `C_q(X_L, 𝒞)^I` into blocks, one per truncation simplex.
#[derive(Clone, Debug)]
pub struct InvariantChainBasis {
    pub blocks: Vec<Vec<InvariantBlock>>,
    /// Orbits of `I` on the coset basis: coordinates on `V^I`.
    pub iwahori_orbits: Vec<Vec<usize>>,
}

impl InvariantChainBasis {
    pub fn invariant_dim(&self) -> usize {
        self.iwahori_orbits.len()
    }

    fn offsets(&self, q: usize) -> Vec<usize> {
        let mut out = vec![0];
        for b in &self.blocks[q] {
            out.push(out.last().unwrap() + b.dim());
        }
        out
    }

    pub fn degree_dim(&self, q: usize) -> usize {
        self.blocks[q].iter().map(InvariantBlock::dim).sum()
    }
}

/// Counts behind the re-indexing of cofaces by `I`-orbits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReindexingReport {
    /// `(ρ, τ')` pairs with cofaces of `ρ` in the orbit of `τ'`.
    pub pairs: usize,
    /// Pairs with `N(ρ, τ')·|I:I∩P_ρ| = |I:I∩P_τ'|`.
    pub count_matches: usize,
    /// Cofaces whose orbit representative contains `ρ` in the apartment.
    pub cofaces: usize,
    pub cofaces_retracting_onto_star: usize,
    /// Cofaces whose incidence sign equals that of their representative.
    pub incidence_matches: usize,
    /// Cofaces of interior simplices falling outside the truncated orbits.
    pub interior_misses: usize,
}

impl ReindexingReport {
    pub fn holds(&self) -> bool {
        self.count_matches == self.pairs
            && self.cofaces_retracting_onto_star == self.cofaces
            && self.incidence_matches == self.cofaces
            && self.interior_misses == 0
    }
}

#[derive(Clone, Debug)]
pub struct InvariantComplex {
    pub basis: InvariantChainBasis,
    /// `Φ(ε)` then `Φ(∂)` in each degree, in the layout of
    /// [`RationalChainComplex`].
    pub complex: RationalChainComplex,
    pub reindexing: ReindexingReport,
    /// Whether an invariant tuple is recovered from one component in every block.
    pub reconstruction_failures: usize,
    /// Whether a row `ρ` has every apartment coface inside the truncation.
    pub interior: Vec<Vec<bool>>,
    pub orientation: Orientation,
}

fn apartment_cofaces(rho: &ApartmentSimplex) -> BTreeSet<ApartmentSimplex> {
    let dim = rho.dim() + 1;
    rho.chambers_containing()
        .into_iter()
        .flat_map(|c| c.faces())
        .filter(|f| f.dim() == dim && f.contains_face(rho))
        .collect()
}

type OrbitLookup = HashMap<Vec<Lattice>, (usize, usize, MatrixModPm)>;

fn sign_of_insertion(orientation: Orientation, key_types: &[usize], inserted: usize) -> i64 {
    match orientation {
        Orientation::Unsigned => 1,
        Orientation::TypeOrder => omitted_sign(key_types.iter().filter(|&&t| t < inserted).count()),
    }
}

/// Blocks, the invariant boundary computed in the building, and `Φ(ε)`.
pub fn build_invariant_complex(
    ctx: &ResidueContext,
    v: &FiniteModule,
    t: &Truncation,
    options: &AssemblyOptions,
) -> Result<InvariantComplex> {
    check_module(ctx, v, t)?;
    let n = t.rank();
    let is_interior = |s: &ApartmentSimplex| apartment_cofaces(s).iter().all(|c| t.contains(c));
    if !(0..n - 1).any(|q| t.simplices(q).iter().any(is_interior)) {
        return Err(Error::EmptyTruncation);
    }
    let iw = ctx.iwahori().clone();
    let c_o = fundamental_chamber(n);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let all: Vec<(usize, usize, ApartmentSimplex)> =
        (0..n).flat_map(|q| t.simplices(q).iter().enumerate().map(move |(i, s)| (q, i, s.clone()))).collect();
    for (_, _, s) in &all {
        ctx.pair(s)?;
        ctx.pair(&projection_chamber(s, &c_o)?)?;
    }
    let twists: Vec<MatrixModPm> = all
        .iter()
        .map(|_| if options.twist_representatives { iw.elements()[rng.gen_range(0..iw.order())] } else { ctx.spec().identity() })
        .collect();
    let built: Vec<Result<InvariantBlock>> = exec::map(options.mode, &all.iter().zip(&twists).collect::<Vec<_>>(), |((_, _, s), tw)| {
        let pair = ctx.pair(s)?;
        let local = pair.radical.join(&iw.intersect(&pair.parahoric));
        let projection_agrees = local == ctx.parahoric(&projection_chamber(s, &c_o)?)?;
        let (coset_reps, _) = iw.left_cosets(&iw.intersect(&pair.parahoric));
        Ok(InvariantBlock {
            simplex: s.clone(),
            orbits: orbits(v, &local),
            pair,
            local_iwahori: local,
            projection_agrees,
            coset_reps,
            twist: **tw,
        })
    });
    let mut blocks: Vec<Vec<InvariantBlock>> = vec![Vec::new(); n];
    for ((q, _, _), b) in all.iter().zip(built) {
        blocks[*q].push(b?);
    }

    // every orbit member, keyed by its vertex lattices
    let mut lookup: OrbitLookup = HashMap::new();
    for (q, i, s) in &all {
        let chain = ctx.chain(s)?;
        for r in &blocks[*q][*i].coset_reps {
            let key = chain.image(r).vertex_key();
            if let Some((q2, i2, _)) = lookup.insert(key, (*q, *i, *r)) {
                if (q2, i2) != (*q, *i) {
                    return Err(Error::InvariantBreach(format!("{s:?} shares an I-orbit with another apartment simplex")));
                }
                return Err(Error::InvariantBreach(format!("coset representatives of {s:?} give the same simplex")));
            }
        }
    }

    let basis = InvariantChainBasis { blocks, iwahori_orbits: orbits(v, &iw) };
    let d = basis.invariant_dim();
    let mut dims = vec![d];
    dims.extend((0..n).map(|q| basis.degree_dim(q)));

    // Φ(ε): a vertex component spread over its orbit
    let off0 = basis.offsets(0);
    let mut eps = SparseMatrix::new(d, dims[1]);
    for (i, b) in basis.blocks[0].iter().enumerate() {
        let twist_inv = b.twist.inverse().expect("invertible");
        for j in 0..b.dim() {
            let u = v.act(&twist_inv, &b.basis_vector(v, j));
            let mut total = vec![Q::zero(); v.dim()];
            for r in &b.coset_reps {
                for (a, x) in total.iter_mut().zip(v.act(r, &u)) {
                    *a += x;
                }
            }
            let c = orbit_coordinates(&basis.iwahori_orbits, &total)
                .ok_or_else(|| Error::InvariantBreach("augmentation image is not I-invariant".into()))?;
            for (r, x) in c.into_iter().enumerate() {
                if !x.is_zero() {
                    eps.add(r, off0[i] + j, x);
                }
            }
        }
    }

    let mut report = ReindexingReport::default();
    let mut interior = vec![Vec::new(); n];
    let mut boundaries = vec![eps];
    for q in 0..n - 1 {
        let rows_off = basis.offsets(q);
        let cols_off = basis.offsets(q + 1);
        let rows: Vec<usize> = (0..basis.blocks[q].len()).collect();
        let computed = exec::map(options.mode, &rows, |&i| {
            let interior = is_interior(&basis.blocks[q][i].simplex);
            row_of_boundary(ctx, v, &basis, &lookup, (q, i), interior, options.orientation)
        });
        let mut b = SparseMatrix::new(dims[q + 1], dims[q + 2]);
        for (i, res) in rows.iter().zip(computed) {
            let row = res?;
            interior[q].push(row.interior);
            report.pairs += row.pairs;
            report.count_matches += row.count_matches;
            report.cofaces += row.cofaces;
            report.cofaces_retracting_onto_star += row.retracting;
            report.incidence_matches += row.incidence_matches;
            report.interior_misses += row.interior_misses;
            for ((col_block, col), coords) in row.entries {
                for (r, x) in coords.into_iter().enumerate() {
                    if !x.is_zero() {
                        b.add(rows_off[*i] + r, cols_off[col_block] + col, x);
                    }
                }
            }
        }
        boundaries.push(b);
    }
    interior[n - 1] = vec![false; basis.blocks[n - 1].len()];
    let reconstruction_failures = reconstruction_check(v, &basis, &iw, options.seed);
    Ok(InvariantComplex {
        basis,
        complex: RationalChainComplex::new(dims, boundaries)?,
        reindexing: report,
        reconstruction_failures,
        interior,
        orientation: options.orientation,
    })
}

struct BoundaryRow {
    entries: Vec<((usize, usize), Vec<Q>)>,
    interior: bool,
    pairs: usize,
    count_matches: usize,
    cofaces: usize,
    retracting: usize,
    incidence_matches: usize,
    interior_misses: usize,
}

fn row_of_boundary(
    ctx: &ResidueContext,
    v: &FiniteModule,
    basis: &InvariantChainBasis,
    lookup: &OrbitLookup,
    (q, i): (usize, usize),
    interior: bool,
    orientation: Orientation,
) -> Result<BoundaryRow> {
    let row_block = &basis.blocks[q][i];
    let rho = &row_block.simplex;
    let chain = ctx.chain(rho)?.image(&row_block.twist);
    let key = chain.vertex_key();
    let key_types: Vec<usize> = key.iter().map(Lattice::vertex_type).collect();
    // sums of translated columns, per (column block, column)
    let mut acc: HashMap<(usize, usize), Vec<Q>> = HashMap::new();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    let mut out = BoundaryRow {
        entries: Vec::new(),
        interior,
        pairs: 0,
        count_matches: 0,
        cofaces: 0,
        retracting: 0,
        incidence_matches: 0,
        interior_misses: 0,
    };
    for m in chain.coface_vertices() {
        let prim = m.primitive();
        let mut coface_key = key.clone();
        coface_key.push(prim);
        coface_key.sort();
        let Some(&(q2, j, k)) = lookup.get(&coface_key) else {
            out.interior_misses += usize::from(interior);
            continue;
        };
        debug_assert_eq!(q2, q + 1);
        let col_block = &basis.blocks[q + 1][j];
        let sign = sign_of_insertion(orientation, &key_types, m.vertex_type());
        out.cofaces += 1;
        *counts.entry(j).or_default() += 1;
        if col_block.simplex.contains_face(rho) {
            out.retracting += 1;
            let expected = match orientation {
                Orientation::Unsigned => 1,
                Orientation::TypeOrder => crate::apartment::incidence(&col_block.simplex, rho),
            };
            out.incidence_matches += usize::from(expected == sign);
        }
        // the value at k·τ' is k·u where the stored component is twist·u
        let g = k.mul(&col_block.twist.inverse().expect("invertible"));
        for c in 0..col_block.dim() {
            let moved = v.act(&g, &col_block.basis_vector(v, c));
            let slot = acc.entry((j, c)).or_insert_with(|| vec![Q::zero(); v.dim()]);
            let s = q_int(sign);
            for (a, x) in slot.iter_mut().zip(moved) {
                *a += &s * x;
            }
        }
    }
    for (&j, &count) in &counts {
        out.pairs += 1;
        let lhs = count * row_block.orbit_size();
        out.count_matches += usize::from(lhs == basis.blocks[q + 1][j].orbit_size());
    }
    let mut keys: Vec<(usize, usize)> = acc.keys().copied().collect();
    keys.sort_unstable();
    for kc in keys {
        let x = &acc[&kc];
        let coords = row_block.coordinates(v, x).ok_or_else(|| {
            Error::InvariantBreach(format!("boundary component at {rho:?} is not invariant under its local Iwahori"))
        })?;
        out.entries.push((kc, coords));
    }
    Ok(out)
}

/// Tuples `v_{kσ} = k·u` are well defined and permuted by `I`.
fn reconstruction_check(v: &FiniteModule, basis: &InvariantChainBasis, iw: &Subgroup, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut failures = 0;
    for block in basis.blocks.iter().flatten() {
        let p = block.pair.parahoric.intersect(iw);
        let (reps, index) = iw.left_cosets(&p);
        let twist_inv = block.twist.inverse().expect("invertible");
        let mut u = vec![Q::zero(); v.dim()];
        for j in 0..block.dim() {
            let c = q_int(rng.gen_range(-3..=3));
            for (a, x) in u.iter_mut().zip(block.basis_vector(v, j)) {
                *a += &c * x;
            }
        }
        let u = v.act(&twist_inv, &u);
        let k = iw.elements()[rng.gen_range(0..iw.order())];
        for r in &reps {
            let kr = k.mul(r);
            let r2 = reps[index[&kr] as usize];
            if v.act(&k, &v.act(r, &u)) != v.act(&r2, &u) {
                failures += 1;
            }
        }
    }
    failures
}

/// `φ_q`, blockwise `|I/I∩P_σ|·e_I` into `C_q(A_L, V^I)`.
#[derive(Clone, Debug)]
pub struct ComparisonMap {
    /// `phi[0]` is the identity of `V^I`, `phi[q + 1]` acts in degree `q`.
    pub phi: Vec<SparseMatrix>,
    pub block_determinants: Vec<Vec<Q>>,
    pub block_square: Vec<Vec<bool>>,
    pub ranks: Vec<usize>,
}

impl ComparisonMap {
    pub fn all_blocks_invertible(&self) -> bool {
        self.block_square.iter().flatten().all(|&s| s) && self.block_determinants.iter().flatten().all(|d| !d.is_zero())
    }

    pub fn bijective(&self) -> bool {
        self.phi.iter().zip(&self.ranks).all(|(m, &r)| m.rows == m.cols && r == m.rows)
    }
}

pub fn comparison_maps(v: &FiniteModule, ic: &InvariantComplex, iw: &Subgroup, mode: ExecMode) -> Result<ComparisonMap> {
    let basis = &ic.basis;
    let d = basis.invariant_dim();
    let mut phi = vec![SparseMatrix::from_dense(&Matrix::identity(d))];
    let mut dets = Vec::new();
    let mut square = Vec::new();
    for q in 0..basis.blocks.len() {
        let off = basis.offsets(q);
        let blocks: Vec<Result<Matrix>> = exec::map(mode, &basis.blocks[q], |b| {
            let scale = q_int(b.orbit_size() as i64);
            let cols: Vec<Vec<Q>> = (0..b.dim())
                .map(|j| {
                    let avg = v.average(iw, &b.basis_vector(v, j));
                    orbit_coordinates(&basis.iwahori_orbits, &avg)
                        .map(|c| c.into_iter().map(|x| x * &scale).collect())
                        .ok_or_else(|| Error::InvariantBreach("averaged vector is not I-invariant".into()))
                })
                .collect::<Result<_>>()?;
            Ok(Matrix::from_columns(d, &cols))
        });
        let mut m = SparseMatrix::new(d * basis.blocks[q].len(), *off.last().unwrap());
        let mut dq = Vec::new();
        let mut sq = Vec::new();
        for (i, block) in blocks.into_iter().enumerate() {
            let block = block?;
            let is_square = block.rows() == block.cols();
            sq.push(is_square);
            dq.push(if is_square { block.det()? } else { Q::zero() });
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    let x = block.row(r)[c].clone();
                    if !x.is_zero() {
                        m.add(i * d + r, off[i] + c, x);
                    }
                }
            }
        }
        dets.push(dq);
        square.push(sq);
        phi.push(m);
    }
    let ranks = exec::map(mode, &phi, SparseMatrix::rank);
    let cm = ComparisonMap { phi, block_determinants: dets, block_square: square, ranks };
    if !cm.all_blocks_invertible() {
        return Err(Error::InvariantBreach("a comparison block is singular".into()));
    }
    Ok(cm)
}

/// Residual summary of `φ_{q-1} Φ(∂_q) - ∂_A φ_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramResidual {
    pub degree: i64,
    /// Nonzero entries of the residual on all rows.
    pub nonzero_entries: usize,
    /// Nonzero entries on rows of interior simplices (or the augmentation).
    pub interior_nonzero_entries: usize,
    pub interior_rows: usize,
}

/// `φ ∘ Φ(∂) = ∂_A ∘ φ` and `Φ(ε) = ε_A ∘ φ_0`, exactly.
pub fn verify_diagrams(ic: &InvariantComplex, cm: &ComparisonMap, t: &Truncation) -> Result<(Certificate, Vec<DiagramResidual>)> {
    let d = ic.basis.invariant_dim();
    let apartment = boundary_matrices_with(t, d.max(1), ic.orientation)?;
    let mut cert = Certificate::new("comparison_diagrams").param("n", t.rank()).param("radius", t.radius());
    let mut residuals = Vec::new();
    for k in 0..ic.complex.boundaries.len() {
        let lhs = cm.phi[k].mul(&ic.complex.boundaries[k])?;
        let rhs = apartment.boundaries[k].mul(&cm.phi[k + 1])?;
        let (lhs, rhs) = (lhs.to_dense(), rhs.to_dense());
        let diff = lhs.sub(&rhs)?;
        let interior_rows: Vec<usize> = if k == 0 {
            (0..d).collect()
        } else {
            ic.interior[k - 1].iter().enumerate().filter(|(_, &b)| b).flat_map(|(i, _)| i * d..(i + 1) * d).collect()
        };
        let nonzero = |rows: &mut dyn Iterator<Item = usize>| rows.map(|r| diff.row(r).iter().filter(|x| !x.is_zero()).count()).sum();
        let res = DiagramResidual {
            degree: k as i64 - 1,
            nonzero_entries: nonzero(&mut (0..diff.rows())),
            interior_nonzero_entries: nonzero(&mut interior_rows.iter().copied()),
            interior_rows: interior_rows.len() / d.max(1),
        };
        cert.record((res.interior_nonzero_entries != 0).then(|| format!("square in degree {} does not commute: {res:?}", res.degree)));
        residuals.push(res);
    }
    let r = &ic.reindexing;
    cert.record((!r.holds()).then(|| format!("coface re-indexing failed: {r:?}")));
    cert.detail("reindexing", serde_json::to_value(r).expect("serialisable"));
    cert.detail("max_degree_checked", ic.complex.boundaries.len() as i64 - 2);
    Ok((cert, residuals))
}

/// Reduced homology of `C_•(A_L, Q^d)`, with `d = 0` giving the zero complex.
pub fn apartment_complex(t: &Truncation, d: usize, orientation: Orientation) -> Result<RationalChainComplex> {
    if d == 0 {
        return Ok(RationalChainComplex::zero(t.rank() - 1));
    }
    boundary_matrices_with(t, d, orientation)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub apartment_ranks: Vec<usize>,
    pub invariant_ranks: Vec<usize>,
    pub apartment_is_complex: bool,
    pub invariant_is_complex: bool,
    pub transported_by_isomorphisms: bool,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.apartment_is_complex
            && self.invariant_is_complex
            && self.transported_by_isomorphisms
            && self.apartment_ranks.iter().all(|&r| r == 0)
            && self.invariant_ranks.iter().all(|&r| r == 0)
    }
}

pub fn exactness_report(ic: &InvariantComplex, cm: &ComparisonMap, t: &Truncation, mode: ExecMode) -> Result<ExactnessReport> {
    let a = apartment_complex(t, ic.basis.invariant_dim(), ic.orientation)?;
    let ranks = |c: &RationalChainComplex| -> Result<Vec<usize>> {
        if c.is_complex()? {
            c.reduced_homology_ranks(mode)
        } else {
            Ok(Vec::new())
        }
    };
    Ok(ExactnessReport {
        apartment_ranks: ranks(&a)?,
        invariant_ranks: ranks(&ic.complex)?,
        apartment_is_complex: a.is_complex()?,
        invariant_is_complex: ic.complex.is_complex()?,
        transported_by_isomorphisms: cm.bijective() && cm.all_blocks_invertible(),
    })
}

/// Everything certified for one `(V, L, m)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MasterCertificate {
    pub schema: u32,
    pub n: usize,
    pub p: u16,
    pub m: u32,
    pub radius: i64,
    pub orientation: Orientation,
    pub module_dim: usize,
    pub invariant_dim: usize,
    pub apartment_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    pub block_dims_equal: bool,
    pub projection_agrees: bool,
    pub block_det_nonzero: Vec<Vec<bool>>,
    pub diagram_residuals: Vec<DiagramResidual>,
    pub exactness: ExactnessReport,
    pub representative_independent: Option<bool>,
    pub checks: Vec<Certificate>,
    pub passed: bool,
}

/// Builds and certifies everything, optionally rebuilding with twisted
/// orbit representatives and comparing.
pub fn certify(
    ctx: &ResidueContext,
    v: &FiniteModule,
    t: &Truncation,
    options: &AssemblyOptions,
    compare_representatives: bool,
) -> Result<MasterCertificate> {
    if i64::from(ctx.spec().m) < t.radius() + 1 {
        return Err(Error::NotVisible { depth: ctx.spec().m, what: format!("truncation of radius {}", t.radius()) });
    }
    let coefficients = build_coefficient_system(ctx, v, t, options.seed)?;
    let ic = build_invariant_complex(ctx, v, t, options)?;
    let cm = comparison_maps(v, &ic, ctx.iwahori(), options.mode)?;
    let (diagrams, residuals) = verify_diagrams(&ic, &cm, t)?;
    let exactness = exactness_report(&ic, &cm, t, options.mode)?;
    let d = ic.basis.invariant_dim();
    let block_dims_equal = ic.basis.blocks.iter().flatten().all(|b| b.dim() == d);
    let projection_agrees = ic.basis.blocks.iter().flatten().all(|b| b.projection_agrees);
    let mut structure = Certificate::new("invariant_blocks");
    for b in ic.basis.blocks.iter().flatten() {
        structure.record((b.dim() != d).then(|| format!("block of {:?} has dimension {} not {d}", b.simplex, b.dim())));
        structure.record((!b.projection_agrees).then(|| format!("local Iwahori of {:?} is not the projection Iwahori", b.simplex)));
    }
    structure.record((ic.reconstruction_failures != 0).then(|| format!("{} orbit reconstructions failed", ic.reconstruction_failures)));
    let mut exact_cert = Certificate::new("exactness");
    exact_cert.record((!exactness.exact()).then(|| format!("{exactness:?}")));
    let representative_independent = if compare_representatives {
        let twisted = AssemblyOptions { twist_representatives: true, ..*options };
        let ic2 = build_invariant_complex(ctx, v, t, &twisted)?;
        Some(
            ic2.complex == ic.complex
                && (!ic2.complex.is_complex()? || ic2.complex.reduced_homology_ranks(options.mode)? == exactness.invariant_ranks),
        )
    } else {
        None
    };
    let mut rep_cert = Certificate::new("representative_independence");
    if let Some(ok) = representative_independent {
        rep_cert.record((!ok).then(|| "twisted representatives give a different complex".to_string()));
    }
    let apartment_dims = apartment_complex(t, d, options.orientation)?.dims;
    let mut checks = vec![coefficients.certificate, structure, diagrams, exact_cert];
    if compare_representatives {
        checks.push(rep_cert);
    }
    let passed = checks.iter().all(Certificate::passed) && cm.all_blocks_invertible();
    Ok(MasterCertificate {
        schema: 1,
        n: t.rank(),
        p: ctx.spec().p,
        m: ctx.spec().m,
        radius: t.radius(),
        orientation: options.orientation,
        module_dim: v.dim(),
        invariant_dim: d,
        apartment_dims,
        invariant_dims: ic.complex.dims.clone(),
        block_dims_equal,
        projection_agrees,
        block_det_nonzero: cm.block_determinants.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect(),
        diagram_residuals: residuals,
        exactness,
        representative_independent,
        checks,
        passed,
    })
}
