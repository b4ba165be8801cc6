//! Affine roots, half-apartments, enclosures and the combinatorial
//! convexity checks on the apartment.
//!
//! Root indices are 0-based internally and printed 1-based.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine_weyl::ball;
use crate::apartment::{fundamental_chamber, weyl_action, ApartmentSimplex, Truncation};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::rational::{q_frac, q_int, Q};

/// The functional `x ↦ x_i - x_j + k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    pub i: usize,
    pub j: usize,
    pub k: i64,
}

impl fmt::Debug for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}-x{}", self.i + 1, self.j + 1)?;
        match self.k.cmp(&0) {
            std::cmp::Ordering::Greater => write!(f, "+{}", self.k),
            std::cmp::Ordering::Less => write!(f, "{}", self.k),
            std::cmp::Ordering::Equal => Ok(()),
        }
    }
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl AffineRoot {
    pub fn new(i: usize, j: usize, k: i64) -> Result<Self> {
        if i == j {
            return Err(Error::OutOfRange(format!("root indices coincide ({i})")));
        }
        Ok(AffineRoot { i, j, k })
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        x[self.i] - x[self.j] + self.k
    }

    pub fn eval_q(&self, x: &[Q]) -> Q {
        &x[self.i] - &x[self.j] + q_int(self.k)
    }

    /// Values at the vertices of `sigma`.
    pub fn values(&self, sigma: &ApartmentSimplex) -> Vec<i64> {
        sigma.vertices().iter().map(|v| self.eval(v.coords())).collect()
    }

    pub fn shifted(&self, by: i64) -> Self {
        AffineRoot { k: self.k + by, ..*self }
    }

    pub fn is_nonnegative_on(&self, sigma: &ApartmentSimplex) -> bool {
        self.values(sigma).iter().all(|&v| v >= 0)
    }
}

/// The closed half-apartment `{a ≥ 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfApartment {
    pub root: AffineRoot,
}

impl HalfApartment {
    pub fn contains(&self, sigma: &ApartmentSimplex) -> bool {
        self.root.is_nonnegative_on(sigma)
    }

    pub fn opposite(&self) -> HalfApartment {
        HalfApartment { root: AffineRoot { i: self.root.j, j: self.root.i, k: -self.root.k } }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    StrictlyPositive,
    NonnegativeTouching,
    Zero,
    NonpositiveTouching,
    StrictlyNegative,
    Mixed,
}

/// Sign pattern of `a` on the closed simplex.
pub fn side(a: &AffineRoot, sigma: &ApartmentSimplex) -> Side {
    let vals = a.values(sigma);
    let pos = vals.iter().any(|&v| v > 0);
    let neg = vals.iter().any(|&v| v < 0);
    let zero = vals.contains(&0);
    match (pos, neg, zero) {
        (true, true, _) => Side::Mixed,
        (true, false, false) => Side::StrictlyPositive,
        (true, false, true) => Side::NonnegativeTouching,
        (false, true, false) => Side::StrictlyNegative,
        (false, true, true) => Side::NonpositiveTouching,
        (false, false, _) => Side::Zero,
    }
}

fn rank_of(sets: &[&ApartmentSimplex]) -> usize {
    sets[0].rank()
}

/// Bound on `|k|` beyond which a root cannot separate anything in `omega`.
fn shift_bound(omega: &[&ApartmentSimplex]) -> i64 {
    omega.iter().map(|s| s.spread()).max().unwrap_or(0) + 1
}

/// All affine roots nonnegative on every simplex of `omega` whose shift by
/// `k` stays within the computed bound.
fn roots_nonnegative_on(omega: &[&ApartmentSimplex]) -> Vec<AffineRoot> {
    let n = rank_of(omega);
    let b = shift_bound(omega);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in -b..=b {
                let a = AffineRoot { i, j, k };
                if omega.iter().all(|s| a.is_nonnegative_on(s)) {
                    out.push(a);
                }
            }
        }
    }
    out
}

/// Whether `sigma` lies in every half-apartment containing all of `omega`.
pub fn enclos_contains_all(sigma: &ApartmentSimplex, omega: &[&ApartmentSimplex]) -> bool {
    roots_nonnegative_on(omega).iter().all(|a| a.is_nonnegative_on(sigma))
}

pub fn enclos_contains(sigma: &ApartmentSimplex, omega1: &ApartmentSimplex, omega2: &ApartmentSimplex) -> bool {
    enclos_contains_all(sigma, &[omega1, omega2])
}

/// The roots `a` with `a ≥ 0` on `omega` and `a - 1` not.
pub fn min_positive_roots(omega: &[&ApartmentSimplex]) -> BTreeSet<AffineRoot> {
    roots_nonnegative_on(omega)
        .into_iter()
        .filter(|a| !omega.iter().all(|s| a.shifted(-1).is_nonnegative_on(s)))
        .collect()
}

/// The unique chamber containing `sigma` inside `E[sigma, d]`.
pub fn projection_chamber(sigma: &ApartmentSimplex, d: &ApartmentSimplex) -> Result<ApartmentSimplex> {
    if !d.is_chamber() {
        return Err(Error::InvalidSimplex("projection target must be a chamber".into()));
    }
    if sigma.rank() != d.rank() {
        return Err(Error::RankMismatch(sigma.rank(), d.rank()));
    }
    let mut hits: Vec<ApartmentSimplex> =
        sigma.chambers_containing().into_iter().filter(|c| enclos_contains(c, sigma, d)).collect();
    if hits.len() != 1 {
        return Err(Error::InvariantBreach(format!(
            "{} chambers around {sigma:?} lie in the enclosure with {d:?}",
            hits.len()
        )));
    }
    Ok(hits.pop().unwrap())
}

/// `min` of `x_i - x_j` over the vertices of a chamber, for every `i < j`.
fn wall_levels(c: &ApartmentSimplex) -> Vec<i64> {
    let n = c.rank();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(c.vertices().iter().map(|v| v.coords()[i] - v.coords()[j]).min().unwrap());
        }
    }
    out
}

/// Number of walls separating two chambers.
pub fn gallery_distance(c: &ApartmentSimplex, d: &ApartmentSimplex) -> usize {
    wall_levels(c).iter().zip(wall_levels(d)).map(|(a, b)| a.abs_diff(b) as usize).sum()
}

/// Distances from every chamber around `sigma` factor through the projection.
pub fn gate_property_check(sigma: &ApartmentSimplex, d: &ApartmentSimplex) -> Result<bool> {
    let c1 = projection_chamber(sigma, d)?;
    let base = gallery_distance(&c1, d);
    Ok(sigma
        .chambers_containing()
        .iter()
        .all(|other| gallery_distance(other, d) == gallery_distance(other, &c1) + base))
}

/// Whether every minimal root of `cj` is nonnegative on `ck` or on `cl`.
pub fn root_dichotomy_check(cj: &ApartmentSimplex, ck: &ApartmentSimplex, cl: &ApartmentSimplex) -> Result<bool> {
    if !(cj.is_chamber() && ck.is_chamber() && cl.is_chamber()) {
        return Err(Error::InvalidSimplex("dichotomy check takes chambers".into()));
    }
    if !enclos_contains(cj, ck, cl) {
        return Err(Error::Precondition(format!("{cj:?} is not in the enclosure of {ck:?} and {cl:?}")));
    }
    Ok(min_positive_roots(&[cj]).iter().all(|a| a.is_nonnegative_on(ck) || a.is_nonnegative_on(cl)))
}

fn barycenter(s: &ApartmentSimplex) -> Vec<Q> {
    let n = s.rank();
    let k = s.vertices().len() as i64;
    (0..n).map(|i| q_frac(s.vertices().iter().map(|v| v.coords()[i]).sum(), k)).collect()
}

fn open_chamber_contains(c: &ApartmentSimplex, y: &[Q]) -> bool {
    let n = c.rank();
    let levels = wall_levels(c);
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            let f = &y[i] - &y[j];
            let m = q_int(levels[idx]);
            idx += 1;
            if f <= m || f >= &m + Q::one() {
                return false;
            }
        }
    }
    true
}

/// Whether `x + εd` lies in the open chamber `c` for all small `ε > 0`.
fn segment_enters(c: &ApartmentSimplex, x: &[Q], dir: &[Q]) -> bool {
    let n = c.rank();
    let levels = wall_levels(c);
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            let f = &x[i] - &x[j];
            let df = &dir[i] - &dir[j];
            let m = q_int(levels[idx]);
            idx += 1;
            let hi = &m + Q::one();
            let ok_low = f > m || (f == m && df.is_positive());
            let ok_high = f < hi || (f == hi && df.is_negative());
            if !(ok_low && ok_high) {
                return false;
            }
        }
    }
    true
}

/// A random rational point of the open chamber.
fn random_interior_point(c: &ApartmentSimplex, rng: &mut ChaCha8Rng) -> Vec<Q> {
    let weights: Vec<i64> = (0..c.vertices().len()).map(|_| rng.gen_range(1..=16)).collect();
    let total: i64 = weights.iter().sum();
    let reps = c.chain_reps();
    let n = c.rank();
    (0..n).map(|i| q_frac(reps.iter().zip(&weights).map(|(r, w)| r[i] * w).sum(), total)).collect()
}

/// Existential segment form: some point of the open chamber `d` is reached
/// from the barycenter of `sigma` through the open projection chamber.
/// Tries the barycenter of `d` and then `samples` random interior points.
pub fn segment_check(sigma: &ApartmentSimplex, d: &ApartmentSimplex, samples: usize, seed: u64) -> Result<bool> {
    let c1 = projection_chamber(sigma, d)?;
    let x = barycenter(sigma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut target = barycenter(d);
    for attempt in 0..=samples {
        if attempt > 0 {
            target = random_interior_point(d, &mut rng);
        }
        debug_assert!(open_chamber_contains(d, &target));
        let dir: Vec<Q> = target.iter().zip(&x).map(|(t, s)| t - s).collect();
        if dir.iter().all(Zero::is_zero) {
            continue;
        }
        if segment_enters(&c1, &x, &dir) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn face_chamber_pairs(t: &Truncation) -> Vec<(ApartmentSimplex, ApartmentSimplex)> {
    let chambers = t.chambers();
    t.all_simplices().flat_map(|s| chambers.iter().map(move |d| (s.clone(), d.clone()))).collect()
}

fn describe(err: &Error) -> String {
    err.to_string()
}

fn ball_pairs(n: usize, max_len: usize) -> Vec<(ApartmentSimplex, ApartmentSimplex)> {
    let c = fundamental_chamber(n);
    let chambers = ball_chambers(n, max_len);
    c.faces().into_iter().flat_map(|s| chambers.iter().map(move |d| (s.clone(), d.clone()))).collect()
}

fn ball_chambers(n: usize, max_len: usize) -> Vec<ApartmentSimplex> {
    let c = fundamental_chamber(n);
    ball(n, max_len).iter().map(|w| weyl_action(w, &c).expect("rank matches")).collect()
}

fn uniqueness(pairs: &[(ApartmentSimplex, ApartmentSimplex)], mode: ExecMode, cert: Certificate) -> Certificate {
    let outcomes = exec::map(mode, pairs, |(s, d)| projection_chamber(s, d).err().map(|e| describe(&e)));
    let mut cert = cert;
    cert.record_all(outcomes);
    cert
}

fn gate(pairs: &[(ApartmentSimplex, ApartmentSimplex)], mode: ExecMode, cert: Certificate) -> Certificate {
    let outcomes = exec::map(mode, pairs, |(s, d)| match gate_property_check(s, d) {
        Ok(true) => None,
        Ok(false) => Some(format!("gate property fails for {s:?} and {d:?}")),
        Err(e) => Some(describe(&e)),
    });
    let mut cert = cert;
    cert.record_all(outcomes);
    cert
}

fn dichotomy(chambers: &[ApartmentSimplex], mode: ExecMode, cert: Certificate) -> Certificate {
    let pairs: Vec<(usize, usize)> =
        (0..chambers.len()).flat_map(|k| (k..chambers.len()).map(move |l| (k, l))).collect();
    let per_pair = exec::map(mode, &pairs, |&(k, l)| {
        let (ck, cl) = (&chambers[k], &chambers[l]);
        let mut outs = Vec::new();
        for cj in chambers {
            if !enclos_contains(cj, ck, cl) {
                continue;
            }
            outs.push(match root_dichotomy_check(cj, ck, cl) {
                Ok(true) => None,
                Ok(false) => Some(format!("dichotomy fails for {cj:?} between {ck:?} and {cl:?}")),
                Err(e) => Some(describe(&e)),
            });
        }
        outs
    });
    let mut cert = cert;
    cert.record_all(per_pair.into_iter().flatten());
    cert
}

fn truncation_cert(check: &str, t: &Truncation) -> Certificate {
    Certificate::new(check).param("n", t.rank()).param("radius", t.radius())
}

fn ball_cert(check: &str, n: usize, max_len: usize) -> Certificate {
    Certificate::new(check).param("n", n).param("max_length", max_len)
}

/// Exactly one chamber around each face lies in its enclosure with each
/// chamber of the truncation.
pub fn projection_uniqueness_sweep(t: &Truncation, mode: ExecMode) -> Certificate {
    uniqueness(&face_chamber_pairs(t), mode, truncation_cert("projection_uniqueness", t))
}

/// Faces of `C_o` against every chamber `w C_o` with `ℓ(w) ≤ max_len`.
pub fn projection_uniqueness_ball_sweep(n: usize, max_len: usize, mode: ExecMode) -> Certificate {
    uniqueness(&ball_pairs(n, max_len), mode, ball_cert("projection_uniqueness", n, max_len))
}

pub fn gate_property_sweep(t: &Truncation, mode: ExecMode) -> Certificate {
    gate(&face_chamber_pairs(t), mode, truncation_cert("gate_property", t))
}

pub fn gate_property_ball_sweep(n: usize, max_len: usize, mode: ExecMode) -> Certificate {
    gate(&ball_pairs(n, max_len), mode, ball_cert("gate_property", n, max_len))
}

pub fn segment_sweep(t: &Truncation, samples: usize, seed: u64, mode: ExecMode) -> Certificate {
    let pairs = face_chamber_pairs(t);
    let outcomes = exec::map(mode, &pairs, |(s, d)| match segment_check(s, d, samples, seed) {
        Ok(true) => None,
        Ok(false) => Some(format!("no sampled segment from {s:?} to {d:?} crosses the projection")),
        Err(e) => Some(describe(&e)),
    });
    let mut cert = Certificate::new("segment_entry")
        .param("n", t.rank())
        .param("radius", t.radius())
        .param("samples", samples)
        .param("seed", seed);
    cert.record_all(outcomes);
    cert
}

/// Every triple of chambers with the first in the enclosure of the others.
pub fn root_dichotomy_sweep(t: &Truncation, mode: ExecMode) -> Certificate {
    dichotomy(t.chambers(), mode, truncation_cert("root_dichotomy", t))
}

pub fn root_dichotomy_ball_sweep(n: usize, max_len: usize, mode: ExecMode) -> Certificate {
    dichotomy(&ball_chambers(n, max_len), mode, ball_cert("root_dichotomy", n, max_len))
}
