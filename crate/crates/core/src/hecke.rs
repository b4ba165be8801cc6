//! The Iwahori–Hecke algebra of `Ã_{N-1}` in the Iwahori–Matsumoto basis.
//!
//! Normalisation: `vol(I) = 1`, so `T_w = 1_{IwI}` and
//! `e_I ⋆ δ_w ⋆ e_I = q^{-ℓ(w)} T_w`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_weyl::{ball, AffinePermutation, SimpleReflection};
use crate::apartment::{fundamental_chamber, weyl_action};
use crate::certificate::Certificate;
use crate::convexity::enclos_contains;
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::rational::{encode, q_int, Q};

/// A Laurent polynomial in `q` with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, Q>,
}

impl LaurentPoly {
    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Q, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(Q::one(), exp)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub fn terms(&self) -> &BTreeMap<i32, Q> {
        &self.terms
    }

    pub fn eval(&self, q: &Q) -> Q {
        let mut acc = Q::zero();
        for (&e, c) in &self.terms {
            let mut p = Q::one();
            let base = if e >= 0 { q.clone() } else { q.recip() };
            for _ in 0..e.unsigned_abs() {
                p *= &base;
            }
            acc += c * p;
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = LaurentPoly::default();
        for (&e, x) in &self.terms {
            out.add_term(e, x * c);
        }
        out
    }

    fn add_term(&mut self, exp: i32, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, other: LaurentPoly) -> LaurentPoly {
        &self + &other
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&q_int(-1))
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        self + &(-other)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// How the parameter `q` is treated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientMode {
    Symbolic,
    Specialized(Q),
}

/// A finite combination `Σ c_w T_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    mode: CoefficientMode,
    rank: usize,
    terms: BTreeMap<AffinePermutation, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(rank: usize, mode: CoefficientMode) -> Self {
        HeckeElement { mode, rank, terms: BTreeMap::new() }
    }

    /// `T_w`.
    pub fn basis(w: &AffinePermutation, mode: CoefficientMode) -> Self {
        let mut x = Self::zero(w.rank(), mode);
        x.terms.insert(w.clone(), LaurentPoly::constant(Q::one()));
        x
    }

    pub fn unit(rank: usize, mode: CoefficientMode) -> Self {
        Self::basis(&AffinePermutation::identity(rank), mode)
    }

    pub fn mode(&self) -> &CoefficientMode {
        &self.mode
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<AffinePermutation, LaurentPoly> {
        &self.terms
    }

    pub fn coefficient(&self, w: &AffinePermutation) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The parameter `q` as a coefficient in this mode.
    pub fn q(&self) -> LaurentPoly {
        self.q_pow(1)
    }

    pub fn q_pow(&self, e: i32) -> LaurentPoly {
        self.normalize_coeff(LaurentPoly::q_pow(e))
    }

    fn normalize_coeff(&self, c: LaurentPoly) -> LaurentPoly {
        match &self.mode {
            CoefficientMode::Symbolic => c,
            CoefficientMode::Specialized(q) => LaurentPoly::constant(c.eval(q)),
        }
    }

    fn add_term(&mut self, w: AffinePermutation, c: LaurentPoly) {
        let c = self.normalize_coeff(c);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.rank, self.mode.clone());
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&LaurentPoly::constant(q_int(-1))))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    /// Right multiplication by `T_s`.
    pub fn mul_simple(&self, s: SimpleReflection) -> Self {
        let t = AffinePermutation::simple(self.rank, s).expect("generator in range");
        let q = self.q();
        let q_minus_1 = &q - &LaurentPoly::constant(Q::one());
        let mut out = Self::zero(self.rank, self.mode.clone());
        for (w, c) in &self.terms {
            let ws = w.mul(&t);
            if ws.length() > w.length() {
                out.add_term(ws, c.clone());
            } else {
                out.add_term(ws, c * &q);
                out.add_term(w.clone(), c * &q_minus_1);
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = Self::zero(self.rank, self.mode.clone());
        for (v, c) in &other.terms {
            let mut acc = self.clone();
            for s in v.reduced_word() {
                acc = acc.mul_simple(s);
            }
            out = out.add(&acc.scale(c))?;
        }
        Ok(out)
    }

    /// Evaluates a symbolic element at `q`.
    pub fn specialize(&self, q: &Q) -> Self {
        let mode = CoefficientMode::Specialized(q.clone());
        let mut out = Self::zero(self.rank, mode);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// `{reduced word: coefficient}` with exact string coefficients.
    pub fn to_sparse_json(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let coeff = match &self.mode {
                    CoefficientMode::Symbolic => c.to_string(),
                    CoefficientMode::Specialized(_) => encode(&c.eval(&Q::one())),
                };
                (w.to_string(), coeff)
            })
            .collect()
    }
}

/// `Π_t q^{-ℓ(u_t)} T_{u_t}` with `u_t = w_{t-1}^{-1} w_t`.
pub fn idempotent_product_support(word: &[AffinePermutation], mode: CoefficientMode) -> Result<HeckeElement> {
    let first = word.first().ok_or_else(|| Error::Precondition("empty idempotent word".into()))?;
    let mut acc = HeckeElement::unit(first.rank(), mode);
    for pair in word.windows(2) {
        let u = pair[0].inverse().compose(&pair[1])?;
        let factor = HeckeElement::basis(&u, acc.mode.clone());
        let weight = acc.q_pow(-(u.length() as i32));
        acc = acc.multiply(&factor)?.scale(&weight);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCertificate {
    pub w_k: String,
    pub w_j: String,
    pub through: BTreeMap<String, String>,
    pub direct: BTreeMap<String, String>,
    pub equal: bool,
    pub length_additive: bool,
}

/// Compares `e_I ⋆ e_K ⋆ e_J` with `e_I ⋆ e_J` without checking that
/// `w_K C_o` lies between `C_o` and `w_J C_o`.
pub fn compare_factorization(w_k: &AffinePermutation, w_j: &AffinePermutation) -> Result<FactorizationCertificate> {
    let n = w_k.rank();
    let e = AffinePermutation::identity(n);
    let through = idempotent_product_support(&[e.clone(), w_k.clone(), w_j.clone()], CoefficientMode::Symbolic)?;
    let direct = idempotent_product_support(&[e, w_j.clone()], CoefficientMode::Symbolic)?;
    let rest = w_k.inverse().compose(w_j)?;
    Ok(FactorizationCertificate {
        w_k: w_k.to_string(),
        w_j: w_j.to_string(),
        through: through.to_sparse_json(),
        direct: direct.to_sparse_json(),
        equal: through == direct,
        length_additive: w_k.length() + rest.length() == w_j.length(),
    })
}

/// Whether `w_K C_o ⊂ E[C_o, w_J C_o]`.
pub fn between(w_k: &AffinePermutation, w_j: &AffinePermutation) -> Result<bool> {
    let c = fundamental_chamber(w_k.rank());
    Ok(enclos_contains(&weyl_action(w_k, &c)?, &c, &weyl_action(w_j, &c)?))
}

/// The factorisation identity for a chamber between `C_o` and `w_J C_o`.
pub fn lemma9_check(w_k: &AffinePermutation, w_j: &AffinePermutation) -> Result<FactorizationCertificate> {
    if !between(w_k, w_j)? {
        return Err(Error::NotInEnclos);
    }
    compare_factorization(w_k, w_j)
}

/// All pairs with `ℓ(w_J) ≤ max_len` and `w_K C_o` in the enclosure.
pub fn factorization_sweep(n: usize, max_len: usize, mode: ExecMode) -> Certificate {
    let elems = ball(n, max_len);
    let per_j = exec::map(mode, &elems, |w_j| {
        let mut outs = Vec::new();
        for w_k in elems.iter().filter(|w| w.length() <= w_j.length()) {
            match between(w_k, w_j) {
                Ok(false) => continue,
                Ok(true) => {}
                Err(e) => {
                    outs.push(Some(e.to_string()));
                    continue;
                }
            }
            outs.push(match lemma9_check(w_k, w_j) {
                Ok(c) if c.equal && c.length_additive => None,
                Ok(c) => Some(format!(
                    "w_K={} w_J={}: equal={} additive={}",
                    c.w_k, c.w_j, c.equal, c.length_additive
                )),
                Err(e) => Some(e.to_string()),
            });
        }
        outs
    });
    let mut cert = Certificate::new("idempotent_factorization").param("n", n).param("max_length", max_len);
    cert.record_all(per_j.into_iter().flatten());
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use proptest::prelude::*;

    fn w(n: usize, word: &[usize]) -> AffinePermutation {
        AffinePermutation::from_indices(n, word).unwrap()
    }

    fn t(n: usize, word: &[usize]) -> HeckeElement {
        HeckeElement::basis(&w(n, word), CoefficientMode::Symbolic)
    }

    fn q() -> LaurentPoly {
        LaurentPoly::q_pow(1)
    }

    fn one() -> LaurentPoly {
        LaurentPoly::constant(Q::one())
    }

    #[test]
    fn laurent_arithmetic() {
        let a = &q() - &one();
        let b = &a * &LaurentPoly::q_pow(-2);
        assert_eq!(b.eval(&q_int(2)), q_frac(1, 4));
        assert!((&a - &a).is_zero());
        assert_eq!(a.to_string(), "1*q + -1");
    }

    #[test]
    fn unit_is_neutral() {
        for x in ball(3, 3) {
            let tx = HeckeElement::basis(&x, CoefficientMode::Symbolic);
            let e = HeckeElement::unit(3, CoefficientMode::Symbolic);
            assert_eq!(e.multiply(&tx).unwrap(), tx);
            assert_eq!(tx.multiply(&e).unwrap(), tx);
        }
    }

    #[test]
    fn quadratic_relation() {
        for s in 0..2 {
            let ts = t(2, &[s]);
            let sq = ts.multiply(&ts).unwrap();
            let expected = ts.scale(&(&q() - &one())).add(&t(2, &[]).scale(&q())).unwrap();
            assert_eq!(sq, expected);
        }
    }

    #[test]
    fn associativity_instance() {
        let (t0, t1) = (t(2, &[0]), t(2, &[1]));
        let lhs = t0.multiply(&t1).unwrap().multiply(&t0).unwrap();
        let rhs = t0.multiply(&t1.multiply(&t0).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn braid_relation_rank_three() {
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            let lhs = t(3, &[a]).multiply(&t(3, &[b])).unwrap().multiply(&t(3, &[a])).unwrap();
            let rhs = t(3, &[b]).multiply(&t(3, &[a])).unwrap().multiply(&t(3, &[b])).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(lhs, t(3, &[a, b, a]));
        }
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let a = t(2, &[0]);
        let b = a.specialize(&q_int(3));
        assert_eq!(a.multiply(&b), Err(Error::ModeMismatch));
    }

    #[test]
    fn idempotent_word_examples() {
        let e = w(2, &[]);
        let s1 = w(2, &[1]);
        let s10 = w(2, &[1, 0]);
        for x in ball(2, 3) {
            let got = idempotent_product_support(&[e.clone(), x.clone()], CoefficientMode::Symbolic).unwrap();
            let expected = HeckeElement::basis(&x, CoefficientMode::Symbolic).scale(&LaurentPoly::q_pow(-(x.length() as i32)));
            assert_eq!(got, expected);
        }
        let got = idempotent_product_support(&[e.clone(), s1, s10.clone()], CoefficientMode::Symbolic).unwrap();
        assert_eq!(got, t(2, &[1, 0]).scale(&LaurentPoly::q_pow(-2)));
        let s0 = w(2, &[0]);
        let got = idempotent_product_support(&[e.clone(), s0, e], CoefficientMode::Symbolic).unwrap();
        let expected = t(2, &[]).scale(&q()).add(&t(2, &[0]).scale(&(&q() - &one()))).unwrap().scale(&LaurentPoly::q_pow(-2));
        assert_eq!(got, expected);
    }

    #[test]
    fn factorization_examples() {
        let e = w(2, &[]);
        let s10 = w(2, &[1, 0]);
        assert!(lemma9_check(&e, &s10).unwrap().equal);
        let c = lemma9_check(&w(2, &[1]), &s10).unwrap();
        assert!(c.equal && c.length_additive);
        assert_eq!(lemma9_check(&w(2, &[0]), &w(2, &[1])), Err(Error::NotInEnclos));
        let neg = compare_factorization(&w(2, &[0]), &w(2, &[1])).unwrap();
        assert!(!neg.equal && !neg.length_additive);
    }

    #[test]
    fn factorization_sweep_small() {
        let cert = factorization_sweep(2, 5, ExecMode::Parallel);
        assert!(cert.passed(), "{cert:?}");
        let cert = factorization_sweep(3, 3, ExecMode::Sequential);
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn enclosure_matches_length_additivity() {
        // a chamber lies between C_o and wC_o exactly when it sits on a minimal gallery
        for w_j in ball(3, 4) {
            for w_k in ball(3, 4) {
                let additive = w_k.length() + w_k.inverse().mul(&w_j).length() == w_j.length();
                assert_eq!(between(&w_k, &w_j).unwrap(), additive, "{w_k} {w_j}");
            }
        }
    }

    #[test]
    fn json_form() {
        let x = t(2, &[1, 0]).scale(&LaurentPoly::q_pow(-2));
        let j = x.to_sparse_json();
        assert_eq!(j.get("s1 s0").map(String::as_str), Some("1*q^-2"));
        let y = x.specialize(&q_int(2));
        assert_eq!(y.to_sparse_json().get("s1 s0").map(String::as_str), Some("1/4"));
    }

    fn word_strategy(n: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(0..n, 0..max)
    }

    proptest! {
        #[test]
        fn specialization_commutes_with_products(a in word_strategy(3, 4), b in word_strategy(3, 4), qv in 2i64..7) {
            let x = t(3, &[]).add(&t(3, &a)).unwrap();
            let y = t(3, &b).scale(&q());
            let qv = q_int(qv);
            let sym = x.multiply(&y).unwrap().specialize(&qv);
            let spec = x.specialize(&qv).multiply(&y.specialize(&qv)).unwrap();
            prop_assert_eq!(sym, spec);
        }

        #[test]
        fn products_of_generators_respect_length(word in word_strategy(3, 6)) {
            let mut acc = HeckeElement::unit(3, CoefficientMode::Symbolic);
            for &s in &word {
                acc = acc.mul_simple(SimpleReflection(s));
            }
            prop_assert!(acc.terms().keys().all(|x| x.length() <= word.len()));
        }

        #[test]
        fn multiplication_is_associative(a in word_strategy(3, 4), b in word_strategy(3, 4), c in word_strategy(3, 3)) {
            let (x, y, z) = (t(3, &a), t(3, &b), t(3, &c));
            let lhs = x.multiply(&y).unwrap().multiply(&z).unwrap();
            let rhs = x.multiply(&y.multiply(&z).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
