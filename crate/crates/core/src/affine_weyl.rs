//! The affine Weyl group of type `Ã_{N-1}` as affine permutations.
//!
//! An element is a bijection `w: Z -> Z` with `w(i + N) = w(i) + N` and
//! `Σ_{i=1..N} w(i) = N(N+1)/2`, stored through its window
//! `[w(1), ..., w(N)]`. Elements act on integers from the right, so the
//! product `u·v` (see [`AffinePermutation::compose`]) is "first `u`, then
//! `v`": `i·(uv) = (i·u)·v`. The simple reflection `s_k` (`1 ≤ k < N`)
//! swaps `k` and `k+1`; `s_0` swaps `0` and `1`.
//!
//! The geometric action on the apartment lives in [`AffinePermutation::act`]
//! and is a left action: `act(uv) = act(u) ∘ act(v)`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{Error, Result};

/// A Coxeter generator `s_index`; `s_0` is the affine reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimpleReflection(pub usize);

impl fmt::Display for SimpleReflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl TryFrom<Vec<i64>> for AffinePermutation {
    type Error = Error;
    fn try_from(window: Vec<i64>) -> Result<Self> {
        AffinePermutation::from_window(window)
    }
}

impl From<AffinePermutation> for Vec<i64> {
    fn from(w: AffinePermutation) -> Vec<i64> {
        w.window
    }
}

impl fmt::Debug for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.window)
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.reduced_word();
        if word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = word.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl AffinePermutation {
    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let n = window.len() as i64;
        if n < 2 {
            return Err(Error::InvalidPermutation("rank must be at least 2".into()));
        }
        let residues: HashSet<i64> = window.iter().map(|v| v.rem_euclid(n)).collect();
        if residues.len() != window.len() {
            return Err(Error::InvalidPermutation(format!("{window:?}: residues not distinct")));
        }
        let sum: i64 = window.iter().sum();
        if sum != n * (n + 1) / 2 {
            return Err(Error::InvalidPermutation(format!(
                "{window:?}: window sum {sum} != {}",
                n * (n + 1) / 2
            )));
        }
        Ok(AffinePermutation { window })
    }

    pub fn identity(n: usize) -> Self {
        AffinePermutation { window: (1..=n as i64).collect() }
    }

    pub fn simple(n: usize, s: SimpleReflection) -> Result<Self> {
        if n < 2 || s.0 >= n {
            return Err(Error::OutOfRange(format!("{s} for rank {n}")));
        }
        let mut window: Vec<i64> = (1..=n as i64).collect();
        if s.0 == 0 {
            window[0] = 0;
            window[n - 1] = n as i64 + 1;
        } else {
            window.swap(s.0 - 1, s.0);
        }
        Ok(AffinePermutation { window })
    }

    /// Product of the generators in order (empty word gives the identity).
    pub fn from_word(n: usize, word: &[SimpleReflection]) -> Result<Self> {
        let mut w = Self::identity(n);
        for &s in word {
            w = w.compose(&Self::simple(n, s)?)?;
        }
        Ok(w)
    }

    /// Shorthand for `from_word` with bare generator indices.
    pub fn from_indices(n: usize, word: &[usize]) -> Result<Self> {
        let word: Vec<SimpleReflection> = word.iter().map(|&i| SimpleReflection(i)).collect();
        Self::from_word(n, &word)
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &v)| v == i as i64 + 1)
    }

    /// `w(i)` for any integer `i`.
    pub fn eval(&self, i: i64) -> i64 {
        let n = self.rank() as i64;
        let r = (i - 1).rem_euclid(n);
        let shift = (i - 1 - r) / n;
        self.window[r as usize] + shift * n
    }

    /// The group product `u·v`: first `u`, then `v`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let window = self.window.iter().map(|&x| other.eval(x)).collect();
        Ok(AffinePermutation { window })
    }

    /// Product with a rank already known to agree.
    pub fn mul(&self, other: &Self) -> Self {
        self.compose(other).expect("rank mismatch")
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank() as i64;
        let mut window = vec![0; self.rank()];
        for (i, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(n);
            let shift = (v - 1 - r) / n;
            window[r as usize] = i as i64 + 1 - shift * n;
        }
        AffinePermutation { window }
    }

    /// Coxeter length, via the inversion formula
    /// `Σ_{i<j} |⌊(w(j) - w(i)) / N⌋|`.
    pub fn length(&self) -> usize {
        let n = self.rank() as i64;
        let mut len = 0;
        for i in 0..self.window.len() {
            for j in i + 1..self.window.len() {
                len += (self.window[j] - self.window[i]).div_euclid(n).unsigned_abs() as usize;
            }
        }
        len
    }

    /// Right descents: `s` with `ℓ(w·s) < ℓ(w)`.
    pub fn descents(&self) -> BTreeSet<SimpleReflection> {
        let n = self.rank();
        let l = self.length();
        (0..n)
            .map(SimpleReflection)
            .filter(|&s| self.mul(&Self::simple(n, s).expect("in range")).length() < l)
            .collect()
    }

    /// A reduced word; multiplying it out in order gives `self`.
    pub fn reduced_word(&self) -> Vec<SimpleReflection> {
        let n = self.rank();
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while let Some(&s) = w.descents().iter().next() {
            w = w.mul(&Self::simple(n, s).expect("in range"));
            word.push(s);
        }
        word.reverse();
        word
    }

    /// Geometric action on apartment coordinates in `Z^N`, with the translation
    /// part scaled by `scale` (use `scale = 1` for lattice points; a larger
    /// scale acts on points with denominator `scale`).
    pub fn act_scaled(&self, y: &[i64], scale: i64) -> Vec<i64> {
        assert_eq!(y.len(), self.rank());
        let n = self.rank() as i64;
        let g = self.inverse();
        let mut out = vec![0; y.len()];
        for (i, &v) in g.window.iter().enumerate() {
            let pi = (v - 1).rem_euclid(n);
            let c = (v - 1 - pi) / n;
            out[pi as usize] = y[i] + scale * c;
        }
        out
    }

    pub fn act(&self, y: &[i64]) -> Vec<i64> {
        self.act_scaled(y, 1)
    }

    /// The element whose geometric action is the affine map
    /// `y ↦ (y_{π^{-1}(k)} + c_{π^{-1}(k)})_k`, given `π` (0-based) and `c`.
    pub(crate) fn from_action(perm: &[usize], shifts: &[i64]) -> Result<Self> {
        let n = perm.len() as i64;
        let g: Vec<i64> = perm.iter().zip(shifts).map(|(&p, &c)| p as i64 + 1 + n * c).collect();
        Ok(AffinePermutation::from_window(g)?.inverse())
    }
}

/// All elements of length at most `bound`, in BFS order from the identity.
pub fn ball(n: usize, bound: usize) -> Vec<AffinePermutation> {
    let gens: Vec<AffinePermutation> =
        (0..n).map(|i| AffinePermutation::simple(n, SimpleReflection(i)).expect("rank >= 2")).collect();
    let e = AffinePermutation::identity(n);
    let mut seen: HashSet<AffinePermutation> = HashSet::from([e.clone()]);
    let mut out = vec![e.clone()];
    let mut queue = VecDeque::from([e]);
    while let Some(w) = queue.pop_front() {
        if w.length() >= bound {
            continue;
        }
        for s in &gens {
            let ws = w.mul(s);
            if ws.length() <= bound && seen.insert(ws.clone()) {
                out.push(ws.clone());
                queue.push_back(ws);
            }
        }
    }
    out
}

/// The finite parabolic subgroup generated by the listed generators.
pub fn parabolic_subgroup(n: usize, face: &BTreeSet<usize>) -> Result<Vec<AffinePermutation>> {
    if face.len() >= n {
        return Err(Error::InfiniteStabilizer);
    }
    let gens: Vec<AffinePermutation> = face
        .iter()
        .map(|&i| AffinePermutation::simple(n, SimpleReflection(i)))
        .collect::<Result<_>>()?;
    let e = AffinePermutation::identity(n);
    let mut seen = HashSet::from([e.clone()]);
    let mut out = vec![e.clone()];
    let mut queue = VecDeque::from([e]);
    while let Some(w) = queue.pop_front() {
        for s in &gens {
            let ws = w.mul(s);
            if seen.insert(ws.clone()) {
                out.push(ws.clone());
                queue.push_back(ws);
            }
        }
    }
    Ok(out)
}

/// Minimal-length representatives of the cosets `w·W_face` with
/// `ℓ(w) ≤ length_bound`, where `W_face` is generated by the reflections
/// listed in `face`.
pub fn coset_min_reps(n: usize, face: &BTreeSet<usize>, length_bound: usize) -> Result<Vec<AffinePermutation>> {
    if face.iter().any(|&i| i >= n) {
        return Err(Error::OutOfRange(format!("face {face:?} for rank {n}")));
    }
    if face.len() == n {
        return Err(Error::InfiniteStabilizer);
    }
    Ok(ball(n, length_bound)
        .into_iter()
        .filter(|w| w.descents().iter().all(|s| !face.contains(&s.0)))
        .collect())
}

/// Coxeter-length bookkeeping over the ball of radius `bound`: word length
/// by breadth-first search against the inversion count, reduced words,
/// descents and inverses.
pub fn word_consistency_sweep(n: usize, bound: usize) -> Result<Certificate> {
    let gens: Vec<AffinePermutation> =
        (0..n).map(|k| AffinePermutation::simple(n, SimpleReflection(k))).collect::<Result<_>>()?;
    let mut dist = std::collections::HashMap::from([(AffinePermutation::identity(n), 0usize)]);
    let mut queue = VecDeque::from([AffinePermutation::identity(n)]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        if d == bound {
            continue;
        }
        for s in &gens {
            let ws = w.mul(s);
            if !dist.contains_key(&ws) {
                dist.insert(ws.clone(), d + 1);
                queue.push_back(ws);
            }
        }
    }
    let mut elems: Vec<(&AffinePermutation, &usize)> = dist.iter().collect();
    elems.sort_by(|a, b| (a.1, a.0.window()).cmp(&(b.1, b.0.window())));
    let mut cert = Certificate::new("word_consistency").param("n", n).param("max_length", bound);
    for (w, &d) in elems {
        let word = w.reduced_word();
        let mut bad = Vec::new();
        if w.length() != d {
            bad.push(format!("length {} but distance {d}", w.length()));
        }
        if word.len() != d || AffinePermutation::from_word(n, &word)? != *w {
            bad.push("reduced word does not spell the element".into());
        }
        if w.inverse().length() != d {
            bad.push("inverse has a different length".into());
        }
        for (k, s) in gens.iter().enumerate() {
            let descent = w.descents().contains(&SimpleReflection(k));
            if descent != (w.mul(s).length() < d) {
                bad.push(format!("descent set wrong at s{k}"));
            }
        }
        cert.record((!bad.is_empty()).then(|| format!("{w}: {}", bad.join("; "))));
    }
    Ok(cert)
}
