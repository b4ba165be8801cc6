//! Exact linear algebra over the rationals: dense echelon forms and a sparse
//! rank routine for boundary matrices.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{decode, encode, Q};

/// Dense row-major matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("matrix difference".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let d = &f * &m[(r, j)];
                            m[(i, j)] -= d;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Exact determinant (square matrices only).
    pub fn det(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Q::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] / &piv;
                    for j in c..m.cols {
                        let d = &f * &m[(c, j)];
                        m[(i, j)] -= d;
                    }
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of the span of a list of vectors of equal length.
pub fn span_rank(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Extracts a basis (a maximal independent subfamily) of the span.
pub fn basis_of_span(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let Some(len) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let m = Matrix::from_columns(len, vectors);
    let (_, pivots) = m.rref();
    pivots.into_iter().map(|j| vectors[j].clone()).collect()
}

/// Coordinates of each target vector in the given (independent) basis, or
/// `None` if some target is outside the span.
pub fn coordinates(basis: &[Vec<Q>], targets: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let Some(len) = basis.first().or(targets.first()).map(Vec::len) else {
        return Some(Vec::new());
    };
    let k = basis.len();
    let mut cols: Vec<Vec<Q>> = basis.to_vec();
    cols.extend(targets.iter().cloned());
    let aug = Matrix::from_columns(len, &cols);
    let (r, pivots) = aug.rref();
    if pivots.iter().any(|&p| p >= k) || pivots.len() != k {
        return None;
    }
    Some(
        (0..targets.len())
            .map(|t| (0..k).map(|i| r[(i, k + t)].clone()).collect())
            .collect(),
    )
}

/// Sparse matrix in coordinate form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero entries keyed by `(row, col)`.
    pub entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, j: usize, v: Q) {
        debug_assert!(i < self.rows && j < self.cols);
        let e = self.entries.entry((i, j)).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m[(i, j)] = v.clone();
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut s = SparseMatrix::new(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    s.entries.insert((i, j), m[(i, j)].clone());
                }
            }
        }
        s
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &Q)>> = vec![Vec::new(); other.rows];
        for (&(i, j), v) in &other.entries {
            by_row[i].push((j, v));
        }
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add(i, j, a * b);
            }
        }
        Ok(out)
    }

    /// Exact rank by sparse Gaussian elimination over `Q`.
    ///
    /// Rows are inserted one at a time and reduced against the current pivot
    /// rows; pivots prefer unit entries so integer matrices with `±1` entries
    /// rarely produce fractions.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            rows[i].push((j, v.clone()));
        }
        rows.sort_by_key(Vec::len);
        let mut pivots: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
        for mut row in rows {
            while let Some((lead, lv)) = row.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => {
                        // p is normalised with leading coefficient 1
                        row = axpy(&row, &(-lv), p);
                    }
                    None => {
                        let inv = if lv.is_one() { None } else { Some(lv.recip()) };
                        if let Some(inv) = inv {
                            for e in row.iter_mut() {
                                e.1 = &e.1 * &inv;
                            }
                        }
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    /// Triplets `(row, col, "n/d")` in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, String)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, encode(v))).collect()
    }
}

/// `a + c * b` for sparse sorted rows.
fn axpy(a: &[(usize, Q)], c: &Q, b: &[(usize, Q)]) -> Vec<(usize, Q)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Serialised form of a sparse matrix: shape plus `"n/d"` triplets.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SparseMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl From<&SparseMatrix> for SparseMatrixJson {
    fn from(m: &SparseMatrix) -> Self {
        SparseMatrixJson { rows: m.rows, cols: m.cols, entries: m.triplets() }
    }
}

impl TryFrom<&SparseMatrixJson> for SparseMatrix {
    type Error = Error;
    fn try_from(j: &SparseMatrixJson) -> Result<Self> {
        let mut m = SparseMatrix::new(j.rows, j.cols);
        for (r, c, s) in &j.entries {
            if *r >= j.rows || *c >= j.cols {
                return Err(Error::ShapeMismatch(format!("entry ({r},{c}) outside {}x{}", j.rows, j.cols)));
            }
            let v = decode(s).ok_or_else(|| Error::ShapeMismatch(format!("bad rational {s:?}")))?;
            m.add(*r, *c, v);
        }
        Ok(m)
    }
}

/// Largest absolute numerator, used only for reporting growth.
pub fn max_abs_numerator(m: &SparseMatrix) -> Q {
    m.entries.values().map(|v| v.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
}
