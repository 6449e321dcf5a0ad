//! Exact dense linear algebra over prime fields GF(q).
//!
//! Everything here is deterministic: row reduction always picks the leftmost
//! pivot column and the smallest-index nonzero row, so canonical forms are
//! stable across platforms and runs.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular; null vector {null_vector:?}")]
    Singular { null_vector: Vec<u32> },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Multiplicative inverse in GF(q), q prime. Panics on 0.
pub fn inv_mod(a: u32, q: u32) -> u32 {
    assert!(!a.is_multiple_of(q), "inverse of zero in GF({q})");
    // Fermat: a^(q-2) mod q.
    let mut base = u64::from(a % q);
    let mut exp = q - 2;
    let m = u64::from(q);
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u32
}

/// Dense row-major matrix over GF(q) with entries reduced mod q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of reduced row echelon form computation.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FqMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FqMatrix {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Self {
        FqMatrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| x % q));
        }
        FqMatrix { q, rows: rows.len(), cols, data }
    }

    /// A matrix with zero rows but a definite column count.
    pub fn empty(q: u32, cols: usize) -> Self {
        FqMatrix { q, rows: 0, cols, data: Vec::new() }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        assert_eq!(self.q, rhs.q);
        let q = u64::from(self.q);
        let mut out = FqMatrix::zeros(self.q, self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = (acc + u64::from(self.get(r, j)) * u64::from(rhs.get(j, c))) % q;
                }
                out.set(r, c, acc as u32);
            }
        }
        out
    }

    pub fn add(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&rhs.data) {
            *a = (*a + b) % self.q;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// M * v^t as a column vector.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let q = u64::from(self.q);
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + u64::from(self.get(r, c)) * u64::from(v[c])) % q;
                }
                acc as u32
            })
            .collect()
    }

    /// v * M as a row vector.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let q = u64::from(self.q);
        (0..self.cols)
            .map(|c| {
                let mut acc = 0u64;
                for r in 0..self.rows {
                    acc = (acc + u64::from(v[r]) * u64::from(self.get(r, c))) % q;
                }
                acc as u32
            })
            .collect()
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        assert_eq!(self.q, other.q);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FqMatrix { q: self.q, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form with leftmost pivots and smallest-index row
    /// selection. Returns the reduced matrix, its rank and the pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let q = m.q;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(pr, j));
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = inv_mod(m.get(r, c), q);
            for j in 0..m.cols {
                m.set(r, j, (u64::from(m.get(r, j)) * u64::from(inv) % u64::from(q)) as u32);
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = (u64::from(m.get(i, j)) + u64::from(q - f) * u64::from(m.get(r, j)))
                            % u64::from(q);
                        m.set(i, j, v as u32);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    /// The RREF with zero rows dropped: a canonical basis of the row space.
    pub fn row_basis(&self) -> FqMatrix {
        let red = self.rref();
        FqMatrix::from_rows(self.q, &red.matrix.row_vecs()[..red.rank])
    }

    /// Exact inverse; on failure reports a nonzero null vector as evidence of
    /// rank deficiency.
    pub fn invert(&self) -> Result<FqMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = FqMatrix::zeros(self.q, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let red = aug.rref();
        // M is invertible iff the pivots of [M | I] sit in the first n columns.
        if !(0..n).all(|i| red.pivots.get(i) == Some(&i)) {
            let ns = self.null_space();
            let null_vector = ns.first().cloned().unwrap_or_else(|| vec![0; n]);
            return Err(MatrixError::Singular { null_vector });
        }
        let mut inv = FqMatrix::zeros(self.q, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c));
            }
        }
        Ok(inv)
    }

    /// Basis of the right null space { y : M y^t = 0 }, one row per basis
    /// vector, ordered by ascending free column index.
    pub fn null_space(&self) -> Vec<Vec<u32>> {
        let red = self.rref();
        let q = self.q;
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in red.pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut basis = Vec::with_capacity(self.cols - red.rank);
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &p) in red.pivots.iter().enumerate() {
                let coeff = red.matrix.get(i, free);
                if coeff != 0 {
                    v[p] = q - coeff;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Incrementally maintained row space in reduced echelon form.
///
/// Used for membership tests, deterministic basis extension and span
/// comparisons without re-reducing from scratch.
#[derive(Debug, Clone)]
pub struct RowSpace {
    q: u32,
    cols: usize,
    // Rows kept reduced: each has a pivot column with entry 1, pivot columns
    // strictly increasing, and zeros above and below every pivot.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(q: u32, cols: usize) -> Self {
        RowSpace { q, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_matrix(m: &FqMatrix) -> Self {
        let mut s = Self::new(m.q(), m.cols());
        for r in 0..m.rows() {
            s.insert(m.row(r));
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduce `v` against the current basis and return the residual.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let q = u64::from(self.q);
        let mut out: Vec<u32> = v.iter().map(|&x| x % self.q).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = out[p];
            if f != 0 {
                for j in 0..self.cols {
                    out[j] =
                        ((u64::from(out[j]) + (q - u64::from(f)) * u64::from(row[j])) % q) as u32;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert `v` if independent of the span; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut res = self.reduce(v);
        let Some(p) = res.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(res[p], self.q);
        let q = u64::from(self.q);
        for x in res.iter_mut() {
            *x = (u64::from(*x) * u64::from(inv) % q) as u32;
        }
        // Clear column p in existing rows to keep the basis fully reduced.
        for row in self.rows.iter_mut() {
            let f = row[p];
            if f != 0 {
                for j in 0..self.cols {
                    row[j] =
                        ((u64::from(row[j]) + (q - u64::from(f)) * u64::from(res[j])) % q) as u32;
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, res);
        true
    }

    /// Canonical basis (RREF rows in pivot order).
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn to_matrix(&self) -> FqMatrix {
        if self.rows.is_empty() {
            FqMatrix::empty(self.q, self.cols)
        } else {
            FqMatrix::from_rows(self.q, &self.rows)
        }
    }

    /// Two row spaces are equal iff their canonical bases agree.
    pub fn same_span(&self, other: &RowSpace) -> bool {
        self.rows == other.rows && self.pivots == other.pivots
    }
}
