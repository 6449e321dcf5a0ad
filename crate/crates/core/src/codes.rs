//! Linear codes over GF(q), quotient codes, and generalized Reed-Solomon
//! codes over an extension field.
//!
//! Linear codes are held in canonical form: the generator matrix is the RREF
//! basis of the row space and the parity-check matrix is the RREF basis of
//! its null space.  With that convention `dual` is an exact involution and
//! two codes are equal iff their stored generators are equal.
//!
//! GRS codes carry their evaluation points, column multipliers and the dual
//! multipliers that make the dual code another GRS code over the same
//! points.  Decoding is syndrome-driven bounded-distance decoding: an LFSR
//! synthesis pass over the syndrome sequence, root search over the
//! evaluation points, and error-value recovery from the stored multipliers.

use crate::galois::{Ext, FieldTower};
use crate::matrix::FqMatrix;
use num_rational::Ratio;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("base code is not contained in the enclosing code; witness {witness:?}")]
    NotNested { witness: Vec<u32> },
    #[error("evaluation point at index {0} repeats an earlier point")]
    RepeatedPoint(usize),
    #[error("column multiplier at index {0} is zero")]
    ZeroMultiplier(usize),
    #[error("code length {n} exceeds the field size {size}")]
    LengthExceedsField { n: usize, size: u32 },
    #[error("dimension {k} out of range for length {n}")]
    DimensionOutOfRange { k: usize, n: usize },
}

pub fn hamming_weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// An [n, dim] linear code over GF(q) in generator / parity-check form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    dim: usize,
    gen: FqMatrix,
    check: FqMatrix,
}

impl LinearCode {
    /// Code spanned by the given rows; the generator is canonicalized to the
    /// RREF basis, so dependent or zero rows are harmless.
    pub fn from_generator(q: u32, rows: &[Vec<u32>]) -> LinearCode {
        let n = rows.first().map_or(0, Vec::len);
        let gen_raw =
            if rows.is_empty() { FqMatrix::empty(q, n) } else { FqMatrix::from_rows(q, rows) };
        Self::from_generator_matrix(gen_raw)
    }

    pub fn from_generator_matrix(m: FqMatrix) -> LinearCode {
        let gen = m.row_basis();
        let ns = m.null_space();
        let check = if ns.is_empty() {
            FqMatrix::empty(m.q(), m.cols())
        } else {
            FqMatrix::from_rows(m.q(), &ns).row_basis()
        };
        LinearCode { n: m.cols(), dim: gen.rows(), gen, check }
    }

    pub fn from_parity_check(q: u32, rows: &[Vec<u32>]) -> LinearCode {
        let n = rows.first().map_or(0, Vec::len);
        let m = if rows.is_empty() { FqMatrix::empty(q, n) } else { FqMatrix::from_rows(q, rows) };
        Self::from_generator_matrix(m).dual()
    }

    /// The full space [n, n].
    pub fn full_space(q: u32, n: usize) -> LinearCode {
        LinearCode { n, dim: n, gen: FqMatrix::identity(q, n), check: FqMatrix::empty(q, n) }
    }

    /// The zero code [n, 0].
    pub fn zero_code(q: u32, n: usize) -> LinearCode {
        LinearCode { n, dim: 0, gen: FqMatrix::empty(q, n), check: FqMatrix::identity(q, n) }
    }

    pub fn q(&self) -> u32 {
        self.gen.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical generator matrix, dim x n.
    pub fn gen(&self) -> &FqMatrix {
        &self.gen
    }

    /// Canonical parity-check matrix, (n - dim) x n.
    pub fn check(&self) -> &FqMatrix {
        &self.check
    }

    /// Dual code; an involution on the canonical forms.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            n: self.n,
            dim: self.n - self.dim,
            gen: self.check.clone(),
            check: self.gen.clone(),
        }
    }

    pub fn syndrome(&self, v: &[u32]) -> Vec<u32> {
        self.check.mul_vec(v)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.syndrome(v).iter().all(|&x| x == 0)
    }

    /// True iff every codeword of `other` lies in `self`.
    pub fn contains_code(&self, other: &LinearCode) -> bool {
        (0..other.gen.rows()).all(|r| self.contains(other.gen.row(r)))
    }

    /// First generator row of `other` outside `self`, if any.
    pub fn containment_witness(&self, other: &LinearCode) -> Option<Vec<u32>> {
        (0..other.gen.rows())
            .map(|r| other.gen.row(r))
            .find(|row| !self.contains(row))
            .map(<[u32]>::to_vec)
    }

    /// True iff every cross dot product between the two codes vanishes,
    /// equivalently `other` is contained in the dual of `self`.
    pub fn is_perpendicular(&self, other: &LinearCode) -> Result<bool, CodeError> {
        if self.n != other.n {
            return Err(CodeError::LengthMismatch { left: self.n, right: other.n });
        }
        Ok(self.gen.mul(&other.gen.transpose()).is_zero())
    }

    pub fn encode(&self, msg: &[u32]) -> Vec<u32> {
        self.gen.vec_mul(msg)
    }
}

/// Additive quotient C/B of nested linear codes.
#[derive(Debug, Clone)]
pub struct QuotientCode {
    code: LinearCode,
    base: LinearCode,
}

impl QuotientCode {
    pub fn new(code: LinearCode, base: LinearCode) -> Result<QuotientCode, CodeError> {
        if code.n() != base.n() {
            return Err(CodeError::LengthMismatch { left: code.n(), right: base.n() });
        }
        if let Some(witness) = code.containment_witness(&base) {
            return Err(CodeError::NotNested { witness });
        }
        Ok(QuotientCode { code, base })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    /// Information rate (dim C - dim B) / n.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new((self.code.dim() - self.base.dim()) as u64, self.code.n() as u64)
    }
}

/// Row space over GF(q^k) maintained in reduced echelon form; the extension
/// field counterpart of `matrix::RowSpace`.
#[derive(Debug, Clone)]
pub struct ExtRowSpace {
    tower: Arc<FieldTower>,
    cols: usize,
    rows: Vec<Vec<Ext>>,
    pivots: Vec<usize>,
}

impl ExtRowSpace {
    pub fn new(tower: Arc<FieldTower>, cols: usize) -> Self {
        ExtRowSpace { tower, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<Ext>] {
        &self.rows
    }

    pub fn reduce(&self, v: &[Ext]) -> Vec<Ext> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let t = &self.tower;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = out[p];
            if !f.is_zero() {
                for j in 0..self.cols {
                    out[j] = t.sub(out[j], t.mul(f, row[j]));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Ext]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn insert(&mut self, v: &[Ext]) -> bool {
        let t = self.tower.clone();
        let mut res = self.reduce(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = t.inv(res[p]);
        for x in res.iter_mut() {
            *x = t.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let f = row[p];
            if !f.is_zero() {
                for j in 0..self.cols {
                    row[j] = t.sub(row[j], t.mul(f, res[j]));
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, res);
        true
    }
}

pub fn ext_dot(t: &FieldTower, x: &[Ext], y: &[Ext]) -> Ext {
    assert_eq!(x.len(), y.len(), "vector length mismatch");
    x.iter().zip(y).fold(Ext::ZERO, |acc, (&a, &b)| t.add(acc, t.mul(a, b)))
}

/// Outcome of bounded-distance decoding: the estimated error vector and
/// whether the estimate reproduces the input syndromes within the radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BddOutcome {
    pub error: Vec<Ext>,
    pub ok: bool,
}

/// An [N, K] generalized Reed-Solomon code over GF(q^k): codewords are
/// (v_j f(a_j))_j for polynomials f of degree < K.
#[derive(Debug, Clone)]
pub struct GrsCode {
    tower: Arc<FieldTower>,
    n: usize,
    k: usize,
    points: Vec<Ext>,
    mults: Vec<Ext>,
    dual_mults: Vec<Ext>,
}

impl GrsCode {
    /// Build the code and the multipliers of its dual.  The dual multiplier
    /// at j is the inverse of v_j times the product of (a_j - a_i) over all
    /// other points; the resulting dual generator is checked to annihilate
    /// the primal generator exactly.
    pub fn new(
        tower: Arc<FieldTower>,
        n: usize,
        k: usize,
        points: Vec<Ext>,
        mults: Vec<Ext>,
    ) -> Result<GrsCode, CodeError> {
        if n > tower.size() as usize {
            return Err(CodeError::LengthExceedsField { n, size: tower.size() });
        }
        if k > n {
            return Err(CodeError::DimensionOutOfRange { k, n });
        }
        if points.len() != n || mults.len() != n {
            return Err(CodeError::DimensionOutOfRange { k: points.len(), n });
        }
        for j in 0..n {
            if points[..j].contains(&points[j]) {
                return Err(CodeError::RepeatedPoint(j));
            }
            if mults[j].is_zero() {
                return Err(CodeError::ZeroMultiplier(j));
            }
        }
        let t = &tower;
        let dual_mults: Vec<Ext> = (0..n)
            .map(|j| {
                let prod = (0..n)
                    .filter(|&i| i != j)
                    .fold(Ext::ONE, |acc, i| t.mul(acc, t.sub(points[j], points[i])));
                t.inv(t.mul(mults[j], prod))
            })
            .collect();
        let code = GrsCode { tower, n, k, points, mults, dual_mults };
        debug_assert!(code.dual_is_orthogonal());
        Ok(code)
    }

    /// Dot products between all primal and dual generator rows vanish.
    pub fn dual_is_orthogonal(&self) -> bool {
        let t = &self.tower;
        let gen = self.generator_rows();
        let dual_gen = self.parity_rows();
        gen.iter().all(|g| dual_gen.iter().all(|h| ext_dot(t, g, h).is_zero()))
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Ext] {
        &self.points
    }

    pub fn mults(&self) -> &[Ext] {
        &self.mults
    }

    pub fn dual_mults(&self) -> &[Ext] {
        &self.dual_mults
    }

    /// Bounded-distance decoding radius floor((N - K) / 2).
    pub fn radius(&self) -> usize {
        (self.n - self.k) / 2
    }

    /// Generator rows (v_j a_j^i) for i = 0..K-1.
    pub fn generator_rows(&self) -> Vec<Vec<Ext>> {
        self.vandermonde_rows(&self.mults, self.k)
    }

    /// Parity-check rows (w_j a_j^i) for i = 0..N-K-1; these generate the
    /// dual code.
    pub fn parity_rows(&self) -> Vec<Vec<Ext>> {
        self.vandermonde_rows(&self.dual_mults, self.n - self.k)
    }

    fn vandermonde_rows(&self, mults: &[Ext], count: usize) -> Vec<Vec<Ext>> {
        let t = &self.tower;
        let mut rows = Vec::with_capacity(count);
        let mut powers: Vec<Ext> = mults.to_vec();
        for _ in 0..count {
            rows.push(powers.clone());
            for (p, &a) in powers.iter_mut().zip(&self.points) {
                *p = t.mul(*p, a);
            }
        }
        rows
    }

    /// Dual code: same points, multipliers swapped with the dual multipliers.
    pub fn dual(&self) -> GrsCode {
        GrsCode {
            tower: self.tower.clone(),
            n: self.n,
            k: self.n - self.k,
            points: self.points.clone(),
            mults: self.dual_mults.clone(),
            dual_mults: self.mults.clone(),
        }
    }

    /// Evaluation encoding of a length-K message polynomial.
    pub fn encode(&self, msg: &[Ext]) -> Vec<Ext> {
        assert_eq!(msg.len(), self.k, "message length mismatch");
        let t = &self.tower;
        (0..self.n)
            .map(|j| {
                // Horner evaluation of f at a_j, scaled by v_j.
                let f =
                    msg.iter().rev().fold(Ext::ZERO, |acc, &c| t.add(t.mul(acc, self.points[j]), c));
                t.mul(self.mults[j], f)
            })
            .collect()
    }

    /// Syndromes S_i = sum_j word_j w_j a_j^i for i = 0..N-K-1; zero exactly
    /// on codewords.
    pub fn syndromes(&self, word: &[Ext]) -> Vec<Ext> {
        assert_eq!(word.len(), self.n, "word length mismatch");
        self.parity_rows().iter().map(|row| ext_dot(&self.tower, row, word)).collect()
    }

    /// Bounded-distance decoding from syndromes alone.
    ///
    /// If the true error has weight at most the radius, the exact error
    /// vector is returned with `ok = true`.  Beyond the radius the decoder
    /// either flags failure or returns some syndrome-consistent error of
    /// weight at most the radius (a miscorrection the caller cannot tell
    /// apart, as usual for bounded-distance decoding).
    pub fn bdd_decode(&self, syndromes: &[Ext]) -> BddOutcome {
        let t = &self.tower;
        let d1 = self.n - self.k;
        assert_eq!(syndromes.len(), d1, "syndrome count mismatch");
        let fail = BddOutcome { error: vec![Ext::ZERO; self.n], ok: false };
        if syndromes.iter().all(|s| s.is_zero()) {
            return BddOutcome { error: vec![Ext::ZERO; self.n], ok: true };
        }
        let radius = self.radius();
        if radius == 0 {
            return fail;
        }

        let (conn, l) = lfsr_synthesis(t, syndromes);
        if l > radius {
            return fail;
        }
        // Locator with roots at the error points themselves: the reversal of
        // the connection polynomial within formal degree L.  A shortfall in
        // deg(conn) surfaces as a root at zero, i.e. an error at the zero
        // evaluation point.
        let locator: Vec<Ext> =
            (0..=l).map(|i| conn.get(l - i).copied().unwrap_or(Ext::ZERO)).collect();
        let root_positions: Vec<usize> = (0..self.n)
            .filter(|&j| poly_eval(t, &locator, self.points[j]).is_zero())
            .collect();
        if root_positions.len() != l {
            return fail;
        }

        // Error evaluator Omega = S(x) * conn(x) mod x^(N-K).
        let omega = poly_mul_truncated(t, syndromes, &conn, d1);
        let deriv = poly_formal_derivative(t, &conn);
        let mut error = vec![Ext::ZERO; self.n];
        let mut zero_position = None;
        let mut value_sum = Ext::ZERO;
        for &j in &root_positions {
            let a = self.points[j];
            if a.is_zero() {
                zero_position = Some(j);
                continue;
            }
            let x0 = t.inv(a);
            let den = poly_eval(t, &deriv, x0);
            if den.is_zero() {
                return fail;
            }
            let num = poly_eval(t, &omega, x0);
            let y = t.neg(t.mul(a, t.div(num, den)));
            value_sum = t.add(value_sum, y);
            error[j] = t.div(y, self.dual_mults[j]);
        }
        if let Some(j0) = zero_position {
            // The zero point contributes only to S_0.
            let y0 = t.sub(syndromes[0], value_sum);
            error[j0] = t.div(y0, self.dual_mults[j0]);
        }
        if self.syndromes(&error) != syndromes {
            return fail;
        }
        BddOutcome { error, ok: true }
    }
}

/// Berlekamp-Massey: the shortest LFSR (connection polynomial, register
/// length) generating the sequence.
fn lfsr_synthesis(t: &FieldTower, seq: &[Ext]) -> (Vec<Ext>, usize) {
    let mut conn = vec![Ext::ONE];
    let mut prev = vec![Ext::ONE];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b = Ext::ONE;
    for n in 0..seq.len() {
        let mut d = seq[n];
        for i in 1..=l.min(conn.len() - 1) {
            d = t.add(d, t.mul(conn[i], seq[n - i]));
        }
        if d.is_zero() {
            m += 1;
        } else if 2 * l <= n {
            let snapshot = conn.clone();
            let f = t.div(d, b);
            add_shifted(t, &mut conn, &prev, f, m);
            l = n + 1 - l;
            prev = snapshot;
            b = d;
            m = 1;
        } else {
            let f = t.div(d, b);
            add_shifted(t, &mut conn, &prev, f, m);
            m += 1;
        }
    }
    (conn, l)
}

/// conn -= f * x^shift * prev.
fn add_shifted(t: &FieldTower, conn: &mut Vec<Ext>, prev: &[Ext], f: Ext, shift: usize) {
    if conn.len() < prev.len() + shift {
        conn.resize(prev.len() + shift, Ext::ZERO);
    }
    for (i, &p) in prev.iter().enumerate() {
        conn[i + shift] = t.sub(conn[i + shift], t.mul(f, p));
    }
}

fn poly_eval(t: &FieldTower, poly: &[Ext], x: Ext) -> Ext {
    poly.iter().rev().fold(Ext::ZERO, |acc, &c| t.add(t.mul(acc, x), c))
}

fn poly_mul_truncated(t: &FieldTower, a: &[Ext], b: &[Ext], limit: usize) -> Vec<Ext> {
    let mut out = vec![Ext::ZERO; limit.min(a.len() + b.len()).max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() || i >= limit {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j >= limit {
                break;
            }
            out[i + j] = t.add(out[i + j], t.mul(x, y));
        }
    }
    out
}

fn poly_formal_derivative(t: &FieldTower, poly: &[Ext]) -> Vec<Ext> {
    if poly.len() <= 1 {
        return vec![Ext::ZERO];
    }
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| t.scale((i as u32) % t.q(), c))
        .collect()
}
