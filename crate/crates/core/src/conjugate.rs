//! Conjugate (CSS) code pairs over GF(q).
//!
//! A pair (C1, C2) of equal-length codes is conjugate when the dual of C2 is
//! contained in C1 (equivalently the dual of C1 in C2).  Messages live in
//! the quotient C1 / C2-dual; transmission picks any coset member.  The pair
//! dimension is k = k1 + k2 - n.
//!
//! Construction completes a set of quotient generators g (a basis of C1
//! modulo the dual of C2) with paired generators g' of C2 such that the dot
//! products <g_l, g'_m> form exactly the identity matrix: stack a basis of
//! the dual of C2, the g rows, and a greedy standard-basis completion into
//! an invertible matrix A, and read the g' off the matching columns of the
//! inverse of A.
//!
//! Decoding the quotient is syndrome decoding of C1 by complete coset-leader
//! tables: an error is corrected exactly when it lies in J plus the dual of
//! C2, where J is the set of coset leaders.

use crate::codes::{hamming_weight, LinearCode};
use crate::matrix::{FqMatrix, RowSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Coset-leader tables are capped at q^(n - k1) <= 2^24 entries.
pub const MAX_TABLE_SIZE: u128 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("codes have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("codes live over different fields: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("dual of C2 is not contained in C1; witness {witness:?}")]
    CssViolation { witness: Vec<u32> },
    #[error("generators are dependent modulo the dual of C2")]
    DependentGenerators,
    #[error("wrong generator count: expected {expected}, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("coset-leader table would need {size} entries (cap {cap})")]
    TableTooLarge { size: u128, cap: u128 },
    #[error("coordinate count mismatch: expected {expected}, got {got}")]
    CoordCount { expected: usize, got: usize },
}

/// Randomness source for choosing a word inside a coset.
#[derive(Debug, Clone)]
pub enum CosetRandomness {
    /// Explicit coefficients over the stored basis of the dual of C2.
    Coefficients(Vec<u32>),
    /// Draw the coefficients uniformly from a seeded deterministic stream.
    Seed(u64),
}

/// A validated [[n, k]] conjugate code pair with paired generator lists.
#[derive(Debug, Clone)]
pub struct ConjugateCodePair {
    c1: LinearCode,
    c2: LinearCode,
    k: usize,
    gens: Vec<Vec<u32>>,
    dual_gens: Vec<Vec<u32>>,
}

impl ConjugateCodePair {
    /// Validate the CSS condition and derive the generator pair.
    ///
    /// The quotient generators g are chosen deterministically: the rows of
    /// C1's canonical generator that extend a basis of the dual of C2, in
    /// order.  The paired g' come from [`complete_dual_generators`].
    pub fn new(c1: LinearCode, c2: LinearCode) -> Result<ConjugateCodePair, PairError> {
        if c1.n() != c2.n() {
            return Err(PairError::LengthMismatch { left: c1.n(), right: c2.n() });
        }
        if c1.q() != c2.q() {
            return Err(PairError::FieldMismatch { left: c1.q(), right: c2.q() });
        }
        let c2_dual = c2.dual();
        if let Some(witness) = c1.containment_witness(&c2_dual) {
            return Err(PairError::CssViolation { witness });
        }
        let k = c1.dim() + c2.dim() - c1.n();
        let mut span = RowSpace::from_matrix(c2_dual.gen());
        let mut gens = Vec::with_capacity(k);
        for r in 0..c1.gen().rows() {
            let row = c1.gen().row(r);
            if span.insert(row) {
                gens.push(row.to_vec());
            }
        }
        debug_assert_eq!(gens.len(), k);
        let dual_gens = complete_dual_generators(&c1, &c2, &gens)?;
        Ok(ConjugateCodePair { c1, c2, k, gens, dual_gens })
    }

    /// Assemble a pair without validation; only for crate-internal negative
    /// controls that need deliberately broken generator lists.
    #[doc(hidden)]
    pub(crate) fn from_parts_unchecked(
        c1: LinearCode,
        c2: LinearCode,
        k: usize,
        gens: Vec<Vec<u32>>,
        dual_gens: Vec<Vec<u32>>,
    ) -> ConjugateCodePair {
        ConjugateCodePair { c1, c2, k, gens, dual_gens }
    }

    /// Build a pair from externally supplied generator lists (for instance a
    /// deserialized pair), re-validating every invariant.
    pub fn with_generators(
        c1: LinearCode,
        c2: LinearCode,
        gens: Vec<Vec<u32>>,
        dual_gens: Vec<Vec<u32>>,
    ) -> Result<ConjugateCodePair, PairError> {
        let base = ConjugateCodePair::new(c1, c2)?;
        let k = base.k;
        if gens.len() != k {
            return Err(PairError::GeneratorCount { expected: k, got: gens.len() });
        }
        if dual_gens.len() != k {
            return Err(PairError::GeneratorCount { expected: k, got: dual_gens.len() });
        }
        let candidate = ConjugateCodePair { c1: base.c1, c2: base.c2, k, gens, dual_gens };
        // Membership, independence and the pairing condition.
        let mut span = RowSpace::from_matrix(candidate.c2.dual().gen());
        for g in &candidate.gens {
            if !candidate.c1.contains(g) || !span.insert(g) {
                return Err(PairError::DependentGenerators);
            }
        }
        for gd in &candidate.dual_gens {
            if !candidate.c2.contains(gd) {
                return Err(PairError::DependentGenerators);
            }
        }
        if !candidate.pairing_is_identity() {
            return Err(PairError::DependentGenerators);
        }
        Ok(candidate)
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &LinearCode {
        &self.c2
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    pub fn q(&self) -> u32 {
        self.c1.q()
    }

    /// Pair dimension k = k1 + k2 - n.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Quotient generators g, a basis of C1 modulo the dual of C2.
    pub fn gens(&self) -> &[Vec<u32>] {
        &self.gens
    }

    /// Paired generators g' with <g_l, g'_m> = delta_lm.
    pub fn dual_gens(&self) -> &[Vec<u32>] {
        &self.dual_gens
    }

    /// The swapped pair (C2, C1), valid by symmetry of the CSS condition.
    pub fn swapped(&self) -> Result<ConjugateCodePair, PairError> {
        ConjugateCodePair::new(self.c2.clone(), self.c1.clone())
    }

    /// The k x k matrix of dot products \[<g_l, g'_m>\].
    pub fn pairing_matrix(&self) -> FqMatrix {
        let q = u64::from(self.q());
        let mut m = FqMatrix::zeros(self.q(), self.k, self.k);
        for (l, g) in self.gens.iter().enumerate() {
            for (mm, gd) in self.dual_gens.iter().enumerate() {
                let dot = g
                    .iter()
                    .zip(gd)
                    .fold(0u64, |acc, (&a, &b)| (acc + u64::from(a) * u64::from(b)) % q);
                m.set(l, mm, dot as u32);
            }
        }
        m
    }

    pub fn pairing_is_identity(&self) -> bool {
        self.pairing_matrix() == FqMatrix::identity(self.q(), self.k)
    }

    /// True iff v lies in the dual of C2 (the randomness space of the
    /// quotient C1 / C2-dual).
    pub fn in_c2_dual(&self, v: &[u32]) -> bool {
        self.c2.gen().mul_vec(v).iter().all(|&x| x == 0)
    }

    /// Encode a message into its coset and pick the member selected by the
    /// randomness: sum of msg_l * g_l plus a word of the dual of C2.
    pub fn coset_encode(&self, msg: &[u32], rand: &CosetRandomness) -> Result<Vec<u32>, PairError> {
        if msg.len() != self.k {
            return Err(PairError::CoordCount { expected: self.k, got: msg.len() });
        }
        let q = self.q();
        let dual_dim = self.c2.dual().dim();
        let coeffs = match rand {
            CosetRandomness::Coefficients(c) => {
                if c.len() != dual_dim {
                    return Err(PairError::CoordCount { expected: dual_dim, got: c.len() });
                }
                c.clone()
            }
            CosetRandomness::Seed(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..dual_dim).map(|_| rng.random_range(0..q)).collect()
            }
        };
        let mut word = vec![0u32; self.n()];
        for (l, g) in self.gens.iter().enumerate() {
            add_scaled(&mut word, g, msg[l], q);
        }
        let c2_dual_gen = self.c2.check(); // rows generate the dual of C2
        for (j, &c) in coeffs.iter().enumerate() {
            add_scaled(&mut word, c2_dual_gen.row(j), c, q);
        }
        Ok(word)
    }

    /// Stage-one success criterion for harnesses that know the true error:
    /// the residual after table decoding lies in the dual of C2.
    pub fn inner_success(&self, table: &SyndromeTable, error: &[u32]) -> bool {
        let estimate = table.decode(&self.c1.syndrome(error));
        let q = self.q();
        let residual: Vec<u32> =
            error.iter().zip(&estimate).map(|(&e, &d)| (e + q - d) % q).collect();
        self.in_c2_dual(&residual)
    }
}

fn add_scaled(acc: &mut [u32], row: &[u32], c: u32, q: u32) {
    if c == 0 {
        return;
    }
    for (a, &r) in acc.iter_mut().zip(row) {
        *a = ((u64::from(*a) + u64::from(c) * u64::from(r)) % u64::from(q)) as u32;
    }
}

/// Complete quotient generators g of C1 modulo the dual of C2 with paired
/// generators g' of C2.
///
/// Builds the n x n matrix A whose first n - k2 rows are the canonical basis
/// of the dual of C2, next k rows are the g, and remaining rows a greedy
/// standard-basis completion to full rank; the g' are the columns of the
/// inverse of A matching the g block, transposed.  By construction
/// <g_l, g'_m> = delta_lm and every g' is orthogonal to the dual of C2,
/// hence lies in C2; together with the dual of C1 the g' span C2.
pub fn complete_dual_generators(
    c1: &LinearCode,
    c2: &LinearCode,
    gens: &[Vec<u32>],
) -> Result<Vec<Vec<u32>>, PairError> {
    let n = c1.n();
    let q = c1.q();
    let c2_dual_rows = c2.check().row_vecs();
    let mut span = RowSpace::new(q, n);
    for row in &c2_dual_rows {
        span.insert(row);
    }
    let base_rank = span.rank();
    let mut rows_a = c2_dual_rows;
    for g in gens {
        if g.len() != n || !span.insert(g) {
            return Err(PairError::DependentGenerators);
        }
        rows_a.push(g.clone());
    }
    debug_assert_eq!(span.rank(), base_rank + gens.len());
    for idx in 0..n {
        if span.rank() == n {
            break;
        }
        let mut e = vec![0u32; n];
        e[idx] = 1;
        if span.insert(&e) {
            rows_a.push(e);
        }
    }
    let a = FqMatrix::from_rows(q, &rows_a);
    let a_inv = a.invert().expect("completed matrix must be invertible");
    let offset = n - c2.dim();
    Ok((0..gens.len()).map(|m| (0..n).map(|r| a_inv.get(r, offset + m)).collect()).collect())
}

/// Complete coset-leader table for a code's parity-check matrix.
///
/// Leaders have minimum weight in their coset; ties break to the
/// lexicographically smallest vector. The set J of leaders is the
/// correctable set of the plain code.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    q: u32,
    n: usize,
    check: FqMatrix,
    leaders: Vec<Vec<u32>>,
}

impl SyndromeTable {
    /// Enumerates error patterns by increasing weight (lexicographic within
    /// each weight) until every syndrome has a leader.
    pub fn build(code: &LinearCode) -> Result<SyndromeTable, PairError> {
        let n = code.n();
        let q = code.q();
        let redundancy = n - code.dim();
        let size = u128::from(q).pow(redundancy as u32);
        if size > MAX_TABLE_SIZE {
            return Err(PairError::TableTooLarge { size, cap: MAX_TABLE_SIZE });
        }
        let size = size as usize;
        let mut leaders: Vec<Option<Vec<u32>>> = vec![None; size];
        let mut filled = 0usize;
        let mut pattern = vec![0u32; n];
        for weight in 0..=n {
            if filled == size {
                break;
            }
            enumerate_weight(&mut pattern, 0, weight, q, &mut |e| {
                let idx = pack_syndrome(&code.syndrome(e), q);
                if leaders[idx].is_none() {
                    leaders[idx] = Some(e.to_vec());
                    filled += 1;
                }
                filled == size
            });
        }
        debug_assert_eq!(filled, size, "parity check must be surjective");
        Ok(SyndromeTable {
            q,
            n,
            check: code.check().clone(),
            leaders: leaders.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Parity-check matrix the table was built for.
    pub fn check(&self) -> &FqMatrix {
        &self.check
    }

    /// The correctable set J: all coset leaders (including zero).
    pub fn leaders(&self) -> &[Vec<u32>] {
        &self.leaders
    }

    /// Estimated error for a syndrome.
    pub fn decode(&self, syndrome: &[u32]) -> Vec<u32> {
        self.leaders[pack_syndrome(syndrome, self.q)].clone()
    }

    /// True iff v is the leader of its own coset.
    pub fn is_leader(&self, v: &[u32]) -> bool {
        self.leaders[pack_syndrome(&self.check.mul_vec(v), self.q)] == v
    }

    pub fn max_leader_weight(&self) -> usize {
        self.leaders.iter().map(|l| hamming_weight(l)).max().unwrap_or(0)
    }
}

fn pack_syndrome(s: &[u32], q: u32) -> usize {
    s.iter().rev().fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// Visit weight-w patterns in lexicographic order; the visitor returns true
/// to stop early.
fn enumerate_weight(
    pattern: &mut Vec<u32>,
    start: usize,
    weight: usize,
    q: u32,
    visit: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if weight == 0 {
        return visit(pattern);
    }
    if pattern.len() - start < weight {
        return false;
    }
    // Value 0 first keeps the enumeration lexicographic.
    if enumerate_weight(pattern, start + 1, weight, q, visit) {
        return true;
    }
    for v in 1..q {
        pattern[start] = v;
        if enumerate_weight(pattern, start + 1, weight - 1, q, visit) {
            pattern[start] = 0;
            return true;
        }
    }
    pattern[start] = 0;
    false
}
