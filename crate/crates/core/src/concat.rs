//! Concatenation of conjugate code pairs.
//!
//! Take N inner pairs (C1, C2) over GF(q), all of pair dimension k, and an
//! outer pair (D1, D2) of GRS codes over GF(q^k) with the dual of D2 inside
//! D1.  Fixing a trace-dual basis pair (b, b') of the extension field, the
//! maps pi1 and pi2 expand an outer symbol into a block: write the symbol in
//! basis b (resp. b') and combine the inner quotient generators g (resp. g')
//! with those coordinates.  The concatenated pair is
//!
//!   L1 = pi1(D1) + sum of the duals of C2,
//!   L2 = pi2(D2) + sum of the duals of C1,
//!
//! a conjugate pair of parameters [[sum n_i, k K]].  Because pi1 and pi2
//! preserve the inner product (Tr(x y) = <pi1(x), pi2(y)>), the dual of L1
//! is pi2 applied to the dual of D1 plus the duals of C1, and symmetrically;
//! the block parity-check matrix below realizes that dual exactly:
//!
//!   [ H1 blocks on the diagonal                ]
//!   [ G' bands: one k-row band per outer check ]
//!
//! where band (j, i) expands the outer parity entry h_ji through the
//! multiplication matrix of the basis and replaces matrix rows by
//! combinations of the g' of block i.

use crate::codes::{ext_dot, ExtRowSpace, GrsCode, LinearCode};
use crate::conjugate::{ConjugateCodePair, PairError};
use crate::galois::{Ext, FieldTower, GaloisError};
use crate::matrix::FqMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConcatError {
    #[error("inner pair {index} has dimension {got}, expected the tower degree {expected}")]
    InnerDimension { index: usize, expected: usize, got: usize },
    #[error("inner pair {index} is over GF({got}), expected GF({expected})")]
    InnerField { index: usize, expected: u32, got: u32 },
    #[error("outer codes have length {outer}, but there are {inners} inner blocks")]
    BlockCount { outer: usize, inners: usize },
    #[error("outer codes live over a different tower than the one supplied")]
    TowerMismatch,
    #[error("dual of D2 is not contained in D1; witness {witness:?}")]
    OuterCssViolation { witness: Vec<Ext> },
    #[error("coordinate count mismatch: expected {expected}, got {got}")]
    CoordCount { expected: usize, got: usize },
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Pair(#[from] PairError),
}

/// Witness that one of the two duality identities failed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("duality identity failed on side {side}; witness {witness:?}")]
pub struct DualityFailure {
    pub side: u8,
    pub witness: Vec<u32>,
}

/// A trace-dual basis pair of the tower with cached change-of-basis data.
#[derive(Debug, Clone)]
pub struct BasisPair {
    basis: Vec<Ext>,
    dual: Vec<Ext>,
    lambda: FqMatrix,
    lambda_inv: FqMatrix,
    lambda_t: FqMatrix,
}

impl BasisPair {
    /// The power basis together with its trace-dual.
    pub fn power_default(tower: &FieldTower) -> BasisPair {
        Self::from_basis(tower, tower.power_basis().to_vec())
            .expect("power basis is always a basis")
    }

    /// Any basis; the dual is derived, and Lambda^t Lambda' = I holds exactly.
    pub fn from_basis(tower: &FieldTower, basis: Vec<Ext>) -> Result<BasisPair, GaloisError> {
        let dual = tower.dual_basis(&basis)?;
        let (lambda, _) = tower.change_of_basis(&basis)?;
        let lambda_inv = lambda.invert().map_err(|_| GaloisError::DependentBasis)?;
        let lambda_t = lambda.transpose();
        Ok(BasisPair { basis, dual, lambda, lambda_inv, lambda_t })
    }

    pub fn basis(&self) -> &[Ext] {
        &self.basis
    }

    pub fn dual(&self) -> &[Ext] {
        &self.dual
    }

    pub fn lambda(&self) -> &FqMatrix {
        &self.lambda
    }

    /// Coordinates of x in the basis b.
    pub fn coords(&self, tower: &FieldTower, x: Ext) -> Vec<u32> {
        self.lambda_inv.mul_vec(&tower.power_coords(x))
    }

    /// Coordinates of x in the dual basis b'; the inverse change of basis for
    /// the dual pair is the transpose of Lambda.
    pub fn dual_coords(&self, tower: &FieldTower, x: Ext) -> Vec<u32> {
        self.lambda_t.mul_vec(&tower.dual_power_coords(x))
    }

    pub fn from_coords(&self, tower: &FieldTower, coords: &[u32]) -> Ext {
        tower.from_coords_in(&self.basis, coords)
    }

    pub fn from_dual_coords(&self, tower: &FieldTower, coords: &[u32]) -> Ext {
        tower.from_coords_in(&self.dual, coords)
    }

    /// Multiplication matrix of x in this basis: conjugate the power-basis
    /// multiplication matrix by Lambda.
    pub fn phi(&self, tower: &FieldTower, x: Ext) -> FqMatrix {
        self.lambda_inv.mul(&tower.phi_power(x)).mul(&self.lambda)
    }
}

/// Randomness for picking a word inside a concatenated message coset: a
/// word of the dual of D2 at the outer level plus per-block words of the
/// duals of C2.
#[derive(Debug, Clone)]
pub enum ConcatRandomness {
    Seed(u64),
    Explicit { outer: Vec<Ext>, blocks: Vec<Vec<u32>> },
}

/// A concatenated conjugate code pair with its assembled parity checks.
#[derive(Debug, Clone)]
pub struct ConcatenatedPair {
    tower: Arc<FieldTower>,
    inners: Vec<ConjugateCodePair>,
    outer1: GrsCode,
    outer2: GrsCode,
    bases: BasisPair,
    offsets: Vec<usize>,
    k: usize,
    outer_k: usize,
    h_l1: FqMatrix,
    h_l2: FqMatrix,
    l1: LinearCode,
    l2: LinearCode,
    flat: ConjugateCodePair,
    quotient_gens: Vec<Vec<Ext>>,
    d2_dual_span: ExtRowSpace,
}

impl ConcatenatedPair {
    /// Assemble and fully validate a concatenated pair.
    ///
    /// `basis` picks the expansion basis b (its trace-dual is derived); when
    /// absent the power basis is used.
    pub fn new(
        tower: Arc<FieldTower>,
        inners: Vec<ConjugateCodePair>,
        outer1: GrsCode,
        outer2: GrsCode,
        basis: Option<Vec<Ext>>,
    ) -> Result<ConcatenatedPair, ConcatError> {
        let n_blocks = inners.len();
        let k = tower.k();
        if outer1.n() != n_blocks || outer2.n() != n_blocks {
            return Err(ConcatError::BlockCount {
                outer: if outer1.n() != n_blocks { outer1.n() } else { outer2.n() },
                inners: n_blocks,
            });
        }
        for (i, inner) in inners.iter().enumerate() {
            if inner.q() != tower.q() {
                return Err(ConcatError::InnerField {
                    index: i,
                    expected: tower.q(),
                    got: inner.q(),
                });
            }
            if inner.k() != k {
                return Err(ConcatError::InnerDimension { index: i, expected: k, got: inner.k() });
            }
        }
        for outer in [&outer1, &outer2] {
            let ot = outer.tower();
            if ot.q() != tower.q() || ot.k() != tower.k() || ot.modulus() != tower.modulus() {
                return Err(ConcatError::TowerMismatch);
            }
        }
        // Outer CSS condition: the dual of D2 is perpendicular to the dual of
        // D1, i.e. contained in D1.
        for r2 in outer2.parity_rows() {
            for r1 in outer1.parity_rows() {
                if !ext_dot(&tower, &r2, &r1).is_zero() {
                    return Err(ConcatError::OuterCssViolation { witness: r2 });
                }
            }
        }
        let bases = match basis {
            Some(b) => BasisPair::from_basis(&tower, b)?,
            None => BasisPair::power_default(&tower),
        };
        let outer_k = outer1.k() + outer2.k() - n_blocks;

        let mut offsets = Vec::with_capacity(n_blocks + 1);
        let mut total = 0usize;
        for inner in &inners {
            offsets.push(total);
            total += inner.n();
        }
        offsets.push(total);

        let mut cp = ConcatenatedPair {
            tower,
            inners,
            outer1,
            outer2,
            bases,
            offsets,
            k,
            outer_k,
            h_l1: FqMatrix::empty(0, 0),
            h_l2: FqMatrix::empty(0, 0),
            l1: LinearCode::zero_code(2, 0),
            l2: LinearCode::zero_code(2, 0),
            flat: ConjugateCodePair::from_parts_unchecked(
                LinearCode::zero_code(2, 0),
                LinearCode::zero_code(2, 0),
                0,
                Vec::new(),
                Vec::new(),
            ),
            quotient_gens: Vec::new(),
            d2_dual_span: ExtRowSpace::new(Arc::new(FieldTower::new(2, 1, &[0, 1]).unwrap()), 0),
        };
        cp.l1 = cp.assemble_code(1);
        cp.l2 = cp.assemble_code(2);
        cp.h_l1 = cp.assemble_parity_check(1);
        cp.h_l2 = cp.assemble_parity_check(2);
        cp.flat = ConjugateCodePair::new(cp.l1.clone(), cp.l2.clone())?;
        debug_assert_eq!(cp.flat.k(), cp.k * cp.outer_k);

        // Deterministic quotient generators of D1 modulo the dual of D2.
        let mut d1_span = ExtRowSpace::new(cp.tower.clone(), n_blocks);
        for row in cp.outer1.generator_rows() {
            d1_span.insert(&row);
        }
        let mut span = ExtRowSpace::new(cp.tower.clone(), n_blocks);
        for row in cp.outer2.parity_rows() {
            span.insert(&row);
        }
        let mut quotient_gens = Vec::with_capacity(cp.outer_k);
        for row in d1_span.basis() {
            if span.insert(row) {
                quotient_gens.push(row.clone());
            }
        }
        debug_assert_eq!(quotient_gens.len(), cp.outer_k);
        cp.quotient_gens = quotient_gens;

        let mut d2_dual_span = ExtRowSpace::new(cp.tower.clone(), n_blocks);
        for row in cp.outer2.parity_rows() {
            d2_dual_span.insert(&row);
        }
        cp.d2_dual_span = d2_dual_span;
        Ok(cp)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn inners(&self) -> &[ConjugateCodePair] {
        &self.inners
    }

    pub fn outer1(&self) -> &GrsCode {
        &self.outer1
    }

    pub fn outer2(&self) -> &GrsCode {
        &self.outer2
    }

    pub fn bases(&self) -> &BasisPair {
        &self.bases
    }

    pub fn n_blocks(&self) -> usize {
        self.inners.len()
    }

    /// Total length over GF(q).
    pub fn n_total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Inner pair dimension k (= tower degree).
    pub fn inner_k(&self) -> usize {
        self.k
    }

    /// Outer pair dimension K = K1 + K2 - N.
    pub fn outer_k(&self) -> usize {
        self.outer_k
    }

    /// Pair dimension k K of the concatenation.
    pub fn k_total(&self) -> usize {
        self.k * self.outer_k
    }

    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn l1(&self) -> &LinearCode {
        &self.l1
    }

    pub fn l2(&self) -> &LinearCode {
        &self.l2
    }

    /// The concatenation as a plain conjugate pair (L1, L2).
    pub fn as_pair(&self) -> &ConjugateCodePair {
        &self.flat
    }

    /// Block parity-check matrix of L1 (side 1); also a generator of the
    /// dual of L1.
    pub fn parity_check_l1(&self) -> &FqMatrix {
        &self.h_l1
    }

    /// Block parity-check matrix of L2 (side 2).
    pub fn parity_check_l2(&self) -> &FqMatrix {
        &self.h_l2
    }

    /// Deterministic generators of D1 modulo the dual of D2 used by
    /// [`Self::encode_message`].
    pub fn outer_quotient_gens(&self) -> &[Vec<Ext>] {
        &self.quotient_gens
    }

    /// Expand an outer vector through the g generators: block i combines the
    /// b-basis coordinates of x_i with the g of inner i.  GF(q)-linear and
    /// injective.
    pub fn pi1(&self, x: &[Ext]) -> Result<Vec<u32>, ConcatError> {
        self.pi_map(x, false)
    }

    /// The mirror expansion through the dual basis b' and the g'.
    pub fn pi2(&self, y: &[Ext]) -> Result<Vec<u32>, ConcatError> {
        self.pi_map(y, true)
    }

    fn pi_map(&self, x: &[Ext], dual_side: bool) -> Result<Vec<u32>, ConcatError> {
        if x.len() != self.n_blocks() {
            return Err(ConcatError::CoordCount { expected: self.n_blocks(), got: x.len() });
        }
        let q = self.tower.q();
        let mut out = vec![0u32; self.n_total()];
        for (i, inner) in self.inners.iter().enumerate() {
            let coords = if dual_side {
                self.bases.dual_coords(&self.tower, x[i])
            } else {
                self.bases.coords(&self.tower, x[i])
            };
            let gens = if dual_side { inner.dual_gens() } else { inner.gens() };
            let block = &mut out[self.offsets[i]..self.offsets[i + 1]];
            for (j, &c) in coords.iter().enumerate() {
                add_scaled(block, &gens[j], c, q);
            }
        }
        Ok(out)
    }

    /// Generator rows of L_side from the definition: per-block duals plus the
    /// pi image of the outer generator rows (expanded over the base field by
    /// multiplying with the basis elements).
    fn assemble_code(&self, side: u8) -> LinearCode {
        let q = self.tower.q();
        let n_total = *self.offsets.last().unwrap();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (i, inner) in self.inners.iter().enumerate() {
            let block_dual = if side == 1 { inner.c2().check() } else { inner.c1().check() };
            for r in 0..block_dual.rows() {
                let mut row = vec![0u32; n_total];
                row[self.offsets[i]..self.offsets[i + 1]].copy_from_slice(block_dual.row(r));
                rows.push(row);
            }
        }
        let (outer, basis) = if side == 1 {
            (&self.outer1, self.bases.basis())
        } else {
            (&self.outer2, self.bases.dual())
        };
        for gen_row in outer.generator_rows() {
            for &beta in basis {
                let scaled: Vec<Ext> =
                    gen_row.iter().map(|&x| self.tower.mul(beta, x)).collect();
                let expanded = if side == 1 {
                    self.pi_map(&scaled, false).expect("length is consistent")
                } else {
                    self.pi_map(&scaled, true).expect("length is consistent")
                };
                rows.push(expanded);
            }
        }
        if rows.is_empty() {
            LinearCode::zero_code(q, n_total)
        } else {
            LinearCode::from_generator(q, &rows)
        }
    }

    /// The block parity-check matrix: diagonal H blocks for every inner code
    /// on top, then one k-row band per outer parity row, ordered by outer
    /// check index, block index, and band row.
    fn assemble_parity_check(&self, side: u8) -> FqMatrix {
        let q = self.tower.q();
        let t = &self.tower;
        let n_total = self.n_total();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (i, inner) in self.inners.iter().enumerate() {
            let check = if side == 1 { inner.c1().check() } else { inner.c2().check() };
            for r in 0..check.rows() {
                let mut row = vec![0u32; n_total];
                row[self.offsets[i]..self.offsets[i + 1]].copy_from_slice(check.row(r));
                rows.push(row);
            }
        }
        let outer = if side == 1 { &self.outer1 } else { &self.outer2 };
        for h_row in outer.parity_rows() {
            let mut band = vec![vec![0u32; n_total]; self.k];
            for (i, inner) in self.inners.iter().enumerate() {
                let phi = self.bases.phi(t, h_row[i]);
                let gens = if side == 1 { inner.dual_gens() } else { inner.gens() };
                for (eta, band_row) in band.iter_mut().enumerate() {
                    let block = &mut band_row[self.offsets[i]..self.offsets[i + 1]];
                    for m in 0..self.k {
                        // Side 2 expands through the transposed matrix map.
                        let c = if side == 1 { phi.get(eta, m) } else { phi.get(m, eta) };
                        add_scaled(block, &gens[m], c, q);
                    }
                }
            }
            rows.extend(band);
        }
        FqMatrix::from_rows(q, &rows)
    }

    /// Verify both duality identities as row-space equalities, rebuilding
    /// every side from definitions:
    ///
    ///   dual of [pi1(dual of D2) + sum duals of C2] = pi2(D2) + sum duals of C1,
    ///   dual of [pi2(dual of D1) + sum duals of C1] = pi1(D1) + sum duals of C2.
    pub fn verify_duality(&self) -> Result<(), DualityFailure> {
        // Side 1: the dual of the pi1 expansion of D2-dual must equal L2.
        let lhs1 = self.expanded_dual_code(2, false);
        let rhs1 = self.assemble_code(2);
        if let Some(witness) = code_difference(&lhs1, &rhs1) {
            return Err(DualityFailure { side: 1, witness });
        }
        // Side 2: the dual of the pi2 expansion of D1-dual must equal L1.
        let lhs2 = self.expanded_dual_code(1, true);
        let rhs2 = self.assemble_code(1);
        if let Some(witness) = code_difference(&lhs2, &rhs2) {
            return Err(DualityFailure { side: 2, witness });
        }
        Ok(())
    }

    /// dual of [pi(dual of D_which) + per-block duals], built from scratch.
    fn expanded_dual_code(&self, which: u8, use_pi2: bool) -> LinearCode {
        let q = self.tower.q();
        let n_total = self.n_total();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (i, inner) in self.inners.iter().enumerate() {
            // pi1 rides with the duals of C2, pi2 with the duals of C1.
            let block_dual = if use_pi2 { inner.c1().check() } else { inner.c2().check() };
            for r in 0..block_dual.rows() {
                let mut row = vec![0u32; n_total];
                row[self.offsets[i]..self.offsets[i + 1]].copy_from_slice(block_dual.row(r));
                rows.push(row);
            }
        }
        let outer = if which == 1 { &self.outer1 } else { &self.outer2 };
        let basis = if use_pi2 { self.bases.dual() } else { self.bases.basis() };
        for h_row in outer.parity_rows() {
            for &beta in basis {
                let scaled: Vec<Ext> = h_row.iter().map(|&x| self.tower.mul(beta, x)).collect();
                rows.push(self.pi_map(&scaled, use_pi2).expect("length is consistent"));
            }
        }
        let code = if rows.is_empty() {
            LinearCode::zero_code(q, n_total)
        } else {
            LinearCode::from_generator(q, &rows)
        };
        code.dual()
    }

    /// Canonical representative of d modulo the dual of D2: subtract the
    /// unique dual-of-D2 word agreeing with d on the pivot information set.
    pub fn canonical_outer_rep(&self, d: &[Ext]) -> Vec<Ext> {
        let t = &self.tower;
        let mut rep = d.to_vec();
        for (row, &p) in
            self.d2_dual_span.basis().iter().zip(self.d2_dual_span.pivots())
        {
            let c = rep[p];
            if !c.is_zero() {
                for j in 0..rep.len() {
                    rep[j] = t.sub(rep[j], t.mul(c, row[j]));
                }
            }
        }
        rep
    }

    /// Canonical coset representative carried by a message.
    pub fn message_coset_rep(&self, msg: &[Ext]) -> Result<Vec<Ext>, ConcatError> {
        if msg.len() != self.outer_k {
            return Err(ConcatError::CoordCount { expected: self.outer_k, got: msg.len() });
        }
        let t = &self.tower;
        let mut d = vec![Ext::ZERO; self.n_blocks()];
        for (c, row) in msg.iter().zip(&self.quotient_gens) {
            for j in 0..d.len() {
                d[j] = t.add(d[j], t.mul(*c, row[j]));
            }
        }
        Ok(self.canonical_outer_rep(&d))
    }

    /// Encode a message (K outer symbols) into a transmitted word: an outer
    /// codeword of D1 in the coset selected by the message, expanded through
    /// pi1, plus per-block randomness from the duals of C2.
    pub fn encode_message(
        &self,
        msg: &[Ext],
        rand: &ConcatRandomness,
    ) -> Result<Vec<u32>, ConcatError> {
        if msg.len() != self.outer_k {
            return Err(ConcatError::CoordCount { expected: self.outer_k, got: msg.len() });
        }
        let t = &self.tower;
        let n_blocks = self.n_blocks();
        let outer_dual_dim = self.d2_dual_span.rank();
        let (outer_coeffs, block_coeffs) = match rand {
            ConcatRandomness::Explicit { outer, blocks } => {
                if outer.len() != outer_dual_dim {
                    return Err(ConcatError::CoordCount {
                        expected: outer_dual_dim,
                        got: outer.len(),
                    });
                }
                if blocks.len() != n_blocks {
                    return Err(ConcatError::CoordCount { expected: n_blocks, got: blocks.len() });
                }
                (outer.clone(), blocks.clone())
            }
            ConcatRandomness::Seed(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let outer: Vec<Ext> =
                    (0..outer_dual_dim).map(|_| Ext(rng.random_range(0..t.size()))).collect();
                let blocks: Vec<Vec<u32>> = self
                    .inners
                    .iter()
                    .map(|inner| {
                        let dim = inner.n() - inner.c2().dim();
                        (0..dim).map(|_| rng.random_range(0..t.q())).collect()
                    })
                    .collect();
                (outer, blocks)
            }
        };
        // Outer codeword: message part plus randomness over the dual of D2.
        let mut d = vec![Ext::ZERO; n_blocks];
        for (c, row) in msg.iter().zip(&self.quotient_gens) {
            for j in 0..n_blocks {
                d[j] = t.add(d[j], t.mul(*c, row[j]));
            }
        }
        for (c, row) in outer_coeffs.iter().zip(self.d2_dual_span.basis()) {
            for j in 0..n_blocks {
                d[j] = t.add(d[j], t.mul(*c, row[j]));
            }
        }
        let mut word = self.pi1(&d)?;
        let q = t.q();
        for (i, inner) in self.inners.iter().enumerate() {
            let coeffs = &block_coeffs[i];
            let dual_gen = inner.c2().check();
            if coeffs.len() != dual_gen.rows() {
                return Err(ConcatError::CoordCount {
                    expected: dual_gen.rows(),
                    got: coeffs.len(),
                });
            }
            let block = &mut word[self.offsets[i]..self.offsets[i + 1]];
            for (j, &c) in coeffs.iter().enumerate() {
                add_scaled(block, dual_gen.row(j), c, q);
            }
        }
        Ok(word)
    }

    #[cfg(test)]
    pub(crate) fn corrupt_inner_dual_gen(&mut self, block: usize, gen: usize, coord: usize) {
        let inner = &self.inners[block];
        let mut dual_gens = inner.dual_gens().to_vec();
        dual_gens[gen][coord] = (dual_gens[gen][coord] + 1) % self.tower.q();
        self.inners[block] = ConjugateCodePair::from_parts_unchecked(
            inner.c1().clone(),
            inner.c2().clone(),
            inner.k(),
            inner.gens().to_vec(),
            dual_gens,
        );
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

/// First generator row of either code outside the other, if the row spaces
/// differ (canonical generators make equality a direct comparison).
fn code_difference(a: &LinearCode, b: &LinearCode) -> Option<Vec<u32>> {
    if a == b {
        return None;
    }
    b.containment_witness(a)
        .or_else(|| a.containment_witness(b))
        .or_else(|| Some(Vec::new()))
}
