//! Prime fields GF(q) and extension towers GF(q^k).
//!
//! A [`FieldTower`] fixes an irreducible monic polynomial g(x) over GF(q),
//! represents GF(q^k) = GF(q)\[x\]/(g) with the residue class alpha of x as a
//! primitive element, and precomputes log/antilog and trace tables so that
//! multiplication and traces are O(1).  Elements are stored as integer codes
//! in [0, q^k): the code of an element is the base-q packing of its
//! coordinates in the power basis (1, alpha, ..., alpha^(k-1)).
//!
//! On top of the arithmetic the tower exposes the maps that expand
//! extension-field symbols over the base field: coordinates with respect to
//! an arbitrary basis, trace-dual bases, the companion matrix of g, the
//! multiplication-matrix map phi (a ring isomorphism onto k x k matrices),
//! and change-of-basis matrix pairs satisfying an exact duality condition.

use crate::matrix::{inv_mod, FqMatrix};
use thiserror::Error;

/// Largest permitted field size q^k; keeps the log/antilog/trace tables and
/// exhaustive checks at desk scale.
pub const MAX_FIELD_SIZE: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {0} exceeds the 2^20 table cap")]
    FieldTooLarge(u128),
    #[error("bad modulus polynomial: {0}")]
    BadPolynomial(String),
    #[error("modulus polynomial is reducible; factor {factor:?} (ascending coefficients)")]
    Reducible { factor: Vec<u32> },
    #[error("alpha is not primitive: multiplicative order {order} < {expected}")]
    NotPrimitive { order: u32, expected: u32 },
    #[error("the given elements do not form a basis")]
    DependentBasis,
}

/// Element of GF(q^k), stored as the base-q packing of its power-basis
/// coordinates. Only meaningful relative to the tower that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ext(pub u32);

impl Ext {
    pub const ZERO: Ext = Ext(0);
    pub const ONE: Ext = Ext(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const LOG_ZERO: u32 = u32::MAX;

/// GF(q) together with its degree-k extension, a primitive element and a
/// trace-dual basis pair. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldTower {
    q: u32,
    k: usize,
    size: u32,
    g_poly: Vec<u32>,
    /// Negated non-leading coefficients of g, i.e. the column that closes the
    /// companion matrix: alpha^k = g_tilde[0] + g_tilde[1] alpha + ...
    g_tilde: Vec<u32>,
    alpha: Ext,
    log: Vec<u32>,
    antilog: Vec<u32>,
    trace_tab: Vec<u32>,
    basis_a: Vec<Ext>,
    basis_a_dual: Vec<Ext>,
}

impl FieldTower {
    /// Build the tower for GF(q^k) with the given monic modulus polynomial
    /// (ascending coefficients, length k+1).
    ///
    /// Rejects composite q, oversized fields, non-monic input, reducible
    /// polynomials (with a witness factor) and non-primitive alpha (with its
    /// actual multiplicative order).
    pub fn new(q: u32, k: usize, g_poly: &[u32]) -> Result<FieldTower, GaloisError> {
        if !is_prime(q) {
            return Err(GaloisError::NotPrime(q));
        }
        if k == 0 {
            return Err(GaloisError::BadPolynomial("extension degree must be >= 1".into()));
        }
        let size128 = (0..k).try_fold(1u128, |acc, _| {
            let next = acc * u128::from(q);
            (next <= MAX_FIELD_SIZE).then_some(next)
        });
        let Some(size128) = size128 else {
            return Err(GaloisError::FieldTooLarge(u128::from(q).pow(k as u32)));
        };
        let size = size128 as u32;
        if g_poly.len() != k + 1 {
            return Err(GaloisError::BadPolynomial(format!(
                "expected {} coefficients for degree {k}, got {}",
                k + 1,
                g_poly.len()
            )));
        }
        let g: Vec<u32> = g_poly.iter().map(|&c| c % q).collect();
        if g[k] != 1 {
            return Err(GaloisError::BadPolynomial("polynomial is not monic".into()));
        }
        if k >= 2 {
            if let Some(factor) = reducible_witness(&g, q) {
                return Err(GaloisError::Reducible { factor });
            }
        }
        let g_tilde: Vec<u32> = g[..k].iter().map(|&c| (q - c) % q).collect();

        // Power up alpha to fill the antilog table; an early return to 1
        // exposes a non-primitive alpha together with its order.
        let ord = size - 1;
        let mut antilog = Vec::with_capacity(ord as usize);
        let mut digits = vec![0u32; k];
        digits[0] = 1;
        antilog.push(1u32);
        for i in 1..ord {
            digits = mul_by_x(&digits, &g_tilde, q);
            let code = pack(&digits, q);
            if code == 1 {
                return Err(GaloisError::NotPrimitive { order: i, expected: ord });
            }
            antilog.push(code);
        }
        if !(k == 1 && q == 2) {
            let closing = mul_by_x(&digits, &g_tilde, q);
            if pack(&closing, q) != 1 {
                // Cannot happen for an irreducible modulus with k >= 2; for
                // k = 1 it means alpha = -g(0) does not generate GF(q)*.
                let order = element_order(&antilog);
                return Err(GaloisError::NotPrimitive { order, expected: ord });
            }
        }

        let mut log = vec![LOG_ZERO; size as usize];
        for (i, &code) in antilog.iter().enumerate() {
            if log[code as usize] != LOG_ZERO {
                let order = i as u32;
                return Err(GaloisError::NotPrimitive { order, expected: ord });
            }
            log[code as usize] = i as u32;
        }

        let alpha = if k == 1 { Ext(g_tilde[0]) } else { Ext(q) };
        let mut tower = FieldTower {
            q,
            k,
            size,
            g_poly: g,
            g_tilde,
            alpha,
            log,
            antilog,
            trace_tab: Vec::new(),
            basis_a: (0..k).map(|j| Ext(q.pow(j as u32))).collect(),
            basis_a_dual: Vec::new(),
        };
        tower.trace_tab = tower.build_trace_table();
        tower.basis_a_dual = tower.dual_basis(&tower.basis_a.clone())?;
        Ok(tower)
    }

    /// Tower over GF(2) with the built-in primitive modulus for degree k <= 16.
    pub fn gf2_default(k: usize) -> Result<FieldTower, GaloisError> {
        let poly = default_gf2_poly(k).ok_or_else(|| {
            GaloisError::BadPolynomial(format!("no built-in GF(2^k) modulus for k = {k}"))
        })?;
        FieldTower::new(2, k, &poly)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of field elements q^k.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group, q^k - 1.
    pub fn order(&self) -> u32 {
        self.size - 1
    }

    pub fn alpha(&self) -> Ext {
        self.alpha
    }

    pub fn modulus(&self) -> &[u32] {
        &self.g_poly
    }

    /// The power basis (1, alpha, ..., alpha^(k-1)).
    pub fn power_basis(&self) -> &[Ext] {
        &self.basis_a
    }

    /// The trace-dual of the power basis.
    pub fn power_basis_dual(&self) -> &[Ext] {
        &self.basis_a_dual
    }

    pub fn elements(&self) -> impl Iterator<Item = Ext> {
        (0..self.size).map(Ext)
    }

    /// alpha^i for 0 <= i < q^k - 1.
    pub fn exp(&self, i: u32) -> Ext {
        Ext(self.antilog[(i % self.order()) as usize])
    }

    /// Discrete log base alpha; None for zero.
    pub fn log(&self, x: Ext) -> Option<u32> {
        (x.0 != 0).then(|| self.log[x.0 as usize])
    }

    /// Embed a base-field scalar.
    pub fn embed(&self, c: u32) -> Ext {
        Ext(c % self.q)
    }

    pub fn add(&self, a: Ext, b: Ext) -> Ext {
        if self.q == 2 {
            return Ext(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += (x % self.q + y % self.q) % self.q * place;
            x /= self.q;
            y /= self.q;
            place *= self.q;
        }
        Ext(out)
    }

    pub fn neg(&self, a: Ext) -> Ext {
        if self.q == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += (self.q - x % self.q) % self.q * place;
            x /= self.q;
            place *= self.q;
        }
        Ext(out)
    }

    pub fn sub(&self, a: Ext, b: Ext) -> Ext {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Ext, b: Ext) -> Ext {
        if a.0 == 0 || b.0 == 0 {
            return Ext::ZERO;
        }
        let i = u64::from(self.log[a.0 as usize]) + u64::from(self.log[b.0 as usize]);
        Ext(self.antilog[(i % u64::from(self.order())) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Ext) -> Ext {
        assert!(a.0 != 0, "inverse of zero");
        let i = self.log[a.0 as usize];
        Ext(self.antilog[((self.order() - i) % self.order()) as usize])
    }

    pub fn div(&self, a: Ext, b: Ext) -> Ext {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Ext, e: u64) -> Ext {
        if a.0 == 0 {
            return if e == 0 { Ext::ONE } else { Ext::ZERO };
        }
        let i = u64::from(self.log[a.0 as usize]) * (e % u64::from(self.order()));
        Ext(self.antilog[(i % u64::from(self.order())) as usize])
    }

    /// Scale by a base-field scalar.
    pub fn scale(&self, c: u32, a: Ext) -> Ext {
        self.mul(self.embed(c), a)
    }

    /// Trace down to GF(q): x + x^q + ... + x^(q^(k-1)), returned as a
    /// base-field value.
    pub fn trace(&self, x: Ext) -> u32 {
        self.trace_tab[x.0 as usize]
    }

    /// Power-basis coordinates (the base-q digits of the code).
    pub fn power_coords(&self, x: Ext) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k);
        let mut code = x.0;
        for _ in 0..self.k {
            v.push(code % self.q);
            code /= self.q;
        }
        v
    }

    /// Coordinates in the trace-dual of the power basis:
    /// (Tr x, Tr alpha x, ..., Tr alpha^(k-1) x).
    pub fn dual_power_coords(&self, x: Ext) -> Vec<u32> {
        (0..self.k).map(|j| self.trace(self.mul(self.basis_a[j], x))).collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Ext {
        assert_eq!(coords.len(), self.k, "coordinate count mismatch");
        Ext(pack(&coords.iter().map(|&c| c % self.q).collect::<Vec<_>>(), self.q))
    }

    /// Element from coordinates in an arbitrary basis.
    pub fn from_coords_in(&self, basis: &[Ext], coords: &[u32]) -> Ext {
        assert_eq!(coords.len(), basis.len(), "coordinate count mismatch");
        coords
            .iter()
            .zip(basis)
            .fold(Ext::ZERO, |acc, (&c, &b)| self.add(acc, self.scale(c, b)))
    }

    /// Coordinates of x in an arbitrary basis b (unique expansion
    /// x = sum coords\[j\] * b\[j\]).
    pub fn coords(&self, basis: &[Ext], x: Ext) -> Result<Vec<u32>, GaloisError> {
        let (lambda, _) = self.change_of_basis(basis)?;
        let inv = lambda.invert().map_err(|_| GaloisError::DependentBasis)?;
        Ok(inv.mul_vec(&self.power_coords(x)))
    }

    /// Companion matrix T of the modulus: multiplication by alpha in
    /// power-basis coordinates, T * phi_a(x)^t = phi_a(alpha x)^t.
    pub fn companion_matrix(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.q, self.k, self.k);
        for i in 0..self.k {
            t.set(i, self.k - 1, self.g_tilde[i]);
        }
        for i in 0..self.k - 1 {
            t.set(i + 1, i, 1);
        }
        t
    }

    /// Multiplication matrix in the power basis: column j holds the
    /// power-basis coordinates of x * alpha^j. Maps alpha^i to T^i and zero
    /// to the zero matrix; a ring isomorphism onto its image.
    pub fn phi_power(&self, x: Ext) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.q, self.k, self.k);
        for j in 0..self.k {
            let col = self.power_coords(self.mul(x, self.basis_a[j]));
            for i in 0..self.k {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    /// Multiplication matrix with respect to an arbitrary basis b:
    /// Lambda^-1 * phi_power(x) * Lambda. Satisfies
    /// phi(x) * coords_b(y)^t = coords_b(xy)^t and
    /// coords_b'(x) * phi(y) = coords_b'(xy) for the trace-dual basis b'.
    pub fn phi_map(&self, basis: &[Ext], x: Ext) -> Result<FqMatrix, GaloisError> {
        let (lambda, _) = self.change_of_basis(basis)?;
        let inv = lambda.invert().map_err(|_| GaloisError::DependentBasis)?;
        Ok(inv.mul(&self.phi_power(x)).mul(&lambda))
    }

    /// The unique basis b' with Tr(b\[l\] * b'\[m\]) = delta_lm, computed by
    /// inverting the Gram matrix \[Tr(b\[i\] b\[j\])\].
    pub fn dual_basis(&self, basis: &[Ext]) -> Result<Vec<Ext>, GaloisError> {
        if basis.len() != self.k {
            return Err(GaloisError::DependentBasis);
        }
        let mut gram = FqMatrix::zeros(self.q, self.k, self.k);
        for i in 0..self.k {
            for j in 0..self.k {
                gram.set(i, j, self.trace(self.mul(basis[i], basis[j])));
            }
        }
        let inv = gram.invert().map_err(|_| GaloisError::DependentBasis)?;
        Ok((0..self.k)
            .map(|m| {
                (0..self.k).fold(Ext::ZERO, |acc, j| {
                    self.add(acc, self.scale(inv.get(j, m), basis[j]))
                })
            })
            .collect())
    }

    /// Change-of-basis pair (Lambda, Lambda'): Lambda maps b-coordinates to
    /// power-basis coordinates (column i is phi_a(b\[i\])^t) and Lambda' does
    /// the same for the dual bases. Lambda^t * Lambda' = I exactly.
    pub fn change_of_basis(&self, basis: &[Ext]) -> Result<(FqMatrix, FqMatrix), GaloisError> {
        if basis.len() != self.k {
            return Err(GaloisError::DependentBasis);
        }
        let mut lambda = FqMatrix::zeros(self.q, self.k, self.k);
        for (i, &b) in basis.iter().enumerate() {
            let col = self.power_coords(b);
            for j in 0..self.k {
                lambda.set(j, i, col[j]);
            }
        }
        let lambda_prime = lambda
            .invert()
            .map_err(|_| GaloisError::DependentBasis)?
            .transpose();
        Ok((lambda, lambda_prime))
    }

    fn build_trace_table(&self) -> Vec<u32> {
        let mut tab = Vec::with_capacity(self.size as usize);
        for code in 0..self.size {
            let x = Ext(code);
            let mut acc = x;
            let mut f = x;
            for _ in 1..self.k {
                f = self.frobenius(f);
                acc = self.add(acc, f);
            }
            debug_assert!(acc.0 < self.q, "trace landed outside the base field");
            tab.push(acc.0);
        }
        tab
    }

    /// x^q.
    pub fn frobenius(&self, x: Ext) -> Ext {
        self.pow(x, u64::from(self.q))
    }
}

fn pack(digits: &[u32], q: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * q + d)
}

fn mul_by_x(digits: &[u32], g_tilde: &[u32], q: u32) -> Vec<u32> {
    let k = digits.len();
    let top = u64::from(digits[k - 1]);
    let mut out = vec![0u32; k];
    for j in 0..k {
        let shifted = if j == 0 { 0 } else { u64::from(digits[j - 1]) };
        out[j] = ((shifted + top * u64::from(g_tilde[j])) % u64::from(q)) as u32;
    }
    out
}

fn element_order(antilog: &[u32]) -> u32 {
    antilog.iter().skip(1).position(|&c| c == 1).map_or(antilog.len() as u32, |p| p as u32 + 1)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while u64::from(d) * u64::from(d) <= u64::from(n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

// ---- polynomial arithmetic over GF(q) for the irreducibility test ----
// Polynomials are ascending coefficient vectors with no trailing zeros; the
// zero polynomial is the empty vector.

fn poly_trim(mut p: Vec<u32>) -> Vec<u32> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + q - y) % q;
    }
    poly_trim(out)
}

fn poly_rem(a: &[u32], m: &[u32], q: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    r = poly_trim(r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], q);
    while r.len() > dm {
        let dr = r.len() - 1;
        let f = (u64::from(r[dr]) * u64::from(lead_inv) % u64::from(q)) as u32;
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = ((u64::from(r[idx]) + u64::from(q - (u64::from(f) * u64::from(m[i]) % u64::from(q)) as u32)) % u64::from(q)) as u32;
        }
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], q: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] =
                ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y)) % u64::from(q)) as u32;
        }
    }
    poly_rem(&prod, m, q)
}

fn poly_powmod(a: &[u32], mut e: u32, m: &[u32], q: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, q);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, q);
        }
        base = poly_mulmod(&base, &base, m, q);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let (mut x, mut y) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y, q);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, q);
        for c in x.iter_mut() {
            *c = (u64::from(*c) * u64::from(inv) % u64::from(q)) as u32;
        }
    }
    x
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// None when g is irreducible over GF(q); otherwise the smallest monic
/// nontrivial factor (found by brute force, feasible at the field-size cap).
fn reducible_witness(g: &[u32], q: u32) -> Option<Vec<u32>> {
    let k = g.len() - 1;
    if is_irreducible(g, q, k) {
        return None;
    }
    for deg in 1..=k / 2 {
        let mut coeffs = vec![0u32; deg];
        loop {
            let mut cand: Vec<u32> = coeffs.clone();
            cand.push(1);
            if poly_rem(g, &cand, q).is_empty() {
                return Some(cand);
            }
            // Odometer over the q^deg candidate tails, lexicographic.
            let mut i = 0;
            while i < deg {
                coeffs[i] += 1;
                if coeffs[i] < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == deg {
                break;
            }
        }
    }
    // Unreachable for a genuinely reducible monic polynomial.
    Some(vec![0, 1])
}

fn is_irreducible(g: &[u32], q: u32, k: usize) -> bool {
    let x = vec![0u32, 1];
    // Frobenius ladder: r_d = x^(q^d) mod g.
    let mut ladder = Vec::with_capacity(k);
    let mut r = x.clone();
    for _ in 0..k {
        r = poly_powmod(&r, q, g, q);
        ladder.push(r.clone());
    }
    if ladder[k - 1] != poly_rem(&x, g, q) {
        return false;
    }
    for t in prime_divisors(k) {
        let diff = poly_sub(&ladder[k / t - 1], &x, q);
        let gcd = poly_gcd(&diff, g, q);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

/// Built-in primitive moduli for GF(2^k), ascending coefficients.
pub fn default_gf2_poly(k: usize) -> Option<Vec<u32>> {
    let taps: &[u32] = match k {
        1 => &[0],
        2 => &[1],
        3 => &[1],
        4 => &[1],
        5 => &[2],
        6 => &[1],
        7 => &[3],
        8 => &[2, 3, 4],
        9 => &[4],
        10 => &[3],
        11 => &[2],
        12 => &[1, 4, 6],
        13 => &[1, 3, 4],
        14 => &[1, 6, 10],
        15 => &[1],
        16 => &[1, 3, 12],
        _ => return None,
    };
    let mut poly = vec![0u32; k + 1];
    poly[0] = 1;
    poly[k] = 1;
    for &t in taps {
        poly[t as usize] = 1;
    }
    Some(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn gf4() -> FieldTower {
        FieldTower::new(2, 2, &[1, 1, 1]).unwrap()
    }

    fn gf8() -> FieldTower {
        FieldTower::new(2, 3, &[1, 1, 0, 1]).unwrap()
    }

    fn gf9() -> FieldTower {
        FieldTower::new(3, 2, &[2, 1, 1]).unwrap()
    }

    #[test]
    fn trivial_tower_k1() {
        let t = FieldTower::new(2, 1, &[0, 1]).unwrap();
        assert_eq!(t.size(), 2);
        assert_eq!(t.k(), 1);
        assert_eq!(t.add(Ext(1), Ext(1)), Ext(0));
        assert_eq!(t.trace(Ext(1)), 1);
    }

    #[test]
    fn gf4_alpha_is_primitive() {
        let t = gf4();
        let a = t.alpha();
        // alpha^2 = alpha + 1, and alpha^3 = 1 by direct multiplication.
        assert_eq!(t.mul(a, a), t.add(a, Ext::ONE));
        assert_eq!(t.mul(t.mul(a, a), a), Ext::ONE);
        assert_ne!(a, Ext::ONE);
    }

    #[test]
    fn reducible_polynomial_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2).
        match FieldTower::new(2, 2, &[1, 0, 1]) {
            Err(GaloisError::Reducible { factor }) => assert_eq!(factor, vec![1, 1]),
            other => panic!("expected reducible error, got {other:?}"),
        }
    }

    #[test]
    fn non_primitive_alpha_reports_order() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible over GF(2) but its root has
        // order 5, not 15.
        match FieldTower::new(2, 4, &[1, 1, 1, 1, 1]) {
            Err(GaloisError::NotPrimitive { order, expected }) => {
                assert_eq!(order, 5);
                assert_eq!(expected, 15);
            }
            other => panic!("expected non-primitive error, got {other:?}"),
        }
    }

    #[test]
    fn composite_q_rejected() {
        assert!(matches!(FieldTower::new(4, 2, &[1, 1, 1]), Err(GaloisError::NotPrime(4))));
        assert!(matches!(FieldTower::new(1, 1, &[0, 1]), Err(GaloisError::NotPrime(1))));
    }

    #[test]
    fn trace_values() {
        let t4 = gf4();
        assert_eq!(t4.trace(Ext::ONE), 0); // 1 + 1^2 = 0 over GF(2)
        assert_eq!(t4.trace(t4.alpha()), 1); // alpha + alpha^2 = 1
        let t8 = gf8();
        assert_eq!(t8.trace(Ext::ONE), 1); // 1 + 1 + 1
    }

    #[test]
    fn trace_is_linear() {
        for t in [gf4(), gf8(), gf9()] {
            for x in t.elements() {
                for y in t.elements() {
                    let lhs = t.trace(t.add(x, y));
                    let rhs = (t.trace(x) + t.trace(y)) % t.q();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn companion_matrix_gf4() {
        let t = gf4();
        let cm = t.companion_matrix();
        assert_eq!(cm.row_vecs(), vec![vec![0, 1], vec![1, 1]]);
        // T^2 = T + I mirrors alpha^2 = alpha + 1.
        let t2 = cm.mul(&cm);
        assert_eq!(t2, cm.add(&FqMatrix::identity(2, 2)));
    }

    #[test]
    fn companion_matrix_k1() {
        let t = FieldTower::new(2, 1, &[1, 1]).unwrap();
        assert_eq!(t.companion_matrix().row_vecs(), vec![vec![1]]);
    }

    #[test]
    fn companion_columns_are_alpha_power_coords() {
        for t in [gf4(), gf8(), gf9()] {
            let cm = t.companion_matrix();
            for j in 0..t.k() {
                let col: Vec<u32> = (0..t.k()).map(|i| cm.get(i, j)).collect();
                assert_eq!(col, t.power_coords(t.exp(j as u32 + 1)));
            }
        }
    }

    #[test]
    fn companion_steps_powers() {
        for t in [gf4(), gf8()] {
            let cm = t.companion_matrix();
            for i in 0..t.order() - 1 {
                let stepped = cm.mul_vec(&t.power_coords(t.exp(i)));
                assert_eq!(stepped, t.power_coords(t.exp(i + 1)));
            }
        }
    }

    #[test]
    fn power_coords_examples() {
        let t = gf4();
        let a2 = t.mul(t.alpha(), t.alpha());
        assert_eq!(t.power_coords(a2), vec![1, 1]); // alpha^2 = 1 + alpha
        assert_eq!(t.power_coords(Ext::ZERO), vec![0, 0]);
    }

    #[test]
    fn coords_in_arbitrary_basis() {
        let t = gf4();
        let a = t.alpha();
        let a2 = t.mul(a, a);
        // Dual of the power basis: coords must match the trace formula.
        let dual = t.power_basis_dual().to_vec();
        let c = t.coords(&dual, a).unwrap();
        assert_eq!(c, t.dual_power_coords(a));
        assert_eq!(c, vec![1, 1]); // (Tr alpha, Tr alpha^2)
        // Reconstruction round-trip in a swapped basis.
        let swapped = vec![a2, Ext::ONE];
        for x in t.elements() {
            let c = t.coords(&swapped, x).unwrap();
            assert_eq!(t.from_coords_in(&swapped, &c), x);
        }
    }

    #[test]
    fn dual_basis_gf4_by_brute_force() {
        let t = gf4();
        let b = vec![Ext::ONE, t.alpha()];
        let computed = t.dual_basis(&b).unwrap();
        // Oracle: search every ordered pair for the four trace conditions.
        let mut found = Vec::new();
        for x in t.elements() {
            for y in t.elements() {
                if t.trace(t.mul(b[0], x)) == 1
                    && t.trace(t.mul(b[0], y)) == 0
                    && t.trace(t.mul(b[1], x)) == 0
                    && t.trace(t.mul(b[1], y)) == 1
                {
                    found.push(vec![x, y]);
                }
            }
        }
        assert_eq!(found.len(), 1);
        assert_eq!(computed, found[0]);
        let a2 = t.mul(t.alpha(), t.alpha());
        assert_eq!(computed, vec![a2, Ext::ONE]);
    }

    #[test]
    fn self_dual_basis_is_its_own_dual() {
        let t = gf4();
        let a = t.alpha();
        let a2 = t.mul(a, a);
        let b = vec![a, a2];
        for (i, &x) in b.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                assert_eq!(t.trace(t.mul(x, y)), u32::from(i == j));
            }
        }
        assert_eq!(t.dual_basis(&b).unwrap(), b);
    }

    #[test]
    fn dual_basis_is_an_involution() {
        let mut rng = StdRng::seed_from_u64(11);
        for t in [gf4(), gf8(), gf9()] {
            for _ in 0..20 {
                let b = random_basis(&t, &mut rng);
                let d = t.dual_basis(&b).unwrap();
                assert_eq!(t.dual_basis(&d).unwrap(), b);
            }
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let t = gf8();
        let a = t.alpha();
        let bad = vec![Ext::ONE, a, t.add(Ext::ONE, a)];
        assert!(matches!(t.dual_basis(&bad), Err(GaloisError::DependentBasis)));
        assert!(matches!(t.coords(&bad, a), Err(GaloisError::DependentBasis)));
    }

    #[test]
    fn phi_map_power_basis() {
        let t = gf4();
        let a = t.alpha();
        let phi_alpha = t.phi_map(t.power_basis(), a).unwrap();
        assert_eq!(phi_alpha, t.companion_matrix());
        let id = t.phi_map(t.power_basis(), Ext::ONE).unwrap();
        assert_eq!(id, FqMatrix::identity(2, 2));
        // phi(alpha) phi(alpha^2) = phi(alpha^3) = I.
        let a2 = t.mul(a, a);
        let prod = phi_alpha.mul(&t.phi_map(t.power_basis(), a2).unwrap());
        assert_eq!(prod, FqMatrix::identity(2, 2));
        assert!(t.phi_power(Ext::ZERO).is_zero());
    }

    #[test]
    fn phi_is_a_ring_isomorphism_exhaustive() {
        for t in [gf4(), gf8(), gf9()] {
            for x in t.elements() {
                for y in t.elements() {
                    let px = t.phi_power(x);
                    let py = t.phi_power(y);
                    assert_eq!(px.mul(&py), t.phi_power(t.mul(x, y)));
                    assert_eq!(px.add(&py), t.phi_power(t.add(x, y)));
                }
            }
        }
    }

    #[test]
    fn phi_left_and_right_actions_exhaustive() {
        for t in [gf4(), gf8(), gf9()] {
            for x in t.elements() {
                let px = t.phi_power(x);
                for y in t.elements() {
                    // Left action on power coordinates.
                    assert_eq!(px.mul_vec(&t.power_coords(y)), t.power_coords(t.mul(x, y)));
                    // Right action on dual coordinates.
                    assert_eq!(
                        px.vec_mul(&t.dual_power_coords(y)),
                        t.dual_power_coords(t.mul(x, y))
                    );
                }
            }
        }
    }

    #[test]
    fn companion_power_columns() {
        // Column j of T^i holds the power coords of alpha^(i+j).
        for t in [gf4(), gf8()] {
            let cm = t.companion_matrix();
            let mut ti = FqMatrix::identity(t.q(), t.k());
            for i in 0..t.order() {
                for j in 0..t.k() {
                    if i + (j as u32) < t.order() {
                        let col: Vec<u32> = (0..t.k()).map(|r| ti.get(r, j)).collect();
                        assert_eq!(col, t.power_coords(t.exp(i + j as u32)), "i={i} j={j}");
                    }
                }
                ti = cm.mul(&ti);
            }
        }
    }

    pub(crate) fn random_basis(t: &FieldTower, rng: &mut impl Rng) -> Vec<Ext> {
        loop {
            let cand: Vec<Ext> =
                (0..t.k()).map(|_| Ext(rng.random_range(0..t.size()))).collect();
            if t.change_of_basis(&cand).is_ok() {
                return cand;
            }
        }
    }

    #[test]
    fn change_of_basis_identity_and_swap() {
        let t = gf4();
        let (l, lp) = t.change_of_basis(t.power_basis()).unwrap();
        assert_eq!(l, FqMatrix::identity(2, 2));
        assert_eq!(lp, FqMatrix::identity(2, 2));

        let swapped = vec![t.alpha(), Ext::ONE];
        let (l, lp) = t.change_of_basis(&swapped).unwrap();
        let swap = FqMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(l, swap);
        assert_eq!(lp, swap);
    }

    #[test]
    fn change_of_basis_duality_holds() {
        let mut rng = StdRng::seed_from_u64(5);
        for t in [gf4(), gf8(), gf9()] {
            for _ in 0..20 {
                let b = random_basis(&t, &mut rng);
                let (l, lp) = t.change_of_basis(&b).unwrap();
                assert_eq!(l.transpose().mul(&lp), FqMatrix::identity(t.q(), t.k()));
                let bd = t.dual_basis(&b).unwrap();
                for x in [t.alpha(), t.exp(rng.random_range(0..t.order()))] {
                    // Lambda maps b-coordinates to power coordinates.
                    let cb = t.coords(&b, x).unwrap();
                    assert_eq!(l.mul_vec(&cb), t.power_coords(x));
                    // Lambda' does the same for the dual pair.
                    let cbd = t.coords(&bd, x).unwrap();
                    assert_eq!(lp.mul_vec(&cbd), t.dual_power_coords(x));
                }
            }
        }
    }

    #[test]
    fn phi_map_identities_for_random_bases() {
        let mut rng = StdRng::seed_from_u64(17);
        for t in [gf4(), gf8()] {
            for _ in 0..20 {
                let b = random_basis(&t, &mut rng);
                let bd = t.dual_basis(&b).unwrap();
                for _ in 0..200 {
                    let x = Ext(rng.random_range(0..t.size()));
                    let y = Ext(rng.random_range(0..t.size()));
                    let phix = t.phi_map(&b, x).unwrap();
                    let cy = t.coords(&b, y).unwrap();
                    assert_eq!(phix.mul_vec(&cy), t.coords(&b, t.mul(x, y)).unwrap());
                    let cdx = t.coords(&bd, x).unwrap();
                    let phiy = t.phi_map(&b, y).unwrap();
                    assert_eq!(phiy.vec_mul(&cdx), t.coords(&bd, t.mul(x, y)).unwrap());
                }
            }
        }
    }

    #[test]
    fn default_gf2_polynomials_build() {
        for k in 1..=12 {
            let t = FieldTower::gf2_default(k).unwrap();
            assert_eq!(t.size(), 1 << k);
        }
    }

    #[test]
    fn field_size_cap_enforced() {
        assert!(matches!(
            FieldTower::new(2, 21, &[1; 22]),
            Err(GaloisError::FieldTooLarge(_))
        ));
    }
}
