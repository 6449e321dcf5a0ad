//! Construction and decoding of concatenated conjugate (CSS) code pairs.
//!
//! A conjugate code pair is a pair of linear codes `(C1, C2)` over a finite
//! field such that the dual of each is contained in the other.  Such pairs
//! carry the classical structure of CSS quantum codes and of the quotient
//! codes used in code-based key distribution.  This crate builds long,
//! efficiently decodable pairs by concatenating short inner pairs with an
//! outer pair of generalized Reed-Solomon codes over an extension field,
//! and decodes the result with a two-stage syndrome decoder: per-block
//! coset-leader decoding inside each inner code, then bounded-distance
//! decoding of the outer code.
//!
//! Module map:
//!
//! - [`galois`]: prime fields, extension towers with log/antilog tables,
//!   traces, dual bases, companion matrices and the coordinate/matrix maps
//!   that expand extension-field symbols over the base field.
//! - [`matrix`]: exact dense linear algebra over GF(q).
//! - [`codes`]: linear codes, duals, quotient rates, and GRS codes with
//!   syndrome-driven bounded-distance decoding.
//! - [`conjugate`]: conjugate pair validation, dual generator completion,
//!   coset encoding and coset-leader tables.
//! - [`mod@concat`]: assembly of concatenated pairs, the symbol-expansion maps,
//!   block parity-check matrices and duality verification.
//! - [`decoder`]: the two-stage decoder and its syndrome-only variant.
//! - [`evaluate`]: q-ary symmetric channel simulation, exact inner failure
//!   probabilities, tail and entropy-form bounds, exponent curves.
//! - [`codespec`]: the JSON code-spec and report formats used by the CLI.
//!
//! ```
//! use conjcat::codes::{GrsCode, LinearCode};
//! use conjcat::concat::{ConcatRandomness, ConcatenatedPair};
//! use conjcat::conjugate::ConjugateCodePair;
//! use conjcat::decoder::{build_inner_tables, two_stage_decode};
//! use conjcat::galois::{Ext, FieldTower};
//! use std::sync::Arc;
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! // Three trivial [2, 2] inner pairs under a [3, 1] outer code over GF(4).
//! let tower = Arc::new(FieldTower::new(2, 2, &[1, 1, 1])?);
//! let points: Vec<Ext> = (0..3).map(|i| tower.exp(i)).collect();
//! let d1 = GrsCode::new(tower.clone(), 3, 1, points.clone(), vec![Ext::ONE; 3])?;
//! let d2 = GrsCode::new(tower.clone(), 3, 3, points, d1.dual_mults().to_vec())?;
//! let full = LinearCode::full_space(2, 2);
//! let inner = ConjugateCodePair::new(full.clone(), full)?;
//! let cp = ConcatenatedPair::new(tower, vec![inner; 3], d1, d2, None)?;
//! cp.verify_duality()?;
//!
//! let tables = build_inner_tables(&cp)?;
//! let msg = vec![Ext(2)];
//! let mut word = cp.encode_message(&msg, &ConcatRandomness::Seed(7))?;
//! word[3] ^= 1; // one flipped bit: within the outer decoding radius
//! let report = two_stage_decode(&cp, &tables, &word)?;
//! assert!(report.ok);
//! assert_eq!(report.message_coset, cp.message_coset_rep(&msg)?);
//! # Ok(()) }
//! ```

// Index loops over matrix entries read better than iterator chains here.
#![allow(clippy::needless_range_loop)]

pub mod codes;
pub mod codespec;
pub mod concat;
pub mod conjugate;
pub mod decoder;
pub mod evaluate;
pub mod galois;
pub mod matrix;

pub use codes::{GrsCode, LinearCode, QuotientCode};
pub use concat::{BasisPair, ConcatenatedPair};
pub use conjugate::{ConjugateCodePair, SyndromeTable};
pub use decoder::DecodeReport;
pub use evaluate::{ChannelModel, EvalReport};
pub use galois::{Ext, FieldTower};
pub use matrix::FqMatrix;
