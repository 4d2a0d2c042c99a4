//! Permutation-of-indices separability criteria for multipartite density matrices.
//!
//! A density matrix on N parties carries 2N tensor indices: one ket and one bra
//! index per party. Rearranging which indices label rows and which label columns
//! produces a new (generally rectangular) matrix whose trace norm is at most 1
//! for every separable state. Any rearrangement whose value exceeds 1 therefore
//! witnesses entanglement. Partial transposition and realignment are the two
//! classic instances; this crate implements the whole family:
//!
//! * [`tensor`] — subsystem layouts, slot bookkeeping, and the index-permutation
//!   engine (pure entry relabeling, no dense operator products),
//! * [`spectra`] — singular values, trace norms, and spectra comparison,
//! * [`criteria`] — realignment (direct map and the swap+partial-transpose
//!   construction), one-side swap criteria, and detection verdicts,
//! * [`classifier`] — enumeration of all (2N)! index permutations, reduction to
//!   canonical equivalence classes, and a numerical grouping oracle,
//! * [`states`] — named and random test states plus a JSON state-file format.
//!
//! The `permsep` binary exposes classification, evaluation, witness checks, and
//! state generation as subcommands.
//!
//! # Example
//!
//! ```
//! use permsep::states::{generate, StateSpec};
//! use permsep::criteria::evaluate_all_classes;
//!
//! let bell = generate(&StateSpec::Bell).unwrap();
//! let verdicts = evaluate_all_classes(&bell, 1e-9).unwrap();
//! assert_eq!(verdicts.len(), 2); // partial transpose and realignment
//! assert!(verdicts.iter().all(|v| v.detected));
//! ```

pub mod classifier;
pub mod criteria;
mod error;
pub mod spectra;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
