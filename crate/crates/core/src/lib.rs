//! Exact-integer computation and verification of generating sets, Markov,
//! Gröbner, Graver and Hilbert bases for lattices in `Z^([n]^d×[c])`, with
//! the symmetric-group action permuting the unbounded coordinates.
//!
//! Everything works on finite truncations: a lattice always lives in a
//! concrete shape `[n]^d×[c]`, and statements about infinite chains are
//! checked level by level.

pub mod bases;
pub mod budget;
pub mod chains;
pub mod error;
pub mod indexvec;
pub mod intlinalg;
pub mod models;
pub mod symmetry;

pub use bases::{BasisKind, BasisReport, Certificate};
pub use budget::Budget;
pub use error::{Error, Refusal, Result};
pub use indexvec::{Index, IndexShape, IndexedVector, SignSplit, TermOrder};
pub use intlinalg::{IntMatrix, LatticeHandle};
pub use symmetry::{IncEmbedding, Permutation};
