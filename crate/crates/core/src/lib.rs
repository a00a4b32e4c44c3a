//! Post-Lie algebras over concrete finite-dimensional Lie algebras.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is generic over a
//! [`Scalar`]: identity checks run in exact rationals, numerical flows in `f64`.
//!
//! Module map:
//! - [`liealg`]: structure constants, validation, built-in algebras
//! - [`rmatrix`]: (modified) classical Yang-Baxter solutions and the `R±` splitting
//! - [`postlie`]: post-Lie and pre-Lie products and their axioms
//! - [`env`]: truncated enveloping algebras, both Hopf structures, `φ` and `F`
//! - [`magnus`]: BCH, post-Lie and pre-Lie Magnus expansions, `dexp∗`
//! - `flows` (feature `std`): isospectral Lax flows in a matrix realization

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod env;
pub mod error;
#[cfg(feature = "std")]
pub mod flows;
pub mod liealg;
pub mod linalg;
pub mod magnus;
pub mod partitions;
pub mod postlie;
pub mod rmatrix;
pub mod scalar;

pub use error::{Error, Result};
pub use liealg::{Builtin, LieAlgebra, Splitting};
pub use linalg::{LinearEndo, Matrix, Vector};
pub use postlie::{BilinearProduct, Handedness, PostLieStructure};
pub use rmatrix::{RMatrixContext, Side, Sign, Theta};
pub use scalar::{Rational, Scalar, DEFAULT_TOLERANCE};
