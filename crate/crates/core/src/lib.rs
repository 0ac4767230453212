//! Exact Moy–Prasad machinery for formal connections on trivial `GL_n` bundles
//! over the punctured formal disk.
//!
//! Everything is computed over a cyclotomic field `Q(zeta_m)` with truncated
//! Puiseux series in `z`. Truncation is tracked explicitly: an operation whose
//! answer is not determined by the known coefficients fails with
//! [`Error::InsufficientPrecision`] instead of guessing.
//!
//! A connection `d + M dz/z` is represented by its matrix `M` over the
//! derivation `tau = z d/dz`; functionals on the loop algebra are identified
//! with matrices through the residue trace pairing `Res tr(AB) dz/z`.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
// index loops mirror the matrix formulas
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod apartment;
pub mod error;
pub mod formaltype;
pub mod reduce;
pub mod scalars;
pub mod strata;
pub mod torus;

pub use error::{Error, Result};
pub use scalars::{Cyclotomic, LoopMatrix, PuiseuxSeries, Q};
