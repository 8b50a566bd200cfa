//! Computable module theory on noncommutative projective planes.
//!
//! The crate builds three-generator AS-regular algebras degreewise (Sklyanin,
//! homogenized Weyl, q-deformed and polynomial families), computes graded
//! module invariants and cohomology tables from minimal free resolutions,
//! certifies Kronecker complexes as monads, decides GIT-style semistability
//! by subspace enumeration over finite fields, runs the ADHM construction on
//! the homogenized Weyl plane, enumerates plane-cubic point schemes with
//! their shift automorphism, and verifies the chain-level identities behind
//! the Poisson structure on the moduli spaces. All arithmetic is exact.
//!
//! Entry points are per capability; the `examples/` directory of the crate
//! has one runnable example for each, and the thin `nc-plane` binary exposes
//! the same operations as CLI subcommands emitting deterministic JSON.

pub mod adhm;
pub mod algebra;
pub mod chainpoisson;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod grmod;
pub mod io;
pub mod kronecker;
pub mod matrix;

pub use error::{Error, Result};
