//! Online Boolean matrix-vector multiplication (OMv) and its vector-matrix-vector
//! variant (OuMv), together with executable reductions from these problems to a
//! collection of dynamic graph and array problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`bitcore`] holds bit-packed Boolean vectors and matrices.
//! * [`engines`] answers streams of matrix-vector products after preprocessing.
//! * [`oumv`] lists witnesses, rebuilds OMv from an OuMv oracle and exposes the
//!   graph/2-CNF query problems that are equivalent to OuMv.
//! * [`dynoracles`] contains instrumented reference structures for every dynamic
//!   problem a reduction targets.
//! * [`gadgets`] builds one reduction per target problem and decodes the product
//!   bit from the oracle's answers while counting operations.
//! * [`harness`] drives generation, verification campaigns and benchmarks.

pub mod bitcore;
pub mod dynoracles;
pub mod engines;
pub mod error;
pub mod gadgets;
pub mod harness;
pub mod oumv;
pub mod ratio;

pub use bitcore::{mat_vec, symmetrize, vec_mat_vec, BoolMatrix, BoolVector, OmvInstance};
pub use error::{Error, Result};
pub use ratio::Rational;
