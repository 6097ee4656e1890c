//! Desk-scale machinery for polynomial recurrence along shifted primes.
//!
//! The crate is split by concern:
//!
//! * [`arith`] sieves the classical multiplicative functions.
//! * [`polysys`] holds multivariate integer polynomials and PET induction.
//! * [`norms`] evaluates cyclic Gowers norms and the local `V_k` norms.
//! * [`wtrick`] builds the W-tricked prime weights and their majorant.
//! * [`systems`] realizes weighted multiple averages on cyclic systems.
//! * [`nilseq`] evaluates torus nilsequences and their prime correlations.

pub mod arith;
pub mod error;
pub mod nilseq;
pub mod norms;
pub mod polysys;
mod reduce;
pub mod systems;
pub mod wtrick;

pub use error::{Error, Result};
