//! Exact arithmetic for algebras obtained by the Cayley-Dickson process.
//!
//! * [`algebra`]: the doubling product, conjugation, trace, norm and inverse.
//! * [`twist`]: symbolic structure constants, sign tables and their 2x2 blocks.
//! * [`fibonacci`]: Fibonacci quaternions, their norms and the invertibility criterion.
//! * [`residue`]: integer elements, the ring `Z[w]`, residue fields and labelling.

pub mod algebra;
pub mod error;
pub mod fibonacci;
pub mod rational;
pub mod residue;
pub mod twist;
pub mod verify;

pub use algebra::{make_algebra, AlgebraSignature, Convention, Element};
pub use error::{Error, Result};
pub use rational::Rational;
