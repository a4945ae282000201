//! Bases, normal forms and pairing certificates for the multilinear parts of
//! free algebras with two compatible Lie brackets `[.,.]` and `<.,.>`, and
//! of their Poisson extension.

pub mod counting;
pub mod eil;
pub mod error;
pub mod graph;
pub mod letter;
pub mod lie;
pub mod lincombo;
pub mod linalg;
pub mod monomial;
pub mod orders;
pub mod pairing;
pub mod poisson;
pub mod rooted;
pub mod verify;

pub use error::{LiebraError, Result};
pub use letter::{Color, Letter, LetterSet};
