//! Toolkit for analysing palindrome-rich morphic sequences over small alphabets.
//!
//! The crate provides finite-word primitives, morphisms with fixed-point
//! prefix generation, a brute-force factor index over finite prefixes
//! (extensions, bispecial factors, bilateral orders, return words),
//! palindromic-richness testing, a symbolic engine for bispecial factors of
//! the `u_d` family together with their shortest-return-word Parikh tracks,
//! an exact-rational spectral pipeline (dominant eigenvalue, left
//! eigenvector, closed-form asymptotic critical exponent), and empirical
//! repetition scanning on long prefixes.
//!
//! Symbolic results are always cross-checkable against brute-force oracles
//! on finite prefixes; see the [`verify`] module and the `oracle` module.

pub mod bispecial;
pub mod exponent;
pub mod factor_index;
pub mod morphism;
pub mod oracle;
pub mod richness;
pub mod spectral;
pub mod verify;
pub mod word;

pub use morphism::{IncidenceMatrix, Morphism};
pub use word::{Letter, ParikhVector, Word};

/// Error type shared by the whole crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("query error: {0}")]
    Query(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
