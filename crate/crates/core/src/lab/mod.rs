//! Brute-force laboratory: exact arithmetic in concrete groups, truncated
//! Cayley graphs and Renz certificates. Everything here is corroborating
//! evidence for the symbolic engine, never a replacement for it.

use thiserror::Error;

use crate::character::CharacterError;

pub mod ball;
pub mod concrete;
pub mod renz;
pub mod word;

pub use ball::{ball, ball_with_cap, connectivity_evidence, BallGraph, Evidence};
pub use concrete::{realize, Concrete, Elem};
pub use renz::{
    find_renz_certificate, verify_renz_certificate, CertificateCheck, Clause, RenzCertificate, Rewrite, SearchOutcome,
};
pub use word::{ConcreteGroup, Letter, Word};

pub const DEFAULT_RADIUS: u32 = 8;
pub const DEFAULT_MARGIN: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("no concrete realization: {0}")]
    Unsupported(String),
    #[error("unknown letter {token:?} at word position {position}")]
    UnknownLetter { token: String, position: usize },
    #[error("bad alphabet: {0}")]
    BadAlphabet(String),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("vertex cap {cap} exceeded after {vertices} vertices (complete to radius {radius_reached})")]
    CapExceeded {
        cap: usize,
        vertices: usize,
        radius_reached: u32,
    },
    #[error("margin {margin} must be smaller than the radius {radius}")]
    BadMargin { margin: u32, radius: u32 },
    #[error("search bounds must be at least 1")]
    BadBounds,
    #[error("the zero character has no certificate")]
    ZeroCharacter,
    #[error("malformed certificate: {0}")]
    BadCertificate(String),
    #[error("integer overflow in scaled character values")]
    Overflow,
}
