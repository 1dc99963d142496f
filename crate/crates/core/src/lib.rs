//! Exact intersection theory for the tautological rings of powers `X^n` and
//! Fulton–MacPherson compactifications `X[n]` of a smooth curve of genus `g`,
//! together with the `sl2` calculus on the Jacobian side that produces the
//! motivic relations those rings inherit.
//!
//! Everything is computed over `Q` with arbitrary-precision rationals; there
//! is no floating point anywhere in the crate.  The two main entry points are
//! [`curve::RingContext`] (fix `g` and the number of factors `n`) and the
//! standard-basis / pairing machinery in [`curve`] and [`fm`].

pub mod blowup;
pub mod combinat;
pub mod curve;
pub mod exec;
pub mod fm;
pub mod jacobian;
pub mod linalg;
pub mod relations;

/// Errors surfaced by ring operations.
///
/// Almost all arithmetic in the crate is total once the operands live in the
/// same ring; the failure modes below are interface-level (mixing contexts,
/// asking for an integral of a non-homogeneous class, oracle size caps).
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different ring contexts: (g={0}, n={1}) vs (g={2}, n={3})")]
    ContextMismatch(u32, u8, u32, u8),
    #[error("class is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} out of range for this ring (top degree {1})")]
    DegreeOutOfRange(usize, usize),
    #[error("index {0} out of range for n={1}")]
    IndexOutOfRange(u8, u8),
    #[error("subset {0:?} is not a valid diagonal label for n={1}")]
    BadSupport(Vec<u8>, u8),
    #[error("iterated blow-up oracle capped at n<=7, got n={0}")]
    OracleScale(u8),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
