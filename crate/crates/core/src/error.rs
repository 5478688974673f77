//! Error taxonomy shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure cases surfaced by the library.
///
/// Every error carries a human-readable message; the CLI forwards these
/// verbatim. Numerical routines never guess: ambiguous classifications and
/// unstable winding counts are errors, not best-effort answers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates a documented precondition (out-of-range weight,
    /// zero determinant, odd section size where pairs are required, …).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A symbol failed a semantic check (not mapping the disk into the closed
    /// disk, not a disk automorphism, pole inside the closed disk, …).
    #[error("symbol check failed: {0}")]
    SymbolCheck(String),

    /// Classification could not be decided at the requested tolerance.
    #[error("classification failed: {0}")]
    Classification(String),

    /// A numerical routine failed to converge or produced unusable output.
    #[error("numerical failure: {0}")]
    Numerics(String),
}
