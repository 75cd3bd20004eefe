use thiserror::Error;

/// Errors surfaced by the algebraic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// exp/log require a fixed constant term (0 for exp, 1 for log).
    #[error("constant term violation: {0}")]
    ConstantTermViolation(&'static str),

    /// Trace projections are only defined on the augmentation ideal.
    #[error("nonzero constant term in trace projection")]
    NonzeroConstantTerm,

    /// Triangular elimination left a remainder that is not in the image of
    /// the free Lie algebra; the offending word is reported.
    #[error("not a Lie element (first non-Lyndon word: {0})")]
    NotLieElement(String),

    /// Reduction mod p of a rational with a p in the denominator.
    #[error("negative {p}-adic valuation, cannot reduce mod {p}")]
    NegativeValuation { p: u64 },

    /// A degree-(p-1) coefficient fell below valuation -1, so the 1/p
    /// extraction is undefined.
    #[error("valuation below -1 at degree {degree} for p = {p}")]
    ValuationViolation { p: u64, degree: usize },

    /// Bracket-expression parser failure.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
