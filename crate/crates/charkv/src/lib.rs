//! Exact-arithmetic engine for free Lie algebras over Q and F_p.
//!
//! The crate computes the Campbell-Hausdorff series, Vergne's closed-form
//! solution of the Kashiwara-Vergne equations, the p-adic extraction of the
//! mod-p solution pair (A, B) of the characteristic-p analogue, and the
//! Grothendieck-Teichmuller relation checks for the induced element psi,
//! all in exact rational / prime-field arithmetic.

pub mod charp;
pub mod chvergne;
pub mod error;
pub mod grt;
pub mod lie;
pub mod report;
pub mod scalars;
pub mod selfcheck;
pub mod words;

pub use error::{Error, Result};
pub use scalars::{FpScalar, Rational, Scalar, Valuation};
pub use words::{Alphabet, AssocPoly, QuadTraceElement, TraceElement, Word};
