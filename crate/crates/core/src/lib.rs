//! Elimination of unary counting quantifiers from Presburger arithmetic.
//!
//! A counting formula `C x = y . φ` over a simple semilinear set is turned
//! into an ordinary first-order formula over `<`, `+` and congruences. The
//! crate also carries exact linear algebra, semilinear presentations, a
//! bounded evaluator used as a ground-truth oracle, and a text syntax.

pub mod elim;
pub mod formula;
pub mod linalg;
pub mod sets;
pub mod textio;
