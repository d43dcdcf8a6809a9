//! Exact fractional-ideal arithmetic in quadratic orders `Z[sqrt d]` and in
//! valuation rings with a finitely generated value group in the reals, and
//! checks of the sharp factorization condition: whenever `I ⊇ AB` there are
//! `A' ⊇ A`, `B' ⊇ B` with `I = A'B'`.
//!
//! The [`engine`] tests the equivalent colon criterion
//! `I = [I:(I:H)](I:H)`; the [`oracle`] searches for factorizations
//! directly and is used to certify the engine.

pub mod cli;
pub mod domain;
pub mod engine;
pub mod error;
pub mod exact;
pub mod literal;
pub mod oracle;
pub mod quadratic;
pub mod report;
pub mod valuation;

pub use domain::{IdealArithmetic, QuadraticDomain, ValuationDomain};
pub use error::{Error, Result};
pub use exact::{BigRat, ExactReal, IntLattice};
pub use quadratic::{OrderSpec, QuadIdeal, QuadNum};
pub use report::{CheckReport, Verdict, Witness};
pub use valuation::{CutIdeal, CutKind, ValueGroup};
