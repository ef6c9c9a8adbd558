//! Exact-arithmetic laboratory for the ordered-monoid machinery behind a
//! family of AF-algebra counterexamples: piecewise-linear rational
//! functions on `[0,1]`, the positive-near-zero function monoid `M` with
//! its algebraic order, Riesz decomposition, the interval calculus over
//! order-ideals `N_f`, localization classes, and oscillating tail
//! functions that admit no continuous extension to their accumulation
//! point.
//!
//! Everything is computed with arbitrary-precision rationals; there is no
//! tolerance anywhere. Verification helpers return certificates that are
//! re-checked by independent evaluation rather than trusted.

pub mod interval;
pub mod localize;
pub mod monoid;
pub mod monster;
pub mod pwl;
pub mod rat;
pub mod rset;
pub mod suite;
pub mod urysohn;

pub use interval::{IntervalRep, PropCWitness, SupFn};
pub use monoid::{IdealCtx, MElem};
pub use monster::TailFn;
pub use pwl::{compare, CompareReport, Germ, PwlError, PwlFn};
pub use rat::Rat;
pub use rset::{Interval, RSet};
