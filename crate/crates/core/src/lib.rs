//! Initial-coefficient estimates for bi-univalent functions.
//!
//! The crate is layered bottom-up:
//!
//! - [`scalar`] and [`series`]: exact-rational and floating complex
//!   coefficients, and truncated power-series algebra over them.
//! - [`classes`]: Ma–Minda targets, the `P`, `M` and `L` function classes
//!   and their order-2 linearization triples.
//! - [`solver`]: the coefficient equations linking `f`, `g = f⁻¹` and the
//!   two Carathéodory functions, solved for `a₂²` and `a₃`.
//! - [`bounds`]: the six printed bound theorems, their generically derived
//!   counterparts and an audit comparing the two.
//! - [`harness`] and [`verify`]: extremal sweeps, randomized checks,
//!   end-to-end consistency runs and the identity suites.

pub mod bounds;
pub mod classes;
pub mod harness;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod verify;

pub use bounds::{BoundInputs, BoundReport, Discrepancy, TheoremId};
pub use classes::{ClassKind, ClassSpec, ClassTriple, MindaTarget, SchlichtCoeffs, SchwarzParams};
pub use scalar::{Exact, Float, Mode, Scalar, Tolerance};
pub use series::{SeriesError, TruncatedSeries, DEFAULT_ORDER};
pub use solver::{EliminationResult, PairSpec};
