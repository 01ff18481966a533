//! Laurent multiple orthogonal polynomials on the unit circle.
//!
//! Given a system of moment functionals `L_1, ..., L_r`, the crate builds the
//! block moment matrices `T_{n;m}`, solves for the type I and type II
//! polynomial families, extracts their recurrence coefficients, constructs the
//! associated two-point Hermite-Pade approximants, and checks the recurrence,
//! compatibility and Christoffel-Darboux identities they satisfy. A real-line
//! side covers multiple orthogonal polynomials on the line and their relation
//! to symmetric circle systems through the Szego map.
//!
//! Everything is generic over [`Scalar`]: use [`GaussianRational`] for exact
//! results and [`ComplexFloat`] for quick floating-point runs.

pub mod descriptor;
pub mod error;
pub mod heine;
pub mod hermite_pade;
pub mod index;
pub mod laurent;
pub mod linalg;
pub mod moments;
pub mod polynomial;
pub mod real_line;
pub mod relations;
pub mod report;
pub mod scalar;
pub mod systems;

pub use error::{Error, Result};
pub use index::IndexPair;
pub use laurent::{LaurentMop, SolveResult};
pub use moments::{
    CircleAtom, CirclePoint, FormalSeriesPair, FunctionalSystem, LaurentFunctional, RealFunctional,
    RealSystem, TableDefault,
};
pub use relations::IndexPath;
pub use report::{Status, VerificationReport};
pub use polynomial::{LaurentPoly, RealPoly, TypeIVector};
pub use real_line::{NnCoefficients, RealMop, SzegoBridge};
pub use scalar::{ComplexFloat, GaussianRational, Scalar};
