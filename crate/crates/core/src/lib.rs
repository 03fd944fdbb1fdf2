//! Separability analysis for two-mode Gaussian covariance matrices.
//!
//! Quadratures are ordered `(q₁, p₁, q₂, p₂)` with vacuum covariance `I/2`.

#![allow(clippy::needless_range_loop)]

pub mod covariance;
pub mod criteria;
pub mod error;
pub mod matkit;
pub mod prep;
pub mod squeezing;
pub mod statezoo;

pub use covariance::{CovMat4, EnsembleSpec, StandardForm, Symp2, TildeMat};
pub use criteria::{classify, Branch, Classification, CriterionKind, CriterionReport, ParamSet, Verdict, Witness};
pub use error::{Error, Result};
pub use squeezing::{optimal_squeeze, SqueezeParams, SqueezeSolution};
