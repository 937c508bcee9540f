//! Numerical engine for weighted Finsler manifolds on flat periodic charts:
//! jet-based tensor calculus (fundamental tensor through weighted Ricci
//! curvature), geodesics and nonsymmetric distance, the nonlinear heat flow
//! with its linearized semigroup, and quantified checks of the
//! Bochner-Weitzenbock identity and the Bakry-Emery / Li-Yau / Harnack
//! estimates.

pub mod ad;
pub mod error;
pub mod linalg;

pub use error::{AdError, FinslerError, Result};
