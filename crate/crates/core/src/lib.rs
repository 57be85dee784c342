//! Truncated power series solvers for linear ordinary differential equations.
//!
//! Every function handled by the crate (coefficients, integrating factors,
//! solutions) is a [`Series`]: a fixed-order Taylor polynomial about an explicit
//! base point. Two solver families are provided:
//!
//! * [`first_order`] solves `y' + p y = f` with the classical integrating factor
//!   and, independently, by fixed-point iteration of the integral form.
//! * [`second_order`] solves `y'' + p y' + q y = f` through the pair of
//!   integrating factors `alpha`, `beta`, with `alpha` found by iteration.
//!
//! [`catalog`] bundles the classical equations (constant coefficients,
//! Cauchy-Euler, Airy, Legendre, Hermite, Chebyshev) together with golden
//! coefficients and closed-form reference solutions.
//!
//! The numeric core is generic over [`Scalar`] (`f32`, `f64`, and the
//! [`DoubleDouble`] wrapper). The catalog and CLI work in binary64 through the
//! `*64` aliases below, and evaluate second-order solutions with
//! [`second_order::solve_extended`].

pub mod catalog;
mod dd;
mod error;
pub mod first_order;
mod residual;
mod scalar;
pub mod second_order;
mod series;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use residual::ResidualReport;
pub use scalar::Scalar;
pub use series::{Comparison, Series};

pub type Series64 = Series<f64>;
pub type Series32 = Series<f32>;
pub type FirstOrderProblem64 = first_order::FirstOrderProblem<f64>;
pub type SecondOrderProblem64 = second_order::SecondOrderProblem<f64>;
pub type FactorBundle64 = second_order::FactorBundle<f64>;
pub type SolutionBundle64 = second_order::SolutionBundle<f64>;
pub type ResidualReport64 = ResidualReport<f64>;
