use serde::Serialize;

use crate::{Scalar, Series};

/// Result of substituting a candidate solution back into its equation.
///
/// Only degrees `0..=verified_degree` are certified; each derivative in the
/// residual expression costs one degree at the top of the series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport<T> {
    /// `|r_k|` for every degree of the residual series, certified or not.
    pub residual_coeffs: Vec<T>,
    pub verified_degree: usize,
    /// Max of `residual_coeffs` over `0..=verified_degree`.
    pub max_residual: T,
    /// `max(1, max |coeff|)` over the terms of the equation, in the certified window.
    pub scale: T,
    pub tolerance_used: T,
}

impl<T: Scalar> ResidualReport<T> {
    /// `terms` are the individual summands of the residual; they set the scale
    /// the tolerance is measured against.
    pub(crate) fn new(residual: &Series<T>, terms: &[&Series<T>], calculus_ops: usize, tol: T) -> Self {
        let verified_degree = residual.order().saturating_sub(calculus_ops);
        let residual_coeffs: Vec<T> = residual.coeffs().iter().map(|c| c.abs()).collect();
        let max_residual = residual_coeffs[..=verified_degree]
            .iter()
            .fold(T::zero(), |m, &c| m.max(c));
        let scale = terms
            .iter()
            .fold(T::one(), |m, t| m.max(t.max_abs(verified_degree)));
        Self {
            residual_coeffs,
            verified_degree,
            max_residual,
            scale,
            tolerance_used: tol,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance_used * self.scale
    }

    /// `max_residual / scale`, the quantity compared against the tolerance.
    pub fn relative_residual(&self) -> T {
        self.max_residual / self.scale
    }
}
