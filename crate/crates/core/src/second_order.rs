//! Second-order linear equations `y'' + p(x) y' + q(x) y = f(x)` solved with a
//! pair of integrating factors.
//!
//! Multiplying the equation by `alpha * beta` turns it into an exact derivative
//! when
//!
//! ```text
//! beta'  = beta * p / 2
//! alpha'' = h * alpha,     h = -q + p'/2 + p^2/4
//! ```
//!
//! `beta` is an exponential; `alpha` is found by iterating
//! `alpha = 1 + int int (h alpha)`, which fixes `alpha(x0) = 1`, `alpha'(x0) = 0`.
//! With both factors known the general solution is
//!
//! ```text
//! y = C2 alpha/beta + C1 alpha/beta int(1/alpha^2)
//!       + alpha/beta int( 1/alpha^2 int(alpha beta f) )
//! ```
//!
//! and the three pieces are returned as `y1`, `y2`, `yp`.

use crate::first_order::FirstOrderProblem;
use crate::{DoubleDouble, Error, ResidualReport, Result, Scalar, Series};

/// `y'' + p y' + q y = f`; all three coefficients share base point and order.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderProblem<T> {
    p: Series<T>,
    q: Series<T>,
    f: Series<T>,
}

impl<T: Scalar> SecondOrderProblem<T> {
    pub fn new(p: Series<T>, q: Series<T>, f: Series<T>) -> Result<Self> {
        p.ensure_compatible(&q)?;
        p.ensure_compatible(&f)?;
        Ok(Self { p, q, f })
    }

    pub fn p(&self) -> &Series<T> {
        &self.p
    }

    pub fn q(&self) -> &Series<T> {
        &self.q
    }

    pub fn f(&self) -> &Series<T> {
        &self.f
    }

    pub fn base_point(&self) -> T {
        self.p.base_point()
    }

    pub fn order(&self) -> usize {
        self.p.order()
    }

    /// Same `p`, `q` with the forcing replaced.
    pub fn with_forcing(&self, f: Series<T>) -> Result<Self> {
        Self::new(self.p.clone(), self.q.clone(), f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorBundle<T> {
    pub alpha: Series<T>,
    pub beta: Series<T>,
    pub h: Series<T>,
    pub alpha_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBundle<T> {
    /// `alpha / beta`; `y1(x0) = 1`.
    pub y1: Series<T>,
    /// `y1 * int(1/alpha^2)`; `y2(x0) = 0`, `y2'(x0) = 1`.
    pub y2: Series<T>,
    /// Particular solution with `yp(x0) = yp'(x0) = 0`.
    pub yp: Series<T>,
    /// `exp(-int p)`, what the Wronskian of `y1`, `y2` must equal.
    pub abel_reference: Series<T>,
}

impl<T: Scalar> SolutionBundle<T> {
    /// `c2 * y1 + c1 * y2 + yp`, the general solution with the constants
    /// named as in the closed form above.
    pub fn general(&self, c1: T, c2: T) -> Result<Series<T>> {
        self.y1
            .scale(c2)?
            .add(&self.y2.scale(c1)?)?
            .add(&self.yp)
    }
}

/// Iteration budget that [`compute_alpha`] is guaranteed to fit in.
pub fn alpha_iteration_bound(order: usize) -> usize {
    order.div_ceil(2) + 1
}

/// `beta = exp(int p / 2)`, so `beta(x0) = 1`.
pub fn compute_beta<T: Scalar>(p: &Series<T>) -> Result<Series<T>> {
    p.scale(T::from_f64_lossy(0.5))?.antiderivative().exp()
}

/// `h = -q + p'/2 + p^2/4`. Degree `order` is unreliable (one derivative).
pub fn compute_h<T: Scalar>(p: &Series<T>, q: &Series<T>) -> Result<Series<T>> {
    let half = T::from_f64_lossy(0.5);
    let quarter = T::from_f64_lossy(0.25);
    p.derivative()
        .scale(half)?
        .add(&p.mul(p)?.scale(quarter)?)?
        .sub(q)
}

/// Fixed point of `alpha = 1 + int int (h alpha)` starting from `alpha = 1`.
///
/// Each pass fixes two more degrees, so the result is bit-stable after at most
/// [`alpha_iteration_bound`] passes.
pub fn compute_alpha<T: Scalar>(h: &Series<T>, max_iters: usize) -> Result<(Series<T>, usize)> {
    let one = Series::one(h.base_point(), h.order());
    let mut alpha = one.clone();
    for iter in 1..=max_iters {
        let next = one.add(&h.mul(&alpha)?.antiderivative().antiderivative())?;
        if next == alpha {
            return Ok((next, iter));
        }
        alpha = next;
    }
    Err(Error::IterationLimit { max_iters })
}

pub fn compute_factors<T: Scalar>(p: &Series<T>, q: &Series<T>) -> Result<FactorBundle<T>> {
    p.ensure_compatible(q)?;
    let beta = compute_beta(p)?;
    let h = compute_h(p, q)?;
    let (alpha, alpha_iterations) = compute_alpha(&h, alpha_iteration_bound(h.order()))?;
    Ok(FactorBundle {
        alpha,
        beta,
        h,
        alpha_iterations,
    })
}

/// `y1 = alpha/beta` and `y2 = y1 * int(1/alpha^2)`.
pub fn homogeneous_solutions<T: Scalar>(factors: &FactorBundle<T>) -> Result<(Series<T>, Series<T>)> {
    let y1 = factors.alpha.mul(&factors.beta.reciprocal()?)?;
    let inv_alpha_sq = factors.alpha.mul(&factors.alpha)?.reciprocal()?;
    let y2 = y1.mul(&inv_alpha_sq.antiderivative())?;
    Ok((y1, y2))
}

/// `yp = (alpha/beta) int( 1/alpha^2 int(alpha beta f) )`.
pub fn particular_solution<T: Scalar>(factors: &FactorBundle<T>, f: &Series<T>) -> Result<Series<T>> {
    let FactorBundle { alpha, beta, .. } = factors;
    alpha.ensure_compatible(f)?;
    let y1 = alpha.mul(&beta.reciprocal()?)?;
    let inner = alpha.mul(beta)?.mul(f)?.antiderivative();
    let inv_alpha_sq = alpha.mul(alpha)?.reciprocal()?;
    y1.mul(&inv_alpha_sq.mul(&inner)?.antiderivative())
}

/// `exp(-int p)`.
pub fn abel_reference<T: Scalar>(p: &Series<T>) -> Result<Series<T>> {
    p.antiderivative().neg().exp()
}

pub fn solve<T: Scalar>(prob: &SecondOrderProblem<T>) -> Result<SolutionBundle<T>> {
    solve_with_factors(prob).map(|(_, solution)| solution)
}

/// [`solve`], also returning the integrating factors it computed.
pub fn solve_with_factors<T: Scalar>(
    prob: &SecondOrderProblem<T>,
) -> Result<(FactorBundle<T>, SolutionBundle<T>)> {
    let factors = compute_factors(&prob.p, &prob.q)?;
    let (y1, y2) = homogeneous_solutions(&factors)?;
    let yp = particular_solution(&factors, &prob.f)?;
    let abel_reference = abel_reference(&prob.p)?;
    Ok((
        factors,
        SolutionBundle {
            y1,
            y2,
            yp,
            abel_reference,
        },
    ))
}

/// [`solve_with_factors`] for a binary64 problem, evaluated in double-double
/// and rounded back to binary64.
///
/// When `alpha` has a zero at distance `R` from the base point, the
/// coefficients of `1/alpha^2` grow like `R^-k` and the product forming `y2`
/// and `yp` cancels most of them; in plain binary64 this costs up to
/// `k log10(1/R)` digits at degree `k`.
pub fn solve_extended(
    prob: &SecondOrderProblem<f64>,
) -> Result<(FactorBundle<f64>, SolutionBundle<f64>)> {
    let wide = SecondOrderProblem::<DoubleDouble>::new(prob.p.cast(), prob.q.cast(), prob.f.cast())?;
    let (factors, sol) = solve_with_factors(&wide)?;
    Ok((
        FactorBundle {
            alpha: factors.alpha.cast(),
            beta: factors.beta.cast(),
            h: factors.h.cast(),
            alpha_iterations: factors.alpha_iterations,
        },
        SolutionBundle {
            y1: sol.y1.cast(),
            y2: sol.y2.cast(),
            yp: sol.yp.cast(),
            abel_reference: sol.abel_reference.cast(),
        },
    ))
}

/// Whether the residual should subtract the forcing term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forcing {
    /// `y'' + p y' + q y`, for `y1`, `y2`.
    Homogeneous,
    /// `y'' + p y' + q y - f`, for `yp` and full solutions.
    Inhomogeneous,
}

/// Substitutes `y` into the equation. Two derivatives, so degrees up to
/// `order - 2` are certified.
pub fn residual_second_order<T: Scalar>(
    prob: &SecondOrderProblem<T>,
    y: &Series<T>,
    forcing: Forcing,
    tol: T,
) -> Result<ResidualReport<T>> {
    y.ensure_compatible(&prob.p)?;
    let dy = y.derivative();
    let d2y = dy.derivative();
    let py = prob.p.mul(&dy)?;
    let qy = prob.q.mul(y)?;
    let mut r = d2y.add(&py)?.add(&qy)?;
    let mut terms = vec![&d2y, &py, &qy];
    if forcing == Forcing::Inhomogeneous {
        r = r.sub(&prob.f)?;
        terms.push(&prob.f);
    }
    Ok(ResidualReport::new(&r, &terms, 2, tol))
}

/// `y1 y2' - y1' y2`. Degree `order` is unreliable.
pub fn wronskian<T: Scalar>(y1: &Series<T>, y2: &Series<T>) -> Result<Series<T>> {
    y1.mul(&y2.derivative())?.sub(&y1.derivative().mul(y2)?)
}

/// The first integral of the exact form written as a first-order problem for `y`:
///
/// `y' + (ln(beta/alpha))' y = (c1 + int(alpha beta f)) / (alpha beta)`,
/// with initial value `y(x0) = y0`. Its solution is `y0 y1 + c1 y2 + yp`.
pub fn reduced_first_order<T: Scalar>(
    factors: &FactorBundle<T>,
    f: &Series<T>,
    c1: T,
    y0: T,
) -> Result<FirstOrderProblem<T>> {
    let FactorBundle { alpha, beta, .. } = factors;
    let log_beta_prime = beta.derivative().mul(&beta.reciprocal()?)?;
    let log_alpha_prime = alpha.derivative().mul(&alpha.reciprocal()?)?;
    let coeff = log_beta_prime.sub(&log_alpha_prime)?;
    let inv_ab = alpha.mul(beta)?.reciprocal()?;
    let accumulated = alpha.mul(beta)?.mul(f)?.antiderivative();
    let constant = Series::constant(alpha.base_point(), alpha.order(), c1);
    let rhs = inv_ab.mul(&constant.add(&accumulated)?)?;
    FirstOrderProblem::new(coeff, rhs, y0)
}
