//! First-order linear equations `y' + p(x) y = f(x)`.
//!
//! Two independent solvers are provided. [`solve_integrating_factor`] is the
//! closed form `y = mu^-1 (C1 + int(mu f))` with `mu = exp(int p)`.
//! [`solve_recursive`] never forms `mu`: it treats `p y` as part of the forcing
//! and iterates the integral equation `y = C1 + int(f - p y)` until the
//! coefficients stop changing. At a fixed truncation order the two must agree.

use crate::{Error, ResidualReport, Result, Scalar, Series};

/// `y' + p y = f` with `y(x0) = c1`, where `x0` is the common base point.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderProblem<T> {
    p: Series<T>,
    f: Series<T>,
    c1: T,
}

impl<T: Scalar> FirstOrderProblem<T> {
    pub fn new(p: Series<T>, f: Series<T>, c1: T) -> Result<Self> {
        p.ensure_compatible(&f)?;
        if !c1.is_finite() {
            return Err(Error::InvalidParameter(format!("C1 = {c1} is not finite")));
        }
        Ok(Self { p, f, c1 })
    }

    pub fn p(&self) -> &Series<T> {
        &self.p
    }

    pub fn f(&self) -> &Series<T> {
        &self.f
    }

    pub fn c1(&self) -> T {
        self.c1
    }

    pub fn base_point(&self) -> T {
        self.p.base_point()
    }

    pub fn order(&self) -> usize {
        self.p.order()
    }

    fn initial(&self) -> Series<T> {
        Series::constant(self.base_point(), self.order(), self.c1)
    }
}

/// Closed-form solution through the integrating factor `exp(int p)`.
pub fn solve_integrating_factor<T: Scalar>(prob: &FirstOrderProblem<T>) -> Result<Series<T>> {
    let int_p = prob.p.antiderivative();
    let mu = int_p.exp()?;
    let mu_inv = int_p.neg().exp()?;
    let forced = mu.mul(&prob.f)?.antiderivative();
    mu_inv.mul(&prob.initial().add(&forced)?)
}

/// One step of the integral equation: `C1 + int(f - p y)`.
fn recursion_step<T: Scalar>(prob: &FirstOrderProblem<T>, y: &Series<T>) -> Result<Series<T>> {
    let integrand = prob.f.sub(&prob.p.mul(y)?)?;
    prob.initial().add(&integrand.antiderivative())
}

/// Fixed-point iteration of `y = C1 + int(f - p y)` from `y = C1`.
///
/// Returns the first iterate that is bit-identical to its predecessor and the
/// number of iterations performed. Degree `k` is final after `k` iterations,
/// so `order + 1` iterations always suffice.
pub fn solve_recursive<T: Scalar>(
    prob: &FirstOrderProblem<T>,
    max_iters: usize,
) -> Result<(Series<T>, usize)> {
    let mut y = prob.initial();
    for iter in 1..=max_iters {
        let next = recursion_step(prob, &y)?;
        if next == y {
            return Ok((next, iter));
        }
        y = next;
    }
    Err(Error::IterationLimit { max_iters })
}

/// The first `count` iterates of [`solve_recursive`], starting with `y = C1`
/// itself at index 0.
pub fn recursive_iterates<T: Scalar>(prob: &FirstOrderProblem<T>, count: usize) -> Result<Vec<Series<T>>> {
    let mut out = Vec::with_capacity(count + 1);
    out.push(prob.initial());
    for _ in 0..count {
        let next = recursion_step(prob, out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Substitutes `y` into `y' + p y - f`. One derivative, so the certified
/// window ends at `order - 1`.
pub fn residual_first_order<T: Scalar>(
    prob: &FirstOrderProblem<T>,
    y: &Series<T>,
    tol: T,
) -> Result<ResidualReport<T>> {
    y.ensure_compatible(&prob.p)?;
    let dy = y.derivative();
    let py = prob.p.mul(y)?;
    let r = dy.add(&py)?.sub(&prob.f)?;
    Ok(ResidualReport::new(&r, &[&dy, &py, &prob.f], 1, tol))
}

/// Outcome of [`nested_integral_identity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct NestedIntegralCheck<T> {
    pub holds: bool,
    /// Last degree compared, `order - i`.
    pub window: usize,
    pub max_abs_diff: T,
    pub scale: T,
}

/// Checks that the `i`-fold nested integral
/// `J_i = int p(t1) int p(t2) ... int p(ti)` with ordered limits equals
/// `(int p)^i / i!`. `J_i` comes from the recurrence `J_0 = 1`,
/// `J_m = int(p J_{m-1})`; the right side from a plain power.
pub fn nested_integral_identity_check<T: Scalar>(p: &Series<T>, i: usize) -> Result<NestedIntegralCheck<T>> {
    let order = p.order();
    if i == 0 || i > order {
        return Err(Error::InvalidParameter(format!(
            "nesting depth {i} outside 1..={order}"
        )));
    }
    let one = Series::one(p.base_point(), order);
    let mut nested = one.clone();
    for _ in 0..i {
        nested = p.mul(&nested)?.antiderivative();
    }

    let int_p = p.antiderivative();
    let mut power = one;
    let mut factorial = T::one();
    for m in 1..=i {
        power = power.mul(&int_p)?;
        factorial = factorial * T::from_usize_lossy(m);
    }
    let closed = power.scale(T::one() / factorial)?;

    let window = order - i;
    let cmp = nested.approx_eq(&closed, T::from_f64_lossy(1e-10), window)?;
    Ok(NestedIntegralCheck {
        holds: cmp.equal,
        window,
        max_abs_diff: cmp.max_abs_diff,
        scale: cmp.scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(c: &[f64], order: usize) -> Series<f64> {
        Series::from_poly(0.0, order, c).unwrap()
    }

    fn problem(p: &[f64], f: &[f64], c1: f64, order: usize) -> FirstOrderProblem<f64> {
        FirstOrderProblem::new(series(p, order), series(f, order), c1).unwrap()
    }

    /// Taylor coefficients of `exp(rate x)`.
    fn exp_coeffs(rate: f64, order: usize) -> Vec<f64> {
        let mut c = vec![1.0];
        for k in 1..=order {
            let prev = c[k - 1];
            c.push(prev * rate / k as f64);
        }
        c
    }

    #[test]
    fn problem_rejects_mismatch() {
        let p = series(&[1.0], 4);
        let f = series(&[1.0], 5);
        assert!(FirstOrderProblem::new(p, f, 0.0).is_err());
    }

    #[test]
    fn integrating_factor_decay() {
        let y = solve_integrating_factor(&problem(&[1.0], &[], 1.0, 10)).unwrap();
        let expected = series(&exp_coeffs(-1.0, 10), 10);
        assert!(y.approx_eq(&expected, 1e-15, 10).unwrap().equal);
    }

    #[test]
    fn integrating_factor_constant() {
        let y = solve_integrating_factor(&problem(&[], &[], 5.0, 6)).unwrap();
        assert_eq!(y, Series::constant(0.0, 6, 5.0));
    }

    #[test]
    fn integrating_factor_forced() {
        // y = 1 - e^{-x}; substitution: e^{-x} + 1 - e^{-x} = 1.
        let prob = problem(&[1.0], &[1.0], 0.0, 12);
        let y = solve_integrating_factor(&prob).unwrap();
        let mut expected: Vec<f64> = exp_coeffs(-1.0, 12).iter().map(|c| -c).collect();
        expected[0] += 1.0;
        assert!(y.approx_eq(&series(&expected, 12), 1e-15, 12).unwrap().equal);
        assert!(residual_first_order(&prob, &y, 1e-14).unwrap().passed());
    }

    #[test]
    fn recursion_trivial_fixed_point() {
        let (y, iters) = solve_recursive(&problem(&[], &[], 3.0, 8), 9).unwrap();
        assert_eq!(y, Series::constant(0.0, 8, 3.0));
        assert_eq!(iters, 1);
    }

    #[test]
    fn recursion_matches_closed_form_decay() {
        let prob = problem(&[1.0], &[], 1.0, 8);
        let (y, iters) = solve_recursive(&prob, 9).unwrap();
        assert!(iters <= 9);
        let closed = solve_integrating_factor(&prob).unwrap();
        assert!(y.approx_eq(&closed, 1e-14, 8).unwrap().equal);
    }

    #[test]
    fn recursion_reports_iteration_limit() {
        let prob = problem(&[1.0], &[], 1.0, 8);
        assert_eq!(
            solve_recursive(&prob, 3),
            Err(Error::IterationLimit { max_iters: 3 })
        );
    }

    #[test]
    fn residual_trivial_and_corrupted() {
        let prob = problem(&[], &[], 2.0, 6);
        let report = residual_first_order(&prob, &Series::constant(0.0, 6, 2.0), 1e-12).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert_eq!(report.verified_degree, 5);

        let prob = problem(&[1.0, 0.5], &[0.0, 1.0], 1.0, 10);
        let y = solve_integrating_factor(&prob).unwrap();
        let mut c = y.coeffs().to_vec();
        c[2] += 1.0;
        let bad = Series::new(0.0, c).unwrap();
        let report = residual_first_order(&prob, &bad, 1e-12).unwrap();
        assert!(report.max_residual >= 0.5);
        assert!(!report.passed());
    }

    #[test]
    fn nested_integral_examples() {
        let p = series(&[0.3, -1.2, 0.7], 20);
        let check = nested_integral_identity_check(&p, 1).unwrap();
        assert!(check.holds);
        assert_eq!(check.max_abs_diff, 0.0);

        // p = 1: J_3 = x^3 / 6.
        let one = series(&[1.0], 9);
        assert!(nested_integral_identity_check(&one, 3).unwrap().holds);

        assert!(nested_integral_identity_check(&one, 0).is_err());
    }

    #[test]
    fn iterates_freeze_one_degree_per_step() {
        let prob = problem(&[0.5, -1.0, 0.25], &[1.0, 2.0], -1.0, 16);
        let its = recursive_iterates(&prob, 18).unwrap();
        let last = its.last().unwrap();
        for (k, it) in its.iter().enumerate() {
            let frozen = k.min(16);
            assert_eq!(&it.coeffs()[..=frozen], &last.coeffs()[..=frozen], "iterate {k}");
        }
    }
}
