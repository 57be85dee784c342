//! The classical second-order equations with known solutions: constant
//! coefficients, Cauchy-Euler, Airy, Legendre, Hermite and Chebyshev.
//!
//! Each [`CatalogEntry`] knows how to build its [`SecondOrderProblem`] at any
//! truncation order, carries golden coefficients for the series the solver
//! should produce, and (where a closed form exists) a reference basis that
//! [`verify_entry`] compares against after matching initial conditions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::second_order::SecondOrderProblem;
use crate::{Error, Result, Series};

pub mod reference;
mod verify;

pub use reference::{QuadraticRoots, ReferenceEvaluator};
pub use verify::{verify_entry, CheckRow, VerificationReport, EXACTNESS_TOL, MIN_VERIFY_ORDER};

/// Golden coefficients must match within this multiple of `max(1, |expected|)`.
pub const GOLDEN_TOL: f64 = 1e-12;
/// Reference agreement threshold, absolute for values of magnitude below one.
pub const REFERENCE_TOL: f64 = 1e-8;
/// Residual tolerance for entries whose `p`, `q` are polynomials.
pub const POLYNOMIAL_RESIDUAL_TOL: f64 = 1e-12;
/// Residual tolerance for entries whose `p`, `q` are expanded rational functions.
pub const RATIONAL_RESIDUAL_TOL: f64 = 1e-10;

pub const ENTRY_NAMES: [&str; 6] = [
    "constant",
    "cauchy_euler",
    "airy",
    "legendre",
    "hermite",
    "chebyshev",
];

/// Which series of the solution a golden coefficient refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesRole {
    Alpha,
    Beta,
    H,
    Y1,
    Y2,
    Yp,
}

impl SeriesRole {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesRole::Alpha => "alpha",
            SeriesRole::Beta => "beta",
            SeriesRole::H => "h",
            SeriesRole::Y1 => "y1",
            SeriesRole::Y2 => "y2",
            SeriesRole::Yp => "yp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCoeff {
    pub role: SeriesRole,
    pub degree: usize,
    pub expected: f64,
    /// Where the value comes from.
    pub source: &'static str,
}

impl GoldenCoeff {
    fn new(role: SeriesRole, degree: usize, expected: f64, source: &'static str) -> Self {
        Self {
            role,
            degree,
            expected,
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientClass {
    Polynomial,
    Rational,
}

impl CoefficientClass {
    pub fn residual_tol(self) -> f64 {
        match self {
            CoefficientClass::Polynomial => POLYNOMIAL_RESIDUAL_TOL,
            CoefficientClass::Rational => RATIONAL_RESIDUAL_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Equation {
    Constant { a: f64, b: f64, c: f64 },
    CauchyEuler { a: f64, b: f64, c: f64 },
    Airy,
    Legendre { l: f64 },
    Hermite { a: f64 },
    Chebyshev { a: f64 },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    name: &'static str,
    params: Vec<(&'static str, f64)>,
    equation: Equation,
    base_point: f64,
    interval: (f64, f64),
    forcing: Vec<f64>,
    class: CoefficientClass,
    golden: Vec<GoldenCoeff>,
    reference: Option<ReferenceEvaluator>,
}

/// One row of the catalog listing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ListingRow {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub base_point: f64,
    pub interval: [f64; 2],
}

impl CatalogEntry {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn params(&self) -> &[(&'static str, f64)] {
        &self.params
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    /// Where reference comparisons are sampled; free of singular points.
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn coefficient_class(&self) -> CoefficientClass {
        self.class
    }

    pub fn golden(&self) -> &[GoldenCoeff] {
        &self.golden
    }

    pub fn golden_mut(&mut self) -> &mut Vec<GoldenCoeff> {
        &mut self.golden
    }

    pub fn reference(&self) -> Option<&ReferenceEvaluator> {
        self.reference.as_ref()
    }

    /// Forcing as coefficients of a polynomial in `x - x0`.
    pub fn forcing(&self) -> &[f64] {
        &self.forcing
    }

    pub fn with_forcing(mut self, f: Vec<f64>) -> Self {
        self.forcing = f;
        self
    }

    pub fn listing(&self) -> ListingRow {
        ListingRow {
            name: self.name.to_string(),
            params: self.params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            base_point: self.base_point,
            interval: [self.interval.0, self.interval.1],
        }
    }

    /// `p`, `q` (divided through by the leading coefficient) and `f` as series
    /// about the entry's base point.
    pub fn problem(&self, order: usize) -> Result<SecondOrderProblem<f64>> {
        self.problem_about(self.base_point, order)
    }

    /// As [`problem`](Self::problem), expanded about `x0` instead. Fails with
    /// [`Error::SingularAtBasePoint`](crate::Error::SingularAtBasePoint) where
    /// the leading coefficient vanishes. The forcing is still taken in powers
    /// of `x - x0`.
    pub fn problem_about(&self, x0: f64, order: usize) -> Result<SecondOrderProblem<f64>> {
        let poly = |c: &[f64]| Series::from_poly(x0, order, c);
        let (p, q) = match self.equation {
            Equation::Constant { a, b, c } => (poly(&[b / a])?, poly(&[c / a])?),
            Equation::CauchyEuler { a, b, c } => {
                let inv_x = Series::variable(x0, order).reciprocal()?;
                let inv_x2 = inv_x.mul(&inv_x)?;
                (inv_x.scale(b / a)?, inv_x2.scale(c / a)?)
            }
            Equation::Airy => (poly(&[])?, poly(&[0.0, -1.0])?),
            Equation::Legendre { l } => {
                let w = one_minus_x_squared_inv(x0, order)?;
                let x = Series::variable(x0, order);
                (x.mul(&w)?.scale(-2.0)?, w.scale(l * (l + 1.0))?)
            }
            Equation::Hermite { a } => {
                let x = Series::variable(x0, order);
                (x.scale(-2.0)?, poly(&[a])?)
            }
            Equation::Chebyshev { a } => {
                let w = one_minus_x_squared_inv(x0, order)?;
                let x = Series::variable(x0, order);
                (x.mul(&w)?.neg(), w.scale(a * a)?)
            }
        };
        SecondOrderProblem::new(p, q, poly(&self.forcing)?)
    }
}

/// `1 / (1 - x^2)` expanded about `x0`.
fn one_minus_x_squared_inv(x0: f64, order: usize) -> Result<Series<f64>> {
    let x = Series::variable(x0, order);
    Series::one(x0, order).sub(&x.mul(&x)?)?.reciprocal()
}

/// `y'' + (b/a) y' + (c/a) y = f` about 0, sampled on `[0, 1]`. The forcing
/// applies to the normalized equation.
pub fn make_constant_coefficients(a: f64, b: f64, c: f64, f: Vec<f64>) -> Result<CatalogEntry> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("leading coefficient a = {a}")));
    }
    // h is the constant (b^2 - 4ac) / 4a^2 and alpha = cosh(sqrt(h) x).
    let h = (b * b - 4.0 * a * c) / (4.0 * a * a);
    let golden = vec![
        GoldenCoeff::new(SeriesRole::H, 0, h, "h = (b^2 - 4ac)/4a^2, constant"),
        GoldenCoeff::new(SeriesRole::Alpha, 2, h / 2.0, "alpha = cosh(sqrt(h) x), x^2 term"),
        GoldenCoeff::new(SeriesRole::Alpha, 4, h * h / 24.0, "alpha = cosh(sqrt(h) x), x^4 term"),
        GoldenCoeff::new(SeriesRole::Beta, 1, b / (2.0 * a), "beta = exp(b x / 2a), x term"),
    ];
    Ok(CatalogEntry {
        name: "constant",
        params: vec![("a", a), ("b", b), ("c", c)],
        equation: Equation::Constant { a, b, c },
        base_point: 0.0,
        interval: (0.0, 1.0),
        forcing: f,
        class: CoefficientClass::Polynomial,
        golden,
        reference: Some(reference::constant_coefficients(a, b, c)),
    })
}

/// `a x^2 y'' + b x y' + c y = 0` expanded about the regular point `x = 1`,
/// normalized to `y'' + b/(a x) y' + c/(a x^2) y = f`.
///
/// The repeated-root case `(b - a)^2 = 4ac` has no reference basis and is
/// checked through residuals only.
pub fn make_cauchy_euler(a: f64, b: f64, c: f64, f: Vec<f64>) -> Result<CatalogEntry> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("leading coefficient a = {a}")));
    }
    // beta = x^{b/2a}, so its first two Taylor coefficients about 1 are fixed.
    let golden = vec![
        GoldenCoeff::new(SeriesRole::Beta, 1, b / (2.0 * a), "beta = x^(b/2a) about x = 1"),
        GoldenCoeff::new(
            SeriesRole::Beta,
            2,
            b / (2.0 * a) * (b / (2.0 * a) - 1.0) / 2.0,
            "beta = x^(b/2a) about x = 1",
        ),
    ];
    Ok(CatalogEntry {
        name: "cauchy_euler",
        params: vec![("a", a), ("b", b), ("c", c)],
        equation: Equation::CauchyEuler { a, b, c },
        base_point: 1.0,
        interval: (0.7, 1.3),
        forcing: f,
        class: CoefficientClass::Rational,
        golden,
        reference: reference::cauchy_euler(a, b, c),
    })
}

/// `y'' - x y = f`.
pub fn make_airy(f: Vec<f64>) -> CatalogEntry {
    use SeriesRole::*;
    let golden = vec![
        GoldenCoeff::new(H, 1, 1.0, "h = x"),
        GoldenCoeff::new(Beta, 0, 1.0, "beta = 1"),
        GoldenCoeff::new(Alpha, 3, 1.0 / 6.0, "alpha recursion, x^3 term"),
        GoldenCoeff::new(Alpha, 6, 1.0 / 180.0, "alpha recursion, x^6 term"),
        GoldenCoeff::new(Alpha, 9, 1.0 / 12960.0, "alpha recursion, x^9 term"),
        GoldenCoeff::new(Y1, 3, 1.0 / 6.0, "y1 = alpha since beta = 1"),
        GoldenCoeff::new(Y1, 6, 1.0 / 180.0, "y1 = alpha since beta = 1"),
        GoldenCoeff::new(Y1, 9, 1.0 / 12960.0, "y1 = alpha since beta = 1"),
        GoldenCoeff::new(Y2, 1, 1.0, "odd Airy family, x term"),
        GoldenCoeff::new(Y2, 4, 1.0 / 12.0, "odd Airy family, x^4 term"),
        GoldenCoeff::new(Y2, 7, 1.0 / 504.0, "odd Airy family, x^7 term"),
        GoldenCoeff::new(Y2, 10, 1.0 / 45360.0, "odd Airy family, x^10 term"),
    ];
    CatalogEntry {
        name: "airy",
        params: vec![],
        equation: Equation::Airy,
        base_point: 0.0,
        interval: (-1.0, 1.0),
        forcing: f,
        class: CoefficientClass::Polynomial,
        golden,
        reference: None,
    }
}

/// `y'' - 2x/(1-x^2) y' + l(l+1)/(1-x^2) y = f` about 0.
pub fn make_legendre(l: f64, f: Vec<f64>) -> Result<CatalogEntry> {
    use SeriesRole::*;
    if !l.is_finite() {
        return Err(Error::InvalidParameter(format!("l = {l}")));
    }
    let ll = l * (l + 1.0);
    let golden = vec![
        GoldenCoeff::new(Beta, 2, -0.5, "beta = sqrt(1 - x^2)"),
        GoldenCoeff::new(Beta, 4, -0.125, "beta = sqrt(1 - x^2)"),
        GoldenCoeff::new(Alpha, 2, -(ll + 1.0) / 2.0, "alpha recursion, x^2 term"),
        GoldenCoeff::new(Y1, 2, -ll / 2.0, "even Legendre series, x^2 term"),
        GoldenCoeff::new(
            Y1,
            4,
            (l - 2.0) * l * (l + 1.0) * (l + 3.0) / 24.0,
            "even Legendre series, x^4 term",
        ),
        // The three-term recurrence gives (1-l)(2+l)/6 here, not its negative.
        GoldenCoeff::new(Y2, 3, (1.0 - l) * (2.0 + l) / 6.0, "odd Legendre series, x^3 term"),
        GoldenCoeff::new(
            Y2,
            5,
            (l - 3.0) * (l - 1.0) * (l + 2.0) * (l + 4.0) / 120.0,
            "odd Legendre series, x^5 term",
        ),
    ];
    Ok(CatalogEntry {
        name: "legendre",
        params: vec![("l", l)],
        equation: Equation::Legendre { l },
        base_point: 0.0,
        interval: (-0.5, 0.5),
        forcing: f,
        class: CoefficientClass::Rational,
        golden,
        reference: reference::legendre(l),
    })
}

/// `y'' - 2x y' + a y = f`.
pub fn make_hermite(a: f64, f: Vec<f64>) -> Result<CatalogEntry> {
    use SeriesRole::*;
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a = {a}")));
    }
    let golden = vec![
        GoldenCoeff::new(H, 0, -a - 1.0, "h = x^2 - a - 1"),
        GoldenCoeff::new(H, 2, 1.0, "h = x^2 - a - 1"),
        GoldenCoeff::new(Beta, 2, -0.5, "beta = exp(-x^2/2)"),
        GoldenCoeff::new(Alpha, 2, -(1.0 + a) / 2.0, "alpha recursion, x^2 term"),
        GoldenCoeff::new(Alpha, 4, (a * a + 2.0 * a + 3.0) / 24.0, "alpha recursion, x^4 term"),
        GoldenCoeff::new(Y1, 2, -a / 2.0, "even Hermite series, x^2 term"),
        GoldenCoeff::new(Y1, 4, -(4.0 - a) * a / 24.0, "even Hermite series, x^4 term"),
        GoldenCoeff::new(Y2, 3, (2.0 - a) / 6.0, "odd Hermite series, x^3 term"),
        GoldenCoeff::new(Y2, 5, (6.0 - a) * (2.0 - a) / 120.0, "odd Hermite series, x^5 term"),
    ];
    Ok(CatalogEntry {
        name: "hermite",
        params: vec![("a", a)],
        equation: Equation::Hermite { a },
        base_point: 0.0,
        interval: (-0.5, 0.5),
        forcing: f,
        class: CoefficientClass::Polynomial,
        golden,
        reference: Some(reference::hermite(a)),
    })
}

/// Chebyshev's equation in standard form,
/// `y'' - x/(1-x^2) y' + a^2/(1-x^2) y = f`, about 0.
pub fn make_chebyshev(a: f64, f: Vec<f64>) -> Result<CatalogEntry> {
    use SeriesRole::*;
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a = {a}")));
    }
    let a2 = a * a;
    let golden = vec![
        GoldenCoeff::new(Beta, 2, -0.25, "beta = (1 - x^2)^(1/4)"),
        GoldenCoeff::new(Alpha, 2, -(a2 / 2.0 + 0.25), "alpha recursion, x^2 term"),
        GoldenCoeff::new(
            Alpha,
            4,
            a2 * a2 / 24.0 - a2 / 24.0 - 3.0 / 32.0,
            "alpha recursion, x^4 term",
        ),
        GoldenCoeff::new(Y1, 2, -a2 / 2.0, "cos(a asin x), x^2 term"),
        GoldenCoeff::new(Y1, 4, (a2 * a2 - 4.0 * a2) / 24.0, "cos(a asin x), x^4 term"),
        GoldenCoeff::new(Y2, 3, (1.0 - a2) / 6.0, "sin(a asin x)/a, x^3 term"),
        GoldenCoeff::new(
            Y2,
            5,
            (9.0 - a2) * (1.0 - a2) / 120.0,
            "sin(a asin x)/a, x^5 term",
        ),
    ];
    Ok(CatalogEntry {
        name: "chebyshev",
        params: vec![("a", a)],
        equation: Equation::Chebyshev { a },
        base_point: 0.0,
        interval: (-0.5, 0.5),
        forcing: f,
        class: CoefficientClass::Rational,
        golden,
        reference: Some(reference::chebyshev(a)),
    })
}

fn param(params: &[(String, f64)], key: &str, default: f64) -> f64 {
    params
        .iter()
        .rev()
        .find(|(k, _)| k == key)
        .map_or(default, |&(_, v)| v)
}

/// Builds an entry by name. Missing parameters take the defaults used by
/// [`all_entries`]; unknown parameter names are rejected.
pub fn entry_by_name(name: &str, params: &[(String, f64)]) -> Result<CatalogEntry> {
    let allowed: &[&str] = match name {
        "constant" | "cauchy_euler" => &["a", "b", "c"],
        "airy" => &[],
        "legendre" => &["l"],
        "hermite" | "chebyshev" => &["a"],
        _ => return Err(Error::InvalidParameter(format!("unknown catalog entry '{name}'"))),
    };
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!(
            "entry '{name}' has no parameter '{k}'"
        )));
    }
    let p = |k, d| param(params, k, d);
    match name {
        "constant" => make_constant_coefficients(p("a", 1.0), p("b", 3.0), p("c", 2.0), vec![2.0]),
        "cauchy_euler" => make_cauchy_euler(p("a", 1.0), p("b", -1.0), p("c", -3.0), vec![1.0]),
        "airy" => Ok(make_airy(vec![1.0])),
        "legendre" => make_legendre(p("l", 3.0), vec![1.0]),
        "hermite" => make_hermite(p("a", 3.0), vec![1.0]),
        "chebyshev" => make_chebyshev(p("a", 2.5), vec![1.0]),
        _ => unreachable!("name checked above"),
    }
}

/// The six entries with their default parameters.
pub fn all_entries() -> Vec<CatalogEntry> {
    ENTRY_NAMES
        .iter()
        .map(|n| entry_by_name(n, &[]).expect("defaults are valid"))
        .collect()
}

pub fn listing() -> Vec<ListingRow> {
    all_entries().iter().map(CatalogEntry::listing).collect()
}
