use serde::Serialize;

use super::{CatalogEntry, SeriesRole, GOLDEN_TOL, REFERENCE_TOL};
use crate::second_order::{
    alpha_iteration_bound, residual_second_order, solve_extended, wronskian, FactorBundle,
    Forcing, SecondOrderProblem, SolutionBundle,
};
use crate::{ResidualReport, Result, Series};

/// Exactness conditions on the integrating factors are held to this, relative
/// to the coefficient scale of the terms involved.
pub const EXACTNESS_TOL: f64 = 1e-12;

/// Smallest order the golden data is meaningful at.
pub const MIN_VERIFY_ORDER: usize = 12;

const SAMPLE_POINTS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    /// Measured in the same units as `threshold`.
    pub worst_error: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(check: impl Into<String>, worst_error: f64, threshold: f64) -> Self {
        Self {
            check: check.into(),
            worst_error,
            threshold,
            // NaN compares false and fails the row.
            pass: worst_error <= threshold,
        }
    }

    fn failed(check: impl Into<String>, why: impl std::fmt::Display) -> Self {
        Self {
            check: format!("{}: {why}", check.into()),
            worst_error: f64::INFINITY,
            threshold: 0.0,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub order: usize,
    pub rows: Vec<CheckRow>,
    #[serde(skip)]
    pub residuals: Vec<(String, ResidualReport<f64>)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, check: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.check == check)
    }
}

/// Solves the entry at `order` and checks, one row each: golden coefficients,
/// exactness of `beta` and `alpha`, the `alpha` iteration bound, the
/// initial-value normalization, residuals of `y1`, `y2`, `yp` against `tol`,
/// Abel's identity against `tol`, and agreement with the reference basis.
///
/// Failures, including solver errors, are reported as rows.
pub fn verify_entry(entry: &CatalogEntry, order: usize, tol: f64) -> VerificationReport {
    let mut report = VerificationReport {
        name: entry.name().to_string(),
        order,
        rows: Vec::new(),
        residuals: Vec::new(),
    };
    if order < MIN_VERIFY_ORDER {
        report
            .rows
            .push(CheckRow::failed("order", format!("{order} is below {MIN_VERIFY_ORDER}")));
        return report;
    }
    let solved = entry
        .problem(order)
        .and_then(|prob| solve_extended(&prob).map(|(f, s)| (prob, f, s)));
    let (prob, factors, sol) = match solved {
        Ok(v) => v,
        Err(e) => {
            report.rows.push(CheckRow::failed("solve", e));
            return report;
        }
    };

    golden_rows(entry, &factors, &sol, &mut report.rows);
    if let Err(e) = exactness_rows(&prob, &factors, &mut report.rows) {
        report.rows.push(CheckRow::failed("exactness", e));
    }
    report.rows.push(CheckRow::new(
        "alpha_iterations",
        factors.alpha_iterations as f64,
        alpha_iteration_bound(order) as f64,
    ));
    report.rows.push(normalization_row(&sol));
    if let Err(e) = residual_rows(&prob, &sol, tol, &mut report) {
        report.rows.push(CheckRow::failed("residual", e));
    }
    match abel_row(&sol, order, tol) {
        Ok(row) => report.rows.push(row),
        Err(e) => report.rows.push(CheckRow::failed("abel", e)),
    }
    reference_rows(entry, &sol, &mut report.rows);
    report
}

fn golden_rows(
    entry: &CatalogEntry,
    factors: &FactorBundle<f64>,
    sol: &SolutionBundle<f64>,
    rows: &mut Vec<CheckRow>,
) {
    for g in entry.golden() {
        let series = match g.role {
            SeriesRole::Alpha => &factors.alpha,
            SeriesRole::Beta => &factors.beta,
            SeriesRole::H => &factors.h,
            SeriesRole::Y1 => &sol.y1,
            SeriesRole::Y2 => &sol.y2,
            SeriesRole::Yp => &sol.yp,
        };
        let label = format!("golden:{}[{}]", g.role.as_str(), g.degree);
        if g.degree > series.order() {
            rows.push(CheckRow::failed(label, "degree above truncation order"));
            continue;
        }
        let err = (series.coeff(g.degree) - g.expected).abs();
        rows.push(CheckRow::new(label, err, GOLDEN_TOL * g.expected.abs().max(1.0)));
    }
}

/// Max of `|r_k|` for `k <= up_to`, divided by the largest term coefficient.
fn scaled_defect(r: &Series<f64>, terms: &[&Series<f64>], up_to: usize) -> f64 {
    let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.max_abs(up_to)));
    r.max_abs(up_to) / scale
}

fn exactness_rows(
    prob: &SecondOrderProblem<f64>,
    factors: &FactorBundle<f64>,
    rows: &mut Vec<CheckRow>,
) -> Result<()> {
    let n = prob.order();
    let dbeta = factors.beta.derivative();
    let rhs = factors.beta.mul(&prob.p().scale(0.5)?)?;
    let err = scaled_defect(&dbeta.sub(&rhs)?, &[&dbeta, &rhs], n - 1);
    rows.push(CheckRow::new("exactness:beta", err, EXACTNESS_TOL));

    let d2alpha = factors.alpha.derivative().derivative();
    let rhs = factors.h.mul(&factors.alpha)?;
    let err = scaled_defect(&d2alpha.sub(&rhs)?, &[&d2alpha, &rhs], n - 2);
    rows.push(CheckRow::new("exactness:alpha", err, EXACTNESS_TOL));
    Ok(())
}

fn normalization_row(sol: &SolutionBundle<f64>) -> CheckRow {
    let deviations = [
        sol.y1.coeff(0) - 1.0,
        sol.y2.coeff(0),
        sol.y2.coeff(1) - 1.0,
        sol.yp.coeff(0),
        sol.yp.coeff(1),
    ];
    let worst = deviations.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    CheckRow::new("normalization", worst, 0.0)
}

fn residual_rows(
    prob: &SecondOrderProblem<f64>,
    sol: &SolutionBundle<f64>,
    tol: f64,
    report: &mut VerificationReport,
) -> Result<()> {
    for (label, y, forcing) in [
        ("y1", &sol.y1, Forcing::Homogeneous),
        ("y2", &sol.y2, Forcing::Homogeneous),
        ("yp", &sol.yp, Forcing::Inhomogeneous),
    ] {
        let r = residual_second_order(prob, y, forcing, tol)?;
        report
            .rows
            .push(CheckRow::new(format!("residual:{label}"), r.relative_residual(), tol));
        report.residuals.push((label.to_string(), r));
    }
    Ok(())
}

fn abel_row(sol: &SolutionBundle<f64>, order: usize, tol: f64) -> Result<CheckRow> {
    let w = wronskian(&sol.y1, &sol.y2)?;
    let cmp = w.approx_eq(&sol.abel_reference, tol, order - 2)?;
    Ok(CheckRow::new("abel", cmp.max_abs_diff / cmp.scale, tol))
}

/// Coefficients `(c1, c2)` with `c1 y1 + c2 y2` matching value `v` and slope
/// `d` at the base point.
pub(crate) fn match_initial_conditions(sol: &SolutionBundle<f64>, v: f64, d: f64) -> Option<(f64, f64)> {
    let (a, b) = (sol.y1.coeff(0), sol.y2.coeff(0));
    let (c, e) = (sol.y1.coeff(1), sol.y2.coeff(1));
    let det = a * e - b * c;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some(((v * e - b * d) / det, (a * d - c * v) / det))
}

pub(crate) fn sample_points(interval: (f64, f64)) -> impl Iterator<Item = f64> {
    let (lo, hi) = interval;
    (0..SAMPLE_POINTS).map(move |i| lo + (hi - lo) * i as f64 / (SAMPLE_POINTS - 1) as f64)
}

fn reference_rows(entry: &CatalogEntry, sol: &SolutionBundle<f64>, rows: &mut Vec<CheckRow>) {
    let Some(reference) = entry.reference() else {
        return;
    };
    let x0 = entry.base_point();
    let at_base = (reference.eval)(x0);
    for (b, label) in reference.labels.iter().enumerate() {
        let check = format!("reference:{label}");
        let (v, d) = at_base[b];
        let Some((c1, c2)) = match_initial_conditions(sol, v, d) else {
            rows.push(CheckRow::failed(check, "singular initial-value system"));
            continue;
        };
        let worst = sample_points(entry.interval())
            .map(|x| {
                let exact = (reference.eval)(x)[b].0;
                let approx = c1 * sol.y1.eval(x) + c2 * sol.y2.eval(x);
                (approx - exact).abs() / exact.abs().max(1.0)
            })
            .fold(0.0f64, f64::max);
        rows.push(CheckRow::new(check, worst, REFERENCE_TOL));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{entry_by_name, make_airy};

    #[test]
    fn airy_passes_everything() {
        let report = verify_entry(&make_airy(vec![]), 24, 1e-10);
        assert!(report.passed(), "{:#?}", report.rows);
        assert!(report.row("golden:alpha[9]").is_some());
    }

    #[test]
    fn low_order_is_a_failed_row() {
        let report = verify_entry(&make_airy(vec![]), 8, 1e-10);
        assert!(!report.passed());
        assert_eq!(report.rows.len(), 1);
    }

    #[test]
    fn corrupted_golden_fails() {
        let mut entry = entry_by_name("hermite", &[]).unwrap();
        entry.golden_mut()[3].expected += 1e-9;
        let report = verify_entry(&entry, 16, 1e-10);
        assert!(!report.passed());
        let failed: Vec<_> = report.rows.iter().filter(|r| !r.pass).collect();
        assert_eq!(failed.len(), 1, "{failed:#?}");
    }

    #[test]
    fn sample_grid() {
        let pts: Vec<f64> = sample_points((0.0, 1.0)).collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[8], 1.0);
        assert_eq!(pts[4], 0.5);
    }
}
