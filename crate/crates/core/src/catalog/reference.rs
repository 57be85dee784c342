//! Closed-form solution bases used as independent references.
//!
//! Every evaluator returns `(value, derivative)` for two linearly independent
//! solutions. None of them touches the series machinery.

use std::sync::Arc;

/// `(value, first derivative)` at a point.
pub type Jet = (f64, f64);

pub type BasisFn = Arc<dyn Fn(f64) -> [Jet; 2] + Send + Sync>;

#[derive(Clone)]
pub struct ReferenceEvaluator {
    pub labels: [String; 2],
    pub eval: BasisFn,
}

impl std::fmt::Debug for ReferenceEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReferenceEvaluator")
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

/// Roots of `a r^2 + b r + c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadraticRoots {
    Distinct(f64, f64),
    Repeated(f64),
    /// `re +- i im`
    Complex { re: f64, im: f64 },
}

pub fn quadratic_roots(a: f64, b: f64, c: f64) -> QuadraticRoots {
    let disc = b * b - 4.0 * a * c;
    if disc > 0.0 {
        let s = disc.sqrt();
        // Avoids cancellation in the smaller root.
        let q = -0.5 * (b + b.signum() * s);
        let (r1, r2) = if q == 0.0 {
            ((-b + s) / (2.0 * a), (-b - s) / (2.0 * a))
        } else {
            (q / a, c / q)
        };
        QuadraticRoots::Distinct(r1.max(r2), r1.min(r2))
    } else if disc == 0.0 {
        QuadraticRoots::Repeated(-b / (2.0 * a))
    } else {
        QuadraticRoots::Complex {
            re: -b / (2.0 * a),
            im: (-disc).sqrt() / (2.0 * a.abs()),
        }
    }
}

/// Basis for `a y'' + b y' + c y = 0`.
pub fn constant_coefficients(a: f64, b: f64, c: f64) -> ReferenceEvaluator {
    match quadratic_roots(a, b, c) {
        QuadraticRoots::Distinct(r1, r2) => ReferenceEvaluator {
            labels: [format!("exp({r1}x)"), format!("exp({r2}x)")],
            eval: Arc::new(move |x| {
                let (e1, e2) = ((r1 * x).exp(), (r2 * x).exp());
                [(e1, r1 * e1), (e2, r2 * e2)]
            }),
        },
        QuadraticRoots::Repeated(r) => ReferenceEvaluator {
            labels: [format!("exp({r}x)"), format!("x exp({r}x)")],
            eval: Arc::new(move |x| {
                let e = (r * x).exp();
                [(e, r * e), (x * e, e + r * x * e)]
            }),
        },
        QuadraticRoots::Complex { re, im } => ReferenceEvaluator {
            labels: [format!("exp({re}x)cos({im}x)"), format!("exp({re}x)sin({im}x)")],
            eval: Arc::new(move |x| {
                let e = (re * x).exp();
                let (s, c) = (im * x).sin_cos();
                [
                    (e * c, e * (re * c - im * s)),
                    (e * s, e * (re * s + im * c)),
                ]
            }),
        },
    }
}

/// Basis for `a x^2 y'' + b x y' + c y = 0` on `x > 0`, from the indicial
/// equation `a r^2 + (b - a) r + c = 0`. The repeated-root (logarithmic) case
/// has no evaluator.
pub fn cauchy_euler(a: f64, b: f64, c: f64) -> Option<ReferenceEvaluator> {
    match quadratic_roots(a, b - a, c) {
        QuadraticRoots::Distinct(r1, r2) => Some(ReferenceEvaluator {
            labels: [format!("x^{r1}"), format!("x^{r2}")],
            eval: Arc::new(move |x| {
                [
                    (x.powf(r1), r1 * x.powf(r1 - 1.0)),
                    (x.powf(r2), r2 * x.powf(r2 - 1.0)),
                ]
            }),
        }),
        QuadraticRoots::Complex { re, im } => Some(ReferenceEvaluator {
            labels: [format!("x^{re}cos({im}ln x)"), format!("x^{re}sin({im}ln x)")],
            eval: Arc::new(move |x| {
                let m = x.powf(re);
                let (s, c) = (im * x.ln()).sin_cos();
                [
                    (m * c, m / x * (re * c - im * s)),
                    (m * s, m / x * (re * s + im * c)),
                ]
            }),
        }),
        QuadraticRoots::Repeated(_) => None,
    }
}

/// `P_l` and `Q_l` by upward recurrence; only for non-negative integer `l`.
pub fn legendre(l: f64) -> Option<ReferenceEvaluator> {
    if l < 0.0 || l.fract() != 0.0 || l > 200.0 {
        return None;
    }
    let n = l as usize;
    Some(ReferenceEvaluator {
        labels: [format!("P_{n}(x)"), format!("Q_{n}(x)")],
        eval: Arc::new(move |x| {
            let (p, dp) = legendre_pair(n, x, (1.0, 0.0), x);
            let q0 = x.atanh();
            let (q, dq) = legendre_pair(n, x, (q0, 1.0 / (1.0 - x * x)), x * q0 - 1.0);
            [(p, dp), (q, dq)]
        }),
    })
}

/// Bonnet recurrence from the degree-0 jet and degree-1 value. Returns the
/// degree-`n` value and its derivative `n (x f_n - f_{n-1}) / (x^2 - 1)`.
fn legendre_pair(n: usize, x: f64, f0: Jet, f1: f64) -> Jet {
    if n == 0 {
        return f0;
    }
    let (mut prev, mut cur) = (f0.0, f1);
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    let d = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, d)
}

/// Kummer `M(a, b, z)` by direct summation together with `dM/dz`.
fn kummer(a: f64, b: f64, z: f64) -> (f64, f64) {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut dterm = a / b;
    let mut dsum = dterm;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        dterm *= (a + 1.0 + kf) / (b + 1.0 + kf) * z / (kf + 1.0);
        sum += term;
        dsum += dterm;
        if term.abs() <= 1e-18 * sum.abs() && dterm.abs() <= 1e-18 * dsum.abs().max(1e-300) {
            break;
        }
    }
    (sum, dsum)
}

/// Even and odd solutions of `y'' - 2x y' + a y = 0` in Kummer form:
/// `M(-a/4, 1/2, x^2)` and `x M((2 - a)/4, 3/2, x^2)`.
pub fn hermite(a: f64) -> ReferenceEvaluator {
    let even = -a / 4.0;
    let odd = (2.0 - a) / 4.0;
    ReferenceEvaluator {
        labels: [format!("M({even},1/2,x^2)"), format!("x M({odd},3/2,x^2)")],
        eval: Arc::new(move |x| {
            let z = x * x;
            let (m1, dm1) = kummer(even, 0.5, z);
            let (m2, dm2) = kummer(odd, 1.5, z);
            [(m1, 2.0 * x * dm1), (x * m2, m2 + 2.0 * z * dm2)]
        }),
    }
}

/// `cos(a asin x)` and `sin(a asin x) / a` (or `asin x` when `a = 0`).
pub fn chebyshev(a: f64) -> ReferenceEvaluator {
    ReferenceEvaluator {
        labels: ["cos(a asin x)".into(), "sin(a asin x)/a".into()],
        eval: Arc::new(move |x| {
            let t = x.asin();
            let w = (1.0 - x * x).sqrt();
            let (s, c) = (a * t).sin_cos();
            let second = if a == 0.0 { (t, 1.0 / w) } else { (s / a, c / w) };
            [(c, -a * s / w), second]
        }),
    }
}
