use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, Scalar};

/// Truncated power series `sum_k c_k (x - x0)^k` for `k = 0..=order`.
///
/// The order is fixed at construction; every operation returns a series of the
/// same order and discards anything above it. Binary operations require both
/// operands to share base point and order.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    base_point: T,
    coeffs: Vec<T>,
}

/// Outcome of [`Series::approx_eq`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison<T> {
    pub equal: bool,
    /// Lowest degree whose difference exceeded the threshold.
    pub first_failing_degree: Option<usize>,
    /// Largest absolute coefficient difference inside the window.
    pub max_abs_diff: T,
    /// `max(1, max|a_i|, max|b_i|)`, the scale the tolerance is relative to.
    pub scale: T,
}

impl<T: Scalar> Series<T> {
    pub fn new(base_point: T, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        if !base_point.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "base point {base_point} is not finite"
            )));
        }
        Self::checked(base_point, coeffs)
    }

    /// Pads with zeros or truncates `coeffs` so that the result has the given order.
    pub fn from_poly(base_point: T, order: usize, coeffs: &[T]) -> Result<Self> {
        let mut c = vec![T::zero(); order + 1];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            *dst = src;
        }
        Self::new(base_point, c)
    }

    pub fn zero(base_point: T, order: usize) -> Self {
        Self {
            base_point,
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn constant(base_point: T, order: usize, value: T) -> Self {
        let mut s = Self::zero(base_point, order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(base_point: T, order: usize) -> Self {
        Self::constant(base_point, order, T::one())
    }

    /// The independent variable `x` itself, i.e. `x0 + (x - x0)`.
    pub fn variable(base_point: T, order: usize) -> Self {
        let mut s = Self::constant(base_point, order, base_point);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    fn checked(base_point: T, coeffs: Vec<T>) -> Result<Self> {
        if let Some(degree) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { degree });
        }
        Ok(Self { base_point, coeffs })
    }

    /// Same shape as `self`, new coefficients; fails if any is non-finite.
    fn with_coeffs(&self, coeffs: Vec<T>) -> Result<Self> {
        debug_assert_eq!(coeffs.len(), self.coeffs.len());
        Self::checked(self.base_point, coeffs)
    }

    pub fn base_point(&self) -> T {
        self.base_point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// The same series over another scalar type, each coefficient converted
    /// through `f64`.
    pub fn cast<U: Scalar>(&self) -> Series<U> {
        Series {
            base_point: U::from_f64_lossy(self.base_point.to_f64_lossy()),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| U::from_f64_lossy(c.to_f64_lossy()))
                .collect(),
        }
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `(x - x0)^k`; zero above the order.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn is_compatible(&self, other: &Self) -> bool {
        self.base_point == other.base_point && self.coeffs.len() == other.coeffs.len()
    }

    pub fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::Mismatch {
                left_base: self.base_point.to_f64_lossy(),
                left_order: self.order(),
                right_base: other.base_point.to_f64_lossy(),
                right_order: other.order(),
            })
        }
    }

    /// Largest coefficient magnitude over degrees `0..=up_to`.
    pub fn max_abs(&self, up_to: usize) -> T {
        self.coeffs
            .iter()
            .take(up_to + 1)
            .fold(T::zero(), |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let c = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        self.with_coeffs(c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let c = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a - b)
            .collect();
        self.with_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        Self {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: T) -> Result<Self> {
        self.with_coeffs(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let n = self.coeffs.len();
        let mut c = vec![T::zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        self.with_coeffs(c)
    }

    /// Term-wise derivative. The top coefficient becomes zero, so degree
    /// `order` of the result carries no information.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut c = vec![T::zero(); n];
        for k in 0..n - 1 {
            c[k] = T::from_usize_lossy(k + 1) * self.coeffs[k + 1];
        }
        Self {
            base_point: self.base_point,
            coeffs: c,
        }
    }

    /// Definite integral from the base point. The input's top coefficient is
    /// dropped and the result vanishes at the base point.
    pub fn antiderivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut c = vec![T::zero(); n];
        for k in 1..n {
            c[k] = self.coeffs[k - 1] / T::from_usize_lossy(k);
        }
        Self {
            base_point: self.base_point,
            coeffs: c,
        }
    }

    /// `exp(s)` via the recurrence obtained from `e' = s' e`.
    pub fn exp(&self) -> Result<Self> {
        let n = self.coeffs.len();
        let e0 = self.coeffs[0].exp();
        if !e0.is_finite() {
            return Err(Error::NumericRange(format!(
                "exp({}) overflows",
                self.coeffs[0]
            )));
        }
        let mut e = vec![T::zero(); n];
        e[0] = e0;
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_usize_lossy(j) * self.coeffs[j] * e[k - j];
            }
            e[k] = acc / T::from_usize_lossy(k);
        }
        self.with_coeffs(e)
            .map_err(|_| Error::NumericRange("exp series overflowed".into()))
    }

    /// Multiplicative inverse; requires a nonzero value at the base point.
    pub fn reciprocal(&self) -> Result<Self> {
        let s0 = self.coeffs[0];
        if s0 == T::zero() {
            return Err(Error::SingularAtBasePoint {
                base_point: self.base_point.to_f64_lossy(),
            });
        }
        let n = self.coeffs.len();
        let inv0 = T::one() / s0;
        let mut r = vec![T::zero(); n];
        r[0] = inv0;
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j] * r[k - j];
            }
            r[k] = -inv0 * acc;
        }
        self.with_coeffs(r)
            .map_err(|_| Error::NumericRange("reciprocal series overflowed".into()))
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: T) -> T {
        let t = x - self.base_point;
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + c)
    }

    /// Coefficient-wise comparison over degrees `0..=up_to`, relative to
    /// `max(1, max|a_i|, max|b_i|)` taken over the same window.
    pub fn approx_eq(&self, other: &Self, tol: T, up_to: usize) -> Result<Comparison<T>> {
        if self.base_point != other.base_point {
            return Err(Error::Mismatch {
                left_base: self.base_point.to_f64_lossy(),
                left_order: self.order(),
                right_base: other.base_point.to_f64_lossy(),
                right_order: other.order(),
            });
        }
        let limit = self.order().min(other.order());
        if up_to > limit {
            return Err(Error::InvalidParameter(format!(
                "comparison window {up_to} exceeds order {limit}"
            )));
        }
        let scale = T::one()
            .max(self.max_abs(up_to))
            .max(other.max_abs(up_to));
        let threshold = tol * scale;
        let mut first_failing_degree = None;
        let mut max_abs_diff = T::zero();
        for k in 0..=up_to {
            let d = (self.coeffs[k] - other.coeffs[k]).abs();
            max_abs_diff = max_abs_diff.max(d);
            if d > threshold && first_failing_degree.is_none() {
                first_failing_degree = Some(k);
            }
        }
        Ok(Comparison {
            equal: first_failing_degree.is_none(),
            first_failing_degree,
            max_abs_diff,
            scale,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr<T> {
    base_point: T,
    coeffs: Vec<T>,
}

impl<T: Scalar + Serialize> Serialize for Series<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            base_point: self.base_point,
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for Series<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::<T>::deserialize(deserializer)?;
        Series::new(repr.base_point, repr.coeffs).map_err(serde::de::Error::custom)
    }
}
