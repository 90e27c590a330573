//! Truncated Taylor series with complex coefficients.
//!
//! All arithmetic is exact through the stored order: the product of two
//! series of order `N` keeps the coefficients `0..=N` of the full product.
//! The engine is generic over the coefficient type so that residue
//! extraction can run in double-double precision while unit-level
//! tooling uses plain `Complex64`.

use crate::dd::{self, Cdd};
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Coefficient field of a [`PowerSeries`].
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    fn principal_sqrt(self) -> Self;

    fn zero() -> Self {
        Self::from_c64(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Self::from_c64(Complex64::new(1.0, 0.0))
    }
    fn norm(self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for Complex64 {
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(self) -> Complex64 {
        self
    }
    fn principal_sqrt(self) -> Self {
        self.sqrt()
    }
}

impl Scalar for Cdd {
    fn from_c64(z: Complex64) -> Self {
        dd::dd(z)
    }
    fn to_c64(self) -> Complex64 {
        dd::to_c64(self)
    }
    fn principal_sqrt(self) -> Self {
        dd::sqrt(self)
    }
}

/// Coefficients `c_0..=c_N` of a truncated Taylor series.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T: Scalar = Complex64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerSeries<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![T::zero(); order + 1] }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The local variable itself.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    /// `a + b z` truncated to `order`.
    pub fn linear(a: T, b: T, order: usize) -> Self {
        let mut s = Self::constant(a, order);
        if order >= 1 {
            s.coeffs[1] = b;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored order.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> PowerSeries<U> {
        PowerSeries { coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    /// Keep `c_0..=c_order` (pads with zeros if the series is shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    /// Drop the first `k` coefficients, i.e. divide by `z^k` assuming
    /// they vanish. The order shrinks by `k`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k <= self.order());
        Self { coeffs: self.coeffs[k..].to_vec() }
    }

    pub fn scale(&self, a: T) -> Self {
        self.map(|c| c * a)
    }

    pub fn add_scalar(&self, a: T) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = s.coeffs[0] + a;
        s
    }

    fn common(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn mul_series(&self, other: &Self) -> Self {
        let n = self.common(other);
        let mut out = vec![T::zero(); n + 1];
        for (i, &a) in self.coeffs.iter().take(n + 1).enumerate() {
            for (j, &b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `1/s`; requires `c_0 != 0`.
    pub fn recip(&self) -> Self {
        let c0 = self.coeffs[0];
        assert!(c0.norm() > 0.0, "reciprocal of a series with vanishing constant term");
        let n = self.order();
        let inv0 = T::one() / c0;
        let mut r = vec![T::zero(); n + 1];
        r[0] = inv0;
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j] * r[k - j];
            }
            r[k] = -(acc * inv0);
        }
        Self { coeffs: r }
    }

    pub fn div_series(&self, other: &Self) -> Self {
        self.mul_series(&other.recip())
    }

    /// Square root whose constant term is the principal root of `c_0`.
    pub fn sqrt(&self) -> Self {
        self.sqrt_with_root(self.coeffs[0].principal_sqrt())
    }

    /// Square root with a caller-chosen constant term `r0`, `r0^2 = c_0`.
    pub fn sqrt_with_root(&self, r0: T) -> Self {
        assert!(r0.norm() > 0.0, "square root of a series with vanishing constant term");
        let n = self.order();
        let two_r0 = r0 + r0;
        let mut r = vec![T::zero(); n + 1];
        r[0] = r0;
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..k {
                acc = acc + r[j] * r[k - j];
            }
            r[k] = (self.coeffs[k] - acc) / two_r0;
        }
        Self { coeffs: r }
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, e: i32) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::constant(T::one(), self.order());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_series(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul_series(&sq);
            }
        }
        acc
    }

    /// Value at `z` by Horner's rule.
    pub fn eval(&self, z: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * z + c)
    }
}

impl PowerSeries<Complex64> {
    pub fn to_dd(&self) -> PowerSeries<Cdd> {
        self.map(dd::dd)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<T: Scalar> $tr<&PowerSeries<T>> for &PowerSeries<T> {
            type Output = PowerSeries<T>;
            fn $method(self, rhs: &PowerSeries<T>) -> PowerSeries<T> {
                let f: fn(&PowerSeries<T>, &PowerSeries<T>) -> PowerSeries<T> = $body;
                f(self, rhs)
            }
        }
        impl<T: Scalar> $tr<PowerSeries<T>> for PowerSeries<T> {
            type Output = PowerSeries<T>;
            fn $method(self, rhs: PowerSeries<T>) -> PowerSeries<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $tr<&PowerSeries<T>> for PowerSeries<T> {
            type Output = PowerSeries<T>;
            fn $method(self, rhs: &PowerSeries<T>) -> PowerSeries<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Scalar> $tr<PowerSeries<T>> for &PowerSeries<T> {
            type Output = PowerSeries<T>;
            fn $method(self, rhs: PowerSeries<T>) -> PowerSeries<T> {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let n = a.common(b);
    PowerSeries { coeffs: (0..=n).map(|k| a.coeffs[k] + b.coeffs[k]).collect() }
});
binop!(Sub, sub, |a, b| {
    let n = a.common(b);
    PowerSeries { coeffs: (0..=n).map(|k| a.coeffs[k] - b.coeffs[k]).collect() }
});
binop!(Mul, mul, |a, b| a.mul_series(b));
binop!(Div, div, |a, b| a.div_series(b));

impl<T: Scalar> Neg for PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn neg(self) -> PowerSeries<T> {
        self.map(|c| -c)
    }
}

impl<T: Scalar> Neg for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn neg(self) -> PowerSeries<T> {
        self.map(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(order: usize) -> PowerSeries {
        PowerSeries::from_coeffs(
            (0..=order).map(|k| c(1.0 + 0.3 * k as f64, 0.2 - 0.1 * (k as f64).sin())).collect(),
        )
    }

    #[test]
    fn geometric_series_reciprocal() {
        let one_minus_z = PowerSeries::linear(c(1.0, 0.0), c(-1.0, 0.0), 12);
        let r = one_minus_z.recip();
        for k in 0..=12 {
            assert!((r.coeff(k) - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn sqrt_of_one_plus_z_matches_binomial() {
        let s = PowerSeries::linear(c(1.0, 0.0), c(1.0, 0.0), 6).sqrt();
        let binom = [1.0, 0.5, -0.125, 0.0625, -0.0390625, 0.02734375, -0.0205078125];
        for (k, b) in binom.iter().enumerate() {
            assert!((s.coeff(k) - c(*b, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = sample(15);
        let b = sample(15).add_scalar(c(2.0, -1.0));
        let back = (&a * &b) / &b;
        for k in 0..=15 {
            assert!((back.coeff(k) - a.coeff(k)).norm() < 10.0 * f64::EPSILON * a.max_abs() * 16.0);
        }
    }

    #[test]
    fn negative_power_is_reciprocal_power() {
        let a = sample(10);
        let p = a.powi(-3);
        let q = a.powi(3).recip();
        for k in 0..=10 {
            assert!((p.coeff(k) - q.coeff(k)).norm() < 1e-12 * q.max_abs());
        }
    }

    #[test]
    fn chosen_root_flips_the_whole_series() {
        let a = sample(8);
        let s = a.sqrt();
        let t = a.sqrt_with_root(-s.coeff(0));
        for k in 0..=8 {
            assert!((s.coeff(k) + t.coeff(k)).norm() < 1e-15 * s.max_abs());
        }
    }

    #[test]
    fn double_double_series_agree_with_double() {
        let a = sample(10);
        let d = a.to_dd().sqrt().map(|z| z.to_c64());
        let s = a.sqrt();
        for k in 0..=10 {
            assert!((d.coeff(k) - s.coeff(k)).norm() < 1e-13 * s.max_abs());
        }
    }

    #[test]
    fn horner_evaluation() {
        let a = PowerSeries::from_coeffs(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(a.eval(c(2.0, 0.0)), c(17.0, 0.0));
    }
}
