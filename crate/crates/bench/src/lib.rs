//! Shared fixtures for the benchmarks.

use latdiff::{Complex64, Wavenumber};
use std::f64::consts::PI;

pub const PHI_IN: f64 = PI / 5.0;

pub fn reference_wavenumber() -> Wavenumber {
    Wavenumber::new(Complex64::new(1.2, 0.05)).expect("reference wavenumber is valid")
}
