//! Lattice Green's function `u(m, n)`: the solution of
//! `u(m+1,n) + u(m-1,n) + u(m,n+1) + u(m,n-1) + (K^2 - 4) u(m,n) = δ_{m0} δ_{n0}`
//! by a double trapezoid rule, by contour integrals over the unit circle,
//! and by recursion from two quadrature seeds.

use crate::error::{Error, Result};
use crate::lattice::{root_pair, Wavenumber};
use crate::table::FieldTable;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Default trapezoid size.
pub const DEFAULT_GRID: usize = 256;
/// Default tolerance for the recursion spot checks.
pub const DEFAULT_TOL_REC: f64 = 1e-7;
/// Grid used for the recursion seeds and spot checks.
const SEED_GRID: usize = 2048;

/// Quadrature value with the difference to the half-size grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Computation route of a [`GreensTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenMethod {
    Double,
    Single,
    Recursive,
}

impl GreenMethod {
    pub fn name(self) -> &'static str {
        match self {
            GreenMethod::Double => "double",
            GreenMethod::Single => "single",
            GreenMethod::Recursive => "recursive",
        }
    }
}

/// Reciprocal symbol `1/D(ξ₁, ξ₂)` on an `M × M` grid.
struct DoubleGrid {
    m: usize,
    inv_d: Vec<Complex64>,
}

impl DoubleGrid {
    fn new(k: &Wavenumber, m: usize) -> Self {
        let h = 2.0 * PI / m as f64;
        let cos: Vec<f64> = (0..m).map(|j| (h * j as f64).cos()).collect();
        let shift = k.shift();
        let mut inv_d = Vec::with_capacity(m * m);
        for a in &cos {
            for b in &cos {
                inv_d.push(1.0 / (2.0 * a + 2.0 * b + shift));
            }
        }
        Self { m, inv_d }
    }

    /// Trapezoid means on the full grid and on the even-index subgrid.
    fn eval(&self, mi: i32, ni: i32) -> (Complex64, Complex64) {
        let m = self.m;
        let h = 2.0 * PI / m as f64;
        let ex: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, h * (mi as f64) * j as f64)).collect();
        let ey: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, h * (ni as f64) * j as f64)).collect();
        let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in 0..m {
            let row = &self.inv_d[a * m..(a + 1) * m];
            let mut s = Complex64::new(0.0, 0.0);
            let mut s_even = Complex64::new(0.0, 0.0);
            for b in 0..m {
                let t = ey[b] * row[b];
                s += t;
                if b % 2 == 0 {
                    s_even += t;
                }
            }
            full += ex[a] * s;
            if a % 2 == 0 {
                half += ex[a] * s_even;
            }
        }
        let mm = (m * m) as f64;
        (full / mm, half / (mm / 4.0))
    }
}

fn check_grid(m: usize) -> Result<()> {
    if m < 16 || !m.is_multiple_of(2) {
        return Err(Error::Parameter("grid size must be even and at least 16"));
    }
    Ok(())
}

/// Double trapezoid rule for `(1/4π²) ∬ e^{i(mξ₁+nξ₂)}/D dξ₁ dξ₂`.
pub fn green_double(k: &Wavenumber, m: i32, n: i32, grid: usize) -> Result<QuadValue> {
    check_grid(grid)?;
    let (full, half) = DoubleGrid::new(k, grid).eval(m, n);
    Ok(QuadValue { value: full, error_estimate: (full - half).norm() })
}

/// Single-integral representation to use at `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Integral in `x` over the unit circle with `y = Ξ(x)` (`n >= 0`).
    XInner,
    /// Integral in `x` with `y = 1/Ξ(x)` (`n <= 0`).
    XOuter,
    /// Integral in `y` with `x = Ξ(y)` (`m >= 0`).
    YInner,
    /// Integral in `y` with `x = 1/Ξ(y)` (`m <= 0`).
    YOuter,
}

impl Representation {
    /// The representation whose decaying factor carries the larger index.
    pub fn for_node(m: i32, n: i32) -> Self {
        if n.abs() >= m.abs() {
            if n >= 0 {
                Representation::XInner
            } else {
                Representation::XOuter
            }
        } else if m >= 0 {
            Representation::YInner
        } else {
            Representation::YOuter
        }
    }

    pub fn valid_for(self, m: i32, n: i32) -> bool {
        match self {
            Representation::XInner => n >= 0,
            Representation::XOuter => n <= 0,
            Representation::YInner => m >= 0,
            Representation::YOuter => m <= 0,
        }
    }
}

/// Contour-integral value with the half-grid difference and the smallest
/// `|Ξ - 1/Ξ|` met on the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub min_gap: f64,
}

/// One of the four unit-circle representations, evaluated with `grid` nodes.
pub fn green_single_with(
    k: &Wavenumber,
    rep: Representation,
    m: i32,
    n: i32,
    grid: usize,
) -> Result<SingleValue> {
    check_grid(grid)?;
    if !rep.valid_for(m, n) {
        return Err(Error::Parameter("representation is not valid in this quadrant"));
    }
    // Every representation reduces to the mean of s^p Ξ(s)^q / (Ξ - 1/Ξ).
    let (p, q) = match rep {
        Representation::XInner | Representation::XOuter => (m, n.abs()),
        Representation::YInner | Representation::YOuter => (n, m.abs()),
    };
    let h = 2.0 * PI / grid as f64;
    let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut min_gap = f64::INFINITY;
    for j in 0..grid {
        let s = Complex64::from_polar(1.0, h * j as f64);
        let y = root_pair(k.k2(), s).0;
        let gap = y - 1.0 / y;
        min_gap = min_gap.min(gap.norm());
        let v = s.powi(p) * y.powi(q) / gap;
        full += v;
        if j % 2 == 0 {
            half += v;
        }
    }
    let full = full / grid as f64;
    let half = half / (grid / 2) as f64;
    Ok(SingleValue { value: full, error_estimate: (full - half).norm(), min_gap })
}

/// Single-integral value with the representation chosen by quadrant.
pub fn green_single(k: &Wavenumber, m: i32, n: i32, grid: usize) -> Result<SingleValue> {
    green_single_with(k, Representation::for_node(m, n), m, n, grid)
}

/// Green's function values over the window `|m| + |n| <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensTable {
    pub k: Wavenumber,
    pub n_max: i32,
    pub method: GreenMethod,
    pub grid: usize,
    values: BTreeMap<(i32, i32), Complex64>,
    /// First recursed node whose spot check failed, with its deviation.
    pub instability: Option<((i32, i32), f64)>,
    /// Largest spot-check deviation seen.
    pub spot_check_deviation: f64,
}

impl GreensTable {
    pub fn get(&self, m: i32, n: i32) -> Option<Complex64> {
        self.values.get(&(m, n)).copied()
    }

    pub fn values(&self) -> &BTreeMap<(i32, i32), Complex64> {
        &self.values
    }

    /// `stencil(m, n) - δ` at every node whose four neighbours are in the window.
    pub fn max_stencil_residual(&self) -> f64 {
        let shift = self.k.shift();
        let mut worst: f64 = 0.0;
        for (&(m, n), &u) in &self.values {
            if m.abs() + n.abs() >= self.n_max {
                continue;
            }
            let nb = [(m + 1, n), (m - 1, n), (m, n + 1), (m, n - 1)];
            let s: Complex64 = nb.iter().map(|&(a, b)| self.values[&(a, b)]).sum();
            let delta = if (m, n) == (0, 0) { 1.0 } else { 0.0 };
            worst = worst.max((s + shift * u - delta).norm());
        }
        worst
    }

    pub fn to_field_table(&self) -> FieldTable {
        let mut t = FieldTable::new(self.method.name(), self.k.k(), None);
        for (&(m, n), &v) in &self.values {
            t.push(m, n, v);
        }
        t.param("n_max", self.n_max.to_string());
        t.param("grid", self.grid.to_string());
        if let Some(((m, n), dev)) = self.instability {
            t.param("instability", format!("({m},{n}) deviation {dev:.3e}"));
        }
        t.max_stencil_residual = Some(self.max_stencil_residual());
        t
    }
}

fn window(n_max: i32) -> impl Iterator<Item = (i32, i32)> {
    (-n_max..=n_max).flat_map(move |m| {
        let r = n_max - m.abs();
        (-r..=r).map(move |n| (m, n))
    })
}

/// Table by the double trapezoid rule.
pub fn green_double_table(k: &Wavenumber, n_max: i32, grid: usize) -> Result<GreensTable> {
    check_grid(grid)?;
    let g = DoubleGrid::new(k, grid);
    let mut values = BTreeMap::new();
    // Fill one octant and reflect.
    for m in 0..=n_max {
        for n in 0..=m.min(n_max - m) {
            let v = g.eval(m, n).0;
            for (a, b) in symmetric_images(m, n) {
                values.insert((a, b), v);
            }
        }
    }
    Ok(GreensTable {
        k: *k,
        n_max,
        method: GreenMethod::Double,
        grid,
        values,
        instability: None,
        spot_check_deviation: 0.0,
    })
}

/// Table by the single-integral representations.
pub fn green_single_table(k: &Wavenumber, n_max: i32, grid: usize) -> Result<GreensTable> {
    let mut values = BTreeMap::new();
    for (m, n) in window(n_max) {
        values.insert((m, n), green_single(k, m, n, grid)?.value);
    }
    Ok(GreensTable {
        k: *k,
        n_max,
        method: GreenMethod::Single,
        grid,
        values,
        instability: None,
        spot_check_deviation: 0.0,
    })
}

fn symmetric_images(m: i32, n: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::with_capacity(8);
    for (a, b) in [(m, n), (n, m)] {
        for (sa, sb) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            let p = (sa * a, sb * b);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Constants of `z(x)^2 = x^4 + a₃x³ + a₂x² + a₁x + a₀`.
pub fn recursion_constants(k: &Wavenumber) -> [Complex64; 4] {
    let s = k.shift();
    [Complex64::new(1.0, 0.0), 2.0 * s, s * s - 2.0, 2.0 * s]
}

/// `u(1,0)` from the stencil at the origin.
pub fn u10_from_u00(k: &Wavenumber, u00: Complex64) -> Complex64 {
    (1.0 - u00 * k.shift()) / 4.0
}

/// `u(3,0)` from the five-term recursion at `m = 0`.
pub fn u30_from_seeds(k: &Wavenumber, u00: Complex64, u10: Complex64, u20: Complex64) -> Complex64 {
    let [_, a1, a2, a3] = recursion_constants(k);
    -(1.5 * a3 * u20 + a2 * u10 + 0.5 * a1 * u00) / 2.0
}

/// Axis values `u(0,0)..u(len-1,0)` from the two seeds `u(0,0)`, `u(2,0)`.
pub fn axis_by_recursion(k: &Wavenumber, u00: Complex64, u20: Complex64, len: usize) -> Vec<Complex64> {
    let [a0, a1, a2, a3] = recursion_constants(k);
    let mut u = vec![Complex64::new(0.0, 0.0); len.max(4)];
    u[0] = u00;
    u[1] = u10_from_u00(k, u00);
    u[2] = u20;
    u[3] = u30_from_seeds(k, u00, u[1], u20);
    for m in 1..len.saturating_sub(3) {
        let mf = m as f64;
        u[m + 3] = -((mf + 1.5) * a3 * u[m + 2]
            + (mf + 1.0) * a2 * u[m + 1]
            + (mf + 0.5) * a1 * u[m]
            + mf * a0 * u[m - 1])
            / (mf + 2.0);
    }
    u.truncate(len);
    u
}

/// Table by recursion: two quadrature seeds, the axis recursion, then the
/// stencil solved for the outermost value along each diagonal.
pub fn green_recursive(k: &Wavenumber, n_max: i32, tol_rec: f64) -> Result<GreensTable> {
    if n_max < 1 {
        return Err(Error::Parameter("n_max must be at least 1"));
    }
    let u00 = green_single(k, 0, 0, SEED_GRID)?.value;
    let u20 = green_single(k, 2, 0, SEED_GRID)?.value;
    let axis = axis_by_recursion(k, u00, u20, n_max as usize + 1);
    let shift = k.shift();

    let mut q: BTreeMap<(i32, i32), Complex64> = BTreeMap::new();
    for (m, &v) in axis.iter().enumerate() {
        q.insert((m as i32, 0), v);
    }
    let get = |q: &BTreeMap<(i32, i32), Complex64>, a: i32, b: i32| q[&(a.abs(), b.abs())];
    for big_m in 0..n_max {
        // n = 1: the unknown u(M,1) also appears as u(M,-1).
        let delta = if big_m == 0 { 1.0 } else { 0.0 };
        let v = (delta - get(&q, big_m + 1, 0) - get(&q, big_m - 1, 0) - shift * get(&q, big_m, 0)) / 2.0;
        q.insert((big_m, 1), v);
        for n in 2..=big_m + 1 {
            let (a, b) = (big_m + 1 - n, n - 1);
            let delta = if (a, b) == (0, 0) { 1.0 } else { 0.0 };
            let v = delta
                - get(&q, a + 1, b)
                - get(&q, a - 1, b)
                - get(&q, a, b - 1)
                - shift * get(&q, a, b);
            q.insert((a, b + 1), v);
        }
    }
    let mut values = BTreeMap::new();
    for (m, n) in window(n_max) {
        values.insert((m, n), q[&(m.abs(), n.abs())]);
    }

    // Spot checks at three pseudo-random nodes on the outer diagonals.
    let mut instability = None;
    let mut worst: f64 = 0.0;
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15 ^ n_max as u64;
    for _ in 0..3 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let r = (n_max - (state >> 33) as i32 % (n_max.min(3))).max(1);
        let m = ((state >> 20) % (r as u64 + 1)) as i32;
        let n = r - m;
        let dev = (values[&(m, n)] - green_single(k, m, n, SEED_GRID)?.value).norm();
        worst = worst.max(dev);
        if dev > tol_rec && instability.is_none() {
            instability = Some(((m, n), dev));
        }
    }
    Ok(GreensTable {
        k: *k,
        n_max,
        method: GreenMethod::Recursive,
        grid: SEED_GRID,
        values,
        instability,
        spot_check_deviation: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k0() -> Wavenumber {
        Wavenumber::from_parts(1.2, 0.05).unwrap()
    }

    // Self-converged reference values (double trapezoid at M = 1024).
    const U00: Complex64 = Complex64::new(-0.2773822013783445, -0.3040326380448832);
    const U42: Complex64 = Complex64::new(-0.0805370939351904, -0.00815586491554152);

    #[test]
    fn double_rule_reference_values() {
        let k = k0();
        assert!((green_double(&k, 0, 0, 512).unwrap().value - U00).norm() < 1e-13);
        assert!((green_double(&k, 4, 2, 512).unwrap().value - U42).norm() < 1e-13);
        let q = green_double(&k, 3, 1, 256).unwrap().value;
        let r = green_double(&k, 1, 3, 256).unwrap().value;
        assert!((q - r).norm() < 1e-15);
    }

    #[test]
    fn single_representations_agree_on_overlaps() {
        let k = k0();
        let a = green_single_with(&k, Representation::XInner, 2, 3, 512).unwrap().value;
        let b = green_single_with(&k, Representation::YInner, 2, 3, 512).unwrap().value;
        assert!((a - b).norm() < 1e-10);
        let c = green_single_with(&k, Representation::XInner, 5, 0, 512).unwrap().value;
        let d = green_single_with(&k, Representation::XOuter, 5, 0, 512).unwrap().value;
        assert!((c - d).norm() < 1e-10);
        assert!(green_single_with(&k, Representation::XInner, 1, -1, 64).is_err());
        assert!((green_single(&k, 4, 2, 512).unwrap().value - U42).norm() < 1e-9);
    }

    #[test]
    fn seeds_of_the_recursion() {
        let k = k0();
        let u00 = green_single(&k, 0, 0, 1024).unwrap().value;
        let u10 = green_single(&k, 1, 0, 1024).unwrap().value;
        let u20 = green_single(&k, 2, 0, 1024).unwrap().value;
        let u30 = green_single(&k, 3, 0, 1024).unwrap().value;
        assert!((u10_from_u00(&k, u00) - u10).norm() < 1e-12);
        assert!((u30_from_seeds(&k, u00, u10, u20) - u30).norm() < 1e-12);
    }

    #[test]
    fn recursive_table_is_symmetric_and_flags_nothing() {
        let t = green_recursive(&k0(), 10, DEFAULT_TOL_REC).unwrap();
        assert!(t.instability.is_none(), "{:?}", t.instability);
        for (&(m, n), &v) in t.values() {
            assert!((t.get(n, m).unwrap() - v).norm() < 1e-10);
        }
        assert!(t.max_stencil_residual() < 1e-8);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(green_double(&k0(), 0, 0, 15).is_err());
        assert!(green_single(&k0(), 0, 0, 8).is_err());
    }
}
