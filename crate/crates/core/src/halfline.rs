//! Diffraction of a lattice plane wave by the Dirichlet half-line
//! `{(m, 0): m >= 0}`.
//!
//! The field is the Sommerfeld integral of `w_{m,n} A Ψ` over a contour on
//! the two-sheeted cover `H₂` of the dispersion surface. The transformant is
//! `A(p) = -(g₁ + g₃ f₂(p)) / (4πi (x - x_in))`, where `f₂` is the branch of
//! `√((x-η₂₁)(x-η₂₂))` that changes sign between the two sheets of the
//! cover. Here `f₂ = s F(x)`, with `s = ±1` the cover sheet and `F` the
//! branch analytic off the cut `{|Ξ| = 1, |x| < 1}` with `F ~ x` at infinity.
//!
//! On `H₂` the angle coordinate runs over `[0, 4π)`. The eight infinity
//! points sit at `α = (2k+1)π/4`. The contour for a node at angle `φ`
//! encloses the four of them with `α` in `(jπ/2 + π/2, jπ/2 + 5π/2)`, where
//! `j` is the quarter-turn nearest to `φ`.

use crate::dd::{self, Cdd};
use crate::error::{Error, Result};
use crate::lattice::{real_wave_point, root_on, root_pair, BranchPoints, IncidentWave, Sheet, Wavenumber};
use crate::series::{PowerSeries, Scalar};
use crate::table::FieldTable;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default cap on the Laurent order used by [`Halfline::residue_field`].
pub const DEFAULT_SERIES_CAP: usize = 64;
/// Default unit-circle size for the Wiener–Hopf integral.
pub const DEFAULT_WH_GRID: usize = 4096;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The functions `f₀ = 1`, `f₁`, `f₂`, `f₃` built from principal square
/// roots, `f₂ = s₂ √((x-η₂₁)(x-η₂₂))`, `f₃ = s₃ √((x-η₁₁)(x-η₁₂))` and
/// `f₁ = f₂ f₃`.
pub fn basis_f(eta: &BranchPoints, j: usize, x: Complex64, signs: (i8, i8)) -> Result<Complex64> {
    let f2 = f64::from(signs.0) * ((x - eta.eta21) * (x - eta.eta22)).sqrt();
    let f3 = f64::from(signs.1) * ((x - eta.eta11) * (x - eta.eta12)).sqrt();
    match j {
        0 => Ok(ONE),
        1 => Ok(f2 * f3),
        2 => Ok(f2),
        3 => Ok(f3),
        _ => Err(Error::Parameter("basis index must be 0..=3")),
    }
}

/// As [`basis_f`] for `f₁`, with an explicit sign `s₁` in front of the
/// principal root of the quartic. Fails unless `s₁ √quartic = f₂ f₃`.
pub fn basis_f1_checked(eta: &BranchPoints, x: Complex64, signs: (i8, i8, i8)) -> Result<Complex64> {
    let f1 = f64::from(signs.0) * eta.quartic(x).sqrt();
    let prod = basis_f(eta, 1, x, (signs.1, signs.2))?;
    if (f1 - prod).norm() > 1e-10 * (1.0 + f1.norm()) {
        return Err(Error::BranchInconsistency);
    }
    Ok(f1)
}

/// Kind of an infinity point of the dispersion surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityKind {
    /// `x → 0`, `y → 0`.
    J1,
    /// `x → 0`, `y → ∞`.
    J2,
    /// `x → ∞`, `y → ∞`.
    J3,
    /// `x → ∞`, `y → 0`.
    J4,
}

impl InfinityKind {
    /// Kind of the point at `α = (2k+1)π/4`.
    pub fn at_index(k: usize) -> Self {
        match k % 4 {
            0 => InfinityKind::J1,
            1 => InfinityKind::J4,
            2 => InfinityKind::J3,
            _ => InfinityKind::J2,
        }
    }

    pub fn x_is_zero(self) -> bool {
        matches!(self, InfinityKind::J1 | InfinityKind::J2)
    }

    pub fn sheet(self) -> Sheet {
        match self {
            InfinityKind::J1 | InfinityKind::J4 => Sheet::Inner,
            InfinityKind::J2 | InfinityKind::J3 => Sheet::Outer,
        }
    }
}

/// Angle of the node `(m, n)` in `[0, 2π)`.
pub fn node_angle(m: i32, n: i32) -> f64 {
    (n as f64).atan2(m as f64).rem_euclid(2.0 * PI)
}

/// Quarter-turn nearest to `phi`; ties go to the lower one.
pub fn nearest_quarter(phi: f64) -> i32 {
    (phi / (PI / 2.0) - 0.5).ceil() as i32
}

/// Indices `k` (with `α_k = (2k+1)π/4`, unreduced) enclosed by the contour
/// of quarter-turn `j`.
pub fn enclosed_indices(j: i32) -> [i64; 4] {
    // (2k+1)π/4 in (jπ/2 + π/2, jπ/2 + 5π/2)  ⇔  k in {j+1, ..., j+4}.
    let base = j as i64 + 1;
    [base, base + 1, base + 2, base + 3]
}

/// Precomputed half-line transformant.
#[derive(Debug, Clone)]
pub struct Halfline {
    pub k: Wavenumber,
    pub incident: IncidentWave,
    pub eta: BranchPoints,
    /// `f₁(p₁) = Υ(x_in)`.
    pub g1: Complex64,
    /// `f₂(p₁)`.
    pub g2: Complex64,
    /// `f₃(p₁) = g₁/g₂`.
    pub g3: Complex64,
    /// `F(0)`.
    pub f0: Complex64,
    /// Cover sheet of `p₁`, `±1`.
    pub p1_sheet: i8,
    pub series_cap: usize,
    eta_dd: [Cdd; 2],
    k2_dd: Cdd,
}

fn cdd_k2(k: Complex64) -> Cdd {
    let kd = dd::dd(k);
    kd * kd
}

/// Roots `(η₂₁, η₂₂)` in double-double, labelled consistently with the
/// double-precision set.
fn small_branch_points_dd(k2: Cdd, eta: &BranchPoints) -> [Cdd; 2] {
    let one = Cdd::one();
    let four = dd::dd(Complex64::new(4.0, 0.0));
    let pair = |shift: f64, target: Complex64| {
        let d = k2 - dd::dd(Complex64::new(shift, 0.0));
        let s = dd::sqrt(d * d - four);
        let two = dd::dd(Complex64::new(2.0, 0.0));
        let a = (-d + s) / two;
        let b = (-d - s) / two;
        let big = if dd::norm(a) >= dd::norm(b) { a } else { b };
        let small = one / big;
        debug_assert!((dd::to_c64(small) - target).norm() < 1e-12);
        small
    };
    [pair(2.0, eta.eta21), pair(6.0, eta.eta22)]
}

impl Halfline {
    /// Builds the transformant for incidence angle `phi_in ∈ (-π/2, π/2)`.
    ///
    /// `phi_in = 0` is rejected: the incident point then sits on the
    /// branch point `η₂₁` and the transformant degenerates.
    pub fn new(k: &Wavenumber, phi_in: f64) -> Result<Self> {
        if !(phi_in.abs() < PI / 2.0) || phi_in.abs() < 1e-6 {
            return Err(Error::Angle(phi_in));
        }
        let incident = real_wave_point(k, phi_in)?;
        let eta = *k.branch_points();
        let k2_dd = cdd_k2(k.k());
        let mut h = Self {
            k: *k,
            incident,
            eta,
            g1: Complex64::new(0.0, 0.0),
            g2: Complex64::new(0.0, 0.0),
            g3: Complex64::new(0.0, 0.0),
            f0: Complex64::new(0.0, 0.0),
            p1_sheet: 0,
            series_cap: DEFAULT_SERIES_CAP,
            eta_dd: small_branch_points_dd(k2_dd, &eta),
            k2_dd,
        };
        h.f0 = h.f_at_zero()?;
        let (x_in, y_in) = (incident.x_in, incident.y_in);
        // p₁ sits at α = φ_in + 2π: on the second cover sheet when φ_in > 0.
        h.p1_sheet = if phi_in > 0.0 { -1 } else { 1 };
        h.g1 = x_in * (y_in - 1.0 / y_in);
        h.g2 = f64::from(h.p1_sheet) * h.f_branch(x_in)?;
        h.g3 = h.g1 / h.g2;
        let res = h.pole_residues()?;
        let want = [-1.0, 0.0, 0.0, 1.0];
        for (r, w) in res.iter().zip(want) {
            if (*r * 2.0 * PI * I - w).norm() > 1e-7 {
                return Err(Error::Continuation("residue prescription at the incident poles fails"));
            }
        }
        Ok(h)
    }

    /// Takes the opposite branch of `f₂` on both cover sheets. The result
    /// violates the boundary condition; validation must catch it.
    pub fn with_flipped_branch(mut self) -> Self {
        self.g2 = -self.g2;
        self.g3 = -self.g3;
        self
    }

    pub fn with_series_cap(mut self, cap: usize) -> Self {
        self.series_cap = cap;
        self
    }

    /// `F` for `|x| >= 1`: `x √(1-η₂₁/x) √(1-η₂₂/x)`.
    fn f_outer(&self, x: Complex64) -> Complex64 {
        x * (ONE - self.eta.eta21 / x).sqrt() * (ONE - self.eta.eta22 / x).sqrt()
    }

    /// `√(1-x/η₂₁) √(1-x/η₂₂)`, the normalised `F` near the origin.
    fn s_zero(&self, x: Complex64) -> Complex64 {
        (ONE - x / self.eta.eta21).sqrt() * (ONE - x / self.eta.eta22).sqrt()
    }

    /// `F(x)` on the cut plane, by radial continuation from the unit circle.
    /// The sign flips each time the tracked `y` crosses `|y| = 1`.
    pub fn f_branch(&self, x: Complex64) -> Result<Complex64> {
        let r = x.norm();
        if r >= 1.0 {
            return Ok(self.f_outer(x));
        }
        if r < 0.5 * self.eta.eta22.norm() && self.f0 != Complex64::new(0.0, 0.0) {
            return Ok(self.f0 * self.s_zero(x));
        }
        if r == 0.0 {
            return Err(Error::Domain("F(0) is computed separately"));
        }
        let start = x / r;
        let steps = 4000;
        let mut f = self.f_outer(start);
        let k2 = self.k.k2();
        let mut y = root_pair(k2, start).0;
        let mut flips = 0;
        for s in 1..=steps {
            let p = start + (x - start) * (s as f64 / steps as f64);
            if self.eta.distance(p) < 1e-9 {
                return Err(Error::BranchPoint(self.eta.distance(p)));
            }
            let cand = ((p - self.eta.eta21) * (p - self.eta.eta22)).sqrt();
            f = if (cand - f).norm() < (cand + f).norm() { cand } else { -cand };
            let (r1, r2) = root_pair(k2, p);
            let yn = if (r1 - y).norm() < (r2 - y).norm() { r1 } else { r2 };
            if (y.norm() - 1.0) * (yn.norm() - 1.0) < 0.0 {
                flips += 1;
            }
            y = yn;
        }
        Ok(if flips % 2 == 1 { -f } else { f })
    }

    fn f_at_zero(&self) -> Result<Complex64> {
        let dir = (-(self.eta.eta21 + self.eta.eta22)).arg();
        let x = Complex64::from_polar(1e-2, dir);
        let saved = Self { f0: Complex64::new(0.0, 0.0), ..self.clone() };
        Ok(saved.f_branch(x)? / self.s_zero(x))
    }

    /// `A` at `x` on cover sheet `s = ±1`, given `F(x)`.
    fn a_with_f(&self, x: Complex64, s: i8, f: Complex64) -> Complex64 {
        -(self.g1 + self.g3 * f64::from(s) * f) / (4.0 * PI * I * (x - self.incident.x_in))
    }

    /// The transformant at `x` on cover sheet `s = ±1`.
    pub fn transformant_a(&self, x: Complex64, s: i8) -> Result<Complex64> {
        let d = (x - self.incident.x_in).norm();
        if d < 1e-8 {
            return Err(Error::PoleProximity(d));
        }
        Ok(self.a_with_f(x, s, self.f_branch(x)?))
    }

    /// Residues of `A Ψ` at `p₁..p₄` by trapezoid quadrature on a small
    /// circle around `x_in`. The expected values are `(-1, 0, 0, 1)/(2πi)`.
    pub fn pole_residues(&self) -> Result<[Complex64; 4]> {
        let x_in = self.incident.x_in;
        let f_in = f64::from(self.p1_sheet) * self.g2;
        let q_in = (x_in - self.eta.eta21) * (x_in - self.eta.eta22);
        let r = 0.25 * self.eta.distance(x_in);
        let m = 64;
        let y_in = self.incident.y_in;
        let sheet_in = Sheet::of(y_in);
        let y_at = |sh: Sheet| if sh == sheet_in { y_in } else { 1.0 / y_in };
        let s1 = self.p1_sheet;
        let points = [(sheet_in, s1), (sheet_in, -s1), (sheet_in.flip(), -s1), (sheet_in.flip(), s1)];
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (slot, &(sheet, s)) in out.iter_mut().zip(points.iter()) {
            let mut acc = Complex64::new(0.0, 0.0);
            // |y| crosses 1 near x_in, so follow the root by continuity.
            let mut y = root_on(self.k.k2(), x_in + r, sheet);
            if (y - y_at(sheet)).norm() > (1.0 / y - y_at(sheet)).norm() {
                y = 1.0 / y;
            }
            for j in 0..m {
                let dz = Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64);
                let x = x_in + dz;
                let f = f_in * ((x - self.eta.eta21) * (x - self.eta.eta22) / q_in).sqrt();
                let (r1, r2) = root_pair(self.k.k2(), x);
                y = if (r1 - y).norm() < (r2 - y).norm() { r1 } else { r2 };
                acc += self.a_with_f(x, s, f) / (x * (y - 1.0 / y)) * dz;
            }
            *slot = acc / m as f64;
        }
        Ok(out)
    }

    /// Total field `ũ(m, n)` on the physical sheet by series residues.
    pub fn residue_field(&self, m: i32, n: i32) -> Result<Complex64> {
        self.residue_field_on_cover(m, n, 1)
    }

    /// Total field at node `(m, n)` on cover sheet 1 (`φ ∈ [0, 2π)`) or 2
    /// (`φ ∈ [2π, 4π)`).
    pub fn residue_field_on_cover(&self, m: i32, n: i32, sheet: u8) -> Result<Complex64> {
        if (m, n) == (0, 0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let phi = node_angle(m, n) + if sheet == 2 { 2.0 * PI } else { 0.0 };
        self.residue_field_sector(m, n, nearest_quarter(phi))
    }

    /// Field from the contour of quarter-turn `j`.
    pub fn residue_field_sector(&self, m: i32, n: i32, j: i32) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for k in enclosed_indices(j) {
            let k = k.rem_euclid(8) as usize;
            let s = if k < 4 { 1 } else { -1 };
            total += self.infinity_residue(InfinityKind::at_index(k), s, m, n)?;
        }
        Ok(2.0 * PI * I * total)
    }

    /// Residue of `w_{m,n} A Ψ` at an infinity point on cover sheet `s`,
    /// from Laurent series in double-double arithmetic.
    pub fn infinity_residue(&self, kind: InfinityKind, s: i8, m: i32, n: i32) -> Result<Complex64> {
        let inner = kind.sheet() == Sheet::Inner;
        // The form is z^e H(z) dz in the local variable z (x or 1/x).
        let e = match (kind.x_is_zero(), inner) {
            (true, true) => m + n,
            (true, false) => m - n,
            (false, true) => n - m,
            (false, false) => -m - n,
        };
        let need = -e - 1;
        if need < 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let need = need as usize;
        if need > self.series_cap {
            return Err(Error::OrderOverflow { order: need, cap: self.series_cap });
        }
        let order = need + 2;
        let v = self.root_series(order);
        let z = PowerSeries::<Cdd>::variable(order);
        let one = Cdd::one();
        let n_pow = if inner { n } else { -n };
        let c = |w: Complex64| dd::dd(w);
        let four_pi_i = c(4.0 * PI * I);
        let sgn = c(Complex64::new(f64::from(s), 0.0));
        let [e21, e22] = self.eta_dd;
        let h = if kind.x_is_zero() {
            // Υ_inner = (x²v² - 1)/v, Υ_outer = -Υ_inner.
            let zv = &z * &v;
            let mut ups = (&zv * &zv).add_scalar(-one) / &v;
            if !inner {
                ups = -ups;
            }
            let s0 = (PowerSeries::linear(one, -(one / e21), order)
                * PowerSeries::linear(one, -(one / e22), order))
            .sqrt();
            let num = s0.scale(c(self.g3 * self.f0) * sgn).add_scalar(c(self.g1));
            let den = PowerSeries::linear(-c(self.incident.x_in), one, order).scale(four_pi_i);
            let a = -(num / den);
            v.powi(n_pow) * a / ups
        } else {
            // τ = 1/x: Ψ = -v dτ/(τ²v² - 1) on the inner sheet.
            let zv = &z * &v;
            let mut psi = -(&v / (&zv * &zv).add_scalar(-one));
            if !inner {
                psi = -psi;
            }
            let st = (PowerSeries::linear(one, -e21, order) * PowerSeries::linear(one, -e22, order)).sqrt();
            let num = st.scale(c(self.g3) * sgn) + z.scale(c(self.g1));
            let den = PowerSeries::linear(one, -c(self.incident.x_in), order).scale(four_pi_i);
            let a = -(num / den);
            v.powi(n_pow) * a * psi
        };
        Ok(h.coeff(need).to_c64())
    }

    /// `v(z)` with `Ξ = z v` near `z = 0`:
    /// `v = (√(q² - 4z²) - q)/(2z²)`, `q = 1 + (K²-4) z + z²`.
    fn root_series(&self, order: usize) -> PowerSeries<Cdd> {
        let one = Cdd::one();
        let big = order + 2;
        let c = self.k2_dd - dd::dd(Complex64::new(4.0, 0.0));
        let z = PowerSeries::<Cdd>::variable(big);
        let q = PowerSeries::linear(one, c, big) + &z * &z;
        let disc = &q * &q - (&z * &z).scale(dd::dd(Complex64::new(4.0, 0.0)));
        let root = disc.sqrt();
        let num = root - q;
        num.shift_down(2).scale(dd::dd(Complex64::new(0.5, 0.0))).truncate(order)
    }

    /// The same contour integral by trapezoid quadrature on small circles
    /// around the enclosed infinity points. `radius_factor` scales the
    /// distance to the nearest singularity in the local variable.
    pub fn sommerfeld_numeric(&self, m: i32, n: i32, radius_factor: f64, nodes: usize) -> Result<Complex64> {
        if (m, n) == (0, 0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.sommerfeld_sector(m, n, nearest_quarter(node_angle(m, n)), radius_factor, nodes)
    }

    pub fn sommerfeld_sector(&self, m: i32, n: i32, j: i32, radius_factor: f64, nodes: usize) -> Result<Complex64> {
        if !(radius_factor > 0.0 && radius_factor < 1.0) {
            return Err(Error::Parameter("radius factor must lie in (0, 1)"));
        }
        let x_in = self.incident.x_in;
        // Nearest singular point in the local variable (x near 0, 1/x near ∞).
        let near0 = self.eta.eta22.norm().min(self.eta.eta21.norm()).min(x_in.norm());
        let near_inf = (1.0 / self.eta.eta12.norm()).min(1.0 / self.eta.eta11.norm()).min(1.0 / x_in.norm());
        let k2 = self.k.k2();
        let mut total = Complex64::new(0.0, 0.0);
        for kk in enclosed_indices(j) {
            let kk = kk.rem_euclid(8) as usize;
            let kind = InfinityKind::at_index(kk);
            let s: i8 = if kk < 4 { 1 } else { -1 };
            let r = radius_factor * if kind.x_is_zero() { near0 } else { near_inf };
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..nodes {
                let z = Complex64::from_polar(r, 2.0 * PI * q as f64 / nodes as f64);
                let (x, dxdz) = if kind.x_is_zero() { (z, ONE) } else { (1.0 / z, -1.0 / (z * z)) };
                let y = root_on(k2, x, kind.sheet());
                let f = if kind.x_is_zero() { self.f0 * self.s_zero(x) } else { self.f_outer(x) };
                let w = x.powi(m) * y.powi(n);
                acc += w * self.a_with_f(x, s, f) / (x * (y - 1.0 / y)) * dxdz * z;
            }
            // (1/2πi)∮ g dz = mean(g z).
            total += acc / nodes as f64;
        }
        Ok(2.0 * PI * I * total)
    }

    /// Wiener–Hopf form: `u = u_in - (1/2πi)∮ z^m Ξ(z)^{|n|} G₃/(f₃(z)(z - x_in)) dz`
    /// over the unit circle, with `f₃ = √(1-z/η₁₁) √(1-z/η₁₂)` analytic in
    /// the disc and `G₃ = f₃(x_in)`.
    pub fn wiener_hopf_field(&self, m: i32, n: i32, grid: usize) -> Result<Complex64> {
        if grid < 16 {
            return Err(Error::Parameter("grid must be at least 16"));
        }
        let (x_in, y_in) = (self.incident.x_in, self.incident.y_in);
        let f3 = |z: Complex64| (ONE - z / self.eta.eta11).sqrt() * (ONE - z / self.eta.eta12).sqrt();
        let g3 = f3(x_in);
        let k2 = self.k.k2();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..grid {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64);
            let y = root_pair(k2, z).0;
            acc += z.powi(m) * y.powi(n.abs()) * g3 / (f3(z) * (z - x_in)) * z;
        }
        Ok(x_in.powi(m) * y_in.powi(n) - acc / grid as f64)
    }

    /// The four closed forms as printed for the nodes next to the edge:
    /// `[ũ(-2,0), ũ(-1,1), ũ(-1,-1), ũ(-1,0)]` in terms of `f₁(x_in)`,
    /// `f₃(x_in)`.
    pub fn printed_closed_forms(&self) -> [Complex64; 4] {
        let (f1, f3, x) = (self.g1, self.g3, self.incident.x_in);
        let sum = self.eta.eta21 + self.eta.eta22;
        [
            f1 * (ONE - self.k.shift() * x) / (x * x),
            (-2.0 * f1 - 2.0 * f3 + sum * f3) / (4.0 * x * x),
            -(2.0 * f1 - 2.0 * f3 + sum * f3) / (4.0 * x * x),
            f1 / x,
        ]
    }

    /// Closed forms for the same nodes obtained from the leading terms of
    /// the residue series at `J₁` and `J₂`; `σ₁ = 1/η₂₁ + 1/η₂₂`.
    pub fn derived_closed_forms(&self) -> [Complex64; 4] {
        let x = self.incident.x_in;
        let a = self.g3 * self.f0;
        let sigma = 1.0 / self.eta.eta21 + 1.0 / self.eta.eta22;
        [
            -a * (ONE - self.k.shift() * x - 0.5 * sigma * x) / (x * x),
            (2.0 * (self.g1 + a) - a * sigma * x) / (4.0 * x * x),
            -(2.0 * (self.g1 - a) + a * sigma * x) / (4.0 * x * x),
            -a / x,
        ]
    }

    /// Residue-series field over `|m|, |n| <= n_max` as a table.
    pub fn residue_table(&self, n_max: i32) -> Result<FieldTable> {
        let mut t = FieldTable::new("residue", self.k.k(), Some(self.incident.phi_in));
        for m in -n_max..=n_max {
            for n in -n_max..=n_max {
                t.push(m, n, self.residue_field(m, n)?);
            }
        }
        t.param("series_cap", self.series_cap.to_string());
        self.finish(t)
    }

    /// Wiener–Hopf field over `|m|, |n| <= n_max`.
    pub fn wiener_hopf_table(&self, n_max: i32, grid: usize) -> Result<FieldTable> {
        let mut t = FieldTable::new("wh", self.k.k(), Some(self.incident.phi_in));
        for m in -n_max..=n_max {
            for n in -n_max..=n_max {
                t.push(m, n, self.wiener_hopf_field(m, n, grid)?);
            }
        }
        t.param("grid", grid.to_string());
        self.finish(t)
    }

    /// Small-circle quadrature over `|m|, |n| <= n_max`.
    pub fn sommerfeld_table(&self, n_max: i32, radius_factor: f64, nodes: usize) -> Result<FieldTable> {
        let mut t = FieldTable::new("sommerfeld", self.k.k(), Some(self.incident.phi_in));
        for m in -n_max..=n_max {
            for n in -n_max..=n_max {
                t.push(m, n, self.sommerfeld_numeric(m, n, radius_factor, nodes)?);
            }
        }
        t.param("radius_factor", radius_factor.to_string());
        t.param("nodes", nodes.to_string());
        self.finish(t)
    }

    fn finish(&self, mut t: FieldTable) -> Result<FieldTable> {
        let shift = self.k.shift();
        t.max_stencil_residual = Some(t.stencil_residual(shift, |_, _| Complex64::new(0.0, 0.0), on_halfline));
        t.max_boundary_residual = Some(t.boundary_residual(on_halfline));
        Ok(t)
    }
}

/// Nodes of the scatterer `{(m, 0): m >= 0}`.
pub fn on_halfline(m: i32, n: i32) -> bool {
    n == 0 && m >= 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> Halfline {
        Halfline::new(&Wavenumber::from_parts(1.2, 0.05).unwrap(), PI / 5.0).unwrap()
    }

    #[test]
    fn incident_data_for_reference_case() {
        let h = setup();
        assert!((h.g1 - Complex64::new(-1.05055523, 0.56942474)).norm() < 1e-7);
        assert!((h.g2 - Complex64::new(-0.39548574, -0.19473533)).norm() < 1e-7);
        assert!((h.f0 - Complex64::new(-0.36845, -0.28464)).norm() < 1e-4);
        assert_eq!(h.p1_sheet, -1);
    }

    #[test]
    fn rejects_degenerate_angles() {
        let k = Wavenumber::from_parts(1.2, 0.05).unwrap();
        assert!(Halfline::new(&k, 0.0).is_err());
        assert!(Halfline::new(&k, PI / 2.0).is_err());
    }

    #[test]
    fn basis_functions() {
        let h = setup();
        let x = Complex64::new(0.3, -0.8);
        let f1 = basis_f(&h.eta, 1, x, (1, 1)).unwrap();
        assert!((f1 * f1 - h.eta.quartic(x)).norm() < 1e-12 * h.eta.quartic(x).norm());
        assert!(basis_f(&h.eta, 2, h.eta.eta21, (1, 1)).unwrap().norm() < 1e-7);
        let good = basis_f1_checked(&h.eta, x, (1, 1, 1)).or_else(|_| basis_f1_checked(&h.eta, x, (-1, 1, 1)));
        assert!(good.is_ok());
        let bad_sign = if basis_f1_checked(&h.eta, x, (1, 1, 1)).is_ok() { -1 } else { 1 };
        assert!(matches!(basis_f1_checked(&h.eta, x, (bad_sign, 1, 1)), Err(Error::BranchInconsistency)));
    }

    #[test]
    fn branch_f_continues_to_f0() {
        let h = setup();
        let x = Complex64::from_polar(0.05, 2.0);
        let a = h.f_branch(x).unwrap();
        let b = h.f0 * h.s_zero(x);
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn sector_choice() {
        assert_eq!(nearest_quarter(0.0), 0);
        assert_eq!(nearest_quarter(PI / 4.0), 0);
        assert_eq!(nearest_quarter(PI / 4.0 + 1e-9), 1);
        assert_eq!(nearest_quarter(PI), 2);
        assert_eq!(enclosed_indices(0), [1, 2, 3, 4]);
        assert_eq!(enclosed_indices(2), [3, 4, 5, 6]);
    }

    #[test]
    fn field_vanishes_at_the_origin_and_on_the_halfline() {
        let h = setup();
        assert_eq!(h.residue_field(0, 0).unwrap(), Complex64::new(0.0, 0.0));
        for m in 1..=6 {
            assert!(h.residue_field(m, 0).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn series_cap_is_enforced() {
        let h = setup().with_series_cap(8);
        assert!(matches!(h.residue_field(-10, -10), Err(Error::OrderOverflow { .. })));
    }
}
