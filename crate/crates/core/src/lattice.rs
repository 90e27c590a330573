//! Dispersion surface of the five-point stencil and the bookkeeping shared
//! by every solver: branch points, the root selector Ξ, the form Ψ, plane
//! waves and points of the real-wave line.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative tolerance for "this point lies on the dispersion surface".
pub const TOL_DISP: f64 = 1e-10;

/// Closest two branch points may come before the wavenumber is rejected.
const BRANCH_SEPARATION: f64 = 1e-8;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Lattice wavenumber with limiting absorption, `Im K > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber {
    k: Complex64,
    k2: Complex64,
    eta: BranchPoints,
}

impl Wavenumber {
    pub fn new(k: Complex64) -> Result<Self> {
        if !(k.im > 0.0) || !k.re.is_finite() {
            return Err(Error::Absorption(k.im));
        }
        let k2 = k * k;
        let eta = branch_points_from(k2)?;
        Ok(Self { k, k2, eta })
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn k2(&self) -> Complex64 {
        self.k2
    }

    /// The diagonal shift `K^2 - 4` of the stencil.
    pub fn shift(&self) -> Complex64 {
        self.k2 - 4.0
    }

    pub fn branch_points(&self) -> &BranchPoints {
        &self.eta
    }
}

/// The four zeros of `Υ^2`, labelled so that `|eta2k| < 1 < |eta1k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoints {
    pub eta11: Complex64,
    pub eta12: Complex64,
    pub eta21: Complex64,
    pub eta22: Complex64,
}

impl BranchPoints {
    pub fn all(&self) -> [Complex64; 4] {
        [self.eta11, self.eta12, self.eta21, self.eta22]
    }

    /// Monic quartic `Π (x - η)`, equal to `Υ(x)^2`.
    pub fn quartic(&self, x: Complex64) -> Complex64 {
        self.all().iter().fold(C1, |acc, &e| acc * (x - e))
    }

    /// Distance from `x` to the nearest branch point.
    pub fn distance(&self, x: Complex64) -> f64 {
        self.all().iter().map(|&e| (x - e).norm()).fold(f64::INFINITY, f64::min)
    }
}

pub fn branch_points(k: &Wavenumber) -> BranchPoints {
    k.eta
}

fn branch_points_from(k2: Complex64) -> Result<BranchPoints> {
    // Roots of x^2 + d x + 1 with d = K^2 - 2 (y = 1) and d = K^2 - 6 (y = -1).
    let pair = |d: Complex64| {
        let s = (d * d - 4.0).sqrt();
        let (a, b) = ((-d + s) / 2.0, (-d - s) / 2.0);
        let big = if a.norm() < b.norm() { b } else { a };
        (big, 1.0 / big)
    };
    let (eta11, eta21) = pair(k2 - 2.0);
    let (eta12, eta22) = pair(k2 - 6.0);
    let set = BranchPoints { eta11, eta12, eta21, eta22 };
    let all = set.all();
    let mut sep = f64::INFINITY;
    for i in 0..4 {
        for j in i + 1..4 {
            sep = sep.min((all[i] - all[j]).norm());
        }
    }
    if sep < BRANCH_SEPARATION || (eta21.norm() - 1.0).abs() < BRANCH_SEPARATION {
        return Err(Error::DegenerateBranchPoints(sep));
    }
    Ok(set)
}

/// `D̂(x, y) = x + 1/x + y + 1/y - 4 + K^2`.
pub fn dispersion(k: &Wavenumber, x: Complex64, y: Complex64) -> Result<Complex64> {
    if x == C0 || y == C0 {
        return Err(Error::Domain("dispersion needs x != 0 and y != 0"));
    }
    Ok(x + 1.0 / x + y + 1.0 / y - 4.0 + k.k2)
}

/// Which root of the dispersion quadratic in `y` a point carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    /// `|y| < 1`, the root Ξ(x).
    Inner,
    /// `|y| > 1`, the root 1/Ξ(x).
    Outer,
}

impl Sheet {
    pub fn of(y: Complex64) -> Sheet {
        if y.norm() < 1.0 {
            Sheet::Inner
        } else {
            Sheet::Outer
        }
    }

    pub fn flip(self) -> Sheet {
        match self {
            Sheet::Inner => Sheet::Outer,
            Sheet::Outer => Sheet::Inner,
        }
    }
}

/// Both roots `(inner, outer)` of `y^2 + (K^2 - 4 + x + 1/x) y + 1 = 0`.
///
/// The larger root comes from the sign-matched quadratic formula and the
/// smaller one is its reciprocal, which avoids cancellation.
pub fn root_pair(k2: Complex64, x: Complex64) -> (Complex64, Complex64) {
    let b = k2 - 4.0 + x + 1.0 / x;
    let s = (b * b - 4.0).sqrt();
    let (r1, r2) = (-b + s, -b - s);
    let big = if r1.norm() >= r2.norm() { r1 / 2.0 } else { r2 / 2.0 };
    (1.0 / big, big)
}

/// The root of the given sheet at `x`, without tie checks.
pub fn root_on(k2: Complex64, x: Complex64, sheet: Sheet) -> Complex64 {
    let (inner, outer) = root_pair(k2, x);
    match sheet {
        Sheet::Inner => inner,
        Sheet::Outer => outer,
    }
}

/// Ξ(x), the smaller-modulus root.
pub fn xi(k: &Wavenumber, x: Complex64) -> Result<Complex64> {
    if x == C0 {
        return Err(Error::Domain("xi needs x != 0"));
    }
    let (inner, outer) = root_pair(k.k2, x);
    if outer.norm() - inner.norm() <= 1e-13 * outer.norm() {
        return Err(Error::DegenerateRoot(x));
    }
    Ok(inner)
}

/// `Υ(x) = x (y - 1/y)` on the given sheet.
pub fn upsilon(k: &Wavenumber, x: Complex64, sheet: Sheet) -> Result<Complex64> {
    if x == C0 {
        return Err(Error::Domain("upsilon needs x != 0"));
    }
    let y = root_on(k.k2, x, sheet);
    Ok(x * (y - 1.0 / y))
}

/// A point `(x, y)` of the dispersion surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x: Complex64,
    pub y: Complex64,
    pub sheet: Sheet,
}

impl SurfacePoint {
    /// The point over `x` on the requested sheet.
    pub fn over(k: &Wavenumber, x: Complex64, sheet: Sheet) -> Result<Self> {
        if x == C0 {
            return Err(Error::Domain("surface point needs x != 0"));
        }
        Ok(Self { x, y: root_on(k.k2, x, sheet), sheet })
    }

    /// Wraps an explicit pair, checking the dispersion residual.
    pub fn from_xy(k: &Wavenumber, x: Complex64, y: Complex64) -> Result<Self> {
        let p = Self { x, y, sheet: Sheet::of(y) };
        if p.residual(k)? > TOL_DISP {
            return Err(Error::Domain("point is not on the dispersion surface"));
        }
        Ok(p)
    }

    /// Scaled dispersion residual.
    pub fn residual(&self, k: &Wavenumber) -> Result<f64> {
        let d = dispersion(k, self.x, self.y)?;
        let scale = 1f64.max(
            self.x.norm() + self.x.inv().norm() + self.y.norm() + self.y.inv().norm(),
        );
        Ok(d.norm() / scale)
    }
}

/// `x^m y^n`.
pub fn plane_wave(m: i32, n: i32, p: &SurfacePoint) -> Complex64 {
    p.x.powi(m) * p.y.powi(n)
}

/// `x^m y^n` as `(ln|w|, arg w)`, safe for very large indices.
pub fn plane_wave_log(m: i32, n: i32, p: &SurfacePoint) -> (f64, f64) {
    let (lx, ax) = (p.x.norm().ln(), p.x.arg());
    let (ly, ay) = (p.y.norm().ln(), p.y.arg());
    let (m, n) = (m as f64, n as f64);
    let phase = (m * ax + n * ay).rem_euclid(2.0 * PI);
    (m * lx + n * ly, phase)
}

/// Density of Ψ in the `x` chart, `1/(x (y - 1/y))`.
pub fn psi_integrand(p: &SurfacePoint) -> Result<Complex64> {
    let d = p.y - 1.0 / p.y;
    if d.norm() < 1e-12 {
        return Err(Error::BranchPoint(d.norm()));
    }
    Ok(1.0 / (p.x * d))
}

/// Density of Ψ in the `y` chart, `-1/(y (x - 1/x))`.
pub fn psi_integrand_y(p: &SurfacePoint) -> Result<Complex64> {
    let d = p.x - 1.0 / p.x;
    if d.norm() < 1e-12 {
        return Err(Error::BranchPoint(d.norm()));
    }
    Ok(-1.0 / (p.y * d))
}

/// Incident plane wave `x_in^m y_in^n` travelling at angle `phi_in`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    pub phi_in: f64,
    pub x_in: Complex64,
    pub y_in: Complex64,
}

impl IncidentWave {
    pub fn point(&self) -> SurfacePoint {
        SurfacePoint { x: self.x_in, y: self.y_in, sheet: Sheet::of(self.y_in) }
    }

    pub fn value(&self, m: i32, n: i32) -> Complex64 {
        self.x_in.powi(m) * self.y_in.powi(n)
    }
}

fn solve2(j: [[Complex64; 2]; 2], r: [Complex64; 2]) -> [Complex64; 2] {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    [(r[0] * j[1][1] - j[0][1] * r[1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det]
}

/// Newton on `D̂ = 0`, `sin φ (x - 1/x) = cos φ (y - 1/y)`.
pub(crate) fn newton_real_wave(
    k2: Complex64,
    phi: f64,
    mut x: Complex64,
    mut y: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (s, c) = phi.sin_cos();
    for _ in 0..60 {
        let f1 = x + 1.0 / x + y + 1.0 / y - 4.0 + k2;
        let f2 = s * (x - 1.0 / x) - c * (y - 1.0 / y);
        let jac = [
            [C1 - 1.0 / (x * x), C1 - 1.0 / (y * y)],
            [s * (C1 + 1.0 / (x * x)), -c * (C1 + 1.0 / (y * y))],
        ];
        let d = solve2(jac, [-f1, -f2]);
        x += d[0];
        y += d[1];
        if d[0].norm().max(d[1].norm()) < 1e-15 * (1.0 + x.norm() + y.norm()) {
            return Ok((x, y));
        }
    }
    let res = (x + 1.0 / x + y + 1.0 / y - 4.0 + k2).norm();
    if res < 1e-12 {
        Ok((x, y))
    } else {
        Err(Error::NonConvergence { what: "real-wave Newton", residual: res })
    }
}

/// Tangent `(dx/dφ, dy/dφ)` of the real-wave line.
pub(crate) fn real_wave_tangent(phi: f64, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let (s, c) = phi.sin_cos();
    let jac = [
        [C1 - 1.0 / (x * x), C1 - 1.0 / (y * y)],
        [s * (C1 + 1.0 / (x * x)), -c * (C1 + 1.0 / (y * y))],
    ];
    let dphi = c * (x - 1.0 / x) + s * (y - 1.0 / y);
    let d = solve2(jac, [C0, -dphi]);
    (d[0], d[1])
}

/// Incident wave at angle `phi_in ∈ (-π/2, π/2)`.
///
/// At real `K` the real-wave line is `x = e^{iξ₁}`, `y = e^{iξ₂}`; the
/// solution found there is continued in `Im K` by eight Newton stages and
/// the candidate with `|x| < 1` is kept.
pub fn real_wave_point(k: &Wavenumber, phi_in: f64) -> Result<IncidentWave> {
    if !(phi_in.abs() < PI / 2.0) {
        return Err(Error::Angle(phi_in));
    }
    let kr = k.k.re;
    let target = 4.0 - kr * kr;
    let tan = phi_in.tan();
    let g = |x1: f64| -> Option<f64> {
        let s2 = tan * x1.sin();
        (s2.abs() <= 1.0).then(|| 2.0 * x1.cos() + 2.0 * s2.asin().cos() - target)
    };
    let samples = 4000;
    let mut roots = Vec::new();
    for i in 0..samples {
        let a = 1e-9 + (PI - 2e-9) * i as f64 / samples as f64;
        let b = 1e-9 + (PI - 2e-9) * (i + 1) as f64 / samples as f64;
        let (Some(ga), Some(gb)) = (g(a), g(b)) else { continue };
        if ga * gb <= 0.0 {
            let (mut lo, mut hi, mut glo) = (a, b, ga);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                match g(mid) {
                    Some(gm) if gm * glo > 0.0 => {
                        lo = mid;
                        glo = gm;
                    }
                    _ => hi = mid,
                }
                if hi - lo < 1e-16 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    let stages = 8;
    for x1 in roots {
        let x2 = (tan * x1.sin()).asin();
        for sign in [1.0, -1.0] {
            let mut x = Complex64::from_polar(1.0, sign * x1);
            let mut y = Complex64::from_polar(1.0, sign * x2);
            for st in 1..=stages {
                let kk = Complex64::new(kr, k.k.im * st as f64 / stages as f64);
                (x, y) = newton_real_wave(kk * kk, phi_in, x, y)?;
            }
            if x.norm() < 1.0 {
                let wave = IncidentWave { phi_in, x_in: x, y_in: y };
                check_incident(k, &wave)?;
                return Ok(wave);
            }
        }
    }
    Err(Error::NonConvergence { what: "real-wave point", residual: f64::NAN })
}

fn check_incident(k: &Wavenumber, w: &IncidentWave) -> Result<()> {
    let d = dispersion(k, w.x_in, w.y_in)?.norm();
    let ratio = (w.x_in - 1.0 / w.x_in) / (w.y_in - 1.0 / w.y_in);
    if d > TOL_DISP || ratio.im.abs() > 1e-8 * ratio.norm() {
        return Err(Error::NonConvergence { what: "real-wave branch check", residual: d });
    }
    Ok(())
}

/// Samples of the closed real-wave loop at `φ_j = 2πj/M`, starting from the
/// branch point `B₁ = (η₂₁, 1)` at `φ = 0` and running with increasing `φ`.
pub fn real_wave_loop(k: &Wavenumber, samples: usize) -> Result<Vec<SurfacePoint>> {
    let h = 2.0 * PI / samples as f64;
    let mut x = k.eta.eta21;
    let mut y = C1;
    let mut out = Vec::with_capacity(samples);
    for j in 0..samples {
        let phi = h * j as f64;
        if j > 0 {
            // Two-stage predictor, then Newton.
            let prev = h * (j - 1) as f64;
            let (dx, dy) = real_wave_tangent(prev, x, y);
            let (dx2, dy2) = real_wave_tangent(phi, x + h * dx, y + h * dy);
            x += 0.5 * h * (dx + dx2);
            y += 0.5 * h * (dy + dy2);
        }
        (x, y) = newton_real_wave(k.k2, phi, x, y)?;
        out.push(SurfacePoint { x, y, sheet: Sheet::of(y) });
    }
    let (dx, dy) = real_wave_tangent(2.0 * PI - h, x, y);
    let (xe, ye) = newton_real_wave(k.k2, 2.0 * PI, x + h * dx, y + h * dy)?;
    if (xe - k.eta.eta21).norm() > 1e-8 || (ye - C1).norm() > 1e-8 {
        return Err(Error::Continuation("real-wave loop does not close"));
    }
    Ok(out)
}

/// The point of the real-wave loop at angle `phi` (any real value, taken
/// modulo 2π), continued from `B₁`.
pub fn real_wave_loop_point(k: &Wavenumber, phi: f64) -> Result<SurfacePoint> {
    let phi = phi.rem_euclid(2.0 * PI);
    let steps = ((phi / 0.01).ceil() as usize).max(1);
    let h = phi / steps as f64;
    let (mut x, mut y) = (k.eta.eta21, C1);
    for j in 1..=steps {
        let prev = h * (j - 1) as f64;
        let (dx, dy) = real_wave_tangent(prev, x, y);
        (x, y) = newton_real_wave(k.k2, h * j as f64, x + h * dx, y + h * dy)?;
    }
    Ok(SurfacePoint { x, y, sheet: Sheet::of(y) })
}

/// The two real-wave points whose group direction is parallel to `(m, n)`:
/// the solutions of `(y - 1/y)/(x - 1/x) = n/m` at angles `atan2(n, m)` and
/// that angle plus π.
pub fn saddle_points(k: &Wavenumber, m: i32, n: i32) -> Result<(SurfacePoint, SurfacePoint)> {
    if m == 0 && n == 0 {
        return Err(Error::Domain("saddle points need (m, n) != (0, 0)"));
    }
    let phi = (n as f64).atan2(m as f64);
    Ok((real_wave_loop_point(k, phi)?, real_wave_loop_point(k, phi + PI)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k0() -> Wavenumber {
        Wavenumber::from_parts(1.2, 0.05).unwrap()
    }

    #[test]
    fn rejects_non_absorbing_wavenumber() {
        assert!(matches!(Wavenumber::from_parts(1.2, 0.0), Err(Error::Absorption(_))));
        assert!(matches!(Wavenumber::from_parts(1.2, -0.1), Err(Error::Absorption(_))));
    }

    #[test]
    fn dispersion_at_unit_point_is_k_squared() {
        let k = k0();
        let d = dispersion(&k, C1, C1).unwrap();
        assert!((d - k.k2()).norm() < 1e-15);
        assert!(dispersion(&k, C0, C1).is_err());
    }

    #[test]
    fn branch_points_lie_on_surface_with_y_plus_minus_one() {
        let k = k0();
        let e = k.branch_points();
        assert!(dispersion(&k, e.eta21, C1).unwrap().norm() < 1e-14);
        assert!(dispersion(&k, e.eta11, C1).unwrap().norm() < 1e-14);
        assert!(dispersion(&k, e.eta22, -C1).unwrap().norm() < 1e-14);
        assert!((e.eta11 * e.eta21 - C1).norm() < 1e-15);
        assert!((e.eta12 * e.eta22 - C1).norm() < 1e-15);
        assert!(e.eta21.norm() < 1.0 && e.eta22.norm() < 1.0);
        assert!(e.eta11.norm() > 1.0 && e.eta12.norm() > 1.0);
    }

    #[test]
    fn branch_point_values_for_reference_wavenumber() {
        let e = *k0().branch_points();
        assert!((e.eta21 - Complex64::new(0.26370237364196614, 0.9016685274515338)).norm() < 1e-12);
        assert!((e.eta11 - Complex64::new(0.2987976263580337, -1.0216685274515336)).norm() < 1e-12);
        assert!((e.eta22.norm() - 0.2307).abs() < 1e-4);
        assert!((e.eta12.norm() - 4.3337).abs() < 1e-4);
    }

    #[test]
    fn xi_is_a_root_with_modulus_below_one() {
        let k = k0();
        let x = Complex64::new(0.5, 0.1);
        let y = xi(&k, x).unwrap();
        assert!(y.norm() < 1.0);
        assert!(dispersion(&k, x, y).unwrap().norm() < 1e-12);
        for th in [0.0, PI / 3.0, PI, 1.5 * PI] {
            assert!(xi(&k, Complex64::from_polar(1.0, th)).unwrap().norm() < 1.0);
        }
    }

    #[test]
    fn upsilon_sheets_differ_by_sign() {
        let k = k0();
        let x = Complex64::new(0.7, -0.2);
        let a = upsilon(&k, x, Sheet::Inner).unwrap();
        let b = upsilon(&k, x, Sheet::Outer).unwrap();
        assert!((a + b).norm() < 1e-14);
        let q = k.branch_points().quartic(x);
        assert!((a * a - q).norm() < 1e-12 * q.norm());
        let at_bp = upsilon(&k, k.branch_points().eta21, Sheet::Inner).unwrap();
        assert!(at_bp.norm() < 1e-7);
    }

    #[test]
    fn chart_change_identity_along_the_curve() {
        // dx/(x(y - 1/y)) = -dy/(y(x - 1/x)) with dy/dx from implicit differentiation.
        let k = k0();
        let p = SurfacePoint::over(&k, Complex64::new(0.4, 0.6), Sheet::Inner).unwrap();
        let dydx = -(C1 - 1.0 / (p.x * p.x)) / (C1 - 1.0 / (p.y * p.y));
        let lhs = psi_integrand(&p).unwrap();
        let rhs = psi_integrand_y(&p).unwrap() * dydx;
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn psi_decays_like_inverse_square() {
        let k = k0();
        let mut prev = 0.0;
        for r in [1e2, 1e3, 1e4] {
            let p = SurfacePoint::over(&k, Complex64::from_polar(r, 0.3), Sheet::Inner).unwrap();
            let v = (psi_integrand(&p).unwrap() * p.x * p.x).norm();
            if prev > 0.0 {
                assert!((v - prev).abs() < 0.05 * prev);
            }
            prev = v;
        }
    }

    #[test]
    fn plane_wave_satisfies_stencil() {
        let k = k0();
        let p = SurfacePoint::over(&k, Complex64::new(0.5, 0.1), Sheet::Inner).unwrap();
        let (m, n) = (2, 3);
        let w = |a, b| plane_wave(a, b, &p);
        let r = w(m + 1, n) + w(m - 1, n) + w(m, n + 1) + w(m, n - 1) + k.shift() * w(m, n);
        assert!(r.norm() < 1e-12 * w(m, n).norm());
        let direct = p.x * p.x * p.y * p.y * p.y;
        assert!((w(2, 3) - direct).norm() < 1e-15);
        let (lm, ph) = plane_wave_log(2, 3, &p);
        assert!((lm.exp() - direct.norm()).abs() < 1e-14);
        assert!((Complex64::from_polar(1.0, ph) - direct / direct.norm()).norm() < 1e-13);
    }

    #[test]
    fn real_wave_point_reference() {
        let k = k0();
        let w = real_wave_point(&k, PI / 5.0).unwrap();
        assert!((w.x_in - Complex64::new(0.4773777313858841, 0.8208865475486113)).norm() < 1e-12);
        assert!((w.y_in - Complex64::new(0.7589683574863555, 0.6136246055216766)).norm() < 1e-12);
        let tan = (w.y_in - 1.0 / w.y_in) / (w.x_in - 1.0 / w.x_in);
        assert!((tan - Complex64::new((PI / 5.0).tan(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn diagonal_incidence_has_equal_roots() {
        let w = real_wave_point(&k0(), PI / 4.0).unwrap();
        assert!((w.x_in - w.y_in).norm() < 1e-12);
    }

    #[test]
    fn loop_passes_through_incident_and_opposite_branch_point() {
        let k = k0();
        let pts = real_wave_loop(&k, 400).unwrap();
        assert!((pts[200].x - k.branch_points().eta11).norm() < 1e-10);
        let w = real_wave_point(&k, PI / 5.0).unwrap();
        let p = real_wave_loop_point(&k, PI / 5.0).unwrap();
        assert!((p.x - w.x_in).norm() < 1e-12 && (p.y - w.y_in).norm() < 1e-12);
    }

    #[test]
    fn saddle_points_on_the_diagonal_have_x_equal_y() {
        let k = k0();
        let (a, b) = saddle_points(&k, 1, 1).unwrap();
        assert!((a.x - a.y).norm() < 1e-12 && (b.x - b.y).norm() < 1e-12);
        let (c, d) = saddle_points(&k, 1, 0).unwrap();
        assert!((c.y - C1).norm() < 1e-12 && (d.y - C1).norm() < 1e-12);
    }
}
