//! Diffraction by the Dirichlet right angle `{m >= 0, n >= 0}`.
//!
//! The transformant lives on the three-sheeted cover `H₃` of the dispersion
//! surface. In the elliptic coordinate `t = ∫ Ψ` (measured from the branch
//! point `B₁ = (η₂₁, 1)`) it is a sum of four Weierstrass-type zeta
//! functions on the lattice `(ω₁, 3ω₂)`.
//!
//! Angles on `H₃` run over `[0, 6π)`. The real-wave loop carries `t` from
//! `0` at `α = 0` to `ω₂` at `α = 2π`. The lines `α = kπ/2` (`|x| = 1` or
//! `|y| = 1` on a fixed sheet) each carry `∫Ψ = ω₁`.

use crate::error::{Error, Result};
use crate::halfline::{nearest_quarter, node_angle, InfinityKind};
use crate::lattice::{
    newton_real_wave, real_wave_loop, real_wave_point, real_wave_tangent, root_on, root_pair, IncidentWave,
    Sheet, Wavenumber,
};
use crate::table::FieldTable;
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub const DEFAULT_LOOP_GRID: usize = 2048;
pub const DEFAULT_LINE_GRID: usize = 1024;
pub const DEFAULT_ZETA_TRUNC: usize = 200;
/// Signs of the transformant poles at `t₀+ω₂`, `2ω₂-t₀`, `t₀+5ω₂/2`, `ω₂/2-t₀`.
pub const POLE_SIGNS: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

fn gauss_nodes(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n.try_into().expect("nonzero degree"));
    // Map [-1, 1] to [0, 1].
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

/// Mean and spectral antiderivative of periodic samples `g_j = g(2πj/M)`:
/// returns `(ĝ₀, a)` with `∫₀^{θ_j} g = ĝ₀ θ_j + a_j`, and the Fourier
/// coefficients for evaluation off the grid.
fn spectral_antiderivative(g: &[Complex64]) -> (Vec<Complex64>, Vec<f64>, Vec<Complex64>) {
    let m = g.len();
    let mut planner = FftPlanner::new();
    let mut buf = g.to_vec();
    planner.plan_fft_forward(m).process(&mut buf);
    let coeffs: Vec<Complex64> = buf.iter().map(|c| c / m as f64).collect();
    let freqs: Vec<f64> = (0..m).map(|j| if j < m / 2 { j as f64 } else { j as f64 - m as f64 }).collect();
    let mut h: Vec<Complex64> =
        coeffs.iter().zip(&freqs).map(|(c, &f)| if f == 0.0 { ZERO } else { c / (I * f) }).collect();
    planner.plan_fft_inverse(m).process(&mut h);
    let h0 = h[0];
    let anti = h.iter().map(|v| v - h0).collect();
    (coeffs, freqs, anti)
}

/// `∮ Ψ` over `|x| = 1` on the inner sheet by the trapezoid rule.
/// `clockwise` reverses the orientation.
pub fn unit_circle_period(k: &Wavenumber, grid: usize, clockwise: bool) -> Complex64 {
    let dir = if clockwise { -1.0 } else { 1.0 };
    let mut acc = ZERO;
    for j in 0..grid {
        let x = Complex64::from_polar(1.0, dir * 2.0 * PI * j as f64 / grid as f64);
        let y = root_pair(k.k2(), x).0;
        acc += dir * I / (y - 1.0 / y);
    }
    acc * (2.0 * PI / grid as f64)
}

/// Arithmetic-geometric mean with the sign of each geometric mean chosen
/// so that `|a - b| <= |a + b|`.
pub fn agm(mut a: Complex64, mut b: Complex64) -> Complex64 {
    for _ in 0..100 {
        let an = 0.5 * (a + b);
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        let done = (an - bn).norm() <= 1e-16 * an.norm();
        a = an;
        b = bn;
        if done {
            break;
        }
    }
    a
}

/// Periods from complete elliptic integrals of `1/√(quartic)`:
/// `2π/AGM(√((η₂₁-η₁₁)(η₂₂-η₁₂)), √((η₂₁-η₁₂)(η₂₂-η₁₁)))` and the same with
/// the roles of `η₁₁` and `η₂₂` swapped. These equal the cycle integrals
/// of `Ψ` up to sign and a factor `i`, and the second only modulo the first.
pub fn agm_periods(k: &Wavenumber) -> (Complex64, Complex64) {
    let e = k.branch_points();
    let a = 2.0 * PI
        / agm(((e.eta21 - e.eta11) * (e.eta22 - e.eta12)).sqrt(), ((e.eta21 - e.eta12) * (e.eta22 - e.eta11)).sqrt());
    let b = 2.0 * PI
        / agm(((e.eta21 - e.eta22) * (e.eta11 - e.eta12)).sqrt(), ((e.eta21 - e.eta12) * (e.eta11 - e.eta22)).sqrt());
    (a, b)
}

/// Periods, the incident-point value `t₀` and the `t` values of the twelve
/// infinity points of `H₃`.
#[derive(Debug, Clone)]
pub struct EllipticData {
    pub k: Wavenumber,
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub t0: Complex64,
    /// `t` at the infinity point `α = (2k+1)π/4`, `k = 0..12`.
    pub t_base: [Complex64; 12],
    pub loop_grid: usize,
    rw_coeffs: Vec<Complex64>,
    rw_freqs: Vec<f64>,
}

impl EllipticData {
    pub fn new(k: &Wavenumber, phi_in: f64) -> Result<Self> {
        Self::with_grid(k, phi_in, DEFAULT_LOOP_GRID)
    }

    pub fn with_grid(k: &Wavenumber, phi_in: f64, loop_grid: usize) -> Result<Self> {
        if !(phi_in > 0.0 && phi_in < PI / 2.0) {
            return Err(Error::Angle(phi_in));
        }
        if loop_grid < 64 || !loop_grid.is_multiple_of(2) {
            return Err(Error::Parameter("loop grid must be even and at least 64"));
        }
        let omega1 = unit_circle_period(k, loop_grid, false);

        // dt/dφ along the real-wave loop; either form of Ψ is used away
        // from its vanishing denominator.
        let pts = real_wave_loop(k, loop_grid)?;
        let g: Vec<Complex64> = pts
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let phi = 2.0 * PI * j as f64 / loop_grid as f64;
                let (dx, dy) = real_wave_tangent(phi, p.x, p.y);
                if phi.cos().abs() < 0.7 {
                    dx / (p.x * (p.y - 1.0 / p.y))
                } else {
                    -dy / (p.y * (p.x - 1.0 / p.x))
                }
            })
            .collect();
        let (rw_coeffs, rw_freqs, _) = spectral_antiderivative(&g);
        let omega2 = rw_coeffs[0] * 2.0 * PI;

        let ratio = omega1 / omega2;
        if ratio.im.abs() < 1e-3 {
            return Err(Error::CycleMisidentification(ratio.im));
        }

        let mut data = Self {
            k: *k,
            omega1,
            omega2,
            t0: ZERO,
            t_base: [ZERO; 12],
            loop_grid,
            rw_coeffs,
            rw_freqs,
        };
        data.t0 = data.t_real_wave(phi_in);

        // The loop must pass through the incident point at φ_in.
        let inc = real_wave_point(k, phi_in)?;
        let j = (phi_in / (2.0 * PI) * loop_grid as f64).round() as usize;
        let (x, y) = newton_real_wave(k.k2(), phi_in, pts[j].x, pts[j].y)?;
        if (x - inc.x_in).norm() > 1e-8 || (y - inc.y_in).norm() > 1e-8 {
            return Err(Error::Continuation("real-wave loop misses the incident point"));
        }

        let t_j1 = t_to_origin(k)?;
        let half = 0.5 * omega2;
        let base = [t_j1, half - t_j1, half + t_j1, omega2 - t_j1];
        for (kk, slot) in data.t_base.iter_mut().enumerate() {
            *slot = base[kk % 4] + (kk / 4) as f64 * omega2;
        }
        Ok(data)
    }

    /// `t` along the real-wave loop at angle `phi` (any real value; each
    /// full turn adds `ω₂`).
    pub fn t_real_wave(&self, phi: f64) -> Complex64 {
        let mut t = self.rw_coeffs[0] * phi;
        for (c, &f) in self.rw_coeffs.iter().zip(&self.rw_freqs).skip(1) {
            t += c * ((I * f * phi).exp() - 1.0) / (I * f);
        }
        t
    }

    /// The lattice of the transformant, `(ω₁, 3ω₂)`.
    pub fn transformant_lattice(&self) -> (Complex64, Complex64) {
        (self.omega1, 3.0 * self.omega2)
    }

    /// Smallest `|s ω₂ + a ω₁ - target|` over `s = ±1`, `|a| <= 4`.
    pub fn omega2_mismatch(&self, target: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for s in [-1.0, 1.0] {
            for a in -4..=4 {
                best = best.min((s * self.omega2 + a as f64 * self.omega1 - target).norm());
            }
        }
        best
    }
}

/// `t(J₁)`: `∫Ψ` from `B₁` straight to `x = 0` on the inner sheet, with
/// `x = η₂₁(1 - s²)` to remove the square-root endpoint behaviour.
fn t_to_origin(k: &Wavenumber) -> Result<Complex64> {
    let e21 = k.branch_points().eta21;
    let mut acc = ZERO;
    for (s, w) in gauss_nodes(64) {
        let x = e21 * (1.0 - s * s);
        let y = root_pair(k.k2(), x).0;
        // |y| -> 1 only at the branch point itself (s -> 0).
        if s > 0.2 && y.norm() > 0.999 {
            return Err(Error::Continuation("path to J1 leaves the inner sheet"));
        }
        acc += w * (-2.0 * s * e21) / (x * (y - 1.0 / y));
    }
    Ok(acc)
}

/// `∫Ψ` along a polyline in `x`, starting with `y = y_start`; `y` follows
/// the nearest root at each quadrature node.
pub fn t_of(k: &Wavenumber, path: &[Complex64], y_start: Complex64) -> Result<Complex64> {
    let nodes = gauss_nodes(8);
    let mut y = y_start;
    let mut t = ZERO;
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        for &(s, w) in &nodes {
            let x = a + (b - a) * s;
            let (r1, r2) = root_pair(k.k2(), x);
            let (d1, d2) = ((r1 - y).norm(), (r2 - y).norm());
            if (d1 - d2).abs() < 0.1 * (r1 - r2).norm() {
                return Err(Error::Continuation("root matching is ambiguous; refine the path"));
            }
            y = if d1 < d2 { r1 } else { r2 };
            t += w * (b - a) / (x * (y - 1.0 / y));
        }
    }
    Ok(t)
}

/// Distance from `z` to the lattice `a w1 + b w2`.
pub fn lattice_distance(z: Complex64, w1: Complex64, w2: Complex64) -> f64 {
    // Real coordinates of z in the basis (w1, w2).
    let det = w1.re * w2.im - w1.im * w2.re;
    let a = (z.re * w2.im - z.im * w2.re) / det;
    let b = (w1.re * z.im - w1.im * z.re) / det;
    let mut best = f64::INFINITY;
    for da in -1..=1 {
        for db in -1..=1 {
            let p = (a.round() + da as f64) * w1 + (b.round() + db as f64) * w2;
            best = best.min((z - p).norm());
        }
    }
    best
}

/// Value of the truncated zeta-type sum with an error bound for the
/// omitted lattice points.
#[derive(Debug, Clone, Copy)]
pub struct ZetaValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `1/t + Σ' [1/(t-w) + 1/w + t/w²]` over `w = k w1 + l w2`,
/// `|k|, |l| <= n_trunc`.
///
/// Beyond `|w| > 2|t|` each term is at most `2|t|²/|w|³`; the reported
/// bound integrates that over the plane outside the truncation box.
pub fn zeta_e(t: Complex64, w1: Complex64, w2: Complex64, n_trunc: usize) -> Result<ZetaValue> {
    let d = lattice_distance(t, w1, w2);
    if d < 1e-8 {
        return Err(Error::PoleProximity(d));
    }
    let n = n_trunc as i64;
    let mut s = 1.0 / t;
    for k in -n..=n {
        for l in -n..=n {
            if k == 0 && l == 0 {
                continue;
            }
            let w = k as f64 * w1 + l as f64 * w2;
            s += 1.0 / (t - w) + 1.0 / w + t / (w * w);
        }
    }
    let area = (w1.conj() * w2).im.abs();
    let rho = (n_trunc as f64 + 0.5) * area / w1.norm().max(w2.norm());
    let tail_bound = 4.0 * PI * t.norm_sqr() / (area * rho);
    Ok(ZetaValue { value: s, tail_bound })
}

/// The same function summed exactly along rows: each row `l` of the
/// lattice is a cotangent, and rows decay geometrically in `|l|`.
#[derive(Debug, Clone, Copy)]
pub struct LatticeZeta {
    pub w1: Complex64,
    pub w2: Complex64,
    p: Complex64,
    rows: i32,
}

impl LatticeZeta {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        let p = PI / w1;
        let decay = (p * w2).im.abs();
        if decay < 1e-3 {
            return Err(Error::CycleMisidentification(decay));
        }
        // Row l contributes O(exp(-2|l| decay)).
        let rows = ((42.0 / (2.0 * decay)).ceil() as i32 + 1).min(200);
        Ok(Self { w1, w2, p, rows })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let p = self.p;
        let cot = |w: Complex64| w.cos() / w.sin();
        let mut s = p * cot(p * z) + z * p * p / 3.0;
        for l in 1..=self.rows {
            for sgn in [-1.0, 1.0] {
                let lw = sgn * l as f64 * self.w2;
                let sn = (p * lw).sin();
                s += p * (cot(p * (z - lw)) + cot(p * lw)) + z * p * p / (sn * sn);
            }
        }
        s
    }

    /// `(ζ(t+w1) - ζ(t), ζ(t+w2) - ζ(t))`.
    pub fn quasi_periods(&self, t: Complex64) -> (Complex64, Complex64) {
        let z = self.eval(t);
        (self.eval(t + self.w1) - z, self.eval(t + self.w2) - z)
    }
}

/// `Ã(t) = (2πi)⁻¹ Σ ±ζ(t - t_j)` on the lattice `(ω₁, 3ω₂)`.
#[derive(Debug, Clone)]
pub struct WedgeTransformant {
    pub elliptic: EllipticData,
    pub pole_ts: [Complex64; 4],
    zeta: LatticeZeta,
}

impl WedgeTransformant {
    pub fn new(elliptic: EllipticData) -> Result<Self> {
        let (w1, w2) = elliptic.transformant_lattice();
        let zeta = LatticeZeta::new(w1, w2)?;
        let (t0, o2) = (elliptic.t0, elliptic.omega2);
        let pole_ts = [t0 + o2, 2.0 * o2 - t0, t0 + 2.5 * o2, 0.5 * o2 - t0];
        Ok(Self { elliptic, pole_ts, zeta })
    }

    pub fn zeta(&self) -> &LatticeZeta {
        &self.zeta
    }

    pub fn eval(&self, t: Complex64) -> Result<Complex64> {
        let mut s = ZERO;
        for (tp, sign) in self.pole_ts.iter().zip(POLE_SIGNS) {
            let d = lattice_distance(t - tp, self.zeta.w1, self.zeta.w2);
            if d < 1e-8 {
                return Err(Error::PoleProximity(d));
            }
            s += sign * self.zeta.eval(t - tp);
        }
        Ok(s / (2.0 * PI * I))
    }

    fn eval_unchecked(&self, t: Complex64) -> Complex64 {
        self.pole_ts.iter().zip(POLE_SIGNS).map(|(tp, s)| s * self.zeta.eval(t - tp)).sum::<Complex64>()
            / (2.0 * PI * I)
    }

    /// Residues of `Ã dt` at the four poles by small-circle quadrature.
    pub fn t_residues(&self, radius: f64, nodes: usize) -> [Complex64; 4] {
        self.pole_ts.map(|tp| {
            (0..nodes)
                .map(|j| {
                    let dz = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
                    self.eval_unchecked(tp + dz) * dz
                })
                .sum::<Complex64>()
                / nodes as f64
        })
    }
}

/// One of the lines `α = kπ/2`, sampled on a uniform grid in its angle
/// parameter, with `t` along it.
#[derive(Debug, Clone)]
struct BandLine {
    x: Vec<Complex64>,
    y: Vec<Complex64>,
    /// `Ψ/dθ`.
    g: Vec<Complex64>,
    t: Vec<Complex64>,
    /// `∮Ψ` over the line.
    period: Complex64,
}

fn band_line(k: &Wavenumber, kind: usize, t_start: Complex64, grid: usize) -> BandLine {
    // kind 0: |y|=1 clockwise, x inner; 1: |x|=1 anticlockwise, y inner;
    // 2: |y|=1 anticlockwise, x outer; 3: |x|=1 clockwise, y outer.
    let (dir, sheet) = match kind {
        0 => (-1.0, Sheet::Inner),
        1 => (1.0, Sheet::Inner),
        2 => (1.0, Sheet::Outer),
        _ => (-1.0, Sheet::Outer),
    };
    let mut x = Vec::with_capacity(grid);
    let mut y = Vec::with_capacity(grid);
    let mut g = Vec::with_capacity(grid);
    for j in 0..grid {
        let u = Complex64::from_polar(1.0, dir * 2.0 * PI * j as f64 / grid as f64);
        let v = root_on(k.k2(), u, sheet);
        if kind % 2 == 1 {
            x.push(u);
            y.push(v);
            g.push(I * dir / (v - 1.0 / v));
        } else {
            x.push(v);
            y.push(u);
            g.push(-I * dir / (v - 1.0 / v));
        }
    }
    let (coeffs, _, anti) = spectral_antiderivative(&g);
    let t = (0..grid)
        .map(|j| t_start + coeffs[0] * (2.0 * PI * j as f64 / grid as f64) + anti[j])
        .collect();
    BandLine { x, y, g, t, period: coeffs[0] * 2.0 * PI }
}

/// Incident-wave poles of `A Ψ` on `H₃`: angle, sign of the residue and
/// the point `(x, y)`.
fn pole_points(inc: &IncidentWave) -> [(f64, f64, Complex64, Complex64); 4] {
    let (x, y, phi) = (inc.x_in, inc.y_in, inc.phi_in);
    [
        (phi + 2.0 * PI, -1.0, x, y),
        (4.0 * PI - phi, 1.0, x, 1.0 / y),
        (phi + 5.0 * PI, -1.0, 1.0 / x, 1.0 / y),
        (PI - phi, 1.0, 1.0 / x, y),
    ]
}

/// The right-angle diffraction problem.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub transformant: WedgeTransformant,
    pub incident: IncidentWave,
    pub line_grid: usize,
    lines: Vec<BandLine>,
    /// `Ã` on line `α = kπ/2`, `k = 0..12`.
    line_a: Vec<Vec<Complex64>>,
}

impl Wedge {
    pub fn new(k: &Wavenumber, phi_in: f64) -> Result<Self> {
        Self::with_grids(k, phi_in, DEFAULT_LOOP_GRID, DEFAULT_LINE_GRID)
    }

    pub fn with_grids(k: &Wavenumber, phi_in: f64, loop_grid: usize, line_grid: usize) -> Result<Self> {
        if line_grid < 64 || !line_grid.is_multiple_of(2) {
            return Err(Error::Parameter("line grid must be even and at least 64"));
        }
        let elliptic = EllipticData::with_grid(k, phi_in, loop_grid)?;
        let incident = real_wave_point(k, phi_in)?;
        let lines: Vec<BandLine> = (0..4)
            .map(|kind| band_line(k, kind, elliptic.t_real_wave(kind as f64 * PI / 2.0), line_grid))
            .collect();
        for l in &lines {
            if (l.period - elliptic.omega1).norm() > 1e-10 * elliptic.omega1.norm() {
                return Err(Error::CycleMisidentification((l.period - elliptic.omega1).norm()));
            }
        }
        let transformant = WedgeTransformant::new(elliptic)?;
        let o2 = transformant.elliptic.omega2;
        let mut line_a = Vec::with_capacity(12);
        for kk in 0..12 {
            let shift = (kk / 4) as f64 * o2;
            let vals = lines[kk % 4]
                .t
                .iter()
                .map(|&t| transformant.eval(t + shift))
                .collect::<Result<Vec<_>>>()?;
            line_a.push(vals);
        }
        Ok(Self { transformant, incident, line_grid, lines, line_a })
    }

    pub fn elliptic(&self) -> &EllipticData {
        &self.transformant.elliptic
    }

    /// `∫ w A Ψ` over the line `α = kk π/2`.
    fn line_integral(&self, kk: i32, m: i32, n: i32) -> Complex64 {
        let kk = kk.rem_euclid(12) as usize;
        let line = &self.lines[kk % 4];
        let a = &self.line_a[kk];
        let mut acc = ZERO;
        for j in 0..self.line_grid {
            acc += line.x[j].powi(m) * line.y[j].powi(n) * a[j] * line.g[j];
        }
        acc * (2.0 * PI / self.line_grid as f64)
    }

    /// Total field on the physical sheet `π/2 <= φ <= 2π`.
    pub fn wedge_field(&self, m: i32, n: i32) -> Result<Complex64> {
        if m > 0 && n > 0 {
            return Err(Error::Domain("node lies inside the scatterer"));
        }
        if (m, n) == (0, 0) {
            return Ok(ZERO);
        }
        let mut phi = node_angle(m, n);
        if phi < PI / 2.0 - 1e-12 {
            phi += 2.0 * PI;
        }
        self.wedge_field_sector(m, n, nearest_quarter(phi))
    }

    /// Field on `H₃` at angle `big_phi ∈ [π/2, 13π/2)` over the node `(m, n)`.
    pub fn wedge_field_on_cover(&self, m: i32, n: i32, big_phi: f64) -> Result<Complex64> {
        if !(PI / 2.0 - 1e-12..6.5 * PI).contains(&big_phi) {
            return Err(Error::Angle(big_phi));
        }
        let off = (big_phi - node_angle(m, n)).rem_euclid(2.0 * PI);
        if off.min(2.0 * PI - off) > 1e-9 {
            return Err(Error::Parameter("cover angle does not lie over the node"));
        }
        self.wedge_field_sector(m, n, nearest_quarter(big_phi))
    }

    /// Field from the contour of quarter-turn `j`: the lines at
    /// `α = (j+1)π/2` and `α = (j+5)π/2` plus the incident poles between them.
    pub fn wedge_field_sector(&self, m: i32, n: i32, j: i32) -> Result<Complex64> {
        let a = j + 1;
        let mut val = self.line_integral(a + 4, m, n) - self.line_integral(a, m, n);
        let lo = a as f64 * PI / 2.0;
        for (alpha, sign, px, py) in pole_points(&self.incident) {
            let alm = alpha.rem_euclid(6.0 * PI);
            for cand in [alm, alm + 6.0 * PI] {
                if lo < cand && cand < lo + 2.0 * PI {
                    val -= sign * px.powi(m) * py.powi(n);
                }
            }
        }
        Ok(val)
    }

    /// The same field as a sum of small-circle quadratures around the
    /// enclosed infinity points. `t` near each point is `t_base` plus a
    /// radial Gauss integral of `Ψ`. Accurate only at low order.
    pub fn wedge_field_small_circles(&self, m: i32, n: i32, radius: f64, nodes: usize) -> Result<Complex64> {
        if m > 0 && n > 0 {
            return Err(Error::Domain("node lies inside the scatterer"));
        }
        let mut phi = node_angle(m, n);
        if phi < PI / 2.0 - 1e-12 {
            phi += 2.0 * PI;
        }
        let lo = (nearest_quarter(phi) + 1) as f64 * PI / 2.0;
        let radial = gauss_nodes(40);
        let k2 = self.elliptic().k.k2();
        let mut total = ZERO;
        for kk in 0..12 {
            let al = (2 * kk + 1) as f64 * PI / 4.0;
            if !(lo < al && al < lo + 2.0 * PI) && !(lo < al + 6.0 * PI && al + 6.0 * PI < lo + 2.0 * PI) {
                continue;
            }
            let kind = InfinityKind::at_index(kk);
            let sheet = kind.sheet();
            let local = |z: Complex64| {
                let x = if kind.x_is_zero() { z } else { 1.0 / z };
                let y = root_on(k2, x, sheet);
                let d = 1.0 / (x * (y - 1.0 / y));
                (x, y, if kind.x_is_zero() { d } else { -d / (z * z) })
            };
            let mut acc = ZERO;
            for q in 0..nodes {
                let z = Complex64::from_polar(radius, 2.0 * PI * q as f64 / nodes as f64);
                let dt: Complex64 = radial.iter().map(|&(s, w)| w * z * local(z * s).2).sum();
                let (x, y, dens) = local(z);
                let a = self.transformant.eval(self.elliptic().t_base[kk] + dt)?;
                acc += x.powi(m) * y.powi(n) * a * dens * z;
            }
            total += acc / nodes as f64;
        }
        Ok(2.0 * PI * I * total)
    }

    /// Residues of `A Ψ` at the four incident poles, by quadrature on a
    /// circle of radius `radius` in `x`. `t` on the circle is the pole's
    /// `t` plus `∫Ψ` along the radius. Expected `(-1, 1, -1, 1)/(2πi)`.
    pub fn pole_residues(&self, radius: f64, nodes: usize) -> Result<[Complex64; 4]> {
        let k2 = self.elliptic().k.k2();
        let radial = gauss_nodes(20);
        let mut out = [ZERO; 4];
        for (i, (_, _, px, py)) in pole_points(&self.incident).into_iter().enumerate() {
            let tp = self.transformant.pole_ts[i];
            let follow = |x: Complex64| {
                let (r1, r2) = root_pair(k2, x);
                if (r1 - py).norm() < (r2 - py).norm() { r1 } else { r2 }
            };
            let mut acc = ZERO;
            for q in 0..nodes {
                let dz = Complex64::from_polar(radius, 2.0 * PI * q as f64 / nodes as f64);
                let dt: Complex64 = radial
                    .iter()
                    .map(|&(s, w)| {
                        let x = px + dz * s;
                        let y = follow(x);
                        w * dz / (x * (y - 1.0 / y))
                    })
                    .sum();
                let x = px + dz;
                let y = follow(x);
                acc += self.transformant.eval(tp + dt)? / (x * (y - 1.0 / y)) * dz;
            }
            out[i] = acc / nodes as f64;
        }
        Ok(out)
    }

    /// Field over `|m|, |n| <= n_max`; nodes inside the scatterer hold 0.
    pub fn wedge_table(&self, n_max: i32) -> Result<FieldTable> {
        let el = self.elliptic();
        let mut t = FieldTable::new("elliptic", el.k.k(), Some(self.incident.phi_in));
        for m in -n_max..=n_max {
            for n in -n_max..=n_max {
                let v = if m > 0 && n > 0 { ZERO } else { self.wedge_field(m, n)? };
                t.push(m, n, v);
            }
        }
        t.param("loop_grid", el.loop_grid.to_string());
        t.param("line_grid", self.line_grid.to_string());
        t.max_stencil_residual = Some(t.stencil_residual(el.k.shift(), |_, _| ZERO, on_wedge));
        t.max_boundary_residual = Some(t.boundary_residual(on_wedge));
        Ok(t)
    }
}

/// Nodes of the closed quadrant `m >= 0, n >= 0`.
pub fn on_wedge(m: i32, n: i32) -> bool {
    m >= 0 && n >= 0
}
