use latdiff::lattice::{
    branch_points, plane_wave, psi_integrand, psi_integrand_y, real_wave_loop, real_wave_point, root_pair,
    saddle_points, upsilon, Sheet, SurfacePoint,
};
use latdiff::{Complex64, PowerSeries, Wavenumber};
use proptest::prelude::*;
use std::f64::consts::PI;

fn k() -> Wavenumber {
    Wavenumber::from_parts(1.2, 0.05).unwrap()
}

fn annulus() -> impl Strategy<Value = Complex64> {
    (0.1f64.ln()..10f64.ln(), -PI..PI).prop_map(|(lr, th)| Complex64::from_polar(lr.exp(), th))
}

fn point() -> impl Strategy<Value = SurfacePoint> {
    (annulus(), any::<bool>()).prop_map(|(x, inner)| {
        SurfacePoint::over(&k(), x, if inner { Sheet::Inner } else { Sheet::Outer }).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn roots_are_reciprocal(x in annulus()) {
        let (a, b) = root_pair(k().k2(), x);
        prop_assert!((a * b - 1.0).norm() < 1e-13);
        prop_assert!(a.norm() <= b.norm());
    }

    #[test]
    fn upsilon_squared_is_the_branch_quartic(x in annulus()) {
        let kk = k();
        let u = upsilon(&kk, x, Sheet::Inner).unwrap();
        let q = kk.branch_points().quartic(x);
        prop_assert!((u * u - q).norm() < 1e-12 * q.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn plane_waves_solve_the_homogeneous_stencil(p in point(), m in -6i32..=6, n in -6i32..=6) {
        let kk = k();
        let w = |a: i32, b: i32| plane_wave(a, b, &p);
        let r = w(m + 1, n) + w(m - 1, n) + w(m, n + 1) + w(m, n - 1) + kk.shift() * w(m, n);
        let scale = [w(m + 1, n), w(m - 1, n), w(m, n + 1), w(m, n - 1)].iter().map(|v| v.norm()).fold(w(m, n).norm(), f64::max);
        prop_assert!(r.norm() < 1e-12 * scale);
    }

    #[test]
    fn chart_change_of_the_form(p in point()) {
        // dx/(x(y - 1/y)) = -dy/(y(x - 1/x)) with dy/dx from the curve.
        let dydx = -(1.0 - 1.0 / (p.x * p.x)) / (1.0 - 1.0 / (p.y * p.y));
        let a = psi_integrand(&p).unwrap();
        let b = psi_integrand_y(&p).unwrap() * dydx;
        prop_assert!((a - b).norm() < 1e-11 * a.norm());
    }

    #[test]
    fn series_sqrt_squares_back(c in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..24), c0 in 0.2f64..3.0, arg in -3.0f64..3.0) {
        let mut coeffs: Vec<Complex64> = c.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        coeffs[0] = Complex64::from_polar(c0, arg);
        let s = PowerSeries::from_coeffs(coeffs);
        let r = s.sqrt();
        let d = r.mul_series(&r);
        // A small s_0 makes the root coefficients grow like (|s_k|/s_0)^k and
        // the square cancels them; rounding is relative to the convolution
        // terms, not to |s_k|.
        for j in 0..=s.order() {
            let terms: f64 = (0..=j).map(|i| r.coeff(i).norm() * r.coeff(j - i).norm()).sum();
            prop_assert!((d.coeff(j) - s.coeff(j)).norm() < 1e-12 * terms.max(s.max_abs()));
        }
    }
}

#[test]
fn branch_point_pairs_are_reciprocal() {
    let e = branch_points(&k());
    assert!((e.eta11 * e.eta21 - 1.0).norm() < 1e-15);
    assert!((e.eta12 * e.eta22 - 1.0).norm() < 1e-15);
}

#[test]
fn diagonal_incidence_is_symmetric() {
    let w = real_wave_point(&k(), PI / 4.0).unwrap();
    assert!((w.x_in - w.y_in).norm() < 1e-12);
}

/// Saddle points against a brute-force scan of the real-wave loop for the
/// sample that best matches the ratio `(y - 1/y)/(x - 1/x) = n/m`.
#[test]
fn saddle_points_match_loop_sampling() {
    let kk = k();
    let samples = 8192;
    let pts = real_wave_loop(&kk, samples).unwrap();
    for (m, n) in [(2, 1), (1, 1), (-3, 1), (1, -4)] {
        let (a, b) = saddle_points(&kk, m, n).unwrap();
        let target = n as f64 / m as f64;
        let miss = |p: &SurfacePoint| ((p.y - 1.0 / p.y) / (p.x - 1.0 / p.x) - target).norm();
        // Direction of travel picks one of the two ratio matches.
        let dir = |p: &SurfacePoint| (p.x - 1.0 / p.x).re * m as f64 + (p.y - 1.0 / p.y).re * n as f64;
        for s in [a, b] {
            assert!(miss(&s) < 1e-9, "({m},{n}) ratio");
            let dydx = -(1.0 - 1.0 / (s.x * s.x)) / (1.0 - 1.0 / (s.y * s.y));
            let want = -(m as f64 / n as f64) * s.y / s.x;
            assert!((dydx - want).norm() < 1e-8 * want.norm(), "({m},{n}) saddle equation");
            let best = pts
                .iter()
                .filter(|p| dir(p).signum() == dir(&s).signum())
                .min_by(|p, q| miss(p).total_cmp(&miss(q)))
                .unwrap();
            assert!((best.x - s.x).norm() < 5e-3 && (best.y - s.y).norm() < 5e-3, "({m},{n}) vs scan");
        }
        assert!((a.x - b.x).norm() > 0.1);
    }
}

#[test]
fn axis_saddles_sit_at_the_loop_branch_points() {
    let kk = k();
    let (a, b) = saddle_points(&kk, 1, 0).unwrap();
    assert!((a.y - 1.0).norm() < 1e-9 && (a.x - kk.branch_points().eta21).norm() < 1e-9);
    assert!((b.y - 1.0).norm() < 1e-9 && (b.x - kk.branch_points().eta11).norm() < 1e-9);
}
