use latdiff::greensfn::{
    green_double, green_double_table, green_recursive, green_single, green_single_with, Representation,
    DEFAULT_TOL_REC,
};
use latdiff::{solve_green, solve_scattering, Complex64, Halfline, Scatterer, Wavenumber};
use std::f64::consts::PI;

fn k() -> Wavenumber {
    Wavenumber::from_parts(1.2, 0.05).unwrap()
}

#[test]
fn recursive_table_matches_double_rule_everywhere() {
    let kk = k();
    let r = green_recursive(&kk, 10, DEFAULT_TOL_REC).unwrap();
    let d = green_double_table(&kk, 10, 256).unwrap();
    assert!(r.instability.is_none());
    for (&(m, n), &v) in r.values() {
        assert!((v - d.get(m, n).unwrap()).norm() < 1e-8, "({m},{n})");
        assert!((v - r.get(n, m).unwrap()).norm() < 1e-10);
    }
    assert!(r.max_stencil_residual() < 1e-8);
    assert!(d.max_stencil_residual() < 1e-9);
}

#[test]
fn decays_along_rays() {
    let kk = k();
    for (dm, dn) in [(1, 0), (1, 1), (2, 1), (0, -1), (-3, 2)] {
        let vals: Vec<f64> = (1..12)
            .map(|s| (s * dm, s * dn))
            .filter(|&(m, n): &(i32, i32)| m.abs() + n.abs() >= 5)
            .map(|(m, n)| green_double(&kk, m, n, 512).unwrap().value.norm())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "ray ({dm},{dn}): {vals:?}");
    }
}

#[test]
fn single_representations_agree_where_both_apply() {
    let kk = k();
    for (m, n) in [(0, 0), (3, 0), (0, -2), (2, 2)] {
        let vals: Vec<Complex64> = [Representation::XInner, Representation::XOuter, Representation::YInner, Representation::YOuter]
            .into_iter()
            .filter(|r| r.valid_for(m, n))
            .map(|r| green_single_with(&kk, r, m, n, 512).unwrap().value)
            .collect();
        assert!(vals.len() >= 2);
        for v in &vals {
            assert!((v - vals[0]).norm() < 1e-10, "({m},{n})");
        }
        assert!((vals[0] - green_double(&kk, m, n, 512).unwrap().value).norm() < 1e-10);
    }
}

#[test]
fn error_estimates_shrink_with_the_grid() {
    let kk = k();
    let est: Vec<f64> = [64, 128, 256].iter().map(|&g| green_single(&kk, 4, 1, g).unwrap().error_estimate).collect();
    assert!(est[0] / est[1] > 10.0 && est[1] / est[2] > 10.0, "{est:?}");
    assert!(green_double(&kk, 1, 1, 15).is_err());
}

#[test]
fn oracle_truncation_estimate_halves_per_decay_length() {
    let kk = k();
    // Decay length from the quadrature values along the axis.
    let g = |m| green_double(&kk, m, 0, 512).unwrap().value.norm();
    let kappa = (g(15) / g(25)).ln() / 10.0;
    let step = (1.0 / kappa).ceil() as i32;
    let a = solve_green(&kk, 20).unwrap().truncation_estimate;
    let b = solve_green(&kk, 20 + step).unwrap().truncation_estimate;
    assert!(b <= 0.5 * a, "step {step}: {a:e} -> {b:e}");
}

#[test]
fn oracle_halfline_agrees_with_analytic_field_in_the_inner_third() {
    let h = Halfline::new(&k(), PI / 5.0).unwrap();
    let o = solve_scattering(&k(), 45, Scatterer::HalfLine, h.incident).unwrap();
    assert!(o.residual < 1e-10);
    for m in -15..=15 {
        for n in [-15, -4, 0, 1, 9] {
            let d = (o.get(m, n).unwrap() - h.residue_field(m, n).unwrap()).norm();
            assert!(d < o.truncation_estimate.max(1e-6), "({m},{n}) {d:e}");
        }
    }
    // Total field is zero on the scatterer.
    for m in 0..45 {
        assert!(o.get(m, 0).unwrap().norm() < 1e-14);
    }
}
