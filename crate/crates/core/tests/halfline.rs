use latdiff::halfline::{on_halfline, Halfline, DEFAULT_WH_GRID};
use latdiff::{Complex64, Wavenumber};
use std::f64::consts::PI;

fn reference() -> Halfline {
    Halfline::new(&Wavenumber::from_parts(1.2, 0.05).unwrap(), PI / 5.0).unwrap()
}

#[test]
fn residue_series_matches_wiener_hopf_integral() {
    let h = reference();
    let mut worst: f64 = 0.0;
    for m in -8..=8 {
        for n in -8..=8 {
            let a = h.residue_field(m, n).unwrap();
            let b = h.wiener_hopf_field(m, n, DEFAULT_WH_GRID).unwrap();
            worst = worst.max((a - b).norm());
        }
    }
    assert!(worst < 1e-8, "worst {worst:e}");
}

#[test]
fn known_value_next_to_the_edge() {
    let h = reference();
    let u = h.residue_field(-1, 0).unwrap();
    assert!((u - Complex64::new(0.30332, -1.29398)).norm() < 1e-5, "{u}");
}

#[test]
fn derived_closed_forms_agree_with_residues() {
    let h = reference();
    let nodes = [(-2, 0), (-1, 1), (-1, -1), (-1, 0)];
    for ((m, n), v) in nodes.iter().zip(h.derived_closed_forms()) {
        let u = h.residue_field(*m, *n).unwrap();
        assert!((u - v).norm() < 1e-12, "({m},{n}): {u} vs {v}");
    }
}

#[test]
fn printed_closed_forms_satisfy_the_stencil_but_not_the_field() {
    let h = reference();
    let [m2, up, dn, m1] = h.printed_closed_forms();
    let u00 = Complex64::new(0.0, 0.0);
    let stencil = u00 + m2 + up + dn + h.k.shift() * m1;
    assert!(stencil.norm() < 1e-12);
    let truth = h.residue_field(-1, 0).unwrap();
    assert!((m1 - truth).norm() > 0.1);
}

#[test]
fn table_satisfies_stencil_and_boundary_condition() {
    let h = reference();
    let t = h.residue_table(6).unwrap();
    assert!(t.max_stencil_residual.unwrap() < 1e-12);
    assert!(t.max_boundary_residual.unwrap() < 1e-12);
    assert!(on_halfline(3, 0) && !on_halfline(-1, 0));
}

#[test]
fn second_sheet_is_the_mirror_with_opposite_sign() {
    let h = reference();
    for (m, n) in [(-3, 2), (2, 3), (-1, -4), (4, -1), (0, 5)] {
        let a = h.residue_field_on_cover(m, -n, 2).unwrap();
        let b = h.residue_field(m, n).unwrap();
        assert!((a + b).norm() < 1e-11, "({m},{n})");
    }
}

#[test]
fn small_circles_agree_at_low_order() {
    let h = reference();
    for (m, n) in [(-1, 0), (0, 1), (-2, 1), (1, -2), (2, 2)] {
        let a = h.sommerfeld_numeric(m, n, 0.3, 256).unwrap();
        let b = h.residue_field(m, n).unwrap();
        assert!((a - b).norm() < 1e-10, "({m},{n}): {a} vs {b}");
    }
}

#[test]
fn adjacent_contours_agree_at_tie_angles() {
    let h = reference();
    for (m, n, j) in [(1, 1, 0), (-2, 2, 1), (-3, -3, 2), (2, -2, 3)] {
        let a = h.residue_field_sector(m, n, j).unwrap();
        let b = h.residue_field_sector(m, n, j + 1).unwrap();
        assert!((a - b).norm() < 1e-10, "({m},{n})");
    }
}

#[test]
fn negative_incidence_angle() {
    let h = Halfline::new(&Wavenumber::from_parts(1.2, 0.05).unwrap(), -PI / 7.0).unwrap();
    assert_eq!(h.p1_sheet, 1);
    for (m, n) in [(-2, 1), (1, -3), (3, 3)] {
        let a = h.residue_field(m, n).unwrap();
        let b = h.wiener_hopf_field(m, n, DEFAULT_WH_GRID).unwrap();
        assert!((a - b).norm() < 1e-8, "({m},{n})");
    }
}

#[test]
fn scattered_part_decays_along_the_antidiagonal() {
    let h = reference();
    let sc: Vec<f64> = (8..20).map(|s| (h.residue_field(-s, s).unwrap() - h.incident.value(-s, s)).norm()).collect();
    assert!(sc.windows(2).all(|w| w[1] < w[0]), "{sc:?}");
}
