//! Cross-method checks behind `latdiff validate`.

use crate::output::fmt_f64;
use crate::{compute, Common, Method, Problem};
use anyhow::Result;
use latdiff::greensfn::{green_recursive, DEFAULT_TOL_REC};
use latdiff::halfline::DEFAULT_WH_GRID;
use latdiff::wedge::{agm_periods, POLE_SIGNS};
use latdiff::{Complex64, FieldTable, Halfline, Scatterer, Wedge};
use std::f64::consts::PI;
use std::fmt::Write as _;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value < self.tol
    }
}

#[derive(Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn add(&mut self, name: &str, value: f64, tol: f64) {
        self.checks.push(Check { name: name.to_string(), value, tol });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(s, "{tag} {:<40} max_dev={} tol={}", c.name, fmt_f64(c.value), fmt_f64(c.tol)).unwrap();
        }
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        writeln!(s, "{ok}/{} checks passed", self.checks.len()).unwrap();
        s
    }
}

fn max_diff(a: &FieldTable, b: &FieldTable) -> f64 {
    a.entries()
        .filter_map(|(m, n, v)| b.get(m, n).map(|w| (v - w).norm()))
        .fold(0.0, f64::max)
}

fn with_method(c: &Common, m: Method) -> Common {
    Common { method: Some(m), ..c.clone() }
}

pub fn run(problem: Problem, c: &Common, flip_branch: bool) -> Result<Report> {
    let mut r = Report::default();
    let k = c.wavenumber()?;
    match problem {
        Problem::Green => {
            let d = compute(Problem::Green, &with_method(c, Method::Double))?;
            let s = compute(Problem::Green, &with_method(c, Method::Single))?;
            let rec = green_recursive(&k, c.nmax, c.tol.unwrap_or(DEFAULT_TOL_REC))?.to_field_table();
            r.add("double vs single", max_diff(&d, &s), 1e-8);
            r.add("double vs recursive", max_diff(&d, &rec), 1e-8);
            r.add("single vs recursive", max_diff(&s, &rec), 1e-8);
            for (name, t) in [("double", &d), ("single", &s), ("recursive", &rec)] {
                let src = |m: i32, n: i32| if (m, n) == (0, 0) { Complex64::new(1.0, 0.0) } else { 0.0 * I };
                r.add(&format!("stencil residual ({name})"), t.stencil_residual(k.shift(), src, |_, _| false), 1e-8);
            }
            let o = latdiff::solve_green(&k, c.radius)?;
            r.add("double vs oracle", max_diff(&d, &o.table), o.truncation_estimate.max(1e-8));
        }
        Problem::Halfline => {
            let mut h = Halfline::new(&k, c.phi()?)?;
            if flip_branch {
                h = h.with_flipped_branch();
            }
            let t = h.residue_table(c.nmax)?;
            let bc = (1..=c.nmax).map(|m| t.get(m, 0).unwrap().norm()).fold(0.0, f64::max);
            r.add("boundary |u(m,0)|", bc, 1e-9);
            r.add("stencil residual", t.max_stencil_residual.unwrap_or(f64::INFINITY), 1e-9);
            let wh = h.wiener_hopf_table(c.nmax, c.grid.unwrap_or(DEFAULT_WH_GRID))?;
            r.add("residue vs wiener-hopf", max_diff(&t, &wh), 1e-8);
            let res = h.pole_residues()?;
            let want = [-1.0, 0.0, 0.0, 1.0];
            let dev = res.iter().zip(want).map(|(v, w)| (v * 2.0 * PI * I - w).norm()).fold(0.0, f64::max);
            r.add("residues at p1..p4 (times 2 pi i)", dev, 1e-8);
            let o = latdiff::solve_scattering(&k, c.radius, Scatterer::HalfLine, h.incident)?;
            r.add("residue vs oracle", max_diff(&t, &o.table), o.truncation_estimate.max(1e-6));
        }
        Problem::Wedge => {
            let w = Wedge::new(&k, c.phi()?)?;
            let t = w.wedge_table(c.nmax)?;
            let arms = (1..=c.nmax)
                .map(|j| t.get(j, 0).unwrap().norm().max(t.get(0, j).unwrap().norm()))
                .fold(0.0, f64::max);
            r.add("dirichlet arms", arms, 1e-7);
            r.add("stencil residual", t.max_stencil_residual.unwrap_or(f64::INFINITY), 1e-7);
            let res = w.pole_residues(0.02, 64)?;
            let dev = res.iter().zip(POLE_SIGNS).map(|(v, s)| (v * 2.0 * PI * I - s).norm()).fold(0.0, f64::max);
            r.add("residues at the four poles (times 2 pi i)", dev, 1e-8);
            let tr = &w.transformant;
            let e = &tr.elliptic;
            let mut per: f64 = 0.0;
            for j in 0..10 {
                let s = Complex64::new(0.37 * j as f64 - 1.4, 0.61 - 0.23 * j as f64);
                let a = tr.eval(s)?;
                per = per.max((tr.eval(s + e.omega1)? - a).norm()).max((tr.eval(s + 3.0 * e.omega2)? - a).norm());
            }
            r.add("transformant periodicity", per, 1e-9);
            let (a, b) = agm_periods(&k);
            r.add("omega1 vs agm", (e.omega1 + I * a).norm(), 1e-10);
            r.add("omega2 vs agm (mod omega1)", e.omega2_mismatch(I * b), 1e-10);
            let o = latdiff::solve_scattering(&k, c.radius, Scatterer::RightAngle, w.incident)?;
            let mut dev: f64 = 0.0;
            for (m, n, v) in t.entries() {
                if !(m >= 0 && n >= 0) {
                    dev = dev.max((v - o.get(m, n).unwrap()).norm());
                }
            }
            r.add("elliptic vs oracle", dev, o.truncation_estimate.max(1e-6));
        }
    }
    Ok(r)
}
