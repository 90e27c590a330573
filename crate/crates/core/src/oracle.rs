//! Brute-force reference solutions on a truncated box.
//!
//! The stencil equations are solved directly on `|m|, |n| <= R` with zero
//! Dirichlet data on the outer ring. Absorption (`Im K > 0`) makes the
//! truncation error decay exponentially in `R`. This module never touches
//! the dispersion surface: the incident wave enters only through the pair
//! `(x_in, y_in)`.

use crate::error::{Error, Result};
use crate::lattice::{IncidentWave, Wavenumber};
use crate::table::FieldTable;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scatterer {
    Empty,
    /// `{(m, 0): m >= 0}`.
    HalfLine,
    /// The closed quadrant `m >= 0, n >= 0`.
    RightAngle,
}

impl Scatterer {
    pub fn contains(self, m: i32, n: i32) -> bool {
        match self {
            Scatterer::Empty => false,
            Scatterer::HalfLine => n == 0 && m >= 0,
            Scatterer::RightAngle => m >= 0 && n >= 0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Scatterer::Empty => "empty",
            Scatterer::HalfLine => "halfline",
            Scatterer::RightAngle => "right-angle",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Source {
    /// Unit point source at the origin.
    PointSource,
    Incident(IncidentWave),
}

#[derive(Debug, Clone)]
pub struct LatticeProblem {
    pub radius: i32,
    pub scatterer: Scatterer,
    pub source: Source,
    pub k: Wavenumber,
}

/// Solution on the whole box with its diagnostics.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// Total field for scattering problems, `u` itself for the point source.
    pub table: FieldTable,
    /// `max |A u - b| / max |b|` of the solved system.
    pub residual: f64,
    /// Largest `|u|` (`|u_sc|` for scattering) on the ring `max(|m|,|n|) = R-1`.
    pub truncation_estimate: f64,
}

impl OracleSolution {
    pub fn get(&self, m: i32, n: i32) -> Option<Complex64> {
        self.table.get(m, n)
    }
}

/// Green's function on the box.
pub fn solve_green(k: &Wavenumber, radius: i32) -> Result<OracleSolution> {
    solve(&LatticeProblem { radius, scatterer: Scatterer::Empty, source: Source::PointSource, k: *k })
}

/// Total field for a plane wave hitting `scatterer`.
pub fn solve_scattering(k: &Wavenumber, radius: i32, scatterer: Scatterer, incident: IncidentWave) -> Result<OracleSolution> {
    if scatterer == Scatterer::Empty {
        return Err(Error::Parameter("scattering needs a nonempty scatterer"));
    }
    solve(&LatticeProblem { radius, scatterer, source: Source::Incident(incident), k: *k })
}

pub fn solve(p: &LatticeProblem) -> Result<OracleSolution> {
    let r = p.radius;
    if r < 3 {
        return Err(Error::Parameter("box radius must be at least 3"));
    }
    let nb = (2 * r + 1) as usize;
    let shift = p.k.shift();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let u_in = |m: i32, n: i32| match p.source {
        Source::Incident(w) => w.x_in.powi(m) * w.y_in.powi(n),
        Source::PointSource => zero,
    };
    // A node is "free" when the stencil row applies there.
    let free = |m: i32, n: i32| m.abs() < r && n.abs() < r && !p.scatterer.contains(m, n);
    let rhs = |m: i32, n: i32| {
        if p.scatterer.contains(m, n) {
            -u_in(m, n)
        } else if m.abs() == r || n.abs() == r {
            zero
        } else if matches!(p.source, Source::PointSource) && (m, n) == (0, 0) {
            one
        } else {
            zero
        }
    };

    // Block row i holds m = i - R; within a block, index j holds n = j - R.
    // Off-diagonal blocks are diag(free), so only the diagonals are dense.
    let diag_block = |m: i32| {
        let mut a = DMatrix::<Complex64>::zeros(nb, nb);
        for j in 0..nb {
            let n = j as i32 - r;
            if free(m, n) {
                a[(j, j)] = shift;
                a[(j, j - 1)] = one;
                a[(j, j + 1)] = one;
            } else {
                a[(j, j)] = one;
            }
        }
        a
    };
    let coupling = |m: i32| -> Vec<bool> { (0..nb).map(|j| free(m, j as i32 - r)).collect() };

    // Block elimination: S_i = A_ii - L_i S_{i-1}^{-1} U_{i-1}, where the
    // couplings L_i, U_{i-1} are 0/1 diagonals.
    let mut factors: Vec<nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>> = Vec::with_capacity(nb);
    let mut reduced: Vec<DVector<Complex64>> = Vec::with_capacity(nb);
    for i in 0..nb {
        let m = i as i32 - r;
        let mut s = diag_block(m);
        let mut b = DVector::from_iterator(nb, (0..nb).map(|j| rhs(m, j as i32 - r)));
        if i > 0 {
            let lower = coupling(m);
            let upper = coupling(m - 1);
            let prev = &factors[i - 1];
            // X = S_{i-1}^{-1} U_{i-1}, where U_{i-1} = diag(upper).
            let mut x = DMatrix::<Complex64>::zeros(nb, nb);
            for j in 0..nb {
                if upper[j] {
                    x[(j, j)] = one;
                }
            }
            if !prev.solve_mut(&mut x) {
                return Err(Error::Solver("singular block"));
            }
            let mut y = reduced[i - 1].clone();
            if !prev.solve_mut(&mut y) {
                return Err(Error::Solver("singular block"));
            }
            for row in 0..nb {
                if lower[row] {
                    for col in 0..nb {
                        s[(row, col)] -= x[(row, col)];
                    }
                    b[row] -= y[row];
                }
            }
        }
        factors.push(s.lu());
        reduced.push(b);
    }

    // Back substitution.
    let mut sol: Vec<DVector<Complex64>> = vec![DVector::zeros(nb); nb];
    for i in (0..nb).rev() {
        let m = i as i32 - r;
        let mut b = reduced[i].clone();
        if i + 1 < nb {
            let upper = coupling(m);
            for j in 0..nb {
                if upper[j] {
                    b[j] -= sol[i + 1][j];
                }
            }
        }
        if !factors[i].solve_mut(&mut b) {
            return Err(Error::Solver("singular block"));
        }
        sol[i] = b;
    }
    let u = |m: i32, n: i32| sol[(m + r) as usize][(n + r) as usize];

    // Residual of the assembled system.
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for m in -r..=r {
        for n in -r..=r {
            let b = rhs(m, n);
            scale = scale.max(b.norm());
            let lhs = if free(m, n) {
                u(m + 1, n) + u(m - 1, n) + u(m, n + 1) + u(m, n - 1) + shift * u(m, n)
            } else {
                u(m, n)
            };
            worst = worst.max((lhs - b).norm());
        }
    }
    let residual = worst / scale.max(f64::MIN_POSITIVE);
    if !(residual < 1e-10) {
        return Err(Error::NonConvergence { what: "oracle solve", residual });
    }

    let mut truncation: f64 = 0.0;
    for m in -(r - 1)..=(r - 1) {
        for n in -(r - 1)..=(r - 1) {
            if m.abs() == r - 1 || n.abs() == r - 1 {
                truncation = truncation.max(u(m, n).norm());
            }
        }
    }

    let phi_in = match p.source {
        Source::Incident(w) => Some(w.phi_in),
        Source::PointSource => None,
    };
    let mut table = FieldTable::new("oracle", p.k.k(), phi_in);
    table.param("radius", r.to_string());
    table.param("scatterer", p.scatterer.name().to_string());
    for m in -r..=r {
        for n in -r..=r {
            table.push(m, n, u(m, n) + u_in(m, n));
        }
    }
    let source = |m: i32, n: i32| match p.source {
        Source::PointSource if (m, n) == (0, 0) => one,
        _ => zero,
    };
    let scat = p.scatterer;
    table.max_stencil_residual = Some(table.stencil_residual(shift, source, |m, n| scat.contains(m, n)));
    if scat != Scatterer::Empty {
        table.max_boundary_residual = Some(table.boundary_residual(|m, n| scat.contains(m, n)));
    }
    table.param("residual", format!("{residual:e}"));
    table.param("truncation_estimate", format!("{truncation:e}"));
    Ok(OracleSolution { table, residual, truncation_estimate: truncation })
}
