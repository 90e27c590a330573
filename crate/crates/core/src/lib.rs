//! Discrete Helmholtz problems on the square lattice: the plane Green's
//! function, diffraction by a Dirichlet half-line and by a Dirichlet right
//! angle, together with a brute-force finite-box reference solver.

pub mod dd;
pub mod error;
pub mod greensfn;
pub mod halfline;
pub mod lattice;
pub mod oracle;
pub mod series;
pub mod table;
pub mod wedge;

pub use error::{Error, Result};
pub use greensfn::{GreenMethod, GreensTable};
pub use lattice::{
    branch_points, dispersion, plane_wave, psi_integrand, real_wave_point, saddle_points, upsilon,
    xi, BranchPoints, IncidentWave, Sheet, SurfacePoint, Wavenumber,
};
pub use num_complex::Complex64;
pub use halfline::Halfline;
pub use oracle::{solve_green, solve_scattering, OracleSolution, Scatterer};
pub use series::PowerSeries;
pub use table::FieldTable;
pub use wedge::{EllipticData, Wedge, WedgeTransformant};
