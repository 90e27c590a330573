use thiserror::Error;

/// Failures reported by the solvers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("wavenumber must have positive imaginary part, got Im K = {0}")]
    Absorption(f64),
    #[error("branch points collide for this wavenumber (separation {0:.3e})")]
    DegenerateBranchPoints(f64),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("roots of the dispersion quadratic have equal modulus at x = {0}")]
    DegenerateRoot(num_complex::Complex64),
    #[error("point is within {0:.1e} of a branch point")]
    BranchPoint(f64),
    #[error("{what} did not converge (residual {residual:.3e})")]
    NonConvergence { what: &'static str, residual: f64 },
    #[error("incidence angle {0} is outside the admissible range")]
    Angle(f64),
    #[error("evaluation point is within {0:.1e} of a pole")]
    PoleProximity(f64),
    #[error("series order {order} exceeds the configured cap {cap}")]
    OrderOverflow { order: usize, cap: usize },
    #[error("branch signs violate f2*f3 = f1")]
    BranchInconsistency,
    #[error("continuation failed: {0}")]
    Continuation(&'static str),
    #[error("periods are rationally dependent (Im ratio {0:.3e})")]
    CycleMisidentification(f64),
    #[error("linear solve failed: {0}")]
    Solver(&'static str),
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
