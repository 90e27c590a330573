mod output;
mod validate;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latdiff::greensfn::{green_double_table, green_recursive, green_single_table, DEFAULT_GRID, DEFAULT_TOL_REC};
use latdiff::halfline::{on_halfline, DEFAULT_WH_GRID};
use latdiff::wedge::{on_wedge, DEFAULT_LINE_GRID, DEFAULT_LOOP_GRID};
use latdiff::{Complex64, FieldTable, Halfline, Scatterer, Wavenumber, Wedge};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "latdiff", version, about = "Lattice Green's function and diffraction solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Green's function of the discrete Helmholtz operator.
    Green(Common),
    /// Plane wave diffracted by the Dirichlet half-line {(m,0): m >= 0}.
    Halfline(Common),
    /// Plane wave diffracted by the Dirichlet quadrant {m >= 0, n >= 0}.
    Wedge(Common),
    /// Run the cross-method checks for one problem.
    Validate {
        #[arg(value_enum)]
        problem: Problem,
        #[command(flatten)]
        common: Common,
        /// Use the wrong branch of f2 (negative-path testing).
        #[arg(long, hide = true)]
        inject_branch_flip: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Green,
    Halfline,
    Wedge,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Double,
    Single,
    Recursive,
    Residue,
    Wh,
    Sommerfeld,
    Elliptic,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Re K.
    #[arg(long, allow_negative_numbers = true)]
    pub k_re: f64,
    /// Im K, must be positive.
    #[arg(long, allow_negative_numbers = true)]
    pub k_im: f64,
    /// Incidence angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub phi_in: Option<f64>,
    /// Half-width of the output window.
    #[arg(long, default_value_t = 8)]
    pub nmax: i32,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Quadrature grid size for the chosen method.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Tolerance of the recursive Green's solver.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Box radius of the oracle solve.
    #[arg(long, default_value_t = 60)]
    pub radius: i32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Common {
    pub fn wavenumber(&self) -> Result<Wavenumber> {
        Ok(Wavenumber::from_parts(self.k_re, self.k_im)?)
    }

    pub fn phi(&self) -> Result<f64> {
        self.phi_in.context("--phi-in is required for this problem")
    }
}

/// Copy of `t` restricted to `|m|, |n| <= n_max`.
fn window(t: &FieldTable, n_max: i32) -> FieldTable {
    let mut w = FieldTable::new(&t.method, t.k, t.phi_in);
    w.params = t.params.clone();
    for (m, n, v) in t.entries() {
        if m.abs() <= n_max && n.abs() <= n_max {
            w.push(m, n, v);
        }
    }
    w
}

/// Recomputes the residual metadata from the entries.
fn finalize(mut t: FieldTable, problem: Problem, k: &Wavenumber) -> FieldTable {
    let zero = Complex64::new(0.0, 0.0);
    let shift = k.shift();
    match problem {
        Problem::Green => {
            let src = |m: i32, n: i32| if (m, n) == (0, 0) { Complex64::new(1.0, 0.0) } else { zero };
            t.max_stencil_residual = Some(t.stencil_residual(shift, src, |_, _| false));
            t.max_boundary_residual = None;
        }
        Problem::Halfline => {
            t.max_stencil_residual = Some(t.stencil_residual(shift, |_, _| zero, on_halfline));
            t.max_boundary_residual = Some(t.boundary_residual(on_halfline));
        }
        Problem::Wedge => {
            t.max_stencil_residual = Some(t.stencil_residual(shift, |_, _| zero, on_wedge));
            t.max_boundary_residual = Some(t.boundary_residual(on_wedge));
        }
    }
    t
}

pub fn compute(problem: Problem, c: &Common) -> Result<FieldTable> {
    let k = c.wavenumber()?;
    if c.nmax < 1 {
        bail!("--nmax must be positive");
    }
    let table = match problem {
        Problem::Green => match c.method.unwrap_or(Method::Double) {
            Method::Double => green_double_table(&k, c.nmax, c.grid.unwrap_or(DEFAULT_GRID))?.to_field_table(),
            Method::Single => green_single_table(&k, c.nmax, c.grid.unwrap_or(DEFAULT_GRID))?.to_field_table(),
            Method::Recursive => green_recursive(&k, c.nmax, c.tol.unwrap_or(DEFAULT_TOL_REC))?.to_field_table(),
            Method::Oracle => window(&latdiff::solve_green(&k, c.radius)?.table, c.nmax),
            m => bail!("method {m:?} does not apply to the Green's function"),
        },
        Problem::Halfline => {
            let h = Halfline::new(&k, c.phi()?)?;
            match c.method.unwrap_or(Method::Residue) {
                Method::Residue => h.residue_table(c.nmax)?,
                Method::Wh => h.wiener_hopf_table(c.nmax, c.grid.unwrap_or(DEFAULT_WH_GRID))?,
                Method::Sommerfeld => h.sommerfeld_table(c.nmax, 0.3, c.grid.unwrap_or(256))?,
                Method::Oracle => {
                    let o = latdiff::solve_scattering(&k, c.radius, Scatterer::HalfLine, h.incident)?;
                    window(&o.table, c.nmax)
                }
                m => bail!("method {m:?} does not apply to the half-line"),
            }
        }
        Problem::Wedge => {
            let phi = c.phi()?;
            match c.method.unwrap_or(Method::Elliptic) {
                Method::Elliptic => {
                    let w = Wedge::with_grids(&k, phi, DEFAULT_LOOP_GRID, c.grid.unwrap_or(DEFAULT_LINE_GRID))?;
                    w.wedge_table(c.nmax)?
                }
                Method::Sommerfeld => {
                    let w = Wedge::new(&k, phi)?;
                    let nodes = c.grid.unwrap_or(128);
                    let mut t = FieldTable::new("sommerfeld", k.k(), Some(phi));
                    for m in -c.nmax..=c.nmax {
                        for n in -c.nmax..=c.nmax {
                            let v = if m > 0 && n > 0 {
                                Complex64::new(0.0, 0.0)
                            } else {
                                w.wedge_field_small_circles(m, n, 0.1, nodes)?
                            };
                            t.push(m, n, v);
                        }
                    }
                    t.param("radius", "0.1".into());
                    t.param("nodes", nodes.to_string());
                    t
                }
                Method::Oracle => {
                    if !(phi > 0.0 && phi < std::f64::consts::FRAC_PI_2) {
                        bail!("the right-angle problem needs --phi-in in (0, pi/2)");
                    }
                    let inc = latdiff::real_wave_point(&k, phi)?;
                    window(&latdiff::solve_scattering(&k, c.radius, Scatterer::RightAngle, inc)?.table, c.nmax)
                }
                m => bail!("method {m:?} does not apply to the right angle"),
            }
        }
    };
    Ok(finalize(table, problem, &k))
}

fn emit(t: &FieldTable, c: &Common) -> Result<()> {
    let text = match c.format {
        Format::Csv => output::to_csv(t),
        Format::Json => output::to_json(t),
    };
    match &c.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Green(c) => emit(&compute(Problem::Green, &c)?, &c).map(|_| true),
        Command::Halfline(c) => emit(&compute(Problem::Halfline, &c)?, &c).map(|_| true),
        Command::Wedge(c) => emit(&compute(Problem::Wedge, &c)?, &c).map(|_| true),
        Command::Validate { problem, common, inject_branch_flip } => {
            let report = validate::run(problem, &common, inject_branch_flip)?;
            let text = report.render();
            match &common.out {
                Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
