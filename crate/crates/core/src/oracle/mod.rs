//! Discretized eigenvalue oracle for the decoupled z-space equation.
//!
//! The equation `xi'' + P xi' + (q0 + E q1 + E^2 q2) xi = 0` with
//! `q2 = -1/v^2` is multiplied through by `v^2` and collocated on a
//! truncated interval with Dirichlet ends, giving
//! `K xi + E L1 xi - E^2 xi = 0`. When `q1` vanishes this is an ordinary
//! eigenproblem for `E^2`; otherwise it is linearized to double size.
//! Every spectrum is computed at `N` and `2N` points and the difference is
//! kept as the per-level convergence estimate.

mod norm;
mod schemes;

pub use norm::{
    normalize_grid, normalize_quadrature, NormProbe, SpinorSource, NORM_STEP, NORM_TOL,
};
pub use schemes::{Chebyshev, FiniteDifference, Operators, Scheme, SchemeRegistry};

use faer::Mat;

use crate::algebra::Complex;
use crate::dirac::DecoupledOde;
use crate::error::{Error, Result};
use crate::models::{ClosedFormState, ModelFamily};

/// Smallest accepted number of interior points.
pub const MIN_POINTS: usize = 32;

/// Distance kept from the singular point `v_f = 0`.
pub const SINGULAR_MARGIN: f64 = 1e-6;

/// Levels whose convergence estimate exceeds this fraction of `|E|` are
/// dropped.
pub const SPURIOUS_REL: f64 = 1e-2;

/// Default engine/oracle matching tolerances.
pub const MATCH_ABS: f64 = 1e-3;
pub const MATCH_REL: f64 = 5e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Discretization {
    pub z_min: f64,
    pub z_max: f64,
    /// Interior points.
    pub n: usize,
    pub scheme: String,
}

impl Discretization {
    pub fn new(z_min: f64, z_max: f64, n: usize, scheme: &str) -> Self {
        Discretization {
            z_min,
            z_max,
            n,
            scheme: scheme.to_string(),
        }
    }

    /// Starts `1e-3` from the singular point and extends away from it: to
    /// `z = 40` with 600 points for `fd`, over a length of 13 with 64 points
    /// for `cheb`.
    pub fn default_for(model: &dyn ModelFamily, scheme: &str) -> Self {
        let n = if scheme == "cheb" { 64 } else { 600 };
        let len = 13.0;
        match model.singular_point() {
            Some(s) if model.dirac_model().v_f.coeff(1).re < 0.0 => {
                Discretization::new(s - len, s - 1e-3, n, scheme)
            }
            Some(s) => Discretization::new(s + 1e-3, s + len, n, scheme),
            None => Discretization::new(-20.0, 20.0, n, scheme),
        }
    }

    pub fn validate(&self, singular: Option<f64>) -> Result<()> {
        if self.n < MIN_POINTS {
            return Err(Error::InvalidDiscretization(format!(
                "N = {} is below the minimum of {MIN_POINTS}",
                self.n
            )));
        }
        if !(self.z_min.is_finite() && self.z_max.is_finite() && self.z_min < self.z_max) {
            return Err(Error::InvalidDiscretization(format!(
                "domain ({}, {}) is not a finite increasing interval",
                self.z_min, self.z_max
            )));
        }
        if let Some(s) = singular {
            if s > self.z_min - SINGULAR_MARGIN && s < self.z_max + SINGULAR_MARGIN {
                return Err(Error::InvalidDiscretization(format!(
                    "domain ({}, {}) must stay {SINGULAR_MARGIN:e} away from the singular point z = {s}",
                    self.z_min, self.z_max
                )));
            }
        }
        Ok(())
    }

    fn doubled(&self) -> Self {
        Discretization {
            n: 2 * self.n,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pencil {
    /// Eigenvalues are `E^2`.
    Linear,
    /// Eigenvalues are `E`.
    Quadratic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleLevel {
    pub e: Complex,
    /// The matrix eigenvalue this level came from (`E^2` or `E`).
    pub raw: Complex,
    /// Distance to the nearest level of the `N`-point run.
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSpectrum {
    pub pencil: Pencil,
    /// Matrix eigenvalues of the `2N` run.
    pub raw: Vec<Complex>,
    /// Converged levels from the `2N` run, sorted by `|E|`.
    pub levels: Vec<OracleLevel>,
    /// Levels dropped by the convergence filter.
    pub rejected: usize,
    pub discretization: Discretization,
}

impl OracleSpectrum {
    /// The level closest to `target` within `max(abs, rel |target|)`.
    pub fn matching(&self, target: Complex, abs: f64, rel: f64) -> Option<OracleLevel> {
        let tol = abs.max(rel * target.norm());
        self.levels
            .iter()
            .filter(|l| (l.e - target).norm() <= tol)
            .min_by(|a, b| (a.e - target).norm().total_cmp(&(b.e - target).norm()))
            .copied()
    }

    pub fn energies(&self) -> Vec<Complex> {
        self.levels.iter().map(|l| l.e).collect()
    }
}

struct Assembled {
    k: Vec<Complex>,
    l1: Vec<Complex>,
    n: usize,
}

fn assemble(ode: &DecoupledOde, ops: &Operators) -> Assembled {
    let n = ops.len();
    let mut k = vec![Complex::new(0.0, 0.0); n * n];
    let mut l1 = vec![Complex::new(0.0, 0.0); n];
    for (i, &zr) in ops.nodes.iter().enumerate() {
        let z = Complex::new(zr, 0.0);
        let v = ode.v_f.eval(z);
        let v2 = v * v;
        let a2 = v2;
        let a1 = v2 * ode.p_at(z);
        let a0 = v2 * ode.q0.eval(z);
        l1[i] = v2 * ode.q1.eval(z);
        for j in 0..n {
            k[i * n + j] = a2 * ops.d2[i * n + j] + a1 * ops.d1[i * n + j];
        }
        k[i * n + i] += a0;
    }
    Assembled { k, l1, n }
}

fn eigenvalues(size: usize, entries: &[Complex]) -> Result<Vec<Complex>> {
    let fail = |e| Error::Eigensolver(format!("{e:?} for a {size}x{size} matrix"));
    if entries.iter().all(|c| c.im == 0.0) {
        let m = Mat::<f64>::from_fn(size, size, |i, j| entries[i * size + j].re);
        m.eigenvalues().map_err(fail)
    } else {
        let m = Mat::<faer::c64>::from_fn(size, size, |i, j| entries[i * size + j]);
        m.eigenvalues().map_err(fail)
    }
}

fn raw_spectrum(
    ode: &DecoupledOde,
    disc: &Discretization,
    scheme: &dyn Scheme,
    pencil: Pencil,
) -> Result<Vec<Complex>> {
    let a = assemble(ode, &scheme.operators(disc.z_min, disc.z_max, disc.n));
    let vals = match pencil {
        Pencil::Linear => eigenvalues(a.n, &a.k)?,
        Pencil::Quadratic => {
            let n = a.n;
            let m = 2 * n;
            let mut c = vec![Complex::new(0.0, 0.0); m * m];
            for i in 0..n {
                c[i * m + n + i] = Complex::new(1.0, 0.0);
                for j in 0..n {
                    c[(n + i) * m + j] = a.k[i * n + j];
                }
                c[(n + i) * m + n + i] = a.l1[i];
            }
            eigenvalues(m, &c)?
        }
    };
    if vals.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Eigensolver(format!(
            "non-finite eigenvalue at N = {} (matrix likely singular or ill-conditioned)",
            disc.n
        )));
    }
    Ok(vals)
}

fn to_energies(
    model: &dyn ModelFamily,
    pencil: Pencil,
    raw: &[Complex],
) -> Vec<(Complex, Complex)> {
    raw.iter()
        .map(|&r| match pencil {
            Pencil::Linear => (model.energies_from_square(r)[0], r),
            Pencil::Quadratic => (r, r),
        })
        .collect()
}

fn solve_with(
    model: &dyn ModelFamily,
    disc: &Discretization,
    pencil: Pencil,
) -> Result<OracleSpectrum> {
    disc.validate(model.singular_point())?;
    let scheme = SchemeRegistry::default();
    let scheme = scheme.get(&disc.scheme)?;
    let ode = model.ode()?;
    if pencil == Pencil::Linear && !ode.is_even_in_energy() {
        return Err(Error::Unsupported(
            "linear pencil needs an equation depending on E only through E^2".into(),
        ));
    }
    let coarse = to_energies(model, pencil, &raw_spectrum(&ode, disc, scheme, pencil)?);
    let fine_disc = disc.doubled();
    let raw = raw_spectrum(&ode, &fine_disc, scheme, pencil)?;
    let fine = to_energies(model, pencil, &raw);
    let mut levels = Vec::new();
    let mut rejected = 0;
    for (e, r) in fine {
        let estimate = coarse
            .iter()
            .map(|(c, _)| (c - e).norm())
            .fold(f64::INFINITY, f64::min);
        if estimate <= SPURIOUS_REL * e.norm().max(1e-6) {
            levels.push(OracleLevel {
                e,
                raw: r,
                estimate,
            });
        } else {
            rejected += 1;
        }
    }
    levels.sort_by(|a, b| a.e.norm().total_cmp(&b.e.norm()));
    Ok(OracleSpectrum {
        pencil,
        raw,
        levels,
        rejected,
        discretization: disc.clone(),
    })
}

/// Solves for `E^2` when the decoupled equation is even in `E`; each `E^2`
/// is mapped to the energy preferred by
/// [`ModelFamily::energies_from_square`].
pub fn solve_linear_pencil(
    model: &dyn ModelFamily,
    disc: &Discretization,
) -> Result<OracleSpectrum> {
    solve_with(model, disc, Pencil::Linear)
}

/// Solves `K + E L1 - E^2` through its companion linearization.
pub fn solve_quadratic_pencil(
    model: &dyn ModelFamily,
    disc: &Discretization,
) -> Result<OracleSpectrum> {
    solve_with(model, disc, Pencil::Quadratic)
}

/// Linear pencil when possible, quadratic otherwise.
pub fn solve_spectrum(model: &dyn ModelFamily, disc: &Discretization) -> Result<OracleSpectrum> {
    let pencil = if model.ode()?.is_even_in_energy() {
        Pencil::Linear
    } else {
        Pencil::Quadratic
    };
    solve_with(model, disc, pencil)
}

/// A candidate solution of the decoupled equation.
pub enum Solution<'a> {
    /// Value with exact first and second derivatives.
    Analytic(&'a dyn Fn(Complex) -> (Complex, Complex, Complex)),
    /// Value only; derivatives from five-point stencils.
    Sampled(&'a dyn Fn(Complex) -> Complex),
}

/// Stencil step for [`Solution::Sampled`].
pub const RESIDUAL_STEP: f64 = 1e-3;

/// `max |xi'' + P xi' + Q xi| / (1 + |xi| + |xi''|)` over `points`, skipping
/// points with `|v_f| < 1e-3`.
pub fn ode_residual(
    ode: &DecoupledOde,
    e: Complex,
    solution: Solution<'_>,
    points: &[Complex],
) -> f64 {
    let h = RESIDUAL_STEP;
    points
        .iter()
        .filter(|&&z| ode.v_f.eval(z).norm() >= 1e-3)
        .map(|&z| {
            let (xi, d1, d2) = match &solution {
                Solution::Analytic(f) => f(z),
                Solution::Sampled(f) => {
                    let g = |k: f64| f(z + k * h);
                    let (m2, m1, c, p1, p2) = (g(-2.0), g(-1.0), g(0.0), g(1.0), g(2.0));
                    let d1 = (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
                    let d2 = (-m2 + m1 * 16.0 - c * 30.0 + p1 * 16.0 - p2) / (12.0 * h * h);
                    (c, d1, d2)
                }
            };
            let res = d2 + ode.p_at(z) * d1 + ode.q_at(z, e) * xi;
            res.norm() / (1.0 + xi.norm() + d2.norm())
        })
        .fold(0.0, f64::max)
}

/// [`ode_residual`] of a closed-form state's engine `xi_1`.
pub fn state_ode_residual(state: &ClosedFormState, points: &[Complex]) -> f64 {
    let f = |z: Complex| state.xi_z_derivs(z);
    ode_residual(&state.ode, state.e, Solution::Analytic(&f), points)
}
