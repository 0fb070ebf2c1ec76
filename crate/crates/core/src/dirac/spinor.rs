use super::DiracModel;
use crate::algebra::{Complex, I};
use crate::error::{Error, Result};

/// Relative disagreement between the `h` and `2h` stencils above which a
/// grid is flagged as too coarse.
pub const COARSE_TOL: f64 = 1e-4;

/// Five-point central derivative of `g` at `x` with step `h`.
pub fn stencil5(g: &dyn Fn(f64) -> Complex, x: f64, h: f64) -> Complex {
    (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorGrid {
    pub x: Vec<f64>,
    pub psi1: Vec<Complex>,
    pub psi2: Vec<Complex>,
    pub e: Complex,
    pub norm: f64,
    /// Largest `|D(h) - D(2h)| / |D(h)|` over the grid.
    pub stencil_error: f64,
    pub coarse: bool,
}

fn step(grid: &[f64]) -> f64 {
    if grid.len() >= 2 {
        (grid[1] - grid[0]).abs()
    } else {
        1e-3
    }
}

pub(crate) fn trapezoid(x: &[f64], y: impl Fn(usize) -> f64) -> f64 {
    (1..x.len())
        .map(|i| 0.5 * (x[i] - x[i - 1]) * (y(i) + y(i - 1)))
        .sum()
}

/// Builds `psi_1 = (W - iR) xi_1 / sqrt(v)` and
/// `psi_2 = [(E - V) psi_1 + i sqrt(v) (sqrt(v) psi_1)'] / (W - iR)` on a
/// uniform x grid. `xi1` is a function of real `x`.
pub fn reconstruct_spinor(
    model: &DiracModel,
    e: Complex,
    xi1: &dyn Fn(f64) -> Complex,
    grid: &[f64],
) -> Result<SpinorGrid> {
    let m = model.to_x();
    let d = m.w_minus_ir();
    let h = step(grid);
    let g = |x: f64| d.eval_real(x) * xi1(x);
    let mut psi1 = Vec::with_capacity(grid.len());
    let mut psi2 = Vec::with_capacity(grid.len());
    let mut stencil_error: f64 = 0.0;
    for &x in grid {
        let v = m.v_f.eval_real(x);
        let dx = d.eval_real(x);
        if v.norm() == 0.0 || dx.norm() == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "v_f or W - iR vanishes at grid point x = {x}"
            )));
        }
        let sv = v.sqrt();
        let p1 = g(x) / sv;
        let dg = stencil5(&g, x, h);
        let dg2 = stencil5(&g, x, 2.0 * h);
        let scale = dg.norm().max(1e-300);
        if dg.norm() > 0.0 || dg2.norm() > 0.0 {
            stencil_error = stencil_error.max((dg - dg2).norm() / scale);
        }
        let p2 = ((e - m.v.eval_real(x)) * p1 + I * sv * dg) / dx;
        psi1.push(p1);
        psi2.push(p2);
    }
    let norm = trapezoid(grid, |i| psi1[i].norm_sqr() + psi2[i].norm_sqr());
    Ok(SpinorGrid {
        x: grid.to_vec(),
        psi1,
        psi2,
        e,
        norm,
        stencil_error,
        coarse: stencil_error > COARSE_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoupledResiduals {
    /// `-i sqrt(v) (sqrt(v) psi_1)' + (W - iR) psi_2 - (E - V) psi_1`
    pub upper: f64,
    /// `i sqrt(v) (sqrt(v) psi_2)' + (W + iR) psi_1 - (E - V) psi_2`
    pub lower: f64,
}

/// Maximum residuals of both first-order equations at interior grid points,
/// relative to the peak of `|psi_1| + |psi_2|` on the grid.
pub fn coupled_residuals(model: &DiracModel, spinor: &SpinorGrid) -> CoupledResiduals {
    let m = model.to_x();
    let n = spinor.x.len();
    if n < 5 {
        return CoupledResiduals {
            upper: 0.0,
            lower: 0.0,
        };
    }
    let h = step(&spinor.x);
    let sv: Vec<Complex> = spinor
        .x
        .iter()
        .map(|&x| m.v_f.eval_real(x).sqrt())
        .collect();
    let d = |w: &[Complex], i: usize| {
        let g = |j: usize| sv[j] * w[j];
        (g(i - 2) - 8.0 * g(i - 1) + 8.0 * g(i + 1) - g(i + 2)) / (12.0 * h)
    };
    let peak = (0..n)
        .map(|i| spinor.psi1[i].norm() + spinor.psi2[i].norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let (mut upper, mut lower) = (0.0f64, 0.0f64);
    for i in 2..n - 2 {
        let x = spinor.x[i];
        let ev = spinor.e - m.v.eval_real(x);
        let (p1, p2) = (spinor.psi1[i], spinor.psi2[i]);
        let r3 = -I * sv[i] * d(&spinor.psi1, i) + m.w_minus_ir().eval_real(x) * p2 - ev * p1;
        let r4 = I * sv[i] * d(&spinor.psi2, i) + m.w_plus_ir().eval_real(x) * p1 - ev * p2;
        upper = upper.max(r3.norm() / peak);
        lower = lower.max(r4.norm() / peak);
    }
    CoupledResiduals { upper, lower }
}
