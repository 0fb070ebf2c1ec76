use crate::algebra::Complex;
use crate::dirac::SpinorGrid;

/// Relative change between the two widest windows below which the norm is
/// considered converged.
pub const NORM_TOL: f64 = 1e-4;

/// Trapezoid step for closed-form spinors.
pub const NORM_STEP: f64 = 5e-3;

/// A spinor `(psi_1, psi_2)` on the real line.
pub trait SpinorSource {
    fn spinor_at(&self, x: f64) -> (Complex, Complex);
}

impl<F: Fn(f64) -> (Complex, Complex)> SpinorSource for F {
    fn spinor_at(&self, x: f64) -> (Complex, Complex) {
        self(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormProbe {
    pub half_widths: Vec<f64>,
    pub norms: Vec<f64>,
    pub converged: bool,
    /// `d log N / d log L` between the two widest windows, when both norms
    /// are positive.
    pub growth_exponent: Option<f64>,
}

impl NormProbe {
    fn from_norms(half_widths: &[f64], norms: Vec<f64>) -> NormProbe {
        let (converged, growth_exponent) = match (half_widths, norms.as_slice()) {
            ([.., l0, l1], [.., n0, n1]) => {
                let conv = (n1 - n0).abs() <= NORM_TOL * n1.abs() && n1.is_finite();
                let growth = (*n0 > 0.0 && *n1 > 0.0).then(|| (n1 / n0).ln() / (l1 / l0).ln());
                (conv, growth)
            }
            _ => (false, None),
        };
        NormProbe {
            half_widths: half_widths.to_vec(),
            norms,
            converged,
            growth_exponent,
        }
    }

    pub fn last(&self) -> Option<f64> {
        self.norms.last().copied()
    }
}

fn density(src: &dyn SpinorSource, x: f64) -> f64 {
    let (a, b) = src.spinor_at(x);
    a.norm_sqr() + b.norm_sqr()
}

/// Trapezoidal `int_{-L}^{L} (|psi_1|^2 + |psi_2|^2) dx` for each `L`.
pub fn normalize_quadrature(src: &dyn SpinorSource, half_widths: &[f64]) -> NormProbe {
    let norms = half_widths
        .iter()
        .map(|&l| {
            let m = ((2.0 * l / NORM_STEP).ceil() as usize).max(2);
            let h = 2.0 * l / m as f64;
            let inner: f64 = (1..m).map(|i| density(src, -l + i as f64 * h)).sum();
            h * (inner + 0.5 * (density(src, -l) + density(src, l)))
        })
        .collect();
    NormProbe::from_norms(half_widths, norms)
}

/// As [`normalize_quadrature`] over the samples of a reconstructed spinor;
/// each window uses the grid points with `|x| <= L`.
pub fn normalize_grid(grid: &SpinorGrid, half_widths: &[f64]) -> NormProbe {
    let norms = half_widths
        .iter()
        .map(|&l| {
            let idx: Vec<usize> = (0..grid.x.len())
                .filter(|&i| grid.x[i].abs() <= l)
                .collect();
            idx.windows(2)
                .map(|w| {
                    let (i, j) = (w[0], w[1]);
                    let f = |k: usize| grid.psi1[k].norm_sqr() + grid.psi2[k].norm_sqr();
                    0.5 * (grid.x[j] - grid.x[i]) * (f(i) + f(j))
                })
                .sum()
        })
        .collect();
    NormProbe::from_norms(half_widths, norms)
}
