use super::state::{ClosedFormState, Deltas, PaperForm};
use super::{engine_level, normalize_state, param, ModelFamily, Params};
use crate::algebra::{Complex, Poly};
use crate::dirac::{DiracModel, Space};
use crate::error::{Error, Result};
use crate::nu::Search;

/// `W = omega`, `V = a + b z`, `v_f = 1 + gamma z`, `R = 0` in z-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtLinearParams {
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub omega: f64,
}

impl PtLinearParams {
    pub fn new(a: f64, b: f64, gamma: f64, omega: f64) -> Result<Self> {
        if ![a, b, gamma, omega].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter(
                "pt-linear parameters must be finite".into(),
            ));
        }
        if gamma == 0.0 {
            return Err(Error::InvalidParameter("gamma must be nonzero".into()));
        }
        Ok(PtLinearParams { a, b, gamma, omega })
    }

    pub fn from_map(p: &Params) -> Result<Self> {
        Self::new(
            param(p, "a")?,
            param(p, "b")?,
            param(p, "gamma")?,
            param(p, "omega")?,
        )
    }

    /// True when `a = b / gamma`, where the printed spectrum and weights hold.
    pub fn on_slice(&self) -> bool {
        (self.a - self.b / self.gamma).abs() <= 1e-12 * (1.0 + self.a.abs())
    }

    /// `c = 2ab + b gamma - 2bE`
    pub fn c(&self, e: Complex) -> Complex {
        Complex::new(2.0 * self.a * self.b + self.b * self.gamma, 0.0) - e * (2.0 * self.b)
    }

    /// `d = E^2 + a^2 + b - 2aE - omega^2`
    pub fn d(&self, e: Complex) -> Complex {
        e * e + self.a * self.a + self.b - e * (2.0 * self.a) - self.omega * self.omega
    }

    /// The printed `k_+` at energy `e`.
    pub fn k_plus(&self, e: Complex) -> Complex {
        let PtLinearParams { a, b, gamma, omega } = *self;
        let disc = (e * gamma + (b - a * gamma)).powi(2) - gamma * gamma * omega * omega;
        (Complex::new(2.0 * b * b, 0.0)
            - (Complex::new(2.0 * a + gamma, 0.0) - e * 2.0) * (b * gamma)
            + disc.sqrt() * (2.0 * b))
            / (gamma * gamma)
    }

    /// `delta0 = a - (c + k gamma) / (2b)`
    pub fn delta0(&self, e: Complex, k: Complex) -> Complex {
        Complex::new(self.a, 0.0) - (self.c(e) + k * self.gamma) / (2.0 * self.b)
    }

    /// `E_n = (n+1) gamma/2 + omega^2 / (2 (n+1) gamma)` as printed.
    pub fn paper_energy(&self, n: usize) -> f64 {
        let m = (n + 1) as f64;
        m * self.gamma / 2.0 + self.omega * self.omega / (2.0 * m * self.gamma)
    }
}

#[derive(Clone, Debug)]
pub struct PtLinear {
    pub params: PtLinearParams,
}

impl PtLinear {
    pub fn new(params: PtLinearParams) -> Result<Self> {
        Ok(PtLinear { params })
    }
}

impl ModelFamily for PtLinear {
    fn name(&self) -> &'static str {
        "pt-linear"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        let p = self.params;
        vec![
            ("a", p.a),
            ("b", p.b),
            ("gamma", p.gamma),
            ("omega", p.omega),
        ]
    }

    fn dirac_model(&self) -> DiracModel {
        let p = self.params;
        DiracModel::new(
            Poly::real(&[1.0, p.gamma]),
            Poly::real(&[p.a, p.b]),
            Poly::real(&[p.omega]),
            Poly::zero(),
            Space::Z,
        )
        .expect("pt-linear model is well formed")
    }

    fn search(&self, n: usize) -> Search {
        let p = self.params;
        let s = 1.0
            + p.a.abs()
            + (p.b / p.gamma).abs()
            + p.omega.abs()
            + p.omega * p.omega / p.gamma.abs()
            + (n + 2) as f64 * p.gamma.abs();
        Search::interval(-4.0 * s, 4.0 * s)
    }

    fn paper_energy(&self, n: usize) -> Option<f64> {
        Some(self.params.paper_energy(n))
    }

    fn closed_form_precondition(&self) -> Result<()> {
        if self.params.b == 0.0 {
            return Err(Error::Unsupported(
                "pt-linear closed forms need b != 0".into(),
            ));
        }
        Ok(())
    }

    fn closed_forms(&self, n_max: usize) -> Result<Vec<ClosedFormState>> {
        pt_linear_solve(&self.params, n_max)
    }
}

/// Levels `0..=n_max` with engine energies and the printed wavefunctions.
pub fn pt_linear_solve(params: &PtLinearParams, n_max: usize) -> Result<Vec<ClosedFormState>> {
    let fam = PtLinear::new(*params)?;
    fam.closed_form_precondition()?;
    let model = fam.dirac_model();
    let ode = fam.ode()?;
    (0..=n_max)
        .map(|n| {
            let lvl = engine_level(&fam, n)?;
            let (e, k) = (lvl.quantization.e, lvl.quantization.k);
            let state = ClosedFormState::build(
                n,
                e,
                k,
                params.k_plus(e),
                Deltas::Pt {
                    delta0: params.delta0(e, k),
                },
                PaperForm::Pt {
                    a: params.a,
                    gamma: params.gamma,
                    omega: params.omega,
                },
                lvl.solution,
                model.clone(),
                ode.clone(),
            );
            Ok(normalize_state(state))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn slice_energies() {
        let p = PtLinearParams::new(1.0, 2.0, 2.0, 2.0).unwrap();
        let states = pt_linear_solve(&p, 2).unwrap();
        for (s, want) in states.iter().zip([2.0, 2.5, 10.0 / 3.0]) {
            assert!((s.e - c(want)).norm() < 1e-9, "n={} E={}", s.n, s.e);
            assert!((s.e.re - p.paper_energy(s.n)).abs() < 1e-9);
            assert!((s.k - s.k_paper).norm() < 1e-8);
        }
    }

    #[test]
    fn general_a_shifts_spectrum() {
        let p = PtLinearParams::new(0.0, 2.0, 2.0, 2.0).unwrap();
        let states = pt_linear_solve(&p, 1).unwrap();
        for s in &states {
            let shifted = p.a - p.b / p.gamma + p.paper_energy(s.n);
            assert!((s.e.re - shifted).abs() < 1e-9);
            assert!((s.k - c((2 * s.n + 1) as f64 * p.b)).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_gamma_rejected() {
        assert!(PtLinearParams::new(1.0, 2.0, 0.0, 2.0).is_err());
    }
}
