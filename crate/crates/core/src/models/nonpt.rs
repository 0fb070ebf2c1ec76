use super::state::{ClosedFormState, Deltas, PaperForm};
use super::{engine_level, normalize_state, param, ModelFamily, Params};
use crate::algebra::{Complex, Poly};
use crate::dirac::{DiracModel, Space};
use crate::error::{Error, Result};
use crate::nu::{QuantizationResult, Search};

/// `W = alpha`, `R = i beta z`, `v_f = 1 + gamma z`, `V = gamma/2` in z-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonPtParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `beta == alpha * gamma`
    pub on_slice: bool,
}

impl NonPtParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if ![alpha, beta, gamma].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter(
                "nonpt-shifted parameters must be finite".into(),
            ));
        }
        if alpha == 0.0 || gamma == 0.0 {
            return Err(Error::InvalidParameter(
                "alpha and gamma must be nonzero".into(),
            ));
        }
        let on_slice = (beta - alpha * gamma).abs() <= 1e-12 * (1.0 + (alpha * gamma).abs());
        Ok(NonPtParams {
            alpha,
            beta,
            gamma,
            on_slice,
        })
    }

    pub fn from_map(p: &Params) -> Result<Self> {
        Self::new(param(p, "alpha")?, param(p, "beta")?, param(p, "gamma")?)
    }

    /// `k_+ = 2 alpha^2 + 2 alpha E`
    pub fn k_plus(&self, e: Complex) -> Complex {
        e * (2.0 * self.alpha) + 2.0 * self.alpha * self.alpha
    }

    /// `epsilon^2 = alpha^2 + gamma^2/4 - E^2`
    pub fn eps2(&self, e: Complex) -> Complex {
        Complex::new(self.alpha * self.alpha + self.gamma * self.gamma / 4.0, 0.0) - e * e
    }

    /// `(delta1, delta2) = (alpha - k/(2 alpha) - gamma/2, 2 alpha - k/alpha)`
    pub fn deltas(&self, k: Complex) -> (Complex, Complex) {
        let a = self.alpha;
        (
            Complex::new(a - self.gamma / 2.0, 0.0) - k / (2.0 * a),
            Complex::new(2.0 * a, 0.0) - k / a,
        )
    }

    /// `E_n = (n + 1/2) gamma - alpha` as printed.
    pub fn paper_energy(&self, n: usize) -> f64 {
        (n as f64 + 0.5) * self.gamma - self.alpha
    }

    /// The level index for which `E` satisfies `lambda = lambda_n` on the
    /// `k_+` branch: `(2 alpha^2 + 2 alpha E - beta) / (2 beta)`.
    pub fn implied_level(&self, e: Complex) -> Complex {
        (self.k_plus(e) - self.beta) / (2.0 * self.beta)
    }
}

#[derive(Clone, Debug)]
pub struct NonPt {
    pub params: NonPtParams,
}

impl NonPt {
    pub fn new(params: NonPtParams) -> Result<Self> {
        Ok(NonPt { params })
    }
}

fn distance_to_level(m: Complex) -> f64 {
    let n = m.re.round().max(0.0);
    (m - n).norm()
}

impl ModelFamily for NonPt {
    fn name(&self) -> &'static str {
        "nonpt-shifted"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        let p = self.params;
        vec![("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma)]
    }

    fn dirac_model(&self) -> DiracModel {
        let p = self.params;
        DiracModel::new(
            Poly::real(&[1.0, p.gamma]),
            Poly::real(&[p.gamma / 2.0]),
            Poly::real(&[p.alpha]),
            Poly::new(vec![Complex::new(0.0, 0.0), Complex::new(0.0, p.beta)]),
            Space::Z,
        )
        .expect("nonpt-shifted model is well formed")
    }

    fn search(&self, n: usize) -> Search {
        let p = self.params;
        let s = 1.0 + p.alpha.abs() + p.beta.abs() + (n + 2) as f64 * p.gamma.abs();
        Search::interval(-4.0 * s, 4.0 * s)
    }

    fn rank(&self, level: &QuantizationResult) -> f64 {
        (level.k - self.params.k_plus(level.e)).norm()
    }

    fn paper_energy(&self, n: usize) -> Option<f64> {
        Some(self.params.paper_energy(n))
    }

    fn closed_form_precondition(&self) -> Result<()> {
        if self.params.on_slice {
            Ok(())
        } else {
            Err(Error::ClosedFormSlice)
        }
    }

    fn closed_forms(&self, n_max: usize) -> Result<Vec<ClosedFormState>> {
        nonpt_solve(&self.params, n_max)
    }

    /// Orders `+-sqrt(E^2)` by how close the implied level index on the
    /// `k_+` branch is to a nonnegative integer; ties keep the lower index.
    fn energies_from_square(&self, e2: Complex) -> Vec<Complex> {
        let r = e2.sqrt();
        let mut out = vec![r, -r];
        out.sort_by(|a, b| {
            let (ma, mb) = (self.params.implied_level(*a), self.params.implied_level(*b));
            let (da, db) = (distance_to_level(ma), distance_to_level(mb));
            if (da - db).abs() <= 1e-9 {
                ma.re.total_cmp(&mb.re)
            } else {
                da.total_cmp(&db)
            }
        });
        out
    }
}

/// Levels `0..=n_max` on the `beta = alpha gamma` slice.
pub fn nonpt_solve(params: &NonPtParams, n_max: usize) -> Result<Vec<ClosedFormState>> {
    let fam = NonPt::new(*params)?;
    fam.closed_form_precondition()?;
    let model = fam.dirac_model();
    let ode = fam.ode()?;
    (0..=n_max)
        .map(|n| {
            let lvl = engine_level(&fam, n)?;
            let (e, k) = (lvl.quantization.e, lvl.quantization.k);
            let (delta1, delta2) = params.deltas(k);
            let state = ClosedFormState::build(
                n,
                e,
                k,
                params.k_plus(e),
                Deltas::NonPt { delta1, delta2 },
                PaperForm::NonPt {
                    alpha: params.alpha,
                    gamma: params.gamma,
                },
                lvl.solution,
                model.clone(),
                ode.clone(),
            );
            Ok(normalize_state(state))
        })
        .collect()
}
