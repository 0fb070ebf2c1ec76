use crate::algebra::{Complex, Poly, I};
use crate::dirac::{decouple, DecoupledOde, DiracModel};
use crate::nu::{product_with_derivatives, NuSolution, PowerFactor, RodriguesSolution, Weight};
use crate::oracle::{NormProbe, SpinorSource};
use crate::specfun::{factorial, LaguerreSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Deltas {
    Pt { delta0: Complex },
    NonPt { delta1: Complex, delta2: Complex },
}

/// Data needed for the printed lower components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PaperForm {
    Pt { a: f64, gamma: f64, omega: f64 },
    NonPt { alpha: f64, gamma: f64 },
}

/// One level of a closed-form model: engine energy and NU solution next to
/// the printed Laguerre representation.
///
/// All wavefunction accessors include `normalization`. Unprefixed accessors
/// use the engine solution `theta * y_n`; `paper_*` accessors use the
/// printed forms with the engine's `k` substituted into the deltas.
#[derive(Clone, Debug)]
pub struct ClosedFormState {
    pub n: usize,
    pub e: Complex,
    pub k: Complex,
    /// The printed `k_+` expression evaluated at `e`.
    pub k_paper: Complex,
    pub deltas: Deltas,
    pub laguerre: LaguerreSpec,
    pub normalization: Complex,
    pub form: PaperForm,
    pub paper_theta: Weight,
    pub paper_y: RodriguesSolution,
    pub engine: NuSolution,
    pub model: DiracModel,
    pub ode: DecoupledOde,
    pub norm: Option<NormProbe>,
}

impl ClosedFormState {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn build(
        n: usize,
        e: Complex,
        k: Complex,
        k_paper: Complex,
        deltas: Deltas,
        form: PaperForm,
        engine: NuSolution,
        model: DiracModel,
        ode: DecoupledOde,
    ) -> ClosedFormState {
        let (rate, power, mu, gamma) = match (deltas, form) {
            (Deltas::Pt { delta0 }, PaperForm::Pt { a, gamma, .. }) => (
                Complex::new(a, 0.0),
                delta0 / gamma,
                delta0 * 2.0 / gamma,
                gamma,
            ),
            (Deltas::NonPt { delta1, delta2 }, PaperForm::NonPt { alpha, gamma }) => (
                Complex::new(alpha, 0.0),
                delta1 / gamma,
                delta2 / gamma,
                gamma,
            ),
            _ => unreachable!("mismatched closed-form data"),
        };
        let sigma = Poly::real(&[1.0, gamma]);
        let laguerre = LaguerreSpec::new(n, mu);
        let paper_theta = Weight {
            exponent: Poly::linear(Complex::new(0.0, 0.0), -rate),
            factors: vec![PowerFactor {
                base: sigma.clone(),
                power,
            }],
        };
        let paper_y = RodriguesSolution::Laguerre {
            scale: Complex::new(gamma.powi(n as i32) * factorial(n), 0.0),
            spec: laguerre,
            zeta: sigma.scaled(rate * 2.0 / gamma),
        };
        ClosedFormState {
            n,
            e,
            k,
            k_paper,
            deltas,
            laguerre,
            normalization: Complex::new(1.0, 0.0),
            form,
            paper_theta,
            paper_y,
            engine,
            model,
            ode,
            norm: None,
        }
    }

    /// The same wavefunctions paired with a different energy.
    pub fn with_energy(&self, e: Complex) -> ClosedFormState {
        ClosedFormState { e, ..self.clone() }
    }

    pub fn xi_z(&self, z: Complex) -> Complex {
        self.normalization * self.engine.eval(z)
    }

    pub fn xi_z_derivs(&self, z: Complex) -> (Complex, Complex, Complex) {
        let (a, b, c) = self.engine.eval_with_derivatives(z);
        let s = self.normalization;
        (s * a, s * b, s * c)
    }

    pub fn paper_xi_z_derivs(&self, z: Complex) -> (Complex, Complex, Complex) {
        let (a, b, c) = product_with_derivatives(&self.paper_theta, &self.paper_y, z);
        let s = self.normalization;
        (s * a, s * b, s * c)
    }

    pub fn paper_xi_z(&self, z: Complex) -> Complex {
        self.paper_xi_z_derivs(z).0
    }

    pub fn xi_x(&self, x: f64) -> Complex {
        self.xi_z(to_z(x))
    }

    pub fn paper_xi_x(&self, x: f64) -> Complex {
        self.paper_xi_z(to_z(x))
    }

    /// `psi_1 = (W - iR) xi / sqrt(v)`
    pub fn psi1_x(&self, x: f64) -> Complex {
        let z = to_z(x);
        self.model.w_minus_ir().eval(z) * self.xi_z(z) / self.model.v_f.eval(z).sqrt()
    }

    /// `psi_2 = [(E - V + f) xi + v xi'] / sqrt(v)` with `'` = d/dz.
    pub fn psi2_x(&self, x: f64) -> Complex {
        let z = to_z(x);
        let (xi, dxi, _) = self.xi_z_derivs(z);
        self.lower_from(z, xi, dxi)
    }

    fn lower_from(&self, z: Complex, xi: Complex, dxi: Complex) -> Complex {
        let v = self.model.v_f.eval(z);
        let shift = self.e - self.model.v.eval(z) + self.ode.f.eval(z);
        (shift * xi + v * dxi) / v.sqrt()
    }

    /// The printed upper component.
    pub fn paper_psi1_x(&self, x: f64) -> Complex {
        let z = to_z(x);
        let w = match self.form {
            PaperForm::Pt { omega, .. } => Complex::new(omega, 0.0),
            PaperForm::NonPt { alpha, gamma } => Complex::new(alpha, 0.0) * (1.0 - I * gamma * x),
        };
        w * self.paper_xi_z(z) / self.model.v_f.eval(z).sqrt()
    }

    /// The lower component in the printed form with two repairs: a single
    /// `n!`, the coefficient `(E + delta0) / (1 - i gamma x)` for the linear
    /// PT model, and the power `(2 delta1 - gamma) / (2 gamma)` for the
    /// shifted model.
    pub fn paper_psi2_x(&self, x: f64) -> Complex {
        self.lower_closed_form(x, true)
    }

    /// The lower component exactly as typeset: coefficient `E / (1 - i gamma x)`
    /// and, for the shifted model, the power `(delta1 - gamma) / (2 gamma)`.
    pub fn paper_psi2_x_as_printed(&self, x: f64) -> Complex {
        self.lower_closed_form(x, false)
    }

    fn lower_closed_form(&self, x: f64, repaired: bool) -> Complex {
        let n = self.n;
        let nf = n as f64;
        let pre = self.normalization * factorial(n);
        match (self.form, self.deltas) {
            (PaperForm::Pt { a, gamma, omega }, Deltas::Pt { delta0 }) => {
                let u = 1.0 - I * gamma * x;
                let s = 2.0 * a / gamma * u;
                let mu = delta0 * 2.0 / gamma;
                let ln = LaguerreSpec::new(n, mu).eval(s);
                let lm = lower_laguerre(n, mu + 1.0, s);
                let mut top = Complex::new(
                    ((1.0 + nf).powi(2) * gamma * gamma + omega * omega) / ((nf + 1.0) * gamma),
                    0.0,
                );
                if repaired {
                    top += delta0 * 2.0;
                }
                let coef = top / u - 4.0 * a;
                pre * gamma.powi(n as i32)
                    * (I * a * x).exp()
                    * u.powc((delta0 * 2.0 + gamma) / (2.0 * gamma))
                    * 0.5
                    * (coef * ln - 4.0 * a * lm)
            }
            (PaperForm::NonPt { alpha, gamma }, Deltas::NonPt { delta1, delta2 }) => {
                let u = 1.0 - I * gamma * x;
                let s = 2.0 * alpha / gamma * u;
                let mu = delta2 / gamma;
                let ln = LaguerreSpec::new(n, mu).eval(s);
                let lm = lower_laguerre(n, mu + 1.0, s);
                let coef = gamma + nf * gamma - alpha * (2.0 - I * gamma * x) + delta1;
                let power = if repaired {
                    (delta1 * 2.0 - gamma) / (2.0 * gamma)
                } else {
                    (delta1 - gamma) / (2.0 * gamma)
                };
                pre * gamma.powi(n as i32)
                    * (I * alpha * x).exp()
                    * u.powc(power)
                    * (coef * ln - 2.0 * alpha * u * lm)
            }
            _ => unreachable!("mismatched closed-form data"),
        }
    }
}

fn lower_laguerre(n: usize, mu: Complex, s: Complex) -> Complex {
    if n == 0 {
        Complex::new(0.0, 0.0)
    } else {
        LaguerreSpec::new(n - 1, mu).eval(s)
    }
}

fn to_z(x: f64) -> Complex {
    Complex::new(0.0, -x)
}

impl SpinorSource for ClosedFormState {
    fn spinor_at(&self, x: f64) -> (Complex, Complex) {
        (self.psi1_x(x), self.psi2_x(x))
    }
}

/// Sample points for residual checks: half on the real z axis with
/// `1 + gamma z` in `[0.1, 4]`, half on the physical line `z = -i x`,
/// `x` in `[-3, 3]`.
pub(crate) fn residual_points(model: &DiracModel, n_points: usize) -> Vec<Complex> {
    let v = &model.to_z().v_f;
    let gamma = v.coeff(1).re;
    let real_half = n_points / 2;
    let line_half = n_points - real_half;
    let mut pts = Vec::with_capacity(n_points);
    for j in 0..real_half {
        let t = if real_half > 1 {
            j as f64 / (real_half - 1) as f64
        } else {
            0.5
        };
        let s = 0.1 + 3.9 * t;
        let z = if gamma != 0.0 {
            (s - 1.0) / gamma
        } else {
            s - 1.0
        };
        pts.push(Complex::new(z, 0.0));
    }
    for j in 0..line_half {
        let t = if line_half > 1 {
            j as f64 / (line_half - 1) as f64
        } else {
            0.5
        };
        pts.push(to_z(-3.0 + 6.0 * t));
    }
    pts
}

fn max_relative_residual(
    ode: &DecoupledOde,
    e: Complex,
    pts: &[Complex],
    f: impl Fn(Complex) -> (Complex, Complex, Complex),
) -> f64 {
    pts.iter()
        .map(|&z| {
            let (xi, dxi, d2xi) = f(z);
            let (pz, qz) = (ode.p_at(z), ode.q_at(z, e));
            let res = d2xi + pz * dxi + qz * xi;
            let scale = d2xi.norm() + (pz * dxi).norm() + (qz * xi).norm();
            if scale == 0.0 {
                0.0
            } else {
                res.norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// Maximum relative residual of the printed `xi_1` in the decoupled z-space
/// equation of `model` at `n_points` points.
pub fn closed_form_residual(state: &ClosedFormState, model: &DiracModel, n_points: usize) -> f64 {
    let Ok(ode) = decouple(model) else {
        return f64::INFINITY;
    };
    let pts = residual_points(model, n_points);
    max_relative_residual(&ode, state.e, &pts, |z| state.paper_xi_z_derivs(z))
}

/// As [`closed_form_residual`] for the engine solution `theta * y_n`.
pub fn engine_residual(state: &ClosedFormState, model: &DiracModel, n_points: usize) -> f64 {
    let Ok(ode) = decouple(model) else {
        return f64::INFINITY;
    };
    let pts = residual_points(model, n_points);
    max_relative_residual(&ode, state.e, &pts, |z| state.xi_z_derivs(z))
}

/// An engine level without printed closed forms.
#[derive(Clone, Debug)]
pub struct EngineState {
    pub n: usize,
    pub e: Complex,
    pub k: Complex,
    pub solution: NuSolution,
    pub model: DiracModel,
    pub ode: DecoupledOde,
}

impl EngineState {
    pub fn xi_z_derivs(&self, z: Complex) -> (Complex, Complex, Complex) {
        self.solution.eval_with_derivatives(z)
    }

    pub fn psi1_x(&self, x: f64) -> Complex {
        let z = to_z(x);
        self.model.w_minus_ir().eval(z) * self.solution.eval(z) / self.model.v_f.eval(z).sqrt()
    }

    pub fn psi2_x(&self, x: f64) -> Complex {
        let z = to_z(x);
        let (xi, dxi, _) = self.xi_z_derivs(z);
        let v = self.model.v_f.eval(z);
        let shift = self.e - self.model.v.eval(z) + self.ode.f.eval(z);
        (shift * xi + v * dxi) / v.sqrt()
    }

    /// As [`engine_residual`] for this level.
    pub fn residual(&self, n_points: usize) -> f64 {
        let pts = residual_points(&self.model, n_points);
        max_relative_residual(&self.ode, self.e, &pts, |z| self.xi_z_derivs(z))
    }
}

impl SpinorSource for EngineState {
    fn spinor_at(&self, x: f64) -> (Complex, Complex) {
        (self.psi1_x(x), self.psi2_x(x))
    }
}
