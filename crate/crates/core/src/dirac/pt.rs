use super::DiracModel;
use crate::algebra::{Complex, Poly};

/// Absolute tolerance on a PT condition violation.
pub const PT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PtCondition {
    pub name: &'static str,
    pub max_violation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtReport {
    pub samples: Vec<f64>,
    pub conditions: Vec<PtCondition>,
    pub verdict: bool,
}

impl PtReport {
    pub fn condition(&self, name: &str) -> Option<&PtCondition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Checks `v*(x) = v(-x)`, `S*(x) = S(-x)`, `V*(x) = V(-x)` and
/// `W*(x) = -W(-x)` on `samples`. The model is evaluated in x-space.
pub fn pt_check(model: &DiracModel, s: &dyn Fn(f64) -> Complex, samples: &[f64]) -> PtReport {
    let m = model.to_x();
    let v_f = |x: f64| (m.v_f.eval_real(x).conj() - m.v_f.eval_real(-x)).norm();
    let pot = |x: f64| (m.v.eval_real(x).conj() - m.v.eval_real(-x)).norm();
    let scalar = |x: f64| (s(x).conj() - s(-x)).norm();
    let w = |x: f64| (m.w.eval_real(x).conj() + m.w.eval_real(-x)).norm();
    let max = |f: &dyn Fn(f64) -> f64| samples.iter().map(|&x| f(x)).fold(0.0, f64::max);
    let conditions: Vec<PtCondition> = [
        ("v_f", max(&v_f)),
        ("S", max(&scalar)),
        ("V", max(&pot)),
        ("W", max(&w)),
    ]
    .into_iter()
    .map(|(name, max_violation)| PtCondition {
        name,
        max_violation,
        passed: max_violation < PT_TOL,
    })
    .collect();
    let verdict = conditions.iter().all(|c| c.passed);
    PtReport {
        samples: samples.to_vec(),
        conditions,
        verdict,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSample {
    pub x: f64,
    pub s_r: f64,
    pub s_i: f64,
    /// `S_R - Re R - (g^2 x^2 - 1)/(2 g x) (S_I - Im R)`, `None` at `x = 0`
    /// or when `v_f` is not of the form `1 - i g x`.
    pub constraint: Option<f64>,
}

/// Splits `S = R - m v_f^2` into real and imaginary parts on `xs` (x-space
/// polynomials) and evaluates the linear-LFV constraint between them.
pub fn scalar_mass_split(
    m: &dyn Fn(f64) -> Complex,
    r: &Poly,
    v_f: &Poly,
    xs: &[f64],
) -> Vec<SplitSample> {
    let linear_lfv = v_f.degree() <= 1
        && (v_f.coeff(0) - Complex::new(1.0, 0.0)).norm() < 1e-14
        && v_f.coeff(1).re.abs() < 1e-14;
    let g = -v_f.coeff(1).im;
    xs.iter()
        .map(|&x| {
            let v = v_f.eval_real(x);
            let rx = r.eval_real(x);
            let s = rx - m(x) * v * v;
            let constraint = if linear_lfv && x != 0.0 && g != 0.0 {
                let factor = (g * g * x * x - 1.0) / (2.0 * g * x);
                Some(s.re - rx.re - factor * (s.im - rx.im))
            } else {
                None
            };
            SplitSample {
                x,
                s_r: s.re,
                s_i: s.im,
                constraint,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::I;
    use crate::dirac::Space;

    fn symmetric() -> Vec<f64> {
        (-10..=10).map(|k| k as f64 * 0.37).collect()
    }

    #[test]
    fn pt_model_passes_velocity_and_vector_conditions() {
        let (a, b, gamma, omega) = (1.0, 2.0, 2.0, 2.0);
        let m = DiracModel::new(
            Poly::real(&[1.0, gamma]),
            Poly::real(&[a, b]),
            Poly::real(&[omega]),
            Poly::zero(),
            Space::Z,
        )
        .unwrap();
        let rep = pt_check(&m, &|_| Complex::new(0.0, 0.0), &symmetric());
        assert_eq!(rep.condition("v_f").unwrap().max_violation, 0.0);
        assert_eq!(rep.condition("V").unwrap().max_violation, 0.0);
        assert!(rep.condition("S").unwrap().passed);
        let w = rep.condition("W").unwrap();
        assert!(!w.passed);
        assert!((w.max_violation - 2.0 * omega).abs() < 1e-14);
        assert!(!rep.verdict);
    }

    #[test]
    fn nonpt_model_fails_scalar_condition() {
        let (alpha, gamma) = (1.0, 2.0);
        let beta = alpha * gamma;
        let m = DiracModel::new(
            Poly::real(&[1.0, gamma]),
            Poly::real(&[gamma / 2.0]),
            Poly::real(&[alpha]),
            Poly::new(vec![Complex::new(0.0, 0.0), I * beta]),
            Space::Z,
        )
        .unwrap();
        let mx = m.to_x();
        let r = mx.r.clone();
        let rep = pt_check(&m, &move |x| r.eval_real(x), &symmetric());
        assert!(!rep.condition("S").unwrap().passed);
        assert!(rep.condition("v_f").unwrap().passed);
    }

    #[test]
    fn split_examples() {
        let vf = |g: f64| Poly::new(vec![Complex::new(1.0, 0.0), Complex::new(0.0, -g)]);
        let s = scalar_mass_split(
            &|_| Complex::new(0.0, 0.0),
            &Poly::real(&[0.0, 1.5]),
            &vf(1.0),
            &[0.7],
        );
        assert!((s[0].s_r - 1.05).abs() < 1e-14 && s[0].s_i == 0.0);

        let s = scalar_mass_split(&|_| Complex::new(1.0, 0.0), &Poly::zero(), &vf(1.0), &[2.0]);
        assert!((s[0].s_r - 3.0).abs() < 1e-14 && (s[0].s_i - 4.0).abs() < 1e-14);
        assert!(s[0].constraint.unwrap().abs() < 1e-14);

        let s = scalar_mass_split(
            &|_| Complex::new(1.0, 0.0),
            &Poly::real(&[0.0, 2.0]),
            &vf(1.0),
            &[1.0, 0.0],
        );
        assert!((s[0].s_r - 2.0).abs() < 1e-14 && (s[0].s_i - 2.0).abs() < 1e-14);
        assert!(s[0].constraint.unwrap().abs() < 1e-14);
        assert_eq!(s[1].constraint, None);
    }
}
