use super::{NuBranch, NuProblem};
use crate::algebra::{Complex, Poly};
use crate::error::{Error, Result};
use crate::specfun::{factorial, LaguerreSpec};

/// `base(z)^power` with `base` linear or constant.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerFactor {
    pub base: Poly,
    pub power: Complex,
}

/// `exp(exponent(z)) * prod base_i(z)^power_i`, principal branches.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub exponent: Poly,
    pub factors: Vec<PowerFactor>,
}

impl Weight {
    pub fn one() -> Self {
        Weight {
            exponent: Poly::zero(),
            factors: Vec::new(),
        }
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let mut log = self.exponent.eval(z);
        for f in &self.factors {
            log += f.power * f.base.eval(z).ln();
        }
        log.exp()
    }

    /// `w'/w`
    pub fn log_derivative(&self, z: Complex) -> Complex {
        let mut d = self.exponent.derivative().eval(z);
        for f in &self.factors {
            d += f.power * f.base.derivative().eval(z) / f.base.eval(z);
        }
        d
    }

    /// `(w'/w)'`
    pub fn log_second_derivative(&self, z: Complex) -> Complex {
        let mut d = self.exponent.derivative().derivative().eval(z);
        for f in &self.factors {
            let b = f.base.eval(z);
            let b1 = f.base.derivative().eval(z);
            d -= f.power * b1 * b1 / (b * b);
        }
        d
    }

    /// Linear coefficient of the exponent, the rate in `e^{rate z}`.
    pub fn rate(&self) -> Complex {
        self.exponent.coeff(1)
    }

    /// Power of the first factor, zero when there is none.
    pub fn power(&self) -> Complex {
        self.factors.first().map(|f| f.power).unwrap_or_default()
    }
}

/// `theta` with `theta'/theta = pi/sigma` and `rho` with `(sigma rho)' = tau rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPair {
    pub theta: Weight,
    pub rho: Weight,
}

/// Integrates `num/sigma` into a [`Weight`] by partial fractions.
fn integrate(num: &Poly, sigma: &Poly) -> Result<Weight> {
    match sigma.degree() {
        0 => {
            let s0 = sigma.coeff(0);
            let mut coeffs = vec![Complex::new(0.0, 0.0)];
            for (j, &c) in num.coeffs().iter().enumerate() {
                coeffs.push(c / (s0 * (j as f64 + 1.0)));
            }
            Ok(Weight {
                exponent: Poly::new(coeffs),
                factors: Vec::new(),
            })
        }
        1 => {
            if num.degree() > 1 {
                return Err(Error::Unsupported("weight numerator above degree 1".into()));
            }
            let (s0, s1) = (sigma.coeff(0), sigma.coeff(1));
            let (p0, p1) = (num.coeff(0), num.coeff(1));
            let rate = p1 / s1;
            let power = (p0 * s1 - p1 * s0) / (s1 * s1);
            Ok(Weight {
                exponent: Poly::linear(Complex::new(0.0, 0.0), rate),
                factors: vec![PowerFactor {
                    base: sigma.clone(),
                    power,
                }],
            })
        }
        _ => {
            if num.degree() > 1 {
                return Err(Error::Unsupported("weight numerator above degree 1".into()));
            }
            let (r1, r2) = crate::algebra::quadratic_roots(sigma)?;
            let s2 = sigma.coeff(2);
            if (r1 - r2).norm() <= 1e-10 * (1.0 + r1.norm()) {
                return Err(Error::Unsupported(
                    "sigma of degree 2 with a repeated root".into(),
                ));
            }
            let a = num.eval(r1) / (s2 * (r1 - r2));
            let b = num.eval(r2) / (s2 * (r2 - r1));
            let one = Complex::new(1.0, 0.0);
            Ok(Weight {
                exponent: Poly::zero(),
                factors: vec![
                    PowerFactor {
                        base: Poly::linear(-r1, one),
                        power: a,
                    },
                    PowerFactor {
                        base: Poly::linear(-r2, one),
                        power: b,
                    },
                ],
            })
        }
    }
}

pub fn weight_theta_rho(branch: &NuBranch, problem: &NuProblem) -> Result<WeightPair> {
    let theta = integrate(&branch.pi, &problem.sigma)?;
    let rho = integrate(&(&branch.tau - &problem.sigma.derivative()), &problem.sigma)?;
    Ok(WeightPair { theta, rho })
}

/// The hypergeometric-type solution `y_n = rho^{-1} d^n/dz^n [sigma^n rho]`
/// with unit normalization constant.
#[derive(Clone, Debug, PartialEq)]
pub enum RodriguesSolution {
    /// `scale * L_n^mu(zeta(z))`
    Laguerre {
        scale: Complex,
        spec: LaguerreSpec,
        zeta: Poly,
    },
    Polynomial(Poly),
}

impl RodriguesSolution {
    pub fn eval(&self, z: Complex) -> Complex {
        match self {
            RodriguesSolution::Laguerre { scale, spec, zeta } => *scale * spec.eval(zeta.eval(z)),
            RodriguesSolution::Polynomial(p) => p.eval(z),
        }
    }

    pub fn derivative(&self, z: Complex) -> Complex {
        match self {
            RodriguesSolution::Laguerre { scale, spec, zeta } => {
                *scale * spec.derivative(zeta.eval(z)) * zeta.coeff(1)
            }
            RodriguesSolution::Polynomial(p) => p.derivative().eval(z),
        }
    }

    pub fn second_derivative(&self, z: Complex) -> Complex {
        match self {
            RodriguesSolution::Laguerre { scale, spec, zeta } => {
                let d = zeta.coeff(1);
                *scale * spec.second_derivative(zeta.eval(z)) * d * d
            }
            RodriguesSolution::Polynomial(p) => p.derivative().derivative().eval(z),
        }
    }
}

/// Expands the Rodrigues formula through
/// `P_{m+1} = (tau + (n-m-1) sigma') P_m + sigma P_m'`, `P_0 = 1`.
pub fn rodrigues_polynomial(tau: &Poly, sigma: &Poly, n: usize) -> Poly {
    let ds = sigma.derivative();
    let mut p = Poly::constant(Complex::new(1.0, 0.0));
    for m in 0..n {
        let shift = (n as f64) - (m as f64) - 1.0;
        let factor = tau + &ds.scaled(Complex::new(shift, 0.0));
        p = &(&factor * &p) + &(sigma * &p.derivative());
    }
    p
}

pub fn rodrigues_solution(
    branch: &NuBranch,
    problem: &NuProblem,
    weights: &WeightPair,
    n: usize,
) -> RodriguesSolution {
    let sigma = &problem.sigma;
    let rate = weights.rho.rate();
    if sigma.degree() == 1 && weights.rho.exponent.degree() <= 1 && rate.norm() > 1e-14 {
        // sigma = s1 (z - z0), rho = e^{r z} sigma^q  =>  y = s1^n n! L_n^q(-r sigma / s1)
        let s1 = sigma.coeff(1);
        let zeta = sigma.scaled(-rate / s1);
        let scale = s1.powu(n as u32) * factorial(n);
        RodriguesSolution::Laguerre {
            scale,
            spec: LaguerreSpec::new(n, weights.rho.power()),
            zeta,
        }
    } else {
        RodriguesSolution::Polynomial(rodrigues_polynomial(&branch.tau, sigma, n))
    }
}

/// `theta(z) y_n(z)` for one quantized branch.
#[derive(Clone, Debug, PartialEq)]
pub struct NuSolution {
    pub n: usize,
    pub branch: NuBranch,
    pub weights: WeightPair,
    pub rodrigues: RodriguesSolution,
}

impl NuSolution {
    pub fn new(problem: &NuProblem, branch: NuBranch, n: usize) -> Result<Self> {
        let weights = weight_theta_rho(&branch, problem)?;
        let rodrigues = rodrigues_solution(&branch, problem, &weights, n);
        Ok(NuSolution {
            n,
            branch,
            weights,
            rodrigues,
        })
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.weights.theta.eval(z) * self.rodrigues.eval(z)
    }

    /// Value, first and second derivative.
    pub fn eval_with_derivatives(&self, z: Complex) -> (Complex, Complex, Complex) {
        product_with_derivatives(&self.weights.theta, &self.rodrigues, z)
    }
}

/// `theta(z) y(z)` together with its first two derivatives.
pub fn product_with_derivatives(
    theta: &Weight,
    y: &RodriguesSolution,
    z: Complex,
) -> (Complex, Complex, Complex) {
    let th = theta.eval(z);
    let l = theta.log_derivative(z);
    let l1 = theta.log_second_derivative(z);
    let (v, dv, d2v) = (y.eval(z), y.derivative(z), y.second_derivative(z));
    (
        th * v,
        th * (l * v + dv),
        th * ((l1 + l * l) * v + 2.0 * l * dv + d2v),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nu::select_branch;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn nonpt_weights_and_rodrigues() {
        // alpha=1, gamma=2, beta=2 at E=0, k=2
        let p = NuProblem::new(
            Poly::real(&[4.0]),
            Poly::real(&[1.0, 2.0]),
            Poly::real(&[2.0, 0.0, -4.0]),
        )
        .unwrap();
        let b = select_branch(&p.branches().unwrap()).unwrap();
        let w = weight_theta_rho(&b, &p).unwrap();
        // delta1 = alpha - k/(2 alpha) - gamma/2 = -1, delta2 = 2 alpha - k/alpha = 0
        assert!((w.theta.rate() - c(-1.0)).norm() < 1e-12);
        assert!((w.theta.power() - c(-0.5)).norm() < 1e-12);
        assert!((w.rho.rate() - c(-2.0)).norm() < 1e-12);
        assert!(w.rho.power().norm() < 1e-12);
        let y1 = rodrigues_solution(&b, &p, &w, 1);
        assert!(y1.eval(c(0.0)).norm() < 1e-12);
        assert!((rodrigues_solution(&b, &p, &w, 0).eval(c(0.7)) - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn trivial_theta() {
        let p = NuProblem::new(
            Poly::real(&[0.0, -2.0]),
            Poly::real(&[1.0]),
            Poly::real(&[4.0]),
        )
        .unwrap();
        let b = select_branch(&p.branches().unwrap()).unwrap();
        let w = weight_theta_rho(&b, &p).unwrap();
        assert!((w.theta.eval(c(1.3)) - c(1.0)).norm() < 1e-14);
        assert!((w.rho.eval(c(1.0)) - c((-1.0f64).exp())).norm() < 1e-14);
    }

    #[test]
    fn repeated_root_sigma_rejected() {
        let p = NuProblem::new(
            Poly::real(&[0.0]),
            Poly::real(&[1.0, 2.0, 1.0]),
            Poly::real(&[1.0]),
        )
        .unwrap();
        let b = NuBranch {
            k: c(0.0),
            pi: Poly::real(&[1.0]),
            tau: Poly::real(&[0.0, -1.0]),
            sign: 1,
            lambda: c(0.0),
        };
        assert!(matches!(
            weight_theta_rho(&b, &p),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn laguerre_matches_polynomial_recurrence() {
        let p = NuProblem::new(
            Poly::real(&[2.0]),
            Poly::real(&[1.0, 2.0]),
            Poly::real(&[1.5, 0.3, -4.0]),
        )
        .unwrap();
        for b in p.branches().unwrap() {
            let w = weight_theta_rho(&b, &p).unwrap();
            for n in 0..5 {
                let lag = rodrigues_solution(&b, &p, &w, n);
                assert!(matches!(lag, RodriguesSolution::Laguerre { .. }));
                let poly = rodrigues_polynomial(&b.tau, &p.sigma, n);
                for &z in &[c(0.1), c(1.7), Complex::new(0.4, -0.9)] {
                    let (a, e) = (lag.eval(z), poly.eval(z));
                    assert!((a - e).norm() <= 1e-10 * (1.0 + e.norm()));
                }
            }
        }
    }

    #[test]
    fn weight_identities() {
        let p = NuProblem::new(
            Poly::real(&[0.5, -1.0]),
            Poly::real(&[1.0, 0.3, -2.0]),
            Poly::real(&[1.5, 0.3, -4.0]),
        )
        .unwrap();
        for b in p.branches().unwrap() {
            let w = weight_theta_rho(&b, &p).unwrap();
            for &z in &[c(0.1), Complex::new(0.2, 0.4)] {
                let s = p.sigma.eval(z);
                let ds = p.sigma.derivative().eval(z);
                assert!((w.theta.log_derivative(z) - b.pi.eval(z) / s).norm() < 1e-12);
                // (sigma rho)' / rho = sigma' + sigma rho'/rho = tau
                let lhs = ds + s * w.rho.log_derivative(z);
                assert!((lhs - b.tau.eval(z)).norm() < 1e-12);
            }
        }
    }
}
