//! The Nikiforov-Uvarov reduction of
//! `y'' + (tau_tilde/sigma) y' + (sigma_tilde/sigma^2) y = 0`
//! to hypergeometric type.

mod quantize;
mod weights;

pub use quantize::{
    quantize_all, quantize_energy, verify_level, EnergyFamily, QuantizationResult, Search,
};
pub use weights::{
    product_with_derivatives, rodrigues_polynomial, rodrigues_solution, weight_theta_rho,
    NuSolution, PowerFactor, RodriguesSolution, Weight, WeightPair,
};

use crate::algebra::{
    linear_square_root, perfect_square_k, AffineInK, Complex, PerfectSquare, Poly,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct NuProblem {
    pub tau_tilde: Poly,
    pub sigma: Poly,
    pub sigma_tilde: Poly,
}

impl NuProblem {
    pub fn new(tau_tilde: Poly, sigma: Poly, sigma_tilde: Poly) -> Result<Self> {
        if tau_tilde.degree() > 1 || sigma.degree() > 2 || sigma_tilde.degree() > 2 {
            return Err(Error::Unsupported(format!(
                "NU degree bounds violated (tau_tilde {}, sigma {}, sigma_tilde {})",
                tau_tilde.degree(),
                sigma.degree(),
                sigma_tilde.degree()
            )));
        }
        if sigma.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !(tau_tilde.is_finite() && sigma.is_finite() && sigma_tilde.is_finite()) {
            return Err(Error::NonFinite("NU problem"));
        }
        Ok(NuProblem {
            tau_tilde,
            sigma,
            sigma_tilde,
        })
    }

    /// `(sigma' - tau_tilde) / 2`
    pub fn half_gap(&self) -> Poly {
        (&self.sigma.derivative() - &self.tau_tilde).scaled(Complex::new(0.5, 0.0))
    }

    /// `half_gap^2 - sigma_tilde + k sigma`
    pub fn under_root(&self) -> AffineInK {
        let h = self.half_gap();
        AffineInK {
            constant: &(&h * &h) - &self.sigma_tilde,
            slope: self.sigma.clone(),
        }
    }

    pub fn k_values(&self) -> Result<PerfectSquare> {
        perfect_square_k(&self.under_root())
    }

    /// Every `(k, sign)` branch, `k` in descending-real-part order and `+`
    /// before `-` for each.
    pub fn branches(&self) -> Result<Vec<NuBranch>> {
        let ps = self.k_values()?;
        if let PerfectSquare::AnyK = ps {
            return Err(Error::Unsupported(
                "under-root expression is a perfect square for every k".into(),
            ));
        }
        let mut out = Vec::new();
        for root in ps.roots() {
            let (plus, minus) = pi_candidates(self, root.k)?;
            out.push(NuBranch::build(self, root.k, plus, 1));
            out.push(NuBranch::build(self, root.k, minus, -1));
        }
        Ok(out)
    }

    /// Residual of the original equation for `y` with derivatives `dy`, `d2y`
    /// at `z`, multiplied through by `sigma^2`.
    pub fn residual(&self, z: Complex, y: Complex, dy: Complex, d2y: Complex) -> Complex {
        let s = self.sigma.eval(z);
        s * s * d2y + s * self.tau_tilde.eval(z) * dy + self.sigma_tilde.eval(z) * y
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NuBranch {
    pub k: Complex,
    pub pi: Poly,
    pub tau: Poly,
    pub sign: i8,
    pub lambda: Complex,
}

impl NuBranch {
    fn build(problem: &NuProblem, k: Complex, pi: Poly, sign: i8) -> NuBranch {
        let tau = &problem.tau_tilde + &pi.scaled(Complex::new(2.0, 0.0));
        let lambda = k + pi.derivative().coeff(0);
        NuBranch {
            k,
            pi,
            tau,
            sign,
            lambda,
        }
    }

    pub fn tau_slope(&self) -> Complex {
        self.tau.derivative().coeff(0)
    }

    pub fn is_admissible(&self) -> bool {
        self.tau_slope().re < 0.0
    }

    /// Coefficient residual of `pi^2 - (sigma' - tau_tilde) pi + sigma_tilde - k sigma`.
    pub fn pi_identity_residual(&self, problem: &NuProblem) -> f64 {
        let gap = &problem.sigma.derivative() - &problem.tau_tilde;
        let lhs = &(&(&self.pi * &self.pi) - &(&gap * &self.pi)) + &problem.sigma_tilde;
        lhs.distance(&problem.sigma.scaled(self.k))
    }

    /// Coefficient residual of
    /// `sigma_tilde + pi^2 + pi (tau_tilde - sigma') + pi' sigma - lambda sigma`.
    pub fn reduction_residual(&self, problem: &NuProblem) -> f64 {
        let lhs = &(&(&problem.sigma_tilde + &(&self.pi * &self.pi))
            + &(&self.pi * &(&problem.tau_tilde - &problem.sigma.derivative())))
            + &(&self.pi.derivative() * &problem.sigma);
        lhs.distance(&problem.sigma.scaled(self.lambda))
    }
}

/// `pi = half_gap +/- sqrt(under_root(k))`, returned as `(pi_plus, pi_minus)`.
pub fn pi_candidates(problem: &NuProblem, k: Complex) -> Result<(Poly, Poly)> {
    let root = linear_square_root(&problem.under_root().at(k))?;
    let h = problem.half_gap();
    Ok((&h + &root, &h - &root))
}

/// The admissible branch with the most negative `Re tau'`; ties go to the
/// earlier candidate.
pub fn select_branch(candidates: &[NuBranch]) -> Result<NuBranch> {
    let mut best: Option<&NuBranch> = None;
    for b in candidates.iter().filter(|b| b.is_admissible()) {
        match best {
            Some(cur) if b.tau_slope().re >= cur.tau_slope().re - 1e-12 => {}
            _ => best = Some(b),
        }
    }
    best.cloned().ok_or(Error::NoAdmissibleBranch)
}

/// `(lambda, lambda_n)` with `lambda_n = -n tau' - n(n-1) sigma'' / 2`.
pub fn lambda_pair(branch: &NuBranch, problem: &NuProblem, n: usize) -> (Complex, Complex) {
    (branch.lambda, lambda_n(branch.tau_slope(), problem, n))
}

pub(crate) fn lambda_n(tau_slope: Complex, problem: &NuProblem, n: usize) -> Complex {
    let nf = n as f64;
    let sigma2 = problem.sigma.coeff(2) * 2.0;
    -tau_slope * nf - sigma2 * (nf * (nf - 1.0) / 2.0)
}
