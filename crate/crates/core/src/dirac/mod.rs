//! Dirac models with a local Fermi velocity, the decoupled second-order
//! equation for the transformed upper component, and spinor reconstruction.
//!
//! Models are stored as polynomials in either `x` or `z = -i x`. The
//! decoupled equation always lives in `z`:
//!
//! ```text
//! xi'' + P xi' + (q0 + E q1 + E^2 q2) xi = 0
//! P  = (v' + f) / v
//! q0 = (W^2 + R^2 - V^2 + V f - v (V' - f')) / v^2
//! q1 = (2V - f) / v^2
//! q2 = -1 / v^2
//! f  = v (W' - i R') / (W - i R)
//! ```

mod pt;
mod spinor;

pub use pt::{pt_check, scalar_mass_split, PtCondition, PtReport, SplitSample};
pub use spinor::{coupled_residuals, reconstruct_spinor, stencil5, CoupledResiduals, SpinorGrid};

use crate::algebra::{Complex, Poly, Rational, I};
use crate::error::{Error, Result};
use crate::nu::NuProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    XToZ,
    ZToX,
}

/// Substitutes `z = -i x` (`ZToX`) or `x = i z` (`XToZ`) into the coefficients.
pub fn rotate_poly(p: &Poly, dir: Rotation) -> Poly {
    match dir {
        Rotation::ZToX => p.substitute_scaled(-I),
        Rotation::XToZ => p.substitute_scaled(I),
    }
}

pub fn rotate_rational(r: &Rational, dir: Rotation) -> Rational {
    match dir {
        Rotation::ZToX => r.substitute_scaled(-I),
        Rotation::XToZ => r.substitute_scaled(I),
    }
}

/// Potentials of `H = sqrt(v) p sqrt(v) s3 + R s2 + W s1 + V`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracModel {
    pub v_f: Poly,
    pub v: Poly,
    pub w: Poly,
    pub r: Poly,
    pub space: Space,
}

impl DiracModel {
    pub fn new(v_f: Poly, v: Poly, w: Poly, r: Poly, space: Space) -> Result<Self> {
        if v_f.is_zero() {
            return Err(Error::InvalidModel(
                "Fermi velocity is identically zero".into(),
            ));
        }
        for (name, p) in [("v_f", &v_f), ("V", &v), ("W", &w), ("R", &r)] {
            if p.degree() > 2 {
                return Err(Error::InvalidModel(format!(
                    "{name} has degree {} > 2",
                    p.degree()
                )));
            }
            if !p.is_finite() {
                return Err(Error::NonFinite("Dirac model coefficients"));
            }
        }
        Ok(DiracModel {
            v_f,
            v,
            w,
            r,
            space,
        })
    }

    pub fn rotate(&self, dir: Rotation) -> DiracModel {
        let rot = |p: &Poly| rotate_poly(p, dir);
        DiracModel {
            v_f: rot(&self.v_f),
            v: rot(&self.v),
            w: rot(&self.w),
            r: rot(&self.r),
            space: match dir {
                Rotation::XToZ => Space::Z,
                Rotation::ZToX => Space::X,
            },
        }
    }

    pub fn to_z(&self) -> DiracModel {
        match self.space {
            Space::Z => self.clone(),
            Space::X => self.rotate(Rotation::XToZ),
        }
    }

    pub fn to_x(&self) -> DiracModel {
        match self.space {
            Space::X => self.clone(),
            Space::Z => self.rotate(Rotation::ZToX),
        }
    }

    /// `W - i R`
    pub fn w_minus_ir(&self) -> Poly {
        &self.w - &self.r.scaled(I)
    }

    /// `W + i R`
    pub fn w_plus_ir(&self) -> Poly {
        &self.w + &self.r.scaled(I)
    }
}

pub fn rotate_space(model: &DiracModel, dir: Rotation) -> DiracModel {
    model.rotate(dir)
}

/// `f = v (W' - i R') / (W - i R)` in z-space. Takes the model in either
/// space and works in `z`.
pub fn f_function(model: &DiracModel) -> Result<Rational> {
    let m = model.to_z();
    let d = m.w_minus_ir();
    if d.is_negligible(0.0) {
        return Err(Error::TransformUndefined);
    }
    Ok(Rational::new(&m.v_f * &d.derivative(), d)?.simplified())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoupledOde {
    pub v_f: Poly,
    pub f: Rational,
    pub p: Rational,
    pub q0: Rational,
    pub q1: Rational,
    pub q2: Rational,
}

impl DecoupledOde {
    pub fn p_at(&self, z: Complex) -> Complex {
        self.p.eval(z)
    }

    pub fn q_at(&self, z: Complex, e: Complex) -> Complex {
        self.q0.eval(z) + e * self.q1.eval(z) + e * e * self.q2.eval(z)
    }

    /// True when `E` enters only through `E^2`.
    pub fn is_even_in_energy(&self) -> bool {
        self.q1
            .num
            .is_negligible(1e-14 * (1.0 + self.q0.num.scale()))
    }

    /// The equation multiplied through by `sigma^2` in NU form.
    pub fn to_nu_problem(&self, e: Complex) -> Result<NuProblem> {
        let sigma = if self.f.is_polynomial() {
            self.v_f.clone()
        } else {
            &self.v_f * &self.f.den
        };
        let s: Rational = sigma.clone().into();
        let tau_tilde = (&s * &self.p).as_poly().ok_or_else(not_nu)?;
        let q = &(&self.q0 + &self.q1.scaled(e)) + &self.q2.scaled(e * e);
        let sigma_tilde = (&(&s * &s) * &q).as_poly().ok_or_else(not_nu)?;
        let tau_tilde = tau_tilde.trimmed(1e-13);
        let sigma_tilde = sigma_tilde.trimmed(1e-13);
        if tau_tilde.degree() > 1 || sigma.degree() > 2 || sigma_tilde.degree() > 2 {
            return Err(not_nu());
        }
        NuProblem::new(tau_tilde, sigma, sigma_tilde)
    }
}

fn not_nu() -> Error {
    Error::Unsupported("decoupled equation is not of NU (hypergeometric-reducible) form".into())
}

/// The second-order equation for `xi_1 = sqrt(v) psi_1 / (W - i R)` in z-space.
pub fn decouple(model: &DiracModel) -> Result<DecoupledOde> {
    let m = model.to_z();
    let f = f_function(&m)?;
    let v: Rational = m.v_f.clone().into();
    let vv = &v * &v;
    let one = Poly::constant(Complex::new(1.0, 0.0));
    let vv_inv = Rational::new(one, vv.num.clone())?;
    let pot: Rational = m.v.clone().into();
    let w: Rational = m.w.clone().into();
    let r: Rational = m.r.clone().into();
    let p = &(&Rational::from(m.v_f.derivative()) + &f)
        * &Rational::new(Poly::constant(Complex::new(1.0, 0.0)), m.v_f.clone())?;
    let num0 = &(&(&(&(&w * &w) + &(&r * &r)) - &(&pot * &pot)) + &(&pot * &f))
        - &(&v * &(&Rational::from(m.v.derivative()) - &f.derivative()));
    let q0 = &num0 * &vv_inv;
    let q1 = &(&pot.scaled(Complex::new(2.0, 0.0)) - &f) * &vv_inv;
    let q2 = -&vv_inv;
    Ok(DecoupledOde {
        v_f: m.v_f,
        f,
        p,
        q0,
        q1,
        q2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn poly_c(cs: &[Complex]) -> Poly {
        Poly::new(cs.to_vec())
    }

    #[test]
    fn f_examples() {
        let zero = Poly::zero();
        let pt = DiracModel::new(
            Poly::real(&[1.0, 2.0]),
            Poly::real(&[1.0, 2.0]),
            Poly::real(&[2.0]),
            zero.clone(),
            Space::Z,
        )
        .unwrap();
        assert!(f_function(&pt).unwrap().num.is_zero());

        let (alpha, gamma) = (1.5, 2.0);
        let beta = alpha * gamma;
        let np = DiracModel::new(
            Poly::real(&[1.0, gamma]),
            Poly::real(&[gamma / 2.0]),
            Poly::real(&[alpha]),
            poly_c(&[c(0.0), I * beta]),
            Space::Z,
        )
        .unwrap();
        let f = f_function(&np).unwrap();
        assert!(f.as_poly().unwrap().distance(&Poly::real(&[gamma])) < 1e-14);

        let beta = 2.5;
        let np = DiracModel {
            r: poly_c(&[c(0.0), I * beta]),
            ..np
        };
        let f = f_function(&np).unwrap();
        assert!(!f.is_polynomial());
        let z = Complex::new(0.3, 0.2);
        let expect = beta * (1.0 + gamma * z) / (alpha + beta * z);
        assert!((f.eval(z) - expect).norm() < 1e-14);
    }

    #[test]
    fn f_undefined() {
        let m = DiracModel::new(
            Poly::real(&[1.0]),
            Poly::zero(),
            Poly::zero(),
            Poly::zero(),
            Space::Z,
        )
        .unwrap();
        assert_eq!(f_function(&m), Err(Error::TransformUndefined));
    }

    #[test]
    fn decouple_pt_matches_c_d() {
        let (a, b, gamma, omega, e) = (0.7, 1.3, 0.9, 1.1, Complex::new(0.4, 0.2));
        let m = DiracModel::new(
            Poly::real(&[1.0, gamma]),
            Poly::real(&[a, b]),
            Poly::real(&[omega]),
            Poly::zero(),
            Space::Z,
        )
        .unwrap();
        let ode = decouple(&m).unwrap();
        let cc = 2.0 * a * b + b * gamma - 2.0 * b * e;
        let d = e * e + a * a + b - 2.0 * a * e - omega * omega;
        for &z in &[c(0.2), Complex::new(-0.1, 0.5)] {
            let v = 1.0 + gamma * z;
            assert!((ode.p_at(z) - gamma / v).norm() < 1e-14);
            let q = (-b * b * z * z - cc * z - d) / (v * v);
            assert!((ode.q_at(z, e) - q).norm() < 1e-13);
        }
        let nu = ode.to_nu_problem(e).unwrap();
        assert!(nu.sigma_tilde.distance(&poly_c(&[-d, -cc, c(-b * b)])) < 1e-13);
    }

    #[test]
    fn decouple_nonpt_matches_eps() {
        let (alpha, gamma) = (1.0, 2.0);
        let beta = alpha * gamma;
        let m = DiracModel::new(
            Poly::real(&[1.0, gamma]),
            Poly::real(&[gamma / 2.0]),
            Poly::real(&[alpha]),
            poly_c(&[c(0.0), I * beta]),
            Space::Z,
        )
        .unwrap();
        let ode = decouple(&m).unwrap();
        assert!(ode.is_even_in_energy());
        let e = c(0.6);
        let eps2 = alpha * alpha + gamma * gamma / 4.0 - e * e;
        let z = c(0.37);
        let v = 1.0 + gamma * z;
        assert!((ode.p_at(z) - 2.0 * gamma / v).norm() < 1e-14);
        assert!((ode.q_at(z, e) - (eps2 - beta * beta * z * z) / (v * v)).norm() < 1e-13);
    }

    #[test]
    fn decouple_free_case() {
        let omega = 1.7;
        let m = DiracModel::new(
            Poly::real(&[1.0]),
            Poly::zero(),
            Poly::real(&[omega]),
            Poly::zero(),
            Space::Z,
        )
        .unwrap();
        let ode = decouple(&m).unwrap();
        let e = c(0.5);
        assert!(ode.p_at(c(0.3)).norm() == 0.0);
        assert!((ode.q_at(c(0.3), e) - c(omega * omega - 0.25)).norm() < 1e-14);
    }

    #[test]
    fn rotation_examples() {
        let gamma = 0.8;
        let v = rotate_poly(&Poly::real(&[1.0, gamma]), Rotation::ZToX);
        assert_eq!(v, poly_c(&[c(1.0), Complex::new(0.0, -gamma)]));
        let beta = 1.9;
        let r = rotate_poly(&poly_c(&[c(0.0), I * beta]), Rotation::ZToX);
        assert!(r.distance(&Poly::real(&[0.0, beta])) == 0.0);
        let p = poly_c(&[
            Complex::new(0.3, -1.2),
            Complex::new(2.5, 0.7),
            Complex::new(-0.4, 0.9),
        ]);
        let back = rotate_poly(&rotate_poly(&p, Rotation::XToZ), Rotation::ZToX);
        assert_eq!(back, p);
    }
}
