use std::ops::{Add, Mul, Neg, Sub};

use super::{Complex, Poly};
use crate::error::{Error, Result};

/// Ratio of two complex polynomials. The denominator is never identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Rational { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        Rational {
            num: p,
            den: Poly::constant(Complex::new(1.0, 0.0)),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn derivative(&self) -> Rational {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Rational {
            num,
            den: &self.den * &self.den,
        }
        .simplified()
    }

    /// Returns the quotient as a polynomial when the division is exact to
    /// `1e-12` relative.
    pub fn as_poly(&self) -> Option<Poly> {
        let (q, r) = self.num.div_rem(&self.den).ok()?;
        let scale = self.num.scale().max(1e-300);
        if r.is_negligible(1e-12 * scale) {
            Some(q.trimmed(1e-14))
        } else {
            None
        }
    }

    /// Collapses to `p / 1` when the division is exact, otherwise cancels a
    /// constant denominator.
    pub fn simplified(&self) -> Rational {
        if let Some(p) = self.as_poly() {
            return Rational::from_poly(p);
        }
        if self.den.degree() == 0 {
            let d = self.den.coeff(0);
            return Rational::from_poly(self.num.scaled(d.inv()));
        }
        self.clone()
    }

    pub fn is_polynomial(&self) -> bool {
        self.as_poly().is_some()
    }

    pub fn scaled(&self, factor: Complex) -> Rational {
        Rational {
            num: self.num.scaled(factor),
            den: self.den.clone(),
        }
    }

    /// `r(factor * z)`.
    pub fn substitute_scaled(&self, factor: Complex) -> Rational {
        Rational {
            num: self.num.substitute_scaled(factor),
            den: self.den.substitute_scaled(factor),
        }
    }

    fn combine(&self, rhs: &Rational, sign: f64) -> Rational {
        if self.den == rhs.den {
            let num = &self.num + &rhs.num.scaled(Complex::new(sign, 0.0));
            return Rational {
                num,
                den: self.den.clone(),
            }
            .simplified();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den).scaled(Complex::new(sign, 0.0));
        Rational {
            num,
            den: &self.den * &rhs.den,
        }
        .simplified()
    }
}

impl From<Poly> for Rational {
    fn from(p: Poly) -> Self {
        Rational::from_poly(p)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self.combine(rhs, -1.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .simplified()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
