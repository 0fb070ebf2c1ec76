use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Complex;
use crate::error::{Error, Result};

/// Polynomial with complex coefficients, `coeffs[j]` multiplying `z^j`.
///
/// Trailing zero coefficients are trimmed on construction, so `degree()` is
/// always `coeffs.len() - 1`. The zero polynomial is stored as `[0]` and has
/// degree 0.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly::new(Vec::new())
    }

    pub fn constant(c: Complex) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 z`
    pub fn linear(c0: Complex, c1: Complex) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> Complex {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> Complex {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex::new(0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex {
        self.eval(Complex::new(x, 0.0))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn scaled(&self, factor: Complex) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// `p(factor * z)`.
    pub fn substitute_scaled(&self, factor: Complex) -> Poly {
        let mut power = Complex::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * power);
            power *= factor;
        }
        Poly::new(out)
    }

    pub fn conj(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Drops trailing coefficients below `rel_tol * scale()`.
    pub fn trimmed(&self, rel_tol: f64) -> Poly {
        let cutoff = rel_tol * self.scale();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        Poly::new(coeffs)
    }

    /// True when every coefficient is within `tol` of zero.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    /// Polynomial long division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dd = divisor.degree();
        if self.degree() < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Complex::new(0.0, 0.0); self.degree() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] / lead;
            quot[i] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
        rem.truncate(dd.max(1));
        if dd == 0 {
            rem = vec![Complex::new(0.0, 0.0)];
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn distance(&self, other: &Poly) -> f64 {
        (self - other).scale()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[")?;
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, "]")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub fn poly_eval(p: &Poly, z: Complex) -> Complex {
    p.eval(z)
}

pub fn poly_derivative(p: &Poly) -> Poly {
    p.derivative()
}

/// Both roots of a polynomial of degree 1 or 2.
///
/// A linear polynomial returns its single root twice. The quadratic branch
/// uses the sign-matched form `q = -(b + sgn * sqrt(disc)) / 2`, roots `q/a`
/// and `c/q`, which avoids cancellation.
pub fn quadratic_roots(p: &Poly) -> Result<(Complex, Complex)> {
    match p.degree() {
        0 if p.is_zero() => Err(Error::ZeroPolynomial),
        0 => Err(Error::NoRoots),
        1 => {
            let r = -p.coeff(0) / p.coeff(1);
            Ok((r, r))
        }
        2 => {
            let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
            let mut sq = (b * b - a * c * 4.0).sqrt();
            if (b.conj() * sq).re < 0.0 {
                sq = -sq;
            }
            let q = -(b + sq) * 0.5;
            if q == Complex::new(0.0, 0.0) {
                return Ok((q, q));
            }
            Ok((q / a, c / q))
        }
        d => Err(Error::Unsupported(format!(
            "quadratic_roots on a degree-{d} polynomial"
        ))),
    }
}
