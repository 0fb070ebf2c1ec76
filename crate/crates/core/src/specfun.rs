//! Associated Laguerre polynomials `L_n^mu(s)` with complex `mu` and `s`.

use crate::algebra::Complex;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaguerreSpec {
    pub n: usize,
    pub mu: Complex,
}

impl LaguerreSpec {
    pub fn new(n: usize, mu: Complex) -> Self {
        LaguerreSpec { n, mu }
    }

    pub fn eval(&self, s: Complex) -> Complex {
        assoc_laguerre(*self, s)
    }

    /// `d/ds L_n^mu = -L_{n-1}^{mu+1}`
    pub fn derivative(&self, s: Complex) -> Complex {
        if self.n == 0 {
            return Complex::new(0.0, 0.0);
        }
        -assoc_laguerre(LaguerreSpec::new(self.n - 1, self.mu + 1.0), s)
    }

    /// `d^2/ds^2 L_n^mu = L_{n-2}^{mu+2}`
    pub fn second_derivative(&self, s: Complex) -> Complex {
        if self.n < 2 {
            return Complex::new(0.0, 0.0);
        }
        assoc_laguerre(LaguerreSpec::new(self.n - 2, self.mu + 2.0), s)
    }
}

/// Three-term recurrence evaluation.
pub fn assoc_laguerre(spec: LaguerreSpec, s: Complex) -> Complex {
    let mu = spec.mu;
    let one = Complex::new(1.0, 0.0);
    if spec.n == 0 {
        return one;
    }
    let mut prev = one;
    let mut cur = one + mu - s;
    for k in 1..spec.n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + mu - s) * cur - (kf + mu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Reference evaluation of `s^{-mu} e^s / n! d^n/ds^n [s^{n+mu} e^{-s}]` by
/// product-rule expansion. Limited to `n <= 8`.
pub fn rodrigues_check(spec: LaguerreSpec, s: Complex) -> Result<Complex> {
    let n = spec.n;
    if n > 8 {
        return Err(Error::Unsupported(format!(
            "rodrigues_check is limited to n <= 8, got {n}"
        )));
    }
    let mu = spec.mu;
    let top = Complex::new(n as f64, 0.0) + mu;
    let zero = Complex::new(0.0, 0.0);
    let at_origin = s == zero;
    let mut sum = zero;
    let mut binom = 1.0;
    let mut falling = Complex::new(1.0, 0.0);
    for j in 0..=n {
        let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        let coeff = falling * binom * sign;
        // s^{-mu} * s^{n+mu-j} e^{-s} * e^{s}
        let term = if at_origin {
            // Combined exponent n - j is a nonnegative integer.
            if n - j == 0 {
                coeff
            } else {
                zero
            }
        } else {
            let power = (top - j as f64) * s.ln() - mu * s.ln();
            let exp_part = (-s).exp() * s.exp();
            coeff * power.exp() * exp_part
        };
        if coeff != zero && !term.re.is_finite() {
            return Err(Error::NonFinite("rodrigues_check term"));
        }
        sum += term;
        binom = binom * (n - j) as f64 / (j + 1) as f64;
        falling *= top - j as f64;
    }
    Ok(sum / factorial(n))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
