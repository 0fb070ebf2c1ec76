//! Complex polynomial arithmetic and the quadratic machinery behind the NU
//! method.

mod poly;
mod rational;
mod square;

pub use poly::{poly_derivative, poly_eval, quadratic_roots, Poly};
pub use rational::Rational;
pub use square::{linear_square_root, perfect_square_k, AffineInK, KRoot, PerfectSquare};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

pub const I: Complex = Complex::new(0.0, 1.0);

/// Builds a complex scalar, rejecting NaN and infinite components.
pub fn complex(re: f64, im: f64) -> Result<Complex> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(Error::NonFinite("complex scalar"))
    }
}
