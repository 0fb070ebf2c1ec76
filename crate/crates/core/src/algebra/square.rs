use super::{quadratic_roots, Complex, Poly};
use crate::error::{Error, Result};

/// Relative tolerance used when checking that a polynomial is a perfect square.
pub const SQUARE_TOL: f64 = 1e-9;

/// A z-polynomial whose coefficients are affine in a parameter `k`:
/// `constant(z) + k * slope(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineInK {
    pub constant: Poly,
    pub slope: Poly,
}

impl AffineInK {
    pub fn new(constant: Poly, slope: Poly) -> Result<Self> {
        if constant.degree() > 2 || slope.degree() > 2 {
            return Err(Error::Unsupported(
                "affine-in-k expression above degree 2".into(),
            ));
        }
        Ok(AffineInK { constant, slope })
    }

    pub fn at(&self, k: Complex) -> Poly {
        &self.constant + &self.slope.scaled(k)
    }

    /// `B(k)^2 - 4 A(k) C(k)` as a polynomial in `k`.
    pub fn k_condition(&self) -> Poly {
        let (a0, b0, c0) = (
            self.constant.coeff(2),
            self.constant.coeff(1),
            self.constant.coeff(0),
        );
        let (a1, b1, c1) = (
            self.slope.coeff(2),
            self.slope.coeff(1),
            self.slope.coeff(0),
        );
        Poly::new(vec![
            b0 * b0 - a0 * c0 * 4.0,
            b0 * b1 * 2.0 - (a0 * c1 + a1 * c0) * 4.0,
            b1 * b1 - a1 * c1 * 4.0,
        ])
    }

    fn scale(&self) -> f64 {
        self.constant.scale().max(self.slope.scale())
    }
}

/// One admissible `k` together with a linear `r(z)` such that `r^2` equals the
/// under-root expression at that `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct KRoot {
    pub k: Complex,
    pub root: Poly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PerfectSquare {
    /// The condition polynomial vanishes identically: every `k` works.
    AnyK,
    /// Roots sorted by descending real part, a double root listed once.
    Roots(Vec<KRoot>),
}

impl PerfectSquare {
    pub fn roots(&self) -> &[KRoot] {
        match self {
            PerfectSquare::AnyK => &[],
            PerfectSquare::Roots(r) => r,
        }
    }
}

/// Every `k` for which `expr` is a perfect square in `z`.
pub fn perfect_square_k(expr: &AffineInK) -> Result<PerfectSquare> {
    let cond = expr.k_condition();
    if !cond.is_finite() {
        return Err(Error::NonFinite("perfect-square condition"));
    }
    let s = expr.scale().max(1e-300);
    if cond.is_negligible(1e-14 * s * s) {
        return Ok(PerfectSquare::AnyK);
    }
    let cond = cond.trimmed(1e-14);
    let ks: Vec<Complex> = match cond.degree() {
        0 => Vec::new(),
        1 => vec![-cond.coeff(0) / cond.coeff(1)],
        _ => {
            let (d0, d1, d2) = (cond.coeff(0), cond.coeff(1), cond.coeff(2));
            let disc = d1 * d1 - d2 * d0 * 4.0;
            if disc.norm() <= 1e-12 * (d1.norm_sqr() + (d2 * d0 * 4.0).norm()) {
                vec![-d1 / (d2 * 2.0)]
            } else {
                let (r1, r2) = quadratic_roots(&cond)?;
                vec![r1, r2]
            }
        }
    };
    let mut out = Vec::with_capacity(ks.len());
    for k in ks {
        let root = linear_square_root(&expr.at(k))?;
        out.push(KRoot { k, root });
    }
    out.sort_by(|a, b| b.k.re.total_cmp(&a.k.re).then(b.k.im.total_cmp(&a.k.im)));
    Ok(PerfectSquare::Roots(out))
}

/// Linear `r(z)` with `r^2 = p` for a perfect-square `p` of degree at most 2.
pub fn linear_square_root(p: &Poly) -> Result<Poly> {
    if p.degree() > 2 {
        return Err(Error::Unsupported("square root above degree 2".into()));
    }
    let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
    let scale = p.scale();
    let root = if a.norm() > 1e-14 * scale {
        let sa = a.sqrt();
        Poly::linear(b / (sa * 2.0), sa)
    } else {
        Poly::constant(c.sqrt())
    };
    let residual = (&root * &root).distance(p);
    if residual > SQUARE_TOL * scale.max(1.0) {
        return Err(Error::InvalidK { residual });
    }
    Ok(root)
}
