use super::{ModelFamily, Params};
use crate::algebra::{Complex, Poly};
use crate::dirac::{DiracModel, Space};
use crate::error::{Error, Result};
use crate::nu::Search;

/// Coefficient names: `<poly><power>` for the real part and
/// `<poly><power>i` for the imaginary part, with poly one of `vf`, `v`, `w`,
/// `r`, plus the energy scan window `emin`, `emax`.
pub const PARAM_NAMES: &[&str] = &[
    "vf0", "vf1", "vf2", "vf0i", "vf1i", "vf2i", "v0", "v1", "v2", "v0i", "v1i", "v2i", "w0", "w1",
    "w2", "w0i", "w1i", "w2i", "r0", "r1", "r2", "r0i", "r1i", "r2i", "emin", "emax",
];

const POLYS: [&str; 4] = ["vf", "v", "w", "r"];

/// A Dirac model with arbitrary quadratic z-space coefficients. Unset
/// coefficients are zero except `vf0 = 1`.
#[derive(Clone, Debug)]
pub struct Custom {
    params: Params,
    model: DiracModel,
    emin: f64,
    emax: f64,
}

impl Custom {
    pub fn from_map(p: &Params) -> Result<Self> {
        let coeff = |name: &str, j: usize| {
            let re = p.get(&format!("{name}{j}")).copied();
            let re = re.unwrap_or(if name == "vf" && j == 0 { 1.0 } else { 0.0 });
            let im = p.get(&format!("{name}{j}i")).copied().unwrap_or(0.0);
            Complex::new(re, im)
        };
        let poly = |name: &str| Poly::new((0..3).map(|j| coeff(name, j)).collect());
        let [vf, v, w, r] = POLYS.map(poly);
        let model = DiracModel::new(vf, v, w, r, Space::Z)?;
        let emin = p.get("emin").copied().unwrap_or(-50.0);
        let emax = p.get("emax").copied().unwrap_or(50.0);
        if emin >= emax {
            return Err(Error::InvalidParameter("emin must be below emax".into()));
        }
        Ok(Custom {
            params: p.clone(),
            model,
            emin,
            emax,
        })
    }
}

impl ModelFamily for Custom {
    fn name(&self) -> &'static str {
        "custom"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        PARAM_NAMES
            .iter()
            .filter_map(|k| self.params.get(*k).map(|v| (*k, *v)))
            .collect()
    }

    fn dirac_model(&self) -> DiracModel {
        self.model.clone()
    }

    fn search(&self, _n: usize) -> Search {
        Search::interval(self.emin, self.emax)
    }
}
