//! Model families behind a common trait, registered by name.
//!
//! * `pt-linear`: `W = omega`, `V = a + b z`, `v = 1 + gamma z`, `R = 0`.
//! * `nonpt-shifted`: `W = alpha`, `R = i beta z`, `v = 1 + gamma z`,
//!   `V = gamma / 2`.
//! * `custom`: arbitrary polynomial coefficients in z-space.

mod custom;
mod nonpt;
mod pt;
mod state;

use std::collections::BTreeMap;

pub use custom::Custom;
pub use nonpt::{nonpt_solve, NonPt, NonPtParams};
pub use pt::{pt_linear_solve, PtLinear, PtLinearParams};
pub use state::{
    closed_form_residual, engine_residual, ClosedFormState, Deltas, EngineState, PaperForm,
};

use crate::algebra::Complex;
use crate::dirac::{decouple, DecoupledOde, DiracModel};
use crate::error::{Error, Result};
use crate::nu::{quantize_energy, EnergyFamily, NuProblem, NuSolution, QuantizationResult, Search};
use crate::oracle::normalize_quadrature;

pub type Params = BTreeMap<String, f64>;

/// Half-widths used to probe normalizability of closed-form states.
pub const NORM_HALF_WIDTHS: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

pub trait ModelFamily: Send + Sync {
    fn name(&self) -> &'static str;

    /// Parameters as supplied, in a fixed order.
    fn params(&self) -> Vec<(&'static str, f64)>;

    /// The model in z-space.
    fn dirac_model(&self) -> DiracModel;

    fn ode(&self) -> Result<DecoupledOde> {
        decouple(&self.dirac_model())
    }

    /// Where to look for level `n`.
    fn search(&self, n: usize) -> Search;

    /// Preference among several quantized energies for one level.
    fn rank(&self, level: &QuantizationResult) -> f64 {
        level.e.norm()
    }

    /// The printed closed-form energy, when the family has one.
    fn paper_energy(&self, _n: usize) -> Option<f64> {
        None
    }

    /// `Ok` when the printed closed forms apply to these parameters.
    fn closed_form_precondition(&self) -> Result<()> {
        Err(Error::Unsupported(format!(
            "model '{}' has no closed forms",
            self.name()
        )))
    }

    fn closed_forms(&self, _n_max: usize) -> Result<Vec<ClosedFormState>> {
        self.closed_form_precondition().map(|_| Vec::new())
    }

    /// Energies compatible with an oracle eigenvalue of `E^2` when the
    /// decoupled equation only depends on `E^2`.
    fn energies_from_square(&self, e2: Complex) -> Vec<Complex> {
        let e = e2.sqrt();
        vec![e, -e]
    }

    /// A point known to be singular for the decoupled equation on the real
    /// z axis (the zero of `v_f`), if any.
    fn singular_point(&self) -> Option<f64> {
        let v = self.dirac_model().v_f;
        if v.degree() == 1 && v.coeff(1).im == 0.0 && v.coeff(0).im == 0.0 {
            Some(-v.coeff(0).re / v.coeff(1).re)
        } else {
            None
        }
    }
}

/// Adapts a [`ModelFamily`] to the energy-quantization interface.
pub struct FamilyEnergy<'a> {
    pub model: &'a dyn ModelFamily,
    pub ode: DecoupledOde,
}

impl<'a> FamilyEnergy<'a> {
    pub fn new(model: &'a dyn ModelFamily) -> Result<Self> {
        Ok(FamilyEnergy {
            ode: model.ode()?,
            model,
        })
    }
}

impl EnergyFamily for FamilyEnergy<'_> {
    fn problem(&self, e: Complex) -> Result<NuProblem> {
        self.ode.to_nu_problem(e)
    }

    fn rank(&self, level: &QuantizationResult) -> f64 {
        self.model.rank(level)
    }
}

/// Engine result for one level: the quantized energy and the NU solution.
#[derive(Clone, Debug, PartialEq)]
pub struct EngineLevel {
    pub quantization: QuantizationResult,
    pub problem: NuProblem,
    pub solution: NuSolution,
}

pub fn engine_level(model: &dyn ModelFamily, n: usize) -> Result<EngineLevel> {
    engine_level_with(model, n, model.search(n))
}

/// [`engine_level`] packaged with the model for wavefunction evaluation.
pub fn engine_state(model: &dyn ModelFamily, n: usize) -> Result<EngineState> {
    let lvl = engine_level(model, n)?;
    Ok(EngineState {
        n,
        e: lvl.quantization.e,
        k: lvl.quantization.k,
        solution: lvl.solution,
        model: model.dirac_model(),
        ode: model.ode()?,
    })
}

pub fn engine_level_with(model: &dyn ModelFamily, n: usize, search: Search) -> Result<EngineLevel> {
    let fam = FamilyEnergy::new(model)?;
    let q = quantize_energy(&fam, n, search)?;
    let problem = fam.problem(q.e)?;
    let solution = NuSolution::new(&problem, q.branch.clone(), n)?;
    Ok(EngineLevel {
        quantization: q,
        problem,
        solution,
    })
}

type Builder = fn(&Params) -> Result<Box<dyn ModelFamily>>;

pub struct RegistryEntry {
    pub name: &'static str,
    pub required: &'static [&'static str],
    pub optional: &'static [&'static str],
    builder: Builder,
}

/// Name-indexed model constructors.
pub struct ModelRegistry {
    entries: Vec<RegistryEntry>,
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = ModelRegistry {
            entries: Vec::new(),
        };
        r.register("pt-linear", &["a", "b", "gamma", "omega"], &[], |p| {
            Ok(Box::new(PtLinear::new(PtLinearParams::from_map(p)?)?))
        });
        r.register("nonpt-shifted", &["alpha", "beta", "gamma"], &[], |p| {
            Ok(Box::new(NonPt::new(NonPtParams::from_map(p)?)?))
        });
        r.register("custom", &[], custom::PARAM_NAMES, |p| {
            Ok(Box::new(Custom::from_map(p)?))
        });
        r
    }
}

impl ModelRegistry {
    pub fn register(
        &mut self,
        name: &'static str,
        required: &'static [&'static str],
        optional: &'static [&'static str],
        builder: Builder,
    ) {
        self.entries.retain(|e| e.name != name);
        self.entries.push(RegistryEntry {
            name,
            required,
            optional,
            builder,
        });
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    pub fn entry(&self, name: &str) -> Result<&RegistryEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "model",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn build(&self, name: &str, params: &Params) -> Result<Box<dyn ModelFamily>> {
        let entry = self.entry(name)?;
        for req in entry.required {
            if !params.contains_key(*req) {
                return Err(Error::InvalidParameter(format!(
                    "model '{name}' requires parameter '{req}'"
                )));
            }
        }
        for key in params.keys() {
            if !entry.required.contains(&key.as_str()) && !entry.optional.contains(&key.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "model '{name}' does not take parameter '{key}'"
                )));
            }
        }
        for (k, v) in params {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "parameter '{k}' is not finite"
                )));
            }
        }
        (entry.builder)(params)
    }
}

/// Probes the norm over [`NORM_HALF_WIDTHS`] and scales to unit norm when
/// it converges.
pub(crate) fn normalize_state(mut state: ClosedFormState) -> ClosedFormState {
    let probe = normalize_quadrature(&state, &NORM_HALF_WIDTHS);
    if let (true, Some(norm)) = (probe.converged, probe.last()) {
        if norm > 0.0 && norm.is_finite() {
            state.normalization = Complex::new(1.0 / norm.sqrt(), 0.0);
        }
    }
    state.norm = Some(probe);
    state
}

pub(crate) fn param(p: &Params, name: &str) -> Result<f64> {
    p.get(name)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter '{name}'")))
}
