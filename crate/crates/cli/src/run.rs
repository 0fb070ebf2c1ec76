use nudirac_core::dirac::{coupled_residuals, reconstruct_spinor};
use nudirac_core::models::{
    closed_form_residual, engine_residual, engine_state, ClosedFormState, EngineState, ModelFamily,
    NORM_HALF_WIDTHS,
};
use nudirac_core::oracle::{
    normalize_quadrature, solve_spectrum, NormProbe, Pencil, MATCH_ABS, MATCH_REL,
};
use nudirac_core::{Complex, Error as CoreError};

use crate::config::RunConfig;
use crate::document::{
    Check, Coupled, OracleSummary, Reasons, Record, ResultDocument, Wavefunction, TOOL, VERSION,
};
use crate::error::CliError;

/// Sample points for closed-form residuals.
pub const RESIDUAL_POINTS: usize = 50;
/// Threshold on the relative ODE residual of each level.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Threshold on the coupled first-order residuals.
pub const COUPLED_TOL: f64 = 1e-5;
/// Grid for coupled-system checks: `COUPLED_POINTS` points on `[-COUPLED_HALF_WIDTH, COUPLED_HALF_WIDTH]`.
pub const COUPLED_HALF_WIDTH: f64 = 5.0;
pub const COUPLED_POINTS: usize = 2001;

/// One computed level, with or without the printed closed forms.
pub enum Level {
    Closed(Box<ClosedFormState>),
    Engine(Box<EngineState>),
}

impl Level {
    pub fn n(&self) -> usize {
        match self {
            Level::Closed(s) => s.n,
            Level::Engine(s) => s.n,
        }
    }

    pub fn e(&self) -> Complex {
        match self {
            Level::Closed(s) => s.e,
            Level::Engine(s) => s.e,
        }
    }

    pub fn k(&self) -> Complex {
        match self {
            Level::Closed(s) => s.k,
            Level::Engine(s) => s.k,
        }
    }

    pub fn xi_x(&self, x: f64) -> Complex {
        match self {
            Level::Closed(s) => s.xi_x(x),
            Level::Engine(s) => s.solution.eval(Complex::new(0.0, -x)),
        }
    }

    pub fn spinor_x(&self, x: f64) -> (Complex, Complex) {
        match self {
            Level::Closed(s) => (s.psi1_x(x), s.psi2_x(x)),
            Level::Engine(s) => (s.psi1_x(x), s.psi2_x(x)),
        }
    }

    /// Residual of the engine `xi_1` in the decoupled equation.
    pub fn residual(&self) -> f64 {
        match self {
            Level::Closed(s) => engine_residual(s, &s.model, RESIDUAL_POINTS),
            Level::Engine(s) => s.residual(RESIDUAL_POINTS),
        }
    }

    /// Residual of the printed `xi_1`.
    pub fn paper_residual(&self) -> Option<f64> {
        match self {
            Level::Closed(s) => Some(closed_form_residual(s, &s.model, RESIDUAL_POINTS)),
            Level::Engine(_) => None,
        }
    }

    pub fn norm(&self) -> NormProbe {
        match self {
            Level::Closed(s) => s
                .norm
                .clone()
                .unwrap_or_else(|| normalize_quadrature(s.as_ref(), &NORM_HALF_WIDTHS)),
            Level::Engine(s) => normalize_quadrature(s.as_ref(), &NORM_HALF_WIDTHS),
        }
    }
}

pub struct Computed {
    pub levels: Vec<Result<Level, CoreError>>,
    pub notes: Vec<String>,
}

/// Engine levels `0..=n_max`, with closed forms unless `engine_only` is set
/// or the family has none.
pub fn compute_levels(cfg: &RunConfig, model: &dyn ModelFamily) -> Result<Computed, CliError> {
    let mut notes = Vec::new();
    let engine_levels = |notes: &mut Vec<String>| {
        let levels: Vec<_> = (0..=cfg.n_max)
            .map(|n| engine_state(model, n).map(|s| Level::Engine(Box::new(s))))
            .collect();
        for (n, l) in levels.iter().enumerate() {
            if let Err(e) = l {
                notes.push(format!("n={n}: engine failed: {e}"));
            }
        }
        levels
    };
    if cfg.engine_only {
        let levels = engine_levels(&mut notes);
        return Ok(Computed { levels, notes });
    }
    match model.closed_form_precondition() {
        Ok(()) => {}
        Err(CoreError::Unsupported(msg)) => {
            notes.push(format!(
                "closed forms unavailable ({msg}); engine results only"
            ));
            let levels = engine_levels(&mut notes);
            return Ok(Computed { levels, notes });
        }
        Err(e) => return Err(e.into()),
    }
    match model.closed_forms(cfg.n_max) {
        Ok(states) => Ok(Computed {
            levels: states
                .into_iter()
                .map(|s| Ok(Level::Closed(Box::new(s))))
                .collect(),
            notes,
        }),
        Err(e) => {
            notes.push(format!("closed forms failed ({e}); engine results only"));
            let levels = engine_levels(&mut notes);
            Ok(Computed { levels, notes })
        }
    }
}

fn spectrum_note(model: &dyn ModelFamily, n: usize, e: Complex, paper: f64) -> Option<String> {
    let diff = e - paper;
    if diff.norm() <= 1e-9 * (1.0 + paper.abs()) {
        return None;
    }
    let mut note = format!(
        "n={n}: E_engine = {} differs from E_paper_formula = {paper} by {}",
        fmt_c(e),
        fmt_c(diff)
    );
    if model.name() == "pt-linear" {
        let p: std::collections::BTreeMap<_, _> = model.params().into_iter().collect();
        let shift = p["a"] - p["b"] / p["gamma"];
        note.push_str(&format!(
            "; the printed spectrum omits the shift a - b/gamma = {shift}"
        ));
    }
    Some(note)
}

fn fmt_c(c: Complex) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

fn base_record(
    model: &dyn ModelFamily,
    n: usize,
    level: &Result<Level, CoreError>,
    notes: &mut Vec<String>,
) -> Record {
    let mut r = Reasons::default();
    let paper = model.paper_energy(n);
    let e_paper = r.real("E_paper_formula", paper, "model has no printed spectrum");
    let mut rec = Record {
        n,
        E_engine: None,
        E_paper_formula: e_paper,
        E_oracle: None,
        oracle_estimate: None,
        k: None,
        k_paper: None,
        residual: None,
        paper_residual: None,
        coupled_residual: None,
        norm_converged: None,
        norm_growth_exponent: None,
        null_reasons: Reasons::default(),
    };
    match level {
        Ok(l) => {
            rec.E_engine = r.complex("E_engine", Some(l.e()), "");
            rec.k = r.complex("k", Some(l.k()), "");
            rec.k_paper = match l {
                Level::Closed(s) => {
                    if (s.k - s.k_paper).norm() > 1e-8 * (1.0 + s.k.norm()) {
                        notes.push(format!(
                            "n={n}: engine k = {} differs from the printed k_+ = {}",
                            fmt_c(s.k),
                            fmt_c(s.k_paper)
                        ));
                    }
                    r.complex("k_paper", Some(s.k_paper), "")
                }
                Level::Engine(_) => r.complex("k_paper", None, "closed forms not evaluated"),
            };
            rec.residual = r.real("residual", Some(l.residual()), "");
            rec.paper_residual = r.real(
                "paper_residual",
                l.paper_residual(),
                "closed forms not evaluated",
            );
            if let Some(res) = rec.paper_residual.filter(|&x| x >= RESIDUAL_TOL) {
                notes.push(format!(
                    "n={n}: the printed xi_1 does not solve the decoupled equation (relative residual {res:.3e})"
                ));
            }
            let probe = l.norm();
            rec.norm_converged = Some(probe.converged);
            rec.norm_growth_exponent = r.real(
                "norm_growth_exponent",
                probe.growth_exponent,
                "norm vanishes on the probed windows",
            );
            if let Some(p) = paper {
                notes.extend(spectrum_note(model, n, l.e(), p));
            }
        }
        Err(e) => {
            let reason = format!("engine failed: {e}");
            for f in [
                "E_engine",
                "k",
                "k_paper",
                "residual",
                "paper_residual",
                "norm_converged",
                "norm_growth_exponent",
            ] {
                r.set(f, reason.clone());
            }
        }
    }
    r.set("E_oracle", "oracle not run");
    r.set("oracle_estimate", "oracle not run");
    r.set("coupled_residual", "coupled system not checked");
    rec.null_reasons = r;
    rec
}

fn document(
    command: &str,
    cfg: &RunConfig,
    records: Vec<Record>,
    notes: Vec<String>,
) -> ResultDocument {
    ResultDocument {
        tool: TOOL,
        version: VERSION,
        command: command.to_string(),
        config: cfg.clone(),
        records,
        oracle: None,
        checks: Vec::new(),
        discrepancy_notes: notes,
        wavefunctions: Vec::new(),
        status: "pass",
    }
}

pub fn run_solve(cfg: &RunConfig) -> Result<ResultDocument, CliError> {
    let model = cfg.build_model()?;
    let Computed { levels, mut notes } = compute_levels(cfg, model.as_ref())?;
    let records = levels
        .iter()
        .enumerate()
        .map(|(n, l)| base_record(model.as_ref(), n, l, &mut notes))
        .collect();
    Ok(document("solve", cfg, records, notes))
}

fn check(name: String, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

pub fn run_verify(cfg: &RunConfig) -> Result<ResultDocument, CliError> {
    let model = cfg.build_model()?;
    let Computed { levels, mut notes } = compute_levels(cfg, model.as_ref())?;
    let mut records: Vec<Record> = levels
        .iter()
        .enumerate()
        .map(|(n, l)| base_record(model.as_ref(), n, l, &mut notes))
        .collect();
    let mut checks = Vec::new();
    let oracle = solve_spectrum(model.as_ref(), &cfg.oracle.discretization());
    match &oracle {
        Ok(s) => checks.push(check(
            "oracle".into(),
            true,
            format!(
                "{} converged levels, {} rejected",
                s.levels.len(),
                s.rejected
            ),
        )),
        Err(e) => checks.push(check("oracle".into(), false, e.to_string())),
    }
    let dm = model.dirac_model();
    let h = 2.0 * COUPLED_HALF_WIDTH / (COUPLED_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..COUPLED_POINTS)
        .map(|i| -COUPLED_HALF_WIDTH + i as f64 * h)
        .collect();
    for (rec, level) in records.iter_mut().zip(&levels) {
        let n = rec.n;
        let Ok(level) = level else {
            checks.push(check(
                format!("engine_n{n}"),
                false,
                rec.null_reasons.0["E_engine"].clone(),
            ));
            continue;
        };
        let r = &mut rec.null_reasons;
        let e = level.e();
        match &oracle {
            Ok(s) => match s.matching(e, MATCH_ABS, MATCH_REL) {
                Some(m) => {
                    rec.E_oracle = r.complex("E_oracle", Some(m.e), "");
                    rec.oracle_estimate = r.real("oracle_estimate", Some(m.estimate), "");
                    r.0.remove("E_oracle");
                    r.0.remove("oracle_estimate");
                    checks.push(check(
                        format!("engine_oracle_n{n}"),
                        true,
                        format!("|E_engine - E_oracle| = {:.3e}", (m.e - e).norm()),
                    ));
                }
                None => {
                    let reason = "no converged oracle level within max(1e-3, 5e-3 |E|)".to_string();
                    r.set("E_oracle", reason.clone());
                    r.set("oracle_estimate", reason.clone());
                    checks.push(check(format!("engine_oracle_n{n}"), false, reason));
                }
            },
            Err(err) => {
                r.set("E_oracle", format!("oracle failed: {err}"));
                r.set("oracle_estimate", format!("oracle failed: {err}"));
            }
        }
        if let Some(res) = rec.residual {
            checks.push(check(
                format!("residual_n{n}"),
                res < RESIDUAL_TOL,
                format!("{res:.3e} (threshold {RESIDUAL_TOL:e})"),
            ));
        }
        r.0.remove("coupled_residual");
        match reconstruct_spinor(&dm, e, &|x| level.xi_x(x), &grid) {
            Ok(sp) => {
                let c = coupled_residuals(&dm, &sp);
                rec.coupled_residual = Some(Coupled {
                    upper: c.upper,
                    lower: c.lower,
                });
                let worst = c.upper.max(c.lower);
                checks.push(check(
                    format!("coupled_n{n}"),
                    worst < COUPLED_TOL,
                    format!("{worst:.3e} (threshold {COUPLED_TOL:e})"),
                ));
            }
            Err(err) => {
                r.set("coupled_residual", format!("reconstruction failed: {err}"));
                checks.push(check(format!("coupled_n{n}"), false, err.to_string()));
            }
        }
    }
    let mut doc = document("verify", cfg, records, notes);
    doc.oracle = oracle.as_ref().ok().map(|s| OracleSummary {
        pencil: match s.pencil {
            Pencil::Linear => "linear".into(),
            Pencil::Quadratic => "quadratic".into(),
        },
        converged_levels: s.levels.len(),
        rejected_levels: s.rejected,
    });
    doc.checks = checks;
    doc.status = if doc.passed() { "pass" } else { "fail" };
    Ok(doc)
}

/// Samples `(psi_1, psi_2)` of every level at `points` uniform points on
/// `[x0, x1]`.
pub fn export_wavefunctions(
    cfg: &RunConfig,
    points: usize,
    range: [f64; 2],
) -> Result<ResultDocument, CliError> {
    if points < 2 {
        return Err(CliError::Usage("export needs at least 2 points".into()));
    }
    if range[0].partial_cmp(&range[1]) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage("export range must be increasing".into()));
    }
    let model = cfg.build_model()?;
    let Computed { levels, mut notes } = compute_levels(cfg, model.as_ref())?;
    let mut records = Vec::new();
    let mut waves = Vec::new();
    for (n, l) in levels.iter().enumerate() {
        records.push(base_record(model.as_ref(), n, l, &mut notes));
        if let Ok(level) = l {
            let h = (range[1] - range[0]) / (points - 1) as f64;
            let samples = (0..points)
                .map(|i| {
                    let x = if i + 1 == points {
                        range[1]
                    } else {
                        range[0] + i as f64 * h
                    };
                    let (p1, p2) = level.spinor_x(x);
                    [x, p1.re, p1.im, p2.re, p2.im]
                })
                .collect();
            waves.push(Wavefunction {
                n: level.n(),
                samples,
            });
        }
    }
    let mut doc = document("export", cfg, records, notes);
    doc.wavefunctions = waves;
    Ok(doc)
}
