use super::{lambda_n, NuBranch, NuProblem};
use crate::algebra::{quadratic_roots, Complex};
use crate::error::{Error, Result};

/// Relative tolerance on `|lambda - lambda_n|` for an accepted level.
pub const QUANTIZATION_TOL: f64 = 1e-10;

/// An energy-parametrized family of NU problems.
pub trait EnergyFamily {
    fn problem(&self, e: Complex) -> Result<NuProblem>;

    /// Preference among several quantized energies for the same `n`; the
    /// smallest rank wins.
    fn rank(&self, level: &QuantizationResult) -> f64 {
        level.e.norm()
    }
}

impl<F> EnergyFamily for F
where
    F: Fn(Complex) -> Result<NuProblem>,
{
    fn problem(&self, e: Complex) -> Result<NuProblem> {
        self(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Search {
    /// Scan real energies in `[lo, hi]` and bisect every sign change.
    Interval { lo: f64, hi: f64, samples: usize },
    /// Secant iteration from a complex starting energy.
    Seed(Complex),
}

impl Search {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Search::Interval {
            lo,
            hi,
            samples: 800,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantizationResult {
    pub n: usize,
    pub e: Complex,
    pub k: Complex,
    pub lambda: Complex,
    pub lambda_n: Complex,
    pub branch: NuBranch,
}

impl QuantizationResult {
    pub fn mismatch(&self) -> f64 {
        (self.lambda - self.lambda_n).norm()
    }
}

/// Checks whether `problem` is quantized at level `n`: some admissible branch
/// of the perfect-square `k` values satisfies `lambda = lambda_n`.
pub fn verify_level(problem: &NuProblem, n: usize) -> Result<(NuBranch, Complex, Complex)> {
    let mut best: Option<(NuBranch, Complex, Complex)> = None;
    for b in problem.branches()? {
        if !b.is_admissible() {
            continue;
        }
        let ln = lambda_n(b.tau_slope(), problem, n);
        let gap = (b.lambda - ln).norm();
        if best.as_ref().is_none_or(|(_, l, m)| gap < (*l - *m).norm()) {
            best = Some((b.clone(), b.lambda, ln));
        }
    }
    let (b, l, ln) = best.ok_or(Error::NoAdmissibleBranch)?;
    let gap = (l - ln).norm();
    if gap <= QUANTIZATION_TOL * ln.norm().max(1.0) {
        Ok((b, l, ln))
    } else {
        Err(Error::NoQuantizedLevel(format!(
            "|lambda - lambda_n| = {gap:.3e} at level {n}"
        )))
    }
}

/// Unsnapped roots of the perfect-square condition in `k`, in solver order.
fn raw_k_roots(problem: &NuProblem) -> Option<Vec<Complex>> {
    let expr = problem.under_root();
    let cond = expr.k_condition();
    let s = expr.constant.scale().max(expr.slope.scale()).max(1e-300);
    if !cond.is_finite() || cond.is_negligible(1e-14 * s * s) {
        return None;
    }
    let cond = cond.trimmed(1e-14);
    match cond.degree() {
        0 => Some(Vec::new()),
        1 => Some(vec![-cond.coeff(0) / cond.coeff(1)]),
        _ => quadratic_roots(&cond).ok().map(|(a, b)| vec![a, b]),
    }
}

/// `lambda - lambda_n` for sheet root `k` and sign, or `None` when the
/// branch is not admissible.
fn mismatch_on_sheet(problem: &NuProblem, k: Complex, sign: f64, n: usize) -> Option<Complex> {
    let lead = problem.under_root().at(k).coeff(2);
    let root_slope = if lead.norm() > 0.0 {
        lead.sqrt()
    } else {
        Complex::new(0.0, 0.0)
    };
    let pi_slope = problem.half_gap().coeff(1) + root_slope * sign;
    let tau_slope = problem.tau_tilde.coeff(1) + pi_slope * 2.0;
    if tau_slope.re >= 0.0 {
        return None;
    }
    Some(k + pi_slope - lambda_n(tau_slope, problem, n))
}

/// Assigns `roots` to the sheets predicted by `guess`, minimizing the total
/// distance.
fn assign(guess: &[Complex], roots: Vec<Complex>) -> Vec<Complex> {
    if guess.len() != 2 || roots.len() != 2 {
        return roots;
    }
    let direct = (roots[0] - guess[0]).norm() + (roots[1] - guess[1]).norm();
    let swapped = (roots[1] - guess[0]).norm() + (roots[0] - guess[1]).norm();
    if swapped < direct {
        vec![roots[1], roots[0]]
    } else {
        roots
    }
}

struct Sample {
    e: f64,
    ks: Vec<Complex>,
}

fn sample_at(family: &dyn EnergyFamily, e: f64, guess: Option<&[Complex]>) -> Option<Sample> {
    let problem = family.problem(Complex::new(e, 0.0)).ok()?;
    let roots = raw_k_roots(&problem)?;
    let ks = match guess {
        Some(g) => assign(g, roots),
        None => roots,
    };
    Some(Sample { e, ks })
}

fn sheet_mismatch(
    family: &dyn EnergyFamily,
    s: &Sample,
    sheet: usize,
    sign: f64,
    n: usize,
) -> Option<Complex> {
    let problem = family.problem(Complex::new(s.e, 0.0)).ok()?;
    mismatch_on_sheet(&problem, *s.ks.get(sheet)?, sign, n)
}

fn bisect(
    family: &dyn EnergyFamily,
    mut left: Sample,
    mut right: Sample,
    sheet: usize,
    sign: f64,
    n: usize,
) -> Option<f64> {
    let mut gl = sheet_mismatch(family, &left, sheet, sign, n)?.re;
    for _ in 0..200 {
        let mid_e = 0.5 * (left.e + right.e);
        if mid_e <= left.e || mid_e >= right.e {
            break;
        }
        let guess: Vec<Complex> = left
            .ks
            .iter()
            .zip(&right.ks)
            .map(|(a, b)| (*a + *b) * 0.5)
            .collect();
        let mid = sample_at(family, mid_e, Some(&guess))?;
        let gm = sheet_mismatch(family, &mid, sheet, sign, n)?.re;
        if gm == 0.0 {
            return Some(mid_e);
        }
        if (gm < 0.0) == (gl < 0.0) {
            left = mid;
            gl = gm;
        } else {
            right = mid;
        }
    }
    Some(0.5 * (left.e + right.e))
}

fn accept(family: &dyn EnergyFamily, e: Complex, n: usize) -> Option<QuantizationResult> {
    let problem = family.problem(e).ok()?;
    let (branch, lambda, ln) = verify_level(&problem, n).ok()?;
    Some(QuantizationResult {
        n,
        e,
        k: branch.k,
        lambda,
        lambda_n: ln,
        branch,
    })
}

fn scan(
    family: &dyn EnergyFamily,
    n: usize,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<Vec<QuantizationResult>> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo || samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "search interval [{lo}, {hi}] with {samples} samples"
        )));
    }
    let mut found: Vec<QuantizationResult> = Vec::new();
    let mut candidates: Vec<f64> = Vec::new();
    let mut prev: Option<Sample> = None;
    let mut before: Option<Vec<Complex>> = None;
    let mut min_gap = (f64::INFINITY, f64::NAN);
    let mut valid_points = 0usize;
    for i in 0..samples {
        let e = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let guess = match (&prev, &before) {
            (Some(p), Some(b)) if p.ks.len() == b.len() => Some(
                p.ks.iter()
                    .zip(b)
                    .map(|(x, y)| *x * 2.0 - *y)
                    .collect::<Vec<_>>(),
            ),
            (Some(p), _) => Some(p.ks.clone()),
            _ => None,
        };
        let Some(cur) = sample_at(family, e, guess.as_deref()) else {
            before = None;
            prev = None;
            continue;
        };
        valid_points += 1;
        if let Some(p) = &prev {
            if p.ks.len() == cur.ks.len() {
                for sheet in 0..cur.ks.len() {
                    for sign in [1.0, -1.0] {
                        let (Some(ga), Some(gb)) = (
                            sheet_mismatch(family, p, sheet, sign, n),
                            sheet_mismatch(family, &cur, sheet, sign, n),
                        ) else {
                            continue;
                        };
                        if gb.norm() < min_gap.0 {
                            min_gap = (gb.norm(), cur.e);
                        }
                        if ga.re == 0.0 {
                            candidates.push(p.e);
                        } else if (ga.re < 0.0) != (gb.re < 0.0) {
                            let l = Sample {
                                e: p.e,
                                ks: p.ks.clone(),
                            };
                            let r = Sample {
                                e: cur.e,
                                ks: cur.ks.clone(),
                            };
                            if let Some(root) = bisect(family, l, r, sheet, sign, n) {
                                candidates.push(root);
                            }
                        }
                    }
                }
            }
        }
        before = prev.take().map(|p| p.ks);
        prev = Some(cur);
    }
    for e in candidates {
        if let Some(r) = accept(family, Complex::new(e, 0.0), n) {
            if !found
                .iter()
                .any(|f| (f.e - r.e).norm() <= 1e-8 * r.e.norm().max(1.0))
            {
                found.push(r);
            }
        }
    }
    if found.is_empty() {
        let detail = if valid_points == 0 {
            "the family produced no valid NU problem on the interval".to_string()
        } else {
            format!(
                "no admissible sign change of Re(lambda - lambda_n) on [{lo}, {hi}] \
                 ({valid_points} valid samples, min |lambda - lambda_n| = {:.3e} at E = {})",
                min_gap.0, min_gap.1
            )
        };
        return Err(Error::NoQuantizedLevel(detail));
    }
    found.sort_by(|a, b| a.e.re.total_cmp(&b.e.re));
    Ok(found)
}

fn best_mismatch(family: &dyn EnergyFamily, e: Complex, n: usize) -> Option<Complex> {
    let problem = family.problem(e).ok()?;
    let roots = raw_k_roots(&problem)?;
    let mut best: Option<Complex> = None;
    for k in roots {
        for sign in [1.0, -1.0] {
            if let Some(g) = mismatch_on_sheet(&problem, k, sign, n) {
                if best.is_none_or(|b| g.norm() < b.norm()) {
                    best = Some(g);
                }
            }
        }
    }
    best
}

fn secant(family: &dyn EnergyFamily, n: usize, seed: Complex) -> Result<Vec<QuantizationResult>> {
    let fail = |why: String| Error::NoQuantizedLevel(format!("secant from {seed}: {why}"));
    let step = Complex::new(1e-3 * seed.norm().max(1.0), 0.0);
    let mut x0 = seed;
    let mut x1 = seed + step;
    let mut g0 = best_mismatch(family, x0, n).ok_or_else(|| fail("no admissible branch".into()))?;
    let mut g1 = best_mismatch(family, x1, n).ok_or_else(|| fail("no admissible branch".into()))?;
    for _ in 0..100 {
        if let Some(r) = accept(family, x1, n) {
            return Ok(vec![r]);
        }
        let denom = g1 - g0;
        if denom.norm() == 0.0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / denom;
        if !(x2.re.is_finite() && x2.im.is_finite()) {
            break;
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = best_mismatch(family, x1, n).ok_or_else(|| fail("no admissible branch".into()))?;
    }
    accept(family, x1, n)
        .map(|r| vec![r])
        .ok_or_else(|| fail(format!("did not converge, last |g| = {:.3e}", g1.norm())))
}

/// Every quantized energy for level `n` found by `search`, deduplicated.
pub fn quantize_all(
    family: &dyn EnergyFamily,
    n: usize,
    search: Search,
) -> Result<Vec<QuantizationResult>> {
    match search {
        Search::Interval { lo, hi, samples } => scan(family, n, lo, hi, samples),
        Search::Seed(seed) => secant(family, n, seed),
    }
}

/// The preferred quantized energy for level `n` according to
/// [`EnergyFamily::rank`].
pub fn quantize_energy(
    family: &dyn EnergyFamily,
    n: usize,
    search: Search,
) -> Result<QuantizationResult> {
    let mut all = quantize_all(family, n, search)?;
    all.sort_by(|a, b| family.rank(a).total_cmp(&family.rank(b)));
    Ok(all.swap_remove(0))
}
