//! Recovering cosmological parameters from entanglement observations.
//!
//! The forward model is the closed-form entanglement at a parameter point,
//! cheap enough that a dense log-grid scan followed by Nelder-Mead polishing
//! is affordable. Everything is deterministic.

use nalgebra::{DMatrix, DVector};

use crate::cosmology::{Parameters, Variable};
use crate::entanglement::{ab_clamp_active, Quantity};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions};

/// Objective value used when the forward model fails at a probe point.
const FAILED_POINT: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub k: f64,
    pub quantity: Quantity,
    pub value: f64,
    pub weight: f64,
}

impl Observation {
    pub fn new(k: f64, quantity: Quantity, value: f64, weight: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::param("k", k, "observation momentum must be positive"));
        }
        if !matches!(quantity, Quantity::EAb | Quantity::EAAbar | Quantity::Residual) {
            return Err(Error::InvalidProblem(format!(
                "{quantity} is not an observable (use e_ab, e_a_abar or residual)"
            )));
        }
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::param("value", value, "observed entanglement must be non-negative"));
        }
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::param("weight", weight, "weight must be non-negative"));
        }
        Ok(Self {
            k,
            quantity,
            value,
            weight,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unknown {
    pub variable: Variable,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    observations: Vec<Observation>,
    known: Vec<(Variable, f64)>,
    unknown: Vec<Unknown>,
}

const FITTABLE: [Variable; 4] = [Variable::Mass, Variable::S, Variable::Epsilon, Variable::SigmaRate];

impl FitProblem {
    /// Every one of `m, s, epsilon, sigma_rate` must be either known or
    /// unknown, exactly once.
    pub fn new(observations: Vec<Observation>, known: Vec<(Variable, f64)>, unknown: Vec<Unknown>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::InvalidProblem("no observations".into()));
        }
        if unknown.is_empty() {
            return Err(Error::InvalidProblem("nothing to fit: no unknown parameters".into()));
        }
        for u in &unknown {
            if !(u.lower > 0.0 && u.upper.is_finite() && u.lower < u.upper) {
                return Err(Error::InvalidProblem(format!(
                    "bounds for {} must satisfy 0 < lower < upper < inf, got [{}, {}]",
                    u.variable, u.lower, u.upper
                )));
            }
        }
        for var in FITTABLE {
            let n = known.iter().filter(|(v, _)| *v == var).count()
                + unknown.iter().filter(|u| u.variable == var).count();
            if n != 1 {
                return Err(Error::InvalidProblem(format!(
                    "{var} must be given exactly once as known or unknown (found {n})"
                )));
            }
        }
        if let Some((v, _)) = known.iter().find(|(v, _)| !FITTABLE.contains(v)) {
            return Err(Error::InvalidProblem(format!("{v} cannot be fixed globally; it belongs to each observation")));
        }
        if let Some(u) = unknown.iter().find(|u| !FITTABLE.contains(&u.variable)) {
            return Err(Error::InvalidProblem(format!("{} cannot be fitted", u.variable)));
        }
        Ok(Self {
            observations,
            known,
            unknown,
        })
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn unknown(&self) -> &[Unknown] {
        &self.unknown
    }

    pub fn known(&self) -> &[(Variable, f64)] {
        &self.known
    }

    fn base(&self) -> Parameters {
        let mut p = Parameters::UNIT;
        for &(v, x) in &self.known {
            v.set(&mut p, x);
        }
        p
    }

    fn point(&self, base: &Parameters, log_values: &[f64]) -> Parameters {
        let mut p = *base;
        for (u, x) in self.unknown.iter().zip(log_values) {
            u.variable.set(&mut p, x.exp());
        }
        p
    }

    /// Per-observation `model - observed`.
    pub fn residuals(&self, params: &Parameters) -> Result<Vec<f64>> {
        self.observations
            .iter()
            .map(|o| {
                let mut p = *params;
                p.k = o.k;
                Ok(o.quantity.evaluate(&p)? - o.value)
            })
            .collect()
    }

    /// Weighted residual sum of squares.
    pub fn rss(&self, params: &Parameters) -> Result<f64> {
        let r = self.residuals(params)?;
        Ok(self.observations.iter().zip(r).map(|(o, d)| o.weight * d * d).sum())
    }

    fn rss_or_penalty(&self, params: &Parameters) -> f64 {
        match self.rss(params) {
            Ok(v) if v.is_finite() => v,
            _ => FAILED_POINT,
        }
    }

    fn data_scale(&self) -> f64 {
        self.observations.iter().map(|o| o.weight * o.value * o.value).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSettings {
    /// Cells per unknown for up to two unknowns; larger problems keep the
    /// total near `grid_per_dim^2`.
    pub grid_per_dim: usize,
    /// Local refinements launched from the best grid cells.
    pub refine_starts: usize,
    pub max_evals: usize,
    /// Simplex diameter in log-parameter space at which refinement stops.
    pub xatol: f64,
}

impl Default for FitSettings {
    fn default() -> Self {
        Self {
            grid_per_dim: 32,
            refine_starts: 32,
            max_evals: 20_000,
            xatol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub estimates: Vec<(Variable, f64)>,
    pub rss: f64,
    pub converged: bool,
    /// The data do not pin down a unique minimum.
    pub degenerate: bool,
    pub evaluations: usize,
    /// `model - observed` at the estimate, in observation order.
    pub residuals: Vec<f64>,
}

impl FitResult {
    pub fn estimate(&self, var: Variable) -> Option<f64> {
        self.estimates.iter().find(|(v, _)| *v == var).map(|(_, x)| *x)
    }
}

fn cells_per_dim(settings: &FitSettings, dims: usize) -> usize {
    if dims <= 2 {
        settings.grid_per_dim.max(2)
    } else {
        let total = (settings.grid_per_dim * settings.grid_per_dim) as f64;
        (total.powf(1.0 / dims as f64).floor() as usize).max(4)
    }
}

/// Weighted least-squares fit of the unknown parameters.
pub fn fit_parameters(problem: &FitProblem, settings: &FitSettings) -> Result<FitResult> {
    let dims = problem.unknown.len();
    let per_dim = cells_per_dim(settings, dims);
    let base = problem.base();
    let lo: Vec<f64> = problem.unknown.iter().map(|u| u.lower.ln()).collect();
    let hi: Vec<f64> = problem.unknown.iter().map(|u| u.upper.ln()).collect();
    let width: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| (h - l) / per_dim as f64).collect();
    let center = |idx: &[usize]| -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(d, &i)| lo[d] + (i as f64 + 0.5) * width[d])
            .collect()
    };

    let total = per_dim.pow(dims as u32);
    let mut cells: Vec<(f64, Vec<usize>)> = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let idx: Vec<usize> = (0..dims)
            .map(|_| {
                let i = rem % per_dim;
                rem /= per_dim;
                i
            })
            .collect();
        let rss = problem.rss_or_penalty(&problem.point(&base, &center(&idx)));
        cells.push((rss, idx));
    }
    let mut evaluations = total;
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let best_rss = cells[0].0;
    if best_rss >= FAILED_POINT {
        return Ok(FitResult {
            estimates: Vec::new(),
            rss: f64::INFINITY,
            converged: false,
            degenerate: false,
            evaluations,
            residuals: Vec::new(),
        });
    }
    let chebyshev = |a: &[usize], b: &[usize]| a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0);
    let tie_tol = 1e-12 * problem.data_scale();
    let best_idx = cells[0].1.clone();
    let grid_tie = cells
        .iter()
        .skip(1)
        .take_while(|(r, _)| *r <= best_rss + tie_tol)
        .any(|(_, idx)| chebyshev(idx, &best_idx) > 1);
    let degenerate = grid_tie || problem.observations.len() < dims;

    // Narrow curved valleys are common (E_AĀ at a few k pins a ridge in
    // (epsilon, sigma) with shallow spurious minima along it), and the cells
    // adjacent to the true minimum can rank below cells far along the valley.
    // Refining from many of the best cells is cheap and robust.
    let seeds: Vec<&Vec<usize>> = cells.iter().take(settings.refine_starts.max(1)).map(|(_, idx)| idx).collect();

    let objective = |x: &[f64]| {
        let mut excess = 0.0;
        let clamped: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(d, &v)| {
                let c = v.clamp(lo[d], hi[d]);
                excess += (v - c) * (v - c);
                c
            })
            .collect();
        problem.rss_or_penalty(&problem.point(&base, &clamped)) + 1e3 * excess
    };
    let opts = NelderMeadOptions {
        xatol: settings.xatol,
        fatol: 0.0,
        max_evals: settings.max_evals,
    };
    let step: Vec<f64> = width.iter().map(|w| 0.5 * w).collect();
    let mut best: Option<crate::optim::NelderMeadResult> = None;
    for seed in seeds {
        let res = nelder_mead(objective, &center(seed), &step, &opts);
        evaluations += res.evals;
        if best.as_ref().is_none_or(|b| res.f < b.f) {
            best = Some(res);
        }
    }
    let best = best.expect("at least one seed");
    let x: Vec<f64> = best.x.iter().enumerate().map(|(d, v)| v.clamp(lo[d], hi[d])).collect();
    // the simplex can collapse inside a curved valley; finish with damped Gauss-Newton
    let polished = levenberg_marquardt(problem, &base, x, &lo, &hi, settings.max_evals);
    evaluations += polished.evals;
    let x = polished.x;
    let params = problem.point(&base, &x);
    let residuals = problem.residuals(&params)?;
    let rss = problem.rss(&params)?;
    let estimates = problem
        .unknown
        .iter()
        .map(|u| (u.variable, u.variable.get(&params)))
        .collect();
    Ok(FitResult {
        estimates,
        rss,
        converged: (best.converged || polished.converged) && rss.is_finite(),
        degenerate,
        evaluations,
        residuals,
    })
}

struct Polished {
    x: Vec<f64>,
    evals: usize,
    converged: bool,
}

/// Box-constrained Levenberg-Marquardt on the weighted residuals, in
/// log-parameter space, with a central-difference Jacobian.
fn levenberg_marquardt(
    problem: &FitProblem,
    base: &Parameters,
    mut x: Vec<f64>,
    lo: &[f64],
    hi: &[f64],
    max_evals: usize,
) -> Polished {
    let dims = x.len();
    let sqrt_w: Vec<f64> = problem.observations.iter().map(|o| o.weight.sqrt()).collect();
    let mut evals = 0usize;
    let weighted = |x: &[f64], evals: &mut usize| -> Option<DVector<f64>> {
        *evals += 1;
        let r = problem.residuals(&problem.point(base, x)).ok()?;
        let v = DVector::from_iterator(r.len(), r.iter().zip(&sqrt_w).map(|(r, w)| r * w));
        v.iter().all(|e| e.is_finite()).then_some(v)
    };
    let Some(mut r) = weighted(&x, &mut evals) else {
        return Polished { x, evals, converged: false };
    };
    let mut cost = r.norm_squared();
    let mut lambda: f64 = 1e-3;
    let mut converged = false;
    for _ in 0..200 {
        if evals >= max_evals || cost == 0.0 {
            converged |= cost == 0.0;
            break;
        }
        let mut jac = DMatrix::zeros(r.len(), dims);
        for d in 0..dims {
            let h = 1e-6;
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[d] += h;
            xm[d] -= h;
            match (weighted(&xp, &mut evals), weighted(&xm, &mut evals)) {
                (Some(rp), Some(rm)) => jac.set_column(d, &((rp - rm) / (2.0 * h))),
                _ => return Polished { x, evals, converged },
            }
        }
        // damped normal equations solved as an augmented least-squares
        // problem; forming J^T J would square an already poor conditioning
        let scale: Vec<f64> = (0..dims).map(|d| jac.column(d).norm().max(1e-300)).collect();
        let mut improved = false;
        while lambda < 1e16 {
            let mut a = DMatrix::zeros(r.len() + dims, dims);
            a.view_mut((0, 0), (r.len(), dims)).copy_from(&jac);
            for d in 0..dims {
                a[(r.len() + d, d)] = lambda.sqrt() * scale[d];
            }
            let mut rhs = DVector::zeros(r.len() + dims);
            rhs.rows_mut(0, r.len()).copy_from(&(-&r));
            let Ok(step) = a.svd(true, true).solve(&rhs, 0.0) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = (0..dims).map(|d| (x[d] + step[d]).clamp(lo[d], hi[d])).collect();
            if let Some(rt) = weighted(&trial, &mut evals) {
                let ct = rt.norm_squared();
                if ct < cost {
                    let moved = trial.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    let gain = cost - ct;
                    x = trial;
                    r = rt;
                    cost = ct;
                    lambda = (lambda / 10.0).max(1e-12);
                    improved = true;
                    if moved < 1e-13 || gain <= 1e-15 * cost {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            // no descent step exists at machine precision
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    Polished { x, evals, converged }
}

/// Finite-difference sensitivities of a quantity to the expansion parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivity {
    pub d_epsilon: f64,
    pub d_sigma_rate: f64,
    /// Step `h` and `h/2` estimates agreed to `1e-4` relative for both.
    pub richardson_ok: bool,
    /// The AB clamp boundary lies within one step; one-sided differences used.
    pub boundary: bool,
}

impl Sensitivity {
    /// `|d/d sigma_rate| / |d/d epsilon|`.
    pub fn rate_to_volume_ratio(&self) -> f64 {
        self.d_sigma_rate.abs() / self.d_epsilon.abs()
    }
}

const REL_STEP: f64 = 1e-5;
const RICHARDSON_TOL: f64 = 1e-4;

struct Partial {
    value: f64,
    richardson_ok: bool,
    boundary: bool,
}

fn partial(params: &Parameters, quantity: Quantity, var: Variable) -> Result<Partial> {
    let x0 = var.get(params);
    let eval = |x: f64| -> Result<f64> {
        let mut p = *params;
        var.set(&mut p, x);
        quantity.evaluate(&p)
    };
    let clamp_state = |x: f64| -> Result<bool> {
        let mut p = *params;
        var.set(&mut p, x);
        Ok(ab_clamp_active(p.s, p.bogoliubov()?.theta))
    };
    let h = REL_STEP * x0.abs().max(f64::MIN_POSITIVE);

    let mut boundary = false;
    let mut side = 0i8;
    if quantity == Quantity::EAb {
        let here = clamp_state(x0)?;
        let (below, above) = (clamp_state(x0 - h)?, clamp_state(x0 + h)?);
        if below != here || above != here {
            boundary = true;
            side = if above == here { 1 } else { -1 };
        }
    }
    let f0 = eval(x0)?;
    let estimate = |step: f64| -> Result<f64> {
        Ok(match side {
            0 => (eval(x0 + step)? - eval(x0 - step)?) / (2.0 * step),
            1 => (eval(x0 + step)? - f0) / step,
            _ => (f0 - eval(x0 - step)?) / step,
        })
    };
    let d_h = estimate(h)?;
    let d_half = estimate(0.5 * h)?;
    let scale = d_h.abs().max(d_half.abs());
    let richardson_ok = scale == 0.0 || (d_h - d_half).abs() <= RICHARDSON_TOL * scale;
    Ok(Partial {
        value: d_half,
        richardson_ok,
        boundary,
    })
}

/// Central differences with `h = 1e-5 * value`, checked against `h/2`.
pub fn sensitivity(params: &Parameters, quantity: Quantity) -> Result<Sensitivity> {
    params.bogoliubov()?;
    params.initial_state()?;
    let de = partial(params, quantity, Variable::Epsilon)?;
    let ds = partial(params, quantity, Variable::SigmaRate)?;
    Ok(Sensitivity {
        d_epsilon: de.value,
        d_sigma_rate: ds.value,
        richardson_ok: de.richardson_ok && ds.richardson_ok,
        boundary: de.boundary || ds.boundary,
    })
}
