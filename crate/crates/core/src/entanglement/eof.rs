//! Numerical Gaussian Renyi-2 entanglement of formation for two-mode states.
//!
//! Minimizes `1/2 ln det gamma_A` over pure two-mode covariance matrices
//! `gamma <= sigma`. Every pure two-mode state is a two-mode squeezed vacuum
//! dressed by local symplectics, each written as rotation * squeeze * rotation,
//! which gives seven real parameters. Since local symplectics have unit
//! determinant the objective collapses to `ln cosh 2r`; the local parameters
//! only steer feasibility.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::optim::{halton, nelder_mead, NelderMeadOptions};
use crate::phasespace::CovarianceMatrix;

use super::is_ppt_separable;

pub const N_PARAMS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EofSettings {
    /// Independent multi-starts, seeded from a Halton sequence.
    pub starts: usize,
    /// Penalty escalations per start, warm-started from the previous stage.
    pub stages: usize,
    pub initial_penalty: f64,
    pub penalty_growth: f64,
    pub evals_per_stage: usize,
    /// Feasibility slack on `min eig(sigma - gamma)`, relative to the
    /// largest eigenvalue of `sigma`.
    pub feasibility_tol: f64,
    /// Return 0 straight away for PPT states.
    pub ppt_shortcut: bool,
}

impl Default for EofSettings {
    fn default() -> Self {
        Self {
            starts: 16,
            stages: 10,
            initial_penalty: 1.0,
            penalty_growth: 10.0,
            evals_per_stage: 2500,
            feasibility_tol: 1e-12,
            ppt_shortcut: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EofResult {
    /// Best feasible value found (nats); `+inf` if nothing feasible was seen.
    pub value: f64,
    /// At least two starts landed within `1e-6` of the best value.
    pub converged: bool,
    /// The PPT witness certified separability (value is then exactly 0).
    pub separable: bool,
    pub evaluations: usize,
    pub best: Option<PureDecompositionCandidate>,
}

/// A pure two-mode state from the seven-parameter family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureDecompositionCandidate {
    params: [f64; N_PARAMS],
    gamma: Matrix4<f64>,
}

fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, s, -s, c)
}

fn local_symplectic(phi1: f64, z: f64, phi2: f64) -> Matrix2<f64> {
    rotation(phi1) * Matrix2::new((-z).exp(), 0.0, 0.0, z.exp()) * rotation(phi2)
}

impl PureDecompositionCandidate {
    /// `params = [r, phi_a1, z_a, phi_a2, phi_b1, z_b, phi_b2]`; `r` enters as `|r|`.
    pub fn from_params(params: [f64; N_PARAMS]) -> Self {
        let r = params[0].abs();
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        #[rustfmt::skip]
        let core = Matrix4::new(
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        );
        let la = local_symplectic(params[1], params[2], params[3]);
        let lb = local_symplectic(params[4], params[5], params[6]);
        let mut local = Matrix4::zeros();
        local.fixed_view_mut::<2, 2>(0, 0).copy_from(&la);
        local.fixed_view_mut::<2, 2>(2, 2).copy_from(&lb);
        let gamma = local * core * local.transpose();
        Self {
            params,
            gamma: (gamma + gamma.transpose()) * 0.5,
        }
    }

    pub fn params(&self) -> &[f64; N_PARAMS] {
        &self.params
    }

    pub fn gamma(&self) -> &Matrix4<f64> {
        &self.gamma
    }

    pub fn squeezing(&self) -> f64 {
        self.params[0].abs()
    }

    /// `1/2 ln det gamma_A`.
    pub fn objective(&self) -> f64 {
        (2.0 * self.squeezing()).cosh().ln()
    }

    /// Smallest eigenvalue of `sigma - gamma`.
    pub fn slack(&self, sigma: &Matrix4<f64>) -> f64 {
        SymmetricEigen::new(sigma - self.gamma).eigenvalues.min()
    }

    pub fn is_feasible(&self, sigma: &Matrix4<f64>, tol: f64) -> bool {
        self.slack(sigma) >= -tol
    }
}

fn to_matrix4(cm: &CovarianceMatrix) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| cm.data()[(i, j)])
}

fn start_point(index: usize) -> [f64; N_PARAMS] {
    use std::f64::consts::PI;
    let u = halton(index as u64 + 1, N_PARAMS);
    [
        3.0 * u[0],
        PI * u[1],
        3.0 * (u[2] - 0.5),
        PI * u[3],
        PI * u[4],
        3.0 * (u[5] - 0.5),
        PI * u[6],
    ]
}

struct StartOutcome {
    best: Option<(f64, PureDecompositionCandidate)>,
    evals: usize,
}

fn run_start(sigma: &Matrix4<f64>, tol: f64, index: usize, settings: &EofSettings) -> StartOutcome {
    let mut x = start_point(index).to_vec();
    let mut best: Option<(f64, PureDecompositionCandidate)> = None;
    let mut evals = 0;
    let mut penalty = settings.initial_penalty;
    let mut step = 0.25;
    for _ in 0..settings.stages {
        let objective = |p: &[f64]| {
            let cand = PureDecompositionCandidate::from_params(p.try_into().expect("seven parameters"));
            let slack = cand.slack(sigma);
            let value = cand.objective();
            if slack >= -tol && best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, cand));
            }
            let v = (-slack).max(0.0);
            value + penalty * (v + v * v)
        };
        let opts = NelderMeadOptions {
            xatol: 1e-11,
            fatol: 1e-15,
            max_evals: settings.evals_per_stage,
        };
        let res = nelder_mead(objective, &x, &[step; N_PARAMS], &opts);
        evals += res.evals;
        x = res.x;
        penalty *= settings.penalty_growth;
        step = (step * 0.5).max(1e-3);
    }
    StartOutcome { best, evals }
}

/// Gaussian Renyi-2 entanglement of formation of a two-mode state, by
/// penalized multi-start Nelder-Mead over pure decompositions.
pub fn gaussian_renyi2_eof_numeric(cm: &CovarianceMatrix, settings: &EofSettings) -> Result<EofResult> {
    if cm.n_modes() != 2 {
        return Err(Error::InvalidDimension(format!(
            "entanglement of formation needs a two-mode state, got {} modes",
            cm.n_modes()
        )));
    }
    if settings.ppt_shortcut && is_ppt_separable(cm)? {
        return Ok(EofResult {
            value: 0.0,
            converged: true,
            separable: true,
            evaluations: 0,
            best: None,
        });
    }
    let sigma = to_matrix4(cm);
    let scale = SymmetricEigen::new(sigma).eigenvalues.max();
    let tol = settings.feasibility_tol * scale;

    let outcomes: Vec<StartOutcome> = (0..settings.starts)
        .map(|i| run_start(&sigma, tol, i, settings))
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evals).sum();
    let best = outcomes
        .iter()
        .filter_map(|o| o.best)
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let Some((value, cand)) = best else {
        return Ok(EofResult {
            value: f64::INFINITY,
            converged: false,
            separable: false,
            evaluations,
            best: None,
        });
    };
    let agreeing = outcomes
        .iter()
        .filter(|o| o.best.is_some_and(|(v, _)| v - value <= 1e-6))
        .count();
    Ok(EofResult {
        value,
        converged: agreeing >= 2,
        separable: false,
        evaluations,
        best: Some(cand),
    })
}
