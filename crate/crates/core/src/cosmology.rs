//! The tanh expansion model: mode frequencies, Bogoliubov coefficients and
//! the two-mode squeezing channel they induce on phase space.
//!
//! Four-mode states always use the canonical order `A, A-bar, B, B-bar`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::phasespace::{apply, direct_sum, CovarianceMatrix, SymplecticTransform};
use crate::special::{ln_abs_gamma_imag_sq, ln_abs_gamma_one_plus_imag_sq, ln_sinh};

pub const MODE_A: usize = 0;
pub const MODE_ABAR: usize = 1;
pub const MODE_B: usize = 2;
pub const MODE_BBAR: usize = 3;

/// Cosmological parameters of the conformal factor
/// `a(eta)^2 = 1 + epsilon (1 + tanh(sigma_rate eta))`, plus the field mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionModel {
    epsilon: f64,
    sigma_rate: f64,
    mass: f64,
}

impl ExpansionModel {
    pub fn new(epsilon: f64, sigma_rate: f64, mass: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::param("epsilon", epsilon, "expansion volume must be positive and finite"));
        }
        if !(sigma_rate > 0.0 && sigma_rate.is_finite()) {
            return Err(Error::param("sigma_rate", sigma_rate, "expansion rate must be positive and finite"));
        }
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::param("mass", mass, "mass must be non-negative and finite"));
        }
        Ok(Self {
            epsilon,
            sigma_rate,
            mass,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sigma_rate(&self) -> f64 {
        self.sigma_rate
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Squared conformal scale factor at conformal time `eta`.
    pub fn scale_factor_sq(&self, eta: f64) -> f64 {
        1.0 + self.epsilon * (1.0 + (self.sigma_rate * eta).tanh())
    }
}

/// Asymptotic frequencies of a field mode with momentum `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub k: f64,
    pub omega_in: f64,
    pub omega_out: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

pub fn frequencies(k: f64, model: &ExpansionModel) -> Result<ModeSpec> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param("k", k, "momentum must be positive and finite"));
    }
    let m2 = model.mass * model.mass;
    let omega_in = (k * k + m2).sqrt();
    let omega_out = (k * k + m2 * (1.0 + 2.0 * model.epsilon)).sqrt();
    // omega_out - omega_in without cancellation
    let gap = 2.0 * model.epsilon * m2 / (omega_out + omega_in);
    Ok(ModeSpec {
        k,
        omega_in,
        omega_out,
        omega_plus: 0.5 * (omega_out + omega_in),
        omega_minus: 0.5 * gap,
    })
}

/// Moduli of the Bogoliubov coefficients of one mode. Phases are dropped:
/// they can be absorbed into the squeezing angle, and every entanglement
/// quantity downstream depends on `theta` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovData {
    pub alpha_mod: f64,
    pub beta_mod: f64,
    /// `|beta / alpha|`, the channel parameter.
    pub theta: f64,
    /// `ln theta`; stays finite when `theta` underflows.
    pub ln_theta: f64,
    /// Squeezing parameter with `cosh r = |alpha|`.
    pub r: f64,
    pub mean_particles: f64,
}

impl BogoliubovData {
    pub fn from_theta(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self::from_ln_theta(theta.ln()))
    }

    fn from_ln_theta(ln_theta: f64) -> Self {
        let theta = ln_theta.exp();
        let theta_sq = (2.0 * ln_theta).exp();
        let one_minus = -(2.0 * ln_theta).exp_m1();
        let alpha_sq = 1.0 / one_minus;
        let beta_sq = theta_sq / one_minus;
        Self {
            alpha_mod: alpha_sq.sqrt(),
            beta_mod: beta_sq.sqrt(),
            theta,
            ln_theta,
            r: theta.atanh(),
            mean_particles: beta_sq,
        }
    }

    pub fn theta_sq(&self) -> f64 {
        self.theta * self.theta
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::param("theta", theta, "channel parameter must lie in [0, 1)"));
    }
    Ok(())
}

/// `theta^2 = sinh^2(pi omega_- / sigma) / sinh^2(pi omega_+ / sigma)`, with
/// the ratio taken in log space.
pub fn bogoliubov(mode: &ModeSpec, model: &ExpansionModel) -> Result<BogoliubovData> {
    let scale = PI / model.sigma_rate;
    let ln_theta = if mode.omega_minus == 0.0 {
        f64::NEG_INFINITY
    } else {
        ln_sinh(scale * mode.omega_minus) - ln_sinh(scale * mode.omega_plus)
    };
    if !(ln_theta < 0.0) {
        return Err(Error::Internal(format!(
            "theta >= 1 (ln theta = {ln_theta}) for omega_- < omega_+"
        )));
    }
    Ok(BogoliubovData::from_ln_theta(ln_theta))
}

/// `(|alpha|^2, |beta|^2)` evaluated from the gamma-function products through
/// `|Gamma(ix)|^2 = pi / (x sinh pi x)` and `|Gamma(1+ix)|^2 = pi x / sinh pi x`.
///
/// At `omega_- = 0` the pole of `Gamma(i omega_- / sigma)` sends `|beta|` to
/// zero; the removable singularity is resolved by continuity to `(1, 0)`.
pub fn bogoliubov_moduli_via_gamma(mode: &ModeSpec, model: &ExpansionModel) -> (f64, f64) {
    let sigma = model.sigma_rate;
    let x_in = mode.omega_in / sigma;
    let x_out = mode.omega_out / sigma;
    let x_plus = mode.omega_plus / sigma;
    let x_minus = mode.omega_minus / sigma;
    let common = (mode.omega_out / mode.omega_in).ln()
        + ln_abs_gamma_one_plus_imag_sq(x_in)
        + ln_abs_gamma_imag_sq(x_out);
    let ln_alpha_sq =
        common - ln_abs_gamma_one_plus_imag_sq(x_plus) - ln_abs_gamma_imag_sq(x_plus);
    if x_minus == 0.0 {
        return (1.0, 0.0);
    }
    let ln_beta_sq =
        common - ln_abs_gamma_one_plus_imag_sq(x_minus) - ln_abs_gamma_imag_sq(x_minus);
    (ln_alpha_sq.exp(), ln_beta_sq.exp())
}

/// Amplitudes `A_n = sqrt(1 - theta^2) theta^n` of the in-vacuum in the
/// out-basis `|n>|n>`, for `n = 0..=n_max`.
pub fn fock_amplitudes(theta: f64, n_max: usize) -> Result<Vec<f64>> {
    check_theta(theta)?;
    let norm = (1.0 - theta * theta).sqrt();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut power = 1.0;
    for _ in 0..=n_max {
        out.push(norm * power);
        power *= theta;
    }
    Ok(out)
}

/// Phase-space two-mode squeezer `(1-theta^2)^{-1/2} [[I, theta Z], [theta Z, I]]`.
pub fn squeeze_transform(theta: f64) -> Result<SymplecticTransform> {
    check_theta(theta)?;
    let c = 1.0 / (1.0 - theta * theta).sqrt();
    let t = c * theta;
    #[rustfmt::skip]
    let data = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, t, 0.0,
        0.0, c, 0.0, -t,
        t, 0.0, c, 0.0,
        0.0, -t, 0.0, c,
    ]);
    SymplecticTransform::new(data)
}

/// Two-mode squeezing of the state shared by Alice and Bob in the far past.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    s: f64,
}

impl InitialState {
    pub fn new(s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::param("s", s, "squeezing must be non-negative and finite"));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Two-mode squeezed covariance matrix of modes `(A, B)`.
pub fn in_state(init: &InitialState) -> CovarianceMatrix {
    let (c, sh) = ((2.0 * init.s).cosh(), (2.0 * init.s).sinh());
    #[rustfmt::skip]
    let data = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, sh, 0.0,
        0.0, c, 0.0, -sh,
        sh, 0.0, c, 0.0,
        0.0, -sh, 0.0, c,
    ]);
    CovarianceMatrix::new(data).expect("two-mode squeezed vacuum is physical")
}

/// Four-mode out-state `(A, A-bar, B, B-bar)` with the same channel on both sides.
pub fn out_state(init: &InitialState, bog: &BogoliubovData) -> CovarianceMatrix {
    out_state_asymmetric(init, bog, bog).expect("valid theta yields a physical out-state")
}

/// Out-state for observers whose modes see different channels.
pub fn out_state_asymmetric(
    init: &InitialState,
    alice: &BogoliubovData,
    bob: &BogoliubovData,
) -> Result<CovarianceMatrix> {
    // sigma_in (+) I is ordered (A, B, A-bar, B-bar)
    let embedded = direct_sum(&in_state(init), &CovarianceMatrix::vacuum(2)?);
    let reorder = SymplecticTransform::mode_permutation(&[0, 2, 1, 3])?;
    let channel = squeeze_transform(alice.theta)?.direct_sum(&squeeze_transform(bob.theta)?);
    apply(&reorder.compose(&channel)?, &embedded)
}

/// Full parameter point: momentum, mass, expansion volume and rate, squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub k: f64,
    pub mass: f64,
    pub epsilon: f64,
    pub sigma_rate: f64,
    pub s: f64,
}

impl Parameters {
    pub const UNIT: Parameters = Parameters {
        k: 1.0,
        mass: 1.0,
        epsilon: 1.0,
        sigma_rate: 1.0,
        s: 1.0,
    };

    pub fn model(&self) -> Result<ExpansionModel> {
        ExpansionModel::new(self.epsilon, self.sigma_rate, self.mass)
    }

    pub fn initial_state(&self) -> Result<InitialState> {
        InitialState::new(self.s)
    }

    pub fn mode(&self) -> Result<ModeSpec> {
        frequencies(self.k, &self.model()?)
    }

    pub fn bogoliubov(&self) -> Result<BogoliubovData> {
        let model = self.model()?;
        bogoliubov(&frequencies(self.k, &model)?, &model)
    }
}

/// A coordinate of [`Parameters`] that can be swept or fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    K,
    Mass,
    Epsilon,
    SigmaRate,
    S,
}

impl Variable {
    pub const ALL: [Variable; 5] = [
        Variable::K,
        Variable::Mass,
        Variable::Epsilon,
        Variable::SigmaRate,
        Variable::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::K => "k",
            Variable::Mass => "m",
            Variable::Epsilon => "epsilon",
            Variable::SigmaRate => "sigma_rate",
            Variable::S => "s",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "k" => Some(Variable::K),
            "m" | "mass" => Some(Variable::Mass),
            "epsilon" | "eps" => Some(Variable::Epsilon),
            "sigma_rate" | "sigma" => Some(Variable::SigmaRate),
            "s" | "squeezing" => Some(Variable::S),
            _ => None,
        }
    }

    pub fn get(self, p: &Parameters) -> f64 {
        match self {
            Variable::K => p.k,
            Variable::Mass => p.mass,
            Variable::Epsilon => p.epsilon,
            Variable::SigmaRate => p.sigma_rate,
            Variable::S => p.s,
        }
    }

    pub fn set(self, p: &mut Parameters, value: f64) {
        match self {
            Variable::K => p.k = value,
            Variable::Mass => p.mass = value,
            Variable::Epsilon => p.epsilon = value,
            Variable::SigmaRate => p.sigma_rate = value,
            Variable::S => p.s = value,
        }
    }

    /// Whether zero is an admissible value (mass and squeezing).
    pub fn allows_zero(self) -> bool {
        matches!(self, Variable::Mass | Variable::S)
    }
}

impl std::fmt::Display for Variable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
