//! Renyi-2 Gaussian entanglement of the four-mode out-state: closed forms,
//! determinant routes for pure bipartitions, a PPT witness, the numerical
//! minimizer, and the monogamy bookkeeping.
//!
//! All values are in nats.

mod eof;

pub use eof::{gaussian_renyi2_eof_numeric, EofResult, EofSettings, PureDecompositionCandidate};

use crate::cosmology::{
    check_theta, out_state, BogoliubovData, InitialState, Parameters, MODE_A, MODE_ABAR, MODE_B,
    MODE_BBAR,
};
use crate::error::{Error, Result};
use crate::phasespace::{partial_trace, partial_transpose, CovarianceMatrix, ModePartition, PHYSICALITY_TOL};

/// `|det - 1|` allowed for a state to count as pure.
pub const PURITY_TOL: f64 = 1e-6;

/// Slack allowed on the monogamy inequalities and on non-negativity.
pub const MONOGAMY_TOL: f64 = 1e-9;

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::param("s", s, "squeezing must be non-negative and finite"));
    }
    Ok(())
}

fn require_pure(cm: &CovarianceMatrix) -> Result<()> {
    let det = cm.det();
    if (det - 1.0).abs() > PURITY_TOL {
        return Err(Error::NotPure { det });
    }
    Ok(())
}

/// For a pure state the infimum is attained by the state itself, so the
/// entanglement is the Renyi-2 entropy of one side.
pub fn pure_bipartite_entanglement(cm: &CovarianceMatrix, partition: &ModePartition) -> Result<f64> {
    if partition.n_modes() != cm.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: cm.n_modes(),
            got: partition.n_modes(),
        });
    }
    require_pure(cm)?;
    let reduced = partial_trace(cm, partition.party())?;
    Ok(0.5 * reduced.det().max(1.0).ln())
}

/// Smallest partially transposed symplectic eigenvalue of the `(A, B)`
/// reduction: `(e^{-2s} + theta^2) / (1 - theta^2)`.
pub fn ab_transposed_eigenvalue(s: f64, theta: f64) -> f64 {
    let t2 = theta * theta;
    ((-2.0 * s).exp() + t2) / (1.0 - t2)
}

/// Whether the `(A, B)` reduction is PPT, so the closed form is clamped to 0.
pub fn ab_clamp_active(s: f64, theta: f64) -> bool {
    ab_transposed_eigenvalue(s, theta) >= 1.0
}

/// Closed-form entanglement between Alice and Bob after the expansion.
///
/// The expression is only meaningful on the entangled branch; once the
/// reduced state is PPT (e.g. `s = 0`, where it is a product of thermal
/// states) it is reported as 0.
pub fn entanglement_ab_closed(s: f64, theta: f64) -> Result<f64> {
    check_s(s)?;
    check_theta(theta)?;
    if ab_clamp_active(s, theta) {
        return Ok(0.0);
    }
    let t2 = theta * theta;
    let (ch2, sh2) = ((2.0 * s).cosh(), (2.0 * s).sinh());
    let (ch, sh) = (s.cosh(), s.sinh());
    let num = -(ch2 * (t2 * t2 - t2 + 1.0) + t2 * (sh2 * (t2 - 1.0) + 1.0));
    let den = (t2 - 1.0) * (ch + sh) * (ch * (t2 + 1.0) + sh * (t2 - 1.0));
    Ok((num / den).ln().max(0.0))
}

/// `ln[(1 + theta^2) / (1 - theta^2)]`, independent of the initial squeezing.
pub fn entanglement_a_abar_closed(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let t2 = theta * theta;
    Ok(t2.ln_1p() - (-t2).ln_1p())
}

/// `ln[(cosh 2s + theta^2) / (1 - theta^2)]`: Alice against the other three.
pub fn one_to_three_a_closed(s: f64, theta: f64) -> Result<f64> {
    check_s(s)?;
    check_theta(theta)?;
    let t2 = theta * theta;
    Ok(((2.0 * s).cosh() + t2).ln() - (-t2).ln_1p())
}

/// `ln[(theta^2 cosh 2s + 1) / (1 - theta^2)]`: anti-Alice against the rest,
/// as given by the determinant of her reduced state.
pub fn one_to_three_abar_closed(s: f64, theta: f64) -> Result<f64> {
    check_s(s)?;
    check_theta(theta)?;
    let t2 = theta * theta;
    Ok((t2 * (2.0 * s).cosh()).ln_1p() - (-t2).ln_1p())
}

/// `ln[(theta^2 cosh 2s + 1) / (1 + theta^2)]`, written as
/// `ln1p(2 theta^2 sinh^2 s / (1 + theta^2))` to stay accurate for small `s`.
pub fn residual_closed(s: f64, theta: f64) -> Result<f64> {
    check_s(s)?;
    check_theta(theta)?;
    let t2 = theta * theta;
    Ok((2.0 * t2 * s.sinh().powi(2) / (1.0 + t2)).ln_1p())
}

/// 1-vs-rest entanglement of a pure state, probe being a single mode.
pub fn one_to_three_entanglement(cm: &CovarianceMatrix, probe: &ModePartition) -> Result<f64> {
    if probe.party().len() != 1 {
        return Err(Error::InvalidPartition("probe must be a single mode".into()));
    }
    pure_bipartite_entanglement(cm, probe)
}

/// Simon criterion for a 1x1-mode state: separable iff the partial
/// transpose is still physical.
pub fn is_ppt_separable(cm: &CovarianceMatrix) -> Result<bool> {
    if cm.n_modes() != 2 {
        return Err(Error::InvalidDimension(format!(
            "PPT witness needs two modes, got {}",
            cm.n_modes()
        )));
    }
    let pt = partial_transpose(cm, &ModePartition::single(2, 1)?)?;
    Ok(pt.smallest_symplectic_eigenvalue()? >= 1.0 - PHYSICALITY_TOL)
}

/// Entanglement of an arbitrary two-mode state: 0 if PPT, otherwise the
/// numerical minimizer's best bound.
pub fn pairwise_entanglement(cm: &CovarianceMatrix, settings: &EofSettings) -> Result<f64> {
    if is_ppt_separable(cm)? {
        return Ok(0.0);
    }
    Ok(gaussian_renyi2_eof_numeric(cm, settings)?.value)
}

/// Both monogamy slacks and the closed form they should reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualBreakdown {
    /// `min(probe_a, probe_abar)`.
    pub value: f64,
    /// `E(A|rest) - E(AB) - E(AAbar) - E(ABbar)`.
    pub probe_a: f64,
    /// `E(Abar|rest) - E(AbarA) - E(AbarB) - E(AbarBbar)`.
    pub probe_abar: f64,
    pub closed_form: f64,
}

/// Residual multipartite entanglement: the smaller CKW slack over the two
/// inequivalent probes (A and A-bar; B and B-bar follow by symmetry).
pub fn residual_entanglement(init: &InitialState, bog: &BogoliubovData) -> Result<ResidualBreakdown> {
    let out = out_state(init, bog);
    let parts = Pairwise::compute(&out, init.s(), bog.theta)?;
    let e_a_rest = one_to_three_entanglement(&out, &ModePartition::single(4, MODE_A)?)?;
    let e_abar_rest = one_to_three_entanglement(&out, &ModePartition::single(4, MODE_ABAR)?)?;
    for (name, v) in [
        ("E(A|rest)", e_a_rest),
        ("E(Abar|rest)", e_abar_rest),
        ("E(AB)", parts.ab),
        ("E(AAbar)", parts.a_abar),
        ("E(ABbar)", parts.a_bbar),
        ("E(AbarB)", parts.abar_b),
        ("E(AbarBbar)", parts.abar_bbar),
    ] {
        if v < -MONOGAMY_TOL {
            return Err(Error::Internal(format!("{name} = {v} is negative")));
        }
    }
    let probe_a = e_a_rest - parts.ab - parts.a_abar - parts.a_bbar;
    let probe_abar = e_abar_rest - parts.a_abar - parts.abar_b - parts.abar_bbar;
    Ok(ResidualBreakdown {
        value: probe_a.min(probe_abar),
        probe_a,
        probe_abar,
        closed_form: residual_closed(init.s(), bog.theta)?,
    })
}

struct Pairwise {
    ab: f64,
    a_abar: f64,
    a_bbar: f64,
    abar_b: f64,
    abar_bbar: f64,
}

impl Pairwise {
    fn compute(out: &CovarianceMatrix, s: f64, theta: f64) -> Result<Self> {
        let settings = EofSettings::default();
        let pair = |i, j| -> Result<f64> { pairwise_entanglement(&partial_trace(out, &[i, j])?, &settings) };
        Ok(Self {
            ab: entanglement_ab_closed(s, theta)?,
            a_abar: entanglement_a_abar_closed(theta)?,
            a_bbar: pair(MODE_A, MODE_BBAR)?,
            abar_b: pair(MODE_ABAR, MODE_B)?,
            abar_bbar: pair(MODE_ABAR, MODE_BBAR)?,
        })
    }
}

/// Every bipartite and 1-vs-rest entanglement of the out-state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub s: f64,
    pub theta: f64,
    /// Full parameter point, when the report was built from one.
    pub parameters: Option<Parameters>,
    pub e_ab: f64,
    pub e_abar_bbar: f64,
    pub e_a_bbar: f64,
    pub e_abar_b: f64,
    pub e_a_abar: f64,
    pub e_b_bbar: f64,
    pub e_a_rest: f64,
    pub e_abar_rest: f64,
    pub residual: f64,
    pub residual_closed: f64,
    /// The `(A, B)` closed form was clamped to 0 on a PPT state.
    pub clamp_active: bool,
}

impl EntanglementReport {
    /// CKW slack for probe A.
    pub fn ckw_slack_a(&self) -> f64 {
        self.e_a_rest - self.e_ab - self.e_a_abar - self.e_a_bbar
    }

    /// CKW slack for probe A-bar.
    pub fn ckw_slack_abar(&self) -> f64 {
        self.e_abar_rest - self.e_a_abar - self.e_abar_b - self.e_abar_bbar
    }

    fn verify(&self) -> Result<()> {
        let fields = [
            ("e_ab", self.e_ab),
            ("e_abar_bbar", self.e_abar_bbar),
            ("e_a_bbar", self.e_a_bbar),
            ("e_abar_b", self.e_abar_b),
            ("e_a_abar", self.e_a_abar),
            ("e_b_bbar", self.e_b_bbar),
            ("e_a_rest", self.e_a_rest),
            ("e_abar_rest", self.e_abar_rest),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Internal(format!("{name} = {v} is not a non-negative number")));
            }
        }
        for (name, slack) in [("probe A", self.ckw_slack_a()), ("probe Abar", self.ckw_slack_abar())] {
            if slack < -MONOGAMY_TOL {
                return Err(Error::Internal(format!("CKW inequality violated for {name}: slack {slack}")));
            }
        }
        if self.residual < -MONOGAMY_TOL {
            return Err(Error::Internal(format!("residual = {} is negative", self.residual)));
        }
        Ok(())
    }
}

pub fn full_report(init: &InitialState, bog: &BogoliubovData) -> Result<EntanglementReport> {
    let out = out_state(init, bog);
    let (s, theta) = (init.s(), bog.theta);
    let parts = Pairwise::compute(&out, s, theta)?;
    let residual = residual_entanglement(init, bog)?;
    // the (B, B-bar) reduction coincides with (A, A-bar) for a shared channel
    let a_abar_cm = partial_trace(&out, &[MODE_A, MODE_ABAR])?;
    let b_bbar_cm = partial_trace(&out, &[MODE_B, MODE_BBAR])?;
    let mismatch = (a_abar_cm.data() - b_bbar_cm.data()).amax();
    if mismatch > 1e-12 * a_abar_cm.data().amax() {
        return Err(Error::Internal(format!("(B, Bbar) reduction differs from (A, Abar) by {mismatch:e}")));
    }
    let report = EntanglementReport {
        s,
        theta,
        parameters: None,
        e_ab: parts.ab,
        e_abar_bbar: parts.abar_bbar,
        e_a_bbar: parts.a_bbar,
        e_abar_b: parts.abar_b,
        e_a_abar: parts.a_abar,
        e_b_bbar: parts.a_abar,
        e_a_rest: one_to_three_a_closed(s, theta)?,
        e_abar_rest: one_to_three_abar_closed(s, theta)?,
        residual: residual.value,
        residual_closed: residual.closed_form,
        clamp_active: ab_clamp_active(s, theta),
    };
    report.verify()?;
    Ok(report)
}

/// Report for a full parameter point, echoing it back.
pub fn report_for(params: &Parameters) -> Result<EntanglementReport> {
    let mut report = full_report(&params.initial_state()?, &params.bogoliubov()?)?;
    report.parameters = Some(*params);
    Ok(report)
}

/// Closed-form scalar observables of the out-state at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// Alice-Bob entanglement (clamped closed form).
    EAb,
    /// Alice-anti-Alice entanglement.
    EAAbar,
    /// Residual multipartite entanglement.
    Residual,
    /// Alice against the other three modes.
    EARest,
    /// Anti-Alice against the other three modes.
    EAbarRest,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::EAb,
        Quantity::EAAbar,
        Quantity::Residual,
        Quantity::EARest,
        Quantity::EAbarRest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::EAb => "e_ab",
            Quantity::EAAbar => "e_a_abar",
            Quantity::Residual => "residual",
            Quantity::EARest => "e_a_rest",
            Quantity::EAbarRest => "e_abar_rest",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "e_ab" | "E_AB" => Some(Quantity::EAb),
            "e_a_abar" | "E_AAbar" | "E_AĀ" | "E_A_Abar" => Some(Quantity::EAAbar),
            "residual" | "E_res" => Some(Quantity::Residual),
            "e_a_rest" | "E_A_rest" => Some(Quantity::EARest),
            "e_abar_rest" | "E_Abar_rest" => Some(Quantity::EAbarRest),
            _ => None,
        }
    }

    pub fn evaluate(self, params: &Parameters) -> Result<f64> {
        let theta = params.bogoliubov()?.theta;
        self.evaluate_at(params.s, theta)
    }

    /// Value as a function of the squeezing and the channel parameter.
    pub fn evaluate_at(self, s: f64, theta: f64) -> Result<f64> {
        match self {
            Quantity::EAb => entanglement_ab_closed(s, theta),
            Quantity::EAAbar => entanglement_a_abar_closed(theta),
            Quantity::Residual => residual_closed(s, theta),
            Quantity::EARest => one_to_three_a_closed(s, theta),
            Quantity::EAbarRest => one_to_three_abar_closed(s, theta),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
