//! Full interferometer runs and their closed-form predictions.
//!
//! Two configurations share the same preparation stage (balanced beam
//! splitter, then a spin flip on arm one):
//!
//! * the Pan-Home configuration prepares the spin in the z basis and
//!   recombines the arms on a tunable second beam splitter before two
//!   Stern-Gerlach analyzers at the exits |psi3> and |psi4>;
//! * the De Zela configuration prepares the spin in a tilted basis and
//!   places the analyzers directly on the arms |psi1> and |psi2>, with
//!   no second beam splitter.
//!
//! Both produce the same observable record: exit probabilities,
//! conditional spin means per exit, their probability-weighted versions,
//! and the whole-ensemble spin mean. The two records agree once the
//! tilt angle is mapped onto beam-splitter amplitudes and the analyzer
//! angle is reflected; `compare_channels` tabulates that equivalence.

use thiserror::Error;

use crate::elements::{
    bs1_transform, bs2_output_kets, path_observable, spin_flipper, spin_observable,
    BeamSplitterParams, ElementsError, PathChannel, SpinSetting, TiltedBasis,
};
use crate::qcore::{
    conditional_spin, expectation, spin_expectation, tensor, PathSpinState, QcoreError,
    QubitOperator, C64, EXACT_TOL,
};

/// Errors raised during an interferometer run.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentsError {
    /// A state or operator failed a core-level check.
    #[error(transparent)]
    Core(#[from] QcoreError),
    /// A bench element could not be constructed.
    #[error(transparent)]
    Element(#[from] ElementsError),
    /// A computed report violated one of its defining identities.
    #[error("report invariant violated: {0}")]
    ReportInvariant(String),
}

/// Per-exit spin statistics of one interferometer run.
///
/// Exit 1 carries the first analyzer (path |psi3>, or arm |psi1> in the
/// De Zela configuration), exit 2 the second. A conditional mean is
/// `None` when its exit has negligible probability; the corresponding
/// weighted mean is then zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubensembleReport {
    /// Probability of exit 1.
    pub p3: f64,
    /// Probability of exit 2.
    pub p4: f64,
    /// Spin mean conditioned on exit 1.
    pub cond_mean_sg1: Option<f64>,
    /// Spin mean conditioned on exit 2.
    pub cond_mean_sg2: Option<f64>,
    /// Probability-weighted spin mean of exit 1.
    pub weighted_mean_sg1: f64,
    /// Probability-weighted spin mean of exit 2.
    pub weighted_mean_sg2: f64,
    /// Whole-ensemble spin mean.
    pub total_expectation: f64,
}

impl SubensembleReport {
    /// Checks the defining identities: probabilities form a distribution,
    /// conditional means are bounded, and the weighted means tile the
    /// whole-ensemble mean.
    pub fn validate(&self) -> Result<(), ExperimentsError> {
        let fail = |what: String| Err(ExperimentsError::ReportInvariant(what));
        if !(-EXACT_TOL..=1.0 + EXACT_TOL).contains(&self.p3)
            || !(-EXACT_TOL..=1.0 + EXACT_TOL).contains(&self.p4)
        {
            return fail(format!(
                "probabilities ({}, {}) out of range",
                self.p3, self.p4
            ));
        }
        if (self.p3 + self.p4 - 1.0).abs() > EXACT_TOL {
            return fail(format!("probabilities sum to {}", self.p3 + self.p4));
        }
        for (label, cond, weighted, p) in [
            (
                "exit 1",
                self.cond_mean_sg1,
                self.weighted_mean_sg1,
                self.p3,
            ),
            (
                "exit 2",
                self.cond_mean_sg2,
                self.weighted_mean_sg2,
                self.p4,
            ),
        ] {
            match cond {
                Some(mean) => {
                    if mean.abs() > 1.0 + EXACT_TOL {
                        return fail(format!("{label} conditional mean {mean} exceeds 1"));
                    }
                    if (weighted - p * mean).abs() > EXACT_TOL {
                        return fail(format!("{label} weighted mean {weighted} != p * mean"));
                    }
                }
                None => {
                    if weighted != 0.0 {
                        return fail(format!(
                            "{label} weighted mean {weighted} on a negligible exit"
                        ));
                    }
                }
            }
        }
        let sum = self.weighted_mean_sg1 + self.weighted_mean_sg2;
        if (sum - self.total_expectation).abs() > EXACT_TOL {
            return fail(format!(
                "weighted means sum to {sum}, whole-ensemble mean is {}",
                self.total_expectation
            ));
        }
        Ok(())
    }
}

/// Prepares (1/sqrt2)(|psi1>|down_z> + i|psi2>|up_z>): a balanced split
/// of |up_z> followed by a z-basis spin flip on arm one, written out
/// with exact amplitudes.
pub fn prepare_pan_home() -> PathSpinState {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    PathSpinState::new([
        C64::new(0.0, 0.0),
        C64::new(inv, 0.0),
        C64::new(0.0, inv),
        C64::new(0.0, 0.0),
    ])
    .expect("amplitudes are exactly normalized")
}

/// Prepares (1/sqrt2)(|psi1>|down>_t + i|psi2>|up>_t) by sending |up>_t
/// through the balanced splitter and flipping the spin on arm one in
/// the tilted basis.
pub fn prepare_de_zela(basis: &TiltedBasis) -> PathSpinState {
    let split = bs1_transform(&basis.up_state());
    spin_flipper(&split, PathChannel::One, basis)
}

/// Re-expresses a state on the exit basis of the second beam splitter;
/// in the returned state the path slots mean (|psi3>, |psi4>) instead
/// of (|psi1>, |psi2>).
pub fn post_bs2_state(
    state: &PathSpinState,
    params: &BeamSplitterParams,
) -> Result<PathSpinState, ExperimentsError> {
    let (psi3, psi4) = bs2_output_kets(params);
    let amps = state.amplitudes();
    let mut out = [C64::new(0.0, 0.0); 4];
    for (slot, ket) in [(0, psi3), (2, psi4)] {
        for s in 0..2 {
            out[slot + s] = ket[0].conj() * amps[s] + ket[1].conj() * amps[2 + s];
        }
    }
    Ok(PathSpinState::new(out)?)
}

fn branch_statistics(
    state: &PathSpinState,
    ket: [C64; 2],
    spin_obs: &QubitOperator,
) -> Result<(f64, Option<f64>, f64), ExperimentsError> {
    match conditional_spin(state, ket) {
        Ok((p, spin)) => {
            let mean = spin_expectation(&spin, spin_obs)?;
            Ok((p, Some(mean), p * mean))
        }
        Err(QcoreError::DegenerateBranch(p)) => Ok((p, None, 0.0)),
        Err(other) => Err(other.into()),
    }
}

fn channel_report(
    state: &PathSpinState,
    ket1: [C64; 2],
    ket2: [C64; 2],
    setting: &SpinSetting,
) -> Result<SubensembleReport, ExperimentsError> {
    let spin_obs = spin_observable(setting);
    let (p3, cond_mean_sg1, weighted_mean_sg1) = branch_statistics(state, ket1, &spin_obs)?;
    let (p4, cond_mean_sg2, weighted_mean_sg2) = branch_statistics(state, ket2, &spin_obs)?;
    let total_expectation = expectation(state, &tensor(&QubitOperator::identity(), &spin_obs))?;
    let report = SubensembleReport {
        p3,
        p4,
        cond_mean_sg1,
        cond_mean_sg2,
        weighted_mean_sg1,
        weighted_mean_sg2,
        total_expectation,
    };
    report.validate()?;
    Ok(report)
}

/// Runs the Pan-Home configuration: recombine on the second beam
/// splitter, analyze spin at the exits |psi3> and |psi4>.
pub fn run_path_spin(
    state: &PathSpinState,
    params: &BeamSplitterParams,
    setting: &SpinSetting,
) -> Result<SubensembleReport, ExperimentsError> {
    let (psi3, psi4) = bs2_output_kets(params);
    channel_report(state, psi3, psi4, setting)
}

/// Runs the De Zela configuration: analyze spin directly on the arms
/// |psi1> and |psi2>, with no recombining beam splitter.
pub fn run_de_zela_channels(
    state: &PathSpinState,
    setting: &SpinSetting,
) -> Result<SubensembleReport, ExperimentsError> {
    let one = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let two = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    channel_report(state, one, two, setting)
}

/// Closed-form weighted subensemble means for the Pan-Home state:
///
/// ```text
/// sg1 = (1/2)(delta^2 - gamma^2) cos 2theta + gamma delta sin 2theta
/// sg2 = (1/2)(gamma^2 - delta^2) cos 2theta - gamma delta sin 2theta
/// ```
pub fn closed_form_subensembles(params: &BeamSplitterParams, setting: &SpinSetting) -> (f64, f64) {
    let g = params.gamma();
    let d = params.delta();
    let c = (2.0 * setting.theta()).cos();
    let s = (2.0 * setting.theta()).sin();
    let sg1 = 0.5 * (d * d - g * g) * c + g * d * s;
    let sg2 = 0.5 * (g * g - d * d) * c - g * d * s;
    (sg1, sg2)
}

/// Joint path-spin correlator <A (x) sigma_theta> on a state.
pub fn correlator(
    state: &PathSpinState,
    params: &BeamSplitterParams,
    setting: &SpinSetting,
) -> Result<f64, ExperimentsError> {
    let joint = tensor(&path_observable(params), &spin_observable(setting));
    Ok(expectation(state, &joint)?)
}

/// Side-by-side record of the two configurations at one parameter
/// point: De Zela channel means against the Pan-Home closed forms under
/// the parameter map gamma = sin(vartheta), delta = cos(vartheta),
/// theta -> -theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelComparison {
    /// Preparation tilt angle.
    pub vartheta: f64,
    /// Analyzer angle of the De Zela run (canonical representative).
    pub theta: f64,
    /// Weighted mean on arm |psi1>.
    pub dz_ch1: f64,
    /// Weighted mean on arm |psi2>.
    pub dz_ch2: f64,
    /// Mapped closed-form weighted mean for exit 1.
    pub ph_sg1_mapped: f64,
    /// Mapped closed-form weighted mean for exit 2.
    pub ph_sg2_mapped: f64,
    /// |dz_ch1 - ph_sg1_mapped|.
    pub residual_ch1: f64,
    /// |dz_ch2 - ph_sg2_mapped|.
    pub residual_ch2: f64,
}

/// Runs the De Zela configuration and evaluates the mapped Pan-Home
/// closed forms at the same point.
pub fn compare_channels(
    basis: &TiltedBasis,
    setting: &SpinSetting,
) -> Result<ChannelComparison, ExperimentsError> {
    let state = prepare_de_zela(basis);
    let report = run_de_zela_channels(&state, setting)?;
    let vartheta = basis.vartheta();
    let mapped_params = BeamSplitterParams::new(vartheta.sin(), vartheta.cos())?;
    let mapped_setting = SpinSetting::new(-setting.theta())?;
    let (ph_sg1_mapped, ph_sg2_mapped) = closed_form_subensembles(&mapped_params, &mapped_setting);
    Ok(ChannelComparison {
        vartheta,
        theta: setting.theta(),
        dz_ch1: report.weighted_mean_sg1,
        dz_ch2: report.weighted_mean_sg2,
        ph_sg1_mapped,
        ph_sg2_mapped,
        residual_ch1: (report.weighted_mean_sg1 - ph_sg1_mapped).abs(),
        residual_ch2: (report.weighted_mean_sg2 - ph_sg2_mapped).abs(),
    })
}

/// One row of a parameter sweep: the parameter point, the per-exit
/// report, and the joint correlator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Transmission amplitude (for De Zela rows, the mapped sin(vartheta)).
    pub gamma: f64,
    /// Reflection amplitude (for De Zela rows, the mapped cos(vartheta)).
    pub delta: f64,
    /// Analyzer angle (canonical representative).
    pub theta: f64,
    /// Per-exit statistics.
    pub report: SubensembleReport,
    /// Joint path-spin correlator.
    pub correlator: f64,
}

/// Sweeps the Pan-Home configuration over a gamma x theta grid in row
/// order (gamma outer, theta inner).
pub fn sweep_pan_home(gammas: &[f64], thetas: &[f64]) -> Result<Vec<SweepRow>, ExperimentsError> {
    let state = prepare_pan_home();
    let mut rows = Vec::with_capacity(gammas.len() * thetas.len());
    for &gamma in gammas {
        let params = BeamSplitterParams::from_gamma(gamma)?;
        for &theta in thetas {
            let setting = SpinSetting::new(theta)?;
            let report = run_path_spin(&state, &params, &setting)?;
            let correlator = correlator(&state, &params, &setting)?;
            rows.push(SweepRow {
                gamma: params.gamma(),
                delta: params.delta(),
                theta: setting.theta(),
                report,
                correlator,
            });
        }
    }
    Ok(rows)
}

/// Sweeps the De Zela configuration over a vartheta x theta grid in row
/// order (vartheta outer, theta inner). The arm correlator uses the
/// which-arm observable |psi1><psi1| - |psi2><psi2|.
pub fn sweep_de_zela(varthetas: &[f64], thetas: &[f64]) -> Result<Vec<SweepRow>, ExperimentsError> {
    let which_arm = QubitOperator::new([
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    ]);
    let mut rows = Vec::with_capacity(varthetas.len() * thetas.len());
    for &vartheta in varthetas {
        let basis = TiltedBasis::new(vartheta)?;
        let state = prepare_de_zela(&basis);
        for &theta in thetas {
            let setting = SpinSetting::new(theta)?;
            let report = run_de_zela_channels(&state, &setting)?;
            let joint = tensor(&which_arm, &spin_observable(&setting));
            let correlator = expectation(&state, &joint)?;
            rows.push(SweepRow {
                gamma: vartheta.sin(),
                delta: vartheta.cos(),
                theta: setting.theta(),
                report,
                correlator,
            });
        }
    }
    Ok(rows)
}
