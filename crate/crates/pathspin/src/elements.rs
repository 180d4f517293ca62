//! Optical bench elements: beam splitters, the in-channel spin flipper,
//! and the path/spin observables with their projectors.
//!
//! The interferometer geometry is fixed. The first beam splitter is
//! balanced and splits an incoming beam into the channels |psi1> and
//! |psi2> with a relative factor i on the reflected channel. The second
//! beam splitter is tunable: its transmission and reflection amplitudes
//! (gamma, delta) select which path superpositions |psi3> and |psi4>
//! reach the two exit detectors.

use std::f64::consts::PI;

use thiserror::Error;

use crate::qcore::{PathSpinState, QubitOperator, SpinState, C64, EXACT_TOL};

/// Errors raised while constructing bench elements.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElementsError {
    /// A parameter was NaN or infinite.
    #[error("element parameter is not finite")]
    NonFiniteParameter,
    /// gamma^2 + delta^2 differed from 1 beyond tolerance.
    #[error(
        "beam splitter amplitudes gamma = {gamma}, delta = {delta} violate gamma^2 + delta^2 = 1"
    )]
    InvalidBeamSplitter { gamma: f64, delta: f64 },
    /// A transmission amplitude fell outside [0, 1].
    #[error("transmission amplitude gamma = {0} lies outside [0, 1]")]
    GammaOutOfRange(f64),
}

/// Transmission and reflection amplitudes (gamma, delta) of the second
/// beam splitter, constrained to gamma^2 + delta^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    gamma: f64,
    delta: f64,
}

impl BeamSplitterParams {
    /// Builds parameters from both amplitudes, checking the constraint.
    pub fn new(gamma: f64, delta: f64) -> Result<Self, ElementsError> {
        if !gamma.is_finite() || !delta.is_finite() {
            return Err(ElementsError::NonFiniteParameter);
        }
        if (gamma * gamma + delta * delta - 1.0).abs() > EXACT_TOL {
            return Err(ElementsError::InvalidBeamSplitter { gamma, delta });
        }
        Ok(Self { gamma, delta })
    }

    /// Builds parameters from gamma in [0, 1] with delta = +sqrt(1 - gamma^2).
    pub fn from_gamma(gamma: f64) -> Result<Self, ElementsError> {
        if !gamma.is_finite() {
            return Err(ElementsError::NonFiniteParameter);
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(ElementsError::GammaOutOfRange(gamma));
        }
        Ok(Self {
            gamma,
            delta: (1.0 - gamma * gamma).sqrt(),
        })
    }

    /// Transmission amplitude gamma.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Reflection amplitude delta.
    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Stern-Gerlach analyzer orientation, stored as the canonical
/// representative of theta in [0, pi); the analyzed observable has
/// period pi in theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSetting {
    theta: f64,
}

impl SpinSetting {
    /// Builds a setting from any finite angle, reducing it modulo pi.
    pub fn new(theta: f64) -> Result<Self, ElementsError> {
        if !theta.is_finite() {
            return Err(ElementsError::NonFiniteParameter);
        }
        let mut reduced = theta.rem_euclid(PI);
        if reduced >= PI {
            reduced -= PI;
        }
        Ok(Self { theta: reduced })
    }

    /// Canonical angle in [0, pi).
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Orientation of the tilted spin basis used by the preparation stage
/// and the spin flipper.
///
/// The basis states are |up>_t = sin(t)|up_z> + cos(t)|down_z> and
/// |down>_t = -cos(t)|up_z> + sin(t)|down_z|. The sign of |down>_t is
/// chosen so that t = pi/2 reproduces the z basis states themselves
/// rather than -|down_z>; expectation values are insensitive to this
/// choice, amplitude-level comparisons are not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedBasis {
    vartheta: f64,
}

impl TiltedBasis {
    /// Builds a tilted basis from any finite angle.
    pub fn new(vartheta: f64) -> Result<Self, ElementsError> {
        if !vartheta.is_finite() {
            return Err(ElementsError::NonFiniteParameter);
        }
        Ok(Self { vartheta })
    }

    /// The basis aligned with z, i.e. vartheta = pi/2.
    pub fn z_aligned() -> Self {
        Self {
            vartheta: std::f64::consts::FRAC_PI_2,
        }
    }

    /// Tilt angle.
    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    /// The |up>_t basis state.
    pub fn up_state(&self) -> SpinState {
        SpinState::new([
            C64::new(self.vartheta.sin(), 0.0),
            C64::new(self.vartheta.cos(), 0.0),
        ])
        .expect("sin^2 + cos^2 = 1")
    }

    /// The |down>_t basis state.
    pub fn down_state(&self) -> SpinState {
        SpinState::new([
            C64::new(-self.vartheta.cos(), 0.0),
            C64::new(self.vartheta.sin(), 0.0),
        ])
        .expect("sin^2 + cos^2 = 1")
    }
}

/// Interferometer channel label for elements that act on one arm only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathChannel {
    /// The transmitted channel |psi1>.
    One,
    /// The reflected channel |psi2>.
    Two,
}

impl PathChannel {
    fn index(self) -> usize {
        match self {
            PathChannel::One => 0,
            PathChannel::Two => 1,
        }
    }
}

/// Sends a spin state through the balanced first beam splitter:
/// |chi> maps to (1/sqrt2)(|psi1> + i|psi2>)(x)|chi>.
pub fn bs1_transform(spin: &SpinState) -> PathSpinState {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    PathSpinState::product([C64::new(inv, 0.0), C64::new(0.0, inv)], spin.amplitudes())
        .expect("balanced split of a unit spinor stays normalized")
}

/// Unitary that exchanges |up>_t and |down>_t with zero additional phase.
pub fn spin_flip_operator(basis: &TiltedBasis) -> QubitOperator {
    let up = basis.up_state().amplitudes();
    let down = basis.down_state().amplitudes();
    QubitOperator::outer(down, up).add(&QubitOperator::outer(up, down))
}

/// Applies the spin flipper on one interferometer arm, leaving the
/// other arm untouched.
pub fn spin_flipper(
    state: &PathSpinState,
    channel: PathChannel,
    basis: &TiltedBasis,
) -> PathSpinState {
    let flip = spin_flip_operator(basis);
    let mut amps = state.amplitudes();
    let p = channel.index();
    let flipped = flip.apply([amps[2 * p], amps[2 * p + 1]]);
    amps[2 * p] = flipped[0];
    amps[2 * p + 1] = flipped[1];
    PathSpinState::new(amps).expect("unitary flip preserves the norm")
}

/// Which-path observable of the second beam splitter in the
/// (|psi1>, |psi2>) basis:
///
/// ```text
/// [ gamma^2 - delta^2   -2 i gamma delta ]
/// [ 2 i gamma delta      delta^2 - gamma^2 ]
/// ```
///
/// Its +1 and -1 eigenvectors are the exit kets |psi3> and |psi4>.
pub fn path_observable(params: &BeamSplitterParams) -> QubitOperator {
    let g = params.gamma();
    let d = params.delta();
    QubitOperator::new([
        [C64::new(g * g - d * d, 0.0), C64::new(0.0, -2.0 * g * d)],
        [C64::new(0.0, 2.0 * g * d), C64::new(d * d - g * g, 0.0)],
    ])
}

/// Exit kets (|psi3>, |psi4>) of the second beam splitter, expressed on
/// (|psi1>, |psi2>): |psi3> = -i gamma|psi1> + delta|psi2> and
/// |psi4> = delta|psi1> - i gamma|psi2>.
pub fn bs2_output_kets(params: &BeamSplitterParams) -> ([C64; 2], [C64; 2]) {
    let g = params.gamma();
    let d = params.delta();
    (
        [C64::new(0.0, -g), C64::new(d, 0.0)],
        [C64::new(d, 0.0), C64::new(0.0, -g)],
    )
}

/// Spin observable of a Stern-Gerlach analyzer at angle theta in the
/// (|up_z>, |down_z>) basis:
///
/// ```text
/// [ cos 2theta    sin 2theta ]
/// [ sin 2theta   -cos 2theta ]
/// ```
pub fn spin_observable(setting: &SpinSetting) -> QubitOperator {
    let c = (2.0 * setting.theta()).cos();
    let s = (2.0 * setting.theta()).sin();
    QubitOperator::new([
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [C64::new(s, 0.0), C64::new(-c, 0.0)],
    ])
}

/// Stern-Gerlach outcome projectors ((I + sigma)/2, (I - sigma)/2) for
/// the +1 and -1 exits.
pub fn sg_projectors(setting: &SpinSetting) -> (QubitOperator, QubitOperator) {
    let sigma = spin_observable(setting);
    let half = |m: &QubitOperator| {
        let rows = m.rows();
        let mut scaled = rows;
        for row in &mut scaled {
            for entry in row {
                *entry *= 0.5;
            }
        }
        QubitOperator::new(scaled)
    };
    let plus = half(&QubitOperator::identity().add(&sigma));
    let minus = half(&QubitOperator::identity().sub(&sigma));
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn op_close(a: &QubitOperator, b: &QubitOperator, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a.entry(i, j) - b.entry(i, j)).norm() <= tol))
    }

    #[test]
    fn beam_splitter_params_enforce_the_circle_constraint() {
        assert!(BeamSplitterParams::new(0.6, 0.8).is_ok());
        assert!(matches!(
            BeamSplitterParams::new(0.6, 0.9),
            Err(ElementsError::InvalidBeamSplitter { .. })
        ));
        assert!(matches!(
            BeamSplitterParams::from_gamma(1.5),
            Err(ElementsError::GammaOutOfRange(_))
        ));
        assert!(matches!(
            BeamSplitterParams::from_gamma(f64::NAN),
            Err(ElementsError::NonFiniteParameter)
        ));
        let full = BeamSplitterParams::from_gamma(1.0).unwrap();
        assert_eq!(full.delta(), 0.0);
    }

    #[test]
    fn spin_setting_reduces_modulo_pi() {
        let s = SpinSetting::new(-FRAC_PI_4).unwrap();
        assert!((s.theta() - 3.0 * FRAC_PI_4).abs() < 1e-15);
        let t = SpinSetting::new(PI).unwrap();
        assert!(t.theta().abs() < 1e-15);
        assert!(SpinSetting::new(f64::INFINITY).is_err());
    }

    #[test]
    fn exit_kets_are_the_eigenvectors_of_the_path_observable() {
        for gamma in [0.0, 0.2, 0.6, std::f64::consts::FRAC_1_SQRT_2, 0.95, 1.0] {
            let params = BeamSplitterParams::from_gamma(gamma).unwrap();
            let obs = path_observable(&params);
            assert!(obs.hermiticity_residue() < 1e-15);
            assert!(obs.involution_residue() < 1e-14);
            let (psi3, psi4) = bs2_output_kets(&params);
            let plus = obs.apply(psi3);
            let minus = obs.apply(psi4);
            for k in 0..2 {
                assert!((plus[k] - psi3[k]).norm() < 1e-14, "gamma = {gamma}");
                assert!((minus[k] + psi4[k]).norm() < 1e-14, "gamma = {gamma}");
            }
            let overlap = psi3[0].conj() * psi4[0] + psi3[1].conj() * psi4[1];
            assert!(overlap.norm() < 1e-15);
        }
    }

    #[test]
    fn spectral_reconstruction_recovers_the_path_observable() {
        for gamma in [0.1, 0.37, 0.6, 0.9] {
            let params = BeamSplitterParams::from_gamma(gamma).unwrap();
            let (psi3, psi4) = bs2_output_kets(&params);
            let rebuilt = QubitOperator::outer(psi3, psi3).sub(&QubitOperator::outer(psi4, psi4));
            assert!(op_close(&rebuilt, &path_observable(&params), 1e-14));
        }
    }

    #[test]
    fn spin_observable_interpolates_between_pauli_axes() {
        let sigma_z = spin_observable(&SpinSetting::new(0.0).unwrap());
        assert_eq!(sigma_z.entry(0, 0), c(1.0, 0.0));
        assert_eq!(sigma_z.entry(1, 1), c(-1.0, 0.0));
        let sigma_x = spin_observable(&SpinSetting::new(FRAC_PI_4).unwrap());
        assert!((sigma_x.entry(0, 1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(sigma_x.entry(0, 0).norm() < 1e-15);
        for theta in [0.0, 0.3, 1.1, 2.9] {
            let a = spin_observable(&SpinSetting::new(theta).unwrap());
            let b = spin_observable(&SpinSetting::new(theta + PI).unwrap());
            assert!(op_close(&a, &b, 1e-12), "period pi at theta = {theta}");
            assert!(a.involution_residue() < 1e-14);
        }
    }

    #[test]
    fn sg_projectors_resolve_the_identity() {
        let setting = SpinSetting::new(0.7).unwrap();
        let (plus, minus) = sg_projectors(&setting);
        assert!(op_close(
            &plus.add(&minus),
            &QubitOperator::identity(),
            1e-15
        ));
        assert!(op_close(&plus.mul(&plus), &plus, 1e-15));
        assert!(op_close(&minus.mul(&minus), &minus, 1e-15));
        assert!(op_close(
            &plus.sub(&minus),
            &spin_observable(&setting),
            1e-15
        ));
        let cross = plus.mul(&minus);
        assert!(op_close(
            &cross,
            &QubitOperator::new([[c(0.0, 0.0); 2]; 2]),
            1e-15
        ));
    }

    #[test]
    fn tilted_basis_at_half_pi_is_the_z_basis() {
        let basis = TiltedBasis::z_aligned();
        let up = basis.up_state().amplitudes();
        let down = basis.down_state().amplitudes();
        assert!((up[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(up[1].norm() < 1e-12);
        assert!(down[0].norm() < 1e-12);
        assert!((down[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn flip_operator_exchanges_the_basis_states_without_phase() {
        for vartheta in [0.0, 0.4, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let basis = TiltedBasis::new(vartheta).unwrap();
            let flip = spin_flip_operator(&basis);
            assert!(flip.unitarity_residue() < 1e-14);
            assert!(flip.involution_residue() < 1e-14);
            assert!(flip.hermiticity_residue() < 1e-14);
            let up = basis.up_state().amplitudes();
            let down = basis.down_state().amplitudes();
            let flipped_up = flip.apply(up);
            let flipped_down = flip.apply(down);
            for k in 0..2 {
                assert!((flipped_up[k] - down[k]).norm() < 1e-14);
                assert!((flipped_down[k] - up[k]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn flipper_acts_on_the_designated_arm_only() {
        let spin = SpinState::up_z();
        let state = bs1_transform(&spin);
        let flipped = spin_flipper(&state, PathChannel::One, &TiltedBasis::z_aligned());
        let amps = flipped.amplitudes();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        // Arm one now carries |down_z> (up to 1e-16 leakage from the
        // tilted-basis trig), arm two still carries |up_z>.
        assert!(amps[0].norm() < 1e-12);
        assert!((amps[1] - c(inv, 0.0)).norm() < 1e-12);
        assert!((amps[2] - c(0.0, inv)).norm() < 1e-12);
        assert!(amps[3].norm() < 1e-12);
    }

    #[test]
    fn bs1_splits_evenly_with_the_reflected_phase() {
        let basis = TiltedBasis::new(0.0).unwrap();
        let state = bs1_transform(&basis.up_state());
        let amps = state.amplitudes();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        // At vartheta = 0 the tilted up state is |down_z>.
        assert!(amps[0].norm() < 1e-15);
        assert!((amps[1] - c(inv, 0.0)).norm() < 1e-15);
        assert!(amps[2].norm() < 1e-15);
        assert!((amps[3] - c(0.0, inv)).norm() < 1e-15);
    }
}
