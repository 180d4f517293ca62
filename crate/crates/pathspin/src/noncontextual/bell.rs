//! Bell's hidden-variable model for a single qubit, sampled by Monte
//! Carlo and checked against the arm-conditional spin means.
//!
//! The model assigns every particle a unit vector lambda drawn
//! uniformly from the sphere and declares the outcome of a spin
//! measurement along the unit axis n to be sign(lambda . n + p . n),
//! where p is the Bloch vector of the prepared spin state. Because
//! lambda . n is uniform on [-1, 1], the model's mean outcome equals
//! p . n, the quantum expectation, for every state and axis; a single
//! qubit therefore admits a perfectly adequate hidden-variable account,
//! which is what makes the joint path-spin statistics the interesting
//! place to look.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::elements::{SpinSetting, TiltedBasis};
use crate::experiments::prepare_de_zela;
use crate::noncontextual::NoncontextualError;
use crate::qcore::{conditional_spin, SpinState, C64};

/// Minimum sample count accepted by the channel reproduction run.
pub const MIN_CHANNEL_SAMPLES: u64 = 10_000;

/// Real three-vector on or inside the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Bloch vector of a pure spin state (a, b):
    /// (2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2).
    pub fn from_spin_state(state: &SpinState) -> Self {
        let [a, b] = state.amplitudes();
        let cross = a.conj() * b;
        Self {
            x: 2.0 * cross.re,
            y: 2.0 * cross.im,
            z: a.norm_sqr() - b.norm_sqr(),
        }
    }

    /// Measurement axis of the spin observable at analyzer angle theta:
    /// (sin 2theta, 0, cos 2theta).
    pub fn spin_axis(setting: &SpinSetting) -> Self {
        Self {
            x: (2.0 * setting.theta()).sin(),
            y: 0.0,
            z: (2.0 * setting.theta()).cos(),
        }
    }

    /// Euclidean dot product.
    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Euclidean length.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Draws a unit vector uniformly from the sphere.
pub fn sample_hidden_direction(rng: &mut impl Rng) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    BlochVector {
        x: r * phi.cos(),
        y: r * phi.sin(),
        z,
    }
}

/// Deterministic outcome of the model for one hidden variable:
/// sign(lambda . n + p . n), with sign(0) taken as +1.
pub fn bell_qubit_outcome(state: &BlochVector, axis: &BlochVector, lambda: &BlochVector) -> f64 {
    if lambda.dot(axis) + state.dot(axis) < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn expectation_mc_stream(
    state: &BlochVector,
    axis: &BlochVector,
    samples: u64,
    seed: u64,
    stream: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut sum = 0.0;
    for _ in 0..samples {
        let lambda = sample_hidden_direction(&mut rng);
        sum += bell_qubit_outcome(state, axis, &lambda);
    }
    sum / samples as f64
}

/// Monte Carlo mean outcome of the model; converges to p . n at the
/// usual 1/sqrt(samples) rate and is reproducible for a fixed seed.
pub fn bell_qubit_expectation_mc(
    state: &BlochVector,
    axis: &BlochVector,
    samples: u64,
    seed: u64,
) -> Result<f64, NoncontextualError> {
    if samples == 0 {
        return Err(NoncontextualError::InvalidSampleCount(samples, 1));
    }
    Ok(expectation_mc_stream(state, axis, samples, seed, 0))
}

/// One channel of the reproduction run: quantum conditional mean,
/// sampled model mean, and their absolute difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStat {
    /// Channel label, 1 or 2.
    pub channel: u8,
    /// Quantum conditional spin mean on this arm.
    pub quantum: f64,
    /// Sampled hidden-variable mean.
    pub sampled: f64,
    /// |quantum - sampled|.
    pub abs_error: f64,
}

/// Outcome of reproducing both arm-conditional spin means with the
/// sphere model at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeZelaChannelCheck {
    /// Preparation tilt angle.
    pub vartheta: f64,
    /// Analyzer angle (canonical representative).
    pub theta: f64,
    /// Per-channel comparison.
    pub channels: [ChannelStat; 2],
    /// Convergence allowance 4/sqrt(samples).
    pub tolerance: f64,
}

impl DeZelaChannelCheck {
    /// True when both channels agree within the convergence allowance.
    pub fn within_tolerance(&self) -> bool {
        self.channels.iter().all(|c| c.abs_error <= self.tolerance)
    }
}

/// Reproduces the two arm-conditional spin means of the tilted-basis
/// preparation with the sphere model.
///
/// Each arm draws from its own counter stream of the same seeded
/// generator, so the whole check is reproducible bit for bit.
pub fn reproduce_de_zela_channels(
    basis: &TiltedBasis,
    setting: &SpinSetting,
    samples: u64,
    seed: u64,
) -> Result<DeZelaChannelCheck, NoncontextualError> {
    if samples < MIN_CHANNEL_SAMPLES {
        return Err(NoncontextualError::InvalidSampleCount(
            samples,
            MIN_CHANNEL_SAMPLES,
        ));
    }
    let state = prepare_de_zela(basis);
    let axis = BlochVector::spin_axis(setting);
    let arms = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    let mut channels = [ChannelStat {
        channel: 0,
        quantum: 0.0,
        sampled: 0.0,
        abs_error: 0.0,
    }; 2];
    for (idx, arm) in arms.iter().enumerate() {
        let (_, spin) =
            conditional_spin(&state, *arm).map_err(|e| NoncontextualError::Experiment(e.into()))?;
        let bloch = BlochVector::from_spin_state(&spin);
        let quantum = bloch.dot(&axis);
        let sampled = expectation_mc_stream(&bloch, &axis, samples, seed, idx as u64);
        channels[idx] = ChannelStat {
            channel: idx as u8 + 1,
            quantum,
            sampled,
            abs_error: (quantum - sampled).abs(),
        };
    }
    Ok(DeZelaChannelCheck {
        vartheta: basis.vartheta(),
        theta: setting.theta(),
        channels,
        tolerance: 4.0 / (samples as f64).sqrt(),
    })
}
