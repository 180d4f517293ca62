//! States, operators, and measurement primitives for one path qubit
//! tensored with one spin qubit.
//!
//! Basis conventions used throughout the crate:
//!
//! * spin amplitudes are ordered (|up_z>, |down_z>);
//! * path amplitudes are ordered (|psi1>, |psi2>);
//! * combined amplitudes are path-major: (|psi1 up>, |psi1 down>,
//!   |psi2 up>, |psi2 down>), so index = 2 * path + spin.

use num_complex::Complex64;
use thiserror::Error;

/// Complex amplitude type used for every state and matrix entry.
pub type C64 = Complex64;

/// Tolerance for exactness checks: normalization, Hermiticity, and
/// closed-form comparisons are required to hold this tightly.
pub const EXACT_TOL: f64 = 1e-12;

/// Branch probabilities below this threshold have no well-defined
/// conditional state.
pub const BRANCH_TOL: f64 = 1e-14;

/// Errors raised by state construction and measurement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcoreError {
    /// An amplitude was NaN or infinite.
    #[error("amplitude is not finite")]
    NonFiniteAmplitude,
    /// A state vector's norm differed from 1 beyond `EXACT_TOL`.
    #[error("state norm {0} deviates from 1 beyond 1e-12")]
    NotNormalized(f64),
    /// Normalization was requested for a vector with vanishing norm.
    #[error("cannot normalize a vector with vanishing norm")]
    VanishingNorm,
    /// An expectation value was requested for a non-Hermitian operator.
    #[error("operator deviates from Hermitian symmetry by {0:e}")]
    NotHermitian(f64),
    /// A conditional state was requested on a branch of negligible weight.
    #[error("branch probability {0:e} is below 1e-14; conditional state is undefined")]
    DegenerateBranch(f64),
}

fn all_finite(amps: &[C64]) -> bool {
    amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
}

fn norm_of(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalized spin state with amplitudes on (|up_z>, |down_z>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    amps: [C64; 2],
}

impl SpinState {
    /// Builds a spin state, requiring unit norm within `EXACT_TOL`.
    pub fn new(amps: [C64; 2]) -> Result<Self, QcoreError> {
        if !all_finite(&amps) {
            return Err(QcoreError::NonFiniteAmplitude);
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(QcoreError::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Builds a spin state by rescaling `amps` to unit norm.
    pub fn normalized(amps: [C64; 2]) -> Result<Self, QcoreError> {
        if !all_finite(&amps) {
            return Err(QcoreError::NonFiniteAmplitude);
        }
        let norm = norm_of(&amps);
        if norm < BRANCH_TOL {
            return Err(QcoreError::VanishingNorm);
        }
        Ok(Self {
            amps: [amps[0] / norm, amps[1] / norm],
        })
    }

    /// The |up_z> basis state.
    pub fn up_z() -> Self {
        Self {
            amps: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        }
    }

    /// The |down_z> basis state.
    pub fn down_z() -> Self {
        Self {
            amps: [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        }
    }

    /// Amplitudes on (|up_z>, |down_z>).
    pub fn amplitudes(&self) -> [C64; 2] {
        self.amps
    }

    /// Inner product <self|other>, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }
}

/// Normalized path-spin state with path-major amplitudes
/// (|psi1 up>, |psi1 down>, |psi2 up>, |psi2 down>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpinState {
    amps: [C64; 4],
}

impl PathSpinState {
    /// Builds a combined state, requiring unit norm within `EXACT_TOL`.
    pub fn new(amps: [C64; 4]) -> Result<Self, QcoreError> {
        if !all_finite(&amps) {
            return Err(QcoreError::NonFiniteAmplitude);
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(QcoreError::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Builds a combined state by rescaling `amps` to unit norm.
    pub fn normalized(amps: [C64; 4]) -> Result<Self, QcoreError> {
        if !all_finite(&amps) {
            return Err(QcoreError::NonFiniteAmplitude);
        }
        let norm = norm_of(&amps);
        if norm < BRANCH_TOL {
            return Err(QcoreError::VanishingNorm);
        }
        let mut scaled = amps;
        for a in &mut scaled {
            *a /= norm;
        }
        Ok(Self { amps: scaled })
    }

    /// Product state `path (x) spin` from raw path amplitudes.
    pub fn product(path: [C64; 2], spin: [C64; 2]) -> Result<Self, QcoreError> {
        Self::new([
            path[0] * spin[0],
            path[0] * spin[1],
            path[1] * spin[0],
            path[1] * spin[1],
        ])
    }

    /// Amplitudes in path-major order.
    pub fn amplitudes(&self) -> [C64; 4] {
        self.amps
    }

    /// Amplitude on path index `p` (0 or 1) and spin index `s` (0 = up).
    pub fn amplitude(&self, path: usize, spin: usize) -> C64 {
        self.amps[2 * path + spin]
    }

    /// Inner product <self|other>, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// 2x2 complex matrix acting on a single path or spin qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitOperator {
    rows: [[C64; 2]; 2],
}

impl QubitOperator {
    /// Builds an operator from rows; every entry must be finite.
    pub fn new(rows: [[C64; 2]; 2]) -> Self {
        assert!(
            rows.iter().all(|r| all_finite(r)),
            "operator entries must be finite"
        );
        Self { rows }
    }

    /// Identity operator.
    pub fn identity() -> Self {
        Self::new([
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ])
    }

    /// Rank-one operator |ket><bra|.
    pub fn outer(ket: [C64; 2], bra: [C64; 2]) -> Self {
        Self::new([
            [ket[0] * bra[0].conj(), ket[0] * bra[1].conj()],
            [ket[1] * bra[0].conj(), ket[1] * bra[1].conj()],
        ])
    }

    /// Matrix rows.
    pub fn rows(&self) -> [[C64; 2]; 2] {
        self.rows
    }

    /// Entry at (`row`, `col`).
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.rows[row][col]
    }

    /// Applies the operator to an amplitude vector.
    pub fn apply(&self, amps: [C64; 2]) -> [C64; 2] {
        [
            self.rows[0][0] * amps[0] + self.rows[0][1] * amps[1],
            self.rows[1][0] * amps[0] + self.rows[1][1] * amps[1],
        ]
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut rows = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..2).map(|k| self.rows[i][k] * other.rows[k][j]).sum();
            }
        }
        Self { rows }
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut rows = self.rows;
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry += other.rows[i][j];
            }
        }
        Self { rows }
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Self) -> Self {
        let mut rows = self.rows;
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry -= other.rows[i][j];
            }
        }
        Self { rows }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut rows = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.rows[j][i].conj();
            }
        }
        Self { rows }
    }

    /// Largest entrywise deviation from `M = M^dagger`.
    pub fn hermiticity_residue(&self) -> f64 {
        max_entry_norm(&self.sub(&self.adjoint()).rows)
    }

    /// Largest entrywise deviation of `M^2` from the identity.
    pub fn involution_residue(&self) -> f64 {
        max_entry_norm(&self.mul(self).sub(&Self::identity()).rows)
    }

    /// Largest entrywise deviation of `M^dagger M` from the identity.
    pub fn unitarity_residue(&self) -> f64 {
        max_entry_norm(&self.adjoint().mul(self).sub(&Self::identity()).rows)
    }
}

fn max_entry_norm<const N: usize>(rows: &[[C64; N]; N]) -> f64 {
    rows.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max)
}

/// 4x4 complex matrix acting on the combined path-spin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpinOperator {
    rows: [[C64; 4]; 4],
}

impl PathSpinOperator {
    /// Builds an operator from rows; every entry must be finite.
    pub fn new(rows: [[C64; 4]; 4]) -> Self {
        assert!(
            rows.iter().all(|r| all_finite(r)),
            "operator entries must be finite"
        );
        Self { rows }
    }

    /// Identity on the combined space.
    pub fn identity() -> Self {
        let mut rows = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = C64::new(1.0, 0.0);
        }
        Self { rows }
    }

    /// Matrix rows.
    pub fn rows(&self) -> [[C64; 4]; 4] {
        self.rows
    }

    /// Entry at (`row`, `col`).
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.rows[row][col]
    }

    /// Applies the operator to an amplitude vector.
    pub fn apply(&self, amps: [C64; 4]) -> [C64; 4] {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).map(|k| self.rows[i][k] * amps[k]).sum();
        }
        out
    }

    /// Largest entrywise deviation from `M = M^dagger`.
    pub fn hermiticity_residue(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.rows[i][j] - self.rows[j][i].conj()).norm());
            }
        }
        worst
    }
}

/// Kronecker product `path_op (x) spin_op` in the path-major basis.
pub fn tensor(path_op: &QubitOperator, spin_op: &QubitOperator) -> PathSpinOperator {
    let mut rows = [[C64::new(0.0, 0.0); 4]; 4];
    for p in 0..2 {
        for s in 0..2 {
            for q in 0..2 {
                for t in 0..2 {
                    rows[2 * p + s][2 * q + t] = path_op.entry(p, q) * spin_op.entry(s, t);
                }
            }
        }
    }
    PathSpinOperator::new(rows)
}

/// Expectation value <state|observable|state> of a Hermitian operator.
pub fn expectation(
    state: &PathSpinState,
    observable: &PathSpinOperator,
) -> Result<f64, QcoreError> {
    let residue = observable.hermiticity_residue();
    if residue > EXACT_TOL {
        return Err(QcoreError::NotHermitian(residue));
    }
    let amps = state.amplitudes();
    let image = observable.apply(amps);
    let value: C64 = amps
        .iter()
        .zip(image.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(value.re)
}

/// Expectation value of a Hermitian operator on a bare spin state.
pub fn spin_expectation(state: &SpinState, observable: &QubitOperator) -> Result<f64, QcoreError> {
    let residue = observable.hermiticity_residue();
    if residue > EXACT_TOL {
        return Err(QcoreError::NotHermitian(residue));
    }
    let amps = state.amplitudes();
    let image = observable.apply(amps);
    let value = amps[0].conj() * image[0] + amps[1].conj() * image[1];
    Ok(value.re)
}

/// Projects onto a path ket, returning the branch probability and the
/// conditional spin factor on that branch.
///
/// `path_ket` must be normalized; that is the caller's responsibility.
pub fn conditional_spin(
    state: &PathSpinState,
    path_ket: [C64; 2],
) -> Result<(f64, SpinState), QcoreError> {
    let ket_norm = norm_of(&path_ket);
    assert!(
        (ket_norm - 1.0).abs() <= EXACT_TOL,
        "path ket must be normalized, got norm {ket_norm}"
    );
    let amps = state.amplitudes();
    let spin_up = path_ket[0].conj() * amps[0] + path_ket[1].conj() * amps[2];
    let spin_down = path_ket[0].conj() * amps[1] + path_ket[1].conj() * amps[3];
    let probability = spin_up.norm_sqr() + spin_down.norm_sqr();
    if probability < BRANCH_TOL {
        return Err(QcoreError::DegenerateBranch(probability));
    }
    let spin = SpinState::normalized([spin_up, spin_down])?;
    Ok((probability, spin))
}

/// Projective path measurement: probability of the `path_ket` outcome and
/// the renormalized post-measurement state on the combined space.
pub fn project_path(
    state: &PathSpinState,
    path_ket: [C64; 2],
) -> Result<(f64, PathSpinState), QcoreError> {
    let (probability, spin) = conditional_spin(state, path_ket)?;
    let conditional = PathSpinState::product(path_ket, spin.amplitudes())?;
    Ok((probability, conditional))
}
