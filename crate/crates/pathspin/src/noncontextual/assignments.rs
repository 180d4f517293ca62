//! Deterministic outcome assignments and the feasibility test for a
//! noncontextual mixture reproducing the quantum setting table.
//!
//! A deterministic assignment gives every path setting and every spin
//! setting a fixed outcome in {+1, -1}, independent of which other
//! observable is measured alongside. A noncontextual model is a
//! probability mixture of such assignments. Whether the quantum
//! correlators and marginals of a finite setting table admit one is a
//! linear feasibility question over the 2^(m+n) assignment weights.

use crate::elements;
use crate::elements::{BeamSplitterParams, SpinSetting};
use crate::experiments::correlator;
use crate::noncontextual::chsh::chsh_value_signed;
use crate::noncontextual::simplex::{solve_equality_feasibility, SimplexStatus};
use crate::noncontextual::NoncontextualError;
use crate::qcore::{expectation, tensor, PathSpinState, QubitOperator};

/// Ceiling on m + n, keeping the assignment space enumerable.
pub const MAX_TOTAL_SETTINGS: usize = 20;

/// Residuals below this threshold certify a reproduced moment table.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Margin above the classical bound 2 required to call a CHSH
/// combination a witness.
pub const WITNESS_MARGIN: f64 = 1e-6;

/// One deterministic assignment of outcomes to every setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicAssignment {
    path_values: Vec<i8>,
    spin_values: Vec<i8>,
}

impl DeterministicAssignment {
    /// Outcomes assigned to the path settings, in setting order.
    pub fn path_values(&self) -> &[i8] {
        &self.path_values
    }

    /// Outcomes assigned to the spin settings, in setting order.
    pub fn spin_values(&self) -> &[i8] {
        &self.spin_values
    }

    /// Product outcome for the joint measurement (path i, spin j).
    pub fn product(&self, path_idx: usize, spin_idx: usize) -> f64 {
        f64::from(self.path_values[path_idx] * self.spin_values[spin_idx])
    }
}

/// Outcome value encoded at `pos` within assignment `index`: path
/// values occupy the leading positions, +1 sorts before -1.
fn assignment_value(index: usize, pos: usize, total: usize) -> f64 {
    if index >> (total - 1 - pos) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Enumerates all 2^(m+n) deterministic assignments in lexicographic
/// order: path outcomes first, +1 before -1 at every position.
pub fn enumerate_assignments(
    num_path: usize,
    num_spin: usize,
) -> Result<Vec<DeterministicAssignment>, NoncontextualError> {
    if num_path == 0 || num_spin == 0 {
        return Err(NoncontextualError::EmptySettings);
    }
    let total = num_path + num_spin;
    if total > MAX_TOTAL_SETTINGS {
        return Err(NoncontextualError::TooManySettings { total });
    }
    let mut assignments = Vec::with_capacity(1 << total);
    for index in 0..1usize << total {
        let value = |pos: usize| assignment_value(index, pos, total) as i8;
        assignments.push(DeterministicAssignment {
            path_values: (0..num_path).map(value).collect(),
            spin_values: (num_path..total).map(value).collect(),
        });
    }
    Ok(assignments)
}

/// A CHSH combination exceeding the classical bound, certifying that
/// no assignment mixture can reproduce the table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshWitness {
    /// Indices of the two path settings entering the combination.
    pub path_pair: (usize, usize),
    /// Indices of the two spin settings entering the combination.
    pub spin_pair: (usize, usize),
    /// Signs applied to (E11, E12, E21, E22) of the selected subtable.
    pub signs: [f64; 4],
    /// Value of the signed combination.
    pub value: f64,
}

/// Verdict of the feasibility test.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityOutcome {
    /// Whether an assignment mixture reproduces the table.
    pub feasible: bool,
    /// Mixture weights over the lexicographic assignments, present only
    /// for feasible tables.
    pub weights: Option<Vec<f64>>,
    /// For feasible tables, the largest moment reconstruction error;
    /// for infeasible tables, the solver's residual constraint
    /// violation (its phase-one objective).
    pub max_residual: f64,
    /// A certifying CHSH combination, when one exists among the
    /// 2x2 subtables.
    pub witness: Option<ChshWitness>,
}

/// Quantum moment table for the given settings on a state.
struct MomentTable {
    correlators: Vec<Vec<f64>>,
    path_marginals: Vec<f64>,
    spin_marginals: Vec<f64>,
}

fn quantum_moments(
    state: &PathSpinState,
    path_settings: &[BeamSplitterParams],
    spin_settings: &[SpinSetting],
) -> Result<MomentTable, NoncontextualError> {
    let identity = QubitOperator::identity();
    let mut correlators = Vec::with_capacity(path_settings.len());
    for params in path_settings {
        let mut row = Vec::with_capacity(spin_settings.len());
        for setting in spin_settings {
            row.push(correlator(state, params, setting)?);
        }
        correlators.push(row);
    }
    let path_marginals = path_settings
        .iter()
        .map(|params| {
            expectation(
                state,
                &tensor(&elements::path_observable(params), &identity),
            )
            .map_err(|e| NoncontextualError::Experiment(e.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let spin_marginals = spin_settings
        .iter()
        .map(|setting| {
            expectation(
                state,
                &tensor(&identity, &elements::spin_observable(setting)),
            )
            .map_err(|e| NoncontextualError::Experiment(e.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MomentTable {
        correlators,
        path_marginals,
        spin_marginals,
    })
}

/// Searches the 2x2 subtables for the strongest CHSH combination.
fn best_witness(correlators: &[Vec<f64>]) -> Option<ChshWitness> {
    let m = correlators.len();
    let n = correlators[0].len();
    let mut best: Option<ChshWitness> = None;
    for i1 in 0..m {
        for i2 in (i1 + 1)..m {
            for j1 in 0..n {
                for j2 in (j1 + 1)..n {
                    let table = [
                        [correlators[i1][j1], correlators[i1][j2]],
                        [correlators[i2][j1], correlators[i2][j2]],
                    ];
                    let (value, signs) = chsh_value_signed(table);
                    if best.as_ref().is_none_or(|w| value > w.value) {
                        best = Some(ChshWitness {
                            path_pair: (i1, i2),
                            spin_pair: (j1, j2),
                            signs,
                            value,
                        });
                    }
                }
            }
        }
    }
    best.filter(|w| w.value > 2.0 + WITNESS_MARGIN)
}

/// Decides whether a noncontextual assignment mixture reproduces the
/// quantum correlators and marginals of the given setting table.
///
/// Feasible verdicts come with the mixture weights and an
/// independently recomputed worst moment error, which is required to
/// stay below `RESIDUAL_TOL`. Infeasible verdicts carry a CHSH witness
/// whenever one of the 2x2 subtables beats the classical bound.
pub fn feasibility_lp(
    state: &PathSpinState,
    path_settings: &[BeamSplitterParams],
    spin_settings: &[SpinSetting],
) -> Result<FeasibilityOutcome, NoncontextualError> {
    let m = path_settings.len();
    let n = spin_settings.len();
    if m == 0 || n == 0 {
        return Err(NoncontextualError::EmptySettings);
    }
    let total = m + n;
    if total > MAX_TOTAL_SETTINGS {
        return Err(NoncontextualError::TooManySettings { total });
    }
    let moments = quantum_moments(state, path_settings, spin_settings)?;

    // Row layout: m*n correlators (path-major), m path marginals,
    // n spin marginals, then the normalization row.
    let mut rhs = Vec::with_capacity(m * n + total + 1);
    for row in &moments.correlators {
        rhs.extend_from_slice(row);
    }
    rhs.extend_from_slice(&moments.path_marginals);
    rhs.extend_from_slice(&moments.spin_marginals);
    rhs.push(1.0);

    let num_assignments = 1usize << total;
    let fill_column = |k: usize, out: &mut [f64]| {
        let mut row = 0;
        for i in 0..m {
            let a = assignment_value(k, i, total);
            for j in 0..n {
                out[row] = a * assignment_value(k, m + j, total);
                row += 1;
            }
        }
        for i in 0..m {
            out[row] = assignment_value(k, i, total);
            row += 1;
        }
        for j in 0..n {
            out[row] = assignment_value(k, m + j, total);
            row += 1;
        }
        out[row] = 1.0;
    };

    let max_iterations = 1_000 + 200 * rhs.len();
    let status = solve_equality_feasibility(&rhs, num_assignments, fill_column, max_iterations)
        .map_err(|_| NoncontextualError::SolverStall)?;

    match status {
        SimplexStatus::Feasible(solution) => {
            // Recompute every moment from the returned weights; the
            // verdict stands on this check, not on the solver's word.
            let mut reconstructed = vec![0.0; rhs.len()];
            let mut scratch = vec![0.0; rhs.len()];
            let mut weights = vec![0.0; num_assignments];
            for &(k, w) in &solution {
                weights[k] = w;
                fill_column(k, &mut scratch);
                for (slot, &a) in reconstructed.iter_mut().zip(&scratch) {
                    *slot += w * a;
                }
            }
            let max_residual = reconstructed
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if max_residual >= RESIDUAL_TOL {
                return Err(NoncontextualError::SolverStall);
            }
            Ok(FeasibilityOutcome {
                feasible: true,
                weights: Some(weights),
                max_residual,
                witness: None,
            })
        }
        SimplexStatus::Infeasible { objective } => Ok(FeasibilityOutcome {
            feasible: false,
            weights: None,
            max_residual: objective,
            witness: best_witness(&moments.correlators),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::prepare_pan_home;
    use crate::qcore::{PathSpinState, C64};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params(gamma: f64) -> BeamSplitterParams {
        BeamSplitterParams::from_gamma(gamma).unwrap()
    }

    fn setting(theta: f64) -> SpinSetting {
        SpinSetting::new(theta).unwrap()
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = enumerate_assignments(2, 2).unwrap();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].path_values(), &[1, 1]);
        assert_eq!(all[0].spin_values(), &[1, 1]);
        assert_eq!(all[1].spin_values(), &[1, -1]);
        assert_eq!(all[15].path_values(), &[-1, -1]);
        assert_eq!(all[15].spin_values(), &[-1, -1]);
        assert_eq!(all[4].path_values(), &[1, -1]);
        assert_eq!(all[4].spin_values(), &[1, 1]);
        assert_eq!(all[5].product(1, 1), 1.0);
        assert_eq!(all[5].product(0, 1), -1.0);
    }

    #[test]
    fn enumeration_limits_are_enforced() {
        assert!(matches!(
            enumerate_assignments(0, 3),
            Err(NoncontextualError::EmptySettings)
        ));
        assert!(matches!(
            enumerate_assignments(11, 10),
            Err(NoncontextualError::TooManySettings { total: 21 })
        ));
        assert_eq!(enumerate_assignments(10, 10).unwrap().len(), 1 << 20);
    }

    #[test]
    fn enumeration_matches_the_bitwise_column_values() {
        let all = enumerate_assignments(3, 2).unwrap();
        for (k, assignment) in all.iter().enumerate() {
            for pos in 0..3 {
                assert_eq!(
                    f64::from(assignment.path_values()[pos]),
                    assignment_value(k, pos, 5)
                );
            }
            for pos in 0..2 {
                assert_eq!(
                    f64::from(assignment.spin_values()[pos]),
                    assignment_value(k, 3 + pos, 5)
                );
            }
        }
    }

    #[test]
    fn single_setting_pair_is_always_feasible() {
        let state = prepare_pan_home();
        for (gamma, theta) in [(1.0, 0.0), (FRAC_1_SQRT_2, FRAC_PI_8), (0.3, 2.0)] {
            let outcome = feasibility_lp(&state, &[params(gamma)], &[setting(theta)]).unwrap();
            assert!(outcome.feasible, "({gamma}, {theta})");
            assert!(outcome.max_residual < RESIDUAL_TOL);
            assert!(outcome.witness.is_none());
        }
    }

    #[test]
    fn product_states_admit_a_mixture_at_chsh_settings() {
        let product =
            PathSpinState::product([c(1.0, 0.0), c(0.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let outcome = feasibility_lp(
            &product,
            &[params(1.0), params(FRAC_1_SQRT_2)],
            &[setting(3.0 * FRAC_PI_8), setting(FRAC_PI_8)],
        )
        .unwrap();
        assert!(outcome.feasible);
        assert!(outcome.max_residual < RESIDUAL_TOL);
        let weights = outcome.weights.unwrap();
        assert!((weights.iter().sum::<f64>() - 1.0).abs() < RESIDUAL_TOL);
        assert!(weights.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn prepared_state_at_chsh_settings_is_witnessed_infeasible() {
        let state = prepare_pan_home();
        let outcome = feasibility_lp(
            &state,
            &[params(1.0), params(FRAC_1_SQRT_2)],
            &[setting(3.0 * FRAC_PI_8), setting(FRAC_PI_8)],
        )
        .unwrap();
        assert!(!outcome.feasible);
        assert!(outcome.weights.is_none());
        let witness = outcome.witness.expect("a CHSH witness must certify this");
        assert!((witness.value - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!(witness.value > 2.0 + WITNESS_MARGIN);
    }

    // Closed-form oracle for a single setting pair: a distribution on
    // (a, b) in {+1, -1}^2 with given marginals and correlation exists
    // exactly when all four joint weights
    // (1 + a*pa + b*sb + a*b*e)/4 are nonnegative.
    fn single_pair_feasible(pa: f64, sb: f64, e: f64) -> bool {
        [1.0f64, -1.0].iter().all(|&a| {
            [1.0f64, -1.0]
                .iter()
                .all(|&b| 1.0 + a * pa + b * sb + a * b * e >= -1e-9)
        })
    }

    proptest! {
        // Cross-check the solver verdict and its returned mixture
        // against the closed-form oracle on random states and settings.
        #[test]
        fn solver_agrees_with_the_closed_form_oracle(
            parts in prop::array::uniform8(-1.0f64..1.0),
            gamma in 0.0f64..1.0,
            theta in 0.0f64..std::f64::consts::PI,
        ) {
            let raw = [
                c(parts[0], parts[1]),
                c(parts[2], parts[3]),
                c(parts[4], parts[5]),
                c(parts[6], parts[7]),
            ];
            let Ok(state) = PathSpinState::normalized(raw) else {
                return Ok(());
            };
            let p = params(gamma);
            let s = setting(theta);
            let outcome = feasibility_lp(&state, &[p], &[s])
                .map_err(|err| TestCaseError::fail(err.to_string()))?;
            let e = crate::experiments::correlator(&state, &p, &s)
                .map_err(|err| TestCaseError::fail(err.to_string()))?;
            let identity = QubitOperator::identity();
            let pa = expectation(&state, &tensor(&elements::path_observable(&p), &identity))
                .map_err(|err| TestCaseError::fail(err.to_string()))?;
            let sb = expectation(&state, &tensor(&identity, &elements::spin_observable(&s)))
                .map_err(|err| TestCaseError::fail(err.to_string()))?;
            prop_assert_eq!(outcome.feasible, single_pair_feasible(pa, sb, e));
            if let Some(weights) = &outcome.weights {
                let mut moments = [0.0f64; 4];
                for (k, &w) in weights.iter().enumerate() {
                    let a = assignment_value(k, 0, 2);
                    let b = assignment_value(k, 1, 2);
                    moments[0] += w * a * b;
                    moments[1] += w * a;
                    moments[2] += w * b;
                    moments[3] += w;
                }
                for (got, want) in moments.iter().zip([e, pa, sb, 1.0]) {
                    prop_assert!((got - want).abs() < RESIDUAL_TOL);
                }
            }
        }
    }
}
