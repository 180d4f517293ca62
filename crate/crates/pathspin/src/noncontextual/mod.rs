//! Hidden-variable analyses set against the quantum predictions.
//!
//! Three questions are treated separately:
//!
//! * can a Bell-style hidden-variable model on the sphere reproduce the
//!   conditional spin means channel by channel ([`bell`]);
//! * do the joint correlators and marginals of a finite setting table
//!   admit any noncontextual deterministic-assignment mixture
//!   ([`assignments`], solved as a linear feasibility problem on top of
//!   [`simplex`]);
//! * how large a CHSH combination can the quantum state produce over
//!   the setting space ([`chsh`]).

pub mod assignments;
pub mod bell;
pub mod chsh;
pub mod simplex;

use thiserror::Error;

use crate::elements::ElementsError;
use crate::experiments::ExperimentsError;

pub use assignments::{
    enumerate_assignments, feasibility_lp, ChshWitness, DeterministicAssignment, FeasibilityOutcome,
};
pub use bell::{
    bell_qubit_expectation_mc, bell_qubit_outcome, reproduce_de_zela_channels, BlochVector,
    ChannelStat, DeZelaChannelCheck,
};
pub use chsh::{chsh_search, chsh_value, chsh_value_signed, ChshSearchOutcome, TSIRELSON_BOUND};

/// Errors raised by the hidden-variable analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoncontextualError {
    /// A Monte Carlo run was requested with too few samples.
    #[error("sample count {0} is below the minimum {1}")]
    InvalidSampleCount(u64, u64),
    /// The assignment space 2^(m+n) would be too large to enumerate.
    #[error("{total} settings exceed the enumeration limit of 20")]
    TooManySettings { total: usize },
    /// At least one path setting and one spin setting are required.
    #[error("setting lists must be nonempty")]
    EmptySettings,
    /// The feasibility solver hit its iteration cap without an answer.
    #[error("feasibility solver stalled before reaching a verdict")]
    SolverStall,
    /// A CHSH search grid was too coarse to seed the refinement.
    #[error("grid density {0} is below the minimum of 8")]
    GridTooCoarse(usize),
    /// A quantum-side computation failed.
    #[error(transparent)]
    Experiment(#[from] ExperimentsError),
    /// A bench element could not be constructed.
    #[error(transparent)]
    Element(#[from] ElementsError),
}
