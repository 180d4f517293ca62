//! Exact simulator for single-particle path-spin interferometry.
//!
//! The crate models a Mach-Zehnder interferometer whose two output channels
//! carry Stern-Gerlach analyzers, computes subensemble spin means
//! conditioned on which-path outcomes, and contrasts the quantum
//! predictions with noncontextual hidden-variable models.
//!
//! Module layout:
//!
//! * [`qcore`] — complex amplitudes, states, operators, tensor products,
//!   expectation values, and projective measurement.
//! * [`elements`] — optical bench elements: beam splitters, the spin
//!   flipper, path and spin observables, Stern-Gerlach projectors.
//! * [`experiments`] — state preparation, full interferometer runs,
//!   closed-form subensemble means, and the two-channel comparison.
//! * [`noncontextual`] — hidden-variable machinery: the Bell qubit model
//!   with Monte Carlo sampling, deterministic-assignment enumeration,
//!   linear-program feasibility, and CHSH searches.
//! * [`cli`] — argument/config parsing, report assembly, and the
//!   serialization formats used by the `pathspin` binary.

pub mod cli;
pub mod elements;
pub mod experiments;
pub mod noncontextual;
pub mod qcore;
