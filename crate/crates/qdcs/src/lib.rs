//! Coherent states of a q-deformed oscillator algebra, their overlaps, and
//! the entanglement they generate in bipartite superpositions.
//!
//! The deformation is controlled by a small real parameter `ε` (so the
//! deformation base is `q = 1 + ε`): the deformed mode operator is
//! `b = a + (ε/4)·a†a²`, which satisfies `b b† − q b†b = 1` to first order
//! in `ε`. The crate builds the associated deformed coherent states two
//! independent ways, evaluates their overlaps both in closed form and
//! numerically, computes the concurrence of two-mode superpositions of
//! them, and produces the deterministic figure-data sweeps behind those
//! quantities.
//!
//! Module map:
//! - [`fock`]: truncated Fock space, ladder operators, coherent states,
//!   dense matrix exponential.
//! - [`algebra`]: deformed operators and self-checks of the commutation
//!   structure.
//! - [`states`]: deformed coherent states (perturbative and numeric) and
//!   the four overlap variants.
//! - [`entangle`]: concurrence routes, validity margins, and
//!   maximal-entanglement predicates.
//! - [`sweep`]: deterministic parameter sweeps emitting CSV.
//! - [`verify`]: the self-check suite backing the `verify` subcommand.
//! - [`config`]: on-disk run configuration.
//! - [`records`]: JSON records (state dumps, pair specs, reports).

pub mod algebra;
pub mod config;
pub mod entangle;
pub mod error;
pub mod fock;
pub mod records;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::Error;
