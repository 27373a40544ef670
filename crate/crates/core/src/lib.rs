//! Simulation core for a measurement-feedback coherent Ising machine (CIM) and
//! the Ising/QUBO tooling around it.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. File formats,
//! the command line and run manifests live in the `cimsim` crate.
//!
//! * [`ising`], [`qubo`], [`graph`]: problem representations and exact conversions.
//! * [`generators`]: Möbius ladders and seeded random graphs.
//! * [`solvers`]: exhaustive search, simulated annealing, batch success statistics.
//! * [`engine`]: the pump-ramped amplitude dynamics with measurement feedback.
//! * [`quantum`]: single-DOPO master equation and Wigner functions.
//! * [`apps`]: docking and feature-selection QUBO builders, RMSD and KS evaluators.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod apps;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod ising;
pub mod quantum;
pub mod qubo;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{cut_value, density, maxcut_to_ising, Graph};
pub use ising::{absorb_field, ising_energy, IsingModel, SpinConfig};
pub use qubo::{qubo_to_ising, qubo_value, QuboModel};
