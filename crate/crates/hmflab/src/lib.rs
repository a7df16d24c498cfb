//! Simulator and linear-stability toolkit for the Hamiltonian mean-field
//! (HMF) model.
//!
//! The crate cross-validates three independent theory engines against
//! N-body dynamics of cold force-free states:
//!
//! - [`linstab`]: exact finite-N growth rates from the stability matrix
//!   (rank-2 reduction, closed forms, dense Jacobi oracle);
//! - [`rmt`]: random-matrix expectation of the growth rate for random
//!   symmetric bicluster states (largest-eigenvalue law plus entry
//!   moments by quadrature);
//! - [`vlasov`]: continuum growth rates for arbitrary unmagnetized cold
//!   densities from the fluid dispersion relation.
//!
//! [`equilibria`] builds the force-free initial states, [`integrator`]
//! evolves them symplectically, and [`diagnostics`] extracts growth rates
//! and violent-relaxation statistics from the runs. The `examples/`
//! directory holds one runnable program per capability; the `hmflab`
//! binary exposes the same machinery as `simulate` / `sweep` / `predict`
//! subcommands.

// validation guards are written as negated comparisons on purpose: a NaN
// parameter must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod equilibria;
pub mod error;
pub mod integrator;
pub mod linstab;
pub mod model;
pub mod quad;
pub mod rmt;
pub mod rng;
pub mod vlasov;

pub use error::{HmfError, Result};
pub use model::{Magnetization, Observables, ParticleState};
