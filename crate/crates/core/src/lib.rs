//! Primal-dual hybrid gradient (PDHG) solver for monotone inclusions
//! `0 in A x + C*(B(C x))` with Bregman proximal geometries, step-size
//! certificates, ergodic iterate tracking, and convergence diagnostics.
//!
//! Everything is generic over the scalar type through [`Scalar`]
//! (implemented for `f32` and `f64`); the `*64` aliases below fix the
//! default double-precision instantiation.

pub mod bregman;
pub mod diagnostics;
pub mod hilbert;
pub mod monotone;
pub mod problems;
pub mod solver;

mod dense;
mod error;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bregman::{AlphaCertificate, BregmanGeometry, ScalarPotential};
pub use hilbert::{inner, LinearMap, Vector};
pub use monotone::MonotoneMap;
pub use problems::ProblemInstance;
pub use solver::{SolverConfig, SolverState, Termination, Trace};

/// Double-precision aliases for the common instantiation.
pub type Vector64 = hilbert::Vector<f64>;
pub type LinearMap64 = hilbert::LinearMap<f64>;
pub type MonotoneMap64 = monotone::MonotoneMap<f64>;
pub type BregmanGeometry64 = bregman::BregmanGeometry<f64>;
pub type AlphaCertificate64 = bregman::AlphaCertificate<f64>;
pub type ProblemInstance64 = problems::ProblemInstance<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type SolverState64 = solver::SolverState<f64>;
pub type Trace64 = solver::Trace<f64>;
