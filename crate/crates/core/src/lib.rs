//! Persistent Kac-type stochastic processes and the relativistic wave
//! equations built on them.
//!
//! * [`stochastic`]: exact Monte Carlo of the Kac walker, the unit-CFL
//!   lattice master equation and the Telegrapher equation.
//! * [`dirac`]: the continuation `lambda -> i m c^2 / hbar` and split-step /
//!   exact spectral Dirac propagators in 1D and 3D.
//! * [`gauge`]: two charged species coupled to a prescribed potential.
//! * [`maxwell`]: Riemann-Silberstein helicity fields with optional helicity
//!   switching.
//! * [`nelson`]: osmotic/current velocities, quantum potential and the
//!   Gordon decomposition.
//!
//! Numerical types are generic over [`Real`]; the aliases at the crate root
//! fix the scalar to `f64`.

// `!(x > 0)` style checks are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirac;
pub mod error;
pub mod gauge;
pub mod grid;
pub mod linalg;
pub mod maxwell;
pub mod nelson;
pub mod scalar;
pub mod spectral;
pub mod stochastic;

pub use error::{Error, Result};
pub use scalar::Real;
pub use stochastic::Direction;

pub type Grid1D = grid::Grid1D<f64>;
pub type Grid3D = grid::Grid3D<f64>;
pub type RadialGrid = grid::RadialGrid<f64>;
pub type KacParams = stochastic::KacParams<f64>;
pub type PathEnsemble = stochastic::PathEnsemble<f64>;
pub type SectorProb1D = stochastic::SectorProb1D<f64>;
pub type DiracParams = dirac::DiracParams<f64>;
pub type WeylSpinorField1D = dirac::WeylSpinorField1D<f64>;
pub type DiracSpinorField3D = dirac::DiracSpinorField3D<f64>;
pub type GaugeField1D = gauge::GaugeField1D<f64>;
pub type GaugeFunction = gauge::GaugeFunction<f64>;
pub type CoupledState = gauge::CoupledState<f64>;
pub type RSField3D = maxwell::RSField3D<f64>;
pub type StationaryState = nelson::StationaryState<f64>;
pub type Complex64 = num_complex::Complex<f64>;
