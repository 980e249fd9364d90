//! The real-valued persistent Kac process: exact Monte Carlo sampling, the
//! exact-lattice sector master equation, and the Telegrapher equation.

mod diffusion;
mod master;
mod paths;
mod telegrapher;

pub use diffusion::{
    diffusion_limit_check, gaussian_cdf, ks_distance, lattice_ks_to_gaussian, DiffusionCheck,
};
pub use master::{
    evolve_master, evolve_master_symmetric, l1_distance, switching_matrix, switching_weights,
    SectorProb1D,
};
pub use paths::{
    kac_moments, path_seed, sample_kac_paths, InitialDirection, KacMoments, PathEnsemble,
};
pub use telegrapher::{
    evolve_telegrapher, initial_rate_from_sectors, mode_rates, telegrapher_residual,
};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Propagation direction of a Kac particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    #[inline]
    pub fn sign<T: Real>(self) -> T {
        match self {
            Direction::Right => T::one(),
            Direction::Left => -T::one(),
        }
    }

    #[inline]
    pub fn flipped(self) -> Self {
        match self {
            Direction::Right => Direction::Left,
            Direction::Left => Direction::Right,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Direction::Right),
            -1 => Ok(Direction::Left),
            other => Err(invalid(
                "direction",
                format!("must be +1 or -1, got {other}"),
            )),
        }
    }
}

/// Process-defining scalars of a Kac walker: speed `c`, reversal rate
/// `lambda` and a species label.
#[derive(Debug, Clone, PartialEq)]
pub struct KacParams<T> {
    c: T,
    lambda: T,
    species: String,
}

impl<T: Real> KacParams<T> {
    pub fn new(c: T, lambda: T) -> Result<Self> {
        Self::with_species(c, lambda, "particle")
    }

    pub fn with_species(c: T, lambda: T, species: impl Into<String>) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(invalid(
                "c",
                format!("propagation speed must be positive and finite, got {c}"),
            ));
        }
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(invalid(
                "lambda",
                format!("switching rate must be >= 0 and finite, got {lambda}"),
            ));
        }
        Ok(Self {
            c,
            lambda,
            species: species.into(),
        })
    }

    #[inline]
    pub fn c(&self) -> T {
        self.c
    }

    #[inline]
    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn species(&self) -> &str {
        &self.species
    }

    /// Diffusion coefficient `c^2 / (2 lambda)` of the long-time limit.
    pub fn diffusion_coefficient(&self) -> T {
        self.c * self.c / (T::lit(2.0) * self.lambda)
    }
}
