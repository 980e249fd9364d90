//! Nelson stochastic-mechanics analysis of stationary states and the
//! Gordon decomposition of the (1+1)D Dirac current.
//!
//! Periodic 1D domains use spectral derivatives. Spherically symmetric
//! profiles live on an open [`RadialGrid`] and use fourth-order finite
//! differences with one-sided closures; there `grad . u = u' + 2u/r` and
//! `lap f = f'' + 2f'/r`.

mod analytic;
mod gordon;
mod stationary;

pub use analytic::{hydrogen_1s, oscillator_eigenstate, random_smooth_log_density, AnalyticState};
pub use gordon::{gordon_decompose, gordon_plane_wave, GordonDecomposition, GordonInput};
pub use stationary::{
    current_velocity, osmotic_velocity, polar_decompose, quantum_potential,
    quantum_potential_from_u, stationarity_residual, transition_frequency, PolarParts,
    StationarityResidual, StationaryState,
};

use num_complex::Complex;

use crate::grid::{Grid1D, RadialGrid};
use crate::scalar::Real;
use crate::spectral;

/// Relative density below which a point counts as a node.
pub const NODE_THRESHOLD: f64 = 1e-8;
/// Cells excluded on each side of a node region.
pub const NODE_MARGIN: usize = 2;

/// Where a profile lives and how it is differentiated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Periodic(Grid1D<T>),
    Radial(RadialGrid<T>),
}

impl<T: Real> Domain<T> {
    pub fn n(&self) -> usize {
        match self {
            Domain::Periodic(g) => g.n(),
            Domain::Radial(g) => g.n(),
        }
    }

    pub fn coordinates(&self) -> Vec<T> {
        match self {
            Domain::Periodic(g) => g.coordinates(),
            Domain::Radial(g) => g.coordinates(),
        }
    }

    /// Integration weights: `dx` on a ring, `4 pi r^2 dr` radially.
    pub fn weights(&self) -> Vec<T> {
        match self {
            Domain::Periodic(g) => vec![g.dx(); g.n()],
            Domain::Radial(g) => g
                .coordinates()
                .into_iter()
                .map(|r| T::lit(4.0) * T::PI() * r * r * g.dr())
                .collect(),
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(self, Domain::Periodic(_))
    }

    pub fn d1(&self, f: &[T]) -> Vec<T> {
        match self {
            Domain::Periodic(g) => spectral::derivative(f, g),
            Domain::Radial(g) => fd4_d1(f, g.dr()),
        }
    }

    pub fn d1_complex(&self, f: &[Complex<T>]) -> Vec<Complex<T>> {
        match self {
            Domain::Periodic(g) => spectral::derivative_complex(f, g),
            Domain::Radial(g) => complex_apply(f, |v| fd4_d1(v, g.dr())),
        }
    }

    /// Divergence of a radial (or 1D) vector component.
    pub fn divergence(&self, u: &[T]) -> Vec<T> {
        let d = self.d1(u);
        match self {
            Domain::Periodic(_) => d,
            Domain::Radial(g) => d
                .into_iter()
                .zip(u)
                .enumerate()
                .map(|(i, (du, &ui))| du + T::lit(2.0) * ui / g.r(i))
                .collect(),
        }
    }

    pub fn laplacian(&self, f: &[T]) -> Vec<T> {
        match self {
            Domain::Periodic(g) => spectral::second_derivative(f, g),
            Domain::Radial(g) => {
                let d1 = fd4_d1(f, g.dr());
                fd4_d2(f, g.dr())
                    .into_iter()
                    .zip(d1)
                    .enumerate()
                    .map(|(i, (d2, d1))| d2 + T::lit(2.0) * d1 / g.r(i))
                    .collect()
            }
        }
    }

    pub fn laplacian_complex(&self, f: &[Complex<T>]) -> Vec<Complex<T>> {
        match self {
            Domain::Periodic(g) => spectral::second_derivative_complex(f, g),
            Domain::Radial(_) => {
                let re: Vec<T> = f.iter().map(|z| z.re).collect();
                let im: Vec<T> = f.iter().map(|z| z.im).collect();
                self.laplacian(&re)
                    .into_iter()
                    .zip(self.laplacian(&im))
                    .map(|(a, b)| Complex::new(a, b))
                    .collect()
            }
        }
    }
}

fn complex_apply<T: Real>(f: &[Complex<T>], op: impl Fn(&[T]) -> Vec<T>) -> Vec<Complex<T>> {
    let re: Vec<T> = f.iter().map(|z| z.re).collect();
    let im: Vec<T> = f.iter().map(|z| z.im).collect();
    op(&re)
        .into_iter()
        .zip(op(&im))
        .map(|(a, b)| Complex::new(a, b))
        .collect()
}

fn stencil<T: Real>(f: &[T], i: usize, coeffs: &[f64]) -> T {
    coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| T::lit(c) * f[i + j])
        .sum()
}

fn stencil_rev<T: Real>(f: &[T], i: usize, coeffs: &[f64]) -> T {
    coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| T::lit(c) * f[i - j])
        .sum()
}

/// Fourth-order first derivative with one-sided closures.
pub(crate) fn fd4_d1<T: Real>(f: &[T], h: T) -> Vec<T> {
    let n = f.len();
    assert!(n >= 6, "fourth-order stencils need at least 6 points");
    let s = T::lit(12.0) * h;
    const B0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
    const B1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
    (0..n)
        .map(|i| {
            let v = if i == 0 {
                stencil(f, 0, &B0)
            } else if i == 1 {
                stencil(f, 0, &B1)
            } else if i == n - 1 {
                -stencil_rev(f, n - 1, &B0)
            } else if i == n - 2 {
                -stencil_rev(f, n - 1, &B1)
            } else {
                stencil(f, i - 2, &[1.0, -8.0, 0.0, 8.0, -1.0])
            };
            v / s
        })
        .collect()
}

/// Fourth-order second derivative with one-sided closures.
pub(crate) fn fd4_d2<T: Real>(f: &[T], h: T) -> Vec<T> {
    let n = f.len();
    assert!(n >= 6, "fourth-order stencils need at least 6 points");
    let s = T::lit(12.0) * h * h;
    const B0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    const B1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    (0..n)
        .map(|i| {
            let v = if i == 0 {
                stencil(f, 0, &B0)
            } else if i == 1 {
                stencil(f, 0, &B1)
            } else if i == n - 1 {
                stencil_rev(f, n - 1, &B0)
            } else if i == n - 2 {
                stencil_rev(f, n - 1, &B1)
            } else {
                stencil(f, i - 2, &[-1.0, 16.0, -30.0, 16.0, -1.0])
            };
            v / s
        })
        .collect()
}

/// Values with a validity flag; invalid entries hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedField<T> {
    pub values: Vec<T>,
    pub valid: Vec<bool>,
}

impl<T: Real> MaskedField<T> {
    pub fn new(values: Vec<T>, valid: Vec<bool>) -> Self {
        let values = values
            .into_iter()
            .zip(&valid)
            .map(|(v, &ok)| if ok { v } else { T::nan() })
            .collect();
        Self { values, valid }
    }

    pub fn unmasked(values: Vec<T>) -> Self {
        let valid = vec![true; values.len()];
        Self { values, valid }
    }

    pub fn get(&self, i: usize) -> Option<T> {
        self.valid[i].then(|| self.values[i])
    }

    pub fn valid_values(&self) -> impl Iterator<Item = T> + '_ {
        self.values
            .iter()
            .zip(&self.valid)
            .filter(|(_, &ok)| ok)
            .map(|(&v, _)| v)
    }

    /// Largest `|value|` over valid points (0 if none).
    pub fn max_abs(&self) -> T {
        self.valid_values().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn masked_fraction(&self) -> T {
        let bad = self.valid.iter().filter(|ok| !**ok).count();
        T::lit(bad as f64) / T::lit(self.valid.len().max(1) as f64)
    }

    /// Largest `|self - other|` over points valid in both.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.valid.iter().zip(&other.valid))
            .filter(|(_, (a, b))| **a && **b)
            .fold(T::zero(), |m, ((x, y), _)| m.max((*x - *y).abs()))
    }
}

/// Validity mask: `rho >= threshold * max(rho)`, eroded by
/// [`NODE_MARGIN`] cells (wrapping on periodic domains).
pub fn node_mask<T: Real>(rho: &[T], domain: &Domain<T>) -> Vec<bool> {
    let n = rho.len();
    let peak = rho.iter().fold(T::zero(), |m, &v| m.max(v));
    let cut = T::lit(NODE_THRESHOLD) * peak;
    let raw: Vec<bool> = rho.iter().map(|&v| v >= cut && v > T::zero()).collect();
    let wrap = domain.is_periodic();
    let m = NODE_MARGIN as isize;
    (0..n)
        .map(|i| {
            (-m..=m).all(|d| {
                let j = i as isize + d;
                if wrap {
                    raw[j.rem_euclid(n as isize) as usize]
                } else if j < 0 || j >= n as isize {
                    true
                } else {
                    raw[j as usize]
                }
            })
        })
        .collect()
}
