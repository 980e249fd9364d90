use statrs::function::erf::erf;

use super::{sample_kac_paths, InitialDirection, KacParams, SectorProb1D};
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// CDF of the centered normal law with the given variance.
pub fn gaussian_cdf<T: Real>(x: T, variance: T) -> T {
    let z = x.as_f64() / (2.0 * variance.as_f64()).sqrt();
    T::lit(0.5 * (1.0 + erf(z)))
}

/// Kolmogorov-Smirnov distance `sup_x |F_n(x) - F(x)|` between the empirical
/// law of `samples` and a continuous CDF. Tied samples are grouped.
pub fn ks_distance<T: Real>(samples: &[T], cdf: impl Fn(T) -> T) -> T {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = T::lit(xs.len() as f64);
    let mut d = T::zero();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        let below = T::lit(i as f64) / n;
        let upto = T::lit(j as f64) / n;
        d = d.max((f - below).abs()).max((upto - f).abs());
        i = j;
    }
    d
}

/// Result of comparing the Kac ensemble against the heat kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionCheck<T> {
    /// KS distance to `N(0, 2 nu t)`.
    pub ks: T,
    /// Speed `c = sqrt(2 lambda nu)` implied by the diffusive scaling.
    pub c: T,
    /// Heat-kernel variance `2 nu t`.
    pub variance: T,
    /// Exact variance of the symmetrized Kac process at `t`.
    pub kac_variance: T,
    /// Light-cone half-width `c t` in units of the heat-kernel standard
    /// deviation; the Gaussian comparison is meaningful when this is >= 6.
    pub cone_in_sigmas: T,
}

/// Samples the symmetrized Kac process with `c^2 = 2 lambda nu` and measures
/// its KS distance to the Wiener-process law `N(0, 2 nu t)`.
pub fn diffusion_limit_check<T: Real>(
    nu: T,
    lambda: T,
    t: T,
    n_paths: usize,
    seed: u64,
) -> Result<DiffusionCheck<T>> {
    if !(nu > T::zero()) || !nu.is_finite() {
        return Err(invalid(
            "nu",
            "diffusion coefficient must be positive and finite",
        ));
    }
    if !(lambda > T::zero()) {
        return Err(invalid("lambda", "diffusive scaling needs a positive rate"));
    }
    let two = T::lit(2.0);
    let c = (two * lambda * nu).sqrt();
    let params = KacParams::new(c, lambda)?;
    let ensemble = sample_kac_paths(
        &params,
        InitialDirection::Symmetric,
        T::zero(),
        t,
        n_paths,
        seed,
    )?;
    let variance = two * nu * t;
    let ks = if t == T::zero() {
        // degenerate reference law: unit step at the origin
        let n = T::lit(n_paths as f64);
        let lt = ensemble
            .positions()
            .iter()
            .filter(|&&x| x < T::zero())
            .count();
        let gt = ensemble
            .positions()
            .iter()
            .filter(|&&x| x > T::zero())
            .count();
        (T::lit(lt as f64) / n).max(T::lit(gt as f64) / n)
    } else {
        ks_distance(ensemble.positions(), |x| gaussian_cdf(x, variance))
    };
    let kac_variance = c * c / lambda * (t + (-two * lambda * t).exp_m1() / (two * lambda));
    let cone_in_sigmas = if t == T::zero() {
        T::infinity()
    } else {
        c * t / variance.sqrt()
    };
    Ok(DiffusionCheck {
        ks,
        c,
        variance,
        kac_variance,
        cone_in_sigmas,
    })
}

/// KS distance between the lattice law carried by `field` (total mass per
/// site, located at the site coordinate) and `N(center, variance)`.
pub fn lattice_ks_to_gaussian<T: Real>(field: &SectorProb1D<T>, center: T, variance: T) -> T {
    let grid = field.grid();
    let dx = grid.dx();
    let mut cum = T::zero();
    let mut d = T::zero();
    for (i, p) in field.total().into_iter().enumerate() {
        let f = gaussian_cdf(grid.x(i) - center, variance);
        d = d.max((cum - f).abs());
        cum = cum + p * dx;
        d = d.max((cum - f).abs());
    }
    d
}
