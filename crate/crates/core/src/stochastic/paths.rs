use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use super::{Direction, KacParams, SectorProb1D};
use crate::error::{invalid, Result};
use crate::grid::Grid1D;
use crate::scalar::Real;

/// How the initial direction is assigned to each path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialDirection {
    Fixed(Direction),
    /// Even path indices start right-moving, odd ones left-moving.
    Symmetric,
}

impl InitialDirection {
    fn for_path(self, index: usize) -> Direction {
        match self {
            InitialDirection::Fixed(d) => d,
            InitialDirection::Symmetric if index.is_multiple_of(2) => Direction::Right,
            InitialDirection::Symmetric => Direction::Left,
        }
    }
}

impl From<Direction> for InitialDirection {
    fn from(d: Direction) -> Self {
        InitialDirection::Fixed(d)
    }
}

/// Final states of independently sampled Kac paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble<T> {
    params: KacParams<T>,
    init_x: T,
    init: InitialDirection,
    t_final: T,
    seed: u64,
    positions: Vec<T>,
    directions: Vec<Direction>,
    switch_counts: Vec<u32>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the independent substream used for path `index`.
pub fn path_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

/// Exact event-driven simulation of `n_paths` Kac walkers up to `t_final`.
///
/// Reversal times are exponential with rate `lambda`; between reversals the
/// walker moves ballistically at speed `c`. Each path draws from its own
/// ChaCha8 substream, so the ensemble is identical for any thread count.
pub fn sample_kac_paths<T: Real>(
    params: &KacParams<T>,
    init: impl Into<InitialDirection>,
    init_x: T,
    t_final: T,
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble<T>> {
    let init = init.into();
    if !(t_final >= T::zero()) || !t_final.is_finite() {
        return Err(invalid(
            "t_final",
            format!("must be >= 0 and finite, got {t_final}"),
        ));
    }
    if n_paths == 0 {
        return Err(invalid("n_paths", "need at least one path"));
    }
    if !init_x.is_finite() {
        return Err(invalid("init_x", "must be finite"));
    }
    let c = params.c();
    let rate = params.lambda().as_f64();
    let reach = c * t_final;

    let finals: Vec<(T, Direction, u32)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(path_seed(seed, i as u64));
            let mut dir = init.for_path(i);
            let mut t = T::zero();
            let mut x = init_x;
            let mut switches = 0u32;
            if rate > 0.0 {
                loop {
                    let wait: f64 = rng.sample(Exp1);
                    let tau = T::lit(wait / rate);
                    if t + tau >= t_final {
                        break;
                    }
                    x = x + c * dir.sign::<T>() * tau;
                    t = t + tau;
                    dir = dir.flipped();
                    switches += 1;
                }
            }
            x = x + c * dir.sign::<T>() * (t_final - t);
            // rounding in the segment sum must not violate the light cone
            x = x.max(init_x - reach).min(init_x + reach);
            (x, dir, switches)
        })
        .collect();

    let mut positions = Vec::with_capacity(n_paths);
    let mut directions = Vec::with_capacity(n_paths);
    let mut switch_counts = Vec::with_capacity(n_paths);
    for (x, d, s) in finals {
        positions.push(x);
        directions.push(d);
        switch_counts.push(s);
    }
    Ok(PathEnsemble {
        params: params.clone(),
        init_x,
        init,
        t_final,
        seed,
        positions,
        directions,
        switch_counts,
    })
}

impl<T: Real> PathEnsemble<T> {
    pub fn n_paths(&self) -> usize {
        self.positions.len()
    }

    pub fn params(&self) -> &KacParams<T> {
        &self.params
    }

    pub fn t_final(&self) -> T {
        self.t_final
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn init_x(&self) -> T {
        self.init_x
    }

    pub fn initial_direction(&self) -> InitialDirection {
        self.init
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn switch_counts(&self) -> &[u32] {
        &self.switch_counts
    }

    pub fn states(&self) -> impl Iterator<Item = (T, Direction)> + '_ {
        self.positions
            .iter()
            .copied()
            .zip(self.directions.iter().copied())
    }

    pub fn mean_x(&self) -> T {
        mean(&self.positions)
    }

    /// Standard error of [`mean_x`](Self::mean_x).
    pub fn stderr_x(&self) -> T {
        stderr(&self.positions)
    }

    pub fn mean_direction(&self) -> T {
        let s: Vec<T> = self.directions.iter().map(|d| d.sign()).collect();
        mean(&s)
    }

    pub fn fraction_right(&self) -> T {
        let n = self
            .directions
            .iter()
            .filter(|d| **d == Direction::Right)
            .count();
        T::lit(n as f64) / T::lit(self.n_paths() as f64)
    }

    pub fn max_displacement(&self) -> T {
        self.positions
            .iter()
            .map(|&x| (x - self.init_x).abs())
            .fold(T::zero(), T::max)
    }

    /// Sector-resolved density histogram: each path contributes
    /// `1 / (n_paths * dx)` at the grid site nearest to its position.
    pub fn histogram(&self, grid: &Grid1D<T>) -> SectorProb1D<T> {
        let mut plus = vec![0u64; grid.n()];
        let mut minus = vec![0u64; grid.n()];
        for (x, d) in self.states() {
            let j = grid.nearest_index(x);
            match d {
                Direction::Right => plus[j] += 1,
                Direction::Left => minus[j] += 1,
            }
        }
        let w = T::one() / (T::lit(self.n_paths() as f64) * grid.dx());
        let conv = |v: Vec<u64>| v.into_iter().map(|k| T::lit(k as f64) * w).collect();
        SectorProb1D::new(*grid, conv(plus), conv(minus)).expect("histogram is non-negative")
    }
}

fn mean<T: Real>(v: &[T]) -> T {
    v.iter().copied().sum::<T>() / T::lit(v.len() as f64)
}

fn stderr<T: Real>(v: &[T]) -> T {
    let n = v.len();
    if n < 2 {
        return T::zero();
    }
    let m = mean(v);
    let ss: T = v.iter().map(|&x| (x - m) * (x - m)).sum();
    (ss / T::lit((n - 1) as f64) / T::lit(n as f64)).sqrt()
}

/// Exact first moments of the Kac process started at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KacMoments<T> {
    pub mean_x: T,
    pub mean_s: T,
}

/// Closed-form `<x>(t)` and `<s>(t)` implied by the sector master equations:
/// `d<s>/dt = -2 lambda <s>`, `d<x>/dt = c <s>`.
pub fn kac_moments<T: Real>(params: &KacParams<T>, init: Direction, t: T) -> KacMoments<T> {
    let s0: T = init.sign();
    let c = params.c();
    let lambda = params.lambda();
    if lambda == T::zero() {
        return KacMoments {
            mean_x: c * s0 * t,
            mean_s: s0,
        };
    }
    let two_l = T::lit(2.0) * lambda;
    // 1 - exp(-2 lambda t), stable for small arguments
    let relaxed = -(-two_l * t).exp_m1();
    KacMoments {
        mean_x: c * s0 / two_l * relaxed,
        mean_s: s0 * (-two_l * t).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ballistic_without_switching() {
        let p = KacParams::new(1.0_f64, 0.0).unwrap();
        let e = sample_kac_paths(&p, Direction::Right, 0.0, 3.0, 100, 7).unwrap();
        assert!(e.positions().iter().all(|&x| x == 3.0));
        assert!(e.directions().iter().all(|&d| d == Direction::Right));
        assert!(e.switch_counts().iter().all(|&s| s == 0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = KacParams::new(1.0_f64, 1.0).unwrap();
        assert!(sample_kac_paths(&p, Direction::Right, 0.0, -1.0, 10, 1).is_err());
        assert!(sample_kac_paths(&p, Direction::Right, 0.0, 1.0, 0, 1).is_err());
    }

    #[test]
    fn zero_time_stays_put() {
        let p = KacParams::new(2.0_f64, 5.0).unwrap();
        let e = sample_kac_paths(&p, InitialDirection::Symmetric, 0.5, 0.0, 50, 3).unwrap();
        assert!(e.positions().iter().all(|&x| x == 0.5));
    }

    #[test]
    fn symmetric_launch_alternates() {
        let p = KacParams::new(1.0_f64, 0.0).unwrap();
        let e = sample_kac_paths(&p, InitialDirection::Symmetric, 0.0, 1.0, 4, 3).unwrap();
        assert_eq!(e.positions(), &[1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn moments_closed_form() {
        let p = KacParams::new(1.0_f64, 0.0).unwrap();
        assert_eq!(kac_moments(&p, Direction::Right, 1.0).mean_x, 1.0);
        let p = KacParams::new(1.0_f64, 1.0).unwrap();
        let far = kac_moments(&p, Direction::Right, 50.0);
        assert!((far.mean_x - 0.5).abs() < 1e-15);
        let m = kac_moments(&p, Direction::Left, 2.0);
        assert!((m.mean_x + 0.5 * (1.0 - (-4.0_f64).exp())).abs() < 1e-15);
        assert!((m.mean_s + (-4.0_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn stderr_of_constant_is_zero() {
        assert_eq!(stderr(&[2.0_f64; 5]), 0.0);
    }

    #[test]
    fn f32_sampling_works() {
        let p = KacParams::new(1.0_f32, 1.0).unwrap();
        let e = sample_kac_paths(&p, Direction::Right, 0.0, 2.0, 1000, 5).unwrap();
        assert!(e.max_displacement() <= 2.0);
    }
}
