use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::grid::{Grid1D, RadialGrid};
use crate::scalar::Real;

/// A closed-form eigenpair sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticState<T> {
    pub psi: Vec<Complex<T>>,
    pub potential: Vec<T>,
    pub energy: T,
}

/// Harmonic-oscillator eigenstate `n` for `V = m omega^2 x^2 / 2`, built
/// with the normalized Hermite-function recurrence.
pub fn oscillator_eigenstate<T: Real>(
    n: usize,
    grid: &Grid1D<T>,
    m: T,
    omega: T,
    hbar: T,
) -> Result<AnalyticState<T>> {
    if !(m > T::zero() && omega > T::zero() && hbar > T::zero()) {
        return Err(invalid("oscillator", "m, omega and hbar must be positive"));
    }
    let alpha = m * omega / hbar;
    let scale = alpha.sqrt();
    let norm = alpha.powf(T::lit(0.25));
    let two = T::lit(2.0);
    let psi = grid
        .coordinates()
        .into_iter()
        .map(|x| {
            let xi = scale * x;
            let h0 = T::PI().powf(T::lit(-0.25)) * (-xi * xi / two).exp();
            let mut prev = h0;
            let mut cur = two.sqrt() * xi * h0;
            if n == 0 {
                cur = h0;
            }
            for k in 1..n {
                let kk = T::lit(k as f64);
                let next = (two / (kk + T::one())).sqrt() * xi * cur
                    - (kk / (kk + T::one())).sqrt() * prev;
                prev = cur;
                cur = next;
            }
            Complex::new(norm * cur, T::zero())
        })
        .collect();
    let potential = grid
        .coordinates()
        .into_iter()
        .map(|x| m * omega * omega * x * x / two)
        .collect();
    Ok(AnalyticState {
        psi,
        potential,
        energy: hbar * omega * (T::lit(n as f64) + T::lit(0.5)),
    })
}

/// Hydrogen-like 1s state in atomic units: `psi = e^{-r} / sqrt(pi)`,
/// `V = -1/r`, `E = -1/2`.
pub fn hydrogen_1s<T: Real>(grid: &RadialGrid<T>) -> AnalyticState<T> {
    let r = grid.coordinates();
    AnalyticState {
        psi: r
            .iter()
            .map(|&r| Complex::new((-r).exp() / T::PI().sqrt(), T::zero()))
            .collect(),
        potential: r.iter().map(|&r| -T::one() / r).collect(),
        energy: T::lit(-0.5),
    }
}

/// Positive periodic density `exp(sum_k a_k cos(k x) + b_k sin(k x))` over
/// the first `modes` harmonics, coefficients uniform in `[-amplitude,
/// amplitude]`.
pub fn random_smooth_log_density<T: Real>(
    grid: &Grid1D<T>,
    modes: usize,
    amplitude: f64,
    seed: u64,
) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(T, T)> = (0..modes)
        .map(|_| {
            (
                T::lit(rng.random_range(-amplitude..=amplitude)),
                T::lit(rng.random_range(-amplitude..=amplitude)),
            )
        })
        .collect();
    let base = T::TAU() / grid.length();
    grid.coordinates()
        .into_iter()
        .map(|x| {
            let s: T = coeffs
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| {
                    let arg = base * T::lit((k + 1) as f64) * (x - grid.origin());
                    a * arg.cos() + b * arg.sin()
                })
                .sum();
            s.exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_states_are_orthonormal() {
        let g = Grid1D::centered(512, 20.0).unwrap();
        let states: Vec<_> = (0..4)
            .map(|n| oscillator_eigenstate(n, &g, 1.0, 1.0, 1.0).unwrap())
            .collect();
        for a in 0..4 {
            for b in 0..4 {
                let s: f64 = states[a]
                    .psi
                    .iter()
                    .zip(&states[b].psi)
                    .map(|(x, y)| (x.conj() * y).re)
                    .sum::<f64>()
                    * g.dx();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-12, "{a} {b} {s}");
            }
        }
    }
}
