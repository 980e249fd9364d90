use num_complex::Complex;

use super::{KacParams, SectorProb1D};
use crate::error::{invalid, Error, Result};
use crate::grid::Grid1D;
use crate::scalar::Real;

fn laplacian_into<T: Real>(f: &[T], inv_dx2: T, out: &mut [T]) {
    let n = f.len();
    for i in 0..n {
        let l = f[(i + n - 1) % n];
        let r = f[(i + 1) % n];
        out[i] = (l - T::lit(2.0) * f[i] + r) * inv_dx2;
    }
}

/// Advances `P_tt + 2 lambda P_t = c^2 P_xx` with the damped central
/// leapfrog
///
/// `(1 + lambda dt) P^{n+1} = 2 P^n - (1 - lambda dt) P^{n-1} + c^2 dt^2 D2 P^n`,
///
/// started from a second-order Taylor step. Returns `(P, P_t)` at
/// `n_steps * dt`, with `P_t` from a centered difference.
pub fn evolve_telegrapher<T: Real>(
    p: &[T],
    p_dot: &[T],
    params: &KacParams<T>,
    grid: &Grid1D<T>,
    dt: T,
    n_steps: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let n = grid.n();
    if p.len() != n || p_dot.len() != n {
        return Err(Error::GridMismatch(format!(
            "telegrapher arrays have lengths {}/{}, grid has {n}",
            p.len(),
            p_dot.len()
        )));
    }
    if !(dt > T::zero()) {
        return Err(invalid("dt", "must be positive"));
    }
    let c = params.c();
    if c * dt > grid.dx() * (T::one() + T::lit(1e-12)) {
        return Err(Error::UnstableStep(format!(
            "c*dt = {} exceeds dx = {}",
            c * dt,
            grid.dx()
        )));
    }
    if n_steps == 0 {
        return Ok((p.to_vec(), p_dot.to_vec()));
    }
    let lambda = params.lambda();
    let two = T::lit(2.0);
    let inv_dx2 = T::one() / (grid.dx() * grid.dx());
    let c2dt2 = c * c * dt * dt;
    let lead = T::one() / (T::one() + lambda * dt);
    let lag = T::one() - lambda * dt;

    let mut lap = vec![T::zero(); n];
    laplacian_into(p, inv_dx2, &mut lap);
    let mut prev = p.to_vec();
    let mut curr: Vec<T> = (0..n)
        .map(|i| p[i] + dt * p_dot[i] + dt * dt / two * (c * c * lap[i] - two * lambda * p_dot[i]))
        .collect();
    let mut next = vec![T::zero(); n];

    let advance = |prev: &[T], curr: &[T], next: &mut [T], lap: &mut [T]| {
        laplacian_into(curr, inv_dx2, lap);
        for i in 0..n {
            next[i] = (two * curr[i] - lag * prev[i] + c2dt2 * lap[i]) * lead;
        }
    };

    for _ in 1..n_steps {
        advance(&prev, &curr, &mut next, &mut lap);
        std::mem::swap(&mut prev, &mut curr);
        std::mem::swap(&mut curr, &mut next);
    }
    advance(&prev, &curr, &mut next, &mut lap);
    let rate: Vec<T> = (0..n).map(|i| (next[i] - prev[i]) / (two * dt)).collect();
    if curr.iter().chain(rate.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "telegrapher",
            step: n_steps,
        });
    }
    Ok((curr, rate))
}

/// Initial `P_t = -dJ/dx = -c d(p_plus - p_minus)/dx` (central differences).
pub fn initial_rate_from_sectors<T: Real>(field: &SectorProb1D<T>, c: T) -> Vec<T> {
    let j = field.current(c);
    let n = j.len();
    let h = T::lit(2.0) * field.grid().dx();
    (0..n)
        .map(|i| -(j[(i + 1) % n] - j[(i + n - 1) % n]) / h)
        .collect()
}

/// Growth rates `mu = -lambda +/- sqrt(lambda^2 - c^2 k^2)` of the mode
/// `e^{mu t + i k x}`. The first entry is the slower (`+`) branch.
pub fn mode_rates<T: Real>(params: &KacParams<T>, k: T) -> [Complex<T>; 2] {
    let l = params.lambda();
    let c = params.c();
    let disc = Complex::new(l * l - c * c * k * k, T::zero()).sqrt();
    let base = Complex::new(-l, T::zero());
    [base + disc, base - disc]
}

/// Max-norm residual of `P_tt + 2 lambda P_t - c^2 P_xx` evaluated with
/// centered differences on consecutive snapshots spaced by `dt`. Entry `j`
/// belongs to snapshot `j + 1`.
pub fn telegrapher_residual<T: Real>(
    snapshots: &[Vec<T>],
    params: &KacParams<T>,
    grid: &Grid1D<T>,
    dt: T,
) -> Vec<T> {
    let n = grid.n();
    let c = params.c();
    let lambda = params.lambda();
    let two = T::lit(2.0);
    let dx2 = grid.dx() * grid.dx();
    snapshots
        .windows(3)
        .map(|w| {
            let (a, b, f) = (&w[0], &w[1], &w[2]);
            (0..n)
                .map(|i| {
                    let ptt = (f[i] - two * b[i] + a[i]) / (dt * dt);
                    let pt = (f[i] - a[i]) / (two * dt);
                    let pxx = (b[(i + 1) % n] - two * b[i] + b[(i + n - 1) % n]) / dx2;
                    (ptt + two * lambda * pt - c * c * pxx).abs()
                })
                .fold(T::zero(), T::max)
        })
        .collect()
}
