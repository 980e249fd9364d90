use num_complex::Complex;

use super::KacParams;
use crate::error::{invalid, Error, Result};
use crate::grid::Grid1D;
use crate::linalg::Mat2;
use crate::scalar::Real;

/// Right- and left-mover probability densities on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorProb1D<T> {
    grid: Grid1D<T>,
    p_plus: Vec<T>,
    p_minus: Vec<T>,
}

impl<T: Real> SectorProb1D<T> {
    pub fn new(grid: Grid1D<T>, p_plus: Vec<T>, p_minus: Vec<T>) -> Result<Self> {
        if p_plus.len() != grid.n() || p_minus.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "sector arrays have lengths {}/{}, grid has {} points",
                p_plus.len(),
                p_minus.len(),
                grid.n()
            )));
        }
        if p_plus
            .iter()
            .chain(p_minus.iter())
            .any(|&p| !(p >= T::zero()) || !p.is_finite())
        {
            return Err(invalid(
                "probability",
                "sector densities must be finite and >= 0",
            ));
        }
        Ok(Self {
            grid,
            p_plus,
            p_minus,
        })
    }

    /// Unit mass concentrated on one site of one sector.
    pub fn delta(grid: Grid1D<T>, site: usize, right_moving: bool) -> Result<Self> {
        if site >= grid.n() {
            return Err(invalid(
                "site",
                format!("{site} outside grid of {} points", grid.n()),
            ));
        }
        let mut p = vec![T::zero(); grid.n()];
        p[site] = T::one() / grid.dx();
        let z = vec![T::zero(); grid.n()];
        if right_moving {
            Self::new(grid, p, z)
        } else {
            Self::new(grid, z, p)
        }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn p_plus(&self) -> &[T] {
        &self.p_plus
    }

    pub fn p_minus(&self) -> &[T] {
        &self.p_minus
    }

    /// Total density `P = p_plus + p_minus`.
    pub fn total(&self) -> Vec<T> {
        self.p_plus
            .iter()
            .zip(&self.p_minus)
            .map(|(&a, &b)| a + b)
            .collect()
    }

    /// Probability current `J = c (p_plus - p_minus)`.
    pub fn current(&self, c: T) -> Vec<T> {
        self.p_plus
            .iter()
            .zip(&self.p_minus)
            .map(|(&a, &b)| c * (a - b))
            .collect()
    }

    /// `(sum p_plus dx, sum p_minus dx)`.
    pub fn sector_masses(&self) -> (T, T) {
        let dx = self.grid.dx();
        (
            self.p_plus.iter().copied().sum::<T>() * dx,
            self.p_minus.iter().copied().sum::<T>() * dx,
        )
    }

    pub fn total_mass(&self) -> T {
        let (a, b) = self.sector_masses();
        a + b
    }

    /// Total probability mass in consecutive blocks of `block` sites. The
    /// final block may be shorter.
    pub fn block_masses(&self, block: usize) -> Vec<T> {
        let block = block.max(1);
        let dx = self.grid.dx();
        self.total()
            .chunks(block)
            .map(|c| c.iter().copied().sum::<T>() * dx)
            .collect()
    }
}

/// L1 distance between two equally long mass vectors.
pub fn l1_distance<T: Real>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len(), "l1_distance needs equal lengths");
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum()
}

/// Diagonal and off-diagonal weights `(e^{-r} cosh r, e^{-r} sinh r)` of the
/// switching semigroup `exp(dt lambda (sigma1 - 1))`, with `r = lambda dt`.
pub fn switching_weights<T: Real>(lambda: T, dt: T) -> (T, T) {
    let off = -(-T::lit(2.0) * lambda * dt).exp_m1() / T::lit(2.0);
    (T::one() - off, off)
}

/// The switching semigroup `exp(dt rate (sigma1 - 1))` for a possibly
/// complex rate. With `keep_survival = false` the scalar Poisson survival
/// factor `e^{-rate dt}` is dropped, leaving `cosh(rate dt) + sinh(rate dt) sigma1`.
pub fn switching_matrix<T: Real>(rate: Complex<T>, dt: T, keep_survival: bool) -> Mat2<T> {
    let z = rate * dt;
    if keep_survival {
        let two = T::lit(2.0);
        let decay = (-z * two).exp();
        let one = Complex::new(T::one(), T::zero());
        let stay = (one + decay) / two;
        let flip = (one - decay) / two;
        Mat2::new(stay, flip, flip, stay)
    } else {
        let ch = z.cosh();
        let sh = z.sinh();
        Mat2::new(ch, sh, sh, ch)
    }
}

/// Advances the sector densities on the unit-CFL lattice `dt = dx / c`:
/// each step shifts `p_plus` one cell right and `p_minus` one cell left, then
/// applies the exact two-state switching semigroup at every site.
pub fn evolve_master<T: Real>(
    field: &SectorProb1D<T>,
    params: &KacParams<T>,
    dt: T,
    n_steps: usize,
) -> Result<SectorProb1D<T>> {
    run_lattice(field, params, dt, n_steps, false)
}

/// Same lattice scheme with the switching split symmetrically around the
/// shift (half switch, shift, half switch). Site totals differ from
/// [`evolve_master`] only through the first half switch, which centres the
/// switching clock on each transport step and removes the `O(dx)` lag of the
/// shift-then-switch ordering relative to the continuous-time process.
pub fn evolve_master_symmetric<T: Real>(
    field: &SectorProb1D<T>,
    params: &KacParams<T>,
    dt: T,
    n_steps: usize,
) -> Result<SectorProb1D<T>> {
    run_lattice(field, params, dt, n_steps, true)
}

fn run_lattice<T: Real>(
    field: &SectorProb1D<T>,
    params: &KacParams<T>,
    dt: T,
    n_steps: usize,
    symmetric: bool,
) -> Result<SectorProb1D<T>> {
    let grid = *field.grid();
    let lattice_dt = grid.dx() / params.c();
    if !((dt - lattice_dt).abs() <= T::lit(1e-12) * lattice_dt) {
        return Err(invalid(
            "dt",
            format!("lattice scheme requires dt = dx/c = {lattice_dt}, got {dt}"),
        ));
    }
    // switching written as an exchange of flip * (a - b) so that rounding in
    // stay + flip never biases the total mass
    let (_, flip) = switching_weights(params.lambda(), dt);
    let (_, h_flip) = switching_weights(params.lambda(), dt / T::lit(2.0));
    let n = grid.n();
    let mut plus = field.p_plus.clone();
    let mut minus = field.p_minus.clone();
    let mut next_plus = vec![T::zero(); n];
    let mut next_minus = vec![T::zero(); n];
    let half_switch = |plus: &mut [T], minus: &mut [T]| {
        for i in 0..n {
            let d = h_flip * (plus[i] - minus[i]);
            plus[i] = plus[i] - d;
            minus[i] = minus[i] + d;
        }
    };
    let f = if symmetric { h_flip } else { flip };
    for _ in 0..n_steps {
        if symmetric {
            half_switch(&mut plus, &mut minus);
        }
        for i in 0..n {
            let from_left = plus[(i + n - 1) % n];
            let from_right = minus[(i + 1) % n];
            let d = f * (from_left - from_right);
            next_plus[i] = from_left - d;
            next_minus[i] = from_right + d;
        }
        std::mem::swap(&mut plus, &mut next_plus);
        std::mem::swap(&mut minus, &mut next_minus);
    }
    SectorProb1D::new(grid, plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D<f64> {
        Grid1D::new(64, 0.1, -3.2).unwrap()
    }

    #[test]
    fn pure_transport_shifts_delta() {
        let g = grid();
        let p = KacParams::new(1.0, 0.0).unwrap();
        let f = SectorProb1D::delta(g, 10, true).unwrap();
        let out = evolve_master(&f, &p, 0.1, 5).unwrap();
        assert_eq!(out.p_plus()[15], 1.0 / 0.1);
        assert!(out.p_minus().iter().all(|&v| v == 0.0));
        assert_eq!(out.p_plus().iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn rejects_off_lattice_dt() {
        let g = grid();
        let p = KacParams::new(1.0, 1.0).unwrap();
        let f = SectorProb1D::delta(g, 10, true).unwrap();
        assert!(evolve_master(&f, &p, 0.05, 1).is_err());
        assert!(evolve_master(&f, &p, 0.1 * (1.0 + 1e-13), 1).is_ok());
    }

    #[test]
    fn rejects_negative_density() {
        let g = grid();
        let mut v = vec![0.0; 64];
        v[3] = -1.0;
        assert!(SectorProb1D::new(g, v, vec![0.0; 64]).is_err());
    }

    #[test]
    fn one_sector_start_leaks_into_other_sector() {
        let g = grid();
        let p = KacParams::new(1.0, 2.0).unwrap();
        let f = SectorProb1D::delta(g, 30, true).unwrap();
        let out = evolve_master(&f, &p, 0.1, 1).unwrap();
        let (before, _) = f.sector_masses();
        let (after, other) = out.sector_masses();
        assert!(after < before);
        assert!(other > 0.0);
        assert!((out.total_mass() - f.total_mass()).abs() <= 1e-15);
    }

    #[test]
    fn switching_weights_sum_to_one() {
        for &(l, dt) in &[(0.0, 0.1), (1.0, 0.01), (1e3, 1.0), (1e-9, 1e-3)] {
            let (a, b) = switching_weights::<f64>(l, dt);
            assert!((a + b - 1.0).abs() <= 1e-16);
            let m = switching_matrix(Complex::new(l, 0.0), dt, true);
            assert!((m.m[0][0].re - a).abs() < 1e-14 && (m.m[0][1].re - b).abs() < 1e-14);
        }
    }
}
