//! Periodic and radial grids.

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Uniform periodic 1D grid with sites at `origin + i * dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    n: usize,
    dx: T,
    origin: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(n: usize, dx: T, origin: T) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", format!("need at least 2 points, got {n}")));
        }
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(invalid(
                "dx",
                format!("must be positive and finite, got {dx}"),
            ));
        }
        if !origin.is_finite() {
            return Err(invalid("origin", "must be finite"));
        }
        Ok(Self { n, dx, origin })
    }

    /// Grid of `n` points covering `[-length/2, length/2)`.
    pub fn centered(n: usize, length: T) -> Result<Self> {
        if !(length > T::zero()) {
            return Err(invalid("length", "must be positive"));
        }
        let dx = length / T::lit(n as f64);
        Self::new(n, dx, -length / T::lit(2.0))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    #[inline]
    pub fn origin(&self) -> T {
        self.origin
    }

    #[inline]
    pub fn length(&self) -> T {
        self.dx * T::lit(self.n as f64)
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        self.origin + T::lit(i as f64) * self.dx
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Nearest site to `x`, wrapped periodically.
    pub fn nearest_index(&self, x: T) -> usize {
        let n = self.n as i64;
        let j = ((x - self.origin) / self.dx).round().to_i64().unwrap_or(0);
        j.rem_euclid(n) as usize
    }

    /// Angular wavenumbers in FFT order. The Nyquist entry (even `n`) is the
    /// negative band edge.
    pub fn wavenumbers(&self) -> Vec<T> {
        fft_wavenumbers(self.n, self.length(), false)
    }

    /// Wavenumbers for odd-order derivatives: identical to
    /// [`wavenumbers`](Self::wavenumbers) but with the Nyquist entry zeroed so
    /// that real fields stay real.
    pub fn derivative_wavenumbers(&self) -> Vec<T> {
        fft_wavenumbers(self.n, self.length(), true)
    }

    /// Same number of points and spacing; origins may differ by rounding.
    pub fn matches(&self, other: &Self) -> bool {
        let tol = T::lit(1e-12);
        self.n == other.n
            && (self.dx - other.dx).abs() <= tol * self.dx
            && (self.origin - other.origin).abs() <= tol * self.length().max(T::one())
    }
}

pub(crate) fn fft_wavenumbers<T: Real>(n: usize, length: T, zero_nyquist: bool) -> Vec<T> {
    let base = T::TAU() / length;
    (0..n)
        .map(|j| {
            if zero_nyquist && n.is_multiple_of(2) && j == n / 2 {
                T::zero()
            } else if j <= (n - 1) / 2 {
                base * T::lit(j as f64)
            } else {
                base * (T::lit(j as f64) - T::lit(n as f64))
            }
        })
        .collect()
}

/// Uniform periodic 3D grid. Site `(ix, iy, iz)` is stored at
/// `(ix * ny + iy) * nz + iz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3D<T> {
    dims: [usize; 3],
    spacing: [T; 3],
}

impl<T: Real> Grid3D<T> {
    pub fn new(dims: [usize; 3], spacing: [T; 3]) -> Result<Self> {
        for (d, s) in dims.iter().zip(spacing.iter()) {
            if *d < 2 {
                return Err(invalid(
                    "dims",
                    format!("every dimension needs >= 2 points, got {d}"),
                ));
            }
            if !(*s > T::zero()) || !s.is_finite() {
                return Err(invalid("spacing", "must be positive and finite"));
            }
        }
        Ok(Self { dims, spacing })
    }

    /// Cube of side `length` with `n` points per axis.
    pub fn cube(n: usize, length: T) -> Result<Self> {
        let d = length / T::lit(n as f64);
        Self::new([n; 3], [d; 3])
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn spacing(&self) -> [T; 3] {
        self.spacing
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell_volume(&self) -> T {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    pub fn lengths(&self) -> [T; 3] {
        [0, 1, 2].map(|a| self.spacing[a] * T::lit(self.dims[a] as f64))
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.dims[1] + iy) * self.dims[2] + iz
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> [usize; 3] {
        let iz = idx % self.dims[2];
        let rest = idx / self.dims[2];
        [rest / self.dims[1], rest % self.dims[1], iz]
    }

    /// Position of a site; the grid origin is at zero.
    pub fn position(&self, idx: usize) -> [T; 3] {
        let i = self.unindex(idx);
        [0, 1, 2].map(|a| T::lit(i[a] as f64) * self.spacing[a])
    }

    /// Per-axis derivative wavenumbers (Nyquist zeroed).
    pub fn derivative_wavenumbers(&self) -> [Vec<T>; 3] {
        let l = self.lengths();
        [0, 1, 2].map(|a| fft_wavenumbers(self.dims[a], l[a], true))
    }

    /// Wavevector of every mode in storage order.
    pub fn mode_vectors(&self) -> Vec<[T; 3]> {
        let k = self.derivative_wavenumbers();
        (0..self.len())
            .map(|idx| {
                let i = self.unindex(idx);
                [k[0][i[0]], k[1][i[1]], k[2][i[2]]]
            })
            .collect()
    }
}

/// Open (non-periodic) radial grid `r_i = r_min + i * dr`, used for
/// spherically symmetric profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T> {
    n: usize,
    r_min: T,
    dr: T,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(n: usize, r_min: T, dr: T) -> Result<Self> {
        if n < 8 {
            return Err(invalid("n", "radial grid needs at least 8 points"));
        }
        if !(r_min > T::zero()) {
            return Err(invalid("r_min", "must be strictly positive"));
        }
        if !(dr > T::zero()) {
            return Err(invalid("dr", "must be positive"));
        }
        Ok(Self { n, r_min, dr })
    }

    /// `n` points spanning `[r_min, r_max]` inclusive.
    pub fn spanning(n: usize, r_min: T, r_max: T) -> Result<Self> {
        if !(r_max > r_min) {
            return Err(invalid("r_max", "must exceed r_min"));
        }
        let dr = (r_max - r_min) / T::lit((n.max(2) - 1) as f64);
        Self::new(n, r_min, dr)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dr(&self) -> T {
        self.dr
    }

    #[inline]
    pub fn r(&self, i: usize) -> T {
        self.r_min + T::lit(i as f64) * self.dr
    }

    pub fn coordinates(&self) -> Vec<T> {
        (0..self.n).map(|i| self.r(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_follow_fft_order() {
        let g = Grid1D::<f64>::new(8, 0.25, 0.0).unwrap();
        let k = g.wavenumbers();
        let base = std::f64::consts::TAU / 2.0;
        assert_eq!(k[1], base);
        assert_eq!(k[3], 3.0 * base);
        assert_eq!(k[4], -4.0 * base);
        assert_eq!(k[7], -base);
        assert_eq!(g.derivative_wavenumbers()[4], 0.0);
    }

    #[test]
    fn nearest_index_wraps() {
        let g = Grid1D::<f64>::new(10, 1.0, -5.0).unwrap();
        assert_eq!(g.nearest_index(-5.0), 0);
        assert_eq!(g.nearest_index(4.4), 9);
        assert_eq!(g.nearest_index(5.0), 0);
        assert_eq!(g.nearest_index(-5.6), 9);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::<f64>::new(1, 1.0, 0.0).is_err());
        assert!(Grid1D::<f64>::new(4, 0.0, 0.0).is_err());
        assert!(Grid3D::<f64>::new([4, 1, 4], [1.0; 3]).is_err());
        assert!(RadialGrid::<f64>::new(16, 0.0, 0.1).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = Grid3D::<f32>::new([3, 4, 5], [1.0; 3]).unwrap();
        for idx in 0..g.len() {
            let [a, b, c] = g.unindex(idx);
            assert_eq!(g.index(a, b, c), idx);
        }
    }
}
