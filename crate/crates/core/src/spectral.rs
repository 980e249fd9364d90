//! FFT plumbing: cached 1D/3D transforms and spectral calculus on periodic
//! grids. Inverse transforms are normalized so that `inverse(forward(f)) = f`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::grid::{Grid1D, Grid3D};
use crate::scalar::{czero, Real};

/// Forward/inverse plan pair for one transform length.
#[derive(Clone)]
pub struct Spectral1D<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Spectral1D<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral1D").field("n", &self.n).finish()
    }
}

impl<T: Real> Spectral1D<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.inverse.process(data);
        let scale = T::one() / T::lit(self.n as f64);
        for v in data.iter_mut() {
            *v = v.scale(scale);
        }
    }
}

fn to_complex<T: Real>(values: &[T]) -> Vec<Complex<T>> {
    values.iter().map(|&v| Complex::new(v, T::zero())).collect()
}

/// Spectral first derivative of a periodic complex field.
pub fn derivative_complex<T: Real>(values: &[Complex<T>], grid: &Grid1D<T>) -> Vec<Complex<T>> {
    let plan = Spectral1D::new(grid.n());
    let k = grid.derivative_wavenumbers();
    let mut buf = values.to_vec();
    plan.forward(&mut buf);
    for (c, &kk) in buf.iter_mut().zip(k.iter()) {
        *c = Complex::new(-c.im * kk, c.re * kk);
    }
    plan.inverse(&mut buf);
    buf
}

/// Spectral first derivative of a periodic real field.
pub fn derivative<T: Real>(values: &[T], grid: &Grid1D<T>) -> Vec<T> {
    derivative_complex(&to_complex(values), grid)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Spectral second derivative of a periodic complex field.
pub fn second_derivative_complex<T: Real>(
    values: &[Complex<T>],
    grid: &Grid1D<T>,
) -> Vec<Complex<T>> {
    let plan = Spectral1D::new(grid.n());
    let k = grid.wavenumbers();
    let mut buf = values.to_vec();
    plan.forward(&mut buf);
    for (c, &kk) in buf.iter_mut().zip(k.iter()) {
        *c = c.scale(-kk * kk);
    }
    plan.inverse(&mut buf);
    buf
}

/// Spectral second derivative of a periodic real field.
pub fn second_derivative<T: Real>(values: &[T], grid: &Grid1D<T>) -> Vec<T> {
    second_derivative_complex(&to_complex(values), grid)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Zero-mean periodic antiderivative of the zero-mean part of `values`.
/// The mean of `values` (the part that cannot be integrated periodically) is
/// returned alongside.
pub fn antiderivative<T: Real>(values: &[T], grid: &Grid1D<T>) -> (Vec<T>, T) {
    let plan = Spectral1D::new(grid.n());
    let k = grid.derivative_wavenumbers();
    let mut buf = to_complex(values);
    plan.forward(&mut buf);
    let mean = buf[0].re / T::lit(grid.n() as f64);
    for (c, &kk) in buf.iter_mut().zip(k.iter()) {
        if kk == T::zero() {
            *c = czero();
        } else {
            // divide by i k
            *c = Complex::new(c.im / kk, -c.re / kk);
        }
    }
    plan.inverse(&mut buf);
    (buf.into_iter().map(|c| c.re).collect(), mean)
}

/// Cached plans for separable 3D transforms.
#[derive(Clone, Debug)]
pub struct Spectral3D<T: Real> {
    grid: Grid3D<T>,
    axes: [Spectral1D<T>; 3],
}

impl<T: Real> Spectral3D<T> {
    pub fn new(grid: &Grid3D<T>) -> Self {
        let d = grid.dims();
        Self {
            grid: *grid,
            axes: [
                Spectral1D::new(d[0]),
                Spectral1D::new(d[1]),
                Spectral1D::new(d[2]),
            ],
        }
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, true);
    }

    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, false);
    }

    fn transform(&self, data: &mut [Complex<T>], forward: bool) {
        assert_eq!(data.len(), self.grid.len(), "3D buffer length mismatch");
        let [nx, ny, nz] = self.grid.dims();
        let run = |axis: usize, line: &mut [Complex<T>]| {
            if forward {
                self.axes[axis].forward(line)
            } else {
                self.axes[axis].inverse(line)
            }
        };
        // z: contiguous lines
        for line in data.chunks_exact_mut(nz) {
            run(2, line);
        }
        // y: stride nz
        let mut scratch = vec![czero(); ny.max(nx)];
        for ix in 0..nx {
            for iz in 0..nz {
                for iy in 0..ny {
                    scratch[iy] = data[(ix * ny + iy) * nz + iz];
                }
                run(1, &mut scratch[..ny]);
                for iy in 0..ny {
                    data[(ix * ny + iy) * nz + iz] = scratch[iy];
                }
            }
        }
        // x: stride ny * nz
        for iy in 0..ny {
            for iz in 0..nz {
                for ix in 0..nx {
                    scratch[ix] = data[(ix * ny + iy) * nz + iz];
                }
                run(0, &mut scratch[..nx]);
                for ix in 0..nx {
                    data[(ix * ny + iy) * nz + iz] = scratch[ix];
                }
            }
        }
    }

    /// Transforms each component of an array-of-vectors field.
    pub fn forward_components<const N: usize>(&self, field: &mut [[Complex<T>; N]]) {
        self.components(field, true)
    }

    pub fn inverse_components<const N: usize>(&self, field: &mut [[Complex<T>; N]]) {
        self.components(field, false)
    }

    fn components<const N: usize>(&self, field: &mut [[Complex<T>; N]], forward: bool) {
        let mut buf = vec![czero(); field.len()];
        for c in 0..N {
            for (b, v) in buf.iter_mut().zip(field.iter()) {
                *b = v[c];
            }
            self.transform(&mut buf, forward);
            for (v, b) in field.iter_mut().zip(buf.iter()) {
                v[c] = *b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn derivative_of_sine() {
        let g = Grid1D::<f64>::centered(64, std::f64::consts::TAU).unwrap();
        let f: Vec<f64> = g.coordinates().iter().map(|x| (3.0 * x).sin()).collect();
        let df = derivative(&f, &g);
        let d2f = second_derivative(&f, &g);
        for (i, x) in g.coordinates().iter().enumerate() {
            assert_abs_diff_eq!(df[i], 3.0 * (3.0 * x).cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(d2f[i], -9.0 * (3.0 * x).sin(), epsilon = 1e-11);
        }
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let g = Grid1D::<f64>::centered(32, 4.0).unwrap();
        let f: Vec<f64> = g
            .coordinates()
            .iter()
            .map(|x| (std::f64::consts::PI * x / 2.0).cos() + 0.3)
            .collect();
        let (f_int, mean) = antiderivative(&derivative(&f, &g), &g);
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-14);
        for i in 0..g.n() {
            assert_abs_diff_eq!(f_int[i], f[i] - 0.3, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_d_round_trip() {
        let g = Grid3D::<f64>::new([4, 6, 8], [1.0, 0.5, 0.25]).unwrap();
        let s = Spectral3D::new(&g);
        let orig: Vec<Complex<f64>> = (0..g.len())
            .map(|i| Complex::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut data = orig.clone();
        s.forward(&mut data);
        s.inverse(&mut data);
        for (a, b) in data.iter().zip(orig.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
