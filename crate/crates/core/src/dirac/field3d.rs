use num_complex::Complex;
use rayon::prelude::*;

use super::DiracParams;
use crate::error::{invalid, Error, Result};
use crate::grid::Grid3D;
use crate::scalar::{cis, czero, Real};
use crate::spectral::Spectral3D;

type Spinor<T> = [Complex<T>; 4];

/// Four-component chiral spinor `(psi_L, psi_R)` on a periodic 3D grid.
/// Components are stored per site as `[L0, L1, R0, R1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracSpinorField3D<T> {
    grid: Grid3D<T>,
    psi: Vec<Spinor<T>>,
    time: T,
}

impl<T: Real> DiracSpinorField3D<T> {
    pub fn new(grid: Grid3D<T>, psi: Vec<Spinor<T>>) -> Result<Self> {
        if psi.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "spinor field has {} sites, grid has {}",
                psi.len(),
                grid.len()
            )));
        }
        if psi
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("spinor", "amplitudes must be finite"));
        }
        Ok(Self {
            grid,
            psi,
            time: T::zero(),
        })
    }

    pub fn from_sectors(
        grid: Grid3D<T>,
        psi_l: &[[Complex<T>; 2]],
        psi_r: &[[Complex<T>; 2]],
    ) -> Result<Self> {
        if psi_l.len() != psi_r.len() {
            return Err(Error::GridMismatch(
                "chiral sectors differ in length".into(),
            ));
        }
        let psi = psi_l
            .iter()
            .zip(psi_r)
            .map(|(l, r)| [l[0], l[1], r[0], r[1]])
            .collect();
        Self::new(grid, psi)
    }

    /// `spinor * exp(i k.x)` with `k_a = 2 pi mode_a / L_a`.
    pub fn plane_wave(grid: Grid3D<T>, mode: [i64; 3], spinor: Spinor<T>) -> Result<Self> {
        let l = grid.lengths();
        let k = [0, 1, 2].map(|a| T::TAU() * T::lit(mode[a] as f64) / l[a]);
        let psi = (0..grid.len())
            .map(|idx| {
                let x = grid.position(idx);
                let ph = cis(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
                spinor.map(|s| s * ph)
            })
            .collect();
        Self::new(grid, psi)
    }

    pub fn grid(&self) -> &Grid3D<T> {
        &self.grid
    }

    pub fn spinors(&self) -> &[Spinor<T>] {
        &self.psi
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn psi_l(&self) -> Vec<[Complex<T>; 2]> {
        self.psi.iter().map(|s| [s[0], s[1]]).collect()
    }

    pub fn psi_r(&self) -> Vec<[Complex<T>; 2]> {
        self.psi.iter().map(|s| [s[2], s[3]]).collect()
    }

    /// `(int |psi_L|^2, int |psi_R|^2)`.
    pub fn sector_norms(&self) -> (T, T) {
        let dv = self.grid.cell_volume();
        let (l, r) = self.psi.iter().fold((T::zero(), T::zero()), |(l, r), s| {
            (
                l + s[0].norm_sqr() + s[1].norm_sqr(),
                r + s[2].norm_sqr() + s[3].norm_sqr(),
            )
        });
        (l * dv, r * dv)
    }

    pub fn norm(&self) -> T {
        let (l, r) = self.sector_norms();
        l + r
    }
}

/// `H(k) psi` with `H(k) = hbar c diag(-sigma.k, sigma.k) + mass_term beta`.
fn apply_h<T: Real>(k: [T; 3], hc: T, mt: T, v: &Spinor<T>) -> Spinor<T> {
    let i = Complex::new(T::zero(), T::one());
    let kp = Complex::new(k[0], T::zero()) + i * k[1];
    let km = Complex::new(k[0], T::zero()) - i * k[1];
    let k3 = Complex::new(k[2], T::zero());
    let sk = |a: Complex<T>, b: Complex<T>| [k3 * a + km * b, kp * a - k3 * b];
    let l = sk(v[0], v[1]);
    let r = sk(v[2], v[3]);
    [
        -l[0].scale(hc) + v[2].scale(mt),
        -l[1].scale(hc) + v[3].scale(mt),
        r[0].scale(hc) + v[0].scale(mt),
        r[1].scale(hc) + v[1].scale(mt),
    ]
}

fn energy<T: Real>(k: [T; 3], params: &DiracParams<T>) -> T {
    let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    super::dirac_dispersion(kk, params)
}

/// Normalized eigenvector of `H(k)` with eigenvalue `+E(k)`, obtained from
/// the projector `(1 + H/E)/2`.
pub fn positive_energy_spinor_3d<T: Real>(k: [T; 3], params: &DiracParams<T>) -> Spinor<T> {
    let e = energy(k, params);
    let mut basis = [czero::<T>(); 4];
    basis[0] = Complex::new(T::one(), T::zero());
    if e == T::zero() {
        return basis;
    }
    let hc = params.hbar() * params.c();
    let mt = params.mass_term();
    let half = T::lit(0.5);
    let mut best = basis;
    let mut best_norm = T::zero();
    for j in 0..4 {
        let mut b = [czero::<T>(); 4];
        b[j] = Complex::new(T::one(), T::zero());
        let hb = apply_h(k, hc, mt, &b);
        let v: Spinor<T> = [0, 1, 2, 3].map(|a| (b[a] + hb[a].unscale(e)).scale(half));
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if n > best_norm {
            best_norm = n;
            best = v;
        }
    }
    best.map(|z| z.unscale(best_norm))
}

/// `H psi` evaluated spectrally.
pub fn hamiltonian_3d_apply<T: Real>(
    field: &DiracSpinorField3D<T>,
    params: &DiracParams<T>,
) -> Vec<Spinor<T>> {
    let plan = Spectral3D::new(field.grid());
    let ks = field.grid().mode_vectors();
    let hc = params.hbar() * params.c();
    let mt = params.mass_term();
    let mut buf = field.psi.clone();
    plan.forward_components(&mut buf);
    buf.par_iter_mut()
        .zip(ks.par_iter())
        .for_each(|(v, &k)| *v = apply_h(k, hc, mt, v));
    plan.inverse_components(&mut buf);
    buf
}

/// Exact per-mode propagation: each Fourier mode is advanced by
/// `exp(-i H(k) dt / hbar) = cos(E dt/hbar) - i sin(E dt/hbar) H(k)/E`
/// once per step.
pub fn evolve_dirac_3d<T: Real>(
    field: &DiracSpinorField3D<T>,
    params: &DiracParams<T>,
    dt: T,
    n_steps: usize,
) -> Result<DiracSpinorField3D<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid("dt", "must be positive and finite"));
    }
    let plan = Spectral3D::new(field.grid());
    let ks = field.grid().mode_vectors();
    let hc = params.hbar() * params.c();
    let mt = params.mass_term();
    let tau = dt / params.hbar();
    let mut buf = field.psi.clone();
    plan.forward_components(&mut buf);
    buf.par_iter_mut().zip(ks.par_iter()).for_each(|(v, &k)| {
        let e = energy(k, params);
        if e == T::zero() {
            return;
        }
        let (s, c) = (e * tau).sin_cos();
        let coef = Complex::new(T::zero(), -s / e);
        for _ in 0..n_steps {
            let hv = apply_h(k, hc, mt, v);
            *v = [0, 1, 2, 3].map(|a| v[a].scale(c) + hv[a] * coef);
        }
    });
    plan.inverse_components(&mut buf);
    if buf
        .iter()
        .flatten()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite {
            context: "dirac3d",
            step: n_steps,
        });
    }
    Ok(DiracSpinorField3D {
        grid: field.grid,
        psi: buf,
        time: field.time + T::lit(n_steps as f64) * dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::ContinuationSign;

    #[test]
    fn h_squares_to_energy() {
        let p = DiracParams::new(0.7, 1.3, 0.9, ContinuationSign::Minus).unwrap();
        let k = [0.3, -1.1, 2.0];
        let e = energy(k, &p);
        let v: Spinor<f64> = [
            Complex::new(0.1, 0.2),
            Complex::new(-0.4, 0.3),
            Complex::new(0.5, -0.6),
            Complex::new(0.7, 0.8),
        ];
        let hc = p.hbar() * p.c();
        let hhv = apply_h(k, hc, p.mass_term(), &apply_h(k, hc, p.mass_term(), &v));
        for a in 0..4 {
            assert!((hhv[a] - v[a] * e * e).norm() < 1e-12);
        }
    }

    #[test]
    fn positive_spinor_eigen() {
        let p = DiracParams::natural(1.0).unwrap();
        let k = [0.0, 0.0, 1.0];
        let u = positive_energy_spinor_3d(k, &p);
        let hu = apply_h(k, 1.0, p.mass_term(), &u);
        for a in 0..4 {
            assert!((hu[a] - u[a] * 2f64.sqrt()).norm() < 1e-14);
        }
    }

    #[test]
    fn norm_conserved_small_grid() {
        let g = Grid3D::cube(8, std::f64::consts::TAU).unwrap();
        let p = DiracParams::natural(1.0).unwrap();
        let psi = (0..g.len())
            .map(|i| {
                let x = g.position(i);
                let a = (-(x[0] - 3.0).powi(2) - (x[1] - 3.0).powi(2)).exp();
                [
                    Complex::new(a, 0.0),
                    czero(),
                    Complex::new(0.0, a * x[2].sin()),
                    czero(),
                ]
            })
            .collect();
        let f = DiracSpinorField3D::new(g, psi).unwrap();
        let out = evolve_dirac_3d(&f, &p, 0.05, 100).unwrap();
        assert!((out.norm() / f.norm() - 1.0).abs() < 1e-12);
    }
}
