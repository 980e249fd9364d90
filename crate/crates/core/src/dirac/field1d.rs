use num_complex::Complex;

use super::{dirac_dispersion, DiracParams};
use crate::error::{invalid, Error, Result};
use crate::gauge::GaugePotential;
use crate::grid::Grid1D;
use crate::linalg::Mat2;
use crate::scalar::{cis, czero, Real};
use crate::spectral::{antiderivative, derivative_complex, Spectral1D};

/// Two sector amplitudes `(phi_plus, phi_minus)` on a periodic 1D grid,
/// stamped with the time they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylSpinorField1D<T> {
    grid: Grid1D<T>,
    phi_plus: Vec<Complex<T>>,
    phi_minus: Vec<Complex<T>>,
    time: T,
}

impl<T: Real> WeylSpinorField1D<T> {
    pub fn new(
        grid: Grid1D<T>,
        phi_plus: Vec<Complex<T>>,
        phi_minus: Vec<Complex<T>>,
    ) -> Result<Self> {
        if phi_plus.len() != grid.n() || phi_minus.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "spinor components have lengths {}/{}, grid has {}",
                phi_plus.len(),
                phi_minus.len(),
                grid.n()
            )));
        }
        if phi_plus
            .iter()
            .chain(phi_minus.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("spinor", "amplitudes must be finite"));
        }
        Ok(Self {
            grid,
            phi_plus,
            phi_minus,
            time: T::zero(),
        })
    }

    /// `spinor * exp(i k x)` with `k = 2 pi mode / L`.
    pub fn plane_wave(grid: Grid1D<T>, mode: i64, spinor: [Complex<T>; 2]) -> Result<Self> {
        let k = T::TAU() * T::lit(mode as f64) / grid.length();
        let (p, m): (Vec<_>, Vec<_>) = grid
            .coordinates()
            .into_iter()
            .map(|x| {
                let ph = cis(k * x);
                (spinor[0] * ph, spinor[1] * ph)
            })
            .unzip();
        Self::new(grid, p, m)
    }

    /// Normalized packet `spinor * exp(-(x - x0)^2 / (4 sigma^2) + i k0 x)`,
    /// so that the density has standard deviation `sigma`.
    pub fn gaussian(
        grid: Grid1D<T>,
        x0: T,
        sigma: T,
        k0: T,
        spinor: [Complex<T>; 2],
    ) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(invalid("sigma", "packet width must be positive"));
        }
        let four = T::lit(4.0);
        let (p, m): (Vec<_>, Vec<_>) = grid
            .coordinates()
            .into_iter()
            .map(|x| {
                let d = x - x0;
                let env = (-(d * d) / (four * sigma * sigma)).exp();
                let ph = cis(k0 * x).scale(env);
                (spinor[0] * ph, spinor[1] * ph)
            })
            .unzip();
        Self::new(grid, p, m)?.normalized()
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn phi_plus(&self) -> &[Complex<T>] {
        &self.phi_plus
    }

    pub fn phi_minus(&self) -> &[Complex<T>] {
        &self.phi_minus
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn with_time(mut self, time: T) -> Self {
        self.time = time;
        self
    }

    /// `sum (|phi_plus|^2 + |phi_minus|^2) dx`.
    pub fn norm(&self) -> T {
        let s: T = self
            .phi_plus
            .iter()
            .chain(self.phi_minus.iter())
            .map(|z| z.norm_sqr())
            .sum();
        s * self.grid.dx()
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::zero()) {
            return Err(Error::Degenerate(
                "cannot normalize a zero spinor field".into(),
            ));
        }
        Ok(self.scaled(Complex::new(T::one() / n.sqrt(), T::zero())))
    }

    pub fn scaled(mut self, s: Complex<T>) -> Self {
        for z in self.phi_plus.iter_mut().chain(self.phi_minus.iter_mut()) {
            *z = *z * s;
        }
        self
    }

    /// Site-wise `|phi_plus|^2`, `|phi_minus|^2`.
    pub fn populations(&self) -> (Vec<T>, Vec<T>) {
        (
            self.phi_plus.iter().map(|z| z.norm_sqr()).collect(),
            self.phi_minus.iter().map(|z| z.norm_sqr()).collect(),
        )
    }

    /// Applies a site-dependent 2x2 matrix.
    pub fn map_sites(mut self, f: impl Fn(usize, [Complex<T>; 2]) -> [Complex<T>; 2]) -> Self {
        for i in 0..self.grid.n() {
            let [a, b] = f(i, [self.phi_plus[i], self.phi_minus[i]]);
            self.phi_plus[i] = a;
            self.phi_minus[i] = b;
        }
        self
    }

    fn all_finite(&self) -> bool {
        self.phi_plus
            .iter()
            .chain(self.phi_minus.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Charge and prescribed potential seen by one species.
#[derive(Clone, Copy)]
pub struct Coupling<'a, T: Real> {
    pub potential: &'a dyn GaugePotential<T>,
    pub charge: T,
}

/// Site-local propagator `exp(-i (mass_term) sigma1 dt / hbar)` of the
/// mass term.
pub fn mass_step_matrix<T: Real>(params: &DiracParams<T>, dt: T) -> Mat2<T> {
    let theta = params.mass_term() * dt / params.hbar();
    let cos = Complex::new(theta.cos(), T::zero());
    let isin = Complex::new(T::zero(), -theta.sin());
    Mat2::new(cos, isin, isin, cos)
}

/// Reattaches the Poisson survival factor `e^{-lambda t}` that the tilde
/// field omits.
pub fn reattach_survival<T: Real>(
    field: &WeylSpinorField1D<T>,
    lambda: T,
    t: T,
) -> WeylSpinorField1D<T> {
    field
        .clone()
        .scaled(Complex::new((-lambda * t).exp(), T::zero()))
}

/// Normalized eigenvector of `H(k) = hbar c k sigma3 + mass_term sigma1`
/// with eigenvalue `+E(k)`.
pub fn positive_energy_spinor_1d<T: Real>(k: T, params: &DiracParams<T>) -> [Complex<T>; 2] {
    let p = params.hbar() * params.c() * k;
    let m = params.mass_term();
    let e = dirac_dispersion(k, params);
    let a = [m, e - p];
    let b = [e + p, m];
    let na = a[0].hypot(a[1]);
    let nb = b[0].hypot(b[1]);
    let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
    if n == T::zero() {
        return [Complex::new(T::one(), T::zero()), czero()];
    }
    [
        Complex::new(v[0] / n, T::zero()),
        Complex::new(v[1] / n, T::zero()),
    ]
}

/// `d_t psi = -(i/hbar) H psi` for the free Hamiltonian, with a spectral
/// spatial derivative.
pub fn hamiltonian_apply_1d<T: Real>(
    field: &WeylSpinorField1D<T>,
    params: &DiracParams<T>,
) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let c = params.c();
    let mt = params.mass_term() / params.hbar();
    let dp = derivative_complex(field.phi_plus(), field.grid());
    let dm = derivative_complex(field.phi_minus(), field.grid());
    let i = Complex::new(T::zero(), T::one());
    let n = field.grid().n();
    let mut out_p = Vec::with_capacity(n);
    let mut out_m = Vec::with_capacity(n);
    for j in 0..n {
        out_p.push(-dp[j].scale(c) - i * field.phi_minus()[j].scale(mt));
        out_m.push(dm[j].scale(c) - i * field.phi_plus()[j].scale(mt));
    }
    (out_p, out_m)
}

struct KineticCache<T: Real> {
    /// position-space phase `e^{-i e chi}` applied before the transform
    gauge_phase: Option<Vec<Complex<T>>>,
    plus: Vec<Complex<T>>,
    minus: Vec<Complex<T>>,
}

fn kinetic_cache<T: Real>(
    k: &[T],
    c: T,
    dt: T,
    coupling: Option<(&[T], T)>,
    grid: &Grid1D<T>,
) -> KineticCache<T> {
    let (gauge_phase, shift) = match coupling {
        Some((ax, charge)) => {
            let (chi, mean) = antiderivative(ax, grid);
            let ph = chi.iter().map(|&x| cis(-charge * x)).collect();
            (Some(ph), charge * mean)
        }
        None => (None, T::zero()),
    };
    let plus = k.iter().map(|&kk| cis(-c * (kk - shift) * dt)).collect();
    let minus = k.iter().map(|&kk| cis(c * (kk - shift) * dt)).collect();
    KineticCache {
        gauge_phase,
        plus,
        minus,
    }
}

/// Strang split-step propagation of the 1D Dirac equation.
///
/// Each step applies half a step of the site-local factor (scalar potential
/// phase and mass matrix), a full covariant kinetic step, then the second
/// half of the local factor. The kinetic step uses the spatial mean of
/// `A_x` as an exact momentum shift `k -> k - e <A_x>` and the remainder as
/// the position-space conjugation `e^{i e chi} K e^{-i e chi}` with
/// `d chi/dx = A_x - <A_x>`, so every factor is unitary. Scalar potentials
/// enter through their exact time integral over each half step; `A_x` is
/// sampled at the step midpoint.
pub fn evolve_dirac_1d<T: Real>(
    field: &WeylSpinorField1D<T>,
    params: &DiracParams<T>,
    coupling: Option<Coupling<'_, T>>,
    dt: T,
    n_steps: usize,
) -> Result<WeylSpinorField1D<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid("dt", "must be positive and finite"));
    }
    let grid = *field.grid();
    if let Some(cp) = &coupling {
        if !cp.potential.grid().matches(&grid) {
            return Err(Error::GridMismatch(
                "gauge potential and spinor grids differ".into(),
            ));
        }
        if !cp.charge.is_finite() {
            return Err(invalid("charge", "must be finite"));
        }
    }
    let n = grid.n();
    let c = params.c();
    let half = dt / T::lit(2.0);
    let mass_half = mass_step_matrix(params, half);
    let plan = Spectral1D::new(n);
    let k = grid.derivative_wavenumbers();

    let static_cache = match &coupling {
        None => Some(kinetic_cache(&k, c, dt, None, &grid)),
        Some(cp) if cp.potential.is_static() => {
            let ax = cp.potential.ax(field.time());
            Some(kinetic_cache(&k, c, dt, Some((&ax, cp.charge)), &grid))
        }
        Some(_) => None,
    };

    let mut plus = field.phi_plus.clone();
    let mut minus = field.phi_minus.clone();

    let local = |plus: &mut [Complex<T>], minus: &mut [Complex<T>], t0: T, t1: T| {
        if let Some(cp) = &coupling {
            let integral = cp.potential.a0_integral(t0, t1);
            for i in 0..n {
                let ph = cis(-cp.charge * integral[i]);
                plus[i] = plus[i] * ph;
                minus[i] = minus[i] * ph;
            }
        }
        for i in 0..n {
            let [a, b] = mass_half.apply([plus[i], minus[i]]);
            plus[i] = a;
            minus[i] = b;
        }
    };

    let kinetic =
        |plus: &mut Vec<Complex<T>>, minus: &mut Vec<Complex<T>>, cache: &KineticCache<T>| {
            if let Some(ph) = &cache.gauge_phase {
                for i in 0..n {
                    plus[i] = plus[i] * ph[i];
                    minus[i] = minus[i] * ph[i];
                }
            }
            plan.forward(plus);
            plan.forward(minus);
            for i in 0..n {
                plus[i] = plus[i] * cache.plus[i];
                minus[i] = minus[i] * cache.minus[i];
            }
            plan.inverse(plus);
            plan.inverse(minus);
            if let Some(ph) = &cache.gauge_phase {
                for i in 0..n {
                    plus[i] = plus[i] * ph[i].conj();
                    minus[i] = minus[i] * ph[i].conj();
                }
            }
        };

    for step in 0..n_steps {
        let t0 = field.time + T::lit(step as f64) * dt;
        let tm = t0 + half;
        let t1 = t0 + dt;
        local(&mut plus, &mut minus, t0, tm);
        match &static_cache {
            Some(cache) => kinetic(&mut plus, &mut minus, cache),
            None => {
                let cp = coupling.as_ref().expect("dynamic cache implies coupling");
                let ax = cp.potential.ax(tm);
                let cache = kinetic_cache(&k, c, dt, Some((&ax, cp.charge)), &grid);
                kinetic(&mut plus, &mut minus, &cache);
            }
        }
        local(&mut plus, &mut minus, tm, t1);
        if (step + 1) % 256 == 0 || step + 1 == n_steps {
            let bad = plus
                .iter()
                .chain(minus.iter())
                .any(|z| !z.re.is_finite() || !z.im.is_finite());
            if bad {
                return Err(Error::NonFinite {
                    context: "dirac1d",
                    step: step + 1,
                });
            }
        }
    }
    let out = WeylSpinorField1D {
        grid,
        phi_plus: plus,
        phi_minus: minus,
        time: field.time + T::lit(n_steps as f64) * dt,
    };
    debug_assert!(out.all_finite());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::ContinuationSign;

    fn one() -> Complex<f64> {
        Complex::new(1.0, 0.0)
    }

    #[test]
    fn rest_frame_rabi_oscillation() {
        let g = Grid1D::centered(8, 1.0).unwrap();
        let p = DiracParams::natural(1.0).unwrap();
        let f = WeylSpinorField1D::new(g, vec![one(); 8], vec![czero(); 8]).unwrap();
        let dt = 1e-3;
        let out = evolve_dirac_1d(&f, &p, None, dt, 700).unwrap();
        let t = out.time();
        let (pp, _) = out.populations();
        assert!((pp[3] - t.cos().powi(2)).abs() < 1e-12);
        // full return at t = pi
        let n = (std::f64::consts::PI / dt).round() as usize;
        let back = evolve_dirac_1d(&f, &p, None, std::f64::consts::PI / n as f64, n).unwrap();
        assert!((back.populations().0[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_energy_spinor_is_eigenvector() {
        for &(m, k) in &[(1.0, 0.0), (0.5, 2.0), (0.0, -3.0), (2.0, -1.5)] {
            for sign in [ContinuationSign::Plus, ContinuationSign::Minus] {
                let p = DiracParams::new(m, 1.0, 1.0, sign).unwrap();
                let u = positive_energy_spinor_1d(k, &p);
                let h = Mat2::from_real(k, p.mass_term(), p.mass_term(), -k);
                let hu = h.apply(u);
                let e = dirac_dispersion(k, &p);
                assert!((hu[0] - u[0] * e).norm() < 1e-14);
                assert!((hu[1] - u[1] * e).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_step() {
        let g = Grid1D::centered(8, 1.0).unwrap();
        let p = DiracParams::natural(1.0).unwrap();
        let f = WeylSpinorField1D::new(g, vec![one(); 8], vec![czero(); 8]).unwrap();
        assert!(evolve_dirac_1d(&f, &p, None, 0.0, 1).is_err());
    }

    #[test]
    fn nan_input_rejected() {
        let g = Grid1D::centered(4, 1.0).unwrap();
        let bad = vec![Complex::new(f64::NAN, 0.0); 4];
        assert!(WeylSpinorField1D::new(g, bad, vec![czero(); 4]).is_err());
    }
}
