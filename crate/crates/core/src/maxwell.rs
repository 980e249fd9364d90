//! Vacuum electrodynamics in Riemann-Silberstein form.
//!
//! `F+ = E + iB` and `F- = E - iB` obey `i d_t F+- = +-c curl F+-`. In Fourier
//! space `curl -> s.k` with the spin-1 matrices `(s_i)_jk = -i eps_ijk`, so
//! each mode evolves as `F+-(k, t) = exp(-+ i c (s.k) t) F+-(k, 0)`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::grid::Grid3D;
use crate::scalar::{cis, czero, Real};
use crate::spectral::Spectral3D;

pub type Vec3<T> = [Complex<T>; 3];

/// The spin-1 matrices `(s_i)_jk = -i eps_ijk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin1Matrices<T> {
    pub s: [[[Complex<T>; 3]; 3]; 3],
}

fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    if i == j || j == k || i == k {
        0
    } else if (i, j, k) == (0, 1, 2) || (i, j, k) == (1, 2, 0) || (i, j, k) == (2, 0, 1) {
        1
    } else {
        -1
    }
}

impl<T: Real> Spin1Matrices<T> {
    pub fn new() -> Self {
        let mut s = [[[czero::<T>(); 3]; 3]; 3];
        for (i, si) in s.iter_mut().enumerate() {
            for (j, row) in si.iter_mut().enumerate() {
                for (k, v) in row.iter_mut().enumerate() {
                    *v = Complex::new(T::zero(), -T::lit(levi_civita(i, j, k) as f64));
                }
            }
        }
        Self { s }
    }

    /// `(s.k) v`.
    pub fn dot_apply(&self, k: [T; 3], v: Vec3<T>) -> Vec3<T> {
        let mut out = [czero::<T>(); 3];
        for (i, &ki) in k.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                for (l, &vl) in v.iter().enumerate() {
                    *o = *o + self.s[i][j][l] * vl.scale(ki);
                }
            }
        }
        out
    }

    /// Largest entry of `[s_i, s_j] - i eps_ijk s_k` over all index pairs.
    pub fn algebra_residual(&self) -> T {
        let mul = |a: &[[Complex<T>; 3]; 3], b: &[[Complex<T>; 3]; 3]| {
            let mut c = [[czero::<T>(); 3]; 3];
            for r in 0..3 {
                for col in 0..3 {
                    for m in 0..3 {
                        c[r][col] = c[r][col] + a[r][m] * b[m][col];
                    }
                }
            }
            c
        };
        let i = Complex::new(T::zero(), T::one());
        let mut worst = T::zero();
        for a in 0..3 {
            for b in 0..3 {
                let ab = mul(&self.s[a], &self.s[b]);
                let ba = mul(&self.s[b], &self.s[a]);
                for r in 0..3 {
                    for col in 0..3 {
                        let mut rhs = czero::<T>();
                        for k in 0..3 {
                            rhs = rhs
                                + i * self.s[k][r][col].scale(T::lit(levi_civita(a, b, k) as f64));
                        }
                        worst = worst.max((ab[r][col] - ba[r][col] - rhs).norm());
                    }
                }
            }
        }
        worst
    }
}

impl<T: Real> Default for Spin1Matrices<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn cross<T: Real>(a: [T; 3], v: Vec3<T>) -> Vec3<T> {
    [
        v[2].scale(a[1]) - v[1].scale(a[2]),
        v[0].scale(a[2]) - v[2].scale(a[0]),
        v[1].scale(a[0]) - v[0].scale(a[1]),
    ]
}

fn kdot<T: Real>(k: [T; 3], v: &Vec3<T>) -> Complex<T> {
    v[0].scale(k[0]) + v[1].scale(k[1]) + v[2].scale(k[2])
}

fn knorm<T: Real>(k: [T; 3]) -> T {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

/// Unit eigenvector of `s.k_hat` with eigenvalue `helicity = +-1`.
pub fn helicity_eigenvector<T: Real>(k: [T; 3], helicity: i32) -> Result<Vec3<T>> {
    let n = knorm(k);
    if n == T::zero() {
        return Err(invalid("k", "helicity is undefined at k = 0"));
    }
    if helicity != 1 && helicity != -1 {
        return Err(invalid("helicity", "must be +1 or -1"));
    }
    let kh = k.map(|v| v / n);
    // any unit vector orthogonal to k_hat
    let seed = if kh[0].abs() < T::lit(0.9) {
        [T::one(), T::zero(), T::zero()]
    } else {
        [T::zero(), T::one(), T::zero()]
    };
    let d = seed[0] * kh[0] + seed[1] * kh[1] + seed[2] * kh[2];
    let mut e1 = [0, 1, 2].map(|a| seed[a] - d * kh[a]);
    let n1 = knorm(e1);
    e1 = e1.map(|v| v / n1);
    let e2 = [
        kh[1] * e1[2] - kh[2] * e1[1],
        kh[2] * e1[0] - kh[0] * e1[2],
        kh[0] * e1[1] - kh[1] * e1[0],
    ];
    let h = T::lit(helicity as f64);
    let r = T::one() / T::lit(2.0).sqrt();
    Ok([0, 1, 2].map(|a| Complex::new(e1[a] * r, h * e2[a] * r)))
}

/// Riemann-Silberstein fields on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RSField3D<T> {
    grid: Grid3D<T>,
    f_plus: Vec<Vec3<T>>,
    f_minus: Vec<Vec3<T>>,
    time: T,
    projection_residual: T,
}

impl<T: Real> RSField3D<T> {
    /// Builds the field and removes its longitudinal part. The largest
    /// pre-projection divergence is kept as [`Self::projection_residual`].
    pub fn new(grid: Grid3D<T>, f_plus: Vec<Vec3<T>>, f_minus: Vec<Vec3<T>>) -> Result<Self> {
        if f_plus.len() != grid.len() || f_minus.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "RS components have {}/{} sites, grid has {}",
                f_plus.len(),
                f_minus.len(),
                grid.len()
            )));
        }
        if f_plus
            .iter()
            .chain(f_minus.iter())
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("field", "entries must be finite"));
        }
        let plan = Spectral3D::new(&grid);
        let ks = grid.mode_vectors();
        let norm = T::lit(grid.len() as f64);
        let mut residual = T::zero();
        let mut project = |f: Vec<Vec3<T>>| {
            let mut buf = f;
            plan.forward_components(&mut buf);
            for (v, &k) in buf.iter_mut().zip(&ks) {
                let kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                let d = kdot(k, v);
                residual = residual.max(d.norm() / norm);
                if kk > T::zero() {
                    let c = d.unscale(kk);
                    *v = [0, 1, 2].map(|a| v[a] - c.scale(k[a]));
                }
            }
            plan.inverse_components(&mut buf);
            buf
        };
        let f_plus = project(f_plus);
        let f_minus = project(f_minus);
        Ok(Self {
            grid,
            f_plus,
            f_minus,
            time: T::zero(),
            projection_residual: residual,
        })
    }

    /// Single helicity mode `amplitude e_h(k) e^{ik.x}` placed in `F+`
    /// (`h = +1`) or `F-` (`h = -1`), with `k_a = 2 pi mode_a / L_a`. Both
    /// choices oscillate as `e^{-i c |k| t}`.
    pub fn helicity_plane_wave(
        grid: Grid3D<T>,
        mode: [i64; 3],
        amplitude: T,
        helicity: i32,
    ) -> Result<Self> {
        let l = grid.lengths();
        let k = [0, 1, 2].map(|a| T::TAU() * T::lit(mode[a] as f64) / l[a]);
        let e = helicity_eigenvector(k, helicity)?;
        let wave: Vec<Vec3<T>> = (0..grid.len())
            .map(|idx| {
                let x = grid.position(idx);
                let ph = cis(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).scale(amplitude);
                e.map(|c| c * ph)
            })
            .collect();
        let zero = vec![[czero::<T>(); 3]; grid.len()];
        match helicity {
            1 => Self::new(grid, wave, zero),
            -1 => Self::new(grid, zero, wave),
            _ => Err(invalid("helicity", "must be +1 or -1")),
        }
    }

    pub fn grid(&self) -> &Grid3D<T> {
        &self.grid
    }

    pub fn f_plus(&self) -> &[Vec3<T>] {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &[Vec3<T>] {
        &self.f_minus
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn projection_residual(&self) -> T {
        self.projection_residual
    }
}

/// Real electric and magnetic fields recovered from an RS pair, with the
/// largest imaginary part that was discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct EBFields<T> {
    pub e: Vec<[T; 3]>,
    pub b: Vec<[T; 3]>,
    pub imaginary_residue: T,
}

/// `F+- = E +- iB`, followed by solenoidal projection.
pub fn rs_from_eb<T: Real>(grid: Grid3D<T>, e: &[[T; 3]], b: &[[T; 3]]) -> Result<RSField3D<T>> {
    if e.len() != grid.len() || b.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "E/B have {}/{} sites, grid has {}",
            e.len(),
            b.len(),
            grid.len()
        )));
    }
    let build = |s: T| -> Vec<Vec3<T>> {
        e.iter()
            .zip(b)
            .map(|(ev, bv)| [0, 1, 2].map(|a| Complex::new(ev[a], s * bv[a])))
            .collect()
    };
    RSField3D::new(grid, build(T::one()), build(-T::one()))
}

/// `E = (F+ + F-)/2`, `B = (F+ - F-)/(2i)`.
pub fn eb_from_rs<T: Real>(field: &RSField3D<T>) -> EBFields<T> {
    let half = T::lit(0.5);
    let mut residue = T::zero();
    let mut e = Vec::with_capacity(field.f_plus.len());
    let mut b = Vec::with_capacity(field.f_plus.len());
    for (p, m) in field.f_plus.iter().zip(&field.f_minus) {
        let ev = [0, 1, 2].map(|a| (p[a] + m[a]).scale(half));
        // (p - m) / (2i) = -i (p - m) / 2
        let bv = [0, 1, 2].map(|a| {
            let d = (p[a] - m[a]).scale(half);
            Complex::new(d.im, -d.re)
        });
        for a in 0..3 {
            residue = residue.max(ev[a].im.abs()).max(bv[a].im.abs());
        }
        e.push(ev.map(|z| z.re));
        b.push(bv.map(|z| z.re));
    }
    EBFields {
        e,
        b,
        imaginary_residue: residue,
    }
}

/// `exp(-i theta (s.k_hat)) v = v + sin(theta) k_hat x v + (cos(theta) - 1) v_perp`.
#[inline]
fn rotate<T: Real>(khat: [T; 3], sin: T, cos_m1: T, v: Vec3<T>) -> Vec3<T> {
    let kxv = cross(khat, v);
    let par = kdot(khat, &v);
    [0, 1, 2].map(|a| {
        let perp = v[a] - par.scale(khat[a]);
        v[a] + kxv[a].scale(sin) + perp.scale(cos_m1)
    })
}

struct ModeStep<T> {
    khat: [T; 3],
    sin: T,
    cos_m1: T,
}

fn mode_steps<T: Real>(grid: &Grid3D<T>, c: T, dt: T) -> Vec<ModeStep<T>> {
    grid.mode_vectors()
        .into_iter()
        .map(|k| {
            let n = knorm(k);
            if n == T::zero() {
                return ModeStep {
                    khat: [T::zero(); 3],
                    sin: T::zero(),
                    cos_m1: T::zero(),
                };
            }
            let theta = c * n * dt;
            let half = (theta / T::lit(2.0)).sin();
            ModeStep {
                khat: k.map(|v| v / n),
                sin: theta.sin(),
                // cos - 1 = -2 sin^2(theta/2), accurate for small theta
                cos_m1: -T::lit(2.0) * half * half,
            }
        })
        .collect()
}

fn validate_step<T: Real>(c: T, dt: T) -> Result<()> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(invalid("c", "must be positive and finite"));
    }
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid("dt", "must be positive and finite"));
    }
    Ok(())
}

/// Shared driver: per-mode transport, optionally wrapped in half-steps of
/// the helicity switching `exp(h lambda (sigma1 - 1))`.
fn evolve_modes<T: Real>(
    field: &RSField3D<T>,
    c: T,
    lambda: T,
    dt: T,
    n_steps: usize,
) -> Result<RSField3D<T>> {
    validate_step(c, dt)?;
    let plan = Spectral3D::new(&field.grid);
    let steps = mode_steps(&field.grid, c, dt);
    let mut fp = field.f_plus.clone();
    let mut fm = field.f_minus.clone();
    plan.forward_components(&mut fp);
    plan.forward_components(&mut fm);
    // half-step weights: 1 - e^{-2 lambda dt/2} over 2
    let switch = if lambda > T::zero() {
        let flip = -(-lambda * dt).exp_m1() / T::lit(2.0);
        Some((T::one() - flip, flip))
    } else {
        None
    };
    fp.par_iter_mut()
        .zip(fm.par_iter_mut())
        .zip(steps.par_iter())
        .for_each(|((p, m), st)| {
            let mix = |p: &mut Vec3<T>, m: &mut Vec3<T>, (stay, flip): (T, T)| {
                for a in 0..3 {
                    let (x, y) = (p[a], m[a]);
                    p[a] = x.scale(stay) + y.scale(flip);
                    m[a] = y.scale(stay) + x.scale(flip);
                }
            };
            for _ in 0..n_steps {
                if let Some(w) = switch {
                    mix(p, m, w);
                }
                *p = rotate(st.khat, st.sin, st.cos_m1, *p);
                *m = rotate(st.khat, -st.sin, st.cos_m1, *m);
                if let Some(w) = switch {
                    mix(p, m, w);
                }
            }
        });
    plan.inverse_components(&mut fp);
    plan.inverse_components(&mut fm);
    if fp
        .iter()
        .chain(fm.iter())
        .flatten()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite {
            context: "maxwell",
            step: n_steps,
        });
    }
    Ok(RSField3D {
        grid: field.grid,
        f_plus: fp,
        f_minus: fm,
        time: field.time + T::lit(n_steps as f64) * dt,
        projection_residual: field.projection_residual,
    })
}

/// Exact per-mode vacuum evolution.
pub fn evolve_maxwell_rs<T: Real>(
    field: &RSField3D<T>,
    c: T,
    dt: T,
    n_steps: usize,
) -> Result<RSField3D<T>> {
    evolve_modes(field, c, T::zero(), dt, n_steps)
}

/// Transport plus helicity switching at rate `lambda_gamma`, Strang split as
/// half switch, full transport, half switch. `lambda_gamma = 0` runs exactly
/// the vacuum evolver.
pub fn evolve_photon_kac<T: Real>(
    field: &RSField3D<T>,
    c: T,
    lambda_gamma: T,
    dt: T,
    n_steps: usize,
) -> Result<RSField3D<T>> {
    if !(lambda_gamma >= T::zero()) || !lambda_gamma.is_finite() {
        return Err(invalid("lambda_gamma", "must be >= 0 and finite"));
    }
    evolve_modes(field, c, lambda_gamma, dt, n_steps)
}

fn sum_sq<T: Real>(f: &[Vec3<T>]) -> T {
    f.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// `int (|E|^2 + |B|^2) = 1/2 int (|F+|^2 + |F-|^2)`.
pub fn energy<T: Real>(field: &RSField3D<T>) -> T {
    T::lit(0.5) * (sum_sq(&field.f_plus) + sum_sq(&field.f_minus)) * field.grid.cell_volume()
}

/// `1/2 int (|F+|^2 - |F-|^2)`.
pub fn helicity<T: Real>(field: &RSField3D<T>) -> T {
    T::lit(0.5) * (sum_sq(&field.f_plus) - sum_sq(&field.f_minus)) * field.grid.cell_volume()
}

/// `max_k |k . F+-(k)|` with transforms normalized by the site count.
pub fn divergence_residual<T: Real>(field: &RSField3D<T>) -> T {
    let plan = Spectral3D::new(&field.grid);
    let ks = field.grid.mode_vectors();
    let norm = T::lit(field.grid.len() as f64);
    let mut worst = T::zero();
    for f in [&field.f_plus, &field.f_minus] {
        let mut buf = f.clone();
        plan.forward_components(&mut buf);
        for (v, &k) in buf.iter().zip(&ks) {
            worst = worst.max(kdot(k, v).norm() / norm);
        }
    }
    worst
}

/// Spectral curl of a real vector field.
pub fn curl<T: Real>(grid: &Grid3D<T>, f: &[[T; 3]]) -> Vec<[T; 3]> {
    let plan = Spectral3D::new(grid);
    let ks = grid.mode_vectors();
    let mut buf: Vec<Vec3<T>> = f
        .iter()
        .map(|v| v.map(|x| Complex::new(x, T::zero())))
        .collect();
    plan.forward_components(&mut buf);
    let i = Complex::new(T::zero(), T::one());
    for (v, &k) in buf.iter_mut().zip(&ks) {
        *v = cross(k, *v).map(|z| i * z);
    }
    plan.inverse_components(&mut buf);
    buf.into_iter().map(|v| v.map(|z| z.re)).collect()
}

/// Residuals `max |d_t E - c curl B|`, `max |d_t B + c curl E|` with the time
/// derivative taken as a centred difference of three equally spaced
/// snapshots.
pub fn maxwell_residual<T: Real>(
    prev: &RSField3D<T>,
    mid: &RSField3D<T>,
    next: &RSField3D<T>,
    c: T,
) -> (T, T) {
    let h2 = next.time - prev.time;
    let (ep, en, em) = (eb_from_rs(prev), eb_from_rs(next), eb_from_rs(mid));
    let curl_b = curl(&mid.grid, &em.b);
    let curl_e = curl(&mid.grid, &em.e);
    let mut re = T::zero();
    let mut rb = T::zero();
    for idx in 0..mid.grid.len() {
        for a in 0..3 {
            let dte = (en.e[idx][a] - ep.e[idx][a]) / h2;
            let dtb = (en.b[idx][a] - ep.b[idx][a]) / h2;
            re = re.max((dte - c * curl_b[idx][a]).abs());
            rb = rb.max((dtb + c * curl_e[idx][a]).abs());
        }
    }
    (re, rb)
}

/// Real solenoidal `(E, B)` built from `n_modes` random low-order Fourier
/// modes per field.
pub fn random_solenoidal_eb<T: Real>(
    grid: &Grid3D<T>,
    n_modes: usize,
    seed: u64,
) -> (Vec<[T; 3]>, Vec<[T; 3]>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = grid.lengths();
    let one_field = |rng: &mut ChaCha8Rng| {
        let mut out = vec![[T::zero(); 3]; grid.len()];
        for _ in 0..n_modes {
            let mut m = [0i64; 3];
            while m == [0, 0, 0] {
                m = [0, 1, 2].map(|_| rng.random_range(-2..=2));
            }
            let k = [0, 1, 2].map(|a| T::TAU() * T::lit(m[a] as f64) / l[a]);
            let kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            let mut amp: Vec3<T> = [0, 1, 2].map(|_| {
                Complex::new(
                    T::lit(rng.random_range(-1.0..1.0)),
                    T::lit(rng.random_range(-1.0..1.0)),
                )
            });
            let d = kdot(k, &amp).unscale(kk);
            amp = [0, 1, 2].map(|a| amp[a] - d.scale(k[a]));
            for (idx, o) in out.iter_mut().enumerate() {
                let x = grid.position(idx);
                let ph = cis(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
                for a in 0..3 {
                    o[a] = o[a] + (amp[a] * ph).re;
                }
            }
        }
        out
    };
    let e = one_field(&mut rng);
    let b = one_field(&mut rng);
    (e, b)
}
