use num_complex::Complex;

use crate::dirac::{
    dirac_dispersion, hamiltonian_apply_1d, positive_energy_spinor_1d, DiracParams,
    WeylSpinorField1D,
};
use crate::error::{invalid, Error, Result};
use crate::grid::Grid1D;
use crate::scalar::{cis, Real};
use crate::spectral::derivative_complex;

/// Pointwise spinor `psi = (phi_plus, phi_minus)` with its time and space
/// derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GordonInput<T> {
    pub psi: [Vec<Complex<T>>; 2],
    pub psi_t: [Vec<Complex<T>>; 2],
    pub psi_x: [Vec<Complex<T>>; 2],
}

impl<T: Real> GordonInput<T> {
    /// Spatial derivative taken spectrally; `psi_t` supplied by the caller.
    pub fn from_field(field: &WeylSpinorField1D<T>, psi_t: [Vec<Complex<T>>; 2]) -> Result<Self> {
        let n = field.grid().n();
        if psi_t[0].len() != n || psi_t[1].len() != n {
            return Err(Error::GridMismatch(
                "time derivative does not match the field grid".into(),
            ));
        }
        Ok(Self {
            psi: [field.phi_plus().to_vec(), field.phi_minus().to_vec()],
            psi_x: [
                derivative_complex(field.phi_plus(), field.grid()),
                derivative_complex(field.phi_minus(), field.grid()),
            ],
            psi_t,
        })
    }

    /// Uses the free Dirac equation itself for `psi_t`, so the input is on
    /// shell by construction.
    pub fn on_shell(field: &WeylSpinorField1D<T>, params: &DiracParams<T>) -> Result<Self> {
        let (p, m) = hamiltonian_apply_1d(field, params);
        Self::from_field(field, [p, m])
    }
}

/// Positive-energy plane wave `u(k) e^{ikx}` at `t = 0` with analytic
/// derivatives `d_t = -iE/hbar`, `d_x = ik`.
pub fn gordon_plane_wave<T: Real>(
    k: T,
    params: &DiracParams<T>,
    grid: &Grid1D<T>,
) -> GordonInput<T> {
    let u = positive_energy_spinor_1d(k, params);
    let w = dirac_dispersion(k, params) / params.hbar();
    let xs = grid.coordinates();
    let comp = |c: usize| -> Vec<Complex<T>> { xs.iter().map(|&x| u[c] * cis(k * x)).collect() };
    let psi = [comp(0), comp(1)];
    let dt = Complex::new(T::zero(), -w);
    let dx = Complex::new(T::zero(), k);
    GordonInput {
        psi_t: [0, 1].map(|c| psi[c].iter().map(|z| z * dt).collect()),
        psi_x: [0, 1].map(|c| psi[c].iter().map(|z| z * dx).collect()),
        psi,
    }
}

/// Components `[j^0, j^1]` of each part of the current and the largest
/// pointwise mismatch `|convective + spin - total|`.
#[derive(Debug, Clone, PartialEq)]
pub struct GordonDecomposition<T> {
    pub convective: [Vec<T>; 2],
    pub spin: [Vec<T>; 2],
    pub total: [Vec<T>; 2],
    pub residual: T,
}

/// Gordon split of `j^mu = psibar gamma^mu psi` with `x^0 = ct`,
/// `gamma^0 = s sigma1`, `gamma^1 = gamma^0 sigma3` (`s` the sign of the
/// mass term), `sigma^{01} = i sigma3`:
///
/// `j^mu = (i hbar / 2mc)[psibar d^mu psi - (d^mu psibar) psi]
///        + (hbar / 2mc) d_nu (psibar sigma^{mu nu} psi)`.
pub fn gordon_decompose<T: Real>(
    input: &GordonInput<T>,
    params: &DiracParams<T>,
) -> Result<GordonDecomposition<T>> {
    if params.mass() == T::zero() {
        return Err(invalid("mass", "the Gordon decomposition needs m > 0"));
    }
    let n = input.psi[0].len();
    for v in input.psi.iter().chain(&input.psi_t).chain(&input.psi_x) {
        if v.len() != n {
            return Err(Error::GridMismatch(
                "Gordon input arrays differ in length".into(),
            ));
        }
    }
    let mu = params.mass_term() / params.rest_energy();
    let (m, c, hbar) = (params.mass(), params.c(), params.hbar());
    let k_t = hbar * mu / (m * c * c);
    let k_x = hbar * mu / (m * c);
    let i = Complex::new(T::zero(), T::one());
    let sig1 = |a: [Complex<T>; 2], b: [Complex<T>; 2]| a[0].conj() * b[1] + a[1].conj() * b[0];
    let sig2 = |a: [Complex<T>; 2], b: [Complex<T>; 2]| {
        a[0].conj() * (-i * b[1]) + a[1].conj() * (i * b[0])
    };

    let mut out = GordonDecomposition {
        convective: [Vec::with_capacity(n), Vec::with_capacity(n)],
        spin: [Vec::with_capacity(n), Vec::with_capacity(n)],
        total: [Vec::with_capacity(n), Vec::with_capacity(n)],
        residual: T::zero(),
    };
    for j in 0..n {
        let p = [input.psi[0][j], input.psi[1][j]];
        let pt = [input.psi_t[0][j], input.psi_t[1][j]];
        let px = [input.psi_x[0][j], input.psi_x[1][j]];
        let conv = [-k_t * sig1(p, pt).im, k_x * sig1(p, px).im];
        let spin = [k_x * sig2(p, px).re, -k_t * sig2(p, pt).re];
        let total = [
            p[0].norm_sqr() + p[1].norm_sqr(),
            p[0].norm_sqr() - p[1].norm_sqr(),
        ];
        for a in 0..2 {
            out.residual = out.residual.max((conv[a] + spin[a] - total[a]).abs());
            out.convective[a].push(conv[a]);
            out.spin[a].push(spin[a]);
            out.total[a].push(total[a]);
        }
    }
    Ok(out)
}
