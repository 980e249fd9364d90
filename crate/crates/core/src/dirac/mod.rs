//! Dirac dynamics obtained from the Kac process by continuing the switching
//! rate to `lambda -> +/- i m c^2 / hbar`.
//!
//! In 1D the sector amplitudes obey
//! `i hbar d_t phi = -i hbar c sigma3 D_x phi + s m c^2 sigma1 phi`, where the
//! mass sign `s` is fixed by the continuation sign (see
//! [`ContinuationSign`]). In 3D the four-component chiral spinor obeys
//! `i hbar d_t Psi = -i hbar c alpha . grad Psi + s m c^2 beta Psi` with
//! `alpha = diag(-sigma, sigma)` and `beta` off-diagonal.

mod field1d;
mod field3d;
mod frequency;

pub use field1d::{
    evolve_dirac_1d, hamiltonian_apply_1d, mass_step_matrix, positive_energy_spinor_1d,
    reattach_survival, Coupling, WeylSpinorField1D,
};
pub use field3d::{
    evolve_dirac_3d, hamiltonian_3d_apply, positive_energy_spinor_3d, DiracSpinorField3D,
};
pub use frequency::{measure_mode_frequency, measure_oscillation_frequency};

use crate::error::{invalid, Result};
use crate::grid::Grid1D;
use crate::scalar::Real;
use crate::stochastic::KacParams;

/// Sign of the imaginary continuation of the switching rate.
///
/// `Plus` (`lambda -> +i m c^2/hbar`) turns the survival-stripped switching
/// generator `lambda sigma1` into `i (m c^2/hbar) sigma1`, which is the
/// propagator of the mass term `-m c^2 sigma1`. `Minus` gives `+m c^2 sigma1`.
/// Sector populations do not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContinuationSign {
    #[default]
    Plus,
    Minus,
}

impl ContinuationSign {
    /// Sign multiplying `m c^2` in the Hamiltonian.
    pub fn mass_term_sign<T: Real>(self) -> T {
        match self {
            ContinuationSign::Plus => -T::one(),
            ContinuationSign::Minus => T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContinuationSign::Plus => "plus",
            ContinuationSign::Minus => "minus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plus" | "+" => Some(ContinuationSign::Plus),
            "minus" | "-" => Some(ContinuationSign::Minus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracParams<T> {
    mass: T,
    c: T,
    hbar: T,
    sign: ContinuationSign,
}

impl<T: Real> DiracParams<T> {
    pub fn new(mass: T, c: T, hbar: T, sign: ContinuationSign) -> Result<Self> {
        if !(mass >= T::zero()) || !mass.is_finite() {
            return Err(invalid(
                "mass",
                format!("must be >= 0 and finite, got {mass}"),
            ));
        }
        if !(c > T::zero()) || !c.is_finite() {
            return Err(invalid("c", "must be positive and finite"));
        }
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(invalid("hbar", "must be positive and finite"));
        }
        Ok(Self {
            mass,
            c,
            hbar,
            sign,
        })
    }

    /// Natural units `c = hbar = 1`, default continuation sign.
    pub fn natural(mass: T) -> Result<Self> {
        Self::new(mass, T::one(), T::one(), ContinuationSign::Plus)
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn sign(&self) -> ContinuationSign {
        self.sign
    }

    pub fn with_sign(self, sign: ContinuationSign) -> Self {
        Self { sign, ..self }
    }

    pub fn rest_energy(&self) -> T {
        self.mass * self.c * self.c
    }

    /// Signed coefficient of `sigma1` (1D) or `beta` (3D) in the Hamiltonian.
    pub fn mass_term(&self) -> T {
        self.sign.mass_term_sign::<T>() * self.rest_energy()
    }

    /// Magnitude of the switching rate this mass continues from,
    /// `m c^2 / hbar`.
    pub fn switching_rate(&self) -> T {
        self.rest_energy() / self.hbar
    }

    /// Inverse of [`continue_to_quantum`].
    pub fn to_kac(&self) -> Result<KacParams<T>> {
        KacParams::new(self.c, self.switching_rate())
    }

    /// Step satisfying `max_k E(k) dt / hbar <= 0.1` on `grid`.
    pub fn default_dt(&self, grid: &Grid1D<T>) -> T {
        let kmax = T::PI() / grid.dx();
        T::lit(0.1) * self.hbar / dirac_dispersion(kmax, self)
    }
}

/// Maps a real switching rate onto a Dirac mass `m = hbar lambda / c^2`.
pub fn continue_to_quantum<T: Real>(
    kac: &KacParams<T>,
    sign: ContinuationSign,
    hbar: T,
) -> Result<DiracParams<T>> {
    let c = kac.c();
    DiracParams::new(hbar * kac.lambda() / (c * c), c, hbar, sign)
}

/// Positive branch `E = sqrt((hbar c k)^2 + (m c^2)^2)`.
pub fn dirac_dispersion<T: Real>(k: T, params: &DiracParams<T>) -> T {
    let p = params.hbar * params.c * k;
    p.hypot(params.rest_energy())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuation_examples() {
        let kac = KacParams::new(1.0_f64, 0.0).unwrap();
        assert_eq!(
            continue_to_quantum(&kac, ContinuationSign::Plus, 1.0)
                .unwrap()
                .mass(),
            0.0
        );
        let kac = KacParams::new(1.0_f64, 1.0).unwrap();
        let d = continue_to_quantum(&kac, ContinuationSign::Plus, 1.0).unwrap();
        assert_eq!(d.mass(), 1.0);
        assert_eq!(d.to_kac().unwrap().lambda(), 1.0);
    }

    #[test]
    fn continuation_round_trip_physical_units() {
        let kac = KacParams::new(3.0e8_f64, 7.76e20).unwrap();
        let d = continue_to_quantum(&kac, ContinuationSign::Minus, 1.054_571_8e-34).unwrap();
        let back = d.to_kac().unwrap().lambda();
        assert!((back / 7.76e20 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dispersion_values() {
        let m1 = DiracParams::natural(1.0_f64).unwrap();
        let m0 = DiracParams::natural(0.0_f64).unwrap();
        assert_eq!(dirac_dispersion(0.0, &m1), 1.0);
        assert_eq!(dirac_dispersion(2.0, &m0), 2.0);
        assert!((dirac_dispersion(1.0, &m1) - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_mass() {
        assert!(DiracParams::natural(-1.0_f64).is_err());
    }
}
