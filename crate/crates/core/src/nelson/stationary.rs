use num_complex::Complex;

use super::{node_mask, Domain, MaskedField};
use crate::error::{invalid, Error, Result};
use crate::scalar::{cis, Real};

fn check_len<T: Real>(len: usize, domain: &Domain<T>, what: &str) -> Result<()> {
    if len != domain.n() {
        return Err(Error::GridMismatch(format!(
            "{what} has {len} samples, domain has {}",
            domain.n()
        )));
    }
    Ok(())
}

fn check_physical<T: Real>(m: T, hbar: T) -> Result<()> {
    if !(m > T::zero()) || !m.is_finite() {
        return Err(invalid("mass", "must be positive and finite"));
    }
    if !(hbar > T::zero()) || !hbar.is_finite() {
        return Err(invalid("hbar", "must be positive and finite"));
    }
    Ok(())
}

/// Density, log-amplitude and unwrapped phase of a wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts<T> {
    pub rho: Vec<T>,
    /// `R = ln(rho) / 2`, masked at nodes. The additive constant follows the
    /// normalization of the input.
    pub log_amplitude: MaskedField<T>,
    /// `S = hbar * phase`, unwrapped along the grid.
    pub s_phase: Vec<T>,
    /// Net number of `2 pi` turns of the phase around a periodic domain
    /// (0 on radial domains).
    pub winding: i64,
}

fn wrap_angle<T: Real>(a: T) -> T {
    let tau = T::TAU();
    let mut w = a - tau * ((a + T::PI()) / tau).floor();
    if w >= T::PI() {
        w = w - tau;
    }
    w
}

/// `psi = sqrt(rho) e^{iS/hbar}` with cumulative phase unwrapping.
pub fn polar_decompose<T: Real>(
    psi: &[Complex<T>],
    domain: &Domain<T>,
    hbar: T,
) -> Result<PolarParts<T>> {
    check_len(psi.len(), domain, "psi")?;
    if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid("psi", "must be finite"));
    }
    if psi.iter().all(|z| z.norm_sqr() == T::zero()) {
        return Err(Error::Degenerate(
            "wavefunction vanishes identically".into(),
        ));
    }
    let rho: Vec<T> = psi.iter().map(|z| z.norm_sqr()).collect();
    let valid = node_mask(&rho, domain);
    let log_amplitude =
        MaskedField::new(rho.iter().map(|&r| r.ln() / T::lit(2.0)).collect(), valid);
    let arg: Vec<T> = psi.iter().map(|z| z.arg()).collect();
    let mut phase = Vec::with_capacity(arg.len());
    phase.push(arg[0]);
    for i in 1..arg.len() {
        let prev = phase[i - 1];
        phase.push(prev + wrap_angle(arg[i] - arg[i - 1]));
    }
    let winding = if matches!(domain, Domain::Periodic(_)) {
        let n = arg.len();
        let closing = phase[n - 1] + wrap_angle(arg[0] - arg[n - 1]);
        ((closing - phase[0]) / T::TAU())
            .round()
            .to_i64()
            .unwrap_or(0)
    } else {
        0
    };
    Ok(PolarParts {
        rho,
        log_amplitude,
        s_phase: phase.into_iter().map(|p| p * hbar).collect(),
        winding,
    })
}

/// `u = (hbar/2m) grad ln rho`, evaluated as `(hbar/m) grad sqrt(rho) / sqrt(rho)`.
/// On periodic domains this assumes `sqrt(rho)` is smooth; for states with
/// sign-changing amplitudes use [`StationaryState::osmotic_velocity`].
pub fn osmotic_velocity<T: Real>(
    rho: &[T],
    m: T,
    hbar: T,
    domain: &Domain<T>,
) -> Result<MaskedField<T>> {
    check_len(rho.len(), domain, "rho")?;
    check_physical(m, hbar)?;
    let f: Vec<T> = rho.iter().map(|r| r.max(T::zero()).sqrt()).collect();
    let df = domain.d1(&f);
    let c = hbar / m;
    let valid = node_mask(rho, domain);
    Ok(MaskedField::new(
        df.iter().zip(&f).map(|(&d, &a)| c * d / a).collect(),
        valid,
    ))
}

/// `Q = -(hbar^2 / 2m) lap sqrt(rho) / sqrt(rho)`.
pub fn quantum_potential<T: Real>(
    rho: &[T],
    m: T,
    hbar: T,
    domain: &Domain<T>,
) -> Result<MaskedField<T>> {
    check_len(rho.len(), domain, "rho")?;
    check_physical(m, hbar)?;
    let f: Vec<T> = rho.iter().map(|r| r.max(T::zero()).sqrt()).collect();
    let lap = domain.laplacian(&f);
    let c = -hbar * hbar / (T::lit(2.0) * m);
    let valid = node_mask(rho, domain);
    Ok(MaskedField::new(
        lap.iter().zip(&f).map(|(&l, &a)| c * l / a).collect(),
        valid,
    ))
}

/// `Q = -(m/2) u^2 - (hbar/2) div u`.
///
/// With masked points present on a periodic domain the divergence uses the
/// fourth-order local stencil. Masked entries carry no value, so every point
/// whose stencil touches one is masked in the result as well.
pub fn quantum_potential_from_u<T: Real>(
    u: &MaskedField<T>,
    m: T,
    hbar: T,
    domain: &Domain<T>,
) -> Result<MaskedField<T>> {
    check_len(u.values.len(), domain, "u")?;
    check_physical(m, hbar)?;
    let filled: Vec<T> = u
        .values
        .iter()
        .map(|&v| if v.is_finite() { v } else { T::zero() })
        .collect();
    let all_valid = u.valid.iter().all(|v| *v);
    let div = match domain {
        Domain::Periodic(g) if !all_valid => periodic_fd4(&filled, g.dx()),
        _ => domain.divergence(&filled),
    };
    let half = T::lit(0.5);
    let q = filled
        .iter()
        .zip(&div)
        .map(|(&uu, &d)| -half * m * uu * uu - half * hbar * d)
        .collect();
    let valid = if all_valid {
        u.valid.clone()
    } else {
        widen_mask(
            &u.valid,
            STENCIL_REACH,
            matches!(domain, Domain::Periodic(_)),
        )
    };
    Ok(MaskedField::new(q, valid))
}

const STENCIL_REACH: usize = 2;

/// Marks invalid every point within `reach` of an invalid one.
fn widen_mask(valid: &[bool], reach: usize, periodic: bool) -> Vec<bool> {
    let n = valid.len() as isize;
    let r = reach as isize;
    (0..n)
        .map(|i| {
            (-r..=r).all(|o| {
                let j = i + o;
                if periodic {
                    valid[j.rem_euclid(n) as usize]
                } else {
                    !(0..n).contains(&j) || valid[j as usize]
                }
            })
        })
        .collect()
}

fn periodic_fd4<T: Real>(f: &[T], h: T) -> Vec<T> {
    let n = f.len() as isize;
    let at = |i: isize| f[i.rem_euclid(n) as usize];
    (0..n)
        .map(|i| {
            (at(i - 2) - T::lit(8.0) * at(i - 1) + T::lit(8.0) * at(i + 1) - at(i + 2))
                / (T::lit(12.0) * h)
        })
        .collect()
}

/// `v = grad S / m`, computed as `(hbar/m) Im(grad e^{iS/hbar} / e^{iS/hbar})`
/// so that `2 pi` windings and `pi` jumps at nodes of real states need no
/// special treatment.
pub fn current_velocity<T: Real>(
    s_phase: &[T],
    m: T,
    hbar: T,
    domain: &Domain<T>,
) -> Result<Vec<T>> {
    check_len(s_phase.len(), domain, "S")?;
    check_physical(m, hbar)?;
    let a: Vec<Complex<T>> = s_phase.iter().map(|&s| cis(s / hbar)).collect();
    let da = domain.d1_complex(&a);
    let c = hbar / m;
    Ok(da
        .iter()
        .zip(&a)
        .map(|(&d, &z)| c * (d * z.conj()).im)
        .collect())
}

/// A stationary state with its potential and energy.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState<T> {
    pub domain: Domain<T>,
    pub rho: Vec<T>,
    pub s_phase: Vec<T>,
    pub v_potential: Vec<T>,
    pub energy: T,
    pub mass: T,
    pub hbar: T,
}

impl<T: Real> StationaryState<T> {
    pub fn new(
        domain: Domain<T>,
        rho: Vec<T>,
        s_phase: Vec<T>,
        v_potential: Vec<T>,
        energy: T,
        mass: T,
        hbar: T,
    ) -> Result<Self> {
        check_len(rho.len(), &domain, "rho")?;
        check_len(s_phase.len(), &domain, "S")?;
        check_len(v_potential.len(), &domain, "V")?;
        check_physical(mass, hbar)?;
        if rho.iter().any(|r| !(*r >= T::zero()) || !r.is_finite()) {
            return Err(invalid("rho", "must be finite and non-negative"));
        }
        if !energy.is_finite() {
            return Err(invalid("energy", "must be finite"));
        }
        Ok(Self {
            domain,
            rho,
            s_phase,
            v_potential,
            energy,
            mass,
            hbar,
        })
    }

    pub fn from_psi(
        domain: Domain<T>,
        psi: &[Complex<T>],
        v_potential: Vec<T>,
        energy: T,
        mass: T,
        hbar: T,
    ) -> Result<Self> {
        let parts = polar_decompose(psi, &domain, hbar)?;
        Self::new(
            domain,
            parts.rho,
            parts.s_phase,
            v_potential,
            energy,
            mass,
            hbar,
        )
    }

    /// `int rho` with the domain's weights.
    pub fn total_probability(&self) -> T {
        self.rho
            .iter()
            .zip(self.domain.weights())
            .map(|(&r, w)| r * w)
            .sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.total_probability();
        if !(n > T::zero()) {
            return Err(Error::Degenerate("zero total probability".into()));
        }
        for r in &mut self.rho {
            *r = *r / n;
        }
        Ok(self)
    }

    /// Smooth amplitude `sqrt(rho) e^{iS/hbar}`.
    pub fn amplitude(&self) -> Vec<Complex<T>> {
        self.rho
            .iter()
            .zip(&self.s_phase)
            .map(|(&r, &s)| cis(s / self.hbar).scale(r.sqrt()))
            .collect()
    }

    pub fn mask(&self) -> Vec<bool> {
        node_mask(&self.rho, &self.domain)
    }

    /// `u = (hbar/m) Re(grad a / a)` for the amplitude `a`.
    pub fn osmotic_velocity(&self) -> MaskedField<T> {
        let a = self.amplitude();
        let da = self.domain.d1_complex(&a);
        let c = self.hbar / self.mass;
        MaskedField::new(
            da.iter().zip(&a).map(|(&d, &z)| c * (d / z).re).collect(),
            self.mask(),
        )
    }

    pub fn current_velocity(&self) -> Vec<T> {
        current_velocity(&self.s_phase, self.mass, self.hbar, &self.domain)
            .expect("state invariants guarantee valid inputs")
    }

    /// `Q = -(hbar^2/2m) [Re(lap a / a) + (Im(grad a / a))^2]`, which equals
    /// `-(hbar^2/2m) lap sqrt(rho) / sqrt(rho)` but stays smooth across
    /// sign changes of real amplitudes.
    pub fn quantum_potential(&self) -> MaskedField<T> {
        let a = self.amplitude();
        let da = self.domain.d1_complex(&a);
        let lap = self.domain.laplacian_complex(&a);
        let c = -self.hbar * self.hbar / (T::lit(2.0) * self.mass);
        let q = a
            .iter()
            .zip(da.iter().zip(&lap))
            .map(|(&z, (&d, &l))| {
                let g = (d / z).im;
                c * ((l / z).re + g * g)
            })
            .collect();
        MaskedField::new(q, self.mask())
    }
}

/// `V + Q - E` on the unmasked set and its largest magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarityResidual<T> {
    pub field: MaskedField<T>,
    pub max: T,
}

pub fn stationarity_residual<T: Real>(state: &StationaryState<T>) -> StationarityResidual<T> {
    let q = state.quantum_potential();
    let r = q
        .values
        .iter()
        .zip(&state.v_potential)
        .map(|(&qq, &v)| v + qq - state.energy)
        .collect();
    let field = MaskedField::new(r, q.valid);
    let max = field.max_abs();
    StationarityResidual { field, max }
}

/// `omega_0 = (E_e - E_g) / hbar`.
pub fn transition_frequency<T: Real>(e_excited: T, e_ground: T, hbar: T) -> Result<T> {
    if !(hbar > T::zero()) {
        return Err(invalid("hbar", "must be positive"));
    }
    Ok((e_excited - e_ground) / hbar)
}
