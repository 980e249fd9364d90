//! Two charged species of sector amplitudes coupled to a prescribed
//! electromagnetic potential.
//!
//! Conventions (1D, charge `e_s` absorbs any `hbar`/`c` factors):
//! `D_t = d_t + i e_s A0`, `D_x = d_x - i e_s A_x`, and a gauge function
//! `chi` acts as `phi -> e^{i e_s chi} phi`, `A_x -> A_x + d_x chi`,
//! `A0 -> A0 - d_t chi`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::dirac::{evolve_dirac_1d, Coupling, DiracParams, WeylSpinorField1D};
use crate::error::{invalid, Error, Result};
use crate::grid::Grid1D;
use crate::scalar::{cis, Real};
use crate::spectral::derivative;

/// Source of the potentials seen by a propagator.
pub trait GaugePotential<T: Real> {
    fn grid(&self) -> &Grid1D<T>;

    /// Site-wise `int_{t0}^{t1} A0(x, t) dt`.
    fn a0_integral(&self, t0: T, t1: T) -> Vec<T>;

    /// Site-wise `A_x(x, t)`.
    fn ax(&self, t: T) -> Vec<T>;

    /// True when `A_x` does not depend on time.
    fn is_static(&self) -> bool;
}

type FieldFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

#[derive(Clone)]
enum Chi<T> {
    Static(Vec<T>),
    Dynamic {
        chi: FieldFn<T>,
        chi_dot: FieldFn<T>,
    },
}

/// A gauge function `chi(x)` or `chi(x, t)` sampled on a periodic grid.
#[derive(Clone)]
pub struct GaugeFunction<T> {
    grid: Grid1D<T>,
    chi: Chi<T>,
    sign: T,
    label: String,
}

impl<T: fmt::Debug> fmt::Debug for GaugeFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeFunction")
            .field("grid", &self.grid)
            .field("static", &matches!(self.chi, Chi::Static(_)))
            .field("label", &self.label)
            .finish()
    }
}

impl<T: Real> GaugeFunction<T> {
    /// Time-independent `chi(x)` from samples.
    pub fn stationary(grid: Grid1D<T>, chi: Vec<T>) -> Result<Self> {
        if chi.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "chi has {} samples, grid has {}",
                chi.len(),
                grid.n()
            )));
        }
        if chi.iter().any(|v| !v.is_finite()) {
            return Err(invalid("chi", "samples must be finite"));
        }
        Ok(Self {
            grid,
            chi: Chi::Static(chi),
            sign: T::one(),
            label: "stationary samples".into(),
        })
    }

    /// Time-dependent `chi(x, t)` with its time derivative supplied in
    /// closed form.
    pub fn time_dependent(
        grid: Grid1D<T>,
        chi: impl Fn(T, T) -> T + Send + Sync + 'static,
        chi_dot: impl Fn(T, T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            grid,
            chi: Chi::Dynamic {
                chi: Arc::new(chi),
                chi_dot: Arc::new(chi_dot),
            },
            sign: T::one(),
            label: "closed form chi(x, t)".into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn is_static(&self) -> bool {
        matches!(self.chi, Chi::Static(_))
    }

    /// `-chi`.
    pub fn negated(&self) -> Self {
        Self {
            sign: -self.sign,
            ..self.clone()
        }
    }

    pub fn values(&self, t: T) -> Vec<T> {
        match &self.chi {
            Chi::Static(v) => v.iter().map(|&c| self.sign * c).collect(),
            Chi::Dynamic { chi, .. } => self
                .grid
                .coordinates()
                .into_iter()
                .map(|x| self.sign * chi(x, t))
                .collect(),
        }
    }

    pub fn time_derivative(&self, t: T) -> Vec<T> {
        match &self.chi {
            Chi::Static(v) => vec![T::zero(); v.len()],
            Chi::Dynamic { chi_dot, .. } => self
                .grid
                .coordinates()
                .into_iter()
                .map(|x| self.sign * chi_dot(x, t))
                .collect(),
        }
    }

    /// Rejects samples whose wrap-around jump is far larger than any interior
    /// increment, i.e. functions that are not periodic on the grid.
    fn check_periodic(&self, t: T) -> Result<()> {
        let v = self.values(t);
        let n = v.len();
        let interior = v
            .windows(2)
            .fold(T::zero(), |m, w| m.max((w[1] - w[0]).abs()));
        let wrap = (v[0] - v[n - 1]).abs();
        let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        if wrap > T::lit(4.0) * interior + T::lit(1e-12) * scale {
            return Err(invalid(
                "chi",
                format!(
                    "not periodic on the grid: wrap-around jump {:.3e} exceeds 4x the largest interior step {:.3e}",
                    wrap.as_f64(),
                    interior.as_f64()
                ),
            ));
        }
        Ok(())
    }
}

/// Prescribed potentials: static samples `a0(x)`, `a_x(x)` plus any number
/// of accumulated pure-gauge terms `(-d_t chi, d_x chi)`.
#[derive(Clone, Debug)]
pub struct GaugeField1D<T> {
    grid: Grid1D<T>,
    a0: Vec<T>,
    ax: Vec<T>,
    terms: Vec<GaugeFunction<T>>,
}

impl<T: Real> GaugeField1D<T> {
    pub fn new(grid: Grid1D<T>, a0: Vec<T>, ax: Vec<T>) -> Result<Self> {
        if a0.len() != grid.n() || ax.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "potentials have {}/{} samples, grid has {}",
                a0.len(),
                ax.len(),
                grid.n()
            )));
        }
        if a0.iter().chain(ax.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("potential", "samples must be finite"));
        }
        Ok(Self {
            grid,
            a0,
            ax,
            terms: Vec::new(),
        })
    }

    pub fn zero(grid: Grid1D<T>) -> Self {
        let n = grid.n();
        Self {
            grid,
            a0: vec![T::zero(); n],
            ax: vec![T::zero(); n],
            terms: Vec::new(),
        }
    }

    /// Static part of `A0`.
    pub fn a0(&self) -> &[T] {
        &self.a0
    }

    /// Static part of `A_x`.
    pub fn ax_static(&self) -> &[T] {
        &self.ax
    }

    pub fn gauge_terms(&self) -> &[GaugeFunction<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
            && self
                .a0
                .iter()
                .chain(self.ax.iter())
                .all(|v| *v == T::zero())
    }

    /// `(A0(x, t), A_x(x, t))`.
    pub fn sample(&self, t: T) -> (Vec<T>, Vec<T>) {
        let mut a0 = self.a0.clone();
        for term in &self.terms {
            for (a, d) in a0.iter_mut().zip(term.time_derivative(t)) {
                *a = *a - d;
            }
        }
        (a0, GaugePotential::ax(self, t))
    }

    /// `A -> A + (-d_t chi, d_x chi)`. Static gauge functions are folded into
    /// the sampled arrays.
    pub fn shifted(&self, chi: &GaugeFunction<T>) -> Result<Self> {
        if !chi.grid().matches(&self.grid) {
            return Err(Error::GridMismatch(
                "gauge function and field grids differ".into(),
            ));
        }
        chi.check_periodic(T::zero())?;
        let mut out = self.clone();
        if chi.is_static() {
            let d = derivative(&chi.values(T::zero()), &self.grid);
            for (a, dv) in out.ax.iter_mut().zip(d) {
                *a = *a + dv;
            }
        } else {
            out.terms.push(chi.clone());
        }
        Ok(out)
    }
}

impl<T: Real> GaugePotential<T> for GaugeField1D<T> {
    fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    fn a0_integral(&self, t0: T, t1: T) -> Vec<T> {
        let dt = t1 - t0;
        let mut out: Vec<T> = self.a0.iter().map(|&a| a * dt).collect();
        for term in &self.terms {
            let c0 = term.values(t0);
            let c1 = term.values(t1);
            for i in 0..out.len() {
                out[i] = out[i] - (c1[i] - c0[i]);
            }
        }
        out
    }

    fn ax(&self, t: T) -> Vec<T> {
        let mut out = self.ax.clone();
        for term in &self.terms {
            let d = derivative(&term.values(t), &self.grid);
            for (a, dv) in out.iter_mut().zip(d) {
                *a = *a + dv;
            }
        }
        out
    }

    fn is_static(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The pure-gauge potential `(A0, A_x) = (-d_t chi, d_x chi)`.
pub fn pure_gauge_field<T: Real>(chi: &GaugeFunction<T>) -> Result<GaugeField1D<T>> {
    GaugeField1D::zero(*chi.grid()).shifted(chi)
}

/// Both species and the field they share.
#[derive(Clone, Debug)]
pub struct CoupledState<T: Real> {
    pub species_a: WeylSpinorField1D<T>,
    pub charge_a: T,
    pub species_b: WeylSpinorField1D<T>,
    pub charge_b: T,
    pub gauge: GaugeField1D<T>,
}

impl<T: Real> CoupledState<T> {
    pub fn new(
        species_a: WeylSpinorField1D<T>,
        charge_a: T,
        species_b: WeylSpinorField1D<T>,
        charge_b: T,
        gauge: GaugeField1D<T>,
    ) -> Result<Self> {
        if !species_a.grid().matches(gauge.grid()) || !species_b.grid().matches(gauge.grid()) {
            return Err(Error::GridMismatch(
                "species and gauge field grids differ".into(),
            ));
        }
        if !charge_a.is_finite() || !charge_b.is_finite() {
            return Err(invalid("charge", "must be finite"));
        }
        Ok(Self {
            species_a,
            charge_a,
            species_b,
            charge_b,
            gauge,
        })
    }

    /// Species of charge `+e` and `-e`.
    pub fn opposite_charges(
        species_a: WeylSpinorField1D<T>,
        species_b: WeylSpinorField1D<T>,
        e: T,
        gauge: GaugeField1D<T>,
    ) -> Result<Self> {
        Self::new(species_a, e, species_b, -e, gauge)
    }
}

fn phase_field<T: Real>(
    field: &WeylSpinorField1D<T>,
    chi: &[T],
    charge: T,
) -> WeylSpinorField1D<T> {
    field.clone().map_sites(|i, [a, b]| {
        let ph: Complex<T> = cis(charge * chi[i]);
        [a * ph, b * ph]
    })
}

/// Applies `chi` (evaluated at the species' current time) to both species
/// and shifts the potentials.
pub fn gauge_transform<T: Real>(
    state: &CoupledState<T>,
    chi: &GaugeFunction<T>,
) -> Result<CoupledState<T>> {
    if !chi.grid().matches(state.gauge.grid()) {
        return Err(Error::GridMismatch(
            "gauge function and state grids differ".into(),
        ));
    }
    let gauge = state.gauge.shifted(chi)?;
    let chi_a = chi.values(state.species_a.time());
    let chi_b = chi.values(state.species_b.time());
    Ok(CoupledState {
        species_a: phase_field(&state.species_a, &chi_a, state.charge_a),
        charge_a: state.charge_a,
        species_b: phase_field(&state.species_b, &chi_b, state.charge_b),
        charge_b: state.charge_b,
        gauge,
    })
}

/// Evolves both species under the shared prescribed field.
pub fn evolve_coupled<T: Real>(
    state: &CoupledState<T>,
    params_a: &DiracParams<T>,
    params_b: &DiracParams<T>,
    dt: T,
    n_steps: usize,
) -> Result<CoupledState<T>> {
    let coupling = |charge| {
        (!state.gauge.is_zero()).then_some(Coupling {
            potential: &state.gauge as &dyn GaugePotential<T>,
            charge,
        })
    };
    let a = evolve_dirac_1d(
        &state.species_a,
        params_a,
        coupling(state.charge_a),
        dt,
        n_steps,
    )?;
    let b = evolve_dirac_1d(
        &state.species_b,
        params_b,
        coupling(state.charge_b),
        dt,
        n_steps,
    )?;
    Ok(CoupledState {
        species_a: a,
        species_b: b,
        ..state.clone()
    })
}

/// Site-wise sector probabilities and their grid sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorProbabilities<T> {
    pub p_plus: Vec<T>,
    pub p_minus: Vec<T>,
    pub total: T,
}

pub fn sector_probabilities<T: Real>(field: &WeylSpinorField1D<T>) -> SectorProbabilities<T> {
    let (p_plus, p_minus) = field.populations();
    let s: T = p_plus.iter().chain(p_minus.iter()).copied().sum();
    SectorProbabilities {
        p_plus,
        p_minus,
        total: s * field.grid().dx(),
    }
}
