use std::f64::consts::TAU;

use num_complex::Complex;
use persistq::dirac::ContinuationSign;
use persistq::gauge::{evolve_coupled, gauge_transform, sector_probabilities};
use persistq::{CoupledState, DiracParams, GaugeField1D, GaugeFunction, Grid1D, WeylSpinorField1D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::output::Table;
use crate::params::{choice, float, int, Resolved};
use crate::{CommandSpec, Outcome};

pub const GAUGE: CommandSpec = CommandSpec {
    name: "gauge",
    about: "Gauge covariance and charge conjugation of two oppositely charged species",
    params: &[
        float("m", "1", "mass of both species"),
        float("c", "1", "speed of light"),
        float("hbar", "1", "reduced Planck constant"),
        choice("sign", &["plus", "minus"], "plus", "continuation sign"),
        float("charge", "1", "charge e; species b carries -e"),
        int("n", "128", "grid points on a 2 pi ring"),
        float("dt", "0.005", "time step"),
        int("steps", "1000", "number of steps"),
        int("chi_count", "5", "number of random gauge functions"),
        float(
            "chi_amplitude",
            "1",
            "amplitude of each gauge-function harmonic",
        ),
        choice(
            "background",
            &["none", "smooth"],
            "none",
            "prescribed field the gauge is applied on top of",
        ),
        float("k0", "2", "packet wavenumber"),
        float("sigma", "0.5", "packet width"),
    ],
    run: gauge,
};

/// Smooth periodic `chi(x, t)` from four random harmonics.
pub fn random_chi(grid: Grid1D, amplitude: f64, seed: u64) -> GaugeFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(1..=3) as f64,
                amplitude * rng.random_range(-1.0..1.0),
                rng.random_range(0.0..TAU),
                rng.random_range(-2.0..2.0),
            )
        })
        .collect();
    let dot = terms.clone();
    GaugeFunction::time_dependent(
        grid,
        move |x, t| {
            terms
                .iter()
                .map(|(k, a, p, w)| a * (k * x + p + w * t).sin())
                .sum()
        },
        move |x, t| {
            dot.iter()
                .map(|(k, a, p, w)| a * w * (k * x + p + w * t).cos())
                .sum()
        },
    )
    .with_label(format!("random-{seed}"))
}

pub fn smooth_background(grid: Grid1D) -> Result<GaugeField1D> {
    let xs = grid.coordinates();
    let a0 = xs.iter().map(|x| 0.3 * x.cos()).collect();
    let ax = xs.iter().map(|x| 0.2 + 0.4 * (2.0 * x).sin()).collect();
    Ok(GaugeField1D::new(grid, a0, ax)?)
}

/// `sigma3 conj(psi)`: the charge-conjugate partner under the same field.
pub fn conjugate(f: &WeylSpinorField1D) -> WeylSpinorField1D {
    f.clone().map_sites(|_, [a, b]| [a.conj(), -b.conj()])
}

fn max_density_diff(a: &WeylSpinorField1D, b: &WeylSpinorField1D) -> f64 {
    let (x, y) = (sector_probabilities(a), sector_probabilities(b));
    x.p_plus
        .iter()
        .zip(&y.p_plus)
        .chain(x.p_minus.iter().zip(&y.p_minus))
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max)
}

fn gauge(r: &Resolved) -> Result<Outcome> {
    let sign = ContinuationSign::parse(r.text("sign")).expect("validated choice");
    let p = DiracParams::new(
        r.non_negative("m")?,
        r.positive("c")?,
        r.positive("hbar")?,
        sign,
    )?;
    let e = r.f64("charge");
    let n = r.count("n", 8)?;
    let dt = r.positive("dt")?;
    let steps = r.count("steps", 1)?;
    let count = r.count("chi_count", 1)?;
    let amp = r.non_negative("chi_amplitude")?;
    let sigma = r.positive("sigma")?;
    let grid = Grid1D::new(n, TAU / n as f64, 0.0)?;
    let field = match r.text("background") {
        "smooth" => smooth_background(grid)?,
        _ => GaugeField1D::zero(grid),
    };
    let s = 0.5f64.sqrt();
    let packet = WeylSpinorField1D::gaussian(
        grid,
        3.0,
        sigma,
        r.f64("k0"),
        [Complex::new(s, 0.0), Complex::new(0.0, s)],
    )?;
    let base = CoupledState::opposite_charges(packet.clone(), packet.clone(), e, field.clone())?;
    let reference = evolve_coupled(&base, &p, &p, dt, steps)?;

    let mut table = Table::new(&[
        "case",
        "chi",
        "max_density_diff_a",
        "max_density_diff_b",
        "max_amplitude_mismatch",
    ]);
    let mut worst: f64 = 0.0;
    for case in 0..count {
        let chi = random_chi(grid, amp, r.seed().wrapping_add(case as u64));
        let moved = evolve_coupled(&gauge_transform(&base, &chi)?, &p, &p, dt, steps)?;
        let da = max_density_diff(&reference.species_a, &moved.species_a);
        let db = max_density_diff(&reference.species_b, &moved.species_b);
        // evolving then transforming must equal transforming then evolving
        let back = gauge_transform(&reference, &chi)?;
        let amp_err = [
            (back.species_a.phi_plus(), moved.species_a.phi_plus()),
            (back.species_a.phi_minus(), moved.species_a.phi_minus()),
            (back.species_b.phi_plus(), moved.species_b.phi_plus()),
            (back.species_b.phi_minus(), moved.species_b.phi_minus()),
        ]
        .iter()
        .flat_map(|(u, v)| u.iter().zip(v.iter()).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max);
        worst = worst.max(da).max(db);
        table.push(vec![
            case.into(),
            chi.label().into(),
            da.into(),
            db.into(),
            amp_err.into(),
        ]);
    }

    let pair = CoupledState::opposite_charges(
        packet.clone(),
        conjugate(&packet),
        e,
        smooth_background(grid)?,
    )?;
    let pair = evolve_coupled(&pair, &p, &p, dt, steps)?;
    let conj = max_density_diff(&pair.species_a, &pair.species_b);
    Ok(Outcome::new(table)
        .with("max_density_diff", worst)
        .with("charge_conjugation_max_diff", conj)
        .with("background", r.text("background")))
}
