use num_complex::Complex;
use persistq::dirac::{evolve_dirac_1d, positive_energy_spinor_1d, ContinuationSign};
use persistq::nelson::{
    gordon_decompose, gordon_plane_wave, hydrogen_1s, oscillator_eigenstate,
    quantum_potential_from_u, stationarity_residual, transition_frequency, Domain, GordonInput,
};
use persistq::{DiracParams, Grid1D, RadialGrid, StationaryState, WeylSpinorField1D};

use super::parse_list;
use crate::error::{invalid, Result};
use crate::output::Table;
use crate::params::{choice, float, int, text, Resolved};
use crate::{CommandSpec, Outcome};

pub const NELSON: CommandSpec = CommandSpec {
    name: "nelson",
    about: "Osmotic and current velocities, quantum potential and the V + Q = E balance",
    params: &[
        choice(
            "state",
            &["oscillator", "hydrogen", "plane-wave"],
            "oscillator",
            "analytic stationary state",
        ),
        int(
            "level",
            "0",
            "oscillator quantum number, or winding number for plane-wave",
        ),
        int("points", "1024", "grid points"),
        float("length", "20", "periodic domain length"),
        float("r_min", "0.5", "inner radius (hydrogen)"),
        float("r_max", "20", "outer radius (hydrogen)"),
        float("m", "1", "mass"),
        float("omega", "1", "oscillator frequency"),
        float("hbar", "1", "reduced Planck constant"),
    ],
    run: nelson,
};

fn nelson(r: &Resolved) -> Result<Outcome> {
    let points = r.count("points", 8)?;
    let level = r.count("level", 0)?;
    let m = r.positive("m")?;
    let hbar = r.positive("hbar")?;
    let omega = r.positive("omega")?;
    let (state, next_level_gap) = match r.text("state") {
        "hydrogen" => {
            if m != 1.0 || hbar != 1.0 {
                return Err(invalid(
                    "the hydrogen-like state is tabulated in atomic units (m = hbar = 1)",
                ));
            }
            let (r0, r1) = (r.positive("r_min")?, r.positive("r_max")?);
            if r1 <= r0 {
                return Err(invalid("`r_max` must exceed `r_min`"));
            }
            let g = RadialGrid::spanning(points, r0, r1)?;
            let a = hydrogen_1s(&g);
            // 2s - 1s in atomic units
            let gap = -0.125 - a.energy;
            (
                StationaryState::from_psi(
                    Domain::Radial(g),
                    &a.psi,
                    a.potential,
                    a.energy,
                    m,
                    hbar,
                )?,
                gap,
            )
        }
        "plane-wave" => {
            let g = Grid1D::new(points, r.positive("length")? / points as f64, 0.0)?;
            let kk = std::f64::consts::TAU * level as f64 / g.length();
            let psi: Vec<_> = g
                .coordinates()
                .iter()
                .map(|x| Complex::from_polar(1.0, kk * x))
                .collect();
            let e = hbar * hbar * kk * kk / (2.0 * m);
            (
                StationaryState::from_psi(
                    Domain::Periodic(g),
                    &psi,
                    vec![0.0; points],
                    e,
                    m,
                    hbar,
                )?,
                0.0,
            )
        }
        _ => {
            let g = Grid1D::centered(points, r.positive("length")?)?;
            let a = oscillator_eigenstate(level, &g, m, omega, hbar)?;
            (
                StationaryState::from_psi(
                    Domain::Periodic(g),
                    &a.psi,
                    a.potential,
                    a.energy,
                    m,
                    hbar,
                )?,
                hbar * omega,
            )
        }
    };
    let u = state.osmotic_velocity();
    let v = state.current_velocity();
    let q = state.quantum_potential();
    let q_u = quantum_potential_from_u(&u, m, hbar, &state.domain)?;
    let res = stationarity_residual(&state);
    let xs = state.domain.coordinates();
    let mut table = Table::new(&["x", "rho", "u", "v", "q", "q_from_u", "residual", "valid"]);
    for i in 0..xs.len() {
        table.push(vec![
            xs[i].into(),
            state.rho[i].into(),
            u.values[i].into(),
            v[i].into(),
            q.values[i].into(),
            q_u.values[i].into(),
            res.field.values[i].into(),
            res.field.valid[i].into(),
        ]);
    }
    // states with current need the kinetic term: V + Q + m v^2 / 2 = E
    let with_current = (0..xs.len())
        .filter(|&i| res.field.valid[i])
        .map(|i| (res.field.values[i] + 0.5 * m * v[i] * v[i]).abs())
        .fold(0.0f64, f64::max);
    let mut out = Outcome::new(table)
        .with("energy", state.energy)
        .with("max_residual_with_current", with_current)
        .with("max_residual", res.max)
        .with("masked_fraction", res.field.masked_fraction())
        .with("quantum_potential_forms_max_diff", q.max_abs_diff(&q_u))
        .with(
            "max_current_velocity",
            v.iter().fold(0.0f64, |a, b| a.max(b.abs())),
        )
        .with("total_probability", state.total_probability())
        .with(
            "amplitude_normalization",
            "rho = |psi|^2 of the unit-normalized eigenfunction; R = ln(rho)/2 with no added constant",
        );
    if next_level_gap > 0.0 {
        out.set(
            "transition_frequency_to_next_level",
            transition_frequency(state.energy + next_level_gap, state.energy, hbar)?,
        );
    }
    Ok(out)
}

pub const GORDON: CommandSpec = CommandSpec {
    name: "gordon",
    about: "Gordon split of the Dirac current into convective and spin parts",
    params: &[
        text(
            "ks",
            "-4,-2,-1,0,1,2,3,4,5,6",
            "comma-separated integer wavenumbers",
        ),
        text(
            "masses",
            "0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5,2.75",
            "comma-separated masses, paired with ks",
        ),
        float("c", "1", "speed of light"),
        float("hbar", "1", "reduced Planck constant"),
        choice("sign", &["plus", "minus"], "plus", "continuation sign"),
        int("n", "32", "grid points on a 2 pi ring"),
        choice(
            "source",
            &["analytic", "evolved"],
            "analytic",
            "plane wave in closed form or after evolution",
        ),
        float("dt", "0.01", "time step for the evolved source"),
        int("steps", "100", "steps for the evolved source"),
    ],
    run: gordon,
};

fn gordon(r: &Resolved) -> Result<Outcome> {
    let ks: Vec<i64> = parse_list("ks", r.text("ks"))?;
    let masses: Vec<f64> = parse_list("masses", r.text("masses"))?;
    if ks.len() != masses.len() {
        return Err(invalid(format!(
            "{} ks but {} masses",
            ks.len(),
            masses.len()
        )));
    }
    if masses.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
        return Err(invalid("the Gordon split needs every mass > 0"));
    }
    let n = r.count("n", 4)?;
    if ks.iter().any(|k| k.unsigned_abs() as usize * 2 >= n) {
        return Err(invalid(format!(
            "every k must lie below the Nyquist mode {}",
            n / 2
        )));
    }
    let dt = r.positive("dt")?;
    let steps = r.count("steps", 0)?;
    let (c, hbar) = (r.positive("c")?, r.positive("hbar")?);
    let sign = ContinuationSign::parse(r.text("sign")).expect("validated choice");
    let grid = Grid1D::new(n, std::f64::consts::TAU / n as f64, 0.0)?;
    let mut table = Table::new(&[
        "k",
        "m",
        "residual",
        "j0_total",
        "j1_total",
        "j1_convective",
        "j1_spin",
    ]);
    let mut worst: f64 = 0.0;
    for (&k, &m) in ks.iter().zip(&masses) {
        let p = DiracParams::new(m, c, hbar, sign)?;
        let input = match r.text("source") {
            "evolved" => {
                let u = positive_energy_spinor_1d(k as f64, &p);
                let f = WeylSpinorField1D::plane_wave(grid, k, u)?;
                let f = evolve_dirac_1d(&f, &p, None, dt, steps)?;
                GordonInput::on_shell(&f, &p)?
            }
            _ => gordon_plane_wave(k as f64, &p, &grid),
        };
        let d = gordon_decompose(&input, &p)?;
        worst = worst.max(d.residual);
        table.push(vec![
            k.into(),
            m.into(),
            d.residual.into(),
            d.total[0][0].into(),
            d.total[1][0].into(),
            d.convective[1][0].into(),
            d.spin[1][0].into(),
        ]);
    }
    Ok(Outcome::new(table)
        .with("max_residual", worst)
        .with("cases", ks.len()))
}
