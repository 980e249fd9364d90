use num_complex::Complex;
use persistq::maxwell::{
    divergence_residual, eb_from_rs, energy, evolve_maxwell_rs, evolve_photon_kac, helicity,
    maxwell_residual, random_solenoidal_eb, rs_from_eb,
};
use persistq::{Grid3D, RSField3D};

use super::fit_slope;
use crate::error::{invalid, Result};
use crate::output::Table;
use crate::params::{choice, float, int, Resolved};
use crate::{CommandSpec, Outcome};

pub fn initial_field(kind: &str, grid: Grid3D, modes: usize, seed: u64) -> Result<RSField3D> {
    Ok(match kind {
        "helical" => {
            let a = RSField3D::helicity_plane_wave(grid, [1, 2, 0], 1.0, 1)?;
            let b = RSField3D::helicity_plane_wave(grid, [0, 1, 1], 0.5, -1)?;
            let add = |x: &[persistq::maxwell::Vec3<f64>], y: &[persistq::maxwell::Vec3<f64>]| {
                x.iter()
                    .zip(y)
                    .map(|(u, v)| [0, 1, 2].map(|i| u[i] + v[i]))
                    .collect()
            };
            RSField3D::new(
                grid,
                add(a.f_plus(), b.f_plus()),
                add(a.f_minus(), b.f_minus()),
            )?
        }
        "uniform" => {
            let one = [
                Complex::new(1.0, 0.0),
                Complex::new(0.0, 0.5),
                Complex::new(0.0, 0.0),
            ];
            let zero = [Complex::new(0.0, 0.0); 3];
            RSField3D::new(grid, vec![one; grid.len()], vec![zero; grid.len()])?
        }
        _ => {
            let (e, b) = random_solenoidal_eb(&grid, modes, seed);
            rs_from_eb(grid, &e, &b)?
        }
    })
}

fn diff_norm(f: &RSField3D) -> f64 {
    f.f_plus()
        .iter()
        .zip(f.f_minus())
        .flat_map(|(p, m)| (0..3).map(move |a| (p[a] - m[a]).norm_sqr()))
        .sum::<f64>()
        .sqrt()
}

/// Final E and B on the plane `z = slice_z`, or the sampled diagnostics.
fn csv_table(r: &Resolved, series: Table, last: &RSField3D) -> Result<Table> {
    if r.text("table") == "series" {
        return Ok(series);
    }
    let [nx, ny, nz] = last.grid().dims();
    let iz = r.i64("slice_z");
    debug_assert!(iz >= 0 && (iz as usize) < nz);
    let eb = eb_from_rs(last);
    let mut t = Table::new(&["x", "y", "z", "ex", "ey", "ez", "bx", "by", "bz"]);
    for ix in 0..nx {
        for iy in 0..ny {
            let idx = last.grid().index(ix, iy, iz as usize);
            let [x, y, z] = last.grid().position(idx);
            let (e, b) = (eb.e[idx], eb.b[idx]);
            t.push(vec![
                x.into(),
                y.into(),
                z.into(),
                e[0].into(),
                e[1].into(),
                e[2].into(),
                b[0].into(),
                b[1].into(),
                b[2].into(),
            ]);
        }
    }
    Ok(t)
}

struct Setup {
    field: RSField3D,
    c: f64,
    dt: f64,
    steps: usize,
    samples: usize,
}

fn setup(r: &Resolved) -> Result<Setup> {
    let c = r.positive("c")?;
    let dt = r.positive("dt")?;
    let steps = r.count("steps", 1)?;
    let samples = r.count("samples", 1)?.min(steps);
    let n = r.count("n", 2)?;
    let modes = r.count("modes", 1)?;
    let length = r.positive("length")?;
    if n > 256 {
        return Err(invalid(format!(
            "`n` = {n} per axis is beyond what this driver allocates"
        )));
    }
    let iz = r.i64("slice_z");
    if iz < 0 || iz as usize >= n {
        return Err(invalid(format!("`slice_z` = {iz} outside 0..{n}")));
    }
    let grid = Grid3D::cube(n, length)?;
    let field = initial_field(r.text("init"), grid, modes, r.seed())?;
    Ok(Setup {
        field,
        c,
        dt,
        steps,
        samples,
    })
}

fn run_series(
    s: &Setup,
    step: impl Fn(&RSField3D, usize) -> Result<RSField3D>,
) -> Result<(Table, RSField3D, f64, f64, f64)> {
    let mut table = Table::new(&[
        "t",
        "energy",
        "helicity",
        "divergence",
        "helicity_difference_norm",
    ]);
    let (e0, h0, d0) = (
        energy(&s.field),
        helicity(&s.field),
        divergence_residual(&s.field),
    );
    let (mut de, mut dh, mut dd) = (0.0f64, 0.0f64, 0.0f64);
    let mut cur = s.field.clone();
    let mut push = |f: &RSField3D, table: &mut Table| {
        let (e, h, d) = (energy(f), helicity(f), divergence_residual(f));
        de = de.max((e - e0).abs() / e0.max(f64::MIN_POSITIVE));
        dh = dh.max((h - h0).abs() / e0.max(f64::MIN_POSITIVE));
        dd = dd.max((d - d0).abs());
        table.push(vec![
            f.time().into(),
            e.into(),
            h.into(),
            d.into(),
            diff_norm(f).into(),
        ]);
    };
    push(&cur, &mut table);
    let mut done = 0;
    for k in 1..=s.samples {
        let target = s.steps * k / s.samples;
        cur = step(&cur, target - done)?;
        done = target;
        push(&cur, &mut table);
    }
    Ok((table, cur, de, dh, dd))
}

const FIELD_PARAMS: [crate::params::ParamSpec; 10] = [
    int("n", "16", "grid points per axis"),
    float("length", "6.283185307179586", "periodic box side"),
    float("c", "1", "speed of light"),
    float("dt", "0.01", "time step"),
    int("steps", "1000", "number of steps"),
    int("samples", "20", "number of recorded times"),
    int("modes", "6", "random Fourier modes per field"),
    choice(
        "init",
        &["random", "helical", "uniform"],
        "random",
        "initial field",
    ),
    choice(
        "table",
        &["slice", "series"],
        "slice",
        "CSV content: final E and B on one z plane or sampled diagnostics",
    ),
    int("slice_z", "0", "z index of the exported plane"),
];

pub const MAXWELL: CommandSpec = CommandSpec {
    name: "maxwell",
    about: "Vacuum Maxwell evolution in Riemann-Silberstein form",
    params: &FIELD_PARAMS,
    run: maxwell,
};

fn maxwell(r: &Resolved) -> Result<Outcome> {
    let s = setup(r)?;
    let (table, last, de, dh, dd) = run_series(&s, |f, n| Ok(evolve_maxwell_rs(f, s.c, s.dt, n)?))?;
    let mid = evolve_maxwell_rs(&last, s.c, s.dt, 1)?;
    let next = evolve_maxwell_rs(&mid, s.c, s.dt, 1)?;
    let (re, rb) = maxwell_residual(&last, &mid, &next, s.c);
    let series = table.to_json_columns();
    Ok(Outcome::new(csv_table(r, table, &last)?)
        .with("series", series)
        .with("energy_relative_drift", de)
        .with("helicity_drift_over_energy", dh)
        .with("divergence_drift", dd)
        .with("projection_residual", s.field.projection_residual())
        .with("maxwell_residual_e", re)
        .with("maxwell_residual_b", rb))
}

const PHOTON_PARAMS: [crate::params::ParamSpec; 11] = {
    let mut p = [float("lambda_gamma", "0.5", "helicity switching rate"); 11];
    let mut i = 0;
    while i < 10 {
        p[i + 1] = FIELD_PARAMS[i];
        i += 1;
    }
    p[8] = choice(
        "init",
        &["random", "helical", "uniform"],
        "uniform",
        "initial field",
    );
    p
};

pub const PHOTON_KAC: CommandSpec = CommandSpec {
    name: "photon-kac",
    about: "Maxwell transport with persistent helicity switching",
    params: &PHOTON_PARAMS,
    run: photon_kac,
};

fn photon_kac(r: &Resolved) -> Result<Outcome> {
    let lambda = r.non_negative("lambda_gamma")?;
    let s = setup(r)?;
    let (table, last, de, dh, dd) =
        run_series(&s, |f, n| Ok(evolve_photon_kac(f, s.c, lambda, s.dt, n)?))?;
    let series = table.to_json_columns();
    let mut out = Outcome::new(csv_table(r, table, &last)?)
        .with("series", series)
        .with("energy_relative_drift", de)
        .with("helicity_drift_over_energy", dh)
        .with("divergence_drift", dd)
        .with("helicity_initial", helicity(&s.field))
        .with("helicity_final", helicity(&last));
    let (d0, d1) = (diff_norm(&s.field), diff_norm(&last));
    let t = last.time() - s.field.time();
    if lambda > 0.0 && d0 > 0.0 && d1 > 0.0 {
        let rate = fit_slope(&[0.0, t], &[d0.ln(), d1.ln()]);
        out.set("difference_decay_rate", -rate);
        out.set("difference_decay_rate_exact", 2.0 * lambda);
        if r.text("init") == "uniform" {
            out.set(
                "decay_rate_relative_error",
                ((-rate - 2.0 * lambda) / (2.0 * lambda)).abs(),
            );
        }
    }
    if lambda == 0.0 {
        let plain = evolve_maxwell_rs(&s.field, s.c, s.dt, s.steps)?;
        let kac = evolve_photon_kac(&s.field, s.c, 0.0, s.dt, s.steps)?;
        out.set("bitwise_equal_to_maxwell", plain == kac);
    }
    Ok(out)
}
