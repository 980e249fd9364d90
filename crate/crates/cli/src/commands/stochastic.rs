use persistq::stochastic::{
    diffusion_limit_check, evolve_master, evolve_master_symmetric, evolve_telegrapher,
    gaussian_cdf, kac_moments, mode_rates, sample_kac_paths, InitialDirection,
};
use persistq::{Direction, Grid1D, KacParams, SectorProb1D};

use super::fit_slope;
use crate::error::{invalid, Result};
use crate::output::Table;
use crate::params::{choice, float, int, ParamSpec, Resolved};
use crate::{CommandSpec, Outcome};

fn direction(r: &Resolved) -> Direction {
    match r.text("init") {
        "left" => Direction::Left,
        _ => Direction::Right,
    }
}

const KAC_PARAMS: &[ParamSpec] = &[
    float("c", "1", "speed"),
    float("lambda", "1", "switching rate"),
    float("t", "2", "final time"),
    int("paths", "100000", "number of sample paths"),
    float("x0", "0", "start position"),
    choice(
        "init",
        &["right", "left", "symmetric"],
        "right",
        "initial direction",
    ),
    int("bins", "200", "histogram cells across the light cone"),
];

pub const KAC_SIM: CommandSpec = CommandSpec {
    name: "kac-sim",
    about: "Monte Carlo sampling of Kac paths; sector histogram and moments",
    params: KAC_PARAMS,
    run: kac_sim,
};

fn kac_sim(r: &Resolved) -> Result<Outcome> {
    let params = KacParams::new(r.positive("c")?, r.non_negative("lambda")?)?;
    let t = r.positive("t")?;
    let n_paths = r.count("paths", 1)?;
    let bins = r.count("bins", 2)?;
    let x0 = r.f64("x0");
    let init = match r.text("init") {
        "symmetric" => InitialDirection::Symmetric,
        _ => InitialDirection::Fixed(direction(r)),
    };
    let half = params.c() * t;
    // bins + 1 sites so both light-cone edges have their own cell
    let grid = Grid1D::new(bins + 1, 2.0 * half / bins as f64, x0 - half)?;

    let ens = sample_kac_paths(&params, init, x0, t, n_paths, r.seed())?;
    let hist = ens.histogram(&grid);
    let mut table = Table::new(&["x", "density_plus", "density_minus", "density_total"]);
    for (i, x) in grid.coordinates().into_iter().enumerate() {
        let (p, m) = (hist.p_plus()[i], hist.p_minus()[i]);
        table.push(vec![x.into(), p.into(), m.into(), (p + m).into()]);
    }
    let mut out = Outcome::new(table)
        .with("mean_x", ens.mean_x())
        .with("stderr_x", ens.stderr_x())
        .with("mean_direction", ens.mean_direction())
        .with("fraction_right", ens.fraction_right())
        .with("max_displacement", ens.max_displacement())
        .with("light_cone_respected", ens.max_displacement() <= half);
    if let InitialDirection::Fixed(d) = init {
        let m = kac_moments(&params, d, t);
        let oracle = x0 + m.mean_x;
        out.set("mean_x_exact", oracle);
        out.set(
            "mean_x_z_score",
            (ens.mean_x() - oracle) / ens.stderr_x().max(f64::MIN_POSITIVE),
        );
        out.set("mean_direction_exact", m.mean_s);
    }
    Ok(out)
}

pub const MASTER: CommandSpec = CommandSpec {
    name: "master",
    about: "Exact lattice solution of the two-sector master equations",
    params: &[
        float("c", "1", "speed"),
        float("lambda", "1", "switching rate"),
        float("t", "2", "final time (a whole number of lattice steps)"),
        float("dx", "0.0078125", "lattice spacing; the step is dx/c"),
        int("n", "1024", "lattice sites"),
        float("x0", "0", "start position"),
        choice("init", &["right", "left"], "right", "initial direction"),
        choice(
            "scheme",
            &["symmetric", "shift-switch"],
            "symmetric",
            "switching placement",
        ),
    ],
    run: master,
};

fn master(r: &Resolved) -> Result<Outcome> {
    let params = KacParams::new(r.positive("c")?, r.non_negative("lambda")?)?;
    let t = r.positive("t")?;
    let dx = r.positive("dx")?;
    let n = r.count("n", 4)?;
    let dt = dx / params.c();
    let steps = (t / dt).round() as usize;
    if ((steps as f64) * dt - t).abs() > 1e-9 * t {
        return Err(invalid(format!(
            "t = {t} is not a whole number of steps dt = dx/c = {dt}"
        )));
    }
    if 2 * steps + 1 >= n {
        return Err(invalid(format!(
            "{n} sites cannot hold the light cone of {steps} steps"
        )));
    }
    let origin = r.f64("x0") - dx * (n / 2) as f64;
    let grid = Grid1D::new(n, dx, origin)?;
    let start = SectorProb1D::delta(grid, n / 2, direction(r) == Direction::Right)?;
    let out = match r.text("scheme") {
        "shift-switch" => evolve_master(&start, &params, dt, steps)?,
        _ => evolve_master_symmetric(&start, &params, dt, steps)?,
    };
    let mut table = Table::new(&["x", "p_plus", "p_minus", "total"]);
    let xs = grid.coordinates();
    let tot = out.total();
    for i in 0..n {
        table.push(vec![
            xs[i].into(),
            out.p_plus()[i].into(),
            out.p_minus()[i].into(),
            tot[i].into(),
        ]);
    }
    let m0 = start.total_mass();
    let m1 = out.total_mass();
    let mean: f64 = xs.iter().zip(&tot).map(|(x, p)| x * p).sum::<f64>() * dx / m1;
    let exact = r.f64("x0") + kac_moments(&params, direction(r), t).mean_x;
    Ok(Outcome::new(table)
        .with("steps", steps)
        .with("dt", dt)
        .with("mass_initial", m0)
        .with("mass_final", m1)
        .with("mass_relative_drift", (m1 - m0).abs() / m0)
        .with("mean_x", mean)
        .with("mean_x_exact", exact))
}

pub const TELEGRAPHER: CommandSpec = CommandSpec {
    name: "telegrapher",
    about: "Damped leapfrog for the Telegrapher equation on a single Fourier mode",
    params: &[
        float("c", "1", "speed"),
        float("lambda", "2", "switching rate"),
        int("n", "1024", "grid points"),
        float("length", "6.283185307179586", "periodic domain length"),
        int("mode", "1", "integer mode number; k = 2 pi mode / length"),
        float("t", "2", "final time"),
        float("cfl", "0.5", "c dt / dx"),
        int("samples", "64", "number of recorded times"),
    ],
    run: telegrapher,
};

fn telegrapher(r: &Resolved) -> Result<Outcome> {
    let params = KacParams::new(r.positive("c")?, r.non_negative("lambda")?)?;
    let n = r.count("n", 4)?;
    let length = r.positive("length")?;
    let mode = r.i64("mode");
    let t = r.positive("t")?;
    let cfl = r.positive("cfl")?;
    if cfl > 1.0 {
        return Err(invalid(format!("`cfl` must be <= 1, got {cfl}")));
    }
    let samples = r.count("samples", 2)?;
    let grid = Grid1D::new(n, length / n as f64, 0.0)?;
    let k = std::f64::consts::TAU * mode as f64 / length;
    let [slow, fast] = mode_rates(&params, k);
    let overdamped = slow.im == 0.0;
    let dt_max = cfl * grid.dx() / params.c();
    let chunk = ((t / samples as f64) / dt_max).ceil().max(1.0) as usize;
    let dt = t / (samples * chunk) as f64;

    // the slow eigenmode: P = cos(kx), P_t = Re(mu_plus) P when overdamped
    let xs = grid.coordinates();
    let mut p: Vec<f64> = xs.iter().map(|x| (k * x).cos()).collect();
    let mut v: Vec<f64> = p.iter().map(|q| slow.re * q).collect();
    if !overdamped {
        v.iter_mut().for_each(|q| *q = 0.0);
    }
    let project = |f: &[f64]| {
        2.0 / n as f64
            * f.iter()
                .zip(&xs)
                .map(|(a, x)| a * (k * x).cos())
                .sum::<f64>()
    };
    let mut table = Table::new(&["t", "amplitude", "amplitude_exact"]);
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    let a0 = project(&p);
    table.push(vec![0.0.into(), a0.into(), 1.0.into()]);
    for s in 1..=samples {
        let (np, nv) = evolve_telegrapher(&p, &v, &params, &grid, dt, chunk)?;
        p = np;
        v = nv;
        let tt = (s * chunk) as f64 * dt;
        let a = project(&p);
        let exact = if overdamped {
            (slow.re * tt).exp()
        } else {
            // real part of the two-branch solution with P_t(0) = 0
            let w = slow.im;
            (-params.lambda() * tt).exp() * ((w * tt).cos() + params.lambda() / w * (w * tt).sin())
        };
        table.push(vec![tt.into(), a.into(), exact.into()]);
        if a > 0.0 {
            ts.push(tt);
            logs.push(a.ln());
        }
    }
    let mut out = Outcome::new(table)
        .with("k", k)
        .with("dt", dt)
        .with("mu_plus_re", slow.re)
        .with("mu_plus_im", slow.im)
        .with("mu_minus_re", fast.re)
        .with("overdamped", overdamped);
    if overdamped && ts.len() >= 2 {
        let rate = fit_slope(&ts, &logs);
        out.set("measured_rate", rate);
        out.set("rate_relative_error", ((rate - slow.re) / slow.re).abs());
    }
    Ok(out)
}

pub const DIFFUSION_LIMIT: CommandSpec = CommandSpec {
    name: "diffusion-limit",
    about: "Kolmogorov-Smirnov distance of the symmetrized Kac law to the heat kernel",
    params: &[
        float("nu", "0.5", "diffusion coefficient; c^2 = 2 lambda nu"),
        float("lambda", "100", "switching rate"),
        float("t", "1", "final time"),
        int("paths", "100000", "number of sample paths"),
        int("points", "201", "CDF sample points"),
    ],
    run: diffusion_limit,
};

fn diffusion_limit(r: &Resolved) -> Result<Outcome> {
    let nu = r.positive("nu")?;
    let lambda = r.positive("lambda")?;
    let t = r.positive("t")?;
    let n_paths = r.count("paths", 1)?;
    let points = r.count("points", 2)?;
    let check = diffusion_limit_check(nu, lambda, t, n_paths, r.seed())?;
    // same seed, same ensemble: rebuild it for the empirical CDF
    let params = KacParams::new(check.c, lambda)?;
    let ens = sample_kac_paths(
        &params,
        InitialDirection::Symmetric,
        0.0,
        t,
        n_paths,
        r.seed(),
    )?;
    let mut xs = ens.positions().to_vec();
    xs.sort_by(f64::total_cmp);
    let sd = check.variance.sqrt();
    let mut table = Table::new(&["x", "ecdf", "gaussian_cdf"]);
    for i in 0..points {
        let x = -5.0 * sd + 10.0 * sd * i as f64 / (points - 1) as f64;
        let below = xs.partition_point(|v| *v <= x);
        table.push(vec![
            x.into(),
            (below as f64 / n_paths as f64).into(),
            gaussian_cdf(x, check.variance).into(),
        ]);
    }
    Ok(Outcome::new(table)
        .with("ks", check.ks)
        .with("c", check.c)
        .with("variance", check.variance)
        .with("kac_variance", check.kac_variance)
        .with("cone_in_sigmas", check.cone_in_sigmas))
}
