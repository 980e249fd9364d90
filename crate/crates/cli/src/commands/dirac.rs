use num_complex::Complex;
use persistq::dirac::{
    dirac_dispersion, evolve_dirac_1d, evolve_dirac_3d, measure_mode_frequency,
    measure_oscillation_frequency, positive_energy_spinor_1d, positive_energy_spinor_3d,
    ContinuationSign,
};
use persistq::{Complex64, DiracParams, DiracSpinorField3D, Grid1D, Grid3D, WeylSpinorField1D};

use super::parse_list;
use crate::error::{invalid, Result};
use crate::output::Table;
use crate::params::{choice, float, int, text, Resolved};
use crate::{CommandSpec, Outcome};

fn params(r: &Resolved, mass: f64) -> Result<DiracParams> {
    let sign = ContinuationSign::parse(r.text("sign")).expect("validated choice");
    Ok(DiracParams::new(
        mass,
        r.positive("c")?,
        r.positive("hbar")?,
        sign,
    )?)
}

fn czero() -> Complex64 {
    Complex::new(0.0, 0.0)
}

pub const DIRAC1D: CommandSpec = CommandSpec {
    name: "dirac1d",
    about: "Split-step evolution of a 1D Weyl-form Dirac wave packet",
    params: &[
        float("m", "1", "mass"),
        float("c", "1", "speed of light"),
        float("hbar", "1", "reduced Planck constant"),
        choice("sign", &["plus", "minus"], "plus", "continuation sign"),
        int("n", "512", "grid points"),
        float("length", "40", "periodic domain length"),
        float("x0", "0", "packet centre"),
        float("sigma", "1", "packet width (density standard deviation)"),
        float("k0", "2", "mean wavenumber"),
        choice(
            "spinor",
            &["positive", "right", "left"],
            "positive",
            "internal state",
        ),
        float("dt", "0.01", "time step"),
        int("steps", "1000", "number of steps"),
        int("samples", "100", "number of recorded times"),
        choice(
            "table",
            &["snapshot", "series"],
            "snapshot",
            "CSV content: final field per site or sampled observables",
        ),
    ],
    run: dirac1d,
};

fn dirac1d(r: &Resolved) -> Result<Outcome> {
    let p = params(r, r.non_negative("m")?)?;
    let n = r.count("n", 4)?;
    let grid = Grid1D::centered(n, r.positive("length")?)?;
    let dt = r.positive("dt")?;
    let steps = r.count("steps", 1)?;
    let samples = r.count("samples", 1)?.min(steps);
    let sigma = r.positive("sigma")?;
    let k0 = r.f64("k0");
    let one = Complex::new(1.0, 0.0);
    let spinor = match r.text("spinor") {
        "right" => [one, czero()],
        "left" => [czero(), one],
        _ => positive_energy_spinor_1d(k0, &p),
    };
    let mut field = WeylSpinorField1D::gaussian(grid, r.f64("x0"), sigma, k0, spinor)?;
    let n0 = field.norm();
    let xs = grid.coordinates();
    let dx = grid.dx();
    let mut table = Table::new(&["t", "norm", "p_plus", "p_minus", "mean_x"]);
    let record = |f: &WeylSpinorField1D, table: &mut Table| {
        let (pp, pm) = f.populations();
        let a: f64 = pp.iter().sum::<f64>() * dx;
        let b: f64 = pm.iter().sum::<f64>() * dx;
        let mx: f64 = xs
            .iter()
            .zip(pp.iter().zip(&pm))
            .map(|(x, (u, v))| x * (u + v))
            .sum::<f64>()
            * dx
            / (a + b);
        table.push(vec![
            f.time().into(),
            f.norm().into(),
            a.into(),
            b.into(),
            mx.into(),
        ]);
        (f.norm() - n0).abs() / n0
    };
    let mut drift = record(&field, &mut table);
    let mut done = 0;
    for s in 1..=samples {
        let target = steps * s / samples;
        field = evolve_dirac_1d(&field, &p, None, dt, target - done)?;
        done = target;
        drift = drift.max(record(&field, &mut table));
    }
    let mut snapshot = Table::new(&[
        "x",
        "re_phi_plus",
        "im_phi_plus",
        "re_phi_minus",
        "im_phi_minus",
        "rho_plus",
        "rho_minus",
    ]);
    for (i, x) in xs.iter().enumerate() {
        let (a, b) = (field.phi_plus()[i], field.phi_minus()[i]);
        snapshot.push(vec![
            (*x).into(),
            a.re.into(),
            a.im.into(),
            b.re.into(),
            b.im.into(),
            a.norm_sqr().into(),
            b.norm_sqr().into(),
        ]);
    }
    let series = table.to_json_columns();
    let csv = if r.text("table") == "series" {
        table
    } else {
        snapshot
    };
    Ok(Outcome::new(csv)
        .with("series", series)
        .with("norm_relative_drift", drift)
        .with("final_time", field.time())
        .with("mass_term", p.mass_term()))
}

pub const DIRAC3D: CommandSpec = CommandSpec {
    name: "dirac3d",
    about: "Exact per-mode evolution of the 3D chiral Dirac equation",
    params: &[
        float("m", "1", "mass"),
        float("c", "1", "speed of light"),
        float("hbar", "1", "reduced Planck constant"),
        choice("sign", &["plus", "minus"], "plus", "continuation sign"),
        int("n", "8", "grid points per axis"),
        float("length", "6.283185307179586", "periodic box side"),
        int("kx", "0", "mode number along x"),
        int("ky", "0", "mode number along y"),
        int("kz", "1", "mode number along z"),
        choice(
            "spinor",
            &["positive", "left-helical"],
            "positive",
            "internal state",
        ),
        float("dt", "0.05", "time step"),
        int("steps", "2000", "number of steps"),
    ],
    run: dirac3d,
};

fn dirac3d(r: &Resolved) -> Result<Outcome> {
    let p = params(r, r.non_negative("m")?)?;
    let n = r.count("n", 2)?;
    let length = r.positive("length")?;
    let dt = r.positive("dt")?;
    let steps = r.count("steps", 16)?;
    let mode = [r.i64("kx"), r.i64("ky"), r.i64("kz")];
    let grid = Grid3D::cube(n, length)?;
    let k = mode.map(|m| std::f64::consts::TAU * m as f64 / length);
    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let u = match r.text("spinor") {
        "left-helical" => {
            if kn == 0.0 {
                return Err(invalid("`left-helical` needs a non-zero mode"));
            }
            // eigenvector of sigma.k_hat with eigenvalue +1 in the left block
            let (nx, ny, nz) = (k[0] / kn, k[1] / kn, k[2] / kn);
            let v = if nz > -1.0 + 1e-12 {
                let s = (2.0 * (1.0 + nz)).sqrt();
                [
                    Complex::new((1.0 + nz) / s, 0.0),
                    Complex::new(nx / s, ny / s),
                ]
            } else {
                [czero(), Complex::new(1.0, 0.0)]
            };
            [v[0], v[1], czero(), czero()]
        }
        _ => positive_energy_spinor_3d(k, &p),
    };
    let mut field = DiracSpinorField3D::plane_wave(grid, mode, u)?;
    let n0 = field.norm();
    let mut table = Table::new(&["t", "norm", "left", "right", "overlap_re", "overlap_im"]);
    let mut series = Vec::with_capacity(steps + 1);
    let mut drift: f64 = 0.0;
    let mut leak: f64 = 0.0;
    for s in 0..=steps {
        let sp = field.spinors()[0];
        let ov: Complex64 = (0..4).map(|a| u[a].conj() * sp[a]).sum();
        let (l, rr) = field.sector_norms();
        series.push(ov);
        drift = drift.max((field.norm() - n0).abs() / n0);
        leak = leak.max(rr);
        table.push(vec![
            (s as f64 * dt).into(),
            field.norm().into(),
            l.into(),
            rr.into(),
            ov.re.into(),
            ov.im.into(),
        ]);
        if s < steps {
            field = evolve_dirac_3d(&field, &p, dt, 1)?;
        }
    }
    let oracle = dirac_dispersion(kn, &p) / p.hbar();
    let mut out = Outcome::new(table)
        .with("norm_relative_drift", drift)
        .with("frequency_exact", oracle);
    match measure_mode_frequency(&series, dt) {
        Ok(w) => {
            out.set("frequency_measured", w);
            if oracle != 0.0 {
                out.set("frequency_relative_error", ((w - oracle) / oracle).abs());
            }
        }
        Err(e) => out.set("frequency_measured", e.to_string()),
    }
    if r.text("spinor") == "left-helical" {
        out.set("right_sector_max", leak);
    }
    Ok(out)
}

pub const DISPERSION: CommandSpec = CommandSpec {
    name: "dispersion",
    about: "Measured Dirac mode frequencies against sqrt((hbar c k)^2 + (m c^2)^2) / hbar",
    params: &[
        text("masses", "0,0.5,1", "comma-separated masses"),
        text("modes", "0,1,2,4", "comma-separated integer modes"),
        float("c", "1", "speed of light"),
        float("hbar", "1", "reduced Planck constant"),
        choice("sign", &["plus", "minus"], "plus", "continuation sign"),
        int("n", "16", "grid points on a 2 pi ring"),
        float("dt", "0.002", "time step"),
        int("stride", "10", "steps between samples"),
        int("samples", "3000", "number of samples"),
    ],
    run: dispersion,
};

fn dispersion(r: &Resolved) -> Result<Outcome> {
    let masses: Vec<f64> = parse_list("masses", r.text("masses"))?;
    let modes: Vec<i64> = parse_list("modes", r.text("modes"))?;
    if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
        return Err(invalid("`masses` must be finite and >= 0"));
    }
    let n = r.count("n", 4)?;
    if modes.iter().any(|k| k.unsigned_abs() as usize * 2 >= n) {
        return Err(invalid(format!(
            "every mode must lie strictly below the Nyquist mode {}",
            n / 2
        )));
    }
    let dt = r.positive("dt")?;
    let stride = r.count("stride", 1)?;
    let samples = r.count("samples", 16)?;
    for &m in &masses {
        params(r, m)?;
    }
    let grid = Grid1D::new(n, std::f64::consts::TAU / n as f64, 0.0)?;
    let ts = dt * stride as f64;
    let mut table = Table::new(&["m", "k", "measured", "exact", "relative_error"]);
    let mut worst: f64 = 0.0;
    for &m in &masses {
        let p = params(r, m)?;
        for &mode in &modes {
            let k = mode as f64;
            let u = positive_energy_spinor_1d(k, &p);
            let mut f = WeylSpinorField1D::plane_wave(grid, mode, u)?;
            let mut series = Vec::with_capacity(samples);
            for _ in 0..samples {
                series.push(u[0].conj() * f.phi_plus()[0] + u[1].conj() * f.phi_minus()[0]);
                f = evolve_dirac_1d(&f, &p, None, dt, stride)?;
            }
            let w = measure_mode_frequency(&series, ts)?;
            let exact = dirac_dispersion(k, &p) / p.hbar();
            let err = if exact == 0.0 {
                w.abs()
            } else {
                ((w - exact) / exact).abs()
            };
            worst = worst.max(err);
            table.push(vec![m.into(), k.into(), w.into(), exact.into(), err.into()]);
        }
    }
    // rest-frame sector oscillation at 2 m c^2 / hbar
    let mut rest = serde_json::Map::new();
    let mut rest_worst: f64 = 0.0;
    for &m in masses.iter().filter(|m| **m > 0.0) {
        let p = params(r, m)?;
        let g = Grid1D::centered(4, 1.0)?;
        let mut f = WeylSpinorField1D::new(g, vec![Complex::new(1.0, 0.0); 4], vec![czero(); 4])?;
        let mut series = Vec::with_capacity(samples);
        for _ in 0..samples {
            series.push(f.populations().0[0]);
            f = evolve_dirac_1d(&f, &p, None, dt, stride)?;
        }
        let w = measure_oscillation_frequency(&series, ts)?;
        let exact = 2.0 * p.rest_energy() / p.hbar();
        let err = ((w - exact) / exact).abs();
        rest_worst = rest_worst.max(err);
        rest.insert(
            format!("m={m}"),
            serde_json::json!({"measured": w, "exact": exact, "relative_error": err}),
        );
    }
    Ok(Outcome::new(table)
        .with("max_relative_error", worst)
        .with("rest_frame", rest)
        .with("rest_frame_max_relative_error", rest_worst))
}
