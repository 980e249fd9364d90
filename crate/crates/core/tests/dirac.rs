use num_complex::Complex;
use persistq::dirac::{
    dirac_dispersion, evolve_dirac_1d, evolve_dirac_3d, mass_step_matrix, measure_mode_frequency,
    measure_oscillation_frequency, positive_energy_spinor_1d, positive_energy_spinor_3d,
    reattach_survival, ContinuationSign,
};
use persistq::stochastic::switching_matrix;
use persistq::{Complex64, DiracParams, DiracSpinorField3D, Grid1D, Grid3D, WeylSpinorField1D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

fn random_field(grid: Grid1D, seed: u64) -> WeylSpinorField1D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    // smooth random superposition of low modes
    let modes: Vec<(f64, Complex64, Complex64)> = (0..6)
        .map(|_| {
            (
                rng.random_range(-4i32..=4) as f64,
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    let k0 = std::f64::consts::TAU / grid.length();
    let xs = grid.coordinates();
    let comp = |which: usize| -> Vec<Complex64> {
        xs.iter()
            .map(|&x| {
                modes
                    .iter()
                    .map(|(m, a, b)| {
                        (if which == 0 { *a } else { *b }) * Complex::new(0.0, m * k0 * x).exp()
                    })
                    .sum()
            })
            .collect()
    };
    assert_eq!(n, xs.len());
    WeylSpinorField1D::new(grid, comp(0), comp(1))
        .unwrap()
        .normalized()
        .unwrap()
}

#[test]
fn norm_is_conserved_over_ten_thousand_steps() {
    let g = Grid1D::centered(128, 20.0).unwrap();
    let p = DiracParams::natural(1.0).unwrap();
    let f = random_field(g, 1);
    let out = evolve_dirac_1d(&f, &p, None, p.default_dt(&g), 10_000).unwrap();
    assert!((out.norm() - f.norm()).abs() / f.norm() <= 1e-10);
}

#[test]
fn rest_frame_population_cycle() {
    let g = Grid1D::centered(8, 1.0).unwrap();
    let p = DiracParams::natural(1.0).unwrap();
    let f = WeylSpinorField1D::new(g, vec![c(1.0, 0.0); 8], vec![c(0.0, 0.0); 8]).unwrap();
    let n = 1000;
    let dt = std::f64::consts::PI / n as f64;
    let mut cur = f.clone();
    for step in 1..=n {
        cur = evolve_dirac_1d(&cur, &p, None, dt, 1).unwrap();
        let t = step as f64 * dt;
        let (pp, _) = cur.populations();
        assert!((pp[0] - t.cos().powi(2)).abs() < 1e-12);
    }
    assert!((cur.populations().0[5] - 1.0).abs() < 1e-12);
}

#[test]
fn rest_frame_oscillation_frequency() {
    for m in [0.5, 1.0, 2.0] {
        let g = Grid1D::centered(8, 1.0).unwrap();
        let p = DiracParams::natural(m).unwrap();
        let mut cur =
            WeylSpinorField1D::new(g, vec![c(1.0, 0.0); 8], vec![c(0.0, 0.0); 8]).unwrap();
        let dt = 0.01;
        let mut series = Vec::new();
        for _ in 0..4000 {
            series.push(cur.populations().0[0]);
            cur = evolve_dirac_1d(&cur, &p, None, dt, 1).unwrap();
        }
        let w = measure_oscillation_frequency(&series, dt).unwrap();
        assert!((w / (2.0 * m) - 1.0).abs() < 1e-4, "m={m} w={w}");
    }
}

#[test]
fn massless_right_packet_translates() {
    let g = Grid1D::centered(256, 20.0).unwrap();
    let p = DiracParams::natural(0.0).unwrap();
    let sigma = 0.7;
    let f = WeylSpinorField1D::gaussian(g, -3.0, sigma, 0.0, [c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let dt = 0.01;
    let steps = 500;
    let out = evolve_dirac_1d(&f, &p, None, dt, steps).unwrap();
    let shift = steps as f64 * dt;
    let want = WeylSpinorField1D::gaussian(g, -3.0 + shift, sigma, 0.0, [c(1.0, 0.0), c(0.0, 0.0)])
        .unwrap();
    let err = out
        .phi_plus()
        .iter()
        .zip(want.phi_plus())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err <= 1e-10, "err {err}");
    assert!(out.phi_minus().iter().all(|z| z.norm() < 1e-14));
}

fn mode_frequency_1d(n: usize, k_mode: i64, m: f64) -> (f64, f64) {
    let g = Grid1D::new(n, std::f64::consts::TAU / n as f64, 0.0).unwrap();
    let p = DiracParams::natural(m).unwrap();
    let k = k_mode as f64;
    let u = positive_energy_spinor_1d(k, &p);
    let mut cur = WeylSpinorField1D::plane_wave(g, k_mode, u).unwrap();
    let e = dirac_dispersion(k, &p);
    let dt = 0.002;
    let stride = 10;
    let n_samples = 3000;
    let mut series = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        // overlap with the initial spinor at x = 0
        series.push(u[0].conj() * cur.phi_plus()[0] + u[1].conj() * cur.phi_minus()[0]);
        cur = evolve_dirac_1d(&cur, &p, None, dt, stride).unwrap();
    }
    (
        measure_mode_frequency(&series, dt * stride as f64).unwrap(),
        e,
    )
}

#[test]
fn dispersion_sweep() {
    for m in [0.0, 0.5, 1.0] {
        for k in [0, 1, 2, 4] {
            let (w, e) = mode_frequency_1d(16, k, m);
            if e == 0.0 {
                assert_eq!(w, 0.0);
            } else {
                assert!((w / e - 1.0).abs() < 1e-4, "m={m} k={k}: {w} vs {e}");
            }
        }
    }
}

#[test]
fn dispersion_sixteen_modes() {
    for k in -7..=8 {
        let (w, e) = mode_frequency_1d(32, k, 0.5);
        assert!((w / e - 1.0).abs() < 1e-4, "k={k}: {w} vs {e}");
    }
}

#[test]
fn continuation_reproduces_mass_factor() {
    for m in [0.0, 0.3, 1.0, 2.5] {
        for dt in [1e-3, 0.05, 0.7] {
            let p = DiracParams::natural(m).unwrap();
            let kac = p.to_kac().unwrap();
            let continued = switching_matrix(Complex::new(0.0, kac.lambda()), dt, false);
            assert!(continued.max_abs_diff(&mass_step_matrix(&p, dt)) <= 1e-15);
            let minus = p.with_sign(ContinuationSign::Minus);
            let continued = switching_matrix(Complex::new(0.0, -kac.lambda()), dt, false);
            assert!(continued.max_abs_diff(&mass_step_matrix(&minus, dt)) <= 1e-15);
        }
    }
}

#[test]
fn sign_conventions_share_populations() {
    let g = Grid1D::centered(64, 10.0).unwrap();
    for seed in 0..5 {
        let f = random_field(g, 10 + seed);
        let flipped = f.clone().map_sites(|_, [a, b]| [a, -b]);
        let plus = DiracParams::natural(0.8).unwrap();
        let minus = plus.with_sign(ContinuationSign::Minus);
        let a = evolve_dirac_1d(&f, &plus, None, 0.01, 500).unwrap();
        let b = evolve_dirac_1d(&flipped, &minus, None, 0.01, 500).unwrap();
        let (pa, ma) = a.populations();
        let (pb, mb) = b.populations();
        for i in 0..g.n() {
            assert!((pa[i] - pb[i]).abs() <= 1e-12 && (ma[i] - mb[i]).abs() <= 1e-12);
        }
    }
}

#[test]
fn survival_factor_reattaches() {
    let g = Grid1D::centered(16, 1.0).unwrap();
    let f = random_field(g, 3);
    let s = reattach_survival(&f, 2.0, 0.5);
    assert!((s.norm() / f.norm() - (-2.0f64).exp()).abs() < 1e-14);
}

#[test]
fn frequency_rejects_short_series() {
    let s = vec![c(1.0, 0.0); 10];
    assert!(measure_mode_frequency(&s, 0.1).is_err());
}

#[test]
fn dirac3d_norm_over_thousand_steps() {
    let g = Grid3D::cube(16, std::f64::consts::TAU).unwrap();
    let p = DiracParams::natural(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi = (0..g.len())
        .map(|_| [0; 4].map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    let f = DiracSpinorField3D::new(g, psi).unwrap();
    let out = evolve_dirac_3d(&f, &p, 0.01, 1000).unwrap();
    assert!((out.norm() - f.norm()).abs() / f.norm() <= 1e-10);
}

#[test]
fn dirac3d_plane_wave_frequency() {
    let g = Grid3D::cube(8, std::f64::consts::TAU).unwrap();
    let p = DiracParams::natural(1.0).unwrap();
    let u = positive_energy_spinor_3d([0.0, 0.0, 1.0], &p);
    let mut cur = DiracSpinorField3D::plane_wave(g, [0, 0, 1], u).unwrap();
    let dt = 0.05;
    let mut series = Vec::new();
    for _ in 0..2000 {
        let s = cur.spinors()[0];
        series.push((0..4).map(|a| u[a].conj() * s[a]).sum::<Complex64>());
        cur = evolve_dirac_3d(&cur, &p, dt, 1).unwrap();
    }
    let w = measure_mode_frequency(&series, dt).unwrap();
    assert!((w / 2f64.sqrt() - 1.0).abs() < 1e-6, "w {w}");
}

#[test]
fn dirac3d_massless_left_sector_stays() {
    let g = Grid3D::cube(8, std::f64::consts::TAU).unwrap();
    let p = DiracParams::natural(0.0).unwrap();
    // helicity eigenmode of sigma.k along x within the left block
    let s = 0.5f64.sqrt();
    let f = DiracSpinorField3D::plane_wave(
        g,
        [1, 0, 0],
        [c(s, 0.0), c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
    )
    .unwrap();
    for steps in [1, 10, 100] {
        let out = evolve_dirac_3d(&f, &p, 0.3, steps).unwrap();
        let (l, r) = out.sector_norms();
        assert!(r < 1e-28 && (l - f.norm()).abs() < 1e-12);
    }
}
