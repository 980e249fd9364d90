use persistq::stochastic::{
    diffusion_limit_check, evolve_master, evolve_master_symmetric, evolve_telegrapher,
    initial_rate_from_sectors, kac_moments, l1_distance, lattice_ks_to_gaussian, mode_rates,
    sample_kac_paths, telegrapher_residual, InitialDirection,
};
use persistq::{Direction, Grid1D, KacParams, SectorProb1D};

fn lattice() -> Grid1D {
    // dx = 1/128 on [-4, 4)
    Grid1D::new(1024, 1.0 / 128.0, -4.0).unwrap()
}

#[test]
fn ballistic_without_switching() {
    let p = KacParams::new(1.0, 0.0).unwrap();
    let e = sample_kac_paths(&p, Direction::Right, 0.0, 3.0, 1000, 7).unwrap();
    assert!(e.positions().iter().all(|&x| x == 3.0));
    assert!(e.directions().iter().all(|&d| d == Direction::Right));
}

#[test]
fn light_cone_is_exact() {
    let p = KacParams::new(1.5, 2.0).unwrap();
    let e = sample_kac_paths(&p, InitialDirection::Symmetric, 0.25, 1.3, 20_000, 3).unwrap();
    assert!(e.max_displacement() <= 1.5 * 1.3);
}

#[test]
fn equilibrium_direction_balance() {
    let p = KacParams::new(1.0, 5.0).unwrap();
    let n = 200_000;
    let e = sample_kac_paths(&p, Direction::Right, 0.0, 10.0, n, 11).unwrap();
    let se = (0.25 / n as f64).sqrt();
    assert!((e.fraction_right() - 0.5).abs() < 3.0 * se);
}

#[test]
fn moment_sweep_matches_closed_form() {
    let n = 1_000_000;
    let mut seed = 100;
    for lambda in [0.5, 1.0, 3.0] {
        for t in [0.5, 2.0, 4.0] {
            let p = KacParams::new(1.0, lambda).unwrap();
            let e = sample_kac_paths(&p, Direction::Right, 0.0, t, n, seed).unwrap();
            let m = kac_moments(&p, Direction::Right, t);
            let z = (e.mean_x() - m.mean_x).abs() / e.stderr_x();
            assert!(z < 3.0, "lambda={lambda} t={t} z={z}");
            seed += 1;
        }
    }
}

#[test]
fn moment_oracle_examples() {
    let p = KacParams::new(1.0, 0.0).unwrap();
    assert_eq!(kac_moments(&p, Direction::Right, 1.0).mean_x, 1.0);
    let p = KacParams::new(1.0, 1.0).unwrap();
    assert!((kac_moments(&p, Direction::Right, 60.0).mean_x - 0.5).abs() < 1e-15);
    let want = -0.5 * (1.0 - (-4.0f64).exp());
    assert!((kac_moments(&p, Direction::Left, 2.0).mean_x - want).abs() < 1e-15);
}

#[test]
fn same_seed_same_ensemble_for_any_pool() {
    let p = KacParams::new(1.0, 1.0).unwrap();
    let a = sample_kac_paths(&p, Direction::Right, 0.0, 2.0, 10_000, 42).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let b = pool.install(|| sample_kac_paths(&p, Direction::Right, 0.0, 2.0, 10_000, 42).unwrap());
    assert_eq!(a, b);
}

#[test]
fn master_conserves_mass_over_many_steps() {
    let g = Grid1D::new(256, 0.05, 0.0).unwrap();
    let p = KacParams::new(2.0, 1.7).unwrap();
    let plus: Vec<f64> = (0..256).map(|i| 1.0 + (i as f64 * 0.3).sin()).collect();
    let minus: Vec<f64> = (0..256).map(|i| (i as f64 * 0.11).cos().powi(2)).collect();
    let f = SectorProb1D::new(g, plus, minus).unwrap();
    let m0 = f.total_mass();
    let out = evolve_master(&f, &p, 0.025, 10_000).unwrap();
    assert!(((out.total_mass() - m0) / m0).abs() <= 1e-12);
}

#[test]
fn sectors_exchange_mass_while_total_is_fixed() {
    let g = lattice();
    let p = KacParams::new(1.0, 1.0).unwrap();
    let f = SectorProb1D::delta(g, 512, true).unwrap();
    let out = evolve_master(&f, &p, g.dx(), 1).unwrap();
    assert!(out.sector_masses().0 < f.sector_masses().0);
    assert!((out.total_mass() - 1.0).abs() < 1e-15);
}

#[test]
fn master_matches_monte_carlo_in_blocks() {
    let g = lattice();
    let p = KacParams::new(1.0, 1.0).unwrap();
    let n_paths = 1_000_000;
    let f = SectorProb1D::delta(g, 512, true).unwrap();
    let master = evolve_master_symmetric(&f, &p, g.dx(), 256).unwrap();
    let mc = sample_kac_paths(&p, Direction::Right, 0.0, 2.0, n_paths, 2024).unwrap();
    // after an even number of steps only even sites are occupied, so each
    // carries the mass of a 2dx cell
    let coarse = Grid1D::new(512, 2.0 * g.dx(), g.origin()).unwrap();
    let d = l1_distance(
        &mc.histogram(&coarse).block_masses(32),
        &master.block_masses(64),
    );
    assert!(d <= 5.0 / (n_paths as f64).sqrt(), "L1 = {d}");
}

#[test]
fn telegrapher_single_mode_decay() {
    let n = 1024;
    let l = std::f64::consts::TAU;
    let g = Grid1D::new(n, l / n as f64, 0.0).unwrap();
    let p = KacParams::new(1.0, 2.0).unwrap();
    let k = 1.0;
    let [slow, fast] = mode_rates(&p, k);
    let (mu_p, mu_m) = (slow.re, fast.re);
    // start on the slow eigenmode: P = cos(kx), P_t = mu_plus P
    let p0: Vec<f64> = g.coordinates().iter().map(|x| (k * x).cos()).collect();
    let v0: Vec<f64> = p0.iter().map(|v| mu_p * v).collect();
    let dt = 0.5 * g.dx();
    let steps = (2.0 / dt).round() as usize;
    let (p1, _) = evolve_telegrapher(&p0, &v0, &p, &g, dt, steps).unwrap();
    let steps2 = 2 * steps;
    let (p2, _) = evolve_telegrapher(&p0, &v0, &p, &g, dt, steps2).unwrap();
    let a1 = p1[0];
    let a2 = p2[0];
    let rate = (a2 / a1).ln() / (steps as f64 * dt);
    assert!(
        ((rate - mu_p) / mu_p).abs() < 1e-3,
        "rate {rate} vs {mu_p} (fast {mu_m})"
    );
}

#[test]
fn telegrapher_wave_limit_translates() {
    let n = 512;
    let g = Grid1D::new(n, 20.0 / n as f64, -10.0).unwrap();
    let p = KacParams::new(1.0, 0.0).unwrap();
    let pulse = |x: f64| (-x * x).exp();
    let p0: Vec<f64> = g.coordinates().iter().map(|&x| pulse(x)).collect();
    // right-moving: P_t = -c P_x
    let v0: Vec<f64> = g
        .coordinates()
        .iter()
        .map(|&x| 2.0 * x * pulse(x))
        .collect();
    let dt = 0.5 * g.dx();
    let steps = (3.0 / dt).round() as usize;
    let (p1, _) = evolve_telegrapher(&p0, &v0, &p, &g, dt, steps).unwrap();
    let t = steps as f64 * dt;
    let err = g
        .coordinates()
        .iter()
        .zip(&p1)
        .map(|(&x, &v)| (v - pulse(x - t)).abs())
        .fold(0.0, f64::max);
    assert!(err < 5.0 * g.dx() * g.dx(), "err {err}");
}

#[test]
fn telegrapher_rejects_unstable_step() {
    let g = Grid1D::new(64, 0.1, 0.0).unwrap();
    let p = KacParams::new(1.0, 1.0).unwrap();
    let z = vec![0.0; 64];
    assert!(evolve_telegrapher(&z, &z, &p, &g, 0.2, 1).is_err());
}

#[test]
fn master_solution_satisfies_telegrapher() {
    // smooth initial sectors so that the lattice solution is resolved
    let n = 512;
    let g = Grid1D::new(n, 16.0 / n as f64, -8.0).unwrap();
    let p = KacParams::new(1.0, 0.5).unwrap();
    let bump: Vec<f64> = g.coordinates().iter().map(|x| (-x * x).exp()).collect();
    let f = SectorProb1D::new(g, bump.clone(), vec![0.0; n]).unwrap();
    let dt = g.dx();
    let mut snaps = Vec::new();
    let mut cur = f;
    for _ in 0..3 {
        cur = evolve_master(&cur, &p, dt, 40).unwrap();
        let mut s = vec![cur.total()];
        let mut c2 = cur.clone();
        for _ in 0..2 {
            c2 = evolve_master(&c2, &p, dt, 1).unwrap();
            s.push(c2.total());
        }
        let r = telegrapher_residual(&s, &p, &g, dt);
        assert!(r[0] < 0.05, "residual {}", r[0]);
        snaps.push(r[0]);
    }
    let _ = initial_rate_from_sectors(&cur, 1.0);
}

#[test]
fn diffusion_limit_small_ks() {
    let chk = diffusion_limit_check(0.5, 100.0, 1.0, 100_000, 9).unwrap();
    assert!(chk.cone_in_sigmas >= 6.0);
    assert!(chk.ks <= 0.01, "ks {}", chk.ks);
}

#[test]
fn diffusion_limit_fails_when_ballistic() {
    let chk = diffusion_limit_check(0.5, 0.5, 1.0, 100_000, 9).unwrap();
    assert!(chk.ks > 0.1, "ks {}", chk.ks);
}

#[test]
fn diffusion_limit_degenerate_time() {
    let chk = diffusion_limit_check(0.5, 10.0, 0.0, 1000, 9).unwrap();
    assert_eq!(chk.ks, 0.0);
}

#[test]
fn master_oracle_for_diffusion_limit() {
    // lattice law at lambda = 100, nu = 1/2 is close to N(0, 1)
    let c = (2.0f64 * 100.0 * 0.5).sqrt();
    let p = KacParams::new(c, 100.0).unwrap();
    let n = 4096;
    let dx = 16.0 / n as f64;
    let g = Grid1D::new(n, dx, -8.0).unwrap();
    let half = SectorProb1D::delta(g, n / 2, true).unwrap();
    let both = SectorProb1D::new(
        g,
        half.p_plus().iter().map(|v| v / 2.0).collect(),
        half.p_plus().iter().map(|v| v / 2.0).collect(),
    )
    .unwrap();
    let dt = dx / c;
    let steps = (1.0 / dt).round() as usize;
    let out = evolve_master(&both, &p, dt, steps).unwrap();
    assert!(lattice_ks_to_gaussian(&out, 0.0, 1.0) < 0.01);
}
