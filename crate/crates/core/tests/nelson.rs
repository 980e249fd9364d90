use num_complex::Complex;
use persistq::dirac::evolve_dirac_1d;
use persistq::nelson::{
    gordon_decompose, gordon_plane_wave, hydrogen_1s, oscillator_eigenstate, osmotic_velocity,
    polar_decompose, quantum_potential, quantum_potential_from_u, random_smooth_log_density,
    stationarity_residual, Domain, GordonInput,
};
use persistq::{DiracParams, Grid1D, RadialGrid, StationaryState, WeylSpinorField1D};

fn oscillator(n: usize, points: usize) -> StationaryState {
    let g = Grid1D::centered(points, 20.0).unwrap();
    let a = oscillator_eigenstate(n, &g, 1.0, 1.0, 1.0).unwrap();
    StationaryState::from_psi(Domain::Periodic(g), &a.psi, a.potential, a.energy, 1.0, 1.0).unwrap()
}

fn hydrogen(points: usize) -> f64 {
    let g = RadialGrid::spanning(points, 0.5, 20.0).unwrap();
    let a = hydrogen_1s(&g);
    let s = StationaryState::from_psi(Domain::Radial(g), &a.psi, a.potential, a.energy, 1.0, 1.0)
        .unwrap();
    stationarity_residual(&s).max
}

#[test]
fn oscillator_balance_at_full_resolution() {
    for n in 0..4 {
        let r = stationarity_residual(&oscillator(n, 1024));
        assert!(r.max <= 1e-5, "n={n}: {}", r.max);
    }
}

#[test]
fn first_excited_state_masks_its_node() {
    let s = oscillator(1, 1024);
    let mask = s.mask();
    assert!(!mask[512]);
    assert!(mask[512 - 40] && mask[512 + 40]);
}

#[test]
fn oscillator_balance_converges_spectrally() {
    for n in 0..4 {
        let errs: Vec<f64> = [24, 32, 40, 48]
            .iter()
            .map(|&p| stationarity_residual(&oscillator(n, p)).max)
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] < w[0] / 10.0, "n={n}: {errs:?}");
        }
    }
}

#[test]
fn hydrogen_balance_converges_at_fourth_order() {
    let errs: Vec<f64> = [256, 512, 1024].iter().map(|&p| hydrogen(p)).collect();
    assert!(errs[2] <= 1e-5);
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((3.5..4.5).contains(&order), "{errs:?}");
    }
}

#[test]
fn quantum_potential_forms_agree() {
    let g = Grid1D::centered(256, 10.0).unwrap();
    let d = Domain::Periodic(g);
    for seed in 0..20 {
        let rho = random_smooth_log_density(&g, 4, 0.5, seed);
        let q1 = quantum_potential(&rho, 1.0, 1.0, &d).unwrap();
        let u = osmotic_velocity(&rho, 1.0, 1.0, &d).unwrap();
        let q2 = quantum_potential_from_u(&u, 1.0, 1.0, &d).unwrap();
        assert!(q1.max_abs_diff(&q2) <= 1e-8, "seed {seed}");
    }
}

#[test]
fn ground_state_quantum_potential_matches_closed_form() {
    let s = oscillator(0, 512);
    let q = s.quantum_potential();
    let xs = s.domain.coordinates();
    for (i, x) in xs.iter().enumerate() {
        if let Some(v) = q.get(i) {
            assert!((v - (0.5 - x * x / 2.0)).abs() <= 1e-6);
        }
    }
}

#[test]
fn gaussian_osmotic_velocity() {
    let g = Grid1D::centered(256, 20.0).unwrap();
    let d = Domain::Periodic(g);
    let rho: Vec<f64> = g.coordinates().iter().map(|x| (-x * x).exp()).collect();
    let u = osmotic_velocity(&rho, 1.0, 1.0, &d).unwrap();
    for (i, x) in g.coordinates().iter().enumerate() {
        if let Some(v) = u.get(i) {
            assert!((v + x).abs() <= 1e-8, "x={x}");
        }
    }
}

#[test]
fn hydrogen_osmotic_velocity_is_minus_one() {
    let g = RadialGrid::spanning(1024, 0.5, 20.0).unwrap();
    let rho: Vec<f64> = g.coordinates().iter().map(|r| (-2.0 * r).exp()).collect();
    let u = osmotic_velocity(&rho, 1.0, 1.0, &Domain::Radial(g)).unwrap();
    assert!(u.valid_values().all(|v| (v + 1.0).abs() < 1e-7));
}

#[test]
fn real_eigenstates_have_no_current() {
    for n in 0..3 {
        let s = oscillator(n, 256);
        assert!(s.current_velocity().iter().all(|v| v.abs() < 1e-12));
        assert!(s.osmotic_velocity().max_abs() > 0.1);
    }
}

#[test]
fn winding_gives_uniform_current() {
    let g = Grid1D::new(128, 0.05, 0.0).unwrap();
    let l = g.length();
    let psi: Vec<_> = g
        .coordinates()
        .iter()
        .map(|x| Complex::from_polar(1.0, 3.0 * std::f64::consts::TAU * x / l))
        .collect();
    let d = Domain::Periodic(g);
    let parts = polar_decompose(&psi, &d, 1.0).unwrap();
    assert_eq!(parts.winding, 3);
    let s = StationaryState::from_psi(d, &psi, vec![0.0; 128], 0.0, 2.0, 1.0).unwrap();
    let want = 3.0 * std::f64::consts::TAU / (2.0 * l);
    assert!(s
        .current_velocity()
        .iter()
        .all(|v| (v - want).abs() < 1e-10));
    assert!(stationarity_residual(&s).max <= 1e-12);
}

#[test]
fn gordon_identity_on_plane_waves() {
    let g = Grid1D::new(32, std::f64::consts::TAU / 32.0, 0.0).unwrap();
    for (i, k) in [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        .iter()
        .enumerate()
    {
        let p = DiracParams::natural(0.5 + 0.25 * i as f64).unwrap();
        let d = gordon_decompose(&gordon_plane_wave(*k, &p, &g), &p).unwrap();
        assert!(d.residual <= 1e-10, "k={k}: {}", d.residual);
        if *k == 0.0 {
            assert!(d.total[1].iter().all(|v| v.abs() < 1e-15));
            assert!(d.convective[1]
                .iter()
                .chain(&d.spin[1])
                .all(|v| v.abs() < 1e-15));
        }
    }
}

#[test]
fn gordon_identity_on_evolved_packets() {
    let g = Grid1D::centered(256, 20.0).unwrap();
    let p = DiracParams::natural(1.0).unwrap();
    let s = 0.5f64.sqrt();
    let f = WeylSpinorField1D::gaussian(
        g,
        0.0,
        1.0,
        1.5,
        [Complex::new(s, 0.0), Complex::new(0.0, s)],
    )
    .unwrap();
    let f = evolve_dirac_1d(&f, &p, None, 0.01, 200).unwrap();
    let d = gordon_decompose(&GordonInput::on_shell(&f, &p).unwrap(), &p).unwrap();
    assert!(d.residual <= 1e-10, "{}", d.residual);
}

#[test]
fn constant_spinor_has_no_spin_current() {
    let g = Grid1D::centered(16, 1.0).unwrap();
    let p = DiracParams::natural(1.0).unwrap();
    let f = WeylSpinorField1D::new(
        g,
        vec![Complex::new(0.3, 0.1); 16],
        vec![Complex::new(-0.2, 0.4); 16],
    )
    .unwrap();
    let d = gordon_decompose(&GordonInput::on_shell(&f, &p).unwrap(), &p).unwrap();
    assert!(d.spin[0].iter().all(|v| v.abs() < 1e-15));
    assert!(gordon_decompose(
        &GordonInput::on_shell(&f, &p).unwrap(),
        &DiracParams::natural(0.0).unwrap()
    )
    .is_err());
}
