use num_complex::Complex;
use persistq::gauge::{evolve_coupled, gauge_transform, pure_gauge_field, sector_probabilities};
use persistq::{
    Complex64, CoupledState, DiracParams, GaugeField1D, GaugeFunction, Grid1D, WeylSpinorField1D,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn grid() -> Grid1D {
    Grid1D::new(128, TAU / 128.0, 0.0).unwrap()
}

fn packet(k0: f64) -> WeylSpinorField1D {
    let s = 0.5f64.sqrt();
    WeylSpinorField1D::gaussian(
        grid(),
        3.0,
        0.5,
        k0,
        [Complex::new(s, 0.0), Complex::new(0.0, s)],
    )
    .unwrap()
}

fn background() -> GaugeField1D {
    let g = grid();
    let xs = g.coordinates();
    let a0 = xs.iter().map(|x| 0.3 * x.cos()).collect();
    let ax = xs.iter().map(|x| 0.2 + 0.4 * (2.0 * x).sin()).collect();
    GaugeField1D::new(g, a0, ax).unwrap()
}

fn random_chi(seed: u64) -> GaugeFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(1..=3) as f64,
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..TAU),
                rng.random_range(-2.0..2.0),
            )
        })
        .collect();
    let t2 = terms.clone();
    GaugeFunction::time_dependent(
        grid(),
        move |x, t| {
            terms
                .iter()
                .map(|(k, a, p, w)| a * (k * x + p + w * t).sin())
                .sum()
        },
        move |x, t| {
            t2.iter()
                .map(|(k, a, p, w)| a * w * (k * x + p + w * t).cos())
                .sum()
        },
    )
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn conjugate(f: &WeylSpinorField1D) -> WeylSpinorField1D {
    f.clone().map_sites(|_, [a, b]| [a.conj(), -b.conj()])
}

#[test]
fn observables_are_gauge_invariant() {
    let p = DiracParams::natural(1.0).unwrap();
    let dt = 0.005;
    for seed in 0..5 {
        let state =
            CoupledState::opposite_charges(packet(2.0), packet(-1.0), 1.0, background()).unwrap();
        let chi = random_chi(seed);
        let moved = gauge_transform(&state, &chi).unwrap();
        let a = evolve_coupled(&state, &p, &p, dt, 400).unwrap();
        let b = evolve_coupled(&moved, &p, &p, dt, 400).unwrap();
        for (x, y) in [(&a.species_a, &b.species_a), (&a.species_b, &b.species_b)] {
            let (sx, sy) = (sector_probabilities(x), sector_probabilities(y));
            assert!(max_diff(&sx.p_plus, &sy.p_plus) <= 1e-9, "seed {seed}");
            assert!(max_diff(&sx.p_minus, &sy.p_minus) <= 1e-9, "seed {seed}");
        }
        // the evolved transformed state is the transform of the evolved state
        let back = gauge_transform(&a, &chi).unwrap();
        let err = back
            .species_a
            .phi_plus()
            .iter()
            .zip(b.species_a.phi_plus())
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9, "seed {seed}: {err}");
    }
}

#[test]
fn pure_gauge_matches_free_evolution() {
    let p = DiracParams::natural(0.7).unwrap();
    let chi = random_chi(42);
    let f = packet(1.0);
    let free = evolve_coupled(
        &CoupledState::opposite_charges(f.clone(), f.clone(), 1.0, GaugeField1D::zero(grid()))
            .unwrap(),
        &p,
        &p,
        0.01,
        300,
    )
    .unwrap();
    let start =
        CoupledState::opposite_charges(f.clone(), f, 1.0, GaugeField1D::zero(grid())).unwrap();
    let gauged = gauge_transform(&start, &chi).unwrap();
    assert!(!pure_gauge_field(&chi).unwrap().is_zero());
    let out = evolve_coupled(&gauged, &p, &p, 0.01, 300).unwrap();
    let (a, b) = (
        sector_probabilities(&free.species_a),
        sector_probabilities(&out.species_a),
    );
    assert!(max_diff(&a.p_plus, &b.p_plus) <= 1e-9);
}

#[test]
fn charge_conjugate_pair_shares_probabilities() {
    let p = DiracParams::natural(1.0).unwrap();
    let a0 = packet(1.5);
    let state =
        CoupledState::opposite_charges(a0.clone(), conjugate(&a0), 1.0, background()).unwrap();
    let out = evolve_coupled(&state, &p, &p, 0.005, 1000).unwrap();
    let (sa, sb) = (
        sector_probabilities(&out.species_a),
        sector_probabilities(&out.species_b),
    );
    assert!(max_diff(&sa.p_plus, &sb.p_plus) <= 1e-10);
    assert!(max_diff(&sa.p_minus, &sb.p_minus) <= 1e-10);
    assert!((sa.total - sb.total).abs() <= 1e-10);
}

#[test]
fn zero_field_decouples_bitwise() {
    let p = DiracParams::natural(1.0).unwrap();
    let f = packet(1.0);
    let state =
        CoupledState::opposite_charges(f.clone(), f.clone(), 1.0, GaugeField1D::zero(grid()))
            .unwrap();
    let out = evolve_coupled(&state, &p, &p, 0.01, 100).unwrap();
    let free = persistq::dirac::evolve_dirac_1d(&f, &p, None, 0.01, 100).unwrap();
    assert_eq!(out.species_a.phi_plus(), free.phi_plus());
    assert_eq!(out.species_b.phi_minus(), free.phi_minus());
}

#[test]
fn mismatched_grids_are_rejected() {
    let other = Grid1D::new(64, TAU / 64.0, 0.0).unwrap();
    let f = packet(0.0);
    let _: Complex64 = f.phi_plus()[0];
    assert!(CoupledState::opposite_charges(f.clone(), f, 1.0, GaugeField1D::zero(other)).is_err());
}
