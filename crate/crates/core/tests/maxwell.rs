use num_complex::Complex;
use persistq::maxwell::{
    divergence_residual, eb_from_rs, energy, evolve_maxwell_rs, evolve_photon_kac, helicity,
    helicity_eigenvector, maxwell_residual, random_solenoidal_eb, rs_from_eb, Spin1Matrices,
};
use persistq::{Grid3D, RSField3D};
use std::f64::consts::TAU;

fn grid(n: usize) -> Grid3D {
    Grid3D::cube(n, TAU).unwrap()
}

fn random_field(n: usize, seed: u64) -> RSField3D {
    let g = grid(n);
    let (e, b) = random_solenoidal_eb(&g, 6, seed);
    rs_from_eb(g, &e, &b).unwrap()
}

fn uniform(g: Grid3D) -> RSField3D {
    let one = [
        Complex::new(1.0, 0.0),
        Complex::new(0.0, 0.5),
        Complex::new(0.0, 0.0),
    ];
    let zero = [Complex::new(0.0, 0.0); 3];
    RSField3D::new(g, vec![one; g.len()], vec![zero; g.len()]).unwrap()
}

#[test]
fn spin_matrices_satisfy_the_algebra() {
    assert!(Spin1Matrices::<f64>::new().algebra_residual() < 1e-15);
}

#[test]
fn energy_and_helicity_are_conserved() {
    let f = random_field(16, 1);
    let (e0, h0) = (energy(&f), helicity(&f));
    let out = evolve_maxwell_rs(&f, 1.0, 0.01, 1000).unwrap();
    assert!((energy(&out) - e0).abs() / e0 <= 1e-12);
    assert!((helicity(&out) - h0).abs() <= 1e-12 * e0);
}

#[test]
fn helical_field_conserves_nonzero_helicity() {
    let g = grid(8);
    let a = RSField3D::helicity_plane_wave(g, [1, 2, 0], 1.0, 1).unwrap();
    let b = RSField3D::helicity_plane_wave(g, [0, 1, 1], 0.5, -1).unwrap();
    let mix = RSField3D::new(
        g,
        a.f_plus()
            .iter()
            .zip(b.f_plus())
            .map(|(x, y)| [0, 1, 2].map(|i| x[i] + y[i]))
            .collect(),
        a.f_minus()
            .iter()
            .zip(b.f_minus())
            .map(|(x, y)| [0, 1, 2].map(|i| x[i] + y[i]))
            .collect(),
    )
    .unwrap();
    let h0 = helicity(&mix);
    assert!(h0 > 0.0);
    let out = evolve_maxwell_rs(&mix, 1.0, 0.05, 1000).unwrap();
    assert!((helicity(&out) - h0).abs() <= 1e-12 * energy(&mix));
}

#[test]
fn circular_mode_advances_at_c_k() {
    let g = grid(8);
    let mode = [1, 1, 0];
    let f = RSField3D::helicity_plane_wave(g, mode, 1.0, 1).unwrap();
    let k = 2f64.sqrt();
    let (dt, n) = (0.1, 37);
    let out = evolve_maxwell_rs(&f, 1.0, dt, n).unwrap();
    let t = dt * n as f64;
    let ph = Complex::new(0.0, -k * t).exp();
    let err = out
        .f_plus()
        .iter()
        .zip(f.f_plus())
        .flat_map(|(a, b)| (0..3).map(move |i| (a[i] - b[i] * ph).norm()))
        .fold(0.0, f64::max);
    assert!(err < 1e-12, "err {err}");
    assert!(out.f_minus().iter().flatten().all(|z| z.norm() < 1e-15));
}

#[test]
fn single_mode_helicity_equals_energy() {
    let f = RSField3D::helicity_plane_wave(grid(8), [0, 0, 2], 1.0, 1).unwrap();
    assert!((helicity(&f) - energy(&f)).abs() < 1e-12);
    let v = helicity_eigenvector([0.0, 0.0, 2.0], 1).unwrap();
    assert!((v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-15);
}

#[test]
fn rs_energy_bookkeeping_matches_eb() {
    let g = grid(12);
    let (e, b) = random_solenoidal_eb(&g, 5, 9);
    let f = rs_from_eb(g, &e, &b).unwrap();
    let direct: f64 = e.iter().chain(&b).flatten().map(|x| x * x).sum::<f64>() * g.cell_volume();
    assert!((energy(&f) - direct).abs() <= 1e-12 * direct);
    let back = eb_from_rs(&f);
    assert!(back.imaginary_residue < 1e-14);
    let err = back
        .e
        .iter()
        .flatten()
        .zip(e.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-13);
}

#[test]
fn divergence_is_invariant() {
    let g = grid(8);
    let f = random_field(8, 3);
    assert!(divergence_residual(&f) < 1e-14);
    // a gradient field has nothing left after projection
    let grad: Vec<_> = (0..g.len())
        .map(|i| {
            let x = g.position(i);
            [
                Complex::new(x[0].cos(), 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
            ]
        })
        .collect();
    let p = RSField3D::new(g, grad.clone(), grad).unwrap();
    assert!(p.projection_residual() > 0.1);
    assert!(p.f_plus().iter().flatten().all(|z| z.norm() < 1e-14));
    let d0 = divergence_residual(&f);
    for lam in [0.0, 0.7] {
        let out = evolve_photon_kac(&f, 1.0, lam, 0.02, 500).unwrap();
        assert!((divergence_residual(&out) - d0).abs() <= 1e-12);
    }
}

#[test]
fn zero_rate_is_bitwise_maxwell() {
    let f = random_field(8, 4);
    let a = evolve_maxwell_rs(&f, 1.0, 0.03, 200).unwrap();
    let b = evolve_photon_kac(&f, 1.0, 0.0, 0.03, 200).unwrap();
    assert_eq!(a, b);
}

#[test]
fn uniform_helicity_difference_decays_at_twice_the_rate() {
    let g = grid(4);
    let f = uniform(g);
    for lam in [0.1, 0.5, 2.0] {
        let (dt, n) = (0.01, 300);
        let out = evolve_photon_kac(&f, 1.0, lam, dt, n).unwrap();
        let t = dt * n as f64;
        let diff = |r: &RSField3D| (r.f_plus()[0][0] - r.f_minus()[0][0]).norm();
        let sum = |r: &RSField3D| (r.f_plus()[0][0] + r.f_minus()[0][0]).norm();
        let rate = (diff(&f) / diff(&out)).ln() / t;
        assert!((rate / (2.0 * lam) - 1.0).abs() < 1e-6, "rate {rate}");
        assert!((sum(&out) - sum(&f)).abs() < 1e-13);
        let hrate = (helicity(&f) / helicity(&out)).ln() / t;
        assert!((hrate / (2.0 * lam) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn uniform_helicity_shrinks_monotonically() {
    let mut cur = uniform(grid(4));
    let mut last = helicity(&cur);
    for _ in 0..50 {
        cur = evolve_photon_kac(&cur, 1.0, 0.4, 0.05, 1).unwrap();
        let h = helicity(&cur);
        assert!(h.abs() < last.abs());
        last = h;
    }
}

#[test]
fn reconstructed_fields_obey_maxwell() {
    let f = random_field(8, 5);
    let mut prev = f64::INFINITY;
    for dt in [0.04, 0.02, 0.01] {
        let a = f.clone();
        let b = evolve_maxwell_rs(&a, 1.0, dt, 1).unwrap();
        let c = evolve_maxwell_rs(&b, 1.0, dt, 1).unwrap();
        let (re, rb) = maxwell_residual(&a, &b, &c, 1.0);
        let r = re.max(rb);
        assert!(r < prev / 3.5, "dt {dt}: {r} vs {prev}");
        prev = r;
    }
}

#[test]
fn negative_rate_is_rejected() {
    let f = random_field(4, 6);
    assert!(evolve_photon_kac(&f, 1.0, -1.0, 0.1, 1).is_err());
    assert!(evolve_maxwell_rs(&f, 1.0, 0.0, 1).is_err());
}
