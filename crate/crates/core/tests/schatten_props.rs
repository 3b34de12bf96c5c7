use nalgebra::DMatrix;
use num_complex::Complex64;
use osinv_core::invariants::pi1_fundamental;
use osinv_core::monotone_fn::MonotoneFn;
use osinv_core::orlicz::{sequence_norm, OrliczFn};
use osinv_core::schatten::{pi1_of_map, schatten_orlicz_norm, schatten_p_norm, singular_values, ComplexMatrix};
use osinv_core::spaces::{conjugate, SpaceDescriptor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let e = (0..rows * cols).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::new(rows, cols, e).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let q = random_matrix(rng, n, n).to_nalgebra().qr().q();
    ComplexMatrix::from_nalgebra(&q)
}

/// Eigenvalues of `x*x` as roots of its characteristic polynomial.
fn char_poly_singular_values(x: &ComplexMatrix) -> Vec<f64> {
    let m = x.to_nalgebra();
    let h = m.adjoint() * &m;
    let n = h.nrows();
    // Faddeev–LeVerrier: monic coefficients c[n] = 1, ..., c[0].
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        acc = &h * &acc + DMatrix::identity(n, n) * c[n - k + 1];
        c[n - k] = -(&h * &acc).trace() / k as f64;
    }
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |s, &a| s * z + a);
    let mut roots: Vec<Complex64> = (0..n).map(|i| Complex64::new(0.4, 0.9).powu(i as u32)).collect();
    for _ in 0..2000 {
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |d, j| d * (roots[i] - roots[j]));
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
        }
    }
    let mut s: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[test]
fn singular_values_match_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=4 {
        for _ in 0..10 {
            let x = random_matrix(&mut rng, n, n);
            let (a, b) = (singular_values(&x), char_poly_singular_values(&x));
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() < 1e-8 * a[0], "{a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn identity_norms_reproduce_column_fundamental_function() {
    for p in [4.0 / 3.0, 2.0, 3.0, 4.0] {
        let phi_c = SpaceDescriptor::column_p(p).unwrap().phi_c().clone();
        for n in [1usize, 5, 32, 100] {
            let id = ComplexMatrix::identity(n);
            assert!((schatten_p_norm(&id, p).unwrap() / (n as f64).powf(1.0 / p) - 1.0).abs() < 1e-12);
            let sq = schatten_p_norm(&id, 2.0 * conjugate(p)).unwrap().powi(2);
            assert!((sq / phi_c.value(n as f64) - 1.0).abs() < 1e-9);
        }
    }
}

fn oh_phi() -> OrliczFn {
    OrliczFn::from_weight(&MonotoneFn::power(-2.0).unwrap().restrict_left(1.0)).unwrap()
}

#[test]
fn unitary_invariance_and_ideal_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let phis = [oh_phi(), OrliczFn::psi()];
    for _ in 0..10 {
        let x = random_matrix(&mut rng, 8, 8);
        let (u, v) = (random_unitary(&mut rng, 8), random_unitary(&mut rng, 8));
        let uxv = u.mul(&x).unwrap().mul(&v).unwrap();
        let (a, b) = (random_matrix(&mut rng, 8, 8), random_matrix(&mut rng, 8, 8));
        let axb = a.mul(&x).unwrap().mul(&b).unwrap();
        let (na, nb) = (schatten_p_norm(&a, f64::INFINITY).unwrap(), schatten_p_norm(&b, f64::INFINITY).unwrap());
        for phi in &phis {
            let base = schatten_orlicz_norm(&x, phi);
            assert!((schatten_orlicz_norm(&uxv, phi) / base - 1.0).abs() < 1e-8);
            assert!(schatten_orlicz_norm(&axb, phi) <= na * base * nb * (1.0 + 1e-8));
        }
        let s1 = schatten_p_norm(&x, 1.0).unwrap();
        let s2 = schatten_p_norm(&x, 2.0).unwrap();
        let sinf = schatten_p_norm(&x, f64::INFINITY).unwrap();
        assert!(s2 * s2 <= s1 * sinf * (1.0 + 1e-12));
    }
}

#[test]
fn hilbert_schmidt_and_diagonal_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sq = OrliczFn::new(MonotoneFn::power(2.0).unwrap()).unwrap();
    let x = random_matrix(&mut rng, 6, 4);
    let hs: f64 = x.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    assert!((schatten_orlicz_norm(&x, &sq) / hs - 1.0).abs() < 1e-10);
    let d = [0.5, -3.0, 2.0, 0.0, 1.0];
    let phi = oh_phi();
    let a = schatten_orlicz_norm(&ComplexMatrix::diagonal(&d), &phi);
    assert!((a / sequence_norm(&phi, &d) - 1.0).abs() < 1e-10);
}

#[test]
fn pi1_of_identity_matches_fundamental_sequence() {
    let oh = SpaceDescriptor::oh();
    let c3 = SpaceDescriptor::column_p(3.0).unwrap();
    for (e, f) in [(&oh, &oh), (&c3, &oh), (&c3, &c3)] {
        for n in [1usize, 3, 16, 100, 256] {
            let a = pi1_of_map(e, f, &ComplexMatrix::identity(n)).unwrap();
            let b = pi1_fundamental(e, f, n as f64).unwrap().pi1;
            assert!((a / b - 1.0).abs() < 1e-3, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn pi1_of_identity_follows_expected_growth() {
    let oh = SpaceDescriptor::oh();
    let ratios: Vec<f64> = [16usize, 64, 256]
        .iter()
        .map(|&n| {
            let v = pi1_of_map(&oh, &oh, &ComplexMatrix::identity(n)).unwrap();
            v / ((n as f64) * (n as f64 + 1.0).ln()).sqrt()
        })
        .collect();
    assert!(ratios.iter().all(|r| (0.25..=4.0).contains(r)), "{ratios:?}");
    let (p, q) = (2.0, 4.0);
    let r = 2.0 / (1.0 / p + 1.0 / q);
    let slope = 1.0 / f64::min(r, conjugate(r));
    let (e, f) = (SpaceDescriptor::column_p(p).unwrap(), SpaceDescriptor::column_p(q).unwrap());
    let ratios: Vec<f64> = [16usize, 64, 256]
        .iter()
        .map(|&n| pi1_of_map(&e, &f, &ComplexMatrix::identity(n)).unwrap() / (n as f64).powf(slope))
        .collect();
    let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 4.0, "{ratios:?}");
}

#[test]
fn pi1_dominates_hilbert_schmidt_and_trace_dual_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let oh = SpaceDescriptor::oh();
    let (p, q) = (3.0, 3.0);
    let r = 2.0 / (1.0 / p + 1.0 / q);
    let (e, f) = (SpaceDescriptor::column_p(p).unwrap(), SpaceDescriptor::column_p(q).unwrap());
    for _ in 0..10 {
        let x = random_matrix(&mut rng, 12, 12);
        let hs = schatten_p_norm(&x, 2.0).unwrap();
        assert!(hs <= 4.0 * pi1_of_map(&oh, &oh, &x).unwrap());
        let dual = schatten_p_norm(&x, conjugate(r).max(r)).unwrap();
        assert!(dual <= 4.0 * pi1_of_map(&e, &f, &x).unwrap());
    }
}
