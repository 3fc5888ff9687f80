use hsvd::factory::{generate_spectrum, symmetric_from_spectrum, table_scale, SPECTRUM_GAP};
use hsvd::{
    bunch_parlett_factor, drive, generate_instance, generate_symmetric, qr_shorten, Matrix,
    SignatureVector, SolverConfig, SpectrumSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EPS: f64 = f64::EPSILON;

#[test]
fn residual_and_inertia_across_orders() {
    for (n, seeds) in [(16usize, 0..10u64), (64, 0..4)] {
        for seed in seeds {
            let inst = generate_instance::<f64>(&SpectrumSpec::new(n, table_scale(n), seed)).unwrap();
            let res = inst.factor.residual(&inst.m).unwrap();
            assert!(res <= 50.0 * n as f64 * EPS * inst.m.frobenius_norm(), "n={n} seed={seed}");
            assert_eq!(inst.factor.j.p(), inst.positive_count());
            assert!(inst
                .lambda_true
                .iter()
                .all(|l| l.abs() >= table_scale(n) * SPECTRUM_GAP));
        }
    }
}

#[test]
fn factoring_the_rounded_matrix_also_works() {
    let (m, lambda) = generate_symmetric::<f64>(&SpectrumSpec::new(40, 20.0, 4)).unwrap();
    let f = bunch_parlett_factor(&m).unwrap();
    assert!(f.residual(&m).unwrap() <= 50.0 * 40.0 * EPS * m.frobenius_norm());
    assert_eq!(f.j.p(), lambda.iter().filter(|&&l| l > 0.0).count());
    let mut perm = f.perm.clone();
    perm.sort_unstable();
    assert_eq!(perm, (0..40).collect::<Vec<_>>());
}

#[test]
fn definite_spectrum_gives_definite_signature() {
    let spec = SpectrumSpec::new(20, 20.0, 1).with_positives(20);
    let inst = generate_instance::<f64>(&spec).unwrap();
    assert!(inst.factor.j.is_definite());
    assert_eq!(inst.factor.j.p(), 20);
    let spec = SpectrumSpec::new(20, 20.0, 1).with_positives(0);
    assert_eq!(generate_instance::<f64>(&spec).unwrap().factor.j.p(), 0);
}

#[test]
fn solver_recovers_generated_spectrum() {
    let inst = generate_instance::<f64>(&SpectrumSpec::new(96, 20.0, 8)).unwrap();
    let res = drive(&inst.factor.g, &inst.factor.j, &SolverConfig::default()).unwrap();
    for (a, b) in res.sorted_lambda().iter().zip(&inst.lambda_true) {
        assert!(((a - b) / b).abs() <= 1e-12);
    }
}

#[test]
fn spectrum_is_seed_deterministic() {
    let spec = SpectrumSpec::new(30, 20.0, 77);
    let a: Vec<f64> = generate_spectrum(&spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let b: Vec<f64> = generate_spectrum(&spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reflectors_must_grow() {
    assert!(symmetric_from_spectrum(&[1.0, 2.0, 3.0], &[vec![1.0, 1.0, 1.0], vec![1.0, 1.0]]).is_err());
}

#[test]
fn tall_factor_shortened_then_solved() {
    // G is 10x4; the HSVD of R gives the same sigma, and Q U_R is U of G
    let inst = generate_instance::<f64>(&SpectrumSpec::new(10, 20.0, 3)).unwrap();
    let g = Matrix::from_col_major(
        10,
        4,
        inst.factor.g.as_slice()[..40].to_vec(),
    )
    .unwrap();
    let j = SignatureVector::new(4, 2).unwrap();
    let (r, q) = qr_shorten(&g).unwrap();
    let cfg = SolverConfig::default();
    let full = drive(&g, &j, &cfg).unwrap();
    let short = drive(&r, &j, &cfg).unwrap();
    for (a, b) in full.sigma.iter().zip(&short.sigma) {
        assert!(((a - b) / a).abs() < 1e-13);
    }
    let u = q.matmul(&short.u).unwrap();
    for c in 0..4 {
        let dot: f64 = u.col(c).iter().zip(full.u.col(c)).map(|(x, y)| x * y).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12);
    }
}
