use num_complex::Complex64;
use reclab_core::arith::ArithTable;
use reclab_core::nilseq::{
    flat_sum_value, mobius_correlation, sharp_discrepancy, TorusPolySequence,
};
use reclab_core::norms::{vk_norm, EvalMode, WeightedSequence};
use reclab_core::polysys::{parallelepiped_degree, PolySystem};
use reclab_core::systems::{multiple_average, CyclicSystem, SetLiteral, WeightKind};
use reclab_core::wtrick::{lambda_tilde, majorant_nu, make_config};
use reclab_core::Error;

fn system(src: &str) -> PolySystem {
    PolySystem::parse(src).unwrap()
}

#[test]
fn config_follows_parallelepiped_degree() {
    for (src, l) in [("n", 1), ("n, 2n", 2), ("n^2, n^2+n", 4)] {
        let s = system(src);
        assert_eq!(parallelepiped_degree(&s).unwrap().degree, l, "{src}");
        let cfg = make_config(1000, 5, 7, &s).unwrap();
        assert_eq!(cfg.l as usize, l);
        assert_eq!(cfg.eta, 2f64.powi(-3 - l as i32));
    }
}

#[test]
fn mertens_matches_mobius_correlation_with_constant() {
    let t = ArithTable::new(100_000).unwrap();
    assert_eq!(t.mertens(100_000).unwrap(), -48);
    let one = TorusPolySequence::constant(Complex64::new(1.0, 0.0));
    let c = mobius_correlation(&t, &one, 100_000).unwrap();
    assert!((c - 48.0 / 100_000.0).abs() < 1e-15);
}

#[test]
fn flat_and_sharp_pieces_for_constant_sequence() {
    let one = TorusPolySequence::constant(Complex64::new(1.0, 0.0));
    let cfg = make_config(10_000, 3, 1, &system("n")).unwrap();
    let t = ArithTable::new(cfg.sieve_needed()).unwrap();
    let flat = flat_sum_value(&t, &cfg, &one).unwrap();
    assert!((flat.re - (-0.13365640133779033)).abs() < 1e-9, "{flat}");
    let cfg = make_config(100_000, 3, 1, &system("n")).unwrap();
    let t = ArithTable::new(cfg.sieve_needed()).unwrap();
    assert!((sharp_discrepancy(&t, &cfg, &one).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn majorant_dominates_on_averages() {
    let sys = CyclicSystem::from_literal(
        31,
        &SetLiteral::Random {
            density: 0.5,
            seed: 4,
        },
    )
    .unwrap();
    let s = system("n, n^2");
    let cfg = make_config(2000, 5, 1, &s).unwrap();
    let t = ArithTable::new(cfg.sieve_needed()).unwrap();
    let lt = multiple_average(&sys, &s, &cfg, &t, WeightKind::LambdaTilde).unwrap();
    let nu = multiple_average(&sys, &s, &cfg, &t, WeightKind::Nu).unwrap();
    let big = (1..=cfg.n).filter(|&n| cfg.progression(n) as f64 > cfg.r);
    let pointwise = big
        .clone()
        .all(|n| lambda_tilde(&cfg, &t, n).unwrap() <= majorant_nu(&t, &cfg, n).unwrap() + 1e-12);
    assert!(pointwise);
    assert!(lt >= 0.0 && nu >= 0.0);
}

#[test]
fn monte_carlo_tracks_exact_norm() {
    let a = WeightedSequence::from_fn(400, |i| {
        Complex64::new(((i * 7919) % 13) as f64 / 13.0, 0.0)
    })
    .unwrap();
    let exact = vk_norm(&a, 1, EvalMode::Exact).unwrap();
    let mc = vk_norm(
        &a,
        1,
        EvalMode::MonteCarlo {
            samples: 200_000,
            seed: 11,
        },
    )
    .unwrap();
    let se = mc.std_error.unwrap();
    assert!(
        (mc.power - exact.power).abs() <= 5.0 * se + 1e-12,
        "{} vs {} (se {se})",
        mc.power,
        exact.power
    );
}

#[test]
fn sieve_too_small_is_a_resource_error() {
    let sys = CyclicSystem::from_literal(7, &SetLiteral::Evens).unwrap();
    let s = system("n");
    let cfg = make_config(1000, 3, 1, &s).unwrap();
    let t = ArithTable::new(100).unwrap();
    assert!(matches!(
        multiple_average(&sys, &s, &cfg, &t, WeightKind::Nu),
        Err(Error::ResourceLimit(_))
    ));
}
