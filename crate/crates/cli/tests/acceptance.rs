//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reclab_core::arith::ArithTable;
use reclab_core::nilseq::{
    component_indicator, mobius_correlation, torus_nilseq_eval, Frequency, TorusPolySequence,
};
use reclab_core::norms::{
    gowers_u2_spectral, gowers_uk, lemma33_pair, vk_norm, EvalMode, WeightedSequence,
};
use reclab_core::polysys::{parallelepiped_degree, pet_step, Param, Poly, PolySystem};
use reclab_core::systems::{
    convergence_profile, prime_vs_mangoldt_gap, shifted_prime_hit, CyclicSystem, FiniteSet,
    SetLiteral, Sign,
};
use reclab_core::wtrick::{domination_report, lambda_sharp_flat_at, make_config, nu_sequence};

/// Mass of ν at N = 10^4, w = 3, b = 1, {n}, from direct summation.
const NU_MASS_ORACLE: f64 = 0.2878231366242813;
const NU_MASS_TOLERANCE: f64 = 1e-6;

/// Number, name, check and time budget.
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn random_sequence(rng: &mut ChaCha8Rng, len: usize) -> WeightedSequence {
    WeightedSequence::from_fn(len, |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
    .unwrap()
}

fn system(src: &str) -> PolySystem {
    PolySystem::parse(src).unwrap()
}

fn pet_example() -> Outcome {
    let p0 = system("n^2, n^2+n");
    let tr = parallelepiped_degree(&p0).unwrap();
    let weights: Vec<String> = tr.weights.iter().map(ToString::to_string).collect();
    let expected = [
        system("n, 2n*m1 + m1^2, 2n*m1 + m1^2 + n + m1"),
        system("2n*m1 + m1^2 - n, 2n*m1 + m1^2 + m1, 2n*m1 + m1^2 + 2m1*m2 - n, 2n*m1 + m1^2 + 2m1*m2 + m1 + m2"),
        system("n + m1, n + 2m1*m2 + m1 + m2, n + 2m1*m3 + m1, n + 2m1*m2 + 2m1*m3 + m1 + m2"),
    ];
    let mut stage = p0.clone();
    let mut stepped = true;
    for (i, want) in expected.iter().enumerate() {
        stage = pet_step(&stage, Param::new(i as u32 + 1).unwrap()).unwrap();
        stepped &= stage.same_set(want);
    }
    let ok = tr.degree == 4 && weights == ["(0,1)", "(3)", "(2)", "(1)"] && stepped;
    outcome(
        ok,
        format!(
            "l={} trace {} stages match: {stepped}",
            tr.degree,
            weights.join(" ")
        ),
    )
}

fn lemma33_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst = 0.0f64;
    for k in 0..=2u32 {
        for n in [4usize, 9, 16] {
            for _ in 0..25 {
                let a = random_sequence(&mut rng, n);
                let (lhs, rhs) = lemma33_pair(&a, k, f64::from(1u32 << k)).unwrap();
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    outcome(worst <= 1e-9, format!("max |lhs - rhs| = {worst:.3e}"))
}

fn sharp_flat_split() -> Outcome {
    let t = ArithTable::new(100_000).unwrap();
    let mut worst = 0.0f64;
    for r in [10.0f64, 1000.0] {
        for n in 2..=100_000u64 {
            let (sharp, flat) = lambda_sharp_flat_at(&t, r.ln(), n).unwrap();
            worst = worst.max((sharp + flat - t.von_mangoldt(n).unwrap()).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max error = {worst:.3e}"))
}

fn u2_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for n in [16usize, 32, 64] {
        for _ in 0..100 {
            let f = random_sequence(&mut rng, n);
            worst = worst.max((gowers_uk(&f, 2).unwrap() - gowers_u2_spectral(&f)).abs());
        }
    }
    outcome(worst <= 1e-9, format!("max difference = {worst:.3e}"))
}

fn v1_mean_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0;
    let mut checked = 0;
    for n in [16usize, 64, 256] {
        for _ in 0..500 {
            let a = random_sequence(&mut rng, n);
            let v1 = vk_norm(&a, 1, EvalMode::Exact).unwrap().norm;
            let slack = 2.0 * a.max_modulus() / (n as f64).sqrt();
            if a.mean().norm() > v1 + slack {
                violations += 1;
            }
            checked += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations in {checked} sequences"),
    )
}

fn shifted_primes() -> Outcome {
    let e = FiniteSet::from_literal(100_000, &SetLiteral::Multiples(3)).unwrap();
    let s = system("n^2, n^2+n");
    let t = ArithTable::new(1000).unwrap();
    let minus = shifted_prime_hit(&e, &s, 1000, Sign::Minus, &t).unwrap();
    let plus = shifted_prime_hit(&e, &s, 1000, Sign::Plus, &t).unwrap();
    outcome(
        minus == Some(7) && plus == Some(2),
        format!("sign -1: {minus:?}, sign +1: {plus:?}"),
    )
}

fn majorant_audit() -> Outcome {
    let cfg = make_config(10_000, 3, 1, &system("n")).unwrap();
    let t = ArithTable::new(cfg.sieve_needed()).unwrap();
    let mass = nu_sequence(&t, &cfg).unwrap().mean().re;
    let dom = domination_report(&t, &cfg).unwrap();
    let ok = (mass - NU_MASS_ORACLE).abs() <= NU_MASS_TOLERANCE && dom.violations.is_empty();
    outcome(
        ok,
        format!(
            "mass = {mass:.12}, {} violations over {} checked n",
            dom.violations.len(),
            dom.checked
        ),
    )
}

fn mobius_trend() -> Outcome {
    let t = ArithTable::new(100_000).unwrap();
    let seq = TorusPolySequence::phase(
        Frequency::parse("sqrt(2)").unwrap(),
        Poly::parse("n^2").unwrap(),
    )
    .unwrap();
    let small = mobius_correlation(&t, &seq, 1000).unwrap();
    let large = mobius_correlation(&t, &seq, 100_000).unwrap();
    outcome(
        large <= 0.01 && large < small,
        format!("N=1e3: {small:.6}, N=1e5: {large:.6}"),
    )
}

fn prime_gap() -> Outcome {
    let cfg = make_config(100_000, 3, 1, &system("n")).unwrap();
    let t = ArithTable::new(cfg.sieve_needed()).unwrap();
    let ones =
        WeightedSequence::indicator(cfg.sieve_needed() as usize, cfg.sieve_needed() as usize)
            .unwrap();
    let gap = prime_vs_mangoldt_gap(&ones, &cfg, &t).unwrap();
    outcome(gap <= 0.05, format!("gap = {gap:.6e}"))
}

fn convergence() -> Outcome {
    let sys = CyclicSystem::from_literal(
        101,
        &SetLiteral::Random {
            density: 0.4,
            seed: 2026,
        },
    )
    .unwrap();
    let s = system("n, n^2");
    let f = vec![sys.indicator(); 2];
    let t = ArithTable::new(100_000).unwrap();
    let dyadic: Vec<u64> = (8..=13).map(|j| 1u64 << j).collect();
    let prof = convergence_profile(&sys, &s, &f, &dyadic, &t, None).unwrap();
    let delta_at = |n: u64| {
        prof.iter()
            .find(|p| p.n == n)
            .and_then(|p| p.cauchy_delta)
            .unwrap()
    };
    let early = delta_at(1 << 9);
    let late = delta_at(1 << 13);
    let ends = convergence_profile(&sys, &s, &f, &[1000, 100_000], &t, None).unwrap();
    let (g_small, g_large) = (ends[0].gap, ends[1].gap);
    let ok = late < early && g_large < g_small;
    outcome(ok, format!("delta [2^8,2^9] = {early:.4e}, [2^12,2^13] = {late:.4e}; gap 1e3 = {g_small:.4e}, 1e5 = {g_large:.4e}"))
}

fn component_indicators() -> Outcome {
    let mut mismatches = 0;
    for j in 1..=12u64 {
        for i in 0..j {
            let c = component_indicator(j, i).unwrap();
            for n in -100..=1000i64 {
                let want = f64::from(u8::from(n.rem_euclid(j as i64) == i as i64));
                if torus_nilseq_eval(&c, n).unwrap() != Complex64::new(want, 0.0) {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches for J <= 12, -100 <= n <= 1000"),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_reclab"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "reclab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn csv_values(bytes: &[u8]) -> Vec<f64> {
    String::from_utf8_lossy(bytes)
        .lines()
        .skip(1)
        .flat_map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>())
        .filter_map(|v| v.parse().ok())
        .collect()
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &[
            "mobius-orth",
            "--freq",
            "sqrt(2)",
            "--poly",
            "n^2",
            "--N",
            "100000",
            "--format",
            "csv",
        ],
        &[
            "norms",
            "--kind",
            "vk",
            "--k",
            "2",
            "--seq",
            "random",
            "--N",
            "4096",
            "--mode",
            "mc",
            "--samples",
            "20000",
            "--seed",
            "9",
            "--format",
            "csv",
        ],
        &[
            "averages",
            "--modulus",
            "101",
            "--set",
            "random(0.4,3)",
            "--system",
            "n, n^2",
            "--N",
            "20000",
            "--w",
            "5",
            "--b",
            "1",
            "--format",
            "csv",
        ],
        &[
            "convergence",
            "--modulus",
            "101",
            "--set",
            "random(0.4,3)",
            "--system",
            "n, n^2",
            "--c-modulus",
            "6",
            "--format",
            "csv",
        ],
    ];
    let mut identical = true;
    let mut worst = 0.0f64;
    for args in runs {
        let first = cli(args);
        identical &= first == cli(args);
        let mut threaded: Vec<&str> = args.to_vec();
        threaded.extend(["--threads", "4"]);
        let (a, b) = (csv_values(&first), csv_values(&cli(&threaded)));
        if a.len() != b.len() {
            return outcome(
                false,
                format!("thread count changed the row shape of {args:?}"),
            );
        }
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    outcome(
        identical && worst <= 1e-12,
        format!("byte-identical: {identical}, max thread difference = {worst:.3e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "PET worked example", pet_example, Duration::from_secs(1)),
        (
            2,
            "V_k equality clause",
            lemma33_equality,
            Duration::from_secs(30),
        ),
        (
            3,
            "sharp plus flat split",
            sharp_flat_split,
            Duration::from_secs(10),
        ),
        (4, "U2 cross-check", u2_cross_check, Duration::from_secs(10)),
        (5, "V_1 mean bound", v1_mean_bound, Duration::from_secs(60)),
        (
            6,
            "shifted prime hits",
            shifted_primes,
            Duration::from_secs(5),
        ),
        (7, "majorant audit", majorant_audit, Duration::from_secs(30)),
        (
            8,
            "Mobius orthogonality trend",
            mobius_trend,
            Duration::from_secs(10),
        ),
        (
            9,
            "prime versus von Mangoldt gap",
            prime_gap,
            Duration::from_secs(10),
        ),
        (
            10,
            "convergence profile",
            convergence,
            Duration::from_secs(60),
        ),
        (
            11,
            "component indicators",
            component_indicators,
            Duration::from_secs(60),
        ),
        (12, "CLI determinism", determinism, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (n, name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let ok = result.ok && elapsed <= budget;
        failed += usize::from(!ok);
        println!(
            "{} criterion {n}: {name}: {} ({:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
