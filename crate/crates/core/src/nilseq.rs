//! Polynomial sequences on tori, `n ↦ F(frac(α_1 P_1(n) + x_1), …)`, the
//! tent-based indicator of a residue class, and correlations of such
//! sequences with the Möbius function and the sieve pieces `Λ♯`, `Λ♭`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::ArithTable;
use crate::error::{Error, Result};
use crate::polysys::{Poly, UnivariatePoly};
use crate::reduce::{chunked_sum, CHUNK};
use crate::wtrick::{chi_pair, lambda_sharp_flat, WTrickConfig};

/// A rotation frequency on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    /// `num/den`, giving exact residue-class coordinates.
    Rational { num: i64, den: u64 },
    /// A real number, used modulo 1.
    Real(f64),
}

impl Frequency {
    /// Accepts `p/q`, decimal literals, `sqrt(k)` and `golden`.
    pub fn parse(src: &str) -> Result<Self> {
        let s = src.trim();
        if s == "golden" {
            return Ok(Frequency::Real((1.0 + 5f64.sqrt()) / 2.0));
        }
        if let Some(k) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let k: f64 = k
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad frequency {s:?}")))?;
            if k < 0.0 {
                return Err(Error::invalid(format!("sqrt of negative number in {s:?}")));
            }
            return Ok(Frequency::Real(k.sqrt()));
        }
        if let Some((p, q)) = s.split_once('/') {
            let num: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad frequency {s:?}")))?;
            let den: u64 = q
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad frequency {s:?}")))?;
            if den == 0 {
                return Err(Error::invalid("zero denominator in frequency"));
            }
            return Ok(Frequency::Rational { num, den });
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::invalid(format!("bad frequency {s:?}")))?;
        if !x.is_finite() {
            return Err(Error::invalid(format!("non-finite frequency {s:?}")));
        }
        Ok(Frequency::Real(x))
    }

    /// `frac(α · v)` in `[0, 1)`.
    fn frac_times(&self, v: i128) -> f64 {
        match *self {
            Frequency::Rational { num, den } => {
                let d = den as i128;
                let r = ((num as i128).rem_euclid(d) * v.rem_euclid(d)).rem_euclid(d);
                r as f64 / den as f64
            }
            Frequency::Real(a) => {
                let a = a - a.floor();
                let p = v as f64;
                let prod = a * p;
                let err = a.mul_add(p, -prod);
                wrap(prod - prod.floor() + err)
            }
        }
    }
}

fn wrap(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Distance to the nearest integer.
fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Custom torus function.
pub type TorusClosure = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// Lipschitz function on `T^d` with respect to the max of coordinate
/// circle distances. Built-in profiles act as products over coordinates.
#[derive(Clone)]
pub enum TorusFn {
    Constant(Complex64),
    /// `Π cos(2π x_i)`.
    Cos,
    /// `Π e(x_i) = e(Σ x_i)`.
    Phase,
    /// `Π max(0, 1 − ‖x_i − c‖/h)`.
    Tent {
        center: f64,
        half_width: f64,
    },
    Custom {
        f: TorusClosure,
        lipschitz: f64,
        sup: f64,
    },
}

impl fmt::Debug for TorusFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusFn::Constant(c) => write!(f, "Constant({c})"),
            TorusFn::Cos => f.write_str("Cos"),
            TorusFn::Phase => f.write_str("Phase"),
            TorusFn::Tent { center, half_width } => write!(f, "Tent({center}, {half_width})"),
            TorusFn::Custom { lipschitz, sup, .. } => {
                write!(f, "Custom(L = {lipschitz}, sup = {sup})")
            }
        }
    }
}

impl TorusFn {
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            TorusFn::Constant(c) => *c,
            TorusFn::Cos => Complex64::new(x.iter().map(|&v| (TAU * v).cos()).product(), 0.0),
            TorusFn::Phase => Complex64::from_polar(1.0, TAU * x.iter().sum::<f64>()),
            TorusFn::Tent { center, half_width } => Complex64::new(
                x.iter()
                    .map(|&v| (1.0 - circle_dist(v, *center) / half_width).max(0.0))
                    .product(),
                0.0,
            ),
            TorusFn::Custom { f, .. } => f(x),
        }
    }

    /// Declared Lipschitz constant on `T^dim`.
    pub fn lipschitz(&self, dim: usize) -> f64 {
        let d = dim as f64;
        match self {
            TorusFn::Constant(_) => 0.0,
            TorusFn::Cos | TorusFn::Phase => TAU * d,
            TorusFn::Tent { half_width, .. } => d / half_width,
            TorusFn::Custom { lipschitz, .. } => *lipschitz,
        }
    }

    /// Declared bound on `|F|`.
    pub fn sup(&self) -> f64 {
        match self {
            TorusFn::Constant(c) => c.norm(),
            TorusFn::Cos | TorusFn::Phase | TorusFn::Tent { .. } => 1.0,
            TorusFn::Custom { sup, .. } => *sup,
        }
    }
}

/// `n ↦ F(frac(α_1 P_1(n) + x_1), …, frac(α_d P_d(n) + x_d))`.
#[derive(Debug, Clone)]
pub struct TorusPolySequence {
    freqs: Vec<Frequency>,
    polys: Vec<UnivariatePoly>,
    offsets: Vec<f64>,
    f: TorusFn,
}

impl TorusPolySequence {
    pub fn new(freqs: Vec<Frequency>, polys: Vec<Poly>, f: TorusFn) -> Result<Self> {
        let offsets = vec![0.0; freqs.len()];
        Self::with_offsets(freqs, polys, offsets, f)
    }

    pub fn with_offsets(
        freqs: Vec<Frequency>,
        polys: Vec<Poly>,
        offsets: Vec<f64>,
        f: TorusFn,
    ) -> Result<Self> {
        if freqs.is_empty() || freqs.len() != polys.len() || offsets.len() != freqs.len() {
            return Err(Error::invalid(
                "need one frequency, polynomial and offset per coordinate",
            ));
        }
        let polys = polys
            .iter()
            .map(Poly::univariate)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            freqs,
            polys,
            offsets,
            f,
        })
    }

    /// `e(α P(n))`.
    pub fn phase(freq: Frequency, poly: Poly) -> Result<Self> {
        Self::new(vec![freq], vec![poly], TorusFn::Phase)
    }

    /// The constant sequence `c`.
    pub fn constant(c: Complex64) -> Self {
        Self::new(
            vec![Frequency::Real(0.0)],
            vec![Poly::n()],
            TorusFn::Constant(c),
        )
        .expect("valid constant")
    }

    pub fn dim(&self) -> usize {
        self.freqs.len()
    }

    pub fn torus_fn(&self) -> &TorusFn {
        &self.f
    }

    pub fn lipschitz(&self) -> f64 {
        self.f.lipschitz(self.dim())
    }

    pub fn sup(&self) -> f64 {
        self.f.sup()
    }

    /// The torus point visited at `n`.
    pub fn point(&self, n: i64) -> Result<Vec<f64>> {
        self.freqs
            .iter()
            .zip(&self.polys)
            .zip(&self.offsets)
            .map(|((a, p), &x)| {
                let v = p
                    .eval_i128(n as i128)
                    .filter(|v| i64::try_from(*v).is_ok())
                    .ok_or_else(|| {
                        Error::Range(format!("polynomial value at n = {n} exceeds i64"))
                    })?;
                Ok(if x == 0.0 {
                    a.frac_times(v)
                } else {
                    wrap(a.frac_times(v) + x)
                })
            })
            .collect()
    }
}

pub fn torus_nilseq_eval(seq: &TorusPolySequence, n: i64) -> Result<Complex64> {
    Ok(seq.f.eval(&seq.point(n)?))
}

/// `1_{n ≡ i (mod J)}` as a tent of half-width `1/(10J)` at `i/J` composed
/// with `n ↦ n/J`.
pub fn component_indicator(j: u64, i: u64) -> Result<TorusPolySequence> {
    if j == 0 {
        return Err(Error::invalid("J must be positive"));
    }
    if i >= j {
        return Err(Error::invalid(format!("residue {i} outside [0, {j})")));
    }
    let tent = TorusFn::Tent {
        center: i as f64 / j as f64,
        half_width: 1.0 / (10.0 * j as f64),
    };
    TorusPolySequence::new(
        vec![Frequency::Rational { num: 1, den: j }],
        vec![Poly::n()],
        tent,
    )
}

/// Largest observed `|F(x) − F(y)| / dist(x, y)` over random pairs in `T^dim`.
pub fn lipschitz_ratio(f: &TorusFn, dim: usize, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        // half the pairs are local so steep profiles get probed
        let scale = if rng.random_bool(0.5) { 1.0 } else { 1e-3 };
        let y: Vec<f64> = x
            .iter()
            .map(|&v| wrap(v + scale * (rng.random::<f64>() - 0.5)))
            .collect();
        let dist = x
            .iter()
            .zip(&y)
            .map(|(&a, &b)| circle_dist(a, b))
            .fold(0.0, f64::max);
        if dist > 0.0 {
            worst = worst.max((f.eval(&x) - f.eval(&y)).norm() / dist);
        }
    }
    worst
}

#[derive(Default)]
struct Acc(Complex64, Option<Error>);

impl std::ops::Add for Acc {
    type Output = Acc;
    fn add(self, o: Acc) -> Acc {
        Acc(self.0 + o.0, self.1.or(o.1))
    }
}

impl Acc {
    fn push(&mut self, v: Result<Complex64>) {
        match v {
            Ok(z) => self.0 += z,
            Err(e) => {
                self.1.get_or_insert(e);
            }
        }
    }

    fn into_result(self) -> Result<Complex64> {
        match self.1 {
            Some(e) => Err(e),
            None => Ok(self.0),
        }
    }
}

/// `|E_{n ≤ N} μ(n) · seq(n)|`.
pub fn mobius_correlation(t: &ArithTable, seq: &TorusPolySequence, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    if n > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below N = {n}",
            t.limit()
        )));
    }
    let total = chunked_sum(n as usize, CHUNK, |range| {
        let mut acc = Acc::default();
        for i in range {
            let k = i as u64 + 1;
            acc.push((|| {
                let mu = t.mobius(k)?;
                if mu == 0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                Ok(torus_nilseq_eval(seq, k as i64)? * f64::from(mu))
            })());
        }
        acc
    })
    .into_result()?;
    Ok(total.norm() / n as f64)
}

/// `log R · E_{m ≤ X} E_{d ≤ X/m, md ≡ b (W)} μ(d) χ♭(log d / log R) seq((md − b)/W)`
/// with `X = ⌊NW/2⌋ + b`; an `m` with no admissible `d` contributes 0.
/// Returns the signed complex value.
pub fn flat_sum_value(
    t: &ArithTable,
    cfg: &WTrickConfig,
    seq: &TorusPolySequence,
) -> Result<Complex64> {
    let w = cfg.big_w;
    let x = cfg.n * w / 2 + cfg.b;
    if x > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below {x}",
            t.limit()
        )));
    }
    let total = chunked_sum(x as usize, CHUNK, |range| {
        let mut acc = Acc::default();
        for i in range {
            let m = i as u64 + 1;
            acc.push(flat_inner(t, cfg, seq, m, x / m));
        }
        acc
    })
    .into_result()?;
    Ok(total * cfg.log_r / x as f64)
}

/// Inner average over `d ≤ y` with `md ≡ b (mod W)`.
fn flat_inner(
    t: &ArithTable,
    cfg: &WTrickConfig,
    seq: &TorusPolySequence,
    m: u64,
    y: u64,
) -> Result<Complex64> {
    let w = cfg.big_w;
    let zero = Complex64::new(0.0, 0.0);
    let Some(inv) = mod_inverse(m % w, w) else {
        return Ok(zero);
    };
    let d0 = ((cfg.b % w) as u128 * inv as u128 % w as u128) as u64;
    let first = if d0 == 0 { w } else { d0 };
    if first > y {
        return Ok(zero);
    }
    let count = (y - first) / w + 1;
    let mut sum = zero;
    let mut d = first;
    while d <= y {
        let mu = t.mobius(d)?;
        if mu != 0 {
            let (_, flat) = chi_pair((d as f64).ln() / cfg.log_r);
            if flat != 0.0 {
                let arg = (m * d - cfg.b) / w;
                sum += torus_nilseq_eval(seq, arg as i64)? * (f64::from(mu) * flat);
            }
        }
        d += w;
    }
    Ok(sum / count as f64)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Modulus of [`flat_sum_value`].
pub fn flat_sum_correlation(
    t: &ArithTable,
    cfg: &WTrickConfig,
    seq: &TorusPolySequence,
) -> Result<f64> {
    Ok(flat_sum_value(t, cfg, seq)?.norm())
}

/// `|E_{n ≤ N} ((φ(W)/W) Λ♯(Wn + b) − 1) · 1̃(n) · seq(n)|`.
pub fn sharp_discrepancy(
    t: &ArithTable,
    cfg: &WTrickConfig,
    seq: &TorusPolySequence,
) -> Result<f64> {
    let half = cfg.half();
    if half > 0 && cfg.progression(half) > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below {}",
            t.limit(),
            cfg.progression(half)
        )));
    }
    let density = cfg.density();
    let total = chunked_sum(half as usize, CHUNK, |range| {
        let mut acc = Acc::default();
        for i in range {
            let n = i as u64 + 1;
            acc.push((|| {
                let (sharp, _) = lambda_sharp_flat(t, cfg, cfg.progression(n))?;
                Ok(torus_nilseq_eval(seq, n as i64)? * (density * sharp - 1.0))
            })());
        }
        acc
    })
    .into_result()?;
    Ok(total.norm() / cfg.n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::PolySystem;
    use crate::wtrick::make_config;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn one() -> TorusPolySequence {
        TorusPolySequence::constant(Complex64::new(1.0, 0.0))
    }

    #[test]
    fn evaluation_examples() {
        for n in -5..20 {
            assert_eq!(
                torus_nilseq_eval(&one(), n).unwrap(),
                Complex64::new(1.0, 0.0)
            );
        }
        let alt = TorusPolySequence::new(
            vec![Frequency::Rational { num: 1, den: 2 }],
            vec![p("n")],
            TorusFn::Cos,
        )
        .unwrap();
        for n in 0..20 {
            let v = torus_nilseq_eval(&alt, n).unwrap();
            assert!((v.re - if n % 2 == 0 { 1.0 } else { -1.0 }).abs() < 1e-15);
        }
        let still = TorusPolySequence::with_offsets(
            vec![Frequency::Real(0.0)],
            vec![p("n^2")],
            vec![0.3],
            TorusFn::Cos,
        )
        .unwrap();
        let base = (TAU * 0.3).cos();
        for n in 0..20 {
            assert!((torus_nilseq_eval(&still, n).unwrap().re - base).abs() < 1e-15);
        }
        let big = TorusPolySequence::phase(Frequency::Real(0.5), p("n^3")).unwrap();
        assert!(matches!(
            torus_nilseq_eval(&big, 1 << 30),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn frequency_parsing() {
        assert_eq!(
            Frequency::parse("1/3").unwrap(),
            Frequency::Rational { num: 1, den: 3 }
        );
        assert_eq!(
            Frequency::parse("sqrt(2)").unwrap(),
            Frequency::Real(2f64.sqrt())
        );
        assert_eq!(Frequency::parse("0.25").unwrap(), Frequency::Real(0.25));
        assert!(
            matches!(Frequency::parse("golden").unwrap(), Frequency::Real(g) if (g - 1.618033988749895).abs() < 1e-15)
        );
        assert!(Frequency::parse("1/0").is_err());
        assert!(Frequency::parse("pi").is_err());
    }

    #[test]
    fn real_fraction_is_accurate() {
        let a = Frequency::Real(2f64.sqrt());
        // 2^(1/2)·10^10 computed with an exact-product reference
        let v: i128 = 10_000_000_000;
        let x = a.frac_times(v);
        let hi = 2f64.sqrt() * v as f64;
        let lo = 2f64.sqrt().mul_add(v as f64, -hi);
        let want = wrap(hi - hi.floor() + lo);
        assert_eq!(x, want);
        assert!((0.0..1.0).contains(&x));
        assert_eq!(Frequency::Rational { num: -1, den: 4 }.frac_times(3), 0.25);
    }

    #[test]
    fn component_indicator_examples() {
        let c = component_indicator(4, 1).unwrap();
        assert_eq!(torus_nilseq_eval(&c, 1).unwrap().re, 1.0);
        assert_eq!(torus_nilseq_eval(&c, 0).unwrap().re, 0.0);
        assert_eq!(torus_nilseq_eval(&c, 2).unwrap().re, 0.0);
        assert_eq!(c.lipschitz(), 40.0);
        assert!(component_indicator(4, 4).is_err());
        assert!(component_indicator(0, 0).is_err());
    }

    #[test]
    fn component_indicators_are_exact_and_partition() {
        for j in 1..=12u64 {
            let parts: Vec<_> = (0..j).map(|i| component_indicator(j, i).unwrap()).collect();
            for n in -50..=1000i64 {
                let mut total = 0.0;
                for (i, c) in parts.iter().enumerate() {
                    let v = torus_nilseq_eval(c, n).unwrap();
                    let want = f64::from(u8::from(n.rem_euclid(j as i64) == i as i64));
                    assert_eq!(v, Complex64::new(want, 0.0), "J = {j}, i = {i}, n = {n}");
                    total += v.re;
                }
                assert_eq!(total, 1.0);
            }
        }
    }

    #[test]
    fn lipschitz_spot_checks() {
        for j in [1u64, 3, 12] {
            let c = component_indicator(j, j - 1).unwrap();
            assert!(lipschitz_ratio(c.torus_fn(), 1, 1000, j) <= c.lipschitz() * (1.0 + 1e-9));
        }
        for (f, dim) in [
            (TorusFn::Cos, 2),
            (TorusFn::Phase, 3),
            (
                TorusFn::Tent {
                    center: 0.2,
                    half_width: 0.1,
                },
                2,
            ),
        ] {
            assert!(
                lipschitz_ratio(&f, dim, 1000, 7) <= f.lipschitz(dim) * (1.0 + 1e-9),
                "{f:?}"
            );
        }
    }

    #[test]
    fn values_respect_sup() {
        let seqs = [
            TorusPolySequence::phase(Frequency::Real(0.7), p("n^2 + 3n")).unwrap(),
            TorusPolySequence::new(
                vec![Frequency::Real(0.1), Frequency::Rational { num: 2, den: 7 }],
                vec![p("n"), p("n^3")],
                TorusFn::Cos,
            )
            .unwrap(),
            component_indicator(5, 2).unwrap(),
        ];
        for s in &seqs {
            for n in 0..500 {
                assert!(torus_nilseq_eval(s, n).unwrap().norm() <= s.sup() + 1e-12);
            }
        }
    }

    #[test]
    fn mobius_correlation_examples() {
        let t = ArithTable::new(100_000).unwrap();
        for n in [1u64, 10, 1000, 100_000] {
            let want = t.mertens(n).unwrap().unsigned_abs() as f64 / n as f64;
            assert_eq!(mobius_correlation(&t, &one(), n).unwrap(), want);
        }
        // oracle: Mertens(1e5) = −48
        assert_eq!(
            mobius_correlation(&t, &one(), 100_000).unwrap(),
            48.0 / 100_000.0
        );
        let e = TorusPolySequence::phase(Frequency::parse("sqrt(2)").unwrap(), p("n^2")).unwrap();
        let small = mobius_correlation(&t, &e, 1000).unwrap();
        let large = mobius_correlation(&t, &e, 100_000).unwrap();
        // oracle: 0.032854 at 1e3, 0.00037204 at 1e5
        assert!((small - 0.032854).abs() < 1e-5, "{small}");
        assert!(large <= 0.01 && large < small, "{large}");
    }

    fn flat_brute(t: &ArithTable, cfg: &WTrickConfig, seq: &TorusPolySequence) -> Complex64 {
        let w = cfg.big_w;
        let x = cfg.n * w / 2 + cfg.b;
        let mut total = Complex64::new(0.0, 0.0);
        for m in 1..=x {
            let mut num = Complex64::new(0.0, 0.0);
            let mut cnt = 0u64;
            for d in 1..=x / m {
                if (m * d) % w == cfg.b % w {
                    cnt += 1;
                    let mu = f64::from(t.mobius(d).unwrap());
                    let flat = chi_pair((d as f64).ln() / cfg.log_r).1;
                    num +=
                        torus_nilseq_eval(seq, ((m * d - cfg.b) / w) as i64).unwrap() * (mu * flat);
                }
            }
            if cnt > 0 {
                total += num / cnt as f64;
            }
        }
        total * cfg.log_r / x as f64
    }

    #[test]
    fn flat_sum_examples() {
        let s = PolySystem::parse("n").unwrap();
        let cfg = make_config(10_000, 3, 1, &s).unwrap();
        let t = ArithTable::new(cfg.sieve_needed()).unwrap();
        let v = flat_sum_value(&t, &cfg, &one()).unwrap();
        // oracle: −0.13365640133779033
        assert!(
            (v.re + 0.13365640133779033).abs() < 1e-10 && v.im.abs() < 1e-15,
            "{v}"
        );
        let quad = TorusPolySequence::new(
            vec![Frequency::Rational { num: 1, den: 2 }],
            vec![p("n^2")],
            TorusFn::Tent {
                center: 0.5,
                half_width: 0.05,
            },
        )
        .unwrap();
        let small = make_config(2000, 5, -1, &s).unwrap();
        let t2 = ArithTable::new(small.sieve_needed()).unwrap();
        let fast = flat_sum_value(&t2, &small, &quad).unwrap();
        assert!((fast - flat_brute(&t2, &small, &quad)).norm() < 1e-9);
        let huge_r = WTrickConfig {
            log_r: 100.0,
            ..small.clone()
        };
        assert_eq!(flat_sum_correlation(&t2, &huge_r, &quad).unwrap(), 0.0);
    }

    #[test]
    fn sharp_discrepancy_examples() {
        let s = PolySystem::parse("n").unwrap();
        let cfg = make_config(100_000, 3, 1, &s).unwrap();
        let t = ArithTable::new(cfg.sieve_needed()).unwrap();
        // Λ♯ vanishes on odd arguments at R ≈ 2.05, leaving |−½|
        assert_eq!(sharp_discrepancy(&t, &cfg, &one()).unwrap(), 0.5);
        let zero = TorusPolySequence::constant(Complex64::new(0.0, 0.0));
        assert_eq!(sharp_discrepancy(&t, &cfg, &zero).unwrap(), 0.0);
        let small = make_config(5000, 5, 1, &s).unwrap();
        let t2 = ArithTable::new(small.sieve_needed()).unwrap();
        let e = TorusPolySequence::phase(Frequency::Real(0.3), p("n^2")).unwrap();
        let bound: f64 = (1..=small.half())
            .map(|n| {
                (small.density()
                    * lambda_sharp_flat(&t2, &small, small.progression(n))
                        .unwrap()
                        .0
                    - 1.0)
                    .abs()
            })
            .sum::<f64>()
            / small.n as f64;
        assert!(sharp_discrepancy(&t2, &small, &e).unwrap() <= bound + 1e-12);
    }
}
