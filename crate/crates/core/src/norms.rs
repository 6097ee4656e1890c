//! Gowers `U^k` norms on `Z/NZ` and the local, non-cyclic `V_k` norms with
//! shifts up to `⌊√N⌋`.
//!
//! `V_k` is evaluated through the recursion
//! `raw_k(a) = E_{s,t ≤ M} raw_{k-1}(x ↦ a(x+s)·conj a(x+t))`
//! with `raw_1(a) = E_{n ≤ N} |E_{m ≤ M} a(n+m)|²`, which is the defining
//! parallelepiped expectation regrouped along its last coordinate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::polysys::{parallelepiped_degree, PolySystem};
use crate::reduce::chunked_sum;

/// Budget for exact evaluation, counted in the evaluator's elementary
/// complex products: `N` for `k = 0` and `(N + M) · M^{2(k-1)}` for `k ≥ 1`,
/// where `M = ⌊√N⌋`.
pub const EXACT_BUDGET: u128 = 1_000_000_000;

const MC_BLOCK: u64 = 4096;

/// Complex function on `[1, N]`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSequence {
    values: Vec<Complex64>,
    max_modulus: f64,
}

impl WeightedSequence {
    /// `values[i]` is the value at `n = i + 1`.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sequence length must be at least 1"));
        }
        if let Some(i) = values
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid(format!("non-finite value at n = {}", i + 1)));
        }
        let max_modulus = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Self {
            values,
            max_modulus,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds `n ↦ f(n)` for `n = 1..=N`.
    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        Self::new((1..=len).map(f).collect())
    }

    /// Indicator of `[1, m]` inside `[1, N]`.
    pub fn indicator(len: usize, m: usize) -> Result<Self> {
        Self::from_fn(len, |n| Complex64::new(if n <= m { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_modulus(&self) -> f64 {
        self.max_modulus
    }

    /// Value at `n`, zero outside `[1, N]`.
    pub fn at(&self, n: i64) -> Complex64 {
        if n >= 1 && (n as usize) <= self.values.len() {
            self.values[n as usize - 1]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Value at `n mod N`, with residue 0 read as `N`.
    pub fn cyclic(&self, n: i64) -> Complex64 {
        let len = self.values.len() as i64;
        self.values[(n - 1).rem_euclid(len) as usize]
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    fn window(&self) -> Window {
        Window {
            lo: 1,
            vals: self.values.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub norm: f64,
    /// Estimate of `norm^{2^k}` (for `k = 0`, the modulus of the mean).
    pub power: f64,
    /// Present in Monte Carlo mode.
    pub std_error: Option<f64>,
}

/// `⌊√N⌋`, the shift range of the local norms.
pub fn shift_range(n: usize) -> usize {
    (n as f64).sqrt().floor() as usize
}

fn exact_cost(n: usize, k: u32) -> u128 {
    if k == 0 {
        return n as u128;
    }
    let m = shift_range(n) as u128;
    let mut cost = n as u128 + m;
    for _ in 1..k {
        cost = cost.saturating_mul(m * m);
    }
    cost
}

fn check_budget(n: usize, k: u32) -> Result<()> {
    let cost = exact_cost(n, k);
    if cost > EXACT_BUDGET {
        return Err(Error::ResourceLimit(format!(
            "exact V_{k} at N = {n} needs {cost} products (budget {EXACT_BUDGET}); use Monte Carlo"
        )));
    }
    Ok(())
}

/// A function on `Z` stored on `[lo, lo + len)`, zero elsewhere.
#[derive(Debug, Clone)]
struct Window {
    lo: i64,
    vals: Vec<Complex64>,
}

impl Window {
    fn hi(&self) -> i64 {
        self.lo + self.vals.len() as i64 - 1
    }

    fn at(&self, x: i64) -> Complex64 {
        let i = x - self.lo;
        if i >= 0 && (i as usize) < self.vals.len() {
            self.vals[i as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `x ↦ a(x + s) · conj a(x + t)`.
    fn product(&self, s: i64, t: i64) -> Window {
        let lo = self.lo - s.min(t);
        let hi = self.hi() - s.max(t);
        if hi < lo {
            return Window {
                lo: 0,
                vals: Vec::new(),
            };
        }
        let vals = (lo..=hi)
            .map(|x| self.at(x + s) * self.at(x + t).conj())
            .collect();
        Window { lo, vals }
    }
}

/// `E_{n ≤ N} w(n)`.
fn raw0(w: &Window, n: usize) -> Complex64 {
    (1..=n as i64).map(|x| w.at(x)).sum::<Complex64>() / n as f64
}

/// `E_{n ≤ N} |E_{m ≤ M} w(n + m)|²` through prefix sums.
fn raw1(w: &Window, n: usize, m: usize) -> f64 {
    let lo = 1i64;
    let hi = (n + m) as i64;
    let mut prefix = Vec::with_capacity((hi - lo + 2) as usize);
    let mut acc = Complex64::new(0.0, 0.0);
    prefix.push(acc);
    for x in lo..=hi {
        acc += w.at(x);
        prefix.push(acc);
    }
    let mut total = 0.0;
    for x in 1..=n {
        // window sum over x+1 ..= x+m
        let s = prefix[x + m] - prefix[x];
        total += s.norm_sqr();
    }
    total / (n as f64 * (m * m) as f64)
}

/// Defining expectation of `‖w‖_{V_k}^{2^k}` with the `n`-range `[1, N]`.
///
/// With `symmetric`, the swap `(s,t) ↦ (t,s)` conjugates the summand, so only
/// `s ≤ t` is visited and the result is real by construction.
fn raw(w: &Window, k: u32, n: usize, m: usize, symmetric: bool) -> Complex64 {
    match k {
        0 => raw0(w, n),
        1 if symmetric => Complex64::new(raw1(w, n, m), 0.0),
        _ => {
            let mut total = Complex64::new(0.0, 0.0);
            for s in 1..=m as i64 {
                if symmetric {
                    total += raw(&w.product(s, s), k - 1, n, m, true);
                    for t in s + 1..=m as i64 {
                        total += 2.0 * raw(&w.product(s, t), k - 1, n, m, true).re;
                    }
                } else {
                    for t in 1..=m as i64 {
                        total += raw(&w.product(s, t), k - 1, n, m, false);
                    }
                }
            }
            total / (m * m) as f64
        }
    }
}

/// Pair list `(s, t)` with `s ≤ t`, in row order.
fn upper_pairs(m: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for s in 1..=m as i64 {
        for t in s..=m as i64 {
            out.push((s, t));
        }
    }
    out
}

/// Real `raw_k`, parallel over the outermost shift pairs.
fn raw_parallel(w: &Window, k: u32, n: usize) -> f64 {
    let m = shift_range(n);
    if k <= 1 {
        return raw(w, k, n, m, true).re;
    }
    let pairs = upper_pairs(m);
    let total: f64 = chunked_sum(pairs.len(), 1, |range| {
        range
            .map(|i| {
                let (s, t) = pairs[i];
                let v = raw(&w.product(s, t), k - 1, n, m, true).re;
                if s == t {
                    v
                } else {
                    2.0 * v
                }
            })
            .sum::<f64>()
    });
    total / (m * m) as f64
}

/// The defining `V_k` expectation as a complex number, summed over every
/// shift tuple without symmetry reduction.
pub fn vk_expectation(a: &WeightedSequence, k: u32) -> Result<Complex64> {
    check_budget(a.len(), k)?;
    let n = a.len();
    Ok(raw(&a.window(), k, n, shift_range(n), false))
}

/// `‖a‖_{V_k}`; for `k = 0` this is `|E_{n ≤ N} a(n)|`.
pub fn vk_norm(a: &WeightedSequence, k: u32, mode: EvalMode) -> Result<NormValue> {
    if k > 16 {
        return Err(Error::Unsupported(format!(
            "V_{k} is beyond the supported range"
        )));
    }
    match mode {
        EvalMode::Exact => {
            check_budget(a.len(), k)?;
            if k == 0 {
                let v = a.mean().norm();
                return Ok(NormValue {
                    norm: v,
                    power: v,
                    std_error: None,
                });
            }
            let power = raw_parallel(&a.window(), k, a.len());
            Ok(NormValue {
                norm: root(power, k),
                power,
                std_error: None,
            })
        }
        EvalMode::MonteCarlo { samples, seed } => vk_monte_carlo(a, k, samples, seed),
    }
}

fn root(power: f64, k: u32) -> f64 {
    power.max(0.0).powf(1.0 / f64::from(1u32 << k))
}

#[derive(Default)]
struct Moments {
    count: u64,
    sum: f64,
    sum_sq: f64,
    sum_im: f64,
}

impl std::ops::Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            sum_im: self.sum_im + o.sum_im,
        }
    }
}

/// Uniform independent draws of `(n, m⃗, m⃗')`; block `b` uses ChaCha8 stream `b`
/// of the caller's seed, and blocks combine in order.
fn vk_monte_carlo(a: &WeightedSequence, k: u32, samples: u64, seed: u64) -> Result<NormValue> {
    if samples == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one sample"));
    }
    let n = a.len() as i64;
    let m = shift_range(a.len()) as i64;
    let blocks = samples.div_ceil(MC_BLOCK);
    let corners = 1usize << k;
    let mom: Moments = chunked_sum(blocks as usize, 1, |range| {
        let mut acc = Moments::default();
        for b in range {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let todo = MC_BLOCK.min(samples - b as u64 * MC_BLOCK);
            let mut ms = vec![0i64; k as usize];
            let mut mps = vec![0i64; k as usize];
            for _ in 0..todo {
                let base = rng.random_range(1..=n);
                for i in 0..k as usize {
                    ms[i] = rng.random_range(1..=m);
                    mps[i] = rng.random_range(1..=m);
                }
                let mut prod = Complex64::new(1.0, 0.0);
                for omega in 0..corners {
                    let mut x = base;
                    for i in 0..k as usize {
                        x += if omega >> i & 1 == 1 { ms[i] } else { mps[i] };
                    }
                    let v = a.at(x);
                    prod *= if omega.count_ones() % 2 == 0 {
                        v
                    } else {
                        v.conj()
                    };
                }
                acc.count += 1;
                acc.sum += prod.re;
                acc.sum_sq += prod.re * prod.re;
                acc.sum_im += prod.im;
            }
        }
        acc
    });
    let cnt = mom.count as f64;
    let mean = mom.sum / cnt;
    let var = if mom.count > 1 {
        (mom.sum_sq - cnt * mean * mean).max(0.0) / (cnt - 1.0)
    } else {
        0.0
    };
    let std_error = Some((var / cnt).sqrt());
    if k == 0 {
        let v = Complex64::new(mean, mom.sum_im / cnt).norm();
        return Ok(NormValue {
            norm: v,
            power: v,
            std_error,
        });
    }
    Ok(NormValue {
        norm: root(mean, k),
        power: mean,
        std_error,
    })
}

/// `‖a‖_{V_𝒫} = ‖a‖_{V_{l(𝒫)+1}}`.
pub fn vp_norm(a: &WeightedSequence, s: &PolySystem, mode: EvalMode) -> Result<NormValue> {
    let l = parallelepiped_degree(s)?.degree;
    vk_norm(a, l as u32 + 1, mode)
}

/// Both sides of the shift-averaging identity for the local norms:
/// `lhs = E_{m,m'} ‖a(·+m)·conj a(·+m')‖_{V_k}^γ` and
/// `rhs = ‖a‖_{V_{k+1}}^{2γ}`.
///
/// At `γ = 2^k` the left side averages the signed defining expectations, so
/// the two sides agree as exact sums, including `k = 0`. Below `2^k` each
/// shifted norm is taken as `|raw|^{γ/2^k}`.
pub fn lemma33_pair(a: &WeightedSequence, k: u32, gamma: f64) -> Result<(f64, f64)> {
    let top = f64::from(1u32 << k.min(31));
    if !(gamma > 0.0 && gamma <= top) || k > 16 {
        return Err(Error::invalid(format!(
            "need 0 < gamma <= 2^k, got gamma = {gamma}, k = {k}"
        )));
    }
    check_budget(a.len(), k + 1)?;
    let n = a.len();
    let m = shift_range(n);
    let w = a.window();
    let equality = gamma == top;
    let pairs: Vec<(i64, i64)> = (1..=m as i64)
        .flat_map(|s| (1..=m as i64).map(move |t| (s, t)))
        .collect();
    let lhs: f64 = chunked_sum(pairs.len(), 1, |range| {
        range
            .map(|i| {
                let (s, t) = pairs[i];
                let r = raw(&w.product(s, t), k, n, m, true);
                if equality {
                    r.re
                } else {
                    r.norm().powf(gamma / top)
                }
            })
            .sum::<f64>()
    }) / (m * m) as f64;
    let rhs_power = raw_parallel(&w, k + 1, n);
    let rhs = rhs_power.max(0.0).powf(gamma / top);
    Ok((lhs, rhs))
}

/// `‖f‖_{U^k(Z/NZ)}` for `1 ≤ k ≤ 4`.
pub fn gowers_uk(f: &WeightedSequence, k: u32) -> Result<f64> {
    if !(1..=4).contains(&k) {
        return Err(Error::Unsupported(format!(
            "U^{k} exact evaluation supports 1 <= k <= 4"
        )));
    }
    let n = f.len();
    let budget = (n as u128).pow(k + 1);
    if budget > EXACT_BUDGET {
        return Err(Error::ResourceLimit(format!(
            "U^{k} at N = {n} needs {budget} products"
        )));
    }
    let power = if k == 1 {
        f.mean().norm_sqr()
    } else {
        let vals = f.values.clone();
        chunked_sum(n, 1, |range| {
            range
                .map(|h| gowers_power(&difference(&vals, h), k - 1))
                .sum::<f64>()
        }) / n as f64
    };
    Ok(root(power, k))
}

/// `x ↦ g(x) · conj g(x + h)` on `Z/NZ`.
fn difference(g: &[Complex64], h: usize) -> Vec<Complex64> {
    let n = g.len();
    (0..n).map(|x| g[x] * g[(x + h) % n].conj()).collect()
}

fn gowers_power(g: &[Complex64], k: u32) -> f64 {
    if k == 1 {
        let mean = g.iter().sum::<Complex64>() / g.len() as f64;
        return mean.norm_sqr();
    }
    (0..g.len())
        .map(|h| gowers_power(&difference(g, h), k - 1))
        .sum::<f64>()
        / g.len() as f64
}

/// `‖f‖_{U^2}` as `(Σ_ξ |f̂(ξ)|⁴)^{1/4}` with `f̂(ξ) = E_n f(n) e(−nξ/N)`.
pub fn gowers_u2_spectral(f: &WeightedSequence) -> f64 {
    let n = f.len();
    let mut buf = f.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let fourth: f64 = buf.iter().map(|z| (z * scale).norm_sqr().powi(2)).sum();
    fourth.powf(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn e(x: f64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * x)
    }

    fn random_seq(len: usize, seed: u64) -> WeightedSequence {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        WeightedSequence::from_fn(len, |_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap()
    }

    /// Literal parallelepiped sum for `V_k`.
    fn vk_brute(a: &WeightedSequence, k: u32) -> Complex64 {
        let n = a.len() as i64;
        let m = shift_range(a.len()) as i64;
        let dims = 2 * k as usize;
        let tuples = (m as usize).pow(dims as u32);
        let mut total = Complex64::new(0.0, 0.0);
        for base in 1..=n {
            for code in 0..tuples {
                let shifts: Vec<i64> = (0..dims)
                    .map(|d| (code / (m as usize).pow(d as u32)) as i64 % m + 1)
                    .collect();
                let mut prod = Complex64::new(1.0, 0.0);
                for omega in 0..1usize << k {
                    let mut x = base;
                    for i in 0..k as usize {
                        x += if omega >> i & 1 == 1 {
                            shifts[i]
                        } else {
                            shifts[k as usize + i]
                        };
                    }
                    let v = a.at(x);
                    prod *= if omega.count_ones() % 2 == 0 {
                        v
                    } else {
                        v.conj()
                    };
                }
                total += prod;
            }
        }
        total / (n as f64 * tuples as f64)
    }

    /// Literal parallelepiped sum for `U^k` on `Z/NZ`.
    fn uk_brute(f: &WeightedSequence, k: u32) -> f64 {
        let n = f.len();
        let tuples = n.pow(k);
        let mut total = Complex64::new(0.0, 0.0);
        for base in 0..n {
            for code in 0..tuples {
                let mut prod = Complex64::new(1.0, 0.0);
                for omega in 0..1usize << k {
                    let mut x = base;
                    for i in 0..k as usize {
                        if omega >> i & 1 == 1 {
                            x += code / n.pow(i as u32) % n;
                        }
                    }
                    let v = f.cyclic(x as i64 + 1);
                    prod *= if omega.count_ones() % 2 == 0 {
                        v
                    } else {
                        v.conj()
                    };
                }
                total += prod;
            }
        }
        (total.re / (n * tuples) as f64)
            .max(0.0)
            .powf(1.0 / f64::from(1u32 << k))
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(WeightedSequence::new(vec![]).is_err());
        assert!(WeightedSequence::from_real(&[1.0, f64::NAN]).is_err());
        let a = WeightedSequence::from_real(&[1.0, -3.0]).unwrap();
        assert_eq!(a.max_modulus(), 3.0);
        assert_eq!(a.at(0), Complex64::new(0.0, 0.0));
        assert_eq!(a.cyclic(0), Complex64::new(-3.0, 0.0));
    }

    #[test]
    fn vk_examples() {
        let a = WeightedSequence::indicator(4, 4).unwrap();
        let v = vk_norm(&a, 1, EvalMode::Exact).unwrap();
        assert!((v.norm - 0.75).abs() < 1e-15);
        assert!((v.power - 0.5625).abs() < 1e-15);
        let spike = WeightedSequence::indicator(4, 1).unwrap();
        assert_eq!(vk_norm(&spike, 1, EvalMode::Exact).unwrap().norm, 0.0);
        let b = WeightedSequence::indicator(9, 9).unwrap();
        let exact = vk_norm(&b, 2, EvalMode::Exact).unwrap();
        let brute = vk_brute(&b, 2);
        assert!((exact.power - brute.re).abs() < 1e-10);
        let zero = WeightedSequence::from_real(&[0.0; 7]).unwrap();
        assert_eq!(vk_norm(&zero, 3, EvalMode::Exact).unwrap().norm, 0.0);
    }

    #[test]
    fn vk_zero_is_mean_modulus() {
        let a = WeightedSequence::from_real(&[1.0, -3.0, 5.0]).unwrap();
        assert_eq!(vk_norm(&a, 0, EvalMode::Exact).unwrap().norm, 1.0);
    }

    #[test]
    fn vk_matches_brute_force_on_random_input() {
        for seed in 0..20 {
            let len = 4 + (seed as usize % 13);
            let a = random_seq(len, seed);
            for k in 0..=2 {
                let brute = vk_brute(&a, k);
                let full = vk_expectation(&a, k).unwrap();
                assert!((brute - full).norm() < 1e-12, "seed {seed} k {k}");
                if k > 0 {
                    let fast = vk_norm(&a, k, EvalMode::Exact).unwrap().power;
                    assert!((fast - brute.re).abs() < 1e-12, "seed {seed} k {k}");
                }
            }
        }
    }

    #[test]
    fn vk_expectation_is_real_and_nonnegative() {
        for seed in 100..200 {
            let a = random_seq(1 + (seed as usize % 16), seed);
            for k in 1..=2 {
                let z = vk_expectation(&a, k).unwrap();
                assert!(z.im.abs() <= 1e-10, "seed {seed} k {k}: {z}");
                assert!(z.re >= -1e-12, "seed {seed} k {k}: {z}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let a = WeightedSequence::indicator(10_000, 10).unwrap();
        assert!(matches!(
            vk_norm(&a, 3, EvalMode::Exact),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            vk_norm(
                &a,
                1,
                EvalMode::MonteCarlo {
                    samples: 0,
                    seed: 1
                }
            ),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn vp_norm_uses_parallelepiped_degree() {
        let a = WeightedSequence::indicator(4, 4).unwrap();
        let s = PolySystem::parse("n").unwrap();
        assert_eq!(
            vp_norm(&a, &s, EvalMode::Exact).unwrap(),
            vk_norm(&a, 2, EvalMode::Exact).unwrap()
        );
        let s = PolySystem::parse("n^2, n^2 + n").unwrap();
        let b = random_seq(9, 3);
        assert_eq!(
            vp_norm(&b, &s, EvalMode::Exact).unwrap(),
            vk_norm(&b, 5, EvalMode::Exact).unwrap()
        );
        let zero = WeightedSequence::from_real(&[0.0; 9]).unwrap();
        assert_eq!(vp_norm(&zero, &s, EvalMode::Exact).unwrap().norm, 0.0);
    }

    #[test]
    fn lemma33_examples() {
        let a = WeightedSequence::indicator(9, 9).unwrap();
        let (l, r) = lemma33_pair(&a, 1, 2.0).unwrap();
        assert!((l - r).abs() < 1e-10);
        let (l, r) = lemma33_pair(&a, 1, 1.0).unwrap();
        assert!(l <= r + 1e-12);
        let zero = WeightedSequence::from_real(&[0.0; 9]).unwrap();
        assert_eq!(lemma33_pair(&zero, 1, 2.0).unwrap(), (0.0, 0.0));
        assert!(lemma33_pair(&a, 1, 3.0).is_err());
        assert!(lemma33_pair(&a, 1, 0.0).is_err());
    }

    #[test]
    fn lemma33_inequality_below_equality_exponent() {
        for seed in 0..10 {
            let a = random_seq(9 + seed as usize, seed);
            for k in 1..=2u32 {
                for gamma in [0.5, 1.0, 1.5] {
                    let (l, r) = lemma33_pair(&a, k, gamma).unwrap();
                    assert!(l <= r + 1e-12, "seed {seed} k {k} gamma {gamma}: {l} > {r}");
                }
            }
        }
    }

    #[test]
    fn monte_carlo_is_seeded_and_sane() {
        let a = random_seq(64, 9);
        let mode = EvalMode::MonteCarlo {
            samples: 20_000,
            seed: 42,
        };
        let x = vk_norm(&a, 2, mode).unwrap();
        let y = vk_norm(&a, 2, mode).unwrap();
        assert_eq!(x, y);
        let exact = vk_norm(&a, 2, EvalMode::Exact).unwrap().power;
        let mut hits = 0;
        for seed in 0..50 {
            let v = vk_norm(
                &a,
                2,
                EvalMode::MonteCarlo {
                    samples: 20_000,
                    seed,
                },
            )
            .unwrap();
            if (v.power - exact).abs() <= 4.0 * v.std_error.unwrap() {
                hits += 1;
            }
        }
        assert!(hits >= 47, "{hits}/50");
    }

    #[test]
    fn gowers_examples() {
        for k in 1..=4 {
            let ones = WeightedSequence::from_real(&[1.0; 8]).unwrap();
            assert!((gowers_uk(&ones, k).unwrap() - 1.0).abs() < 1e-12);
        }
        let n = 16;
        let phase = WeightedSequence::from_fn(n, |x| e(x as f64 / n as f64)).unwrap();
        assert!((gowers_uk(&phase, 2).unwrap() - 1.0).abs() < 1e-12);
        let phase3 = WeightedSequence::from_fn(n, |x| e(3.0 * x as f64 / n as f64)).unwrap();
        assert!((gowers_u2_spectral(&phase3) - 1.0).abs() < 1e-12);
        assert!(matches!(gowers_uk(&phase, 5), Err(Error::Unsupported(_))));
        assert!(matches!(gowers_uk(&phase, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gowers_matches_literal_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = WeightedSequence::from_fn(64, |_| {
            Complex64::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0)
        })
        .unwrap();
        assert!((gowers_uk(&f, 2).unwrap() - uk_brute(&f, 2)).abs() < 1e-9);
        for seed in 0..5 {
            let g = random_seq(7 + seed as usize, seed);
            for k in 1..=3 {
                assert!((gowers_uk(&g, k).unwrap() - uk_brute(&g, k)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn u2_spectral_agrees_and_ignores_linear_phase() {
        for seed in 0..30 {
            let n = [16, 32, 64, 128][seed as usize % 4];
            let f = random_seq(n, seed);
            let direct = gowers_uk(&f, 2).unwrap();
            assert!((direct - gowers_u2_spectral(&f)).abs() < 1e-9);
            let (a, b) = (seed as f64, 3.0);
            let twisted =
                WeightedSequence::from_fn(n, |x| f.at(x as i64) * e((a * x as f64 + b) / n as f64))
                    .unwrap();
            assert!((direct - gowers_uk(&twisted, 2).unwrap()).abs() < 1e-9);
        }
    }
}
