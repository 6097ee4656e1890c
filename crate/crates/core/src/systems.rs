//! Finite cyclic systems `(Z/MZ, x ↦ x + 1)` and finite integer sets, with
//! the intersection measures, return sets and prime-weighted multiple
//! averages built on them.

use std::path::Path;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::ArithTable;
use crate::error::{Error, Result};
use crate::norms::WeightedSequence;
use crate::polysys::{ModularPoly, PolySystem};
use crate::reduce::{chunked_sum, CHUNK};
use crate::wtrick::{lambda_tilde, majorant_nu, one_tilde, WTrickConfig};

/// A subset description, materialized against a concrete universe.
#[derive(Debug, Clone, PartialEq)]
pub enum SetLiteral {
    Evens,
    Multiples(u64),
    /// Exactly `round(density · size)` members, drawn without replacement.
    Random {
        density: f64,
        seed: u64,
    },
    Explicit(Vec<i64>),
}

impl SetLiteral {
    /// Accepts `evens`, `mult<q>`, `random(density,seed)`, comma lists such
    /// as `1,4,9`, and files of newline-separated integers given as
    /// `file:<path>`, `@<path>` or a bare existing path.
    pub fn parse(src: &str) -> Result<Self> {
        let s = src.trim();
        if s == "evens" {
            return Ok(SetLiteral::Evens);
        }
        if let Some(q) = s.strip_prefix("mult") {
            let q: u64 = q
                .parse()
                .map_err(|_| Error::invalid(format!("bad multiple set {s:?}")))?;
            if q == 0 {
                return Err(Error::invalid("mult0 is not a set of multiples"));
            }
            return Ok(SetLiteral::Multiples(q));
        }
        if let Some(inner) = s.strip_prefix("random(").and_then(|r| r.strip_suffix(')')) {
            let (d, seed) = inner.split_once(',').ok_or_else(|| {
                Error::invalid(format!("expected random(density,seed), got {s:?}"))
            })?;
            let density: f64 = d
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad density {d:?}")))?;
            let seed: u64 = seed
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad seed {seed:?}")))?;
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::invalid(format!("density {density} outside [0, 1]")));
            }
            return Ok(SetLiteral::Random { density, seed });
        }
        let path = s.strip_prefix("file:").or_else(|| s.strip_prefix('@'));
        if let Some(p) = path {
            return Self::from_file(Path::new(p));
        }
        if s.is_empty() {
            return Ok(SetLiteral::Explicit(Vec::new()));
        }
        if s.split(',').all(|x| x.trim().parse::<i64>().is_ok()) {
            return Ok(SetLiteral::Explicit(
                s.split(',').map(|x| x.trim().parse().unwrap()).collect(),
            ));
        }
        if Path::new(s).is_file() {
            return Self::from_file(Path::new(s));
        }
        Err(Error::invalid(format!("unrecognized set literal {s:?}")))
    }

    fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            out.push(line.parse().map_err(|_| {
                Error::invalid(format!(
                    "{}:{}: not an integer: {line:?}",
                    path.display(),
                    i + 1
                ))
            })?);
        }
        Ok(SetLiteral::Explicit(out))
    }

    /// Membership mask over the `size` universe elements `lo, lo+1, …`.
    /// Explicit members are mapped through `place`, which returns the mask
    /// index of a member or `None` if it lies outside the universe.
    fn mask(
        &self,
        lo: i64,
        size: usize,
        place: impl Fn(i64) -> Option<usize>,
    ) -> Result<Vec<bool>> {
        let mut mask = vec![false; size];
        match self {
            SetLiteral::Evens => mask
                .iter_mut()
                .enumerate()
                .for_each(|(i, m)| *m = (lo + i as i64) % 2 == 0),
            SetLiteral::Multiples(q) => mask
                .iter_mut()
                .enumerate()
                .for_each(|(i, m)| *m = (lo + i as i64).rem_euclid(*q as i64) == 0),
            SetLiteral::Random { density, seed } => {
                let count = ((density * size as f64).round() as usize).min(size);
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for i in rand::seq::index::sample(&mut rng, size, count) {
                    mask[i] = true;
                }
            }
            SetLiteral::Explicit(xs) => {
                for &x in xs {
                    let i = place(x).ok_or_else(|| {
                        Error::invalid(format!("member {x} outside the universe"))
                    })?;
                    mask[i] = true;
                }
            }
        }
        Ok(mask)
    }
}

/// `A ⊆ Z/MZ` under the shift `T x = x + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSystem {
    modulus: u64,
    mask: Vec<bool>,
}

impl CyclicSystem {
    pub fn new(mask: Vec<bool>) -> Result<Self> {
        if mask.is_empty() {
            return Err(Error::invalid("modulus must be positive"));
        }
        Ok(Self {
            modulus: mask.len() as u64,
            mask,
        })
    }

    pub fn from_members(modulus: u64, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        let mut mask = vec![false; modulus as usize];
        for x in members {
            mask[x.rem_euclid(modulus as i64) as usize] = true;
        }
        Self::new(mask)
    }

    /// Explicit members are reduced mod `M`.
    pub fn from_literal(modulus: u64, lit: &SetLiteral) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        let m = modulus as i64;
        Self::new(lit.mask(0, modulus as usize, |x| Some(x.rem_euclid(m) as usize))?)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, x: i64) -> bool {
        self.mask[x.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn popcount(&self) -> u64 {
        self.mask.iter().filter(|&&b| b).count() as u64
    }

    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.popcount(), self.modulus)
    }

    /// Indicator of `A` as a real function on `Z/MZ`.
    pub fn indicator(&self) -> Vec<f64> {
        self.mask.iter().map(|&b| f64::from(u8::from(b))).collect()
    }

    /// `T^{-t} A = {x : x + t ∈ A}`.
    pub fn pullback(&self, t: i64) -> CyclicSystem {
        let m = self.modulus as i64;
        let mask = (0..m)
            .map(|x| self.mask[(x + t).rem_euclid(m) as usize])
            .collect();
        CyclicSystem {
            modulus: self.modulus,
            mask,
        }
    }

    /// `#{x : x + s ∈ A for all s in shifts}` with shifts already in `[0, M)`.
    fn count_reduced(&self, shifts: &[u64]) -> u64 {
        let m = self.modulus;
        (0..m)
            .filter(|&x| {
                shifts.iter().all(|&s| {
                    let y = x + s;
                    self.mask[(if y >= m { y - m } else { y }) as usize]
                })
            })
            .count() as u64
    }

    fn reduce(&self, s: i64) -> u64 {
        s.rem_euclid(self.modulus as i64) as u64
    }
}

/// `μ(T^{-s_1}A ∩ … ∩ T^{-s_k}A)` exactly; the empty list gives 1.
pub fn shifted_intersection(sys: &CyclicSystem, shifts: &[i64]) -> Ratio<u64> {
    let reduced: Vec<u64> = shifts.iter().map(|&s| sys.reduce(s)).collect();
    Ratio::new(sys.count_reduced(&reduced), sys.modulus)
}

/// `μ(A ∩ T^{-s_1}A ∩ … ∩ T^{-s_k}A)` exactly.
pub fn intersection_measure(sys: &CyclicSystem, shifts: &[i64]) -> Ratio<u64> {
    let mut all = Vec::with_capacity(shifts.len() + 1);
    all.push(0);
    all.extend_from_slice(shifts);
    shifted_intersection(sys, &all)
}

/// `E ⊆ [1, X]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSet {
    bound: u64,
    mask: Vec<bool>,
}

impl FiniteSet {
    pub fn new(bound: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut mask = vec![false; bound as usize];
        for x in members {
            if x == 0 || x > bound {
                return Err(Error::invalid(format!("member {x} outside [1, {bound}]")));
            }
            mask[x as usize - 1] = true;
        }
        Ok(Self { bound, mask })
    }

    /// Explicit members must lie in `[1, X]`.
    pub fn from_literal(bound: u64, lit: &SetLiteral) -> Result<Self> {
        let mask = lit.mask(1, bound as usize, |x| {
            (x >= 1 && x as u64 <= bound).then(|| x as usize - 1)
        })?;
        Ok(Self { bound, mask })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= 1 && (x as u64) <= self.bound && self.mask[x as usize - 1]
    }

    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as i64 + 1)
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }
}

fn shifts_at(s: &PolySystem, n: i64) -> Result<Vec<i64>> {
    s.polys().iter().map(|p| p.eval_i64(n)).collect()
}

fn in_return_set(e: &FiniteSet, shifts: &[i64]) -> bool {
    e.members().any(|x| {
        shifts
            .iter()
            .all(|&d| x.checked_add(d).is_some_and(|y| e.contains(y)))
    })
}

/// All `n ∈ [n_lo, n_hi]` with `E ∩ (E − P_1(n)) ∩ … ∩ (E − P_k(n)) ≠ ∅`.
pub fn return_set_finite(e: &FiniteSet, s: &PolySystem, n_lo: i64, n_hi: i64) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        if in_return_set(e, &shifts_at(s, n)?) {
            out.push(n);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Smallest prime `p ≤ p_max` with `p + 1` (`Plus`) or `p − 1` (`Minus`)
/// in the return set of `s` on `E`.
pub fn shifted_prime_hit(
    e: &FiniteSet,
    s: &PolySystem,
    p_max: u64,
    sign: Sign,
    t: &ArithTable,
) -> Result<Option<u64>> {
    if p_max > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below p_max = {p_max}",
            t.limit()
        )));
    }
    if e.is_empty() {
        return Ok(None);
    }
    for &p in t.primes() {
        let p = u64::from(p);
        if p > p_max {
            break;
        }
        let n = match sign {
            Sign::Plus => p as i64 + 1,
            Sign::Minus => p as i64 - 1,
        };
        if in_return_set(e, &shifts_at(s, n)?) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    LambdaTilde,
    Nu,
    OneTilde,
    /// Unweighted average over the `n ≤ N` with `Wn + b` prime.
    PrimeIndicator,
}

fn modular_system(s: &PolySystem, modulus: u64) -> Result<Vec<ModularPoly>> {
    s.polys()
        .iter()
        .map(|p| Ok(p.univariate()?.modular(modulus)))
        .collect()
}

/// `E_{n ≤ N} weight(n) · μ(A ∩ T^{-P_1(Wn)}A ∩ … ∩ T^{-P_k(Wn)}A)`.
pub fn multiple_average(
    sys: &CyclicSystem,
    s: &PolySystem,
    cfg: &WTrickConfig,
    t: &ArithTable,
    kind: WeightKind,
) -> Result<f64> {
    if cfg.sieve_needed() > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below W·N + b = {}",
            t.limit(),
            cfg.sieve_needed()
        )));
    }
    let polys = modular_system(s, sys.modulus())?;
    let m = sys.modulus as f64;
    let term = |n: u64| -> Result<(f64, u64)> {
        let weight = match kind {
            WeightKind::LambdaTilde => lambda_tilde(cfg, t, n)?,
            WeightKind::Nu => majorant_nu(t, cfg, n)?,
            WeightKind::OneTilde => f64::from(one_tilde(cfg, n)?),
            WeightKind::PrimeIndicator => {
                if t.is_prime(cfg.progression(n))? {
                    1.0
                } else {
                    return Ok((0.0, 0));
                }
            }
        };
        if weight == 0.0 {
            return Ok((0.0, u64::from(kind == WeightKind::PrimeIndicator)));
        }
        let wn = cfg.big_w * n;
        let mut shifts = Vec::with_capacity(polys.len() + 1);
        shifts.push(0);
        shifts.extend(polys.iter().map(|p| p.eval(wn)));
        Ok((weight * sys.count_reduced(&shifts) as f64 / m, 1))
    };
    let (total, count) = chunked_sum(cfg.n as usize, CHUNK, |range| {
        let mut acc = (0.0, 0u64, None::<Error>);
        for i in range {
            match term(i as u64 + 1) {
                Ok((v, c)) => {
                    acc.0 += v;
                    acc.1 += c;
                }
                Err(e) => {
                    acc.2.get_or_insert(e);
                }
            }
        }
        Partial(acc)
    })
    .into_result()?;
    match kind {
        WeightKind::PrimeIndicator if count == 0 => Err(Error::Degenerate(format!(
            "no n ≤ {} has W·n + {} prime",
            cfg.n, cfg.b
        ))),
        WeightKind::PrimeIndicator => Ok(total / count as f64),
        _ => Ok(total / cfg.n as f64),
    }
}

/// Partial sum with a sticky first error, combined left to right.
#[derive(Default)]
struct Partial((f64, u64, Option<Error>));

impl std::ops::Add for Partial {
    type Output = Partial;
    fn add(self, o: Partial) -> Partial {
        let (a, b) = (self.0, o.0);
        Partial((a.0 + b.0, a.1 + b.1, a.2.or(b.2)))
    }
}

impl Partial {
    fn into_result(self) -> Result<(f64, u64)> {
        match self.0 .2 {
            Some(e) => Err(e),
            None => Ok((self.0 .0, self.0 .1)),
        }
    }
}

/// `|E_{n ≤ N, Wn+b prime} a(Wn+b) − E_{n ≤ N} (φ(W)/W) Λ(Wn+b) a(Wn+b)|`.
pub fn prime_vs_mangoldt_gap(
    a: &WeightedSequence,
    cfg: &WTrickConfig,
    t: &ArithTable,
) -> Result<f64> {
    if a.max_modulus() > 1.0 + 1e-12 {
        return Err(Error::invalid(format!(
            "|a| must be at most 1, got {}",
            a.max_modulus()
        )));
    }
    if cfg.sieve_needed() > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below {}",
            t.limit(),
            cfg.sieve_needed()
        )));
    }
    let mut prime_sum = Complex64::new(0.0, 0.0);
    let mut primes = 0u64;
    let mut weighted = Complex64::new(0.0, 0.0);
    for n in 1..=cfg.n {
        let m = cfg.progression(n);
        let v = a.at(m as i64);
        let lam = t.von_mangoldt(m)?;
        if lam == 0.0 {
            continue;
        }
        weighted += v * lam;
        if t.is_prime(m)? {
            prime_sum += v;
            primes += 1;
        }
    }
    if primes == 0 {
        return Err(Error::Degenerate(format!(
            "no n ≤ {} has W·n + {} prime",
            cfg.n, cfg.b
        )));
    }
    let first = prime_sum / primes as f64;
    let second = weighted * cfg.density() / cfg.n as f64;
    Ok((first - second).norm())
}

/// `x ↦ Π_j f_j(x + P_j(n))` accumulated with weight `w` into `acc`.
fn accumulate(acc: &mut [f64], f_list: &[Vec<f64>], shifts: &[u64], w: f64) {
    let m = acc.len();
    for (x, slot) in acc.iter_mut().enumerate() {
        let mut prod = w;
        for (f, &s) in f_list.iter().zip(shifts) {
            prod *= f[(x + s as usize) % m];
        }
        *slot += prod;
    }
}

/// Root-mean-square over `Z/MZ`.
pub fn l2_norm(f: &[f64]) -> f64 {
    (f.iter().map(|v| v * v).sum::<f64>() / f.len() as f64).sqrt()
}

fn l2_distance(f: &[f64], g: &[f64]) -> f64 {
    (f.iter().zip(g).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / f.len() as f64).sqrt()
}

/// `C_{b,L}(x) = E_{n<L} Π_j f_j(x + P_j(Wn + b))` on `Z/MZ`.
pub fn c_average(
    modulus: u64,
    s: &PolySystem,
    f_list: &[Vec<f64>],
    big_w: u64,
    b: u64,
    len: u64,
) -> Result<Vec<f64>> {
    check_functions(modulus, s, f_list)?;
    if len == 0 {
        return Err(Error::invalid("C average needs a positive length"));
    }
    let polys = modular_system(s, modulus)?;
    let mut acc = vec![0.0; modulus as usize];
    let mut shifts = vec![0u64; polys.len()];
    for n in 0..len {
        let arg = (u128::from(big_w) * u128::from(n) + u128::from(b)) % u128::from(modulus);
        for (s, p) in shifts.iter_mut().zip(&polys) {
            *s = p.eval(arg as u64);
        }
        accumulate(&mut acc, f_list, &shifts, 1.0);
    }
    acc.iter_mut().for_each(|v| *v /= len as f64);
    Ok(acc)
}

fn check_functions(modulus: u64, s: &PolySystem, f_list: &[Vec<f64>]) -> Result<()> {
    if modulus == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    if f_list.len() != s.len() {
        return Err(Error::invalid(format!(
            "{} functions for {} polynomials",
            f_list.len(),
            s.len()
        )));
    }
    if f_list.iter().any(|f| f.len() != modulus as usize) {
        return Err(Error::invalid(format!(
            "every function must have {modulus} values"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint {
    pub n: u64,
    /// `B_N(x) = E_{0 ≤ n < N} Λ(n) Π_j f_j(x + P_j(n))`.
    pub b: Vec<f64>,
    /// `A_N(x) = E_{p < N prime} Π_j f_j(x + P_j(p))`; zero when no prime is below `N`.
    pub a: Vec<f64>,
    pub a_degenerate: bool,
    /// `‖A_N − B_N‖₂`.
    pub gap: f64,
    /// `‖B_{N_prev} − B_N‖₂`, absent at the first point.
    pub cauchy_delta: Option<f64>,
    /// `(b, ‖C_{b,N}‖₂)` for each requested residue.
    pub c_norms: Vec<(u64, f64)>,
}

/// `A_N`, `B_N`, their gaps and the Cauchy deltas along increasing `n_points`.
/// With `c_modulus = Some(W)`, also `‖C_{b,N}‖₂` for each `b ∈ [0, W)` coprime to `W`.
pub fn convergence_profile(
    sys: &CyclicSystem,
    s: &PolySystem,
    f_list: &[Vec<f64>],
    n_points: &[u64],
    t: &ArithTable,
    c_modulus: Option<u64>,
) -> Result<Vec<ProfilePoint>> {
    let modulus = sys.modulus();
    check_functions(modulus, s, f_list)?;
    if n_points.is_empty() || n_points[0] == 0 || n_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "n_points must be positive and strictly increasing",
        ));
    }
    let top = *n_points.last().unwrap();
    if top > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below N = {top}",
            t.limit()
        )));
    }
    let polys = modular_system(s, modulus)?;
    let m = modulus as usize;
    let (mut sum_b, mut sum_a) = (vec![0.0; m], vec![0.0; m]);
    let mut prime_count = 0u64;
    let mut shifts = vec![0u64; polys.len()];
    let mut out: Vec<ProfilePoint> = Vec::with_capacity(n_points.len());
    let mut next = 0;
    let mut n = 0u64;
    while next < n_points.len() {
        while n_points[next] == n {
            let big_n = n as f64;
            let b: Vec<f64> = sum_b.iter().map(|v| v / big_n).collect();
            let a: Vec<f64> = if prime_count == 0 {
                vec![0.0; m]
            } else {
                sum_a.iter().map(|v| v / prime_count as f64).collect()
            };
            let c_norms = match c_modulus {
                Some(w) => (0..w)
                    .filter(|&r| num_integer::gcd(r, w) == 1)
                    .map(|r| Ok((r, l2_norm(&c_average(modulus, s, f_list, w, r, n)?))))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let cauchy_delta = out.last().map(|p| l2_distance(&p.b, &b));
            out.push(ProfilePoint {
                n,
                gap: l2_distance(&a, &b),
                a_degenerate: prime_count == 0,
                b,
                a,
                cauchy_delta,
                c_norms,
            });
            next += 1;
            if next == n_points.len() {
                return Ok(out);
            }
        }
        let lam = if n >= 2 { t.von_mangoldt(n)? } else { 0.0 };
        if lam != 0.0 {
            for (sh, p) in shifts.iter_mut().zip(&polys) {
                *sh = p.eval(n);
            }
            accumulate(&mut sum_b, f_list, &shifts, lam);
            if t.is_prime(n)? {
                accumulate(&mut sum_a, f_list, &shifts, 1.0);
                prime_count += 1;
            }
        }
        n += 1;
    }
    Ok(out)
}
