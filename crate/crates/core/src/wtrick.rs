//! W-tricked prime weights on the progression `Wn + b`, the smooth cutoff
//! pair `χ♯ + χ♭ = id`, the divisor-sum split `Λ = Λ♯ + Λ♭`, and a
//! truncated-divisor-sum majorant `ν` with its audits.

use num_integer::Integer;

use crate::arith::ArithTable;
use crate::error::{Error, Result};
use crate::norms::{vp_norm, EvalMode, WeightedSequence};
use crate::polysys::{parallelepiped_degree, PolySystem};

#[derive(Debug, Clone, PartialEq)]
pub struct WTrickConfig {
    pub n: u64,
    pub w: u64,
    /// Residue reduced into `[0, W)`.
    pub b: u64,
    pub big_w: u64,
    pub phi_w: u64,
    /// Parallelepiped degree of the system the config was built for.
    pub l: u32,
    pub eta: f64,
    pub r: f64,
    pub log_r: f64,
}

impl WTrickConfig {
    /// Config for a known parallelepiped degree `l`.
    pub fn from_degree(n: u64, w: u64, b: i64, l: u32) -> Result<Self> {
        if n < 16 {
            return Err(Error::invalid(format!("N must be at least 16, got {n}")));
        }
        if l > 60 {
            return Err(Error::invalid(format!(
                "parallelepiped degree {l} is too large"
            )));
        }
        let table = ArithTable::new(w.max(2))?;
        let (big_w, phi_w) = table.primorial_below(w)?;
        let reduced = b.rem_euclid(big_w as i64) as u64;
        if reduced.gcd(&big_w) != 1 {
            return Err(Error::InvalidResidue { b, modulus: big_w });
        }
        big_w
            .checked_mul(n)
            .and_then(|x| x.checked_add(reduced))
            .ok_or_else(|| Error::Range(format!("W·N + b overflows for W = {big_w}, N = {n}")))?;
        let eta = (-(3.0 + f64::from(l))).exp2();
        let log_r = eta * (n as f64).ln();
        Ok(Self {
            n,
            w,
            b: reduced,
            big_w,
            phi_w,
            l,
            eta,
            r: log_r.exp(),
            log_r,
        })
    }

    /// `φ(W)/W`.
    pub fn density(&self) -> f64 {
        self.phi_w as f64 / self.big_w as f64
    }

    /// `W·n + b`.
    pub fn progression(&self, n: u64) -> u64 {
        self.big_w * n + self.b
    }

    /// Sieve limit needed to evaluate every weight on `[1, N]`.
    pub fn sieve_needed(&self) -> u64 {
        self.progression(self.n)
    }

    pub fn half(&self) -> u64 {
        self.n / 2
    }
}

/// Builds the config with `η = 2^{-3-l}` where `l` is the parallelepiped degree of `s`.
pub fn make_config(n: u64, w: u64, b: i64, s: &PolySystem) -> Result<WTrickConfig> {
    let l = parallelepiped_degree(s)?.degree as u32;
    WTrickConfig::from_degree(n, w, b, l)
}

fn check_n(cfg: &WTrickConfig, n: u64) -> Result<()> {
    if n == 0 || n > cfg.n {
        return Err(Error::invalid(format!("n = {n} outside [1, {}]", cfg.n)));
    }
    Ok(())
}

fn check_sieve(t: &ArithTable, m: u64) -> Result<()> {
    if m > t.limit() {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {} is below {m}",
            t.limit()
        )));
    }
    Ok(())
}

/// Indicator of `n ≤ ⌊N/2⌋`.
pub fn one_tilde(cfg: &WTrickConfig, n: u64) -> Result<u8> {
    check_n(cfg, n)?;
    Ok(u8::from(n <= cfg.half()))
}

/// `φ(W)/W · log R` when `n ≤ ⌊N/2⌋` and `Wn + b` is prime, else 0.
pub fn lambda_tilde(cfg: &WTrickConfig, t: &ArithTable, n: u64) -> Result<f64> {
    check_n(cfg, n)?;
    let m = cfg.progression(n);
    check_sieve(t, m)?;
    if n <= cfg.half() && t.is_prime(m)? {
        Ok(cfg.density() * cfg.log_r)
    } else {
        Ok(0.0)
    }
}

/// `φ(W)/W · Λ(Wn + b)` on all of `[1, N]`, prime powers included.
pub fn lambda_w(cfg: &WTrickConfig, t: &ArithTable, n: u64) -> Result<f64> {
    check_n(cfg, n)?;
    let m = cfg.progression(n);
    check_sieve(t, m)?;
    Ok(cfg.density() * t.von_mangoldt(m)?)
}

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: 1 on `[0, ½]`, 0 on `[1, ∞)`, even in `x`.
pub fn smooth_cutoff(x: f64) -> f64 {
    let x = x.abs();
    if x <= 0.5 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let a = bump(1.0 - x);
        a / (a + bump(x - 0.5))
    }
}

/// `(χ♯(x), χ♭(x)) = (x·ψ(x), x·(1 − ψ(x)))`.
pub fn chi_pair(x: f64) -> (f64, f64) {
    let psi = smooth_cutoff(x);
    let sharp = x * psi;
    (sharp, x - sharp)
}

/// Square-free divisors of `n` with their Möbius signs.
fn signed_squarefree_divisors(t: &ArithTable, n: u64) -> Result<Vec<(u64, i8)>> {
    let mut out = vec![(1u64, 1i8)];
    for p in t.radical_primes(n)? {
        let len = out.len();
        for i in 0..len {
            let (d, s) = out[i];
            out.push((d * p, -s));
        }
    }
    Ok(out)
}

/// `(Λ♯(n), Λ♭(n))` with `Λ^♯/♭(n) = −log R Σ_{d|n} μ(d) χ^♯/♭(log d / log R)`.
pub fn lambda_sharp_flat_at(t: &ArithTable, log_r: f64, n: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if log_r.is_nan() || log_r <= 0.0 {
        return Err(Error::invalid(format!(
            "log R must be positive, got {log_r}"
        )));
    }
    check_sieve(t, n)?;
    let (mut sharp, mut flat) = (0.0, 0.0);
    for (d, sign) in signed_squarefree_divisors(t, n)? {
        let (s, f) = chi_pair((d as f64).ln() / log_r);
        sharp += f64::from(sign) * s;
        flat += f64::from(sign) * f;
    }
    Ok((-log_r * sharp, -log_r * flat))
}

pub fn lambda_sharp_flat(t: &ArithTable, cfg: &WTrickConfig, n: u64) -> Result<(f64, f64)> {
    lambda_sharp_flat_at(t, cfg.log_r, n)
}

/// `log R · Σ_{d|m} μ(d) ψ(log d / log R)`; only `d < R` contribute.
fn truncated_divisor_sum(t: &ArithTable, log_r: f64, m: u64) -> Result<f64> {
    let mut acc = 0.0;
    for (d, sign) in signed_squarefree_divisors(t, m)? {
        let x = (d as f64).ln() / log_r;
        if x < 1.0 {
            acc += f64::from(sign) * smooth_cutoff(x);
        }
    }
    Ok(acc * log_r)
}

/// `ν(n) = φ(W)/W · (log R Σ_{d|Wn+b} μ(d) ψ(log d/log R))² / log R`.
pub fn majorant_nu(t: &ArithTable, cfg: &WTrickConfig, n: u64) -> Result<f64> {
    check_n(cfg, n)?;
    let m = cfg.progression(n);
    check_sieve(t, m)?;
    let s = truncated_divisor_sum(t, cfg.log_r, m)?;
    Ok(cfg.density() * s * s / cfg.log_r)
}

fn collect(cfg: &WTrickConfig, f: impl Fn(u64) -> Result<f64>) -> Result<WeightedSequence> {
    let vals = (1..=cfg.n).map(f).collect::<Result<Vec<f64>>>()?;
    WeightedSequence::from_real(&vals)
}

/// `Λ̃` on `[1, N]` as a sequence.
pub fn lambda_tilde_sequence(t: &ArithTable, cfg: &WTrickConfig) -> Result<WeightedSequence> {
    check_sieve(t, cfg.sieve_needed())?;
    collect(cfg, |n| lambda_tilde(cfg, t, n))
}

/// `ν` on `[1, N]` as a sequence.
pub fn nu_sequence(t: &ArithTable, cfg: &WTrickConfig) -> Result<WeightedSequence> {
    check_sieve(t, cfg.sieve_needed())?;
    collect(cfg, |n| majorant_nu(t, cfg, n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureAudit {
    pub mass: f64,
    pub vp_distance: f64,
    /// Present when the distance was estimated by Monte Carlo.
    pub std_error: Option<f64>,
}

/// Mass `E_{n ≤ N} values(n)` and `‖values − 1_{[N]}‖_{V_𝒫}`.
pub fn measure_audit(
    values: &WeightedSequence,
    s: &PolySystem,
    mode: EvalMode,
) -> Result<MeasureAudit> {
    let mass = values.mean().re;
    let centered = WeightedSequence::new(values.values().iter().map(|z| z - 1.0).collect())?;
    let d = vp_norm(&centered, s, mode)?;
    Ok(MeasureAudit {
        mass,
        vp_distance: d.norm,
        std_error: d.std_error,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DominationReport {
    /// Number of `n ≤ N` with `Wn + b > R`.
    pub checked: u64,
    /// `n` with `Wn + b > R` and `Λ̃(n) > ν(n) + 1e-12`.
    pub violations: Vec<u64>,
    /// `n` with `Wn + b ≤ R` where `ν` undercuts `Λ̃`; reported, never asserted.
    pub small_prime_violations: Vec<u64>,
}

pub fn domination_report(t: &ArithTable, cfg: &WTrickConfig) -> Result<DominationReport> {
    check_sieve(t, cfg.sieve_needed())?;
    let mut rep = DominationReport::default();
    for n in 1..=cfg.n {
        let lt = lambda_tilde(cfg, t, n)?;
        let nu = majorant_nu(t, cfg, n)?;
        let above = cfg.progression(n) as f64 > cfg.r;
        if above {
            rep.checked += 1;
        }
        if lt > nu + 1e-12 {
            if above {
                rep.violations.push(n);
            } else {
                rep.small_prime_violations.push(n);
            }
        }
    }
    Ok(rep)
}

/// One CSV-ready audit row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRow {
    pub n: u64,
    pub lambda_tilde: f64,
    pub nu: f64,
}

pub fn audit_rows(t: &ArithTable, cfg: &WTrickConfig) -> Result<Vec<AuditRow>> {
    check_sieve(t, cfg.sieve_needed())?;
    (1..=cfg.n)
        .map(|n| {
            Ok(AuditRow {
                n,
                lambda_tilde: lambda_tilde(cfg, t, n)?,
                nu: majorant_nu(t, cfg, n)?,
            })
        })
        .collect()
}
