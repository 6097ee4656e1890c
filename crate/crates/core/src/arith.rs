//! Exact arithmetic functions from a single linear sieve pass.
//!
//! [`ArithTable`] stores the smallest prime factor, Möbius function, Euler
//! totient and prime-power base of every integer up to its limit. All logs
//! are natural logs.

use num_bigint::BigUint;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ArithTable {
    limit: u64,
    spf: Vec<u32>,
    mobius: Vec<i8>,
    phi: Vec<u32>,
    /// Base prime `p` when the index is `p^k` with `k >= 1`, else 0.
    prime_power_base: Vec<u32>,
    primes: Vec<u32>,
}

impl ArithTable {
    /// Sieves `1..=limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::Range(format!(
                "sieve limit {limit} exceeds 32-bit table entries"
            )));
        }
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut mobius = vec![0i8; len];
        let mut phi = vec![0u32; len];
        let mut ppb = vec![0u32; len];
        let mut primes = Vec::new();
        mobius[1] = 1;
        phi[1] = 1;
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                phi[i] = i as u32 - 1;
                ppb[i] = i as u32;
                primes.push(i as u32);
            }
            let spf_i = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > spf_i || j >= len {
                    break;
                }
                spf[j] = p;
                if p == spf_i {
                    mobius[j] = 0;
                    phi[j] = phi[i] * p;
                    ppb[j] = if ppb[i] == p { p } else { 0 };
                    break;
                }
                mobius[j] = -mobius[i];
                phi[j] = phi[i] * (p - 1);
            }
        }
        Ok(Self {
            limit,
            spf,
            mobius,
            phi,
            prime_power_base: ppb,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn index(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit {
            return Err(Error::invalid(format!(
                "{n} outside sieve range 1..={}",
                self.limit
            )));
        }
        Ok(n as usize)
    }

    /// Smallest prime factor; `spf(1)` is 1.
    pub fn spf(&self, n: u64) -> Result<u64> {
        let i = self.index(n)?;
        Ok(if i == 1 { 1 } else { self.spf[i] as u64 })
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        Ok(self.mobius[self.index(n)?])
    }

    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        let p = self.prime_power_base[self.index(n)?];
        Ok(if p == 0 { 0.0 } else { (p as f64).ln() })
    }

    pub fn euler_phi(&self, n: u64) -> Result<u64> {
        Ok(self.phi[self.index(n)?] as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        let i = self.index(n)?;
        Ok(i > 1 && self.spf[i] as usize == i)
    }

    /// Base prime when `n` is a prime power.
    pub fn prime_power_base(&self, n: u64) -> Result<Option<u64>> {
        let p = self.prime_power_base[self.index(n)?];
        Ok((p != 0).then_some(p as u64))
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Prime factorization as `(p, e)` pairs with ascending `p`.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        let mut m = self.index(n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }

    /// Distinct prime factors, ascending.
    pub fn radical_primes(&self, n: u64) -> Result<Vec<u64>> {
        Ok(self.factorize(n)?.into_iter().map(|(p, _)| p).collect())
    }

    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        let mut ds = vec![1u64];
        for (p, e) in self.factorize(n)? {
            let base = ds.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..base {
                    ds.push(ds[i] * pk);
                }
            }
        }
        ds.sort_unstable();
        Ok(ds)
    }

    /// Mertens function `Σ_{n ≤ x} μ(n)`.
    pub fn mertens(&self, x: u64) -> Result<i64> {
        if x == 0 {
            return Ok(0);
        }
        let end = self.index(x)?;
        Ok(self.mobius[1..=end].iter().map(|&m| m as i64).sum())
    }

    /// `(W, φ(W))` with `W` the product of the primes strictly below `w`.
    pub fn primorial_below(&self, w: u64) -> Result<(u64, u64)> {
        if w > self.limit + 1 {
            return Err(Error::invalid(format!(
                "primorial bound {w} exceeds sieve limit {}",
                self.limit
            )));
        }
        let mut modulus = 1u64;
        let mut phi = 1u64;
        for &p in self.primes.iter().take_while(|&&p| (p as u64) < w) {
            let p = p as u64;
            modulus = modulus
                .checked_mul(p)
                .ok_or_else(|| Error::Range(format!("primorial below {w} overflows u64")))?;
            phi *= p - 1;
        }
        Ok((modulus, phi))
    }

    /// Arbitrary-precision variant of [`Self::primorial_below`].
    pub fn primorial_below_big(&self, w: u64) -> Result<(BigUint, BigUint)> {
        if w > self.limit + 1 {
            return Err(Error::invalid(format!(
                "primorial bound {w} exceeds sieve limit {}",
                self.limit
            )));
        }
        let mut modulus = BigUint::from(1u32);
        let mut phi = BigUint::from(1u32);
        for &p in self.primes.iter().take_while(|&&p| (p as u64) < w) {
            modulus *= p;
            phi *= p - 1;
        }
        Ok((modulus, phi))
    }
}
