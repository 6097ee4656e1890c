//! Multivariate integer polynomials in a main variable `n` and parameters
//! `m1, m2, …`, together with the PET-induction calculus on polynomial
//! systems (weights, their well-ordering, standardness, the differencing
//! step and the parallelepiped degree).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Safety cap on the number of PET steps.
pub const PET_STEP_CAP: usize = 64;

/// Largest system the PET descent will carry before giving up.
pub const PET_MEMBER_CAP: usize = 4096;

/// A parameter variable `m<i>`, `i >= 1`. Variable slot 0 is `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(u32);

impl Param {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::invalid("parameter indices start at 1"));
        }
        Ok(Param(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    fn slot(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Exponent vector over `(n, m1, m2, …)` with trailing zeros trimmed.
///
/// Ordered graded-lexicographically, with `n` the most significant variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn exponent(&self, slot: usize) -> u32 {
        self.0.get(slot).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        Monomial::new(
            (0..len)
                .map(|i| self.exponent(i) + other.exponent(i))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let len = self.0.len().max(other.0.len());
                (0..len)
                    .map(|i| self.exponent(i).cmp(&other.exponent(i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer polynomial in `n` and parameters. No zero coefficients are stored,
/// so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    /// The main variable `n`.
    pub fn n() -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::new(vec![1]), BigInt::one());
        p
    }

    pub fn param(param: Param) -> Self {
        let mut exps = vec![0; param.slot() + 1];
        exps[param.slot()] = 1;
        let mut p = Poly::zero();
        p.add_term(Monomial::new(exps), BigInt::one());
        p
    }

    /// `Σ coeffs[i] n^i`.
    pub fn from_coeffs_in_n(coeffs: &[i64]) -> Self {
        let mut p = Poly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::new(vec![i as u32]), BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree in `n` with parameters treated as constants; −1 for zero.
    pub fn degree_in_n(&self) -> i32 {
        self.terms
            .keys()
            .map(|m| m.exponent(0) as i32)
            .max()
            .unwrap_or(-1)
    }

    pub fn uses_param(&self, param: Param) -> bool {
        self.terms.keys().any(|m| m.exponent(param.slot()) > 0)
    }

    /// Largest parameter index appearing, 0 if none.
    pub fn max_param(&self) -> u32 {
        self.terms
            .keys()
            .filter_map(|m| m.0.iter().rposition(|&e| e > 0))
            .max()
            .unwrap_or(0) as u32
    }

    pub fn has_params(&self) -> bool {
        self.max_param() > 0
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `n ↦ n + param` and expands.
    pub fn shift_n(&self, param: Param) -> Poly {
        let mut out = Poly::zero();
        for (mono, c) in &self.terms {
            let a = mono.exponent(0);
            for i in 0..=a {
                let mut exps = mono.0.clone();
                exps.resize(exps.len().max(param.slot() + 1), 0);
                exps[0] = i;
                exps[param.slot()] += a - i;
                let coeff = c * binomial(BigInt::from(a), BigInt::from(i));
                out.add_term(Monomial::new(exps), coeff);
            }
        }
        out
    }

    /// Evaluates at `n` and `params[i-1]` for `m_i`; missing parameters are 0.
    pub fn eval(&self, n: &BigInt, params: &[BigInt]) -> BigInt {
        let zero = BigInt::zero();
        let mut total = BigInt::zero();
        for (mono, c) in &self.terms {
            let mut t = c.clone();
            for (slot, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if slot == 0 {
                    n
                } else {
                    params.get(slot - 1).unwrap_or(&zero)
                };
                t *= num_traits::pow(base.clone(), e as usize);
            }
            total += t;
        }
        total
    }

    /// Evaluates a polynomial in `n` alone into an `i64`.
    pub fn eval_i64(&self, n: i64) -> Result<i64> {
        self.univariate()?
            .eval_i128(n as i128)
            .and_then(|v| v.to_i64())
            .ok_or_else(|| Error::Range(format!("{self} at n = {n} overflows i64")))
    }

    /// Coefficient view of a parameter-free polynomial.
    pub fn univariate(&self) -> Result<UnivariatePoly> {
        if self.has_params() {
            return Err(Error::invalid(format!("{self} depends on parameters")));
        }
        let deg = self.degree_in_n().max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (mono, c) in &self.terms {
            coeffs[mono.exponent(0) as usize] = c.clone();
        }
        Ok(UnivariatePoly { coeffs })
    }

    /// Parses an integer-coefficient expression in `n, m1, m2, …`.
    ///
    /// Grammar: sums and differences of products of powers; `^` takes a
    /// non-negative integer exponent; parentheses group. Implicit
    /// multiplication is accepted only directly after an integer literal
    /// (`2n^2`, `3(n+1)`), never between two variables.
    pub fn parse(src: &str) -> Result<Poly> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(poly)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || mono.total_degree() == 0 {
                factors.push(abs.to_string());
            }
            for (slot, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if slot == 0 {
                    "n".to_string()
                } else {
                    format!("m{slot}")
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Dense coefficients of a polynomial in `n` only, for fast evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Horner evaluation with overflow checks.
    pub fn eval_i128(&self, n: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(n)?.checked_add(c.to_i128()?)?;
        }
        Some(acc)
    }

    /// Residue of `P(n)` in `[0, modulus)`.
    pub fn eval_mod(&self, n: i64, modulus: u64) -> u64 {
        let m = modulus as i128;
        let x = (n as i128).rem_euclid(m);
        let mut acc: i128 = 0;
        for c in self.coeffs.iter().rev() {
            let cm = (c % BigInt::from(modulus))
                .to_i128()
                .unwrap_or(0)
                .rem_euclid(m);
            acc = (acc * x + cm) % m;
        }
        acc as u64
    }

    /// Reduced coefficients for repeated evaluation modulo a fixed modulus.
    pub fn modular(&self, modulus: u64) -> ModularPoly {
        let m = BigInt::from(modulus);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c % &m;
                let r = if r.is_negative() { r + &m } else { r };
                r.to_u64().unwrap_or(0)
            })
            .collect();
        ModularPoly { coeffs, modulus }
    }
}

#[derive(Debug, Clone)]
pub struct ModularPoly {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ModularPoly {
    pub fn eval(&self, n: u64) -> u64 {
        let m = self.modulus as u128;
        let x = n as u128 % m;
        let mut acc = 0u128;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c as u128) % m;
        }
        acc as u64
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            let e = e.to_u32().filter(|&e| e <= 64).ok_or(Error::Parse {
                offset: start,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit run parses"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                // coefficient directly followed by a monomial or group
                match self.src.get(self.pos) {
                    Some(&c) if c.is_ascii_alphabetic() || c == b'(' => {
                        Ok(&Poly::constant(k) * &self.power()?)
                    }
                    _ => Ok(Poly::constant(k)),
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'n') => {
                self.pos += 1;
                self.reject_juxtaposed_ident()?;
                Ok(Poly::n())
            }
            Some(b'm') => {
                let start = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(Error::Parse {
                        offset: start,
                        message: "parameter must be written m1, m2, …".into(),
                    });
                }
                let idx = self.integer()?;
                let idx = idx.to_u32().filter(|&i| i >= 1).ok_or(Error::Parse {
                    offset: start,
                    message: "parameter index must be a positive integer".into(),
                })?;
                self.reject_juxtaposed_ident()?;
                Ok(Poly::param(Param(idx)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn reject_juxtaposed_ident(&self) -> Result<()> {
        match self.src.get(self.pos) {
            Some(&c) if c.is_ascii_alphanumeric() || c == b'(' => Err(Error::Parse {
                offset: self.pos,
                message: "implicit multiplication between variables is not allowed".into(),
            }),
            _ => Ok(()),
        }
    }
}

/// Non-decreasing well-ordered weight `(w_1, …, w_d)`: `w_l` counts the
/// equivalence classes of degree `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(counts: Vec<u32>) -> Self {
        WeightVector(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for WeightVector {
    /// Shorter vectors come first; equal lengths compare from the top index down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            self.0
                .iter()
                .rev()
                .zip(other.0.iter().rev())
                .map(|(a, b)| a.cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for WeightVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn weight_lt(v: &WeightVector, u: &WeightVector) -> bool {
    v < u
}

/// Ordered polynomial system plus the parameters introduced so far.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolySystem {
    polys: Vec<Poly>,
    params: Vec<Param>,
}

impl PolySystem {
    pub fn new(polys: Vec<Poly>) -> Self {
        Self {
            polys,
            params: Vec::new(),
        }
    }

    pub fn with_params(polys: Vec<Poly>, params: Vec<Param>) -> Self {
        Self { polys, params }
    }

    /// Comma-separated list of polynomials, e.g. `"n^2, n^2+n"`.
    pub fn parse(src: &str) -> Result<Self> {
        let mut polys = Vec::new();
        let mut offset = 0;
        for piece in src.split(',') {
            let poly = Poly::parse(piece).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse {
                    offset: offset + o,
                    message,
                },
                other => other,
            })?;
            polys.push(poly);
            offset += piece.len() + 1;
        }
        Ok(Self::new(polys))
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.polys.iter().map(Poly::degree_in_n).max().unwrap_or(-1)
    }

    /// Same members as a set (order ignored).
    pub fn same_set(&self, other: &PolySystem) -> bool {
        self.polys.len() == other.polys.len()
            && self.polys.iter().all(|p| other.polys.contains(p))
            && other.polys.iter().all(|p| self.polys.contains(p))
    }

    fn dedup(&mut self) {
        let mut seen: Vec<Poly> = Vec::with_capacity(self.polys.len());
        for p in self.polys.drain(..) {
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
        self.polys = seen;
    }

    /// Moves the first member of minimal `n`-degree to the front, keeping
    /// the relative order of the rest.
    fn promote_minimal(&mut self) {
        if let Some((idx, _)) = self
            .polys
            .iter()
            .enumerate()
            .min_by_key(|(i, p)| (p.degree_in_n(), *i))
        {
            let p = self.polys.remove(idx);
            self.polys.insert(0, p);
        }
    }

    fn next_fresh_param(&self) -> Param {
        let used = self
            .polys
            .iter()
            .map(Poly::max_param)
            .chain(self.params.iter().map(|p| p.index()))
            .max()
            .unwrap_or(0);
        Param(used + 1)
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.polys.iter().map(Poly::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn degree_in_n(p: &Poly) -> i32 {
    p.degree_in_n()
}

pub fn shift_n(p: &Poly, param: Param) -> Poly {
    p.shift_n(param)
}

fn equivalent(p: &Poly, q: &Poly) -> bool {
    let d = p.degree_in_n();
    d == q.degree_in_n() && (p - q).degree_in_n() < d
}

/// Number of equivalence classes per degree.
pub fn weight(s: &PolySystem) -> Result<WeightVector> {
    let mut reps: Vec<&Poly> = Vec::new();
    for p in &s.polys {
        if p.degree_in_n() < 1 {
            return Err(Error::InvalidSystem(format!(
                "{p} has degree {} in n",
                p.degree_in_n()
            )));
        }
        if !reps.iter().any(|r| equivalent(p, r)) {
            reps.push(p);
        }
    }
    let top = s.degree().max(0) as usize;
    let mut counts = vec![0u32; top];
    for r in reps {
        counts[r.degree_in_n() as usize - 1] += 1;
    }
    Ok(WeightVector(counts))
}

/// Positive degrees, pairwise non-constant differences, minimal-degree
/// member first. The empty system is vacuously standard.
pub fn is_standard(s: &PolySystem) -> bool {
    let Some(first) = s.polys.first() else {
        return true;
    };
    if s.polys.iter().any(|p| p.degree_in_n() <= 0) {
        return false;
    }
    if s.polys
        .iter()
        .any(|p| p.degree_in_n() < first.degree_in_n())
    {
        return false;
    }
    for (i, p) in s.polys.iter().enumerate() {
        for q in &s.polys[i + 1..] {
            if (p - q).degree_in_n() <= 0 {
                return false;
            }
        }
    }
    true
}

/// One PET differencing step with the fresh parameter `fresh`.
///
/// Forms `{P_j(n) − P_1(n)}` followed by `{P_j(n + fresh) − P_1(n)}`, drops
/// members of degree ≤ 0 in `n` and repeated members, then brings the first
/// member of minimal degree to the front.
pub fn pet_step(s: &PolySystem, fresh: Param) -> Result<PolySystem> {
    if s.is_empty() {
        return Err(Error::invalid("PET step on the empty system"));
    }
    if s.params.contains(&fresh) || s.polys.iter().any(|p| p.uses_param(fresh)) {
        return Err(Error::invalid(format!(
            "parameter {fresh} already occurs in the system"
        )));
    }
    let mut ordered = s.clone();
    ordered.promote_minimal();
    let p1 = &ordered.polys[0];
    let unshifted = ordered.polys.iter().map(|p| p - p1);
    let shifted = ordered.polys.iter().map(|p| &p.shift_n(fresh) - p1);
    let polys: Vec<Poly> = unshifted
        .chain(shifted)
        .filter(|q| q.degree_in_n() > 0)
        .collect();
    let mut params = s.params.clone();
    params.push(fresh);
    let mut out = PolySystem { polys, params };
    out.dedup();
    out.promote_minimal();
    Ok(out)
}

/// The full PET descent from a system to the empty system.
#[derive(Debug, Clone)]
pub struct PetTrace {
    /// Parallelepiped degree: number of steps to reach the empty system.
    pub degree: usize,
    /// Weight of each non-empty stage, starting with the input.
    pub weights: Vec<WeightVector>,
    /// Every stage including the input and the final empty system.
    pub stages: Vec<PolySystem>,
    /// Fresh parameters in application order.
    pub params: Vec<Param>,
}

/// Applies [`pet_step`] with fresh parameters until the system is empty.
///
/// The input is deduplicated and its first minimal-degree member brought to
/// the front; it must then be standard. Intermediate stages need not be.
pub fn parallelepiped_degree(s: &PolySystem) -> Result<PetTrace> {
    if s.is_empty() {
        return Err(Error::InvalidSystem(
            "empty system has no parallelepiped degree".into(),
        ));
    }
    let mut current = s.clone();
    current.dedup();
    current.promote_minimal();
    if !is_standard(&current) {
        return Err(Error::InvalidSystem(format!("{current} is not standard")));
    }
    let mut weights = Vec::new();
    let mut stages = vec![current.clone()];
    let mut params = Vec::new();
    while !current.is_empty() {
        if weights.len() == PET_STEP_CAP {
            return Err(Error::Internal(format!(
                "PET descent exceeded {PET_STEP_CAP} steps"
            )));
        }
        weights.push(weight(&current)?);
        let fresh = current.next_fresh_param();
        params.push(fresh);
        current = pet_step(&current, fresh)?;
        if current.len() > PET_MEMBER_CAP {
            return Err(Error::ResourceLimit(format!(
                "PET stage {} has {} members (cap {PET_MEMBER_CAP})",
                weights.len(),
                current.len()
            )));
        }
        stages.push(current.clone());
    }
    Ok(PetTrace {
        degree: weights.len(),
        weights,
        stages,
        params,
    })
}
