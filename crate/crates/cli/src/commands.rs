use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reclab_core::arith::ArithTable;
use reclab_core::nilseq::{
    component_indicator, flat_sum_correlation, mobius_correlation, sharp_discrepancy,
    torus_nilseq_eval, Frequency, TorusPolySequence,
};
use reclab_core::norms::{
    gowers_u2_spectral, gowers_uk, vk_norm, vp_norm, EvalMode, WeightedSequence,
};
use reclab_core::polysys::{parallelepiped_degree, Poly, PolySystem};
use reclab_core::systems::{
    convergence_profile, multiple_average, return_set_finite, shifted_prime_hit, CyclicSystem,
    FiniteSet, SetLiteral, Sign, WeightKind,
};
use reclab_core::wtrick::{
    domination_report, lambda_tilde_sequence, make_config, measure_audit, nu_sequence,
};
use reclab_core::{Error, Result};

use crate::output::{Cell, Report};
use crate::Context;

fn table(limit: u64, ctx: &Context) -> Result<ArithTable> {
    if limit > ctx.sieve_cap {
        return Err(Error::ResourceLimit(format!(
            "a sieve of {limit} entries exceeds the cap of {}; raise --sieve-cap or {}",
            ctx.sieve_cap,
            crate::SIEVE_CAP_ENV
        )));
    }
    ArithTable::new(limit.max(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Mc,
}

fn eval_mode(mode: Mode, samples: u64, seed: Option<u64>) -> Result<EvalMode> {
    match mode {
        Mode::Exact => Ok(EvalMode::Exact),
        Mode::Mc => Ok(EvalMode::MonteCarlo {
            samples,
            seed: require_seed(seed, "--mode mc")?,
        }),
    }
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| {
        Error::InvalidArgument(format!("{what} draws random numbers and needs --seed"))
    })
}

#[derive(Debug, Args)]
pub struct PetDegreeArgs {
    /// Comma-separated polynomials in n, e.g. "n^2, n^2+n".
    #[arg(long)]
    system: String,
    /// Also print every stage and its weight.
    #[arg(long)]
    trace: bool,
}

pub fn pet_degree(a: &PetDegreeArgs) -> Result<Report> {
    let s = PolySystem::parse(&a.system)?;
    let tr = parallelepiped_degree(&s)?;
    let weights: Vec<String> = tr.weights.iter().map(ToString::to_string).collect();
    let mut r;
    if a.trace {
        r = Report::new(&["step", "weight", "members"]);
        for (i, (w, st)) in tr.weights.iter().zip(&tr.stages).enumerate() {
            r.push(vec![
                Cell::from(i),
                Cell::from(w.to_string()),
                Cell::from(st.len()),
            ]);
        }
        r.note(format!("l={}", tr.degree));
        r.note(format!("trace: {}", weights.join(" ")));
        for (i, st) in tr.stages.iter().enumerate() {
            r.note(format!("P{i} = {st}"));
        }
    } else {
        r = Report::new(&["l"]);
        r.push(vec![Cell::from(tr.degree)]);
        r.note(format!("l={}", tr.degree));
    }
    r.table_in_text = false;
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    Vk,
    Vp,
    Uk,
    U2Spectral,
}

#[derive(Debug, Args)]
pub struct NormsArgs {
    #[arg(long, value_enum, default_value = "vk")]
    kind: NormKind,
    /// Test sequence: ones, indicator:<m>, random, signs, or phase:<freq>:<poly>.
    #[arg(long, default_value = "ones")]
    seq: String,
    /// Sequence length.
    #[arg(long = "N")]
    n: usize,
    /// Norm index for vk and uk.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Polynomial system for vp.
    #[arg(long)]
    system: Option<String>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
}

fn test_sequence(src: &str, len: usize, seed: Option<u64>) -> Result<WeightedSequence> {
    let src = src.trim();
    if src == "ones" {
        return WeightedSequence::indicator(len, len);
    }
    if let Some(m) = src.strip_prefix("indicator:") {
        let m: usize = m
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad indicator length {m:?}")))?;
        return WeightedSequence::indicator(len, m);
    }
    if src == "random" || src == "signs" {
        let mut rng = ChaCha8Rng::seed_from_u64(require_seed(seed, "a random sequence")?);
        return WeightedSequence::from_fn(len, |_| {
            if src == "signs" {
                Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
            } else {
                // Uniform on the unit disk by rejection.
                loop {
                    let z =
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    if z.norm_sqr() <= 1.0 {
                        break z;
                    }
                }
            }
        });
    }
    if let Some(rest) = src.strip_prefix("phase:") {
        let (freq, poly) = rest.split_once(':').ok_or_else(|| {
            Error::InvalidArgument(format!("expected phase:<freq>:<poly>, got {src:?}"))
        })?;
        let seq = TorusPolySequence::phase(Frequency::parse(freq)?, Poly::parse(poly)?)?;
        let values = (1..=len as i64)
            .map(|n| torus_nilseq_eval(&seq, n))
            .collect::<Result<Vec<_>>>()?;
        return WeightedSequence::new(values);
    }
    Err(Error::InvalidArgument(format!("unknown sequence {src:?}")))
}

pub fn norms(a: &NormsArgs) -> Result<Report> {
    let seq = test_sequence(&a.seq, a.n, a.seed)?;
    let mut r = Report::new(&["kind", "k", "N", "norm", "power", "std_error"]);
    let kind = a
        .kind
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let row = |k: Cell, norm: f64, power: f64, se: Option<f64>| {
        vec![
            Cell::from(kind.as_str()),
            k,
            Cell::from(a.n),
            Cell::from(norm),
            Cell::from(power),
            Cell::from(se),
        ]
    };
    match a.kind {
        NormKind::Vk => {
            let v = vk_norm(&seq, a.k, eval_mode(a.mode, a.samples, a.seed)?)?;
            r.push(row(
                Cell::from(u64::from(a.k)),
                v.norm,
                v.power,
                v.std_error,
            ));
        }
        NormKind::Vp => {
            let text = a
                .system
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--kind vp needs --system".into()))?;
            let s = PolySystem::parse(text)?;
            let v = vp_norm(&seq, &s, eval_mode(a.mode, a.samples, a.seed)?)?;
            let l = parallelepiped_degree(&s)?.degree;
            r.push(row(Cell::from(l + 1), v.norm, v.power, v.std_error));
        }
        NormKind::Uk => {
            let v = gowers_uk(&seq, a.k)?;
            r.push(row(Cell::from(u64::from(a.k)), v, v.powi(1 << a.k), None));
        }
        NormKind::U2Spectral => {
            let v = gowers_u2_spectral(&seq);
            r.push(row(Cell::Int(2), v, v.powi(4), None));
        }
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct MajorantArgs {
    #[arg(long = "N")]
    n: u64,
    #[arg(long, default_value_t = 3)]
    w: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    b: i64,
    #[arg(long, default_value = "n")]
    system: String,
    /// Emit one (n, lambda_tilde, nu) row per n instead of the summary.
    #[arg(long)]
    rows: bool,
    /// Also compute the V_P distance of nu and of lambda-tilde to 1.
    #[arg(long)]
    distance: bool,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
}

pub fn majorant_audit(a: &MajorantArgs, ctx: &Context) -> Result<Report> {
    let s = PolySystem::parse(&a.system)?;
    let cfg = make_config(a.n, a.w, a.b, &s)?;
    let t = table(cfg.sieve_needed(), ctx)?;
    let lt = lambda_tilde_sequence(&t, &cfg)?;
    let nu = nu_sequence(&t, &cfg)?;
    if a.rows {
        let mut r = Report::new(&["n", "lambda_tilde", "nu"]);
        for (i, (x, y)) in lt.values().iter().zip(nu.values()).enumerate() {
            r.push(vec![Cell::from(i + 1), Cell::from(x.re), Cell::from(y.re)]);
        }
        return Ok(r);
    }
    let dom = domination_report(&t, &cfg)?;
    let mut r = Report::new(&["quantity", "value"]);
    let mut put = |k: &str, v: Cell| r.push(vec![Cell::from(k), v]);
    put("W", Cell::from(cfg.big_w));
    put("b", Cell::from(cfg.b));
    put("l", Cell::from(u64::from(cfg.l)));
    put("eta", Cell::Ratio(1, 1u64 << (3 + cfg.l)));
    put("R", Cell::from(cfg.r));
    put("mass_nu", Cell::from(nu.mean().re));
    put("mass_lambda_tilde", Cell::from(lt.mean().re));
    put("checked", Cell::from(dom.checked));
    put("violations", Cell::from(dom.violations.len()));
    put(
        "small_prime_violations",
        Cell::from(dom.small_prime_violations.len()),
    );
    if a.distance {
        let mode = eval_mode(a.mode, a.samples, a.seed)?;
        let dn = measure_audit(&nu, &s, mode)?;
        let dl = measure_audit(&lt, &s, mode)?;
        put("distance_nu", Cell::from(dn.vp_distance));
        put("distance_nu_std_error", Cell::from(dn.std_error));
        put("distance_lambda_tilde", Cell::from(dl.vp_distance));
        put("distance_lambda_tilde_std_error", Cell::from(dl.std_error));
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    /// Set literal: evens, mult<q>, random(density,seed), 1,4,9, or file:<path>.
    #[arg(long)]
    set: String,
    /// The set is taken inside [1, bound].
    #[arg(long)]
    bound: u64,
    #[arg(long)]
    system: String,
    /// +1, -1 or both.
    #[arg(long, default_value = "both", allow_hyphen_values = true)]
    sign: String,
    /// Largest prime to try.
    #[arg(long, default_value_t = 1000)]
    pmax: u64,
    /// List the return set on lo:hi instead of searching shifted primes.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
}

pub fn recurrence(a: &RecurrenceArgs, ctx: &Context) -> Result<Report> {
    let e = FiniteSet::from_literal(a.bound, &SetLiteral::parse(&a.set)?)?;
    let s = PolySystem::parse(&a.system)?;
    if let Some(range) = &a.range {
        let (lo, hi) = parse_range(range)?;
        let mut r = Report::new(&["n"]);
        for n in return_set_finite(&e, &s, lo, hi)? {
            r.push(vec![Cell::Int(n)]);
        }
        return Ok(r);
    }
    let signs: &[(Sign, i64)] = match a.sign.trim() {
        "+1" | "1" | "+" => &[(Sign::Plus, 1)],
        "-1" | "-" => &[(Sign::Minus, -1)],
        "both" => &[(Sign::Minus, -1), (Sign::Plus, 1)],
        other => {
            return Err(Error::InvalidArgument(format!(
                "--sign must be +1, -1 or both, got {other:?}"
            )))
        }
    };
    let t = table(a.pmax, ctx)?;
    let mut r = Report::new(&["sign", "p", "n"]);
    for &(sign, k) in signs {
        let hit = shifted_prime_hit(&e, &s, a.pmax, sign, &t)?;
        let n = hit.map(|p| p as i64 + k);
        r.push(vec![Cell::Int(k), Cell::from(hit), Cell::from(n)]);
        let label = if k > 0 { "+1" } else { "-1" };
        r.note(match hit {
            Some(p) => format!("sign {label}: p={p} (n={})", p as i64 + k),
            None => format!("sign {label}: no prime p <= {}", a.pmax),
        });
    }
    r.table_in_text = false;
    Ok(r)
}

fn parse_range(src: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidArgument(format!("expected lo:hi, got {src:?}"));
    let (lo, hi) = src.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightChoice {
    LambdaTilde,
    Nu,
    OneTilde,
    Prime,
    All,
}

#[derive(Debug, Args)]
pub struct AveragesArgs {
    /// Size M of the cyclic system Z/MZ.
    #[arg(long)]
    modulus: u64,
    #[arg(long)]
    set: String,
    #[arg(long)]
    system: String,
    #[arg(long = "N")]
    n: u64,
    #[arg(long, default_value_t = 3)]
    w: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    b: i64,
    #[arg(long, value_enum, default_value = "all")]
    weight: WeightChoice,
}

pub fn averages(a: &AveragesArgs, ctx: &Context) -> Result<Report> {
    let sys = CyclicSystem::from_literal(a.modulus, &SetLiteral::parse(&a.set)?)?;
    let s = PolySystem::parse(&a.system)?;
    let cfg = make_config(a.n, a.w, a.b, &s)?;
    let t = table(cfg.sieve_needed(), ctx)?;
    let kinds: Vec<(&str, WeightKind)> = match a.weight {
        WeightChoice::LambdaTilde => vec![("lambda_tilde", WeightKind::LambdaTilde)],
        WeightChoice::Nu => vec![("nu", WeightKind::Nu)],
        WeightChoice::OneTilde => vec![("one_tilde", WeightKind::OneTilde)],
        WeightChoice::Prime => vec![("prime", WeightKind::PrimeIndicator)],
        WeightChoice::All => vec![
            ("lambda_tilde", WeightKind::LambdaTilde),
            ("nu", WeightKind::Nu),
            ("one_tilde", WeightKind::OneTilde),
            ("prime", WeightKind::PrimeIndicator),
        ],
    };
    let mut r = Report::new(&["weight", "value"]);
    let d = sys.density();
    r.push(vec![
        Cell::from("density"),
        Cell::Ratio(*d.numer() as i64, *d.denom()),
    ]);
    let mut values = Vec::new();
    for (name, kind) in kinds {
        let v = multiple_average(&sys, &s, &cfg, &t, kind)?;
        values.push((name, v));
        r.push(vec![Cell::from(name), Cell::from(v)]);
    }
    let find = |k: &str| values.iter().find(|(n, _)| *n == k).map(|(_, v)| *v);
    if let (Some(l), Some(o)) = (find("lambda_tilde"), find("one_tilde")) {
        r.push(vec![
            Cell::from("lambda_tilde_minus_one_tilde"),
            Cell::from(l - o),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    modulus: u64,
    #[arg(long)]
    set: String,
    #[arg(long)]
    system: String,
    /// Comma-separated increasing lengths; overrides --dyadic.
    #[arg(long)]
    points: Option<String>,
    /// Exponent range lo:hi for the lengths 2^lo, ..., 2^hi.
    #[arg(long, default_value = "8:13")]
    dyadic: String,
    /// Also report the C averages for every residue coprime to this W.
    #[arg(long = "c-modulus")]
    c_modulus: Option<u64>,
}

pub fn convergence(a: &ConvergenceArgs, ctx: &Context) -> Result<Report> {
    let sys = CyclicSystem::from_literal(a.modulus, &SetLiteral::parse(&a.set)?)?;
    let s = PolySystem::parse(&a.system)?;
    let points: Vec<u64> = match &a.points {
        Some(p) => p
            .split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad length {x:?}")))
            })
            .collect::<Result<_>>()?,
        None => {
            let (lo, hi) = parse_range(&a.dyadic)?;
            if lo < 0 || hi > 62 {
                return Err(Error::InvalidArgument(format!(
                    "dyadic exponents {lo}:{hi} outside 0:62"
                )));
            }
            (lo..=hi).map(|j| 1u64 << j).collect()
        }
    };
    let top = points.iter().copied().max().unwrap_or(0);
    let t = table(top, ctx)?;
    let f_list = vec![sys.indicator(); s.len()];
    let profile = convergence_profile(&sys, &s, &f_list, &points, &t, a.c_modulus)?;
    let mut r = Report::new(&[
        "N",
        "b_norm",
        "a_norm",
        "gap",
        "cauchy_delta",
        "a_degenerate",
        "c_norm_min",
        "c_norm_max",
    ]);
    for p in profile {
        let cmin = p.c_norms.iter().map(|c| c.1).reduce(f64::min);
        let cmax = p.c_norms.iter().map(|c| c.1).reduce(f64::max);
        r.push(vec![
            Cell::from(p.n),
            Cell::from(reclab_core::systems::l2_norm(&p.b)),
            Cell::from(reclab_core::systems::l2_norm(&p.a)),
            Cell::from(p.gap),
            Cell::from(p.cauchy_delta),
            Cell::from(p.a_degenerate),
            Cell::from(cmin),
            Cell::from(cmax),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrelationKind {
    Mobius,
    Flat,
    Sharp,
}

#[derive(Debug, Args)]
pub struct MobiusArgs {
    /// Frequency: p/q, a decimal, sqrt(k) or golden.
    #[arg(long)]
    freq: Option<String>,
    #[arg(long, default_value = "n^2")]
    poly: String,
    /// Use the residue-class indicator J:i instead of a phase.
    #[arg(long)]
    indicator: Option<String>,
    #[arg(long = "N")]
    n: u64,
    #[arg(long, value_enum, default_value = "mobius")]
    kind: CorrelationKind,
    #[arg(long, default_value_t = 3)]
    w: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    b: i64,
    /// System fixing the sieve level for flat and sharp.
    #[arg(long, default_value = "n")]
    system: String,
}

/// `16, 32, …` below `n`, then `n` itself.
fn checkpoints(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (4..63).map(|j| 1u64 << j).take_while(|&c| c < n).collect();
    out.push(n);
    out
}

pub fn mobius_orth(a: &MobiusArgs, ctx: &Context) -> Result<Report> {
    let seq = match (&a.freq, &a.indicator) {
        (Some(f), None) => TorusPolySequence::phase(Frequency::parse(f)?, Poly::parse(&a.poly)?)?,
        (None, Some(ji)) => {
            let bad = || Error::InvalidArgument(format!("expected J:i, got {ji:?}"));
            let (j, i) = ji.split_once(':').ok_or_else(bad)?;
            component_indicator(
                j.trim().parse().map_err(|_| bad())?,
                i.trim().parse().map_err(|_| bad())?,
            )?
        }
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of --freq and --indicator".into(),
            ))
        }
    };
    let mut r = Report::new(&["N", "correlation"]);
    match a.kind {
        CorrelationKind::Mobius => {
            let t = table(a.n, ctx)?;
            for c in checkpoints(a.n) {
                r.push(vec![
                    Cell::from(c),
                    Cell::from(mobius_correlation(&t, &seq, c)?),
                ]);
            }
        }
        CorrelationKind::Flat | CorrelationKind::Sharp => {
            let s = PolySystem::parse(&a.system)?;
            let top = make_config(a.n, a.w, a.b, &s)?;
            let t = table(top.sieve_needed(), ctx)?;
            for c in checkpoints(a.n).into_iter().filter(|&c| c >= 16) {
                let cfg = make_config(c, a.w, a.b, &s)?;
                let v = match a.kind {
                    CorrelationKind::Flat => flat_sum_correlation(&t, &cfg, &seq)?,
                    _ => sharp_discrepancy(&t, &cfg, &seq)?,
                };
                r.push(vec![Cell::from(c), Cell::from(v)]);
            }
        }
    }
    Ok(r)
}
