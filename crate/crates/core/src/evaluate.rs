//! Channel simulation and error-probability evaluation.
//!
//! The channel is the q-ary symmetric channel: every symbol is replaced
//! independently with probability p, the q - 1 wrong values equiprobable
//! (the binary symmetric channel for q = 2).
//!
//! For an inner pair the stage-one failure probability is computed exactly
//! by enumerating all q^n error patterns and classifying each against the
//! correctable set (coset leaders plus the dual of C2).  The concatenated
//! failure rate is bounded by the binomial tail over the number of failed
//! blocks reaching theta = floor((N - K1)/2) + 1; the tail is summed in
//! exact rational arithmetic and also relaxed to a closed entropy form.
//! Monte Carlo runs cross-check the analytic numbers; every trial draws its
//! own stream from a hash of (seed, trial index), so results are bit-stable
//! under any parallel schedule.

use crate::concat::{ConcatRandomness, ConcatenatedPair};
use crate::conjugate::{ConjugateCodePair, PairError, SyndromeTable};
use crate::decoder::{build_inner_tables, two_stage_decode, DecodeError};
use crate::galois::Ext;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Exact enumeration of inner failure sets is capped at q^n <= 2^22 patterns.
pub const MAX_ENUMERATION: u128 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("rate {0} outside the valid range")]
    RateOutOfRange(f64),
    #[error("exact enumeration needs {size} patterns (cap {cap})")]
    EnumerationTooLarge { size: u128, cap: u128 },
    #[error("exponent table is unusable: {0}")]
    BadTable(String),
    #[error("need at least one trial")]
    NoTrials,
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// q-ary symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelModel {
    pub q: u32,
    pub p: f64,
}

impl ChannelModel {
    pub fn new(q: u32, p: f64) -> Result<ChannelModel, EvalError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(EvalError::ProbabilityOutOfRange(p));
        }
        Ok(ChannelModel { q, p })
    }

    /// Additive error vector: each coordinate independently nonzero with
    /// probability p, uniform over the q - 1 nonzero values.
    pub fn sample_error(&self, n: usize, rng: &mut impl Rng) -> Vec<u32> {
        (0..n)
            .map(|_| {
                if rng.random::<f64>() < self.p {
                    rng.random_range(1..self.q)
                } else {
                    0
                }
            })
            .collect()
    }

}

/// Number of failing error patterns of each weight 0..=n for the stage-one
/// decoder of an inner pair: patterns outside (leaders + dual of C2).
pub fn inner_failure_counts(
    pair: &ConjugateCodePair,
    table: &SyndromeTable,
) -> Result<Vec<u64>, EvalError> {
    let n = pair.n();
    let q = pair.q();
    let size = u128::from(q).pow(n as u32);
    if size > MAX_ENUMERATION {
        return Err(EvalError::EnumerationTooLarge { size, cap: MAX_ENUMERATION });
    }
    let mut counts = vec![0u64; n + 1];
    let mut pattern = vec![0u32; n];
    loop {
        if !pair.inner_success(table, &pattern) {
            let w = pattern.iter().filter(|&&x| x != 0).count();
            counts[w] += 1;
        }
        // Odometer over GF(q)^n.
        let mut i = 0;
        while i < n {
            pattern[i] += 1;
            if pattern[i] < q {
                break;
            }
            pattern[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(counts)
}

/// Exact stage-one failure probability of an inner pair on the channel, by
/// complete enumeration of q^n patterns.
pub fn inner_failure_prob(
    pair: &ConjugateCodePair,
    table: &SyndromeTable,
    channel: &ChannelModel,
) -> Result<f64, EvalError> {
    let counts = inner_failure_counts(pair, table)?;
    Ok(weight_counts_to_prob(&counts, pair.q(), channel.p))
}

/// Monte Carlo estimate of the stage-one failure probability, for pairs too
/// long to enumerate: returns the empirical rate with its Wilson 95%
/// interval.  Deterministic for a fixed seed.
pub fn inner_failure_prob_mc(
    pair: &ConjugateCodePair,
    table: &SyndromeTable,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64, f64), EvalError> {
    if trials == 0 {
        return Err(EvalError::NoTrials);
    }
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let error = channel.sample_error(pair.n(), &mut rng);
            u64::from(!pair.inner_success(table, &error))
        })
        .sum();
    let (low, high) = wilson_interval(failures, trials);
    Ok((failures as f64 / trials as f64, low, high))
}

fn weight_counts_to_prob(counts: &[u64], q: u32, p: f64) -> f64 {
    let n = counts.len() - 1;
    let per_value = p / f64::from(q - 1);
    counts
        .iter()
        .enumerate()
        .map(|(w, &c)| c as f64 * per_value.powi(w as i32) * (1.0 - p).powi((n - w) as i32))
        .sum()
}

/// theta = floor((N - K1)/2) + 1: decoding is guaranteed when fewer than
/// theta inner blocks fail.
pub fn theta(n_blocks: usize, k1: usize) -> usize {
    (n_blocks - k1) / 2 + 1
}

/// Binomial tail sum_{i=theta}^{N} C(N,i) P^i (1-P)^(N-i), summed in exact
/// rational arithmetic; nondecreasing in P.
pub fn outer_tail_bound(n_blocks: usize, k1: usize, p_inner: f64) -> Result<f64, EvalError> {
    if !(0.0..=1.0).contains(&p_inner) {
        return Err(EvalError::ProbabilityOutOfRange(p_inner));
    }
    let th = theta(n_blocks, k1);
    let p = BigRational::from_float(p_inner).expect("finite probability");
    let one = BigRational::one();
    let q = &one - &p;
    let mut sum = BigRational::zero();
    for i in th..=n_blocks {
        let c = BigRational::from_integer(binomial(n_blocks, i).into());
        sum += c * rational_pow(&p, i) * rational_pow(&q, n_blocks - i);
    }
    // The exact sum lies in [0, 1]; rounding to f64 stays inside.
    Ok(sum.to_f64().unwrap_or(if sum.is_positive() { 1.0 } else { 0.0 }))
}

fn rational_pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// Closed entropy-form relaxation of the tail bound, as a per-symbol
/// log_q exponent over the total length n N:
///
///   [theta log_q P + (N - theta) log_q (1 - P) + N h(theta/N) log_q 2] / (n N)
///
/// where h is the binary entropy function.  This upper-bounds
/// log_q(tail) / (n N) in the Chernoff regime theta/N >= P.  Degenerate
/// inputs follow the conventions P = 0 -> -infinity and P = 1 -> 0.
pub fn entropy_form_bound(
    n_blocks: usize,
    k1: usize,
    p_inner: f64,
    inner_n: usize,
    q: u32,
) -> Result<f64, EvalError> {
    if !(0.0..=1.0).contains(&p_inner) {
        return Err(EvalError::ProbabilityOutOfRange(p_inner));
    }
    if p_inner == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p_inner == 1.0 {
        return Ok(0.0);
    }
    let th = theta(n_blocks, k1) as f64;
    let nn = n_blocks as f64;
    let logq = |x: f64| x.ln() / f64::from(q).ln();
    let tau = th / nn;
    let value = th * logq(p_inner)
        + (nn - th) * logq(1.0 - p_inner)
        + nn * binary_entropy(tau) * logq(2.0);
    Ok(value / (inner_n as f64 * nn))
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.log2() + (1.0 - x) * (1.0 - x).log2())
}

/// Attainable exponent of the concatenated construction for a target rate:
/// (1/4) max (1 - R) E((1 + r)/2) over rR = R_o, 0 <= r, R <= 1, maximized
/// on a grid; E is supplied as (x, E(x)) samples on [0, 1], interpolated
/// linearly.  Returns (value, argmax r, argmax R).
pub fn concat_exponent(
    samples: &[(f64, f64)],
    outer_rate: f64,
) -> Result<(f64, f64, f64), EvalError> {
    if !(0.0..=1.0).contains(&outer_rate) {
        return Err(EvalError::RateOutOfRange(outer_rate));
    }
    if samples.len() < 2 {
        return Err(EvalError::BadTable("need at least two samples".into()));
    }
    let mut table = samples.to_vec();
    table.sort_by(|a, b| a.0.total_cmp(&b.0));
    if table.first().unwrap().0 > 0.0 || table.last().unwrap().0 < 1.0 {
        return Err(EvalError::BadTable("samples must cover [0, 1]".into()));
    }
    if table.iter().any(|&(_, v)| v < 0.0 || !v.is_finite()) {
        return Err(EvalError::BadTable("exponent samples must be finite and nonnegative".into()));
    }
    let eval = |x: f64| -> f64 {
        let idx = table.partition_point(|&(t, _)| t < x);
        if idx == 0 {
            return table[0].1;
        }
        if idx == table.len() {
            return table[table.len() - 1].1;
        }
        let (x0, y0) = table[idx - 1];
        let (x1, y1) = table[idx];
        if x1 == x0 {
            y1
        } else {
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    };
    const GRID: usize = 2000;
    let mut best = (f64::NEG_INFINITY, 1.0, outer_rate);
    for i in 0..=GRID {
        let r = outer_rate + (1.0 - outer_rate) * i as f64 / GRID as f64;
        if r <= 0.0 {
            continue;
        }
        let big_r = outer_rate / r;
        if big_r > 1.0 + 1e-12 {
            continue;
        }
        let value = 0.25 * (1.0 - big_r) * eval((1.0 + r) / 2.0);
        if value > best.0 {
            best = (value, r, big_r);
        }
    }
    if outer_rate == 0.0 {
        // R = 0 with any r is feasible.
        for i in 0..=GRID {
            let r = i as f64 / GRID as f64;
            let value = 0.25 * eval((1.0 + r) / 2.0);
            if value > best.0 {
                best = (value, r, 0.0);
            }
        }
    }
    Ok(best)
}

/// Rate of a quotient pair viewed as a classical code: (r_q + 1) / 2.
pub fn rate_quotient_to_classical(r_q: f64) -> Result<f64, EvalError> {
    if !(-1.0..=1.0).contains(&r_q) {
        return Err(EvalError::RateOutOfRange(r_q));
    }
    Ok((r_q + 1.0) / 2.0)
}

/// Inverse conversion: r_q = 2 r_cl - 1.
pub fn rate_classical_to_quotient(r_cl: f64) -> Result<f64, EvalError> {
    if !(0.0..=1.0).contains(&r_cl) {
        return Err(EvalError::RateOutOfRange(r_cl));
    }
    Ok(2.0 * r_cl - 1.0)
}

/// Fidelity lower bound 1 - P1 - P2 from the two quotient decoding error
/// probabilities (may be negative; returned as-is).
pub fn fidelity_lower_bound(p1: f64, p2: f64) -> f64 {
    1.0 - p1 - p2
}

/// Wilson 95% score interval for k successes in n trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let nf = n as f64;
    let phat = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = z * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Monte Carlo evaluation report with the analytic companions.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub seed: u64,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub empirical_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub inner_trials: u64,
    pub inner_failures: u64,
    pub inner_empirical: f64,
    pub inner_wilson_low: f64,
    pub inner_wilson_high: f64,
    /// Exact stage-one failure probability (worst block).
    pub inner_exact: f64,
    /// Binomial tail bound on the concatenated failure rate.
    pub tail_bound: f64,
    /// Entropy-form relaxation, as a per-symbol log_q exponent.
    pub entropy_exponent: f64,
    /// Same analytics for the swapped pair (L2, L1).
    pub swapped_inner_exact: f64,
    pub swapped_tail_bound: f64,
    /// 1 - tail_bound - swapped_tail_bound.
    pub fidelity_bound: f64,
}

impl EvalReport {
    /// Aligned text rendering.
    pub fn to_text_table(&self) -> String {
        let mut s = String::new();
        let mut push = |k: &str, v: String| {
            s.push_str(&format!("{k:<28} {v}\n"));
        };
        push("seed", self.seed.to_string());
        push("p", format!("{:.6}", self.p));
        push("trials", self.trials.to_string());
        push("failures", self.failures.to_string());
        push("empirical rate", format!("{:.6e}", self.empirical_rate));
        push(
            "wilson 95%",
            format!("[{:.6e}, {:.6e}]", self.wilson_low, self.wilson_high),
        );
        push("inner trials", self.inner_trials.to_string());
        push("inner failures", self.inner_failures.to_string());
        push("inner empirical", format!("{:.6e}", self.inner_empirical));
        push(
            "inner wilson 95%",
            format!("[{:.6e}, {:.6e}]", self.inner_wilson_low, self.inner_wilson_high),
        );
        push("inner exact", format!("{:.6e}", self.inner_exact));
        push("tail bound", format!("{:.6e}", self.tail_bound));
        push("entropy exponent", format!("{:.6}", self.entropy_exponent));
        push("swapped inner exact", format!("{:.6e}", self.swapped_inner_exact));
        push("swapped tail bound", format!("{:.6e}", self.swapped_tail_bound));
        push("fidelity bound", format!("{:.6}", self.fidelity_bound));
        s
    }

    pub fn csv_header() -> &'static str {
        "p,trials,failures,empirical_rate,wilson_low,wilson_high,inner_trials,inner_failures,\
         inner_empirical,inner_exact,tail_bound,entropy_exponent,fidelity_bound,seed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:e},{:e},{:e},{},{},{:e},{:e},{:e},{},{},{}",
            self.p,
            self.trials,
            self.failures,
            self.empirical_rate,
            self.wilson_low,
            self.wilson_high,
            self.inner_trials,
            self.inner_failures,
            self.inner_empirical,
            self.inner_exact,
            self.tail_bound,
            self.entropy_exponent,
            self.fidelity_bound,
            self.seed
        )
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-trial stream: hash of (seed, trial index), independent of scheduling.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

/// Analytic numbers for a concatenated pair: worst-block exact inner failure
/// probability, tail bound and entropy exponent.
pub struct AnalyticBounds {
    pub inner_exact: f64,
    pub tail_bound: f64,
    pub entropy_exponent: f64,
    pub theta: usize,
}

pub fn analytic_bounds(cp: &ConcatenatedPair, p: f64) -> Result<AnalyticBounds, EvalError> {
    let channel = ChannelModel::new(cp.tower().q(), p)?;
    let mut worst = 0.0f64;
    for inner in cp.inners() {
        let table = SyndromeTable::build(inner.c1())?;
        worst = worst.max(inner_failure_prob(inner, &table, &channel)?);
    }
    let n_blocks = cp.n_blocks();
    let k1 = cp.outer1().k();
    let inner_n = cp.inners().iter().map(ConjugateCodePair::n).max().unwrap_or(1);
    Ok(AnalyticBounds {
        inner_exact: worst,
        tail_bound: outer_tail_bound(n_blocks, k1, worst)?,
        entropy_exponent: entropy_form_bound(n_blocks, k1, worst, inner_n, cp.tower().q())?,
        theta: theta(n_blocks, k1),
    })
}

/// The concatenation of the swapped inner pairs and swapped outer codes,
/// i.e. the pair (L2, L1); used for fidelity bounds.
pub fn swapped_pair(cp: &ConcatenatedPair) -> Result<ConcatenatedPair, EvalError> {
    let swapped_inners: Result<Vec<ConjugateCodePair>, PairError> =
        cp.inners().iter().map(ConjugateCodePair::swapped).collect();
    ConcatenatedPair::new(
        cp.tower().clone(),
        swapped_inners?,
        cp.outer2().clone(),
        cp.outer1().clone(),
        Some(cp.bases().dual().to_vec()),
    )
    .map_err(|e| EvalError::BadTable(format!("swapped pair construction failed: {e}")))
}

/// Seeded Monte Carlo evaluation of a concatenated pair on the channel.
///
/// Each trial encodes a uniform message with uniform coset randomness,
/// samples a channel error, two-stage decodes, and compares the recovered
/// coset with the transmitted one.  Inner failures are tallied per block
/// transmission.  Deterministic for a fixed seed under any parallelism.
pub fn monte_carlo(
    cp: &ConcatenatedPair,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
) -> Result<EvalReport, EvalError> {
    if trials == 0 {
        return Err(EvalError::NoTrials);
    }
    let tables = build_inner_tables(cp)?;
    let n_blocks = cp.n_blocks() as u64;
    let outer_k = cp.outer_k();
    let t = cp.tower();
    let size = t.size();

    let (failures, inner_failures) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let msg: Vec<Ext> =
                (0..outer_k).map(|_| Ext(rng.random_range(0..size))).collect();
            let outer_rand: Vec<Ext> = (0..cp.outer2().n() - cp.outer2().k())
                .map(|_| Ext(rng.random_range(0..size)))
                .collect();
            let block_rand: Vec<Vec<u32>> = cp
                .inners()
                .iter()
                .map(|inner| {
                    let dim = inner.n() - inner.c2().dim();
                    (0..dim).map(|_| rng.random_range(0..t.q())).collect()
                })
                .collect();
            let word = cp
                .encode_message(
                    &msg,
                    &ConcatRandomness::Explicit { outer: outer_rand, blocks: block_rand },
                )
                .expect("validated dimensions");
            let error = channel.sample_error(cp.n_total(), &mut rng);
            let received: Vec<u32> =
                word.iter().zip(&error).map(|(&a, &b)| (a + b) % t.q()).collect();
            let report =
                two_stage_decode(cp, &tables, &received).expect("validated dimensions");
            let sent = cp.message_coset_rep(&msg).expect("validated dimensions");
            let fail = u64::from(report.message_coset != sent);
            let inner_fails = cp
                .inners()
                .iter()
                .enumerate()
                .filter(|(i, inner)| {
                    !inner.inner_success(&tables[*i], &error[cp.block_range(*i)])
                })
                .count() as u64;
            (fail, inner_fails)
        })
        .reduce(|| (0u64, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));

    let bounds = analytic_bounds(cp, channel.p)?;
    let swapped = swapped_pair(cp)?;
    let swapped_bounds = analytic_bounds(&swapped, channel.p)?;

    let inner_trials = trials * n_blocks;
    let (wl, wh) = wilson_interval(failures, trials);
    let (iwl, iwh) = wilson_interval(inner_failures, inner_trials);
    Ok(EvalReport {
        seed,
        p: channel.p,
        trials,
        failures,
        empirical_rate: failures as f64 / trials as f64,
        wilson_low: wl,
        wilson_high: wh,
        inner_trials,
        inner_failures,
        inner_empirical: inner_failures as f64 / inner_trials as f64,
        inner_wilson_low: iwl,
        inner_wilson_high: iwh,
        inner_exact: bounds.inner_exact,
        tail_bound: bounds.tail_bound,
        entropy_exponent: bounds.entropy_exponent,
        swapped_inner_exact: swapped_bounds.inner_exact,
        swapped_tail_bound: swapped_bounds.tail_bound,
        fidelity_bound: fidelity_lower_bound(bounds.tail_bound, swapped_bounds.tail_bound),
    })
}
