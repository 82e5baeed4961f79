//! Repeat-code advantage distillation.
//!
//! Alice picks a random bit `C` and publishes `X^N xor C^N`. Bob XORs this
//! with his block `Y^N` and accepts only if the result is constant, in which
//! case the constant is his guess for `C`. Eve XORs the public block with her
//! per-position estimate of `X` (`Z2 xor Z1`) and takes a majority vote, with
//! ties broken by a fair coin.
//!
//! Given acceptance, Bob errs only if every position was disturbed, so his
//! error `beta_N` decays like `(D / (1 - D))^N`, while Eve's error `gamma_N`
//! decays like `(2 sqrt(delta0 (1 - delta0)))^N / sqrt N`. Whenever the first
//! ratio is the smaller one, a long enough block hands Bob the advantage.
//!
//! Everything combinatorial is evaluated in the log domain so block lengths in
//! the thousands neither overflow nor underflow.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::factorial::ln_binomial;

use crate::attack_model::{attack_from_qber, joint_distribution, AttackParams, AttackVariant};
use crate::error::{check_probability, Error, Result};
use crate::numeric::{bisect_flip, ln_add_exp, scaled_ln};

/// A non-empty block of bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitBlock(Vec<bool>);

impl BitBlock {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyBlock);
        }
        Ok(Self(bits))
    }

    /// Builds a block from `0`/`1` values; any non-zero value is a one.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

/// `[x_1 xor c, ..., x_N xor c]`.
pub fn encode_block(x: &BitBlock, c: bool) -> BitBlock {
    BitBlock(x.0.iter().map(|&b| b ^ c).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobDecision {
    /// Block accepted; carries Bob's estimate of `C`.
    Accept(bool),
    Reject,
}

impl BobDecision {
    pub fn accepted(self) -> bool {
        matches!(self, BobDecision::Accept(_))
    }

    pub fn c_hat(self) -> Option<bool> {
        match self {
            BobDecision::Accept(c) => Some(c),
            BobDecision::Reject => None,
        }
    }
}

/// Bob's acceptance rule: accept iff `received xor y` is all zeros or all ones.
pub fn bob_decode(received: &BitBlock, y: &BitBlock) -> Result<BobDecision> {
    if received.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: received.len(),
            right: y.len(),
        });
    }
    let mut diff = received.0.iter().zip(&y.0).map(|(&r, &b)| r ^ b);
    let first = diff.next().expect("blocks are non-empty");
    if diff.all(|t| t == first) {
        Ok(BobDecision::Accept(first))
    } else {
        Ok(BobDecision::Reject)
    }
}

fn check_block_length(n: u32) -> Result<u32> {
    if n == 0 {
        return Err(Error::Domain {
            what: "n",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(n)
}

fn check_disturbance(d: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&d) {
        return Err(Error::Domain {
            what: "disturbance",
            value: d,
            expected: "[0, 1/2)",
        });
    }
    Ok(d)
}

/// Bob's acceptance probability and conditional error for one block length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaFigures {
    pub p_accept: f64,
    pub beta: f64,
    pub ln_p_accept: f64,
    pub ln_beta: f64,
}

/// `p_accept = D^N + (1-D)^N` and `beta_N = D^N / p_accept`.
pub fn exact_beta(d: f64, n: u32) -> Result<BetaFigures> {
    let d = check_disturbance(d)?;
    let n = check_block_length(n)? as f64;
    let ln_disturbed = scaled_ln(n, d.ln());
    let ln_clean = scaled_ln(n, (-d).ln_1p());
    let ln_p_accept = ln_add_exp(ln_disturbed, ln_clean);
    let ln_beta = ln_disturbed - ln_p_accept;
    Ok(BetaFigures {
        p_accept: ln_p_accept.exp(),
        beta: ln_beta.exp(),
        ln_p_accept,
        ln_beta,
    })
}

/// Log of the majority-vote error when each of `n` votes is independently
/// wrong with probability `1 - delta`. Ties count as half an error.
pub fn ln_majority_error(delta: f64, n: u32) -> Result<f64> {
    let delta = check_probability("delta", delta)?;
    let n = check_block_length(n)?;
    let ln_wrong = (1.0 - delta).ln();
    let ln_right = delta.ln();
    let ln_term = |k: u32| {
        ln_binomial(n as u64, k as u64) + scaled_ln(k as f64, ln_wrong) + scaled_ln((n - k) as f64, ln_right)
    };
    let mut terms: Vec<f64> = (n / 2 + 1..=n).map(ln_term).collect();
    if n % 2 == 0 {
        terms.push(0.5f64.ln() + ln_term(n / 2));
    }
    Ok(ln_sum_exp(&terms))
}

fn ln_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Eve's majority-vote error `gamma_N` given that Bob correctly accepts.
pub fn exact_gamma(delta0: f64, n: u32) -> Result<f64> {
    Ok(ln_exact_gamma(delta0, n)?.exp())
}

pub fn ln_exact_gamma(delta0: f64, n: u32) -> Result<f64> {
    if delta0 < 0.5 {
        return Err(Error::Domain {
            what: "delta0",
            value: delta0,
            expected: "[1/2, 1]",
        });
    }
    ln_majority_error(delta0, n)
}

/// Eve's error on `C` given that Bob accepts, over both acceptance branches:
/// all positions clean (votes right with `delta0`) or all disturbed (votes
/// right with `delta1`).
pub fn exact_gamma_full(params: &AttackParams, n: u32) -> Result<f64> {
    let beta = exact_beta(params.disturbance(), n)?;
    let nf = n as f64;
    let clean = scaled_ln(nf, params.fidelity().ln()) + ln_majority_error(params.delta0(), n)?;
    let disturbed = scaled_ln(nf, params.disturbance().ln()) + ln_majority_error(params.delta1(), n)?;
    Ok((ln_add_exp(clean, disturbed) - beta.ln_p_accept).exp())
}

/// Log of `(1/2) C(N, N/2) ((1 - delta0) delta0)^(N/2)`.
pub fn ln_stirling_lower_bound(delta0: f64, n: u32) -> Result<f64> {
    let delta0 = check_probability("delta0", delta0)?;
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain {
            what: "n",
            value: n as f64,
            expected: "even and >= 2",
        });
    }
    let half = (n / 2) as f64;
    Ok(0.5f64.ln()
        + ln_binomial(n as u64, (n / 2) as u64)
        + scaled_ln(half, (1.0 - delta0).ln())
        + scaled_ln(half, delta0.ln()))
}

/// Lower bound on `gamma_N` from the tie term of the majority vote alone.
pub fn stirling_lower_bound(delta0: f64, n: u32) -> Result<f64> {
    Ok(ln_stirling_lower_bound(delta0, n)?.exp())
}

/// Exact advantage-distillation figures for one attack and block length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdExact {
    pub n: u32,
    pub p_accept: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gamma_full: f64,
    pub ln_beta: f64,
    pub ln_gamma: f64,
}

impl AdExact {
    pub fn compute(params: &AttackParams, n: u32) -> Result<Self> {
        let b = exact_beta(params.disturbance(), n)?;
        let ln_gamma = ln_exact_gamma(params.delta0(), n)?;
        Ok(Self {
            n,
            p_accept: b.p_accept,
            beta: b.beta,
            gamma: ln_gamma.exp(),
            gamma_full: exact_gamma_full(params, n)?,
            ln_beta: b.ln_beta,
            ln_gamma,
        })
    }
}

/// Margin by which `lhs` must undercut `rhs` in [`theorem1`]. At the exact
/// boundary the two sides agree analytically and their rounded values fall
/// either way.
pub const THEOREM1_MARGIN: f64 = 1e-12;

/// Slack, in the log domain, when checking `beta_N <= (D/(1-D))^N`; the two
/// sides differ by `ln(1 + (D/(1-D))^N)`, far below rounding for large `N`.
pub const BETA_BOUND_SLACK: f64 = 1e-12;

/// `ln((D/(1-D))^N)`, the log of Bob's error bound.
pub fn ln_beta_bound(d: f64, n: u32) -> Result<f64> {
    let d = check_disturbance(d)?;
    let n = check_block_length(n)? as f64;
    Ok(scaled_ln(n, d.ln() - (-d).ln_1p()))
}

/// Outcome of the key-agreement criterion `D/(1-D) < 2 sqrt((1-delta0) delta0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Report {
    /// `D / (1 - D)`, the decay ratio of Bob's error.
    pub lhs: f64,
    /// `2 sqrt((1 - delta0) delta0)`, the decay ratio of Eve's error. Equals
    /// `c_psi` when `delta0` is the Helstrom value.
    pub rhs: f64,
    pub holds: bool,
}

pub fn theorem1(params: &AttackParams) -> Theorem1Report {
    let lhs = params.disturbance() / params.fidelity();
    let d0 = params.delta0();
    let rhs = 2.0 * ((1.0 - d0) * d0).sqrt();
    Theorem1Report {
        lhs,
        rhs,
        holds: lhs < rhs - THEOREM1_MARGIN,
    }
}

/// QBER at which the key-agreement criterion stops holding for `variant`.
pub fn theorem1_boundary(variant: AttackVariant) -> Result<f64> {
    bisect_flip(0.0, variant.max_qber(), "theorem 1 margin", |q| {
        Ok(theorem1(&attack_from_qber(variant, q)?).holds)
    })
}

/// Smallest `N <= n_max` with `beta_N < gamma_N`, if any.
pub fn min_block_length(params: &AttackParams, n_max: u32) -> Option<u32> {
    (1..=n_max).find(|&n| {
        let beta = exact_beta(params.disturbance(), n).expect("valid params have D < 1/2");
        let gamma = ln_exact_gamma(params.delta0(), n).expect("valid params have delta0 >= 1/2");
        beta.ln_beta < gamma
    })
}

/// Monte Carlo counts for the repeat-code protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdEstimate {
    pub n: u32,
    /// Blocks sent.
    pub trials: u64,
    pub accepted: u64,
    /// Accepted blocks where Bob's bit differs from Alice's.
    pub bob_errors: u64,
    /// Accepted blocks where Eve's majority vote differs from Alice's bit.
    pub eve_errors: u64,
    /// Subset of `eve_errors` on blocks Bob decoded correctly.
    pub eve_errors_bob_correct: u64,
    pub seed: u64,
}

impl AdEstimate {
    pub fn acceptance_rate(&self) -> f64 {
        ratio(self.accepted, self.trials)
    }

    /// Empirical `beta_N`.
    pub fn beta(&self) -> f64 {
        ratio(self.bob_errors, self.accepted)
    }

    /// Empirical `gamma_N` (Bob correct).
    pub fn gamma(&self) -> f64 {
        ratio(self.eve_errors_bob_correct, self.accepted - self.bob_errors)
    }

    /// Empirical Eve error over all accepted blocks.
    pub fn gamma_full(&self) -> f64 {
        ratio(self.eve_errors, self.accepted)
    }

    fn merge(mut self, other: Counts) -> Self {
        self.trials += other.trials;
        self.accepted += other.accepted;
        self.bob_errors += other.bob_errors;
        self.eve_errors += other.eve_errors;
        self.eve_errors_bob_correct += other.eve_errors_bob_correct;
        self
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        f64::NAN
    } else {
        num as f64 / den as f64
    }
}

/// Standard error of a binomial proportion with success probability `p`.
pub fn binomial_standard_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Blocks per independently seeded RNG stream.
pub const BLOCKS_PER_CHUNK: u64 = 4096;

#[derive(Debug, Default, Clone, Copy)]
struct Counts {
    trials: u64,
    accepted: u64,
    bob_errors: u64,
    eve_errors: u64,
    eve_errors_bob_correct: u64,
}

struct Sampler {
    cells: WeightedIndex<f64>,
    n: u32,
}

impl Sampler {
    fn new(params: &AttackParams, n: u32) -> Self {
        let joint = joint_distribution(params);
        let cells = WeightedIndex::new(joint.table().iter().copied()).expect("joint distribution sums to 1");
        Self { cells, n }
    }

    fn run_chunk(&self, seed: u64, chunk: u64, blocks: u64) -> Counts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let n = self.n as usize;
        let mut counts = Counts::default();
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        let mut eve_x = Vec::with_capacity(n);
        for _ in 0..blocks {
            x.clear();
            y.clear();
            eve_x.clear();
            for _ in 0..n {
                let cell = self.cells.sample(&mut rng);
                let (xb, yb, z1, z2) = (cell >> 3 & 1 == 1, cell >> 2 & 1 == 1, cell >> 1 & 1 == 1, cell & 1 == 1);
                x.push(xb);
                y.push(yb);
                eve_x.push(z1 ^ z2);
            }
            let c: bool = rng.random();
            let x_block = BitBlock(std::mem::take(&mut x));
            let y_block = BitBlock(std::mem::take(&mut y));
            let public = encode_block(&x_block, c);
            counts.trials += 1;
            if let BobDecision::Accept(c_hat) = bob_decode(&public, &y_block).expect("equal lengths") {
                counts.accepted += 1;
                let bob_wrong = c_hat != c;
                counts.bob_errors += bob_wrong as u64;
                let ones = public.0.iter().zip(&eve_x).filter(|(&p, &e)| p ^ e).count();
                let eve_c = match (2 * ones).cmp(&n) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => rng.random(),
                };
                if eve_c != c {
                    counts.eve_errors += 1;
                    counts.eve_errors_bob_correct += !bob_wrong as u64;
                }
            }
            x = x_block.0;
            y = y_block.0;
        }
        counts
    }
}

fn chunk_plan(blocks: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let chunks = blocks.div_ceil(BLOCKS_PER_CHUNK);
    (0..chunks).map(move |k| (k, BLOCKS_PER_CHUNK.min(blocks - k * BLOCKS_PER_CHUNK)))
}

fn empty_estimate(n: u32, seed: u64) -> AdEstimate {
    AdEstimate {
        n,
        trials: 0,
        accepted: 0,
        bob_errors: 0,
        eve_errors: 0,
        eve_errors_bob_correct: 0,
        seed,
    }
}

fn check_sim_args(n: u32, blocks: u64) -> Result<()> {
    check_block_length(n)?;
    if blocks == 0 {
        return Err(Error::Domain {
            what: "blocks",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(())
}

/// Runs `blocks` repetitions of the protocol with block length `n`.
///
/// Blocks are split into fixed chunks of [`BLOCKS_PER_CHUNK`], chunk `k`
/// drawing from ChaCha stream `k` of `seed`, so the counts depend only on
/// the arguments and never on how chunks are scheduled.
pub fn simulate(params: &AttackParams, n: u32, blocks: u64, seed: u64) -> Result<AdEstimate> {
    check_sim_args(n, blocks)?;
    let sampler = Sampler::new(params, n);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let plan: Vec<(u64, u64)> = chunk_plan(blocks).collect();
        let total = plan
            .par_iter()
            .map(|&(k, len)| sampler.run_chunk(seed, k, len))
            .reduce(Counts::default, add_counts);
        Ok(empty_estimate(n, seed).merge(total))
    }
    #[cfg(not(feature = "parallel"))]
    {
        simulate_sequential(&sampler, n, blocks, seed)
    }
}

/// [`simulate`] on a dedicated pool of `workers` threads.
#[cfg(feature = "parallel")]
pub fn simulate_with_workers(
    params: &AttackParams,
    n: u32,
    blocks: u64,
    seed: u64,
    workers: usize,
) -> Result<AdEstimate> {
    check_sim_args(n, blocks)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| simulate(params, n, blocks, seed))
}

/// Single-threaded reference path of [`simulate`].
pub fn simulate_serial(params: &AttackParams, n: u32, blocks: u64, seed: u64) -> Result<AdEstimate> {
    check_sim_args(n, blocks)?;
    simulate_sequential(&Sampler::new(params, n), n, blocks, seed)
}

fn simulate_sequential(sampler: &Sampler, n: u32, blocks: u64, seed: u64) -> Result<AdEstimate> {
    let total = chunk_plan(blocks)
        .map(|(k, len)| sampler.run_chunk(seed, k, len))
        .fold(Counts::default(), add_counts);
    Ok(empty_estimate(n, seed).merge(total))
}

fn add_counts(a: Counts, b: Counts) -> Counts {
    Counts {
        trials: a.trials + b.trials,
        accepted: a.accepted + b.accepted,
        bob_errors: a.bob_errors + b.bob_errors,
        eve_errors: a.eve_errors + b.eve_errors,
        eve_errors_bob_correct: a.eve_errors_bob_correct + b.eve_errors_bob_correct,
    }
}
