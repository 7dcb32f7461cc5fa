//! Pairwise distinguishability game.
//!
//! Each round the referee draws a message `eta` uniformly from `n`, a
//! distinct `eta'` uniformly from the rest, and asks Bob "eta or eta'?" in a
//! random order. Alice's encoding of `eta` is measured by Bob according to
//! the strategy; Bob's answer is sampled from the resulting outcome
//! distribution. A round is won iff the answer is `eta`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cones::{frozen_effect_filter, TheoryTag};
use crate::distinguish::{helstrom_measurement, omega12_labels, omega5_labels, pair_measurement, Measurement, Omega12Label};
use crate::error::{invalid, Error, Result};

/// Probabilities within this distance of 0 or 1 are snapped before sampling.
pub const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    /// Number of messages.
    pub n: usize,
    pub theory: TheoryTag,
    /// Qubits, SEP-bits or classical bits carried by Alice's system.
    pub resource_count: usize,
    pub rounds: u64,
    pub seed: u64,
}

/// Outcome distribution of Bob's answer: `(answer, probability)` pairs.
pub type AnswerDistribution = Vec<(usize, f64)>;

/// An encoding of messages into states plus Bob's question-dependent decoding.
pub trait Strategy: Sync {
    type Signal: Send;

    fn name(&self) -> String;
    fn message_count(&self) -> usize;
    fn theory(&self) -> TheoryTag;
    fn resource_count(&self) -> usize;
    fn encode(&self, message: usize) -> Result<Self::Signal>;
    /// Distribution over the two messages of `question` that Bob answers
    /// when he receives `signal`.
    fn decode(&self, question: (usize, usize), signal: &Self::Signal) -> Result<AnswerDistribution>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSuccess {
    pub first: usize,
    pub second: usize,
    pub plays: u64,
    pub wins: u64,
    pub success: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub strategy: String,
    pub rounds_played: u64,
    pub wins: u64,
    pub success: f64,
    /// Per unordered message pair `first < second`, sorted.
    pub per_pair: Vec<PairSuccess>,
}

impl GameResult {
    pub fn pair_success(&self, a: usize, b: usize) -> Option<f64> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.per_pair.iter().find(|p| p.first == lo && p.second == hi).map(|p| p.success)
    }
}

fn check_question(n: usize, q: (usize, usize)) -> Result<()> {
    if q.0 >= n || q.1 >= n {
        return invalid(format!("question {q:?} out of range for {n} messages"));
    }
    if q.0 == q.1 {
        return invalid("a question must name two distinct messages");
    }
    Ok(())
}

fn sample_answer(dist: &AnswerDistribution, u: f64) -> Result<usize> {
    let clamped: Vec<(usize, f64)> = dist
        .iter()
        .map(|&(a, p)| {
            let p = if p < CLAMP_TOL {
                0.0
            } else if p > 1.0 - CLAMP_TOL {
                1.0
            } else {
                p
            };
            (a, p)
        })
        .collect();
    let mut acc = 0.0;
    for &(a, p) in &clamped {
        acc += p;
        if u < acc {
            return Ok(a);
        }
    }
    clamped
        .iter()
        .rev()
        .find(|(_, p)| *p > 0.0)
        .map(|(a, _)| *a)
        .ok_or_else(|| Error::InconsistentModel("answer distribution has no mass".into()))
}

/// Plays `cfg.rounds` rounds. Round `r` draws from its own stream derived
/// from `(cfg.seed, r)`, so the result is independent of evaluation order.
pub fn run_game<S: Strategy>(cfg: &GameConfig, strat: &S) -> Result<GameResult> {
    if cfg.n < 2 {
        return invalid("the game needs at least two messages");
    }
    if cfg.rounds < 1 {
        return invalid("the game needs at least one round");
    }
    if strat.message_count() != cfg.n {
        return Err(Error::StrategyMismatch(format!(
            "strategy encodes {} messages, config asks for {}",
            strat.message_count(),
            cfg.n
        )));
    }
    if strat.theory() != cfg.theory {
        return Err(Error::StrategyMismatch(format!(
            "strategy runs in {}, config asks for {}",
            strat.theory(),
            cfg.theory
        )));
    }
    if strat.resource_count() != cfg.resource_count {
        return Err(Error::StrategyMismatch(format!(
            "strategy uses {} systems, config allows {}",
            strat.resource_count(),
            cfg.resource_count
        )));
    }

    let n = cfg.n;
    let counts: BTreeMap<(usize, usize), (u64, u64)> = (0..cfg.rounds)
        .into_par_iter()
        .map(|round| -> Result<((usize, usize), bool)> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(round);
            let eta = rng.random_range(0..n);
            let mut other = rng.random_range(0..n - 1);
            if other >= eta {
                other += 1;
            }
            let question = if rng.random_bool(0.5) { (eta, other) } else { (other, eta) };
            let signal = strat.encode(eta)?;
            let dist = strat.decode(question, &signal)?;
            let answer = sample_answer(&dist, rng.random::<f64>())?;
            if answer != question.0 && answer != question.1 {
                return Err(Error::InconsistentModel(format!(
                    "decoder answered {answer} to question {question:?}"
                )));
            }
            Ok(((eta.min(other), eta.max(other)), answer == eta))
        })
        .try_fold(BTreeMap::new, |mut acc, item| {
            let (key, won) = item?;
            let e = acc.entry(key).or_insert((0u64, 0u64));
            e.0 += 1;
            e.1 += u64::from(won);
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, (p, w)) in b {
                let e = a.entry(k).or_insert((0, 0));
                e.0 += p;
                e.1 += w;
            }
            Ok(a)
        })?;

    let wins: u64 = counts.values().map(|c| c.1).sum();
    let per_pair = counts
        .into_iter()
        .map(|((first, second), (plays, w))| PairSuccess {
            first,
            second,
            plays,
            wins: w,
            success: w as f64 / plays as f64,
        })
        .collect();
    Ok(GameResult {
        strategy: strat.name(),
        rounds_played: cfg.rounds,
        wins,
        success: wins as f64 / cfg.rounds as f64,
        per_pair,
    })
}

/// Computational-basis codewords on `k` qubits.
#[derive(Debug, Clone)]
pub struct QuantumOrthogonalStrategy {
    qubits: usize,
    n: usize,
}

/// Basis state `|i>` of `(C^2)^{(x) k}`, as an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisState(pub usize);

pub fn quantum_orthogonal_strategy(k_qubits: usize, n: usize) -> Result<QuantumOrthogonalStrategy> {
    if k_qubits == 0 || n < 2 {
        return invalid("need at least one qubit and two messages");
    }
    let capacity = 1usize.checked_shl(k_qubits as u32).filter(|_| k_qubits < usize::BITS as usize);
    match capacity {
        Some(c) if n > c => Err(Error::UnsupportedInstance(format!(
            "{n} messages exceed the {c} orthogonal states of {k_qubits} qubits; \
             no perfect quantum strategy exists"
        ))),
        _ => Ok(QuantumOrthogonalStrategy { qubits: k_qubits, n }),
    }
}

impl Strategy for QuantumOrthogonalStrategy {
    type Signal = BasisState;

    fn name(&self) -> String {
        format!("quantum-orthogonal[{} qubits]", self.qubits)
    }
    fn message_count(&self) -> usize {
        self.n
    }
    fn theory(&self) -> TheoryTag {
        TheoryTag::Quantum
    }
    fn resource_count(&self) -> usize {
        self.qubits
    }
    fn encode(&self, message: usize) -> Result<BasisState> {
        if message >= self.n {
            return invalid(format!("message {message} out of range"));
        }
        Ok(BasisState(message))
    }
    fn decode(&self, q: (usize, usize), signal: &BasisState) -> Result<AnswerDistribution> {
        check_question(self.n, q)?;
        // Projective measurement {|q0><q0|, I - |q0><q0|}; basis states are
        // orthonormal so |<q0|s>|^2 is a Kronecker delta.
        let p0 = if signal.0 == q.0 { 1.0 } else { 0.0 };
        Ok(vec![(q.0, p0), (q.1, 1.0 - p0)])
    }
}

/// Message written in binary on `ceil(log2 n)` classical bits.
#[derive(Debug, Clone)]
pub struct ClassicalStrategy {
    bits: usize,
    n: usize,
}

pub fn classical_strategy(n: usize) -> Result<ClassicalStrategy> {
    if n < 2 {
        return invalid("need at least two messages");
    }
    Ok(ClassicalStrategy { bits: qubit_requirement(n)?, n })
}

impl Strategy for ClassicalStrategy {
    type Signal = Vec<bool>;

    fn name(&self) -> String {
        format!("classical[{} bits]", self.bits)
    }
    fn message_count(&self) -> usize {
        self.n
    }
    // Classical bits embed in the quantum theory as diagonal states.
    fn theory(&self) -> TheoryTag {
        TheoryTag::Quantum
    }
    fn resource_count(&self) -> usize {
        self.bits
    }
    fn encode(&self, message: usize) -> Result<Vec<bool>> {
        if message >= self.n {
            return invalid(format!("message {message} out of range"));
        }
        Ok((0..self.bits).map(|b| (message >> b) & 1 == 1).collect())
    }
    fn decode(&self, q: (usize, usize), bits: &Vec<bool>) -> Result<AnswerDistribution> {
        check_question(self.n, q)?;
        let value = bits.iter().enumerate().fold(0usize, |acc, (b, &on)| acc | (usize::from(on) << b));
        let answer = if value == q.0 { q.0 } else { q.1 };
        Ok(vec![(answer, 1.0)])
    }
}

/// Two-qubit product encodings with one cached two-outcome measurement per
/// ordered question; outcome 0 identifies the first message asked.
#[derive(Debug, Clone)]
pub struct PairwiseProductStrategy {
    name: String,
    labels: Vec<Omega12Label>,
    theory: TheoryTag,
    measurements: Vec<Measurement>,
}

impl PairwiseProductStrategy {
    fn build(
        name: &str,
        labels: Vec<Omega12Label>,
        theory: TheoryTag,
        mut make: impl FnMut(Omega12Label, Omega12Label) -> Result<Measurement>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut measurements = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let m = if i == j {
                    // Placeholder for the invalid diagonal; never consulted.
                    pair_measurement(labels[0], labels[(1) % n])?
                } else {
                    make(labels[i], labels[j])?
                };
                measurements.push(m);
            }
        }
        Ok(Self { name: name.to_string(), labels, theory, measurements })
    }

    pub fn labels(&self) -> &[Omega12Label] {
        &self.labels
    }

    /// Measurement Bob uses for the ordered question `(i, j)`.
    pub fn measurement(&self, i: usize, j: usize) -> Result<&Measurement> {
        check_question(self.labels.len(), (i, j))?;
        Ok(&self.measurements[i * self.labels.len() + j])
    }

    fn answer_distribution(&self, q: (usize, usize), label: &Omega12Label) -> Result<AnswerDistribution> {
        let m = self.measurement(q.0, q.1)?;
        let probs = m.probabilities(&label.state().density())?;
        Ok(vec![(q.0, probs[0]), (q.1, probs[1])])
    }
}

impl Strategy for PairwiseProductStrategy {
    type Signal = Omega12Label;

    fn name(&self) -> String {
        self.name.clone()
    }
    fn message_count(&self) -> usize {
        self.labels.len()
    }
    fn theory(&self) -> TheoryTag {
        self.theory
    }
    fn resource_count(&self) -> usize {
        2
    }
    fn encode(&self, message: usize) -> Result<Omega12Label> {
        self.labels.get(message).copied().ok_or_else(|| Error::InvalidArgument(format!("message {message} out of range")))
    }
    fn decode(&self, q: (usize, usize), signal: &Omega12Label) -> Result<AnswerDistribution> {
        self.answer_distribution(q, signal)
    }
}

/// Twelve messages on two SEP-bits, decoded with the pair-table measurements.
pub fn sep_strategy_12() -> Result<PairwiseProductStrategy> {
    sep_strategy(&omega12_labels())
}

/// Any subset of the twelve encoding states, at least two, decoded the same way.
pub fn sep_strategy(labels: &[Omega12Label]) -> Result<PairwiseProductStrategy> {
    if labels.len() < 2 {
        return invalid("need at least two encoding states");
    }
    let name = if labels.len() == 12 { "sep-omega12".to_string() } else { format!("sep-omega12[{}]", labels.len()) };
    PairwiseProductStrategy::build(&name, labels.to_vec(), TheoryTag::SepMin, pair_measurement)
}

/// The same twelve product states sent as two ordinary qubits, decoded with
/// the optimal (Helstrom) measurement for each question.
pub fn quantum_omega12_strategy() -> Result<PairwiseProductStrategy> {
    PairwiseProductStrategy::build("quantum-omega12-helstrom", omega12_labels().to_vec(), TheoryTag::Quantum, |a, b| {
        helstrom_measurement(&a.state().ket(), &b.state().ket())
    })
}

/// Five messages in the frozen model; every measurement must survive the
/// singlet filter.
pub fn frozen_strategy_5() -> Result<PairwiseProductStrategy> {
    PairwiseProductStrategy::build("frozen-omega5", omega5_labels().to_vec(), TheoryTag::Frozen, |a, b| {
        let m = pair_measurement(a, b)?;
        if let Some(e) = m.effects().iter().find(|e| !frozen_effect_filter(e, 1e-10)) {
            return Err(Error::UnsupportedInstance(format!(
                "measurement for ({a}, {b}) uses an effect negative on the singlet ({:.3})",
                crate::cones::singlet_expectation(e.op())
            )));
        }
        Ok(m)
    })
}

/// `12^k` messages as base-12 digit strings over `k` SEP-bit pairs.
#[derive(Debug, Clone)]
pub struct SepBlockStrategy {
    k: usize,
    n: usize,
    block: PairwiseProductStrategy,
}

pub fn sep_block_strategy(k: usize) -> Result<SepBlockStrategy> {
    if k < 1 {
        return invalid("need at least one block");
    }
    let n = 12usize
        .checked_pow(k as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("12^{k} messages overflow")))?;
    Ok(SepBlockStrategy { k, n, block: sep_strategy_12()? })
}

impl SepBlockStrategy {
    pub fn blocks(&self) -> usize {
        self.k
    }

    /// Base-12 digits, most significant first.
    pub fn digits(&self, message: usize) -> Result<Vec<usize>> {
        if message >= self.n {
            return invalid(format!("message {message} out of range for {} codewords", self.n));
        }
        let mut out = vec![0; self.k];
        let mut m = message;
        for d in out.iter_mut().rev() {
            *d = m % 12;
            m /= 12;
        }
        Ok(out)
    }

    pub fn message_from_digits(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.k || digits.iter().any(|&d| d >= 12) {
            return invalid("digit string must have k entries below 12");
        }
        Ok(digits.iter().fold(0, |acc, &d| acc * 12 + d))
    }

    /// The single block Bob measures for a question: the first position
    /// where the two codewords differ.
    pub fn inspected_block(&self, q: (usize, usize)) -> Result<usize> {
        check_question(self.n, q)?;
        let (a, b) = (self.digits(q.0)?, self.digits(q.1)?);
        Ok(a.iter().zip(&b).position(|(x, y)| x != y).expect("distinct messages differ somewhere"))
    }
}

impl Strategy for SepBlockStrategy {
    type Signal = Vec<Omega12Label>;

    fn name(&self) -> String {
        format!("sep-block[k={}]", self.k)
    }
    fn message_count(&self) -> usize {
        self.n
    }
    fn theory(&self) -> TheoryTag {
        TheoryTag::SepMin
    }
    fn resource_count(&self) -> usize {
        2 * self.k
    }
    fn encode(&self, message: usize) -> Result<Vec<Omega12Label>> {
        Ok(self.digits(message)?.into_iter().map(|d| self.block.labels()[d]).collect())
    }
    fn decode(&self, q: (usize, usize), signal: &Vec<Omega12Label>) -> Result<AnswerDistribution> {
        let t = self.inspected_block(q)?;
        let (da, db) = (self.digits(q.0)?, self.digits(q.1)?);
        // The pair measurement acts on block t alone; the other blocks are
        // traced out, which leaves the product state's block-t factor.
        let dist = self.block.answer_distribution((da[t], db[t]), &signal[t])?;
        Ok(vec![(q.0, dist[0].1), (q.1, dist[1].1)])
    }
}

fn play_with<S: Strategy>(s: &S, rounds: u64, seed: u64) -> Result<GameResult> {
    let cfg = GameConfig { n: s.message_count(), theory: s.theory(), resource_count: s.resource_count(), rounds, seed };
    run_game(&cfg, s)
}

/// Plays `n` messages with a strategy family chosen by name:
/// `sep` (twelve-state encoding or its subsets, or `12^k` block codewords),
/// `quantum` (orthogonal basis states on `qubits`, default `ceil(log2 n)`),
/// `quantum-helstrom` (twelve product states sent as qubits), `frozen`
/// (five states) or `classical`.
pub fn play_named(theory: &str, n: usize, qubits: Option<usize>, rounds: u64, seed: u64) -> Result<GameResult> {
    if n < 2 {
        return invalid("n must be at least 2");
    }
    if rounds < 1 {
        return invalid("rounds must be at least 1");
    }
    match theory {
        "sep" | "sep-min" => {
            if n <= 12 {
                play_with(&sep_strategy(&omega12_labels()[..n])?, rounds, seed)
            } else if let Some(k) = (1..=8u32).find(|&k| 12usize.pow(k) == n) {
                play_with(&sep_block_strategy(k as usize)?, rounds, seed)
            } else {
                Err(Error::UnsupportedInstance(format!("no SEP codebook for {n} messages (need n <= 12 or n = 12^k)")))
            }
        }
        "quantum" => {
            let q = match qubits {
                Some(q) => q,
                None => qubit_requirement(n)?,
            };
            play_with(&quantum_orthogonal_strategy(q, n)?, rounds, seed)
        }
        "quantum-helstrom" => {
            if n != 12 {
                return invalid("quantum-helstrom plays the twelve-state encoding; use n = 12");
            }
            play_with(&quantum_omega12_strategy()?, rounds, seed)
        }
        "frozen" => {
            if n != 5 {
                return invalid("the frozen model plays five messages; use n = 5");
            }
            play_with(&frozen_strategy_5()?, rounds, seed)
        }
        "classical" => play_with(&classical_strategy(n)?, rounds, seed),
        other => invalid(format!("unknown theory `{other}`")),
    }
}

fn ceil_log2_u128(n: u128) -> u32 {
    if n <= 1 {
        0
    } else {
        128 - (n - 1).leading_zeros()
    }
}

/// Qubits needed to win with `n` messages: `ceil(log2 n)`.
pub fn qubit_requirement(n: usize) -> Result<usize> {
    if n < 2 {
        return invalid("need at least two messages");
    }
    Ok(ceil_log2_u128(n as u128) as usize)
}

/// Resource counts for `12^k` messages: `(2k SEP-bits, 2k + ceil(k log2 3) qubits)`.
///
/// The qubit count is computed by floating-point formula and cross-checked
/// against the exact integer `ceil(log2 12^k)`.
pub fn sep_vs_qubit_count(k: usize) -> Result<(usize, usize)> {
    if k < 1 {
        return invalid("k must be at least 1");
    }
    let exact = 12u128
        .checked_pow(k as u32)
        .map(ceil_log2_u128)
        .ok_or_else(|| Error::InvalidArgument(format!("12^{k} overflows 128 bits")))? as usize;
    let formula = 2 * k + (k as f64 * 3f64.log2()).ceil() as usize;
    if formula != exact {
        return Err(Error::InconsistentModel(format!(
            "ceil(log2 12^{k}) = {exact} but 2k + ceil(k log2 3) = {formula}"
        )));
    }
    Ok((2 * k, exact))
}
