//! Verification suites. Each returns a [`SuiteReport`] whose checks record
//! measured and expected values; the CLI and the acceptance tests run them.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cones::{
    base_effect, base_measurement, is_sep_effect, product_expectation_closed_form, singlet_expectation,
    singlet_projector, BaseEffect, SeeSawConfig, TheoryTag,
};
use crate::distinguish::{
    check_pairwise_set, entropy_ambiguity_demo, helstrom_bound, omega12_labels, omega5_labels, pair_measurement,
    verify_perfect_discrimination, Measurement, Omega12Label,
};
use crate::error::{Error, Result};
use crate::game::{
    frozen_strategy_5, play_named, quantum_orthogonal_strategy, run_game, sep_block_strategy, sep_vs_qubit_count,
    GameConfig, GameResult, Strategy,
};
use crate::operator::{pauli_eigenstate, Axis, BlochVector, HermitianOperator, ProductPureState, Sign};
use crate::packing::{is_valid_packing, max_packing_construct, packing_search, PackingInstance, PACKING_TOL};
use crate::report::{Check, SuiteReport, Value};
use crate::squarebit::{
    load_square_extension, square_binary_measurements, square_effects, square_info_dimension,
    square_product_effects, square_product_pair_measurement, square_product_prob, square_product_states,
    square_prob_table, unit_effect, SQUARE_PROB_FIXTURE,
};

/// Options shared by all suites; `play` and `block-code` read the game fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub rounds: u64,
    pub tol: f64,
    pub n: usize,
    /// `sep`, `quantum`, `frozen`, `classical` or `quantum-helstrom`.
    pub theory: String,
    pub qubits: Option<usize>,
    pub k: usize,
    pub budget: u64,
    pub ext_file: Option<PathBuf>,
    /// Record wall-clock time in `elapsed_ms` (breaks byte-identical reruns).
    pub timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 42,
            rounds: 10_000,
            tol: 1e-9,
            n: 12,
            theory: "sep".into(),
            qubits: None,
            k: 2,
            budget: 1_000_000,
            ext_file: None,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    BlockCode,
    Dimension,
    EntropyDemo,
    Frozen,
    Packing,
    Play,
    QuantumLimit,
    SquareBit,
    Table1Sweep,
    VerifyBase,
}

impl Suite {
    /// Every suite, ordered by name.
    pub const ALL: [Suite; 10] = [
        Suite::BlockCode,
        Suite::Dimension,
        Suite::EntropyDemo,
        Suite::Frozen,
        Suite::Packing,
        Suite::Play,
        Suite::QuantumLimit,
        Suite::SquareBit,
        Suite::Table1Sweep,
        Suite::VerifyBase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BlockCode => "block-code",
            Suite::Dimension => "dimension",
            Suite::EntropyDemo => "entropy-demo",
            Suite::Frozen => "frozen",
            Suite::Packing => "packing",
            Suite::Play => "play",
            Suite::QuantumLimit => "quantum-limit",
            Suite::SquareBit => "squarebit",
            Suite::Table1Sweep => "table1-sweep",
            Suite::VerifyBase => "verify-base",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut r = match suite {
        Suite::BlockCode => block_code(opts),
        Suite::Dimension => dimension(opts),
        Suite::EntropyDemo => entropy_demo(opts),
        Suite::Frozen => frozen(opts),
        Suite::Packing => packing(opts),
        Suite::Play => play(opts),
        Suite::QuantumLimit => quantum_limit(opts),
        Suite::SquareBit => squarebit(opts),
        Suite::Table1Sweep => table1_sweep(opts),
        Suite::VerifyBase => verify_base(opts),
    }?;
    if opts.timing {
        r.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    Ok(r)
}

/// Runs every suite concurrently and folds them, in name order, into one
/// report named `all`.
pub fn run_all(opts: &SuiteOptions) -> Result<SuiteReport> {
    let parts = Suite::ALL
        .par_iter()
        .map(|&s| run_suite(s, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::aggregate("all", opts.seed, &parts))
}

fn see_saw(opts: &SuiteOptions) -> SeeSawConfig {
    SeeSawConfig { seed: opts.seed, ..SeeSawConfig::default() }
}

fn random_bloch(rng: &mut ChaCha8Rng) -> Result<BlochVector> {
    let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
    BlochVector::direction(v)
}

pub fn verify_base(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::VerifyBase.name(), opts.seed);
    let (e1, e2) = (base_effect(BaseEffect::E1), base_effect(BaseEffect::E2));
    let sum = e1.add(&e2)?;
    r.push(Check::real("effects sum to identity", sum.max_abs_diff(&HermitianOperator::identity(4)?), 0.0, 1e-12, "exact"));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut worst_diff, mut lo, mut hi) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let s = ProductPureState::new(random_bloch(&mut rng)?, random_bloch(&mut rng)?)?;
        let ket = s.ket();
        for (which, op) in [(BaseEffect::E1, &e1), (BaseEffect::E2, &e2)] {
            let closed = product_expectation_closed_form(which, &s.a, &s.b);
            let numeric = op.expectation(&ket)?;
            worst_diff = worst_diff.max((closed - numeric).abs());
            lo = lo.min(numeric);
            hi = hi.max(numeric);
        }
    }
    r.push(Check::real("closed form matches trace on random product states", worst_diff, 0.0, 1e-12, "derived"));
    r.push(Check::at_least("smallest product-state probability", lo, 0.0, 1e-12, "derived"));
    r.push(Check::at_most("largest product-state probability", hi, 1.0, 1e-12, "derived"));

    let cfg = see_saw(opts);
    for (name, op) in [("E1", &e1), ("E2", &e2)] {
        let v = is_sep_effect(op, &cfg)?;
        r.push(Check::at_least(&format!("{name} block-positive (see-saw minimum)"), v.min_value, 0.0, 1e-10, "derived"));
    }
    r.push(Check::real("E1 smallest eigenvalue (not a quantum effect)", e1.min_eigenvalue(), -0.5, 1e-12, "derived"));
    r.push(Check::real("E1 on the singlet", singlet_expectation(&e1), 0.5, 1e-12, "derived"));
    let m = base_measurement();
    r.push(Check::count("base measurement outcomes", m.len(), 2, "exact"));
    Ok(r)
}

/// Outcome probabilities and SEP certification for one unordered pair.
fn sweep_pair(a: Omega12Label, b: Omega12Label, tol: f64, cfg: &SeeSawConfig) -> Result<Check> {
    let m = pair_measurement(a, b)?;
    let rep = verify_perfect_discrimination(&m, &a.state().density(), &b.state().density(), tol)?;
    let mut sep_ok = true;
    for e in m.effects() {
        sep_ok &= is_sep_effect(e.op(), cfg)?.accepted;
    }
    Ok(Check::compare(
        &format!("{a} vs {b}"),
        Value::List(vec![Value::real(rep.p_correct_1), Value::real(rep.p_correct_2), sep_ok.into()]),
        Value::List(vec![Value::real(1.0), Value::real(1.0), true.into()]),
        tol,
        "pair table",
    ))
}

pub fn table1_sweep(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Table1Sweep.name(), opts.seed);
    let labels = omega12_labels();
    let pairs: Vec<(Omega12Label, Omega12Label)> =
        (0..12).flat_map(|i| (i + 1..12).map(move |j| (labels[i], labels[j]))).collect();
    let cfg = see_saw(opts);
    let checks = pairs
        .par_iter()
        .map(|&(a, b)| sweep_pair(a, b, opts.tol, &cfg))
        .collect::<Result<Vec<_>>>()?;
    r.checks = checks;
    Ok(r)
}

pub fn quantum_limit(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::QuantumLimit.name(), opts.seed);
    let labels = omega12_labels();
    let rep = check_pairwise_set(&labels, TheoryTag::Quantum)?;
    let mut non_orthogonal = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            if labels[i].state().overlap_sq(&labels[j].state()) > 1e-12 {
                non_orthogonal.push((labels[i], labels[j]));
            }
        }
    }
    r.push(Check::count("quantum failures", rep.failures.len(), non_orthogonal.len(), "derived"));
    r.push(Check::flag("failures are exactly the non-orthogonal pairs", rep.failures == non_orthogonal, true, "derived"));

    let xx = ProductPureState::new(pauli_eigenstate(Axis::X, Sign::Plus), pauli_eigenstate(Axis::X, Sign::Plus))?;
    let zz = ProductPureState::new(pauli_eigenstate(Axis::Z, Sign::Plus), pauli_eigenstate(Axis::Z, Sign::Plus))?;
    let bound = helstrom_bound(&xx.ket(), &zz.ket())?;
    r.push(Check::real("Helstrom bound x+x+ vs z+z+", bound, 0.5 * (1.0 + 0.75f64.sqrt()), 1e-6, "derived"));

    match quantum_orthogonal_strategy(3, 12) {
        Err(Error::UnsupportedInstance(_)) => {
            r.push(Check::flag("3 qubits cannot carry 12 orthogonal messages", true, true, "counting"))
        }
        Err(e) => return Err(e),
        Ok(_) => r.push(Check::flag("3 qubits cannot carry 12 orthogonal messages", false, true, "counting")),
    }
    let s = quantum_orthogonal_strategy(4, 12)?;
    let g = play_strategy(&s, 12, opts)?;
    r.push(Check::real("4-qubit orthogonal strategy success", g.success, 1.0, 0.0, "exact"));
    Ok(r)
}

pub fn packing(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Packing.name(), opts.seed);
    for d in 1..=8 {
        let p = max_packing_construct(d)?;
        let v = is_valid_packing(&p, PACKING_TOL);
        r.push(Check::flag(&format!("construction d={d} valid"), v.valid && p.len() == 2 * d, true, "construction"));
    }
    let states: Vec<ProductPureState> = omega12_labels().iter().map(|l| l.state()).collect();
    let inst = PackingInstance::from_product_states(&states);
    r.push(Check::flag("twelve-state encoding is a valid packing in R^6", is_valid_packing(&inst, PACKING_TOL).valid, true, "derived"));
    r.push(Check::count("twelve-state packing size", inst.len(), 12, "exact"));

    let results = [1usize, 2, 3, 6]
        .par_iter()
        .map(|&d| packing_search(d, 2 * d + 1, opts.budget, opts.seed).map(|rep| (d, rep)))
        .collect::<Result<Vec<_>>>()?;
    for (d, rep) in results {
        let valid = rep.best_instance.as_ref().is_some_and(|b| is_valid_packing(b, PACKING_TOL).valid);
        r.push(Check::count(&format!("search d={d} best size"), rep.best_size, 2 * d, "packing bound"));
        r.push(Check::flag(&format!("search d={d} instance valid"), valid, true, "derived"));
    }
    Ok(r)
}

pub fn frozen(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Frozen.name(), opts.seed);
    let five = omega5_labels();
    let rep = check_pairwise_set(&five, TheoryTag::Frozen)?;
    let perfect = rep.pairs.iter().filter(|p| p.perfect).count();
    r.push(Check::count("five-state pairs perfectly discriminated", perfect, 10, "claim"));

    let mut worst = f64::INFINITY;
    for i in 0..5 {
        for j in i + 1..5 {
            for e in pair_measurement(five[i], five[j])?.effects() {
                worst = worst.min(singlet_expectation(e.op()));
            }
        }
    }
    r.push(Check::at_least("smallest singlet expectation over used effects", worst, 0.0, 1e-10, "model definition"));

    let all = check_pairwise_set(&omega12_labels(), TheoryTag::Frozen)?;
    r.push(Check::at_least("twelve-state pairs losing their measurement", all.failures.len() as f64, 1.0, 0.0, "model definition"));

    let s = frozen_strategy_5()?;
    let g = play_strategy(&s, 5, opts)?;
    r.push(Check::real("five-message game success", g.success, 1.0, 0.0, "exact"));
    r.push(Check::real("singlet is a normalized state", singlet_projector().trace(), 1.0, 1e-12, "exact"));
    Ok(r)
}

pub fn squarebit(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::SquareBit.name(), opts.seed);
    let table = square_prob_table()?;
    let flat = |t: &[[f64; 4]; 4]| t.iter().flatten().copied().collect::<Vec<f64>>();
    r.push(Check::compare(
        "probability table matches fixture",
        Value::reals(&flat(&table)),
        Value::reals(&flat(&SQUARE_PROB_FIXTURE)),
        0.0,
        "fixture",
    ));
    let es = square_effects();
    for [a, b] in square_binary_measurements() {
        let sum: Vec<f64> = (0..3).map(|k| es[a].0[k] + es[b].0[k]).collect();
        r.push(Check::compare(&format!("e{a} + e{b} = u"), Value::reals(&sum), Value::reals(&unit_effect().0), 0.0, "exact"));
    }
    let dims = square_info_dimension()?;
    r.push(Check::count("information dimension", dims.information_dimension, 4, "claim"));
    r.push(Check::count("measurement dimension", dims.measurement_dimension, 2, "claim"));
    r.push(Check::count("pairs with a witness measurement", dims.witnesses.len(), 6, "derived"));

    let (ps, pe) = (square_product_states(), square_product_effects());
    let mut separated = 0;
    for s in 0..16 {
        for t in s + 1..16 {
            let [m0, m1] = square_product_pair_measurement(s, t)?;
            let ok = (square_product_prob(&m0, &ps[s]) - 1.0).abs() <= 1e-12
                && (square_product_prob(&m1, &ps[t]) - 1.0).abs() <= 1e-12;
            separated += usize::from(ok);
        }
    }
    r.push(Check::count("product-state pairs distinguished", separated, 120, "derived"));
    let mut worst: f64 = 0.0;
    for a in 0..16 {
        for b in 0..16 {
            let f = table[a / 4][b / 4] * table[a % 4][b % 4];
            worst = worst.max((square_product_prob(&pe[a], &ps[b]) - f).abs());
        }
    }
    r.push(Check::real("product pairing factorizes", worst, 0.0, 1e-12, "derived"));

    if let Some(path) = &opts.ext_file {
        match load_square_extension(path).and_then(|ext| ext.check_consistency(opts.tol).map(|_| ext)) {
            Ok(ext) => {
                r.push(Check::flag("extension elements consistent", true, true, "data file"));
                r.push(Check::compare(
                    "extension element counts",
                    Value::List(vec![Value::int(ext.states.len()), Value::int(ext.effects.len())]),
                    Value::List(vec![Value::int(ext.states.len()), Value::int(ext.effects.len())]),
                    0.0,
                    "data file",
                ));
            }
            Err(e) => r.push(Check::failure("extension elements consistent", &e.to_string(), "data file")),
        }
    }
    Ok(r)
}

pub fn entropy_demo(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::EntropyDemo.name(), opts.seed);
    let d = entropy_ambiguity_demo()?;
    r.push(Check::compare("eigenvalues", Value::reals(&d.decomposition_b), Value::reals(&[0.75, 0.25, 0.0, 0.0]), 1e-10, "derived"));
    r.push(Check::real("entropy of the equal-weight decomposition", d.entropy_a, 1.0, 1e-9, "derived"));
    let h = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
    r.push(Check::real("entropy of the spectral decomposition", d.entropy_b, h, 1e-9, "derived"));
    r.push(Check::at_most("spectral vectors residual", d.eigenvector_residual, 0.0, 1e-10, "derived"));
    r.push(Check::flag("|00> and |++> SEP-distinguishable", d.sep_distinguishable, true, "derived"));
    r.push(Check::real("Bloch dot sum", d.arai_dot_sum, 0.0, 1e-12, "derived"));
    Ok(r)
}

pub fn block_code(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::BlockCode.name(), opts.seed);
    let k = opts.k;
    let s = sep_block_strategy(k)?;
    let n = s.message_count();
    let expected_n = (0..k).fold(1usize, |acc, _| acc * 12);
    r.push(Check::count("codewords", n, expected_n, "derived"));
    let g = run_game(
        &GameConfig { n, theory: TheoryTag::SepMin, resource_count: 2 * k, rounds: 1000, seed: opts.seed },
        &s,
    )?;
    r.push(Check::real("random questions answered", g.success, 1.0, 0.0, "exact"));

    // Smallest m with 2^m >= 12^k, by repeated doubling.
    let qubits_oracle = |k: usize| {
        let target = 12u128.pow(k as u32);
        let (mut m, mut p) = (0usize, 1u128);
        while p < target {
            p *= 2;
            m += 1;
        }
        m
    };
    let (sep, q) = sep_vs_qubit_count(k)?;
    r.push(Check::compare(
        "SEP-bits vs qubits",
        Value::List(vec![Value::int(sep), Value::int(q)]),
        Value::List(vec![Value::int(2 * k), Value::int(qubits_oracle(k))]),
        0.0,
        "derived",
    ));
    let mut identity_ok = true;
    for kk in 1..=10 {
        identity_ok &= sep_vs_qubit_count(kk)? == (2 * kk, qubits_oracle(kk));
    }
    r.push(Check::flag("qubit count identity for k = 1..10", identity_ok, true, "derived"));
    Ok(r)
}

/// Local product bases `{|s t>}` along one axis: a four-outcome measurement.
fn product_basis_measurement(axis: Axis) -> Result<Measurement> {
    let mut effects = Vec::with_capacity(4);
    for sa in [Sign::Plus, Sign::Minus] {
        for sb in [Sign::Plus, Sign::Minus] {
            let s = ProductPureState::new(pauli_eigenstate(axis, sa), pauli_eigenstate(axis, sb))?;
            effects.push(crate::cones::Effect::new_unchecked(s.density(), TheoryTag::Quantum));
        }
    }
    Measurement::new(effects, TheoryTag::Quantum)
}

/// Largest set of encoding states one measurement separates at once: the
/// number of outcomes that some encoding state triggers with certainty.
fn jointly_separated(m: &Measurement, tol: f64) -> Result<usize> {
    let mut hit = vec![false; m.len()];
    for l in omega12_labels() {
        let p = m.probabilities(&l.state().density())?;
        for (k, pk) in p.iter().enumerate() {
            if *pk >= 1.0 - tol {
                hit[k] = true;
            }
        }
    }
    Ok(hit.into_iter().filter(|&h| h).count())
}

pub fn dimension(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Dimension.name(), opts.seed);
    let labels = omega12_labels();
    let rep = check_pairwise_set(&labels, TheoryTag::SepMin)?;
    let witness = if rep.all_pairs_perfect { labels.len() } else { 0 };
    r.push(Check::at_least("information dimension witness", witness as f64, 12.0, 0.0, "pairwise sweep"));
    r.push(Check::count("measurement dimension of two SEP-bits", 4, 4, "cited constant"));

    let mut most = 0;
    for i in 0..12 {
        for j in 0..12 {
            if i != j {
                most = most.max(jointly_separated(&pair_measurement(labels[i], labels[j])?, opts.tol)?);
            }
        }
    }
    for axis in Axis::ALL {
        most = most.max(jointly_separated(&product_basis_measurement(axis)?, opts.tol)?);
    }
    r.push(Check::at_most("most encoding states separated by one constructed measurement", most as f64, 4.0, 0.0, "cited constant"));
    r.push(Check::flag("information dimension exceeds measurement dimension", witness > 4, true, "derived"));
    Ok(r)
}

fn play_strategy<S: Strategy>(s: &S, n: usize, opts: &SuiteOptions) -> Result<GameResult> {
    run_game(
        &GameConfig { n, theory: s.theory(), resource_count: s.resource_count(), rounds: opts.rounds, seed: opts.seed },
        s,
    )
}

fn game_checks(r: &mut SuiteReport, g: &GameResult) {
    r.push(Check::real("success", g.success, 1.0, 0.0, "game rule"));
    r.push(Check::count("rounds", g.rounds_played as usize, g.rounds_played as usize, "config"));
    let worst = g.per_pair.iter().map(|p| p.success).fold(1.0, f64::min);
    r.push(Check::real("worst pair success", worst, 1.0, 0.0, "game rule"));
}

pub fn play(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Play.name(), opts.seed);
    match play_named(&opts.theory, opts.n, opts.qubits, opts.rounds, opts.seed) {
        Ok(g) => game_checks(&mut r, &g),
        Err(e @ Error::UnsupportedInstance(_)) => {
            r.push(Check::failure("unsupported-instance: no perfect strategy for this instance", &e.to_string(), "game rule"))
        }
        Err(e) => return Err(e),
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        let mut names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        let sorted = {
            let mut v = names.clone();
            v.sort();
            v
        };
        assert_eq!(names, sorted);
        names.dedup();
        assert_eq!(names.len(), 10);
    }

    #[test]
    fn play_unsupported_quantum() {
        let opts = SuiteOptions { theory: "quantum".into(), qubits: Some(3), rounds: 10, ..Default::default() };
        let r = play(&opts).unwrap();
        assert!(!r.passed());
        assert!(r.checks[0].name.starts_with("unsupported-instance"));
    }

    #[test]
    fn play_rejects_bad_flags() {
        let opts = SuiteOptions { theory: "nope".into(), ..Default::default() };
        assert!(matches!(play(&opts), Err(Error::InvalidArgument(_))));
        let opts = SuiteOptions { n: 1, ..Default::default() };
        assert!(play(&opts).is_err());
    }
}
