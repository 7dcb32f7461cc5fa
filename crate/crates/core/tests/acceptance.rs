//! Acceptance criteria 1-10. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed; exits non-zero on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepgpt::cones::{base_effect, is_sep_effect, product_expectation_closed_form, BaseEffect, SeeSawConfig, TheoryTag};
use sepgpt::distinguish::{
    check_pairwise_set, entropy_ambiguity_demo, helstrom_bound, omega12_labels, omega5_labels, pair_measurement,
};
use sepgpt::game::{quantum_orthogonal_strategy, run_game, sep_block_strategy, sep_vs_qubit_count, GameConfig, Strategy};
use sepgpt::operator::{BlochVector, HermitianOperator};
use sepgpt::packing::{max_packing_construct, packing_search, to_packing_vector};
use sepgpt::report::serialize;
use sepgpt::squarebit::{
    square_info_dimension, square_product_effects, square_product_pair_measurement, square_product_prob,
    square_product_states, square_prob_table,
};
use sepgpt::suites::{dimension, run_suite, table1_sweep, Suite, SuiteOptions};
use sepgpt::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

// Independent dense helpers on row-major 4x4 complex arrays.
type M4 = [[C; 4]; 4];

fn kron2(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> M4 {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

fn lincomb(terms: &[(f64, M4)]) -> M4 {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for (c, t) in terms {
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += t[i][j] * *c;
            }
        }
    }
    m
}

fn to_m4(h: &HermitianOperator) -> M4 {
    let mut m = [[C::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = h.entry(i, j);
        }
    }
    m
}

fn expect(m: &M4, psi: &[C; 4]) -> f64 {
    let mut acc = C::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += psi[i].conj() * m[i][j] * psi[j];
        }
    }
    acc.re
}

/// `(cos t/2, e^{i p} sin t/2)` from a unit Bloch vector.
fn qubit_ket(n: [f64; 3]) -> [C; 2] {
    let t = n[2].clamp(-1.0, 1.0).acos();
    let p = n[1].atan2(n[0]);
    [C::new((t / 2.0).cos(), 0.0), C::from_polar((t / 2.0).sin(), p)]
}

fn product_ket(a: [f64; 3], b: [f64; 3]) -> [C; 4] {
    let (x, y) = (qubit_ket(a), qubit_ket(b));
    [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn sample_min(m: &M4, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| expect(m, &product_ket(random_unit(&mut rng), random_unit(&mut rng))))
        .fold(f64::INFINITY, f64::min)
}

fn timed(limit: Duration, start: Instant) -> Result<(), String> {
    let el = start.elapsed();
    ensure(el < limit, format!("took {el:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let id = [[l, o], [o, l]];
    let x = [[o, l], [l, o]];
    let z = [[l, o], [o, -l]];
    let e1_oracle = lincomb(&[(0.5, kron2(id, id)), (0.5, kron2(x, x)), (-0.5, kron2(z, z))]);
    let e2_oracle = lincomb(&[(0.5, kron2(id, id)), (-0.5, kron2(x, x)), (0.5, kron2(z, z))]);
    let (e1, e2) = (to_m4(&base_effect(BaseEffect::E1)), to_m4(&base_effect(BaseEffect::E2)));
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((e1[i][j] - e1_oracle[i][j]).norm()).max((e2[i][j] - e2_oracle[i][j]).norm());
            let id_ij = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((e1[i][j] + e2[i][j] - C::new(id_ij, 0.0)).norm());
        }
    }
    ensure(worst <= 1e-12, format!("E1/E2 entries or sum off by {worst:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut diff, mut lo, mut hi) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
        let psi = product_ket(a, b);
        let (na, nb) = (BlochVector::pure(a).map_err(e)?, BlochVector::pure(b).map_err(e)?);
        for (which, m) in [(BaseEffect::E1, &e1), (BaseEffect::E2, &e2)] {
            let numeric = expect(m, &psi);
            diff = diff.max((product_expectation_closed_form(which, &na, &nb) - numeric).abs());
            lo = lo.min(numeric);
            hi = hi.max(numeric);
        }
    }
    ensure(diff <= 1e-12, format!("closed form differs by {diff:e}"))?;
    ensure(lo >= -1e-12 && hi <= 1.0 + 1e-12, format!("values span [{lo}, {hi}]"))?;
    let cfg = SeeSawConfig::default();
    for w in [BaseEffect::E1, BaseEffect::E2] {
        let v = is_sep_effect(&base_effect(w), &cfg).map_err(e)?;
        ensure(v.accepted && v.min_value >= -1e-10, format!("{w:?} see-saw minimum {}", v.min_value))?;
    }
    timed(Duration::from_secs(1), start)?;
    Ok(format!("closed-form diff {diff:.1e}, range [{lo:.3}, {hi:.3}], {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let labels = omega12_labels();
    let mut checked = 0;
    for i in 0..12 {
        for j in i + 1..12 {
            let (a, b) = (labels[i], labels[j]);
            let m = pair_measurement(a, b).map_err(e)?;
            let (ka, kb) = (a.state(), b.state());
            let psi_a = product_ket(ka.a.components(), ka.b.components());
            let psi_b = product_ket(kb.a.components(), kb.b.components());
            let (f0, f1) = (to_m4(m.effects()[0].op()), to_m4(m.effects()[1].op()));
            let probs = [expect(&f0, &psi_a), expect(&f1, &psi_a), expect(&f0, &psi_b), expect(&f1, &psi_b)];
            let want = [1.0, 0.0, 0.0, 1.0];
            for (p, w) in probs.iter().zip(want) {
                ensure((p - w).abs() <= 1e-9, format!("{a} vs {b}: probabilities {probs:?}"))?;
            }
            for f in [&f0, &f1] {
                let s = sample_min(f, 2000, (i * 12 + j) as u64);
                ensure(s >= -1e-10, format!("{a} vs {b}: sampled product expectation {s}"))?;
            }
            checked += 1;
        }
    }
    ensure(checked == 66, format!("{checked} pairs"))?;
    let sweep = table1_sweep(&SuiteOptions::default()).map_err(e)?;
    ensure(sweep.checks.len() == 66 && sweep.passed(), "library sweep reports a failure")?;
    timed(Duration::from_secs(5), start)?;
    Ok(format!("66/66 pairs perfect, all effects block-positive, {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let labels = omega12_labels();
    let rep = check_pairwise_set(&labels, TheoryTag::Quantum).map_err(e)?;
    let mut oracle = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            let (s, t) = (labels[i].state(), labels[j].state());
            let ov = (1.0 + s.a.dot(&t.a)) / 2.0 * (1.0 + s.b.dot(&t.b)) / 2.0;
            if ov > 1e-12 {
                oracle.push((labels[i], labels[j]));
            }
        }
    }
    ensure(rep.failures == oracle, format!("{} failures vs {} non-orthogonal pairs", rep.failures.len(), oracle.len()))?;
    let xx = labels.iter().find(|l| l.to_string() == "x+x+").unwrap().state();
    let zz = labels.iter().find(|l| l.to_string() == "z+z+").unwrap().state();
    let hb = helstrom_bound(&xx.ket(), &zz.ket()).map_err(e)?;
    ensure((hb - 0.933013).abs() <= 1e-6, format!("Helstrom bound {hb}"))?;
    ensure(
        matches!(quantum_orthogonal_strategy(3, 12), Err(Error::UnsupportedInstance(_))),
        "3 qubits accepted for 12 messages",
    )?;
    let s = quantum_orthogonal_strategy(4, 12).map_err(e)?;
    let g = run_game(&GameConfig { n: 12, theory: TheoryTag::Quantum, resource_count: 4, rounds: 10_000, seed: 42 }, &s)
        .map_err(e)?;
    ensure(g.success == 1.0, format!("4-qubit success {}", g.success))?;
    Ok(format!("{} quantum failures, Helstrom {hb:.6}", oracle.len()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let nonpositive = |vs: &[Vec<f64>]| {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                worst = worst.max(vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum());
            }
        }
        worst
    };
    for d in 1..=8 {
        let p = max_packing_construct(d).map_err(e)?;
        let w = nonpositive(p.vectors());
        ensure(p.len() == 2 * d && w <= 1e-9, format!("construction d={d}: size {}, worst dot {w}", p.len()))?;
    }
    let twelve: Vec<Vec<f64>> = omega12_labels().iter().map(|l| to_packing_vector(&l.state()).to_vec()).collect();
    ensure(nonpositive(&twelve) <= 1e-9, "twelve-state packing has a positive dot")?;
    let mut sizes = Vec::new();
    for d in [1usize, 2, 3, 6] {
        let r = packing_search(d, 2 * d + 1, 1_000_000, 42).map_err(e)?;
        let inst = r.best_instance.ok_or("no instance")?;
        let norms_ok = inst.vectors().iter().all(|v| (v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-9);
        ensure(r.best_size == 2 * d, format!("d={d}: best size {}", r.best_size))?;
        ensure(norms_ok && nonpositive(inst.vectors()) <= 1e-9, format!("d={d}: invalid instance"))?;
        sizes.push(r.best_size);
    }
    timed(Duration::from_secs(60), start)?;
    Ok(format!("search sizes {sizes:?} for d = [1, 2, 3, 6], {:?}", start.elapsed()))
}

fn criterion_5() -> Outcome {
    let s = sep_block_strategy(2).map_err(e)?;
    ensure(s.message_count() == 144, format!("{} codewords", s.message_count()))?;
    let g = run_game(&GameConfig { n: 144, theory: TheoryTag::SepMin, resource_count: 4, rounds: 1000, seed: 42 }, &s)
        .map_err(e)?;
    ensure(g.success == 1.0, format!("block success {}", g.success))?;
    ensure(sep_vs_qubit_count(2).map_err(e)? == (4, 8), "k=2 counts")?;
    for k in 1..=10usize {
        // ceil(log2 12^k) by counting bits of 12^k - 1.
        let v = 12u128.pow(k as u32) - 1;
        let exact = 128 - v.leading_zeros() as usize;
        let formula = 2 * k + (k as f64 * 3f64.log2()).ceil() as usize;
        ensure(exact == formula, format!("identity fails at k={k}"))?;
        ensure(sep_vs_qubit_count(k).map_err(e)? == (2 * k, exact), format!("counts at k={k}"))?;
    }
    Ok("144 codewords, success 1.0, (4, 8), identity k=1..10".into())
}

fn criterion_6() -> Outcome {
    let d = entropy_ambiguity_demo().map_err(e)?;
    // |<00|++>|^2 = 1/4, so the eigenvalues are (1 +- 1/2) / 2.
    let want = [0.75, 0.25, 0.0, 0.0];
    for (x, w) in d.decomposition_b.iter().zip(want) {
        ensure((x - w).abs() <= 1e-10, format!("eigenvalues {:?}", d.decomposition_b))?;
    }
    ensure((d.entropy_a - 1.0).abs() <= 1e-9, format!("entropy {}", d.entropy_a))?;
    ensure((d.entropy_b - 0.811278124459).abs() <= 1e-9, format!("entropy {}", d.entropy_b))?;
    ensure(d.sep_distinguishable && d.arai_dot_sum.abs() <= 1e-12, "Arai criterion on |00>, |++>")?;
    Ok(format!("entropies {:.12} and {:.12}", d.entropy_a, d.entropy_b))
}

fn criterion_7() -> Outcome {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = [C::new(0.0, 0.0), C::new(s, 0.0), C::new(-s, 0.0), C::new(0.0, 0.0)];
    let five = omega5_labels();
    let mut worst = f64::INFINITY;
    for i in 0..5 {
        for j in i + 1..5 {
            for f in pair_measurement(five[i], five[j]).map_err(e)?.effects() {
                worst = worst.min(expect(&to_m4(f.op()), &singlet));
            }
        }
    }
    ensure(worst >= -1e-10, format!("singlet expectation {worst}"))?;
    let rep = check_pairwise_set(&five, TheoryTag::Frozen).map_err(e)?;
    ensure(rep.pairs.len() == 10 && rep.all_pairs_perfect, format!("failures {:?}", rep.failures))?;
    Ok(format!("10/10 pairs, smallest singlet expectation {worst:.3}"))
}

fn criterion_8() -> Outcome {
    let fixture = [[1.0, 1.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [0.0, 0.0, 1.0, 1.0], [1.0, 0.0, 0.0, 1.0]];
    let t = square_prob_table().map_err(e)?;
    ensure(t == fixture, format!("table {t:?}"))?;
    let dims = square_info_dimension().map_err(e)?;
    ensure(dims.information_dimension == 4 && dims.witnesses.len() == 6, "information dimension")?;
    let used: std::collections::BTreeSet<(usize, usize)> =
        dims.witnesses.iter().map(|w| (w.effects.0.min(w.effects.1), w.effects.0.max(w.effects.1))).collect();
    ensure(used.iter().all(|p| *p == (0, 2) || *p == (1, 3)), format!("witnesses use {used:?}"))?;
    let (ps, pe) = (square_product_states(), square_product_effects());
    for a in 0..16 {
        for b in a + 1..16 {
            let [m0, m1] = square_product_pair_measurement(a, b).map_err(e)?;
            ensure(
                square_product_prob(&m0, &ps[a]) == 1.0 && square_product_prob(&m1, &ps[b]) == 1.0,
                format!("product pair ({a}, {b})"),
            )?;
        }
    }
    let mut worst: f64 = 0.0;
    for a in 0..16 {
        for b in 0..16 {
            let f = fixture[a / 4][b / 4] * fixture[a % 4][b % 4];
            worst = worst.max((square_product_prob(&pe[a], &ps[b]) - f).abs());
        }
    }
    ensure(worst <= 1e-12, format!("factorization error {worst:e}"))?;
    Ok("fixture matches, dimension 4, 120/120 product pairs".into())
}

fn criterion_9() -> Outcome {
    let r = dimension(&SuiteOptions::default()).map_err(e)?;
    ensure(r.passed(), format!("failed: {:?}", r.failed_checks().map(|c| &c.name).collect::<Vec<_>>()))?;
    let get = |name: &str| r.checks.iter().find(|c| c.name == name).map(|c| c.measured.clone());
    let witness = get("information dimension witness").ok_or("missing witness")?;
    let most = get("most encoding states separated by one constructed measurement").ok_or("missing weak check")?;
    Ok(format!("information witness {witness:?} vs measurement dimension 4; one measurement separates at most {most:?}"))
}

fn criterion_10() -> Outcome {
    let opts = SuiteOptions { rounds: 2000, ..SuiteOptions::default() };
    for s in Suite::ALL {
        let a = serialize(&run_suite(s, &opts).map_err(e)?).map_err(e)?;
        let b = serialize(&run_suite(s, &opts).map_err(e)?).map_err(e)?;
        ensure(a == b, format!("{} differs between runs", s.name()))?;
    }
    let other = SuiteOptions { seed: 7, ..opts.clone() };
    let a = serialize(&run_suite(Suite::Play, &other).map_err(e)?).map_err(e)?;
    let b = serialize(&run_suite(Suite::Play, &other).map_err(e)?).map_err(e)?;
    ensure(a == b, "play with seed 7 differs between runs")?;
    Ok(format!("{} suites byte-identical", Suite::ALL.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("base measurement", criterion_1),
        ("pair table sweep", criterion_2),
        ("quantum limit", criterion_3),
        ("packing bound", criterion_4),
        ("block codewords", criterion_5),
        ("entropy ambiguity", criterion_6),
        ("frozen model", criterion_7),
        ("square bit", criterion_8),
        ("dimension mismatch", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
