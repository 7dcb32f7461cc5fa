//! Pairwise discrimination of two-qubit product states.
//!
//! Orthogonal pairs use a projective quantum measurement. Non-orthogonal
//! pairs of the twelve-state encoding use the embedded pair table; arbitrary
//! pure product pairs satisfying the Arai criterion use a closed-form
//! block-positive effect built in a frame adapted to the pair.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cones::{base_effect, frozen_effect_filter, BaseEffect, Effect, TheoryTag};
use crate::error::{invalid, Error, Result};
use crate::operator::{
    conjugate, eigh, pauli_eigenstate, Axis, BlochVector, HermitianOperator, ProductPureState, Sign, C64,
};
use crate::table1::{self, Table1Cell};

/// Tolerance on outcome probabilities for "perfect" discrimination.
pub const PERFECT_TOL: f64 = 1e-9;

/// Completeness tolerance: effects must sum to the identity this closely.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// A finite list of effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    effects: Vec<Effect>,
    theory: TheoryTag,
}

impl Measurement {
    pub fn new(effects: Vec<Effect>, theory: TheoryTag) -> Result<Self> {
        if effects.is_empty() {
            return invalid("a measurement needs at least one effect");
        }
        let dim = effects[0].op().dim();
        let mut sum = HermitianOperator::zeros(dim)?;
        for e in &effects {
            sum = sum.add(e.op())?;
        }
        let defect = sum.max_abs_diff(&HermitianOperator::identity(dim)?);
        if defect > COMPLETENESS_TOL {
            return invalid(format!("effects do not sum to the identity (defect {defect:e})"));
        }
        Ok(Self { effects, theory })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn theory(&self) -> TheoryTag {
        self.theory
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome distribution on a state.
    pub fn probabilities(&self, state: &HermitianOperator) -> Result<Vec<f64>> {
        self.effects.iter().map(|e| e.prob(state)).collect()
    }

    fn swapped(mut self) -> Self {
        self.effects.swap(0, 1);
        self
    }
}

/// One of the twelve encoding states `|k s_A> (x) |k s_B>` with a shared
/// Pauli axis `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Omega12Label {
    pub axis: Axis,
    pub sign_a: Sign,
    pub sign_b: Sign,
}

impl Omega12Label {
    pub fn new(axis: Axis, sign_a: Sign, sign_b: Sign) -> Self {
        Self { axis, sign_a, sign_b }
    }

    pub fn state(&self) -> ProductPureState {
        ProductPureState::new(
            pauli_eigenstate(self.axis, self.sign_a),
            pauli_eigenstate(self.axis, self.sign_b),
        )
        .expect("Pauli eigenstates are pure")
    }

    fn key(&self) -> (Axis, Sign, Sign) {
        (self.axis, self.sign_a, self.sign_b)
    }

    /// Position in [`omega12_labels`].
    pub fn index(&self) -> usize {
        omega12_labels().iter().position(|l| l == self).expect("all labels enumerated")
    }
}

impl fmt::Display for Omega12Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: Sign| if x == Sign::Plus { '+' } else { '-' };
        let k = self.axis.letter();
        write!(f, "{k}{}{k}{}", s(self.sign_a), s(self.sign_b))
    }
}

/// The twelve labels, ordered x, y, z and within an axis `++, +-, -+, --`.
pub fn omega12_labels() -> [Omega12Label; 12] {
    let signs = [
        (Sign::Plus, Sign::Plus),
        (Sign::Plus, Sign::Minus),
        (Sign::Minus, Sign::Plus),
        (Sign::Minus, Sign::Minus),
    ];
    let mut out = [Omega12Label::new(Axis::X, Sign::Plus, Sign::Plus); 12];
    for (ai, axis) in Axis::ALL.iter().enumerate() {
        for (si, (a, b)) in signs.iter().enumerate() {
            out[4 * ai + si] = Omega12Label::new(*axis, *a, *b);
        }
    }
    out
}

/// The twelve encoding states keyed by label.
pub fn omega12() -> Vec<(Omega12Label, ProductPureState)> {
    omega12_labels().iter().map(|l| (*l, l.state())).collect()
}

/// The five-state subset `{xx, yy, y-y-, zz, z-z-}` used in the frozen model.
pub fn omega5_labels() -> [Omega12Label; 5] {
    [
        Omega12Label::new(Axis::X, Sign::Plus, Sign::Plus),
        Omega12Label::new(Axis::Y, Sign::Plus, Sign::Plus),
        Omega12Label::new(Axis::Y, Sign::Minus, Sign::Minus),
        Omega12Label::new(Axis::Z, Sign::Plus, Sign::Plus),
        Omega12Label::new(Axis::Z, Sign::Minus, Sign::Minus),
    ]
}

/// `a1 . a2 + b1 . b2`.
pub fn arai_dot_sum(s1: &ProductPureState, s2: &ProductPureState) -> f64 {
    s1.a.dot(&s2.a) + s1.b.dot(&s2.b)
}

/// Two pure product states are perfectly distinguishable in SEP iff the
/// Bloch dot products of their factors sum to at most zero.
pub fn arai_criterion(s1: &ProductPureState, s2: &ProductPureState, tol: f64) -> bool {
    arai_dot_sum(s1, s2) <= tol
}

fn projective_pair(s1: &ProductPureState, theory: TheoryTag) -> Measurement {
    let p = HermitianOperator::projector(&s1.ket()).expect("dim 4");
    let rest = HermitianOperator::identity(4).expect("dim 4").sub(&p).expect("dim 4");
    Measurement::new(
        vec![Effect::new_unchecked(p, theory), Effect::new_unchecked(rest, theory)],
        theory,
    )
    .expect("projector and complement sum to I")
}

/// Orders a two-outcome measurement so outcome 0 fires on `s1`.
fn orient(m: Measurement, s1: &ProductPureState) -> Measurement {
    let rho = s1.density();
    let p0 = m.effects[0].prob(&rho).unwrap_or(0.0);
    let p1 = m.effects[1].prob(&rho).unwrap_or(0.0);
    if p1 > p0 {
        m.swapped()
    } else {
        m
    }
}

/// The table measurement for an ordered pair of encoding states; outcome 0
/// identifies `s1`, outcome 1 identifies `s2`.
pub fn pair_measurement(s1: Omega12Label, s2: Omega12Label) -> Result<Measurement> {
    match table1::lookup(s1.key(), s2.key()) {
        Table1Cell::NotApplicable => invalid(format!("identical states {s1} and {s2} form no question")),
        Table1Cell::QuantumDistinguishable => Ok(projective_pair(&s1.state(), TheoryTag::Quantum)),
        Table1Cell::Conjugate(cell) => {
            let w = cell.operator();
            let effects = [BaseEffect::E1, BaseEffect::E2]
                .iter()
                .map(|&b| Ok(Effect::new_unchecked(conjugate(&base_effect(b), &w)?, TheoryTag::SepMin)))
                .collect::<Result<Vec<_>>>()?;
            let m = Measurement::new(effects, TheoryTag::SepMin)?;
            Ok(orient(m, &s1.state()))
        }
    }
}

fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn half_norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() / 2.0
}

fn unit(v: &[f64; 3]) -> [f64; 3] {
    let n = 2.0 * half_norm(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// A perfect SEP discriminating measurement for any pure product pair that
/// satisfies the Arai criterion; outcome 0 identifies `s1`.
///
/// Orthogonal pairs get a projective measurement. Otherwise each factor's
/// pair of Bloch vectors is placed symmetrically about a local z-axis,
/// `n1 = (p, 0, c)`, `n2 = (-p, 0, c)`, and the effect is
/// `(1 + h) / 2` with
/// `h(n, m) = r n_x + u n_x m_z + v n_z m_x`,
/// `r = (q^2 - c_a^2) / (q^2 p)`, `u = c_a^2 c_b / (q^2 p)`, `v = c_a / q`
/// (subsystem A has `(p, c_a)`, B has `(q, c_b)`). `h` is odd under the
/// reflection exchanging the two states, equals 1 on `s1`, and stays in
/// `[-1, 1]` on all product states whenever `c_a^2 + c_b^2 <= 1`.
pub fn arai_measurement(s1: &ProductPureState, s2: &ProductPureState, tol: f64) -> Result<Measurement> {
    if s1.overlap_sq(s2) <= 1e-24 {
        return Ok(projective_pair(s1, TheoryTag::Quantum));
    }
    if !arai_criterion(s1, s2, tol) {
        return Err(Error::UnsupportedInstance(format!(
            "pair violates the Arai criterion (dot sum {:.6})",
            arai_dot_sum(s1, s2)
        )));
    }
    let (a1, a2) = (s1.a.components(), s2.a.components());
    let (b1, b2) = (s1.b.components(), s2.b.components());
    let (da, sa) = (sub3(&a1, &a2), add3(&a1, &a2));
    let (db, sb) = (sub3(&b1, &b2), add3(&b1, &b2));
    let (p, ca, q, cb) = (half_norm(&da), half_norm(&sa), half_norm(&db), half_norm(&sb));
    // Non-orthogonal pairs passing the criterion have both factors distinct
    // and non-antipodal, so all four half-chords are positive.
    if p <= 0.0 || q <= 0.0 || ca <= 0.0 || cb <= 0.0 {
        return Err(Error::InconsistentModel("degenerate pair frame".into()));
    }
    let (exa, eza, exb, ezb) = (unit(&da), unit(&sa), unit(&db), unit(&sb));
    let r = (q * q - ca * ca).max(0.0) / (q * q * p);
    let u = ca * ca * cb / (q * q * p);
    let v = ca / q;

    let local_a = [0.5 * r * exa[0], 0.5 * r * exa[1], 0.5 * r * exa[2]];
    let mut corr = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            corr[i][j] = 0.5 * (u * exa[i] * ezb[j] + v * eza[i] * exb[j]);
        }
    }
    let e = HermitianOperator::from_pauli_expansion(0.5, local_a, [0.0; 3], corr);
    let rest = HermitianOperator::identity(4)?.sub(&e)?;
    Measurement::new(
        vec![Effect::new_unchecked(e, TheoryTag::SepMin), Effect::new_unchecked(rest, TheoryTag::SepMin)],
        TheoryTag::SepMin,
    )
}

/// Optimal two-outcome quantum measurement for equiprobable pure states:
/// projector onto the positive part of `|psi1><psi1| - |psi2><psi2|`.
pub fn helstrom_measurement(psi1: &[C64], psi2: &[C64]) -> Result<Measurement> {
    let diff = HermitianOperator::projector(psi1)?.sub(&HermitianOperator::projector(psi2)?)?;
    let dim = diff.dim();
    let eig = eigh(&diff);
    let mut p = DMatrix::<C64>::zeros(dim, dim);
    for (lam, v) in eig.values.iter().zip(&eig.vectors) {
        if *lam > 1e-12 {
            let col = nalgebra::DVector::from_column_slice(v);
            p += &col * col.adjoint();
        }
    }
    let p = HermitianOperator::symmetrized(p);
    let rest = HermitianOperator::identity(dim)?.sub(&p)?;
    Measurement::new(
        vec![Effect::new_unchecked(p, TheoryTag::Quantum), Effect::new_unchecked(rest, TheoryTag::Quantum)],
        TheoryTag::Quantum,
    )
}

/// `(1 + sqrt(1 - |<psi1|psi2>|^2)) / 2` for normalized kets.
pub fn helstrom_bound(psi1: &[C64], psi2: &[C64]) -> Result<f64> {
    if psi1.len() != psi2.len() {
        return invalid("kets of different dimension");
    }
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if (norm(psi1) - 1.0).abs() > 1e-9 || (norm(psi2) - 1.0).abs() > 1e-9 {
        return invalid("helstrom_bound expects normalized kets");
    }
    let inner: C64 = psi1.iter().zip(psi2).map(|(a, b)| a.conj() * b).sum();
    let ov = inner.norm_sqr().min(1.0);
    Ok(0.5 * (1.0 + (1.0 - ov).sqrt()))
}

/// Helstrom value for two pure product states.
pub fn helstrom_bound_product(s1: &ProductPureState, s2: &ProductPureState) -> f64 {
    0.5 * (1.0 + (1.0 - s1.overlap_sq(s2).min(1.0)).sqrt())
}

/// Result of checking one measurement on one ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationReport {
    pub pair: (HermitianOperator, HermitianOperator),
    pub measurement: Measurement,
    /// Probability of outcome 0 on the first state.
    pub p_correct_1: f64,
    /// Probability of outcome 1 on the second state.
    pub p_correct_2: f64,
    pub perfect: bool,
}

/// Checks that outcome 0 fires with certainty on `s1` and outcome 1 on `s2`.
pub fn verify_perfect_discrimination(
    m: &Measurement,
    s1: &HermitianOperator,
    s2: &HermitianOperator,
    tol: f64,
) -> Result<DiscriminationReport> {
    if m.len() != 2 {
        return invalid(format!("expected a two-outcome measurement, got {} outcomes", m.len()));
    }
    let dim = s1.dim();
    let mut sum = HermitianOperator::zeros(dim)?;
    for e in m.effects() {
        sum = sum.add(e.op())?;
    }
    if sum.max_abs_diff(&HermitianOperator::identity(dim)?) > COMPLETENESS_TOL {
        return invalid("measurement is incomplete");
    }
    let p_correct_1 = m.effects()[0].prob(s1)?;
    let p_correct_2 = m.effects()[1].prob(s2)?;
    Ok(DiscriminationReport {
        pair: (s1.clone(), s2.clone()),
        measurement: m.clone(),
        p_correct_1,
        p_correct_2,
        perfect: p_correct_1 >= 1.0 - tol && p_correct_2 >= 1.0 - tol,
    })
}

/// Verdict for a single unordered pair in a set check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub first: Omega12Label,
    pub second: Omega12Label,
    pub p_correct_1: f64,
    pub p_correct_2: f64,
    pub perfect: bool,
    /// Why the pair failed, when it did.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub theory: TheoryTag,
    pub pairs: Vec<PairOutcome>,
    pub all_pairs_perfect: bool,
    pub failures: Vec<(Omega12Label, Omega12Label)>,
}

fn check_pair(s1: Omega12Label, s2: Omega12Label, theory: TheoryTag) -> Result<PairOutcome> {
    let (r1, r2) = (s1.state().density(), s2.state().density());
    let outcome = |p1: f64, p2: f64, reason: Option<String>| PairOutcome {
        first: s1,
        second: s2,
        p_correct_1: p1,
        p_correct_2: p2,
        perfect: reason.is_none() && p1 >= 1.0 - PERFECT_TOL && p2 >= 1.0 - PERFECT_TOL,
        reason,
    };
    match theory {
        TheoryTag::SepMin | TheoryTag::Frozen => {
            let m = pair_measurement(s1, s2)?;
            if theory == TheoryTag::Frozen {
                if let Some(bad) = m.effects().iter().find(|e| !frozen_effect_filter(e, 1e-10)) {
                    let v = crate::cones::singlet_expectation(bad.op());
                    return Ok(outcome(0.0, 0.0, Some(format!("effect removed in frozen model (<psi-|E|psi-> = {v:.3})"))));
                }
            }
            let rep = verify_perfect_discrimination(&m, &r1, &r2, PERFECT_TOL)?;
            let reason = (!rep.perfect).then(|| "constructed measurement is not perfect".to_string());
            Ok(outcome(rep.p_correct_1, rep.p_correct_2, reason))
        }
        TheoryTag::Quantum | TheoryTag::SepMax => {
            // Perfect quantum (or separable-effect) discrimination of pure
            // states requires orthogonality; the Helstrom measurement is optimal.
            let (k1, k2) = (s1.state().ket(), s2.state().ket());
            let m = helstrom_measurement(&k1, &k2)?;
            let rep = verify_perfect_discrimination(&m, &r1, &r2, PERFECT_TOL)?;
            let reason = (!rep.perfect).then(|| {
                format!("non-orthogonal pair (overlap^2 = {:.4})", s1.state().overlap_sq(&s2.state()))
            });
            Ok(outcome(rep.p_correct_1, rep.p_correct_2, reason))
        }
        TheoryTag::SquarePR => invalid("square-bit theory does not act on qubit encodings"),
    }
}

/// Checks every unordered pair of `states` for perfect discrimination under
/// `theory`, using the constructed measurements only.
pub fn check_pairwise_set(states: &[Omega12Label], theory: TheoryTag) -> Result<PairwiseReport> {
    if states.len() < 2 {
        return invalid("need at least two states");
    }
    let mut pairs = Vec::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            pairs.push(check_pair(states[i], states[j], theory)?);
        }
    }
    let failures: Vec<_> = pairs.iter().filter(|p| !p.perfect).map(|p| (p.first, p.second)).collect();
    Ok(PairwiseReport { theory, all_pairs_perfect: failures.is_empty(), failures, pairs })
}

/// Base-2 Shannon entropy with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|&x| !(x >= 0.0)) {
        return invalid("probabilities must be non-negative");
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return invalid(format!("probabilities sum to {total}, not 1"));
    }
    Ok(-p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>())
}

/// Two decompositions of `rho = (|00><00| + |++><++|) / 2` into perfectly
/// distinguishable (in SEP) pure states, with different entropies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyDemo {
    pub decomposition_a: Vec<f64>,
    pub decomposition_b: Vec<f64>,
    pub entropy_a: f64,
    pub entropy_b: f64,
    /// Largest `1 - |<psi_k|v_k>|` between the stated spectral vectors and the
    /// computed eigenvectors of the two nonzero eigenvalues.
    pub eigenvector_residual: f64,
    pub arai_dot_sum: f64,
    pub sep_distinguishable: bool,
}

pub fn entropy_ambiguity_demo() -> Result<EntropyDemo> {
    let zz = ProductPureState::new(pauli_eigenstate(Axis::Z, Sign::Plus), pauli_eigenstate(Axis::Z, Sign::Plus))?;
    let xx = ProductPureState::new(pauli_eigenstate(Axis::X, Sign::Plus), pauli_eigenstate(Axis::X, Sign::Plus))?;
    let rho = zz.density().scale(0.5).add(&xx.density().scale(0.5))?;
    let eig = eigh(&rho);

    let r = |x: f64| C64::new(x, 0.0);
    let s12 = 1.0 / 12f64.sqrt();
    let psi1 = [r(3.0 * s12), r(s12), r(s12), r(s12)];
    let psi2 = [r(-0.5), r(0.5), r(0.5), r(0.5)];
    let mut residual: f64 = 0.0;
    for (k, psi) in [psi1, psi2].iter().enumerate() {
        let inner: C64 = psi.iter().zip(&eig.vectors[k]).map(|(a, b)| a.conj() * b).sum();
        residual = residual.max((1.0 - inner.norm()).abs());
    }

    let decomposition_a = vec![0.5, 0.5, 0.0, 0.0];
    let decomposition_b: Vec<f64> = eig.values.iter().map(|v| if v.abs() < 1e-14 { 0.0 } else { *v }).collect();
    let entropy_a = shannon_entropy(&decomposition_a)?;
    let entropy_b = shannon_entropy(&decomposition_b)?;
    Ok(EntropyDemo {
        decomposition_a,
        decomposition_b,
        entropy_a,
        entropy_b,
        eigenvector_residual: residual,
        arai_dot_sum: arai_dot_sum(&zz, &xx),
        sep_distinguishable: arai_criterion(&zz, &xx, 1e-12),
    })
}

/// Builds a product pure state from two raw unit Bloch vectors.
pub fn product_state(a: [f64; 3], b: [f64; 3]) -> Result<ProductPureState> {
    ProductPureState::new(BlochVector::pure(a)?, BlochVector::pure(b)?)
}
