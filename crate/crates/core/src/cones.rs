//! State and effect cones of the two-qubit compositions.
//!
//! Quantum membership is exact (spectral). SEP effect membership (block
//! positivity) is certified by a multi-start see-saw minimization of
//! `<a (x) b| E |a (x) b>`: a negative value comes with a product witness and
//! is exact, a non-negative minimum is a heuristic acceptance.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distinguish::Measurement;
use crate::error::{invalid, Error, Result};
use crate::operator::{
    conjugate, eigh, BlochVector, HermitianOperator, ProductPureState, Tensor, UnitaryOperator, C64,
};

/// Composition rule in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoryTag {
    Quantum,
    /// Minimal tensor product: separable states, block-positive effects.
    SepMin,
    /// Maximal tensor product: block-positive states, separable effects.
    SepMax,
    /// SEP plus the singlet state; effects negative on the singlet removed.
    Frozen,
    /// Square-bit product composite.
    SquarePR,
}

impl TheoryTag {
    pub fn name(self) -> &'static str {
        match self {
            TheoryTag::Quantum => "quantum",
            TheoryTag::SepMin => "sep-min",
            TheoryTag::SepMax => "sep-max",
            TheoryTag::Frozen => "frozen",
            TheoryTag::SquarePR => "square-pr",
        }
    }

    /// Whether the theory lives on two qubits (4x4 operators).
    pub fn is_two_qubit(self) -> bool {
        !matches!(self, TheoryTag::SquarePR)
    }
}

impl fmt::Display for TheoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A two-qubit effect tagged with the theory it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    op: HermitianOperator,
    theory: TheoryTag,
}

impl Effect {
    /// Checks cone membership for `theory` before wrapping.
    pub fn checked(op: HermitianOperator, theory: TheoryTag, cfg: &SeeSawConfig) -> Result<Self> {
        if op.dim() != 4 {
            return invalid("two-qubit effects must be 4x4");
        }
        let tol = cfg.tol.max(1e-9);
        let ok = match theory {
            TheoryTag::Quantum => is_quantum_effect(&op, tol),
            TheoryTag::SepMin => is_sep_effect(&op, cfg)?.accepted,
            TheoryTag::Frozen => {
                is_sep_effect(&op, cfg)?.accepted && singlet_expectation(&op) >= -tol
            }
            TheoryTag::SepMax => is_ppt(&op, tol),
            TheoryTag::SquarePR => {
                return invalid("square-bit effects are not two-qubit operators");
            }
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "operator is not in the {theory} effect cone"
            )));
        }
        Ok(Self { op, theory })
    }

    /// Wraps without a membership check; callers vouch for the cone.
    pub fn new_unchecked(op: HermitianOperator, theory: TheoryTag) -> Self {
        Self { op, theory }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn theory(&self) -> TheoryTag {
        self.theory
    }

    /// Outcome probability on a (possibly mixed) state.
    pub fn prob(&self, state: &HermitianOperator) -> Result<f64> {
        self.op.pair(state)
    }
}

/// Parameters of the see-saw block-positivity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self { restarts: 64, iters: 200, tol: 1e-10, seed: 42 }
    }
}

/// Outcome of a block-positivity certification.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeVerdict {
    pub accepted: bool,
    /// Best (smallest) `Tr(E w)` found over pure product states.
    pub min_value: f64,
    /// Product state attaining `min_value`.
    pub witness: Option<ProductPureState>,
    /// Acceptance rests on a local search and is not a proof. Rejections
    /// are always exact.
    pub heuristic: bool,
}

/// Positive semidefinite with unit trace, both to within `tol`.
pub fn is_quantum_state(h: &HermitianOperator, tol: f64) -> bool {
    h.min_eigenvalue() >= -tol && (h.trace() - 1.0).abs() <= tol
}

/// `0 <= E <= I`.
pub fn is_quantum_effect(e: &HermitianOperator, tol: f64) -> bool {
    let eigs = eigh(e).values;
    eigs.last().is_some_and(|&v| v >= -tol) && eigs.first().is_some_and(|&v| v <= 1.0 + tol)
}

/// Partial transpose on subsystem B of a 4x4 operator.
pub fn partial_transpose(e: &HermitianOperator) -> HermitianOperator {
    let m = e.matrix();
    let mut out = DMatrix::<C64>::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = m[(2 * i + l, 2 * k + j)];
                }
            }
        }
    }
    HermitianOperator::symmetrized(out)
}

/// Positive with positive partial transpose; for two qubits this is
/// exactly membership in the separable cone.
pub fn is_ppt(e: &HermitianOperator, tol: f64) -> bool {
    e.min_eigenvalue() >= -tol && partial_transpose(e).min_eigenvalue() >= -tol
}

/// The two effects of the base SEP measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseEffect {
    E1,
    E2,
}

/// `Tr(E_i w_nm)` on `w_nm = rho(n) (x) rho(m)`:
/// `(1 + n1 m1 - n3 m3) / 2` for `E1`, `(1 - n1 m1 + n3 m3) / 2` for `E2`.
pub fn product_expectation_closed_form(which: BaseEffect, n: &BlochVector, m: &BlochVector) -> f64 {
    let [n1, _, n3] = n.components();
    let [m1, _, m3] = m.components();
    let corr = n1 * m1 - n3 * m3;
    match which {
        BaseEffect::E1 => (1.0 + corr) / 2.0,
        BaseEffect::E2 => (1.0 - corr) / 2.0,
    }
}

/// Explicit matrix of `E1` or `E2`.
pub fn base_effect(which: BaseEffect) -> HermitianOperator {
    let h = 0.5;
    let e1 = [
        0., 0., 0., h, //
        0., 1., h, 0., //
        0., h, 1., 0., //
        h, 0., 0., 0.,
    ];
    let e2 = [
        1., 0., 0., -h, //
        0., 0., -h, 0., //
        0., -h, 0., 0., //
        -h, 0., 0., 1.,
    ];
    let entries = match which {
        BaseEffect::E1 => e1,
        BaseEffect::E2 => e2,
    };
    HermitianOperator::from_real(4, &entries).expect("base effects are Hermitian")
}

/// `{E1, E2}` as a SEP measurement.
pub fn base_measurement() -> Measurement {
    let effects = [BaseEffect::E1, BaseEffect::E2]
        .map(|w| Effect::new_unchecked(base_effect(w), TheoryTag::SepMin))
        .to_vec();
    Measurement::new(effects, TheoryTag::SepMin).expect("E1 + E2 = I")
}

fn random_ket(rng: &mut ChaCha8Rng) -> [C64; 2] {
    let mut v = [C64::new(0.0, 0.0); 2];
    for z in v.iter_mut() {
        *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn kron_ket(a: &[C64; 2], b: &[C64; 2]) -> [C64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// Contract subsystem A with `a`: `(a^dag (x) I) E (a (x) I)`.
fn contract_a(m: &DMatrix<C64>, a: &[C64; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (j, row) in out.iter_mut().enumerate() {
        for (l, cell) in row.iter_mut().enumerate() {
            for i in 0..2 {
                for k in 0..2 {
                    *cell += a[i].conj() * m[(2 * i + j, 2 * k + l)] * a[k];
                }
            }
        }
    }
    out
}

fn contract_b(m: &DMatrix<C64>, b: &[C64; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            for j in 0..2 {
                for l in 0..2 {
                    *cell += b[j].conj() * m[(2 * i + j, 2 * k + l)] * b[l];
                }
            }
        }
    }
    out
}

/// Minimal eigenvector of a 2x2 Hermitian matrix, or `None` when the matrix
/// is proportional to the identity (every vector is minimal).
fn min_eigvec_2x2(h: &[[C64; 2]; 2]) -> Option<[C64; 2]> {
    let p = h[0][0].re;
    let r = h[1][1].re;
    let w = h[0][1];
    let half_gap = (((p - r) / 2.0).powi(2) + w.norm_sqr()).sqrt();
    if half_gap < 1e-14 {
        return None;
    }
    let lam = (p + r) / 2.0 - half_gap;
    let v = if w.norm() > 1e-14 {
        [w, C64::new(lam - p, 0.0)]
    } else if p <= r {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    } else {
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
    };
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    Some([v[0] / n, v[1] / n])
}

fn ket_to_bloch(k: &[C64; 2]) -> BlochVector {
    let c = k[0].conj() * k[1];
    let v = [2.0 * c.re, 2.0 * c.im, k[0].norm_sqr() - k[1].norm_sqr()];
    BlochVector::direction(v).expect("normalized ket has unit Bloch vector")
}

fn see_saw_run(m: &DMatrix<C64>, cfg: &SeeSawConfig, restart: usize) -> (f64, [C64; 2], [C64; 2]) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut a = random_ket(&mut rng);
    let mut b = random_ket(&mut rng);
    let value = |a: &[C64; 2], b: &[C64; 2]| {
        let v = kron_ket(a, b);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += v[i].conj() * m[(i, j)] * v[j];
            }
        }
        acc.re
    };
    let mut current = value(&a, &b);
    for _ in 0..cfg.iters {
        if let Some(nb) = min_eigvec_2x2(&contract_a(m, &a)) {
            b = nb;
        }
        if let Some(na) = min_eigvec_2x2(&contract_b(m, &b)) {
            a = na;
        }
        let next = value(&a, &b);
        let delta = (current - next).abs();
        current = next;
        if delta < cfg.tol {
            break;
        }
    }
    (current, a, b)
}

/// Minimum of `<a (x) b| E |a (x) b>` found by multi-start see-saw; each
/// restart draws from its own stream derived from `(seed, restart index)`.
pub fn min_product_expectation(e: &HermitianOperator, cfg: &SeeSawConfig) -> Result<(f64, ProductPureState)> {
    if e.dim() != 4 {
        return invalid("block positivity is defined for 4x4 operators");
    }
    if cfg.restarts == 0 {
        return invalid("see-saw needs at least one restart");
    }
    let m = e.matrix();
    let (value, _, a, b) = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let (v, a, b) = see_saw_run(m, cfg, r);
            (v, r, a, b)
        })
        .reduce_with(|x, y| if (y.0, y.1) < (x.0, x.1) { y } else { x })
        .expect("at least one restart");
    let witness = ProductPureState::new(ket_to_bloch(&a), ket_to_bloch(&b))?;
    Ok((value, witness))
}

/// Block-positivity certification of a 4x4 operator.
pub fn is_sep_effect(e: &HermitianOperator, cfg: &SeeSawConfig) -> Result<ConeVerdict> {
    let (min_value, witness) = min_product_expectation(e, cfg)?;
    let accepted = min_value >= -cfg.tol;
    Ok(ConeVerdict { accepted, min_value, witness: Some(witness), heuristic: accepted })
}

/// Maximal-tensor-product state membership: unit trace and non-negative on
/// every product effect, which is the SEP effect test after normalization.
pub fn is_sep_max_state(h: &HermitianOperator, cfg: &SeeSawConfig) -> Result<bool> {
    if (h.trace() - 1.0).abs() > cfg.tol.max(1e-9) {
        return Ok(false);
    }
    Ok(is_sep_effect(h, cfg)?.accepted)
}

/// `(|01> - |10>) / sqrt 2`.
pub fn singlet_ket() -> [C64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0)]
}

pub fn singlet_projector() -> HermitianOperator {
    HermitianOperator::projector(&singlet_ket()).expect("dim 4 ket")
}

/// `<psi-|E|psi->`.
pub fn singlet_expectation(e: &HermitianOperator) -> f64 {
    e.expectation(&singlet_ket()).unwrap_or(f64::NAN)
}

/// Frozen-model effect filter: keeps effects with `<psi-|E|psi-> >= -tol`
/// (boundary effects with value exactly zero are kept).
pub fn frozen_effect_filter(e: &Effect, tol: f64) -> bool {
    singlet_expectation(e.op()) >= -tol
}

/// `(U_A (x) U_B) E (U_A^dag (x) U_B^dag)`, spot-checked to stay in the SEP
/// effect cone.
pub fn conjugated_effect_membership(
    e: &Effect,
    ua: &UnitaryOperator,
    ub: &UnitaryOperator,
    cfg: &SeeSawConfig,
) -> Result<Effect> {
    if e.theory() != TheoryTag::SepMin {
        return invalid(format!("expected a sep-min effect, got {}", e.theory()));
    }
    if ua.dim() != 2 || ub.dim() != 2 {
        return invalid("local unitaries must be 2x2");
    }
    let u = ua.tensor(ub)?;
    // conjugate computes W^dag E W; pass W = U^dag to get U E U^dag.
    let out = conjugate(e.op(), &u.adjoint())?;
    let verdict = is_sep_effect(&out, cfg)?;
    if !verdict.accepted {
        return Err(Error::InconsistentModel(format!(
            "product-unitary conjugate left the SEP cone (min {:e})",
            verdict.min_value
        )));
    }
    Ok(Effect::new_unchecked(out, TheoryTag::SepMin))
}
