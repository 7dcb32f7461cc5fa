//! The square bit: a single system whose state space is a square, and the
//! sixteen product states and effects of two square bits.
//!
//! States and effects are homogeneous 3-vectors; normalized states have third
//! component 1. The pairing is `p(e, w) = (e . w) / 2`, under which the unit
//! effect is `u = (0, 0, 2)`. Product elements are 3x3 outer products paired
//! by `Tr(E^T W) / 4`.

use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SQUARE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareState(pub [f64; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareEffect(pub [f64; 3]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareProductState(pub Matrix3<f64>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareProductEffect(pub Matrix3<f64>);

fn vec3(v: [f64; 3]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

impl SquareState {
    /// A normalized state inside the square `|x| + |y| <= 1`.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let s = SquareState(v);
        if (v[2] - 1.0).abs() > SQUARE_TOL {
            return Err(Error::InvalidArgument(format!("state {v:?} is not normalized")));
        }
        if !is_in_state_space(&s, SQUARE_TOL) {
            return Err(Error::InvalidArgument(format!("state {v:?} lies outside the square")));
        }
        Ok(s)
    }

    /// `sum_k weights[k] * states[k]`; weights must form a probability vector.
    pub fn mixture(states: &[SquareState], weights: &[f64]) -> Result<Self> {
        if states.len() != weights.len() || states.is_empty() {
            return Err(Error::InvalidArgument("mixture needs one weight per state".into()));
        }
        if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("mixture weights must be a probability vector".into()));
        }
        let mut v = [0.0; 3];
        for (s, w) in states.iter().zip(weights) {
            for k in 0..3 {
                v[k] += w * s.0[k];
            }
        }
        SquareState::new(v)
    }
}

pub fn square_states() -> [SquareState; 4] {
    [
        SquareState([1.0, 0.0, 1.0]),
        SquareState([0.0, 1.0, 1.0]),
        SquareState([-1.0, 0.0, 1.0]),
        SquareState([0.0, -1.0, 1.0]),
    ]
}

pub fn square_effects() -> [SquareEffect; 4] {
    [
        SquareEffect([1.0, 1.0, 1.0]),
        SquareEffect([-1.0, 1.0, 1.0]),
        SquareEffect([-1.0, -1.0, 1.0]),
        SquareEffect([1.0, -1.0, 1.0]),
    ]
}

pub fn unit_effect() -> SquareEffect {
    SquareEffect([0.0, 0.0, 2.0])
}

/// `e_i . v >= 0` for every ray-extremal effect; these are the four facets
/// of the square, so this is exactly convex-hull membership.
pub fn is_in_state_space(s: &SquareState, tol: f64) -> bool {
    (s.0[2] - 1.0).abs() <= tol && square_effects().iter().all(|e| vec3(e.0).dot(&vec3(s.0)) >= -tol)
}

/// `(e . w) / 2`, checked to lie in `[0, 1]` up to `tol`.
pub fn square_prob_tol(e: &SquareEffect, w: &SquareState, tol: f64) -> Result<f64> {
    let p = 0.5 * vec3(e.0).dot(&vec3(w.0));
    if p < -tol || p > 1.0 + tol {
        return Err(Error::InconsistentModel(format!(
            "pairing of effect {:?} with state {:?} gives {p}",
            e.0, w.0
        )));
    }
    Ok(p)
}

pub fn square_prob(e: &SquareEffect, w: &SquareState) -> Result<f64> {
    square_prob_tol(e, w, SQUARE_TOL)
}

/// Regression fixture for `square_prob_table`: `p(e_i, w_j)`.
pub const SQUARE_PROB_FIXTURE: [[f64; 4]; 4] = [
    [1.0, 1.0, 0.0, 0.0],
    [0.0, 1.0, 1.0, 0.0],
    [0.0, 0.0, 1.0, 1.0],
    [1.0, 0.0, 0.0, 1.0],
];

/// `table[i][j] = p(e_i, w_j)`.
pub fn square_prob_table() -> Result<[[f64; 4]; 4]> {
    let (es, ws) = (square_effects(), square_states());
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = square_prob(&es[i], &ws[j])?;
        }
    }
    Ok(t)
}

/// The two complementary binary measurements of the square bit.
pub fn square_binary_measurements() -> [[usize; 2]; 2] {
    [[0, 2], [1, 3]]
}

/// A binary measurement `(effect indices)` with the outcome identifying each
/// state of a pure-state pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareWitness {
    pub states: (usize, usize),
    /// Effect index answering `states.0`, then the one answering `states.1`.
    pub effects: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareDimensionReport {
    pub information_dimension: usize,
    pub measurement_dimension: usize,
    pub witnesses: Vec<SquareWitness>,
}

fn perfect(t: &[[f64; 4]; 4], e: (usize, usize), s: (usize, usize)) -> bool {
    let near = |x: f64, y: f64| (x - y).abs() <= SQUARE_TOL;
    near(t[e.0][s.0], 1.0) && near(t[e.1][s.0], 0.0) && near(t[e.0][s.1], 0.0) && near(t[e.1][s.1], 1.0)
}

/// Information dimension (largest pairwise perfectly distinguishable set of
/// pure states) and measurement dimension (largest set distinguishable by a
/// single measurement), each with its certificate.
///
/// Three pure states can never be separated jointly: an affine functional on
/// the square is fixed by its values on three corners, and `w0 + w2 = w1 + w3`
/// forces the outcome that fires on the middle corner to take value `-1` on
/// the fourth.
pub fn square_info_dimension() -> Result<SquareDimensionReport> {
    let t = square_prob_table()?;
    let mut witnesses = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let found = square_binary_measurements().into_iter().find_map(|[x, y]| {
                if perfect(&t, (x, y), (a, b)) {
                    Some((x, y))
                } else if perfect(&t, (y, x), (a, b)) {
                    Some((y, x))
                } else {
                    None
                }
            });
            let effects = found.ok_or_else(|| {
                Error::InconsistentModel(format!("no binary measurement separates w{a} and w{b}"))
            })?;
            witnesses.push(SquareWitness { states: (a, b), effects });
        }
    }

    let mut joint = 2;
    'triples: for omit in 0..4 {
        let corners: Vec<usize> = (0..4).filter(|&k| k != omit).collect();
        // Functional firing on corner c (and vanishing on the other two),
        // extended to the omitted corner by the parallelogram identity.
        for &c in &corners {
            let value = |k: usize| if k == c { 1.0 } else { 0.0 };
            let opposite = (omit + 2) % 4;
            let at_omit = value((omit + 1) % 4) + value((omit + 3) % 4) - value(opposite);
            if at_omit < -SQUARE_TOL {
                continue 'triples;
            }
        }
        joint = 3;
    }

    // Every pair of the four pure states has a witness.
    Ok(SquareDimensionReport { information_dimension: 4, measurement_dimension: joint, witnesses })
}

/// `w_i w_j^T`, indexed `4i + j`.
pub fn square_product_states() -> Vec<SquareProductState> {
    let ws = square_states();
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            out.push(SquareProductState(vec3(ws[i].0) * vec3(ws[j].0).transpose()));
        }
    }
    out
}

/// `e_i e_j^T`, indexed `4i + j`.
pub fn square_product_effects() -> Vec<SquareProductEffect> {
    let es = square_effects();
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            out.push(SquareProductEffect(vec3(es[i].0) * vec3(es[j].0).transpose()));
        }
    }
    out
}

/// `Tr(E^T W) / 4`.
pub fn square_product_prob(e: &SquareProductEffect, w: &SquareProductState) -> f64 {
    0.25 * e.0.component_mul(&w.0).sum()
}

/// Product measurement separating two of the sixteen product states: the
/// square-bit measurement on the first factor where they differ, with the
/// other factor answered by the unit effect.
pub fn square_product_pair_measurement(s: usize, t: usize) -> Result<[SquareProductEffect; 2]> {
    if s >= 16 || t >= 16 || s == t {
        return Err(Error::InvalidArgument(format!("need two distinct product indices below 16, got {s}, {t}")));
    }
    let (si, sj, ti, tj) = (s / 4, s % 4, t / 4, t % 4);
    let dims = square_info_dimension()?;
    let pick = |a: usize, b: usize| -> (usize, usize) {
        let w = dims
            .witnesses
            .iter()
            .find(|w| w.states == (a.min(b), a.max(b)))
            .expect("all pairs have witnesses");
        if w.states.0 == a {
            w.effects
        } else {
            (w.effects.1, w.effects.0)
        }
    };
    let es = square_effects();
    let u = vec3(unit_effect().0);
    let m = if si != ti {
        let (x, y) = pick(si, ti);
        [vec3(es[x].0) * u.transpose(), vec3(es[y].0) * u.transpose()]
    } else {
        let (x, y) = pick(sj, tj);
        [u * vec3(es[x].0).transpose(), u * vec3(es[y].0).transpose()]
    };
    Ok([SquareProductEffect(m[0]), SquareProductEffect(m[1])])
}

/// Optional entangled elements supplied from a data file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SquareExtension {
    pub states: Vec<Matrix3<f64>>,
    pub effects: Vec<Matrix3<f64>>,
}

impl SquareExtension {
    pub fn is_empty(&self) -> bool {
        self.states.is_empty() && self.effects.is_empty()
    }

    /// Every extra state must be non-negative on every product effect, and
    /// every extra effect must give probabilities in `[0, 1]` on every
    /// product state.
    pub fn check_consistency(&self, tol: f64) -> Result<()> {
        for (k, s) in self.states.iter().enumerate() {
            for e in square_product_effects() {
                let p = square_product_prob(&e, &SquareProductState(*s));
                if p < -tol {
                    return Err(Error::InconsistentModel(format!("extra state {k} gives {p} on a product effect")));
                }
            }
        }
        for (k, e) in self.effects.iter().enumerate() {
            for s in square_product_states() {
                let p = square_product_prob(&SquareProductEffect(*e), &s);
                if p < -tol || p > 1.0 + tol {
                    return Err(Error::InconsistentModel(format!("extra effect {k} gives {p} on a product state")));
                }
            }
        }
        Ok(())
    }
}

/// Parses 3x3 matrices, nine whitespace-separated numbers each, row-major.
/// Lines `[states]` and `[effects]` switch the section (default: states);
/// `#` starts a comment.
pub fn parse_square_extension(text: &str) -> Result<SquareExtension> {
    let mut ext = SquareExtension::default();
    let mut to_states = true;
    let mut pending: Vec<f64> = Vec::with_capacity(9);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[states]" || line == "[effects]" {
            if !pending.is_empty() {
                return Err(Error::Parse(format!("line {}: section change inside a matrix", lineno + 1)));
            }
            to_states = line == "[states]";
            continue;
        }
        for tok in line.split_whitespace() {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: `{tok}` is not a number", lineno + 1)))?;
            pending.push(x);
            if pending.len() == 9 {
                let m = Matrix3::from_row_slice(&pending);
                if to_states {
                    ext.states.push(m);
                } else {
                    ext.effects.push(m);
                }
                pending.clear();
            }
        }
    }
    if !pending.is_empty() {
        return Err(Error::Parse(format!("trailing matrix has {} of 9 entries", pending.len())));
    }
    Ok(ext)
}

pub fn load_square_extension(path: &Path) -> Result<SquareExtension> {
    parse_square_extension(&std::fs::read_to_string(path)?)
}
