//! Unit vectors in R^d with pairwise non-positive inner products.
//!
//! A pure product state `(a, b)` maps to `(a, b) / sqrt 2` in R^6; two such
//! states satisfy the Arai criterion exactly when their vectors have a
//! non-positive inner product, so the size of the largest configuration
//! bounds the number of pairwise SEP-distinguishable product states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::operator::ProductPureState;

pub const PACKING_TOL: f64 = 1e-9;
const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingInstance {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl PackingInstance {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return invalid("packing dimension must be at least 1");
        }
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return invalid(format!("vector {k} has length {} in dimension {dim}", v.len()));
            }
            let n = norm(v);
            if (n - 1.0).abs() > UNIT_TOL {
                return invalid(format!("vector {k} has norm {n}, expected 1"));
            }
        }
        Ok(Self { dim, vectors })
    }

    /// Normalized R^6 images of product states.
    pub fn from_product_states(states: &[ProductPureState]) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let vectors = states
            .iter()
            .map(|st| to_packing_vector(st).iter().map(|x| x * s).collect())
            .collect();
        Self { dim: 6, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Copy with vector `k` removed.
    pub fn without(&self, k: usize) -> Self {
        let mut vectors = self.vectors.clone();
        vectors.remove(k);
        Self { dim: self.dim, vectors }
    }

    /// All pairwise inner products, `i < j`.
    pub fn pair_dots(&self) -> Vec<(usize, usize, f64)> {
        let n = self.vectors.len();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push((i, j, dot(&self.vectors[i], &self.vectors[j])));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingVerdict {
    pub valid: bool,
    /// Pair with the largest inner product, if there is any pair.
    pub worst_pair: Option<(usize, usize, f64)>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    v.iter_mut().for_each(|x| *x /= n);
}

/// `(a, b)` concatenated; norm `sqrt 2`.
pub fn to_packing_vector(s: &ProductPureState) -> [f64; 6] {
    let [a0, a1, a2] = s.a.components();
    let [b0, b1, b2] = s.b.components();
    [a0, a1, a2, b0, b1, b2]
}

pub fn is_valid_packing(p: &PackingInstance, tol: f64) -> PackingVerdict {
    let worst_pair = p.pair_dots().into_iter().max_by(|x, y| x.2.total_cmp(&y.2));
    let valid = worst_pair.is_none_or(|(_, _, d)| d <= tol);
    PackingVerdict { valid, worst_pair }
}

/// `{+e_i, -e_i : i < d}`.
pub fn max_packing_construct(d: usize) -> Result<PackingInstance> {
    if d < 1 {
        return invalid("dimension must be at least 1");
    }
    let mut vectors = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; d];
            v[i] = s;
            vectors.push(v);
        }
    }
    PackingInstance::new(d, vectors)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingSearchReport {
    pub dim: usize,
    pub target: usize,
    pub best_size: usize,
    pub best_instance: Option<PackingInstance>,
    pub steps_used: u64,
    pub restarts: u64,
}

const LEARNING_RATE: f64 = 0.1;
const RESTART_STEPS: u64 = 2000;

fn max_off_diagonal(gram: &[f64], s: usize) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for i in 0..s {
        for j in i + 1..s {
            let g = gram[i * s + j];
            m = if g.is_nan() { f64::INFINITY } else { m.max(g) };
        }
    }
    m
}

/// Randomized search for configurations of increasing size.
///
/// For each size `s = 1, 2, ..., target` the search starts from random unit
/// vectors and runs projected gradient descent on `sum_{i<j} max(0, v_i.v_j)^2`,
/// renormalizing every vector after each step. A run that has not reached
/// `max v_i.v_j <= PACKING_TOL` after a fixed number of steps is restarted.
/// `budget` caps the total number of descent steps across all sizes; the
/// first size that exhausts it ends the search.
pub fn packing_search(d: usize, target: usize, budget: u64, seed: u64) -> Result<PackingSearchReport> {
    if d < 1 {
        return invalid("dimension must be at least 1");
    }
    if budget < 1 {
        return invalid("budget must be at least 1");
    }
    let mut steps_left = budget;
    let mut restarts = 0u64;
    let mut best: Option<PackingInstance> = None;

    'sizes: for size in 1..=target {
        let mut restart_index = 0u64;
        loop {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((size as u64) << 32) | restart_index);
            restart_index += 1;
            restarts += 1;

            let mut vs: Vec<Vec<f64>> = (0..size)
                .map(|_| {
                    let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    normalize(&mut v);
                    v
                })
                .collect();
            let mut gram = vec![0.0; size * size];
            for _ in 0..RESTART_STEPS {
                for i in 0..size {
                    for j in i + 1..size {
                        let g = dot(&vs[i], &vs[j]);
                        gram[i * size + j] = g;
                        gram[j * size + i] = g;
                    }
                }
                if size < 2 || max_off_diagonal(&gram, size) <= PACKING_TOL {
                    best = Some(PackingInstance { dim: d, vectors: vs });
                    continue 'sizes;
                }
                if steps_left == 0 {
                    break 'sizes;
                }
                steps_left -= 1;
                let prev = vs.clone();
                for (i, v) in vs.iter_mut().enumerate() {
                    for (j, w) in prev.iter().enumerate() {
                        let g = gram[i * size + j];
                        if i != j && g > 0.0 {
                            for k in 0..d {
                                v[k] -= 2.0 * LEARNING_RATE * g * w[k];
                            }
                        }
                    }
                    normalize(v);
                }
            }
        }
    }

    Ok(PackingSearchReport {
        dim: d,
        target,
        best_size: best.as_ref().map_or(0, |b| b.len()),
        best_instance: best,
        steps_used: budget - steps_left,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distinguish::{omega12, product_state};

    #[test]
    fn packing_vectors() {
        let all = omega12();
        let find = |s: &str| all.iter().find(|(l, _)| l.to_string() == s).unwrap().1;
        assert_eq!(to_packing_vector(&find("x+x+")), [1., 0., 0., 1., 0., 0.]);
        assert_eq!(to_packing_vector(&find("z-z-")), [0., 0., -1., 0., 0., -1.]);
        let d = dot(&to_packing_vector(&find("x+x+")), &to_packing_vector(&find("x-x-")));
        assert_eq!(d, -2.0);
    }

    #[test]
    fn verdict_examples() {
        let p = PackingInstance::new(1, vec![vec![1.0], vec![-1.0]]).unwrap();
        assert!(is_valid_packing(&p, PACKING_TOL).valid);

        let states: Vec<_> = omega12().into_iter().map(|(_, s)| s).collect();
        let inst = PackingInstance::from_product_states(&states);
        let v = is_valid_packing(&inst, PACKING_TOL);
        assert!(v.valid);
        for (_, _, d) in inst.pair_dots() {
            assert!(d.abs() < 1e-15 || (d + 1.0).abs() < 1e-15, "{d}");
        }

        let dup = PackingInstance::new(2, vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let v = is_valid_packing(&dup, PACKING_TOL);
        assert!(!v.valid);
        assert_eq!(v.worst_pair, Some((0, 1, 1.0)));
    }

    #[test]
    fn non_unit_rejected() {
        assert!(PackingInstance::new(2, vec![vec![1.0, 1.0]]).is_err());
        assert!(PackingInstance::new(2, vec![vec![1.0]]).is_err());
        assert!(PackingInstance::new(0, vec![]).is_err());
    }

    #[test]
    fn constructions() {
        assert_eq!(max_packing_construct(1).unwrap().len(), 2);
        assert_eq!(max_packing_construct(2).unwrap().len(), 4);
        assert_eq!(max_packing_construct(6).unwrap().len(), 12);
        assert!(max_packing_construct(0).is_err());
    }

    #[test]
    fn arai_matches_sign_of_dot() {
        let s1 = product_state([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let s2 = product_state([0.6, 0.0, -0.8], [0.0, 1.0, 0.0]).unwrap();
        let d = dot(&to_packing_vector(&s1), &to_packing_vector(&s2));
        assert!((d + 0.8).abs() < 1e-12);
        assert!(crate::distinguish::arai_criterion(&s1, &s2, PACKING_TOL));
    }

    #[test]
    fn small_search() {
        let r = packing_search(2, 4, 10_000, 1).unwrap();
        assert_eq!(r.best_size, 4);
        assert!(is_valid_packing(r.best_instance.as_ref().unwrap(), PACKING_TOL).valid);
        let again = packing_search(2, 4, 10_000, 1).unwrap();
        assert_eq!(r, again);
        assert!(packing_search(0, 1, 1, 0).is_err());
        assert_eq!(packing_search(1, 3, 100_000, 7).unwrap().best_size, 2);
        let r = packing_search(2, 5, 1_000_000, 42).unwrap();
        assert_eq!(r.best_size, 4);
        assert_eq!(r.steps_used, 1_000_000);
        assert!(packing_search(1, 1, 0, 0).is_err());
    }
}
