//! Dense complex operators on one qubit (dim 2) and two qubits (dim 4).
//!
//! Two-qubit operators use the computational basis ordered
//! `|00>, |01>, |10>, |11>`, with the first tensor factor (subsystem A) as the
//! most significant index.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type C64 = Complex64;

/// Tolerance for algebraic identities (Hermiticity, unitarity, purity).
pub const ALGEBRA_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        invalid(format!("operator dimension must be 2 or 4, got {dim}"))
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A Hermitian operator of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    m: DMatrix<C64>,
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianOperator(dim={}) {}", self.dim(), self.m)
    }
}

impl HermitianOperator {
    /// Builds an operator from row-major entries, checking Hermiticity to
    /// within [`ALGEBRA_TOL`].
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return invalid(format!(
                "expected {} entries for a {dim}x{dim} operator, got {}",
                dim * dim,
                entries.len()
            ));
        }
        let m = DMatrix::from_row_slice(dim, dim, entries);
        Self::from_matrix(m)
    }

    /// Real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(dim, &c)
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return invalid("operator matrix must be square");
        }
        check_dim(m.nrows())?;
        let skew = max_abs(&(&m - m.adjoint()));
        if skew > ALGEBRA_TOL {
            return invalid(format!("matrix is not Hermitian (max |H - H^dag| = {skew:e})"));
        }
        Ok(Self::symmetrized(m))
    }

    /// Wraps a matrix known to be Hermitian up to rounding, projecting away
    /// the anti-Hermitian residue.
    pub(crate) fn symmetrized(m: DMatrix<C64>) -> Self {
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self { m: h }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: DMatrix::identity(dim, dim) })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: DMatrix::zeros(dim, dim) })
    }

    /// `|v><v|` for a ket of length 2 or 4 (not renormalized).
    pub fn projector(ket: &[C64]) -> Result<Self> {
        check_dim(ket.len())?;
        let v = DVector::from_column_slice(ket);
        Ok(Self { m: &v * v.adjoint() })
    }

    /// Two-qubit operator `c I + sum_i a_i s_i (x) I + sum_j b_j I (x) s_j + sum_ij t_ij s_i (x) s_j`
    /// with Pauli matrices `s = (X, Y, Z)`.
    pub fn from_pauli_expansion(
        identity: f64,
        local_a: [f64; 3],
        local_b: [f64; 3],
        corr: [[f64; 3]; 3],
    ) -> Self {
        let id2 = DMatrix::<C64>::identity(2, 2);
        let s = [pauli(Axis::X).m, pauli(Axis::Y).m, pauli(Axis::Z).m];
        let mut m = DMatrix::<C64>::identity(4, 4) * C64::new(identity, 0.0);
        for i in 0..3 {
            m += s[i].kronecker(&id2) * C64::new(local_a[i], 0.0);
            m += id2.kronecker(&s[i]) * C64::new(local_b[i], 0.0);
            for j in 0..3 {
                m += s[i].kronecker(&s[j]) * C64::new(corr[i][j], 0.0);
            }
        }
        Self::symmetrized(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<C64> {
        let d = self.dim();
        (0..d * d).map(|k| self.m[(k / d, k % d)]).collect()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `Re Tr(self * other)`; the trace pairing between effects and states.
    pub fn pair(&self, other: &HermitianOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return invalid(format!("dimension mismatch: {} vs {}", self.dim(), other.dim()));
        }
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        Ok(acc.re)
    }

    /// `<v|self|v>` for a ket of matching length.
    pub fn expectation(&self, ket: &[C64]) -> Result<f64> {
        if ket.len() != self.dim() {
            return invalid(format!("ket length {} does not match dim {}", ket.len(), self.dim()));
        }
        let v = DVector::from_column_slice(ket);
        Ok((v.adjoint() * &self.m * &v)[(0, 0)].re)
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        if self.dim() != other.dim() {
            return invalid("dimension mismatch in add");
        }
        Ok(Self { m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<Self> {
        if self.dim() != other.dim() {
            return invalid("dimension mismatch in sub");
        }
        Ok(Self { m: &self.m - &other.m })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { m: &self.m * C64::new(factor, 0.0) }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &HermitianOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.m - &other.m))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *eigh(self).values.last().expect("non-empty spectrum")
    }
}

/// A unitary operator of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct UnitaryOperator {
    m: DMatrix<C64>,
}

impl fmt::Debug for UnitaryOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitaryOperator(dim={}) {}", self.dim(), self.m)
    }
}

impl UnitaryOperator {
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return invalid(format!("expected {} entries, got {}", dim * dim, entries.len()));
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return invalid("unitary matrix must be square");
        }
        check_dim(m.nrows())?;
        let d = m.nrows();
        let defect = max_abs(&(&m * m.adjoint() - DMatrix::<C64>::identity(d, d)));
        if defect > ALGEBRA_TOL {
            return invalid(format!("matrix is not unitary (max |UU^dag - I| = {defect:e})"));
        }
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: DMatrix::identity(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &UnitaryOperator) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return invalid("dimension mismatch in compose");
        }
        Ok(Self { m: &self.m * &rhs.m })
    }
}

/// Kronecker product of two single-qubit operators of the same kind.
pub trait Tensor: Sized {
    fn tensor(&self, rhs: &Self) -> Result<Self>;
}

impl Tensor for HermitianOperator {
    fn tensor(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != 2 || rhs.dim() != 2 {
            return invalid(format!(
                "tensor requires two dim-2 operands, got {} and {}",
                self.dim(),
                rhs.dim()
            ));
        }
        Ok(Self { m: self.m.kronecker(&rhs.m) })
    }
}

impl Tensor for UnitaryOperator {
    fn tensor(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != 2 || rhs.dim() != 2 {
            return invalid(format!(
                "tensor requires two dim-2 operands, got {} and {}",
                self.dim(),
                rhs.dim()
            ));
        }
        Ok(Self { m: self.m.kronecker(&rhs.m) })
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

/// `U^dag X U`.
pub fn conjugate(x: &HermitianOperator, u: &UnitaryOperator) -> Result<HermitianOperator> {
    if x.dim() != u.dim() {
        return invalid(format!("dimension mismatch: operator {} vs unitary {}", x.dim(), u.dim()));
    }
    Ok(HermitianOperator::symmetrized(u.m.adjoint() * &x.m * &u.m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Pauli matrix, with `Y = [[0, -i], [i, 0]]`.
pub fn pauli(axis: Axis) -> HermitianOperator {
    let m = match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    };
    HermitianOperator { m }
}

/// Bloch vector of a single-qubit state; `|n| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        if n.iter().any(|x| !x.is_finite()) {
            return invalid("Bloch vector has non-finite components");
        }
        let norm = norm3(&n);
        if norm > 1.0 + ALGEBRA_TOL {
            return invalid(format!("Bloch vector norm {norm} exceeds 1"));
        }
        Ok(Self(n))
    }

    /// A unit Bloch vector; rejects anything off the sphere by more than
    /// [`ALGEBRA_TOL`].
    pub fn pure(n: [f64; 3]) -> Result<Self> {
        let v = Self::new(n)?;
        if !v.is_pure() {
            return invalid(format!("Bloch vector norm {} is not 1", v.norm()));
        }
        Ok(v)
    }

    /// Normalizes a nonzero 3-vector onto the sphere.
    pub fn direction(n: [f64; 3]) -> Result<Self> {
        let norm = norm3(&n);
        if !(norm > 0.0) || !norm.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Ok(Self([n[0] / norm, n[1] / norm, n[2] / norm]))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.0)
    }

    pub fn is_pure(&self) -> bool {
        (self.norm() - 1.0).abs() <= ALGEBRA_TOL
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        dot3(&self.0, &other.0)
    }

    pub fn negate(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Ket with non-negative real first amplitude:
    /// `(cos(t/2), e^{i p} sin(t/2))` for polar angle `t`, azimuth `p`.
    pub fn ket(&self) -> Result<[C64; 2]> {
        if !self.is_pure() {
            return invalid("ket requested for a mixed Bloch vector");
        }
        let [x, y, z] = self.0;
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x);
        Ok([
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
        ])
    }

    pub fn density(&self) -> HermitianOperator {
        bloch_to_density_unchecked(self)
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn bloch_to_density_unchecked(n: &BlochVector) -> HermitianOperator {
    let [x, y, z] = n.0;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new((1.0 + z) / 2.0, 0.0),
            C64::new(x / 2.0, -y / 2.0),
            C64::new(x / 2.0, y / 2.0),
            C64::new((1.0 - z) / 2.0, 0.0),
        ],
    );
    HermitianOperator { m }
}

/// `(I + n . sigma) / 2` for raw components; rejects `|n| > 1`.
pub fn bloch_to_density(n: [f64; 3]) -> Result<HermitianOperator> {
    Ok(bloch_to_density_unchecked(&BlochVector::new(n)?))
}

/// Eigenstate of the Pauli operator along `axis` with eigenvalue `sign`.
pub fn pauli_eigenstate(axis: Axis, sign: Sign) -> BlochVector {
    let mut n = [0.0; 3];
    n[axis.index()] = sign.value();
    BlochVector(n)
}

/// Pure product state of two qubits given by their Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductPureState {
    pub a: BlochVector,
    pub b: BlochVector,
}

impl ProductPureState {
    pub fn new(a: BlochVector, b: BlochVector) -> Result<Self> {
        if !a.is_pure() || !b.is_pure() {
            return invalid("product pure state requires unit Bloch vectors on both factors");
        }
        Ok(Self { a, b })
    }

    pub fn density(&self) -> HermitianOperator {
        HermitianOperator { m: self.a.density().m.kronecker(&self.b.density().m) }
    }

    pub fn ket(&self) -> [C64; 4] {
        // Both factors are pure by construction.
        let ka = self.a.ket().expect("pure factor");
        let kb = self.b.ket().expect("pure factor");
        [ka[0] * kb[0], ka[0] * kb[1], ka[1] * kb[0], ka[1] * kb[1]]
    }

    /// `|<self|other>|^2 = prod_X (1 + n_X . n'_X) / 2`.
    pub fn overlap_sq(&self, other: &ProductPureState) -> f64 {
        (1.0 + self.a.dot(&other.a)) / 2.0 * (1.0 + self.b.dot(&other.b)) / 2.0
    }
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` paired with `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

impl Eigen {
    /// `sum_k lambda_k v_k v_k^dag`.
    pub fn reconstruct(&self) -> HermitianOperator {
        let d = self.values.len();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            let col = DVector::from_column_slice(v);
            m += &col * col.adjoint() * C64::new(*lam, 0.0);
        }
        HermitianOperator::symmetrized(m)
    }
}

/// Eigendecomposition with eigenvalues sorted descending and each eigenvector's
/// first non-negligible component rotated to be positive real.
pub fn eigh(h: &HermitianOperator) -> Eigen {
    let d = h.dim();
    let se = nalgebra::SymmetricEigen::new(h.m.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));

    let mut values = Vec::with_capacity(d);
    let mut vectors = Vec::with_capacity(d);
    for k in order {
        values.push(se.eigenvalues[k]);
        let mut v: Vec<C64> = se.eigenvectors.column(k).iter().copied().collect();
        if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = lead.conj() / lead.norm();
            v.iter_mut().for_each(|z| *z *= phase);
        }
        vectors.push(v);
    }
    Eigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn zz_is_diagonal() {
        let z = pauli(Axis::Z);
        let zz = tensor(&z, &z).unwrap();
        let want = HermitianOperator::from_real(
            4,
            &[1., 0., 0., 0., 0., -1., 0., 0., 0., 0., -1., 0., 0., 0., 0., 1.],
        )
        .unwrap();
        assert!(zz.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = HermitianOperator::identity(2).unwrap();
        let i4 = HermitianOperator::identity(4).unwrap();
        assert!(tensor(&i2, &i2).unwrap().max_abs_diff(&i4) < 1e-15);
    }

    #[test]
    fn plus_projector_tensor_is_flat_quarter() {
        let px = pauli_eigenstate(Axis::X, Sign::Plus).density();
        let t = tensor(&px, &px).unwrap();
        for e in t.entries() {
            assert!((e - c(0.25)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_dim4() {
        let i4 = HermitianOperator::identity(4).unwrap();
        let i2 = HermitianOperator::identity(2).unwrap();
        assert!(tensor(&i4, &i2).is_err());
    }

    #[test]
    fn bloch_densities() {
        let z = bloch_to_density([0., 0., 1.]).unwrap();
        assert!(z.max_abs_diff(&HermitianOperator::from_real(2, &[1., 0., 0., 0.]).unwrap()) < 1e-15);
        let x = bloch_to_density([1., 0., 0.]).unwrap();
        assert!(x.max_abs_diff(&HermitianOperator::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap()) < 1e-15);
        let mixed = bloch_to_density([0., 0., 0.]).unwrap();
        assert!(mixed.max_abs_diff(&HermitianOperator::identity(2).unwrap().scale(0.5)) < 1e-15);
        assert!(bloch_to_density([1.0, 0.1, 0.0]).is_err());
    }

    #[test]
    fn pauli_eigenstates() {
        assert_eq!(pauli_eigenstate(Axis::Z, Sign::Plus).components(), [0., 0., 1.]);
        assert_eq!(pauli_eigenstate(Axis::X, Sign::Minus).components(), [-1., 0., 0.]);
        assert_eq!(pauli_eigenstate(Axis::Y, Sign::Plus).components(), [0., 1., 0.]);
    }

    #[test]
    fn pauli_eigenstates_overlaps() {
        let all: Vec<BlochVector> = Axis::ALL
            .iter()
            .flat_map(|&a| [Sign::Plus, Sign::Minus].map(|s| pauli_eigenstate(a, s)))
            .collect();
        for (i, u) in all.iter().enumerate() {
            for (j, v) in all.iter().enumerate() {
                let ov = u.density().pair(&v.density()).unwrap();
                let want = if i == j {
                    1.0
                } else if i / 2 == j / 2 {
                    0.0
                } else {
                    0.5
                };
                assert!((ov - want).abs() < 1e-12, "{i} {j} {ov}");
            }
        }
    }

    #[test]
    fn kets_are_eigenvectors() {
        for axis in Axis::ALL {
            for sign in [Sign::Plus, Sign::Minus] {
                let ket = pauli_eigenstate(axis, sign).ket().unwrap();
                let e = pauli(axis).expectation(&ket).unwrap();
                assert!((e - sign.value()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigh_examples() {
        let d = HermitianOperator::from_real(2, &[1., 0., 0., 0.]).unwrap();
        assert_eq!(eigh(&d).values, vec![1.0, 0.0]);

        let e = eigh(&pauli(Axis::X));
        assert!((e.values[0] - 1.0).abs() < 1e-12 && (e.values[1] + 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[0][0] - c(s)).norm() < 1e-12 && (e.vectors[0][1] - c(s)).norm() < 1e-12);
        assert!((e.vectors[1][0] - c(s)).norm() < 1e-12 && (e.vectors[1][1] + c(s)).norm() < 1e-12);
    }

    #[test]
    fn eigh_mixture_of_00_and_plusplus() {
        let zz = ProductPureState::new(pauli_eigenstate(Axis::Z, Sign::Plus), pauli_eigenstate(Axis::Z, Sign::Plus)).unwrap();
        let xx = ProductPureState::new(pauli_eigenstate(Axis::X, Sign::Plus), pauli_eigenstate(Axis::X, Sign::Plus)).unwrap();
        let rho = zz.density().scale(0.5).add(&xx.density().scale(0.5)).unwrap();
        let e = eigh(&rho);
        for (got, want) in e.values.iter().zip([0.75, 0.25, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(e.reconstruct().max_abs_diff(&rho) < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected() {
        let bad = [c(0.0), c(1.0), c(0.0), c(0.0)];
        assert!(HermitianOperator::new(2, &bad).is_err());
        assert!(HermitianOperator::new(3, &[c(0.0); 9]).is_err());
    }

    #[test]
    fn non_unitary_rejected() {
        assert!(UnitaryOperator::new(2, &[c(1.0), c(1.0), c(0.0), c(1.0)]).is_err());
    }

    #[test]
    fn conjugation_keeps_spectrum() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a0y = UnitaryOperator::new(2, &[c(s), C64::new(0.0, -s), C64::new(0.0, -s), c(s)]).unwrap();
        let out = conjugate(&pauli(Axis::Z), &a0y).unwrap();
        let e = eigh(&out);
        assert!((e.values[0] - 1.0).abs() < 1e-10 && (e.values[1] + 1.0).abs() < 1e-10);

        let u4 = a0y.tensor(&a0y).unwrap();
        let i4 = HermitianOperator::identity(4).unwrap();
        assert!(conjugate(&i4, &u4).unwrap().max_abs_diff(&i4) < 1e-12);
        assert!(conjugate(&pauli(Axis::Z), &u4).is_err());
    }

    #[test]
    fn pauli_expansion_matches_kron() {
        let mut corr = [[0.0; 3]; 3];
        corr[0][0] = 1.0;
        let xx = HermitianOperator::from_pauli_expansion(0.0, [0.0; 3], [0.0; 3], corr);
        let want = tensor(&pauli(Axis::X), &pauli(Axis::X)).unwrap();
        assert!(xx.max_abs_diff(&want) < 1e-15);
    }
}
