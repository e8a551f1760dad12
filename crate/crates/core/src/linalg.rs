//! Dense complex linear algebra for the 2-, 4- and 8-dimensional spaces of a
//! three-qubit register.
//!
//! Basis states are ordered big-endian: `|q1 q2 q3>` lives at index
//! `4*q1 + 2*q2 + q3`, so qubit 1 is the most significant bit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of qubits in the register.
pub const NUM_QUBITS: usize = 3;
/// Hilbert-space dimension of the register.
pub const DIM: usize = 1 << NUM_QUBITS;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;
/// Norm drift tolerated by [`apply`] before it reports an integrity error.
pub const NORM_DRIFT_TOL: f64 = 1e-8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Index of one qubit of the register, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Qubit(u8);

impl Qubit {
    pub const Q1: Qubit = Qubit(1);
    pub const Q2: Qubit = Qubit(2);
    pub const Q3: Qubit = Qubit(3);
    pub const ALL: [Qubit; 3] = [Qubit::Q1, Qubit::Q2, Qubit::Q3];

    pub fn new(index: usize) -> Result<Self> {
        match index {
            1..=3 => Ok(Qubit(index as u8)),
            _ => Err(Error::QubitIndex(index)),
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Zero-based slot, used to index per-qubit arrays.
    pub fn slot(self) -> usize {
        self.index() - 1
    }

    /// Bit mask of this qubit inside a basis index.
    pub fn mask(self) -> usize {
        1 << (NUM_QUBITS - self.index())
    }

    /// Value (0 or 1) of this qubit in basis state `basis`.
    pub fn bit_of(self, basis: usize) -> usize {
        (basis & self.mask()) >> (NUM_QUBITS - self.index())
    }

    /// The other two qubits, in ascending order.
    pub fn others(self) -> [Qubit; 2] {
        match self.0 {
            1 => [Qubit::Q2, Qubit::Q3],
            2 => [Qubit::Q1, Qubit::Q3],
            _ => [Qubit::Q1, Qubit::Q2],
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Formats a basis index as its bit string, e.g. `5 -> "101"`.
pub fn basis_label(index: usize) -> String {
    format!("{index:03b}")
}

/// Parses a three-character bit string such as `"011"` into a basis index.
pub fn parse_basis_label(label: &str) -> Result<usize> {
    if label.len() != NUM_QUBITS || !label.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::Parameter(format!(
            "basis state must be a {NUM_QUBITS}-bit string like 010, got {label:?}"
        )));
    }
    Ok(usize::from_str_radix(label, 2).expect("validated bit string"))
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff on mismatched shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|`; zero for an exactly Hermitian matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL
    }

    /// `max |U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.dagger().matmul(self).expect("square");
        gram.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= UNITARY_TOL
    }

    /// Column `j` as a state vector (no normalization check).
    pub fn column(&self, j: usize) -> StateVector {
        StateVector {
            amplitudes: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.matmul(other)? - other.matmul(self)?)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in add"
        );
        self.data
            .iter_mut()
            .zip(&rhs.data)
            .for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in sub"
        );
        self.data
            .iter_mut()
            .zip(&rhs.data)
            .for_each(|(a, b)| *a -= b);
        self
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panicking matrix product; use [`ComplexMatrix::matmul`] for a checked one.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub mod pauli {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, 2, vec![ZERO, -I, I, ZERO]).expect("2x2")
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("2x2")
    }

    /// `(I - sigma_z) / 2`, the projector onto `|1>`.
    pub fn projector_one() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]).expect("2x2")
    }

    pub fn hadamard() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).expect("2x2")
    }
}

/// Embeds a single-qubit operator at `qubit` of the three-qubit register:
/// `I ⊗ .. ⊗ op ⊗ .. ⊗ I`.
pub fn kron_embed(op: &ComplexMatrix, qubit: Qubit) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::Dimension(format!(
            "kron_embed expects a 2x2 operator, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    let id = pauli::identity();
    let factors: Vec<&ComplexMatrix> = Qubit::ALL
        .iter()
        .map(|&q| if q == qubit { op } else { &id })
        .collect();
    Ok(factors[0].kron(factors[1]).kron(factors[2]))
}

/// Sign of the exponent in [`expm_hermitian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    /// `exp(-iHt)`, forward Schrödinger evolution.
    Minus,
    /// `exp(+iHt)`, used for the interaction-picture frame.
    Plus,
}

impl PhaseSign {
    fn factor(self) -> f64 {
        match self {
            PhaseSign::Minus => -1.0,
            PhaseSign::Plus => 1.0,
        }
    }
}

/// `exp(sign * i * H * t)` for Hermitian `H`, via the eigendecomposition
/// `H = V diag(lambda) V^dagger`.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64, sign: PhaseSign) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "expm_hermitian expects a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !t.is_finite() {
        return Err(Error::Parameter(format!(
            "evolution time must be finite, got {t}"
        )));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL || !defect.is_finite() {
        return Err(Error::NotHermitian { norm: defect });
    }

    let n = h.rows();
    let eig = SymmetricEigen::new(h.to_nalgebra());
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, sign.factor() * lambda * t))
        .collect();
    let v = &eig.eigenvectors;
    let u = ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj())
            .sum()
    });

    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::Integrity(format!(
            "propagator unitarity defect {defect:.3e} exceeds {UNITARY_TOL:.0e}"
        )));
    }
    Ok(u)
}

/// Forward propagator `exp(-iHt)`.
pub fn propagator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    expm_hermitian(h, t, PhaseSign::Minus)
}

/// Pure state of a finite-dimensional system.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes, rejecting vectors whose norm is not 1 within
    /// [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let s = Self::from_amplitudes_unchecked(amplitudes);
        if s.dim() == 0 {
            return Err(Error::Dimension("empty state vector".into()));
        }
        let norm_sq = s.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(s)
    }

    pub fn from_amplitudes_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis state `|index>` of a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product of mismatched dims");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Largest per-amplitude modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff of mismatched dims");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Self { amplitudes }
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.amplitudes[index]
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector [")?;
        for z in &self.amplitudes {
            write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
        }
        write!(f, " ]")
    }
}

/// `U |s>`. The result is not renormalized; a norm change beyond
/// [`NORM_DRIFT_TOL`] is reported as an integrity error.
pub fn apply(u: &ComplexMatrix, s: &StateVector) -> Result<StateVector> {
    if u.cols() != s.dim() || !u.is_square() {
        return Err(Error::Dimension(format!(
            "cannot apply {}x{} operator to {}-dim state",
            u.rows(),
            u.cols(),
            s.dim()
        )));
    }
    let out = StateVector::from_amplitudes_unchecked(
        (0..u.rows())
            .map(|i| (0..u.cols()).map(|j| u[(i, j)] * s[j]).sum())
            .collect(),
    );
    let drift = (out.norm() - s.norm()).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Error::Integrity(format!(
            "state norm drifted by {drift:.3e} under evolution"
        )));
    }
    Ok(out)
}
