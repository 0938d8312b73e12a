//! Small dense complex linear algebra for finite-dimensional quantum states.
//!
//! Basis order is fixed: index 0 is spin up `|U⟩`, index 1 is spin down `|D⟩`.
//! All values are immutable once validated; every operation returns a new value.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Tolerance used when validating state and operator invariants.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities (unitarity of constructed matrices, weight sums).
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, QuantumError>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QuantumError::InvalidArgument(
                "matrix dimensions must be positive".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(QuantumError::InvalidArgument(format!(
                "{} entries given for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QuantumError::InvalidArgument(format!(
                "entry ({}, {}) is not finite",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(QuantumError::InvalidArgument("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = Self::zeros(d, d);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * d + i] = C64::new(v, 0.0);
        }
        m
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

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(QuantumError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        Ok(self.matmul_unchecked(rhs))
    }

    fn matmul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.data[i * self.cols + k];
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += lhs * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul_unchecked(self)
                .max_abs_diff(&Self::identity(self.rows))
                <= tol
    }

    /// `(M + M†) / 2`, removing antihermitian roundoff.
    fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let data = self
            .data
            .iter()
            .zip(&adj.data)
            .map(|(a, b)| (a + b) * 0.5)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// The 2×2 case uses the closed form; larger matrices go through a
    /// Hermitian eigensolver. Only the Hermitian part of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square(), "eigenvalues of a non-square matrix");
        let h = self.hermitian_part();
        match h.rows {
            1 => vec![h.data[0].re],
            2 => {
                let (a, d, b) = (h.data[0].re, h.data[3].re, h.data[1]);
                let mean = 0.5 * (a + d);
                let radius = (0.5 * (a - d)).hypot(b.norm());
                vec![mean - radius, mean + radius]
            }
            n => {
                let m = nalgebra::DMatrix::from_row_slice(n, n, &h.data);
                let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
                ev.sort_by(f64::total_cmp);
                ev
            }
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{}", self[(i, j)]))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QuantumError::InvalidArgument("empty state vector".into()));
        }
        let norm_sqr: f64 = amplitudes.iter().map(C64::norm_sqr).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > VALIDATION_TOL {
            return Err(QuantumError::InvalidArgument(format!(
                "state is not normalized: sum |c|^2 = {norm_sqr}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis vector `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dimension {dim}"
        );
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    /// `|U⟩`
    pub fn up() -> Self {
        Self::basis(2, 0)
    }

    /// `|D⟩`
    pub fn down() -> Self {
        Self::basis(2, 1)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityMatrix {
        let d = self.dim();
        let data = (0..d * d)
            .map(|idx| self.amplitudes[idx / d] * self.amplitudes[idx % d].conj())
            .collect();
        DensityMatrix {
            matrix: ComplexMatrix {
                rows: d,
                cols: d,
                data,
            },
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(QuantumError::InvalidArgument(
                "density matrix must be square".into(),
            ));
        }
        if !matrix.is_hermitian(VALIDATION_TOL) {
            return Err(QuantumError::InvalidArgument(
                "density matrix is not Hermitian".into(),
            ));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(QuantumError::InvalidArgument(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let min_ev = matrix.hermitian_eigenvalues()[0];
        if min_ev < -VALIDATION_TOL {
            return Err(QuantumError::InvalidArgument(format!(
                "density matrix is not positive semidefinite (eigenvalue {min_ev})"
            )));
        }
        Ok(Self { matrix })
    }

    /// `I / d`
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut matrix = ComplexMatrix::identity(dim);
        for z in &mut matrix.data {
            *z /= dim as f64;
        }
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    /// Smallest eigenvalue; nonnegative up to roundoff.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.hermitian_eigenvalues()[0]
    }

    /// Internal constructor for results of trace-preserving maps on valid states.
    fn from_evolved(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }
}

/// Square unitary matrix used as a move.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryStrategy {
    matrix: ComplexMatrix,
}

impl UnitaryStrategy {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_unitary(VALIDATION_TOL) {
            return Err(QuantumError::InvalidArgument(
                "matrix is not unitary".into(),
            ));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// `F`: swaps `|U⟩` and `|D⟩`.
    pub fn flip() -> Self {
        Self {
            matrix: ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
        }
    }

    /// `N`: leaves the spin alone.
    pub fn no_flip() -> Self {
        Self::identity(2)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }
}

/// Convex combination of unitary conjugations, `ρ ↦ Σ wᵢ Uᵢ ρ Uᵢ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedUnitaryAction {
    branches: Vec<(f64, UnitaryStrategy)>,
}

impl MixedUnitaryAction {
    pub fn new(branches: Vec<(f64, UnitaryStrategy)>) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return Err(QuantumError::InvalidArgument(
                "mixed action has no branches".into(),
            ));
        };
        let dim = first.dim();
        for (w, u) in &branches {
            if !(0.0..=1.0).contains(w) {
                return Err(QuantumError::InvalidArgument(format!(
                    "branch weight {w} outside [0, 1]"
                )));
            }
            if u.dim() != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    found: u.dim(),
                });
            }
        }
        let total: f64 = branches.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > IDENTITY_TOL {
            return Err(QuantumError::InvalidArgument(format!(
                "branch weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { branches })
    }

    /// A single deterministic unitary.
    pub fn pure(u: UnitaryStrategy) -> Self {
        Self {
            branches: vec![(1.0, u)],
        }
    }

    /// `pF + (1 − p)N`.
    pub fn flip_mixture(p: f64) -> Result<Self> {
        Self::new(vec![
            (p, UnitaryStrategy::flip()),
            (1.0 - p, UnitaryStrategy::no_flip()),
        ])
    }

    pub fn branches(&self) -> &[(f64, UnitaryStrategy)] {
        &self.branches
    }

    pub fn dim(&self) -> usize {
        self.branches[0].1.dim()
    }
}

/// `U(a, b) = [[a, b], [b̄, −ā]]`.
pub fn build_u_ab(a: C64, b: C64) -> Result<UnitaryStrategy> {
    let norm_sqr = a.norm_sqr() + b.norm_sqr();
    if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > VALIDATION_TOL {
        return Err(QuantumError::InvalidArgument(format!(
            "U(a, b) requires |a|^2 + |b|^2 = 1, got {norm_sqr}"
        )));
    }
    let matrix = ComplexMatrix::new(2, 2, vec![a, b, b.conj(), -a.conj()])?;
    Ok(UnitaryStrategy { matrix })
}

pub fn evolve_pure(u: &UnitaryStrategy, state: &PureState) -> Result<PureState> {
    let amplitudes = u.matrix.mul_vec(&state.amplitudes)?;
    Ok(PureState { amplitudes })
}

fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    u.matmul_unchecked(rho).matmul_unchecked(&u.adjoint())
}

/// `U ρ U†`
pub fn evolve_density(u: &UnitaryStrategy, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: rho.dim(),
            found: u.dim(),
        });
    }
    Ok(DensityMatrix::from_evolved(conjugate(
        &u.matrix,
        &rho.matrix,
    )))
}

/// `Σᵢ wᵢ Uᵢ ρ Uᵢ†`
pub fn apply_mixed(action: &MixedUnitaryAction, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = rho.dim();
    if action.dim() != d {
        return Err(QuantumError::DimensionMismatch {
            expected: d,
            found: action.dim(),
        });
    }
    let mut acc = ComplexMatrix::zeros(d, d);
    for (w, u) in &action.branches {
        let term = conjugate(&u.matrix, &rho.matrix);
        for (a, t) in acc.data.iter_mut().zip(&term.data) {
            *a += t * *w;
        }
    }
    Ok(DensityMatrix::from_evolved(acc))
}

/// Outcome probabilities in the computational basis, clamped to `[0, 1]`.
pub fn measurement_probabilities(rho: &DensityMatrix) -> Vec<f64> {
    (0..rho.dim())
        .map(|i| rho.matrix[(i, i)].re.clamp(0.0, 1.0))
        .collect()
}
