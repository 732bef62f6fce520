use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, StrobeError};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;

/// Dense complex matrix with at least one row and one column and finite
/// entries.
///
/// Arithmetic operators follow nalgebra and panic on shape mismatch; the
/// checked free functions in [`crate::matcore`] return errors instead.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn from_dmatrix(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(StrobeError::Empty("matrix with zero rows or columns".into()));
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(StrobeError::NonFinite);
        }
        Ok(Self { inner })
    }

    /// Wraps the result of an internal computation whose inputs were
    /// already validated.
    pub(crate) fn wrap(inner: DMatrix<C64>) -> Self {
        debug_assert!(inner.nrows() > 0 && inner.ncols() > 0);
        Self { inner }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(StrobeError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &data))
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(StrobeError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), ncols, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimensions must be positive");
        Self::wrap(DMatrix::identity(n, n))
    }

    pub fn diag(entries: &[C64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(StrobeError::Empty("diagonal".into()));
        }
        Self::from_dmatrix(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn diag_real(entries: &[f64]) -> Result<Self> {
        let entries: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&entries)
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(StrobeError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.inner
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.inner.transpose())
    }

    pub fn conj(&self) -> Self {
        Self::wrap(self.inner.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.inner.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::wrap(&self.inner * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entrywise modulus of `self - self†`. Infinite for non-square
    /// input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.inner - self.inner.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(X + X†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::wrap((&self.inner + self.inner.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn matvec(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.cols() {
            return Err(StrobeError::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows(),
                self.cols(),
                v.len()
            )));
        }
        Ok(&self.inner * v)
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != other.rows() {
            return Err(StrobeError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Self::wrap(&self.inner * &other.inner))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.inner.shape(), other.inner.shape());
        (&self.inner - &other.inner)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.inner[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix::wrap($trait::$method(&self.inner, &rhs.inner))
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix::wrap($trait::$method(self.inner, rhs.inner))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::wrap(-&self.inner)
    }
}

/// On-disk form: `{"rows": r, "cols": c, "data": [[re, im], ...]}` with
/// row-major flattening.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: self.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let data = repr.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_row_major(repr.rows, repr.cols, data).map_err(serde::de::Error::custom)
    }
}
