use serde::{Deserialize, Serialize};

use crate::error::{Result, StrobeError};
use crate::matcore::{ComplexMatrix, C64};

pub const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct ObservableSpec {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for ObservableSpec {
    type Error = StrobeError;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<ObservableSpec> for ComplexMatrix {
    fn from(q: ObservableSpec) -> Self {
        q.matrix
    }
}

impl ObservableSpec {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.require_square()?;
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(StrobeError::NotHermitian(defect));
        }
        Ok(Self { matrix })
    }

    /// Qubit observable `[[A, C+iD], [C-iD, B]]`.
    pub fn from_abcd(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(ComplexMatrix::from_row_major(
            2,
            2,
            vec![C64::new(a, 0.0), C64::new(c, d), C64::new(c, -d), C64::new(b, 0.0)],
        )?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `(A, B, C, D)` for a qubit observable.
    pub fn abcd(&self) -> Option<(f64, f64, f64, f64)> {
        (self.dim() == 2).then(|| {
            let off = self.matrix.get(0, 1);
            (self.matrix.get(0, 0).re, self.matrix.get(1, 1).re, off.re, off.im)
        })
    }
}

/// Closed-form qubit criterion: A ≠ B, C ≠ 0 and D ≠ 0.
pub fn two_level_admissible(q: &ComplexMatrix) -> Result<bool> {
    if q.rows() != 2 || q.cols() != 2 {
        return Err(StrobeError::DimensionMismatch(format!(
            "qubit criterion needs a 2x2 observable, got {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    let q = ObservableSpec::new(q.clone())?;
    let (a, b, c, d) = q.abcd().expect("2x2");
    const TOL: f64 = 1e-12;
    Ok((a - b).abs() > TOL && c.abs() > TOL && d.abs() > TOL)
}
