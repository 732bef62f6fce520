use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, CVector, C64};
use super::DEFAULT_RANK_TOL;
use crate::error::{Result, StrobeError};

/// Singular values in descending order.
pub(crate) fn singular_values_of(m: &DMatrix<C64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    singular_values_of(m.as_dmatrix())
}

/// Two-norm condition number `σ_max / σ_min`; infinite when singular.
pub fn condition_number(m: &ComplexMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Numerical rank of a set of equal-length vectors.
///
/// Each nonzero vector is normalised before the singular values are taken,
/// so the result does not depend on vector order or on (nonzero) rescaling.
/// A singular value counts when it exceeds `tol × σ_max`.
pub fn rank_with_tol(vectors: &[CVector], tol: f64) -> Result<usize> {
    let first = vectors
        .first()
        .ok_or_else(|| StrobeError::Empty("rank of an empty vector list".into()))?;
    if !(tol > 0.0) {
        return Err(StrobeError::InvalidArgument(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let len = first.len();
    if vectors.iter().any(|v| v.len() != len) {
        return Err(StrobeError::DimensionMismatch(
            "vectors of unequal length".into(),
        ));
    }
    let columns: Vec<CVector> = vectors
        .iter()
        .filter_map(|v| {
            let norm = v.norm();
            (norm > 0.0).then(|| v / C64::new(norm, 0.0))
        })
        .collect();
    if columns.is_empty() || len == 0 {
        return Ok(0);
    }
    let m = DMatrix::from_columns(&columns);
    let sv = singular_values_of(&m);
    let threshold = tol * sv[0];
    Ok(sv.iter().filter(|&&s| s > threshold).count())
}

/// Solution of a square linear system with its two-norm condition number.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: CVector,
    pub condition: f64,
}

/// Solves `a x = b`, treating the system as singular when
/// `σ_min <= DEFAULT_RANK_TOL × σ_max`.
pub fn solve(a: &ComplexMatrix, b: &CVector) -> Result<Solution> {
    solve_with_tol(a, b, DEFAULT_RANK_TOL)
}

/// As [`solve`], with the singularity threshold given explicitly. A `tol` of
/// zero only rejects exactly singular systems.
pub fn solve_with_tol(a: &ComplexMatrix, b: &CVector, tol: f64) -> Result<Solution> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(StrobeError::DimensionMismatch(format!(
            "{n}x{n} system with right-hand side of length {}",
            b.len()
        )));
    }
    let condition = condition_number(a);
    if !(condition.is_finite() && condition * tol < 1.0) {
        return Err(StrobeError::IllConditioned {
            what: "linear system".into(),
            condition,
            limit: if tol > 0.0 { 1.0 / tol } else { f64::INFINITY },
        });
    }
    let x = a
        .as_dmatrix()
        .clone()
        .lu()
        .solve(b)
        .ok_or_else(|| StrobeError::NumericFailure("LU factorisation failed".into()))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(StrobeError::NumericFailure("non-finite solution".into()));
    }
    Ok(Solution { x, condition })
}

/// Coefficients `c` of the interpolating polynomial, `Σ_k c_k x_j^k = f_j`.
///
/// Björck–Pereyra: Newton divided differences followed by conversion to the
/// monomial basis. O(n²) and far more accurate than a generic solve on the
/// Vandermonde matrix, which is badly conditioned for clustered nodes.
pub fn vandermonde_solve(nodes: &[C64], values: &[C64]) -> Result<Vec<C64>> {
    let n = nodes.len();
    if n == 0 {
        return Err(StrobeError::Empty("interpolation nodes".into()));
    }
    if values.len() != n {
        return Err(StrobeError::DimensionMismatch(format!(
            "{n} nodes but {} values",
            values.len()
        )));
    }
    let scale = nodes.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (nodes[i] - nodes[j]).norm() <= 4.0 * f64::EPSILON * scale {
                return Err(StrobeError::RepeatedNodes);
            }
        }
    }
    let mut c = values.to_vec();
    for k in 0..n - 1 {
        for j in (k + 1..n).rev() {
            c[j] = (c[j] - c[j - 1]) / (nodes[j] - nodes[j - k - 1]);
        }
    }
    for k in (0..n - 1).rev() {
        for j in k..n - 1 {
            let next = c[j + 1];
            c[j] -= nodes[k] * next;
        }
    }
    Ok(c)
}
