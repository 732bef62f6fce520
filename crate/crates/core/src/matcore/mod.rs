//! Dense complex linear algebra at the small sizes used here (density
//! matrices up to a few levels, superoperators up to 16x16 and a bit
//! beyond).
//!
//! Vectorisation is column-major throughout, so that
//! `vec(X Y Z) = (Zᵀ ⊗ X) vec(Y)`.

mod expm;
pub(crate) mod extended_f64;
mod matrix;
mod solve;
mod spectrum;

pub use expm::expm_apply;
pub use matrix::{ComplexMatrix, CVector, C64};
pub use solve::{
    condition_number, rank_with_tol, singular_values, solve, solve_with_tol, vandermonde_solve,
    Solution,
};
pub use spectrum::{eig, eig_with, hermitian_eig, EigenCluster, HermitianEigen, Spectrum};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StrobeError};

/// Relative rank tolerance: singular values at or below `rank × σ_max`
/// count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Eigenvalues closer than `cluster × spectral diameter` are one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank: f64,
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: DEFAULT_RANK_TOL,
            cluster: DEFAULT_CLUSTER_TOL,
        }
    }
}

impl Tolerances {
    pub fn with_rank(rank: f64) -> Self {
        Self {
            rank,
            ..Self::default()
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::wrap(a.as_dmatrix().kronecker(b.as_dmatrix()))
}

/// Column-major stacking of `m`.
pub fn vec(m: &ComplexMatrix) -> CVector {
    // nalgebra storage is already column-major.
    CVector::from_column_slice(m.as_dmatrix().as_slice())
}

pub fn unvec(v: &CVector, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.len() != rows * cols {
        return Err(StrobeError::DimensionMismatch(format!(
            "vector of length {} cannot be reshaped to {rows}x{cols}",
            v.len()
        )));
    }
    ComplexMatrix::from_dmatrix(DMatrix::from_column_slice(rows, cols, v.as_slice()))
}

/// Reshapes a length-n² vector into an n×n matrix.
pub fn unvec_square(v: &CVector) -> Result<ComplexMatrix> {
    let n = exact_sqrt(v.len()).ok_or_else(|| {
        StrobeError::DimensionMismatch(format!("length {} is not a perfect square", v.len()))
    })?;
    unvec(v, n, n)
}

/// Hilbert–Schmidt inner product `Tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(StrobeError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.as_dmatrix().dotc(b.as_dmatrix()))
}

pub(crate) fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma1() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn sigma2() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap()
    }

    #[test]
    fn kron_block_structure() {
        let k = kron(&sigma1(), &ComplexMatrix::identity(2));
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_with_scalar_identity() {
        let m = sigma2();
        assert_eq!(kron(&ComplexMatrix::identity(1), &m), m);
    }

    #[test]
    fn vec_of_observable_matches_column_stacking() {
        let (a, b, cc, d) = (0.3, -1.2, 0.7, 2.5);
        let q = ComplexMatrix::from_rows(&[vec![c(a, 0.0), c(cc, d)], vec![c(cc, -d), c(b, 0.0)]])
            .unwrap();
        let v = vec(&q);
        assert_eq!(v.as_slice(), &[c(a, 0.0), c(cc, -d), c(cc, d), c(b, 0.0)]);
    }

    #[test]
    fn vec_identity() {
        let v = vec(&ComplexMatrix::identity(2));
        assert_eq!(v.as_slice(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn unvec_length_mismatch() {
        let v = CVector::zeros(5);
        assert!(matches!(unvec(&v, 2, 2), Err(StrobeError::DimensionMismatch(_))));
        assert!(unvec_square(&v).is_err());
    }

    #[test]
    fn hs_inner_pauli() {
        let rho = ComplexMatrix::from_rows(&[vec![c(0.6, 0.0), c(0.1, 0.2)], vec![c(0.1, -0.2), c(0.4, 0.0)]])
            .unwrap();
        let tr = hs_inner(&ComplexMatrix::identity(2), &rho).unwrap();
        assert!((tr - rho.trace()).norm() < 1e-15);
        assert_eq!(hs_inner(&sigma1(), &sigma2()).unwrap(), c(0.0, 0.0));
        assert_eq!(hs_inner(&sigma1(), &sigma1()).unwrap(), c(2.0, 0.0));
        assert!(hs_inner(&sigma1(), &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn hs_inner_is_conjugate_linear_in_first_slot() {
        let a = sigma2().scale(c(0.0, 1.0));
        let b = sigma2();
        // <iσ2, σ2> = -i Tr(σ2σ2)
        assert_eq!(hs_inner(&a, &b).unwrap(), c(0.0, -2.0));
    }
}
