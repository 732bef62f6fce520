use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;

use super::matrix::{ComplexMatrix, CVector, C64};
use crate::error::{Result, StrobeError};

/// `exp(m t) v`.
///
/// Hermitian `m` goes through its eigendecomposition; everything else uses
/// Padé scaling-and-squaring.
pub fn expm_apply(m: &ComplexMatrix, t: f64, v: &CVector) -> Result<CVector> {
    let n = m.require_square()?;
    if v.len() != n {
        return Err(StrobeError::DimensionMismatch(format!(
            "{n}x{n} generator applied to vector of length {}",
            v.len()
        )));
    }
    if !t.is_finite() {
        return Err(StrobeError::InvalidArgument(format!("time {t} is not finite")));
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let out = if m.hermiticity_defect() <= 64.0 * f64::EPSILON * m.max_abs().max(1.0) {
        let sym = SymmetricEigen::new(m.hermitian_part().into_dmatrix());
        let u = &sym.eigenvectors;
        let coeffs = u.adjoint() * v;
        let scaled = DVector::from_iterator(
            n,
            coeffs
                .iter()
                .zip(sym.eigenvalues.iter())
                .map(|(c, &lam)| c * (lam * t).exp()),
        );
        u * scaled
    } else {
        let exp = (m.as_dmatrix() * C64::new(t, 0.0)).exp();
        exp * v
    };
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(StrobeError::NumericFailure(
            "matrix exponential overflowed".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time_is_identity() {
        let m = ComplexMatrix::from_real_rows(&[&[0.3, 1.0], &[-2.0, 0.1]]).unwrap();
        let v = CVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0)]);
        assert_eq!(expm_apply(&m, 0.0, &v).unwrap(), v);
    }

    #[test]
    fn scalar_decay() {
        let m = ComplexMatrix::diag_real(&[-1.0]).unwrap();
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0)]);
        let out = expm_apply(&m, 2.5, &v).unwrap();
        assert!((out[0].re - (-2.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let t = 0.8f64;
        let out = expm_apply(&m, t, &v).unwrap();
        assert!((out[0].re - t.cos()).abs() < 1e-14);
        assert!((out[1].re - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn overflow_reported() {
        let m = ComplexMatrix::diag_real(&[1.0]).unwrap();
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0)]);
        assert!(matches!(
            expm_apply(&m, 1e6, &v),
            Err(StrobeError::NumericFailure(_))
        ));
    }
}
