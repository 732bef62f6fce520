use crate::error::{Result, StrobeError};
use crate::matcore::{ComplexMatrix, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pauli matrix σ_i, `i` in 1..=3.
pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    let data = match i {
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => return Err(StrobeError::IndexOutOfRange { index: i, max: 3 }),
    };
    ComplexMatrix::from_row_major(2, 2, data.to_vec())
}

/// Gell-Mann matrix λ_i, `i` in 1..=8, normalised to Tr(λ_i λ_j) = 2δ_ij.
pub fn gellmann(i: usize) -> Result<ComplexMatrix> {
    let mut m = [ZERO; 9];
    let mut set = |r: usize, c: usize, z: C64| m[3 * r + c] = z;
    match i {
        1 => {
            set(0, 1, ONE);
            set(1, 0, ONE);
        }
        2 => {
            set(0, 1, -I);
            set(1, 0, I);
        }
        3 => {
            set(0, 0, ONE);
            set(1, 1, -ONE);
        }
        4 => {
            set(0, 2, ONE);
            set(2, 0, ONE);
        }
        5 => {
            set(0, 2, -I);
            set(2, 0, I);
        }
        6 => {
            set(1, 2, ONE);
            set(2, 1, ONE);
        }
        7 => {
            set(1, 2, -I);
            set(2, 1, I);
        }
        8 => {
            let s = 1.0 / 3f64.sqrt();
            set(0, 0, C64::new(s, 0.0));
            set(1, 1, C64::new(s, 0.0));
            set(2, 2, C64::new(-2.0 * s, 0.0));
        }
        _ => return Err(StrobeError::IndexOutOfRange { index: i, max: 8 }),
    }
    ComplexMatrix::from_row_major(3, 3, m.to_vec())
}

pub(crate) fn paulis() -> [ComplexMatrix; 3] {
    [1, 2, 3].map(|i| pauli(i).expect("index in range"))
}

pub(crate) fn gellmanns() -> [ComplexMatrix; 8] {
    [1, 2, 3, 4, 5, 6, 7, 8].map(|i| gellmann(i).expect("index in range"))
}
