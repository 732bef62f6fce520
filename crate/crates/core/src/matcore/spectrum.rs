use std::cmp::Ordering;

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::solve::singular_values_of;
use super::Tolerances;
use crate::error::{Result, StrobeError};

const SCHUR_MAX_ITER: usize = 10_000;

/// A group of numerically coincident eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: C64,
    pub algebraic: usize,
    pub geometric: usize,
    /// Size of the largest Jordan block.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// All eigenvalues with algebraic multiplicity, ordered by real then
    /// imaginary part.
    pub eigenvalues: Vec<C64>,
    pub clusters: Vec<EigenCluster>,
    /// Absolute distance below which eigenvalues were merged.
    pub cluster_radius: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_geometric(&self) -> usize {
        self.clusters.iter().map(|c| c.geometric).max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.clusters.iter().all(|c| c.algebraic == 1)
    }

    /// Degree of the minimal polynomial, `Σ index`.
    pub fn minimal_polynomial_degree(&self) -> usize {
        self.clusters.iter().map(|c| c.index).sum()
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.clusters.iter().all(|c| c.algebraic == c.geometric)
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, a) in self.eigenvalues.iter().enumerate() {
            for b in &self.eigenvalues[i + 1..] {
                gap = gap.min((a - b).norm());
            }
        }
        gap
    }
}

pub(crate) fn cmp_complex(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn hermitian_threshold(m: &ComplexMatrix) -> f64 {
    64.0 * f64::EPSILON * m.max_abs().max(1.0)
}

/// Eigenvalues with the default tolerances.
pub fn eig(m: &ComplexMatrix) -> Result<Spectrum> {
    eig_with(m, Tolerances::default())
}

pub fn eig_with(m: &ComplexMatrix, tol: Tolerances) -> Result<Spectrum> {
    let n = m.require_square()?;
    let mut values = raw_eigenvalues(m)?;
    values.sort_by(cmp_complex);

    let mut diameter: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            diameter = diameter.max((a - b).norm());
        }
    }
    let radius = tol.cluster * diameter;

    // Single-linkage grouping.
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                if ri != rj {
                    label[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for i in 0..n {
        let r = root(&mut label, i);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, members)) => members.push(values[i]),
            None => groups.push((r, vec![values[i]])),
        }
    }

    let scale = singular_values_of(m.as_dmatrix())
        .first()
        .copied()
        .unwrap_or(0.0);
    let mut clusters = Vec::with_capacity(groups.len());
    for (_, members) in groups {
        let value = members.iter().sum::<C64>() / members.len() as f64;
        let algebraic = members.len();
        let shifted = m.as_dmatrix() - DMatrix::<C64>::identity(n, n) * value;
        let sv = singular_values_of(&shifted);
        let threshold = tol.rank * scale.max(sv.first().copied().unwrap_or(0.0));
        let rank = sv.iter().filter(|&&s| s > threshold).count();
        let geometric = (n - rank).clamp(1, algebraic);
        let index = if geometric == algebraic {
            1
        } else {
            ascent(&shifted, algebraic, tol.rank, scale.max(sv[0]))
        };
        clusters.push(EigenCluster {
            value,
            algebraic,
            geometric,
            index,
        });
    }
    clusters.sort_by(|a, b| cmp_complex(&a.value, &b.value));

    Ok(Spectrum {
        eigenvalues: values,
        clusters,
        cluster_radius: radius,
    })
}

/// Smallest k with nullity(shifted^k) reaching `algebraic`: the size of the
/// largest Jordan block. Singular values count below `rank_tol × scale^k`.
fn ascent(shifted: &DMatrix<C64>, algebraic: usize, rank_tol: f64, scale: f64) -> usize {
    let n = shifted.nrows();
    let mut power = shifted.clone();
    for k in 2..=algebraic {
        power = &power * shifted;
        let t = rank_tol * scale.powi(k as i32);
        let rank = singular_values_of(&power).iter().filter(|&&s| s > t).count();
        if n - rank >= algebraic {
            return k;
        }
    }
    algebraic
}

fn raw_eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if m.hermiticity_defect() <= hermitian_threshold(m) {
        let sym = SymmetricEigen::new(m.as_dmatrix().clone());
        return Ok(sym.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect());
    }
    let schur = Schur::try_new(m.as_dmatrix().clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| StrobeError::NumericFailure("Schur iteration did not converge".into()))?;
    let values = schur.eigenvalues().ok_or_else(|| {
        StrobeError::NumericFailure("Schur form did not reach triangular shape".into())
    })?;
    Ok(values.iter().copied().collect())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }
}

/// Symmetric eigensolver for Hermitian input. Fails when the Hermiticity
/// defect exceeds `tol`.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    m.require_square()?;
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(StrobeError::NotHermitian(defect));
    }
    let sym = SymmetricEigen::new(m.hermitian_part().into_dmatrix());
    let mut order: Vec<usize> = (0..sym.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[a].total_cmp(&sym.eigenvalues[b]));
    let values = order.iter().map(|&k| sym.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.rows(), m.rows(), |i, j| sym.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}
