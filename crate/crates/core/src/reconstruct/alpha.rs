use serde::{Deserialize, Serialize};

use crate::error::{Result, StrobeError};
use crate::matcore::{eig_with, expm_apply, unvec, vandermonde_solve, vec, CVector, ComplexMatrix, Spectrum, Tolerances, C64};

/// Coefficients with `exp(𝕃t) = Σ_k α_k(t) 𝕃^k`, obtained by interpolating
/// `e^{λt}` on the distinct eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaCoefficients {
    pub t: f64,
    /// Interpolation nodes: distinct eigenvalues of the generator.
    pub nodes: Vec<C64>,
    /// α_0, …, α_{μ-1}.
    pub values: Vec<C64>,
}

impl AlphaCoefficients {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max_j |Σ_k α_k λ_j^k - e^{λ_j t}|`.
    pub fn interpolation_residual(&self) -> f64 {
        self.nodes
            .iter()
            .map(|&z| (horner(&self.values, z) - (z * self.t).exp()).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_k α_k 𝕃^k v`.
    pub fn apply(&self, l: &ComplexMatrix, v: &CVector) -> Result<CVector> {
        let mut acc = v.scale(0.0);
        for &a in self.values.iter().rev() {
            acc = l.matvec(&acc)? + v * a;
        }
        Ok(acc)
    }
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn alpha_at(l: &ComplexMatrix, t: f64) -> Result<AlphaCoefficients> {
    alpha_from_spectrum(&eig_with(l, Tolerances::default())?, t)
}

pub(crate) fn alpha_from_spectrum(spectrum: &Spectrum, t: f64) -> Result<AlphaCoefficients> {
    if !t.is_finite() {
        return Err(StrobeError::InvalidArgument(format!("time {t} is not finite")));
    }
    if !spectrum.is_diagonalizable() {
        // the minimal polynomial has a repeated root
        return Err(StrobeError::RepeatedNodes);
    }
    let nodes: Vec<C64> = spectrum.clusters.iter().map(|c| c.value).collect();
    let targets: Vec<C64> = nodes.iter().map(|&z| (z * t).exp()).collect();
    let values = vandermonde_solve(&nodes, &targets)?;
    Ok(AlphaCoefficients { t, nodes, values })
}

fn generator_side(l: &ComplexMatrix) -> Result<usize> {
    let big = l.require_square()?;
    crate::matcore::exact_sqrt(big)
        .ok_or_else(|| StrobeError::DimensionMismatch(format!("generator dimension {big} is not a perfect square")))
}

/// `ρ(t) = unvec(exp(𝕃t) vec ρ0)`.
pub fn evolve(l: &ComplexMatrix, rho0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = generator_side(l)?;
    if rho0.rows() != n || rho0.cols() != n {
        return Err(StrobeError::DimensionMismatch(format!(
            "{}x{} state for a {n}-level generator",
            rho0.rows(),
            rho0.cols()
        )));
    }
    if t < 0.0 {
        return Err(StrobeError::NegativeTime(t));
    }
    unvec(&expm_apply(l, t, &vec(rho0))?, n, n)
}

/// `Tr(Q ρ)`, real part.
pub fn expectation(q: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    Ok(q.matmul(rho)?.trace().re)
}
