use serde::{Deserialize, Serialize};

use super::basis::{gellmanns, paulis};
use super::generator::{generator_from_lindblad, generator_three_level, generator_two_level, LindbladSpec};
use super::params::{ThreeLevelParams, TwoLevelParams};
use crate::error::{Result, StrobeError};
use crate::matcore::{expm_apply, unvec, vec, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum KrausFamily {
    TwoLevel(TwoLevelParams),
    ThreeLevel(ThreeLevelParams),
    LindbladGeneric(LindbladSpec),
}

impl KrausFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::TwoLevel(_) => "two-level",
            Self::ThreeLevel(_) => "three-level",
            Self::LindbladGeneric(_) => "lindblad-generic",
        }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        match self {
            Self::TwoLevel(_) => 2,
            Self::ThreeLevel(_) => 3,
            Self::LindbladGeneric(s) => s.dim(),
        }
    }

    pub fn generator(&self) -> Result<ComplexMatrix> {
        match self {
            Self::TwoLevel(p) => generator_two_level(p),
            Self::ThreeLevel(p) => generator_three_level(p),
            Self::LindbladGeneric(s) => Ok(generator_from_lindblad(s)),
        }
    }

    /// Kraus operators at time `t`: K₀ = √(1 - f(1-κ)) I followed by
    /// √(a_i(1-κ)) B_i over the Pauli or Gell-Mann basis, κ = e^{-γt}.
    pub fn kraus_at(&self, t: f64) -> Result<Vec<ComplexMatrix>> {
        if !(t >= 0.0) {
            return Err(StrobeError::NegativeTime(t));
        }
        let (gamma, total, weights, basis): (f64, f64, Vec<f64>, Vec<ComplexMatrix>) = match self {
            Self::TwoLevel(p) => {
                p.require_domain()?;
                (p.gamma, p.weight_sum(), p.weights().to_vec(), paulis().to_vec())
            }
            Self::ThreeLevel(p) => {
                p.require_domain()?;
                (p.gamma, p.dissipation(), p.weights().to_vec(), gellmanns().to_vec())
            }
            Self::LindbladGeneric(_) => return Err(StrobeError::UnsupportedModel("lindblad-generic")),
        };
        let n = self.dim();
        // 1 - κ(t), written to stay accurate at small γt
        let decay = -(-gamma * t).exp_m1();
        let mut ops = Vec::with_capacity(weights.len() + 1);
        ops.push(ComplexMatrix::identity(n).scale_real((1.0 - total * decay).max(0.0).sqrt()));
        for (a, b) in weights.iter().zip(&basis) {
            ops.push(b.scale_real((a * decay).max(0.0).sqrt()));
        }
        Ok(ops)
    }

    /// `Σ K_i ρ K_i†` at time `t`.
    pub fn apply_kraus(&self, t: f64, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if rho.rows() != n || rho.cols() != n {
            return Err(StrobeError::DimensionMismatch(format!(
                "{}x{} state for a {n}-level family",
                rho.rows(),
                rho.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for k in self.kraus_at(t)? {
            out = &out + &(&(&k * rho) * &k.adjoint());
        }
        Ok(out)
    }

    /// Frobenius distance between the Kraus map and the semigroup `exp(𝕃t)`
    /// applied to `rho`. The two agree only to first order in t.
    pub fn kraus_vs_semigroup_deviation(&self, t: f64, rho: &ComplexMatrix) -> Result<f64> {
        if matches!(self, Self::LindbladGeneric(_)) {
            return Err(StrobeError::UnsupportedModel("lindblad-generic"));
        }
        let kraus = self.apply_kraus(t, rho)?;
        let l = self.generator()?;
        let n = self.dim();
        let semigroup = unvec(&expm_apply(&l, t, &vec(rho))?, n, n)?;
        Ok((&kraus - &semigroup).frobenius_norm())
    }
}

pub fn kraus_at(f: &KrausFamily, t: f64) -> Result<Vec<ComplexMatrix>> {
    f.kraus_at(t)
}

pub fn apply_kraus(f: &KrausFamily, t: f64, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    f.apply_kraus(t, rho)
}

pub fn kraus_vs_semigroup_deviation(f: &KrausFamily, t: f64, rho: &ComplexMatrix) -> Result<f64> {
    f.kraus_vs_semigroup_deviation(t, rho)
}
