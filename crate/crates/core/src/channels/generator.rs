use serde::{Deserialize, Serialize};

use super::basis::{gellmanns, paulis};
use super::params::{ThreeLevelParams, TwoLevelParams};
use crate::error::{Result, StrobeError};
use crate::matcore::{kron, ComplexMatrix, C64};

const HERMITIAN_TOL: f64 = 1e-12;

/// Hamiltonian plus weighted jump operators of a GKSL generator (ħ = 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LindbladSpecRepr", into = "LindbladSpecRepr")]
pub struct LindbladSpec {
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    rates: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct LindbladSpecRepr {
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    rates: Vec<f64>,
}

impl TryFrom<LindbladSpecRepr> for LindbladSpec {
    type Error = StrobeError;
    fn try_from(r: LindbladSpecRepr) -> Result<Self> {
        LindbladSpec::new(r.hamiltonian, r.jumps, r.rates)
    }
}

impl From<LindbladSpec> for LindbladSpecRepr {
    fn from(s: LindbladSpec) -> Self {
        Self {
            hamiltonian: s.hamiltonian,
            jumps: s.jumps,
            rates: s.rates,
        }
    }
}

impl LindbladSpec {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<ComplexMatrix>, rates: Vec<f64>) -> Result<Self> {
        let n = hamiltonian.require_square()?;
        let defect = hamiltonian.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(StrobeError::NotHermitian(defect));
        }
        if jumps.len() != rates.len() {
            return Err(StrobeError::DimensionMismatch(format!(
                "{} jump operators but {} rates",
                jumps.len(),
                rates.len()
            )));
        }
        for v in &jumps {
            if v.rows() != n || v.cols() != n {
                return Err(StrobeError::DimensionMismatch(format!(
                    "jump operator {}x{} with {n}x{n} Hamiltonian",
                    v.rows(),
                    v.cols()
                )));
            }
        }
        if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(StrobeError::InvalidDomain(format!(
                "rates must be nonnegative, got {r}"
            )));
        }
        Ok(Self {
            hamiltonian,
            jumps,
            rates,
        })
    }

    /// Purely dissipative generator.
    pub fn dissipative(jumps: Vec<ComplexMatrix>, rates: Vec<f64>) -> Result<Self> {
        let n = jumps
            .first()
            .ok_or_else(|| StrobeError::Empty("jump operators".into()))?
            .rows();
        Self::new(ComplexMatrix::zeros(n, n), jumps, rates)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }
}

/// Matrix of the generator acting on column-major vectorised states:
///
/// `-i(I ⊗ H - Hᵀ ⊗ I) + Σ γ_i (V̄_i ⊗ V_i - ½ I ⊗ V_i†V_i - ½ (V_i†V_i)ᵀ ⊗ I)`.
pub fn generator_from_lindblad(spec: &LindbladSpec) -> ComplexMatrix {
    let n = spec.dim();
    let id = ComplexMatrix::identity(n);
    let h = &spec.hamiltonian;
    let minus_i = C64::new(0.0, -1.0);
    let mut l = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(minus_i);
    for (v, &rate) in spec.jumps.iter().zip(&spec.rates) {
        if rate == 0.0 {
            continue;
        }
        let vdv = &v.adjoint() * v;
        let term = &(&kron(&v.conj(), v) - &kron(&id, &vdv).scale_real(0.5))
            - &kron(&vdv.transpose(), &id).scale_real(0.5);
        l = &l + &term.scale_real(rate);
    }
    l
}

pub fn two_level_spec(p: &TwoLevelParams) -> Result<LindbladSpec> {
    p.require_domain()?;
    LindbladSpec::dissipative(
        paulis().to_vec(),
        p.weights().iter().map(|a| p.gamma * a).collect(),
    )
}

pub fn three_level_spec(p: &ThreeLevelParams) -> Result<LindbladSpec> {
    p.require_domain()?;
    LindbladSpec::dissipative(
        gellmanns().to_vec(),
        p.weights().iter().map(|a| p.gamma * a).collect(),
    )
}

/// `γ(a1 σ1ᵀ⊗σ1 + a2 σ2ᵀ⊗σ2 + a3 σ3ᵀ⊗σ3 - (a1+a2+a3) I₄)`.
pub fn generator_two_level(p: &TwoLevelParams) -> Result<ComplexMatrix> {
    p.require_domain()?;
    let mut l = ComplexMatrix::identity(4).scale_real(-p.weight_sum());
    for (s, a) in paulis().iter().zip(p.weights()) {
        l = &l + &kron(&s.transpose(), s).scale_real(a);
    }
    Ok(l.scale_real(p.gamma))
}

/// Qutrit generator, assembled through [`generator_from_lindblad`] with the
/// Gell-Mann matrices as jump operators.
pub fn generator_three_level(p: &ThreeLevelParams) -> Result<ComplexMatrix> {
    Ok(generator_from_lindblad(&three_level_spec(p)?))
}
