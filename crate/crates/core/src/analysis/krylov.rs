use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::observable::ObservableSpec;
use super::spectral::{centred_operator, spectral_report};
use crate::error::{Result, StrobeError};
use crate::matcore::{
    condition_number, eig_with, rank_with_tol, unvec, vec, ComplexMatrix, CVector, Spectrum, Tolerances, C64,
};

const SAMPLING_CAP: usize = 100;

fn check_dims(l: &ComplexMatrix, q: &ObservableSpec) -> Result<usize> {
    let big = l.require_square()?;
    let n = q.dim();
    if n * n != big {
        return Err(StrobeError::DimensionMismatch(format!(
            "{n}x{n} observable with {big}x{big} generator"
        )));
    }
    Ok(n)
}

fn krylov_sequence(op: &ComplexMatrix, start: CVector, count: usize) -> Vec<CVector> {
    let mut out = Vec::with_capacity(count);
    let mut v = start;
    for _ in 0..count {
        let next = op.matvec(&v).expect("conformable");
        out.push(v);
        v = next;
    }
    out
}

/// `(𝕃*)^k [Q]`, with 𝕃* the conjugate transpose of the generator matrix.
pub fn heisenberg_power(l: &ComplexMatrix, q: &ObservableSpec, k: usize) -> Result<ComplexMatrix> {
    let n = check_dims(l, q)?;
    let dual = l.adjoint();
    let mut v = vec(q.matrix());
    for _ in 0..k {
        v = dual.matvec(&v)?;
    }
    unvec(&v, n, n)
}

/// Krylov vectors of the dual generator evaluated on the centred operator,
/// which spans the same subspaces with much better numerical separation.
fn centred_dual(l: &ComplexMatrix, spectrum: &Spectrum) -> ComplexMatrix {
    centred_operator(l, spectrum).adjoint()
}

/// `{vec I, vec Q, 𝕃* vec Q, …, (𝕃*)^{n²-2} vec Q}` for one observable.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovBasis {
    pub vectors: Vec<CVector>,
    /// Numerical rank of the span.
    pub rank: usize,
    /// Two-norm condition number of the column matrix.
    pub condition: f64,
}

impl KrylovBasis {
    pub fn build(l: &ComplexMatrix, q: &ObservableSpec, tol: Tolerances) -> Result<Self> {
        let spectrum = eig_with(l, tol)?;
        Self::build_with_spectrum(l, q, &spectrum, tol)
    }

    pub(crate) fn build_with_spectrum(
        l: &ComplexMatrix,
        q: &ObservableSpec,
        spectrum: &Spectrum,
        tol: Tolerances,
    ) -> Result<Self> {
        let n = check_dims(l, q)?;
        let big = n * n;
        let identity = vec(&ComplexMatrix::identity(n));

        let mut vectors = vec![identity.clone()];
        vectors.extend(krylov_sequence(&l.adjoint(), vec(q.matrix()), big - 1));

        let mut centred = vec![identity];
        centred.extend(krylov_sequence(&centred_dual(l, spectrum), vec(q.matrix()), big - 1));
        let rank = rank_with_tol(&centred, tol.rank)?;

        let condition = condition_number(&columns(&vectors));
        Ok(Self {
            vectors,
            rank,
            condition,
        })
    }

    pub fn required_rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_spanning(&self) -> bool {
        self.rank == self.required_rank()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        columns(&self.vectors)
    }
}

fn columns(vectors: &[CVector]) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix(nalgebra::DMatrix::from_columns(vectors)).expect("finite Krylov vectors")
}

/// The square matrix `M` of stacked Krylov columns.
pub fn admissibility_matrix(l: &ComplexMatrix, q: &ObservableSpec) -> Result<ComplexMatrix> {
    let n = check_dims(l, q)?;
    let mut vectors = vec![vec(&ComplexMatrix::identity(n))];
    vectors.extend(krylov_sequence(&l.adjoint(), vec(q.matrix()), n * n - 1));
    Ok(columns(&vectors))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub rank: usize,
    pub required: usize,
    pub determinant: C64,
    #[serde(with = "crate::matcore::extended_f64")]
    pub condition: f64,
}

pub fn admissibility_report(l: &ComplexMatrix, q: &ObservableSpec, tol: Tolerances) -> Result<AdmissibilityReport> {
    let basis = KrylovBasis::build(l, q, tol)?;
    let determinant = basis.matrix().as_dmatrix().determinant();
    Ok(AdmissibilityReport {
        admissible: basis.is_spanning(),
        rank: basis.rank,
        required: basis.required_rank(),
        determinant,
        condition: basis.condition,
    })
}

/// Whether `{I, Q, 𝕃*[Q], …, (𝕃*)^{n²-2}[Q]}` spans the operator space.
pub fn span_check(l: &ComplexMatrix, q: &ObservableSpec, tol: Tolerances) -> Result<bool> {
    Ok(KrylovBasis::build(l, q, tol)?.is_spanning())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrylovReport {
    pub spans: bool,
    pub rank: usize,
    pub required: usize,
    pub vector_count: usize,
    pub mu: usize,
}

/// Span test over several observables: `{vec I}` together with
/// `(𝕃*)^k vec Q_i` for k < μ.
pub fn krylov_span_check(l: &ComplexMatrix, observables: &[ObservableSpec], tol: Tolerances) -> Result<KrylovReport> {
    if observables.is_empty() {
        return Err(StrobeError::Empty("observable list".into()));
    }
    let report = spectral_report(l, tol)?;
    let dual = centred_dual(l, &report.spectrum);
    let n = check_dims(l, &observables[0])?;
    let mut vectors = vec![vec(&ComplexMatrix::identity(n))];
    for q in observables {
        check_dims(l, q)?;
        vectors.extend(krylov_sequence(&dual, vec(q.matrix()), report.mu));
    }
    let rank = rank_with_tol(&vectors, tol.rank)?;
    Ok(KrylovReport {
        spans: rank == n * n,
        rank,
        required: n * n,
        vector_count: vectors.len(),
        mu: report.mu,
    })
}

fn draw_observable(n: usize, rng: &mut ChaCha8Rng) -> Result<ObservableSpec> {
    if n == 2 {
        const MARGIN: f64 = 0.1;
        let (a, b) = loop {
            let (a, b) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if f64::abs(a - b) >= MARGIN {
                break (a, b);
            }
        };
        let mut off = || {
            let mag = rng.random_range(MARGIN..1.0);
            if rng.random_bool(0.5) { mag } else { -mag }
        };
        let (c, d) = (off(), off());
        return ObservableSpec::from_abcd(a, b, c, d);
    }
    let mut m = nalgebra::DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    ObservableSpec::new(ComplexMatrix::from_dmatrix(m)?)
}

/// Draws Hermitian observables from a seeded stream until one passes the
/// span check.
pub fn random_admissible_observable(l: &ComplexMatrix, seed: u64, tol: Tolerances) -> Result<ObservableSpec> {
    let big = l.require_square()?;
    let n = crate::matcore::exact_sqrt(big).ok_or_else(|| {
        StrobeError::DimensionMismatch(format!("generator dimension {big} is not a perfect square"))
    })?;
    let spectrum = eig_with(l, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLING_CAP {
        let q = draw_observable(n, &mut rng)?;
        if KrylovBasis::build_with_spectrum(l, &q, &spectrum, tol)?.is_spanning() {
            return Ok(q);
        }
    }
    Err(StrobeError::SamplingCapExceeded(SAMPLING_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{generator_three_level, generator_two_level, pauli, ThreeLevelParams, TwoLevelParams};

    fn optimal() -> ComplexMatrix {
        generator_two_level(&TwoLevelParams::new(0.1, 0.2, 0.3, 1.0)).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn heisenberg_basics() {
        let l = optimal();
        let q = ObservableSpec::from_abcd(1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(heisenberg_power(&l, &q, 0).unwrap(), *q.matrix());
        let id = ObservableSpec::new(ComplexMatrix::identity(2)).unwrap();
        for k in 1..4 {
            assert!(heisenberg_power(&l, &id, k).unwrap().max_abs() < 1e-15);
        }
        let wrong = ObservableSpec::new(ComplexMatrix::identity(3)).unwrap();
        assert!(heisenberg_power(&l, &wrong, 1).is_err());
    }

    #[test]
    fn explicit_determinant_for_worked_observable() {
        // 𝕃* is diagonal on (I, σ1, σ2, σ3), so det M factorises into
        // q1 q2 q3 times a Vandermonde in (-1.0, -0.8, -0.6).
        let l = optimal();
        let q = ObservableSpec::from_abcd(1.0, 0.0, 1.0, 1.0).unwrap();
        let r = admissibility_report(&l, &q, tol()).unwrap();
        assert!(r.admissible);
        assert_eq!(r.rank, 4);
        assert!(r.determinant.norm() > 1e-3);
    }

    #[test]
    fn structural_inadmissibility() {
        let l = optimal();
        for m in [pauli(1).unwrap(), ComplexMatrix::diag_real(&[1.0, 0.0]).unwrap(), ComplexMatrix::identity(2)] {
            let q = ObservableSpec::new(m).unwrap();
            assert!(!span_check(&l, &q, tol()).unwrap());
        }
    }

    #[test]
    fn krylov_span_cases() {
        let l = optimal();
        let single = [ObservableSpec::from_abcd(1.0, 0.0, 1.0, 1.0).unwrap()];
        assert!(krylov_span_check(&l, &single, tol()).unwrap().spans);
        let id = [ObservableSpec::new(ComplexMatrix::identity(2)).unwrap()];
        assert!(!krylov_span_check(&l, &id, tol()).unwrap().spans);
        let paulis: Vec<ObservableSpec> = (1..=3).map(|i| ObservableSpec::new(pauli(i).unwrap()).unwrap()).collect();
        for l in [optimal(), generator_two_level(&TwoLevelParams::new(0.2, 0.2, 0.2, 1.0)).unwrap(), ComplexMatrix::zeros(4, 4)] {
            assert!(krylov_span_check(&l, &paulis, tol()).unwrap().spans);
        }
        assert!(krylov_span_check(&l, &[], tol()).is_err());
    }

    #[test]
    fn random_observable_is_deterministic_and_admissible() {
        let l = optimal();
        let a = random_admissible_observable(&l, 7, tol()).unwrap();
        let b = random_admissible_observable(&l, 7, tol()).unwrap();
        assert_eq!(a, b);
        assert!(span_check(&l, &a, tol()).unwrap());
        let (qa, qb, qc, qd) = a.abcd().unwrap();
        assert!((qa - qb).abs() >= 0.1 && qc.abs() >= 0.1 && qd.abs() >= 0.1);
    }

    #[test]
    fn random_observable_fails_for_degenerate_generator() {
        let l = generator_two_level(&TwoLevelParams::new(0.2, 0.2, 0.3, 1.0)).unwrap();
        assert_eq!(
            random_admissible_observable(&l, 1, tol()),
            Err(StrobeError::SamplingCapExceeded(100))
        );
    }

    #[test]
    fn three_level_random_observable() {
        let p = ThreeLevelParams::new([0.1, 0.15, 0.2, 0.05, 0.08, 0.06], 1.0);
        let l = generator_three_level(&p).unwrap();
        let q = random_admissible_observable(&l, 3, tol()).unwrap();
        assert!(span_check(&l, &q, tol()).unwrap());
    }
}
