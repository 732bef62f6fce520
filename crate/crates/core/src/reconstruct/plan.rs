use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::alpha::{alpha_from_spectrum, evolve, expectation, AlphaCoefficients};
use super::grid::TimeGrid;
use super::measure::MeasurementRecord;
use crate::analysis::{spectral_report, KrylovBasis, ObservableSpec};
use crate::error::{Result, StrobeError};
use crate::matcore::{condition_number, hermitian_eig, unvec, ComplexMatrix, Spectrum, Tolerances, C64};

/// Largest condition number accepted for the reduced and Gram matrices.
pub const DEFAULT_MAX_CONDITION: f64 = 1e8;

/// Instants must match plan instants to this relative precision.
const TIME_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanOptions {
    #[serde(with = "crate::matcore::extended_f64")]
    pub max_condition: f64,
    pub tol: Tolerances,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            max_condition: DEFAULT_MAX_CONDITION,
            tol: Tolerances::default(),
        }
    }
}

impl PlanOptions {
    /// No conditioning limit; for diagnostics only.
    pub fn unchecked() -> Self {
        Self {
            max_condition: f64::INFINITY,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    #[serde(with = "crate::matcore::extended_f64")]
    pub reduced: f64,
    #[serde(with = "crate::matcore::extended_f64")]
    pub gram: f64,
    #[serde(with = "crate::matcore::extended_f64")]
    pub krylov: f64,
}

/// Linear map from measurements at the grid instants to the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionPlan {
    generator: ComplexMatrix,
    observable: ObservableSpec,
    grid: TimeGrid,
    /// Unit of time; everything below is built from the dimensionless
    /// generator τ𝕃, so conditioning does not depend on the time unit.
    time_scale: f64,
    /// I, Q, τ𝕃*[Q], …, (τ𝕃*)^{N-2}[Q] with N = n².
    basis: Vec<ComplexMatrix>,
    /// Coordinates of (τ𝕃*)^{N-1}[Q] in `basis`, identity first.
    top_coefficients: Vec<C64>,
    alphas: Vec<AlphaCoefficients>,
    reduced: ComplexMatrix,
    /// Known part of each row, subtracted from the measurement.
    offsets: Vec<C64>,
    gram: ComplexMatrix,
    conditions: ConditionReport,
}

impl ReconstructionPlan {
    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn observable(&self) -> &ObservableSpec {
        &self.observable
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// τ = 1 / spectral radius of the generator.
    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn top_coefficients(&self) -> &[C64] {
        &self.top_coefficients
    }

    /// Interpolation coefficients of the dimensionless generator, one per
    /// instant, evaluated at t/τ.
    pub fn alphas(&self) -> &[AlphaCoefficients] {
        &self.alphas
    }

    pub fn reduced_matrix(&self) -> &ComplexMatrix {
        &self.reduced
    }

    pub fn offsets(&self) -> &[C64] {
        &self.offsets
    }

    pub fn gram_matrix(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn conditions(&self) -> &ConditionReport {
        &self.conditions
    }

    pub fn dim(&self) -> usize {
        self.observable.dim()
    }
}

fn lu_solve(m: &ComplexMatrix, rhs: DVector<C64>, what: &str) -> Result<DVector<C64>> {
    let x = m
        .as_dmatrix()
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| StrobeError::NumericFailure(format!("{what} is singular")))?;
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(StrobeError::NumericFailure(format!("non-finite solution of {what}")));
    }
    Ok(x)
}

fn check_condition(what: &str, condition: f64, limit: f64) -> Result<()> {
    if limit == f64::INFINITY || condition < limit {
        Ok(())
    } else {
        Err(StrobeError::IllConditioned {
            what: what.into(),
            condition,
            limit,
        })
    }
}

/// Builds the reconstruction map for one observable on `grid`, which must
/// have exactly n² - 1 instants.
pub fn plan(l: &ComplexMatrix, q: &ObservableSpec, grid: &TimeGrid, opts: PlanOptions) -> Result<ReconstructionPlan> {
    let report = spectral_report(l, opts.tol)?;
    if report.eta != 1 {
        return Err(StrobeError::NotOptimal { eta: report.eta });
    }
    let radius = report.spectrum.spectral_radius();
    let time_scale = if radius > 0.0 { 1.0 / radius } else { 1.0 };
    let scaled = l.scale_real(time_scale);
    let spectrum = scale_spectrum(&report.spectrum, time_scale);
    let krylov = KrylovBasis::build_with_spectrum(&scaled, q, &spectrum, opts.tol)?;
    if !krylov.is_spanning() {
        return Err(StrobeError::Inadmissible {
            rank: krylov.rank,
            required: krylov.required_rank(),
        });
    }
    let big = krylov.required_rank();
    let unknowns = big - 1;
    if grid.len() != unknowns {
        return Err(StrobeError::InvalidGrid(format!(
            "{} instants given, {unknowns} required",
            grid.len()
        )));
    }

    let columns = krylov.matrix();
    let last = krylov.vectors.last().expect("nonempty basis");
    let top = scaled.adjoint().matvec(last)?;
    let beta = lu_solve(&columns, top, "Krylov matrix")?;

    let alphas = grid
        .instants()
        .iter()
        .map(|&t| alpha_from_spectrum(&spectrum, t / time_scale))
        .collect::<Result<Vec<_>>>()?;
    if let Some(a) = alphas.iter().find(|a| a.len() != big) {
        return Err(StrobeError::NumericFailure(format!(
            "{} interpolation nodes for a {big}-dimensional generator",
            a.len()
        )));
    }

    // g_{N-1} = conj(β_I) Tr ρ + Σ_k conj(β_{k+1}) g_k, with Tr ρ = 1
    let reduced = DMatrix::from_fn(unknowns, unknowns, |j, k| {
        let a = &alphas[j].values;
        a[k] + a[big - 1] * beta[k + 1].conj()
    });
    let offsets: Vec<C64> = alphas.iter().map(|a| a.values[big - 1] * beta[0].conj()).collect();
    let reduced = ComplexMatrix::from_dmatrix(reduced)?;
    let gram = ComplexMatrix::from_dmatrix(columns.as_dmatrix().adjoint() * columns.as_dmatrix())?;

    let conditions = ConditionReport {
        reduced: condition_number(&reduced),
        gram: condition_number(&gram),
        krylov: krylov.condition,
    };
    check_condition("reduced coefficient matrix", conditions.reduced, opts.max_condition)?;
    check_condition("Gram matrix", conditions.gram, opts.max_condition)?;

    let n = q.dim();
    let basis = krylov
        .vectors
        .iter()
        .map(|v| unvec(v, n, n))
        .collect::<Result<Vec<_>>>()?;

    Ok(ReconstructionPlan {
        generator: l.clone(),
        observable: q.clone(),
        grid: grid.clone(),
        time_scale,
        basis,
        top_coefficients: beta.iter().copied().collect(),
        alphas,
        reduced,
        offsets,
        gram,
        conditions,
    })
}

fn scale_spectrum(spectrum: &Spectrum, factor: f64) -> Spectrum {
    let mut out = spectrum.clone();
    for z in &mut out.eigenvalues {
        *z *= factor;
    }
    for c in &mut out.clusters {
        c.value *= factor;
    }
    out.cluster_radius *= factor;
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ExecuteOptions {
    pub psd_projection: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    /// Hermitian, unit-trace estimate of ρ(0).
    pub estimate: ComplexMatrix,
    /// Euclidean norm of predicted minus recorded values.
    #[serde(with = "crate::matcore::extended_f64")]
    pub residual: f64,
    /// Projections ⟨B_k, ρ(0)⟩ recovered from the data.
    pub projections: Vec<C64>,
    pub raw_hermiticity_defect: f64,
    pub raw_trace: C64,
    #[serde(with = "crate::matcore::extended_f64")]
    pub min_eigenvalue: f64,
    pub psd_projected: Option<ComplexMatrix>,
}

fn check_records(plan: &ReconstructionPlan, records: &[MeasurementRecord]) -> Result<()> {
    let grid = plan.grid.instants();
    if records.len() != grid.len() {
        return Err(StrobeError::RecordMismatch(format!(
            "{} records for {} instants",
            records.len(),
            grid.len()
        )));
    }
    for (r, &t) in records.iter().zip(grid) {
        if (r.t - t).abs() > TIME_MATCH_TOL * t.abs().max(1.0) {
            return Err(StrobeError::RecordMismatch(format!("record at t = {} where plan has t = {t}", r.t)));
        }
        if !r.value.is_finite() {
            return Err(StrobeError::RecordMismatch(format!("non-finite value at t = {}", r.t)));
        }
    }
    Ok(())
}

pub fn execute(plan: &ReconstructionPlan, records: &[MeasurementRecord], opts: ExecuteOptions) -> Result<ReconstructionResult> {
    check_records(plan, records)?;
    let rhs = DVector::from_iterator(
        records.len(),
        records.iter().zip(&plan.offsets).map(|(r, off)| C64::new(r.value, 0.0) - off),
    );
    let g = lu_solve(&plan.reduced, rhs, "reduced coefficient matrix")?;

    let mut projections = vec![C64::new(1.0, 0.0)];
    projections.extend(g.iter().copied());
    let x = lu_solve(&plan.gram, DVector::from_column_slice(&projections), "Gram matrix")?;
    let n = plan.dim();
    let mut raw = ComplexMatrix::zeros(n, n);
    for (b, &c) in plan.basis.iter().zip(x.iter()) {
        raw = &raw + &b.scale(c);
    }

    let raw_trace = raw.trace();
    let raw_hermiticity_defect = raw.hermiticity_defect();
    let sym = raw.hermitian_part();
    let trace = sym.trace().re;
    if !(trace.abs() > f64::EPSILON) {
        return Err(StrobeError::NumericFailure(format!("estimate has trace {trace}")));
    }
    let estimate = sym.scale_real(1.0 / trace);

    let mut sq = 0.0;
    for r in records {
        let predicted = expectation(plan.observable.matrix(), &evolve(&plan.generator, &estimate, r.t)?)?;
        sq += (predicted - r.value).powi(2);
    }

    let eig = hermitian_eig(&estimate, 1e-12)?;
    let psd_projected = opts.psd_projection.then(|| project_psd(&eig, n));
    Ok(ReconstructionResult {
        estimate,
        residual: sq.sqrt(),
        projections,
        raw_hermiticity_defect,
        raw_trace,
        min_eigenvalue: eig.min_value(),
        psd_projected,
    })
}

/// Clips negative eigenvalues and renormalises the trace.
fn project_psd(eig: &crate::matcore::HermitianEigen, n: usize) -> ComplexMatrix {
    let clipped: Vec<f64> = eig.values.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
    }
    let mut out = DMatrix::<C64>::zeros(n, n);
    for (k, &v) in clipped.iter().enumerate() {
        let u = eig.vector(k);
        out += &u * u.adjoint() * C64::new(v / total, 0.0);
    }
    ComplexMatrix::from_dmatrix(out).expect("finite projection").hermitian_part()
}

/// `ρ̂(t)` at each requested instant.
pub fn reconstruct_trajectory(l: &ComplexMatrix, result: &ReconstructionResult, times: &[f64]) -> Result<Vec<ComplexMatrix>> {
    times.iter().map(|&t| evolve(l, &result.estimate, t)).collect()
}
