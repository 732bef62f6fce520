use serde::{Deserialize, Serialize};
use strobe_core::analysis::{AdmissibilityReport, OptimalityReport, SpectralReport};
use strobe_core::channels::ValidityReport;
use strobe_core::matcore::ComplexMatrix;
use strobe_core::reconstruct::{ConditionReport, MeasurementRecord, ReconstructionResult};

use crate::model::ModelInfo;

/// Version of every JSON report emitted by the binary.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub model: ModelInfo,
    pub validity: Option<ValidityReport>,
    pub closed_form_spectrum: Option<Vec<f64>>,
    pub spectral: SpectralReport,
    pub optimality: OptimalityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub schema_version: u32,
    pub model: ModelInfo,
    pub observable: ComplexMatrix,
    pub admissibility: AdmissibilityReport,
    /// Closed-form qubit verdict (A ≠ B, C ≠ 0, D ≠ 0), when n = 2.
    pub closed_form_admissible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthComparison {
    pub rho0: ComplexMatrix,
    pub frobenius_error: f64,
    pub psd_frobenius_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructReport {
    pub schema_version: u32,
    pub model: ModelInfo,
    pub observable: ComplexMatrix,
    pub grid: Vec<f64>,
    pub conditions: ConditionReport,
    pub records: Vec<MeasurementRecord>,
    pub result: ReconstructionResult,
    pub truth: Option<TruthComparison>,
}
