mod krylov;
mod observable;
mod spectral;

pub use krylov::{
    admissibility_matrix, admissibility_report, heisenberg_power, krylov_span_check, random_admissible_observable,
    span_check, AdmissibilityReport, KrylovBasis, KrylovReport,
};
pub use observable::{two_level_admissible, ObservableSpec, HERMITIAN_TOL};
pub use spectral::{
    discriminant, optimality_from, optimality_report, spectral_report, OptimalityReport, SpectralReport,
};
