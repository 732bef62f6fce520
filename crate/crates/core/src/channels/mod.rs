//! Parametric Kraus channel families, their parameter domains, and the
//! matrix form of their generators.

mod basis;
mod generator;
mod kraus;
mod params;

pub use basis::{gellmann, pauli};
pub use generator::{
    generator_from_lindblad, generator_three_level, generator_two_level, three_level_spec,
    two_level_spec, LindbladSpec,
};
pub use kraus::{apply_kraus, kraus_at, kraus_vs_semigroup_deviation, KrausFamily};
pub use params::{
    closed_form_spectrum_three_level, closed_form_spectrum_two_level, embed_one_param,
    validate_three_level, validate_two_level, ThreeLevelParams, TwoLevelParams, ValidityReport,
    DISTINCT_TOL,
};
