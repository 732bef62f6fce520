//! Stroboscopic reconstruction: measurements of one observable at n² - 1
//! instants determine the initial state of an optimal generator.

mod alpha;
mod grid;
mod measure;
mod plan;

pub use alpha::{alpha_at, evolve, expectation, AlphaCoefficients};
pub use grid::{default_time_grid, default_time_grid_with, TimeGrid};
pub use measure::{
    load_records, measure, read_records_csv, save_records, simulate_records, validate_density_matrix,
    write_records_csv, MeasurementRecord, Shots, PSD_TOL,
};
pub use plan::{
    execute, plan, reconstruct_trajectory, ConditionReport, ExecuteOptions, PlanOptions, ReconstructionPlan,
    ReconstructionResult, DEFAULT_MAX_CONDITION,
};
