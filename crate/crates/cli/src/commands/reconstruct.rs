use strobe_core::matcore::ComplexMatrix;
use strobe_core::reconstruct::{
    default_time_grid_with, execute, load_records, plan, save_records, simulate_records, ExecuteOptions, PlanOptions,
    Shots, TimeGrid,
};

use crate::args::ReconstructArgs;
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::model::{load_observable, read_json, resolve_tolerances, write_json, Model};
use crate::report::{ReconstructReport, TruthComparison, SCHEMA_VERSION};

pub fn build(args: &ReconstructArgs) -> CliResult<ReconstructReport> {
    let tol = resolve_tolerances(args.common.tol)?;
    let model = Model::from_args(&args.model)?;
    let generator = model.generator()?;
    let q = load_observable(&args.observable, &generator, tol)?;
    let required = model.dim() * model.dim() - 1;

    let (grid, records, rho0) = match (&args.rho0, &args.records) {
        (Some(path), None) => {
            let rho0: ComplexMatrix = read_json(path)?;
            let shots: Shots = args.shots.parse()?;
            let seed = match (shots, args.seed) {
                (Shots::Finite(_), None) => return Err(CliError::input("--seed is required with finite --shots")),
                (_, s) => s.unwrap_or(0),
            };
            let grid = match &args.times {
                Some(t) => TimeGrid::new(t.clone())?,
                None => default_time_grid_with(&generator, required, tol)?,
            };
            let records = simulate_records(&generator, &q, &rho0, &grid, shots, seed)?;
            if let Some(out) = &args.write_records {
                save_records(out, &records)?;
            }
            (grid, records, Some(rho0))
        }
        (None, Some(path)) => {
            let records = load_records(path)?;
            let grid = TimeGrid::new(records.iter().map(|r| r.t).collect())?;
            if let Some(t) = &args.times {
                if TimeGrid::new(t.clone())? != grid {
                    return Err(CliError::input("--times does not match the record instants"));
                }
            }
            (grid, records, None)
        }
        _ => return Err(CliError::input("exactly one of --rho0 and --records is required")),
    };

    let plan = plan(&generator, &q, &grid, PlanOptions { tol, ..PlanOptions::default() })?;
    let result = execute(&plan, &records, ExecuteOptions { psd_projection: args.psd_project })?;
    let truth = rho0.map(|rho0| TruthComparison {
        frobenius_error: (&result.estimate - &rho0).frobenius_norm(),
        psd_frobenius_error: result.psd_projected.as_ref().map(|p| (p - &rho0).frobenius_norm()),
        rho0,
    });
    Ok(ReconstructReport {
        schema_version: SCHEMA_VERSION,
        model: model.info(),
        observable: q.matrix().clone(),
        grid: grid.instants().to_vec(),
        conditions: plan.conditions().clone(),
        records,
        result,
        truth,
    })
}

pub fn run(args: &ReconstructArgs) -> CliResult<u8> {
    let report = build(args)?;
    write_json(args.common.output.as_deref(), &report)?;
    Ok(EXIT_OK)
}
