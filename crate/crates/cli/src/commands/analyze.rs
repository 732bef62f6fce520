use strobe_core::analysis::{optimality_from, spectral_report};

use crate::args::AnalyzeArgs;
use crate::error::{CliResult, EXIT_NEGATIVE, EXIT_OK};
use crate::model::{resolve_tolerances, write_json, Model};
use crate::report::{AnalyzeReport, SCHEMA_VERSION};

pub fn build(args: &AnalyzeArgs) -> CliResult<AnalyzeReport> {
    let tol = resolve_tolerances(args.common.tol)?;
    let model = Model::from_args(&args.model)?;
    let generator = model.generator()?;
    let spectral = spectral_report(&generator, tol)?;
    let optimality = optimality_from(&spectral);
    Ok(AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        model: model.info(),
        validity: model.validity(),
        closed_form_spectrum: model.closed_form_spectrum(),
        spectral,
        optimality,
    })
}

pub fn run(args: &AnalyzeArgs) -> CliResult<u8> {
    let report = build(args)?;
    write_json(args.common.output.as_deref(), &report)?;
    Ok(if report.optimality.optimal { EXIT_OK } else { EXIT_NEGATIVE })
}
