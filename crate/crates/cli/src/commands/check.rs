use strobe_core::analysis::{admissibility_report, two_level_admissible};

use crate::args::CheckArgs;
use crate::error::{CliResult, EXIT_NEGATIVE, EXIT_OK};
use crate::model::{load_observable, resolve_tolerances, write_json, Model};
use crate::report::{ObservableReport, SCHEMA_VERSION};

pub fn build(args: &CheckArgs) -> CliResult<ObservableReport> {
    let tol = resolve_tolerances(args.common.tol)?;
    let model = Model::from_args(&args.model)?;
    let generator = model.generator()?;
    let q = load_observable(&args.observable, &generator, tol)?;
    let admissibility = admissibility_report(&generator, &q, tol)?;
    let closed_form_admissible = match q.dim() {
        2 => Some(two_level_admissible(q.matrix())?),
        _ => None,
    };
    Ok(ObservableReport {
        schema_version: SCHEMA_VERSION,
        model: model.info(),
        observable: q.matrix().clone(),
        admissibility,
        closed_form_admissible,
    })
}

pub fn run(args: &CheckArgs) -> CliResult<u8> {
    let report = build(args)?;
    write_json(args.common.output.as_deref(), &report)?;
    Ok(if report.admissibility.admissible { EXIT_OK } else { EXIT_NEGATIVE })
}
