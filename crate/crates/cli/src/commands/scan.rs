use std::fmt::Write as _;
use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use strobe_core::analysis::spectral_report;
use strobe_core::channels::{generator_three_level, generator_two_level, ThreeLevelParams, TwoLevelParams};
use strobe_core::matcore::Tolerances;

use crate::args::{ModelKind, ScanArgs};
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::model::{resolve_tolerances, write_text};

/// Largest number of grid points a scan may evaluate.
pub const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Rounds to 12 significant digits so that `start + i·step` prints cleanly.
fn tidy(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn parse_number(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::input(format!("axis {what}: {s:?} is not a finite number")))
}

/// `NAME=VALUE` or `NAME=START:STOP:STEP` (inclusive of STOP).
pub fn parse_axis(spec: &str) -> CliResult<Axis> {
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| CliError::input(format!("axis {spec:?} must look like NAME=VALUE or NAME=START:STOP:STEP")))?;
    let name = name.trim().to_string();
    let parts: Vec<&str> = range.split(':').collect();
    let values = match parts.as_slice() {
        [v] => vec![parse_number(v, &name)?],
        [start, stop, step] => {
            let (start, stop, step) = (
                parse_number(start, &name)?,
                parse_number(stop, &name)?,
                parse_number(step, &name)?,
            );
            if !(step > 0.0) {
                return Err(CliError::input(format!("axis {name}: step must be positive")));
            }
            if stop < start {
                Vec::new()
            } else {
                let count = ((stop - start) / step + 1e-9).floor();
                if count >= MAX_POINTS as f64 {
                    return Err(CliError::input(format!("axis {name} exceeds {MAX_POINTS} points")));
                }
                (0..=count as usize).map(|i| tidy(start + i as f64 * step)).collect()
            }
        }
        _ => return Err(CliError::input(format!("axis {name}: expected VALUE or START:STOP:STEP"))),
    };
    Ok(Axis { name, values })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub params: Vec<f64>,
    pub gamma: f64,
    pub cptp_domain: bool,
    pub nondegenerate: bool,
    /// Absent outside the channel domain.
    pub eta: Option<usize>,
    pub mu: Option<usize>,
    pub discriminant: Option<f64>,
}

fn weight_names(model: ModelKind) -> CliResult<Vec<String>> {
    let count = match model {
        ModelKind::TwoLevel => 3,
        ModelKind::ThreeLevel => 6,
        ModelKind::Lindblad => return Err(CliError::input("scan supports the two-level and three-level models")),
    };
    Ok((1..=count).map(|i| format!("a{i}")).collect())
}

fn order_axes(model: ModelKind, axes: Vec<Axis>) -> CliResult<Vec<Axis>> {
    let names = weight_names(model)?;
    let mut ordered = Vec::with_capacity(names.len());
    for name in &names {
        let mut hits = axes.iter().filter(|a| &a.name == name);
        let axis = hits
            .next()
            .ok_or_else(|| CliError::input(format!("missing --axis {name}=…")))?;
        if hits.next().is_some() {
            return Err(CliError::input(format!("axis {name} given twice")));
        }
        ordered.push(axis.clone());
    }
    if let Some(extra) = axes.iter().find(|a| !names.contains(&a.name)) {
        return Err(CliError::input(format!("unknown axis {:?}; expected {}", extra.name, names.join(","))));
    }
    Ok(ordered)
}

pub fn evaluate(model: ModelKind, params: &[f64], gamma: f64, tol: Tolerances) -> CliResult<ScanRow> {
    let (validity, generator) = match model {
        ModelKind::TwoLevel => {
            let p = TwoLevelParams::new(params[0], params[1], params[2], gamma);
            let v = p.validate();
            let g = v.cptp_domain.then(|| generator_two_level(&p)).transpose()?;
            (v, g)
        }
        ModelKind::ThreeLevel => {
            let mut a = [0.0; 6];
            a.copy_from_slice(params);
            let p = ThreeLevelParams::new(a, gamma);
            let v = p.validate();
            let g = v.cptp_domain.then(|| generator_three_level(&p)).transpose()?;
            (v, g)
        }
        ModelKind::Lindblad => return Err(CliError::input("scan supports the two-level and three-level models")),
    };
    let report = generator.map(|g| spectral_report(&g, tol)).transpose()?;
    Ok(ScanRow {
        params: params.to_vec(),
        gamma,
        cptp_domain: validity.cptp_domain,
        nondegenerate: validity.nondegenerate,
        eta: report.as_ref().map(|r| r.eta),
        mu: report.as_ref().map(|r| r.mu),
        discriminant: report.as_ref().map(|r| r.discriminant.re),
    })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn csv_line(row: &ScanRow) -> String {
    let mut line = String::new();
    for p in &row.params {
        let _ = write!(line, "{p},");
    }
    let _ = write!(
        line,
        "{},{},{},{},{},{}",
        row.gamma,
        row.cptp_domain,
        row.nondegenerate,
        opt(&row.eta),
        opt(&row.mu),
        opt(&row.discriminant)
    );
    line
}

fn header(names: &[String]) -> String {
    format!("{},gamma,cptp_domain,nondegenerate,eta,mu,discriminant", names.join(","))
}

/// Full CSV for the scan, rows in lexicographic order of axis indices
/// (a1 slowest).
pub fn render(args: &ScanArgs) -> CliResult<String> {
    let tol = resolve_tolerances(args.common.tol)?;
    if !(args.gamma.is_finite()) {
        return Err(CliError::input("--gamma must be finite"));
    }
    let axes = args.axes.iter().map(|s| parse_axis(s)).collect::<CliResult<Vec<_>>>()?;
    let axes = order_axes(args.model, axes)?;
    let total = axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.values.len()))
        .filter(|&n| n <= MAX_POINTS)
        .ok_or_else(|| CliError::input(format!("scan exceeds {MAX_POINTS} points")))?;
    if total == 0 {
        return Err(CliError::input("scan grid is empty"));
    }

    let point = |mut index: usize| -> Vec<f64> {
        let mut params = vec![0.0; axes.len()];
        for (slot, axis) in params.iter_mut().zip(&axes).rev() {
            *slot = axis.values[index % axis.values.len()];
            index /= axis.values.len();
        }
        params
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    let lines: Vec<String> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| evaluate(args.model, &point(i), args.gamma, tol).map(|r| csv_line(&r)))
            .collect::<CliResult<Vec<_>>>()
    })?;

    let names: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    let mut out = header(&names);
    out.push('\n');
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub fn run(args: &ScanArgs) -> CliResult<u8> {
    let text = render(args)?;
    write_text(args.common.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// Parses CSV produced by [`render`].
pub fn read_scan_csv<R: Read>(input: R) -> CliResult<Vec<ScanRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(|e| CliError::input(e.to_string()))?.clone();
    let fixed = ["gamma", "cptp_domain", "nondegenerate", "eta", "mu", "discriminant"];
    let weights = headers.len().checked_sub(fixed.len()).filter(|&w| w > 0);
    let weights = weights
        .filter(|&w| headers.iter().skip(w).eq(fixed.iter().copied()))
        .ok_or_else(|| CliError::input("scan CSV header does not match"))?;
    let bad = |what: &str, v: &str| CliError::input(format!("bad {what} {v:?} in scan CSV"));
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| CliError::input(e.to_string()))?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize, what: &str| f(i).parse::<f64>().map_err(|_| bad(what, f(i)));
        let flag = |i: usize, what: &str| f(i).parse::<bool>().map_err(|_| bad(what, f(i)));
        let maybe_count = |i: usize, what: &str| match f(i) {
            "" => Ok(None),
            s => s.parse::<usize>().map(Some).map_err(|_| bad(what, s)),
        };
        rows.push(ScanRow {
            params: (0..weights).map(|i| num(i, "parameter")).collect::<CliResult<_>>()?,
            gamma: num(weights, "gamma")?,
            cptp_domain: flag(weights + 1, "cptp_domain")?,
            nondegenerate: flag(weights + 2, "nondegenerate")?,
            eta: maybe_count(weights + 3, "eta")?,
            mu: maybe_count(weights + 4, "mu")?,
            discriminant: match f(weights + 5) {
                "" => None,
                s => Some(s.parse::<f64>().map_err(|_| bad("discriminant", s))?),
            },
        });
    }
    Ok(rows)
}
