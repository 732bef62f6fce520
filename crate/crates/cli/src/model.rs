use std::path::Path;

use serde::{Deserialize, Serialize};
use strobe_core::analysis::{random_admissible_observable, ObservableSpec};
use strobe_core::channels::{
    closed_form_spectrum_three_level, closed_form_spectrum_two_level, KrausFamily, LindbladSpec, ThreeLevelParams,
    TwoLevelParams, ValidityReport,
};
use strobe_core::matcore::{ComplexMatrix, Tolerances};

use crate::args::{ModelArgs, ModelKind, ObservableArgs};
use crate::error::{CliError, CliResult};

/// Environment variable holding the default relative rank tolerance.
pub const TOL_ENV: &str = "STROBE_TOL";

pub fn resolve_tolerances(flag: Option<f64>) -> CliResult<Tolerances> {
    let rank = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::input(format!("{TOL_ENV}={s:?} is not a number")))?,
            Err(_) => return Ok(Tolerances::default()),
        },
    };
    if !(rank.is_finite() && rank > 0.0 && rank < 1.0) {
        return Err(CliError::input(format!("tolerance must lie in (0, 1), got {rank}")));
    }
    Ok(Tolerances::with_rank(rank))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Output destination: the named file, or standard output.
pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub model: String,
    pub params: Vec<f64>,
    pub gamma: Option<f64>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    TwoLevel(TwoLevelParams),
    ThreeLevel(ThreeLevelParams),
    Lindblad(LindbladSpec),
}

impl Model {
    pub fn from_args(args: &ModelArgs) -> CliResult<Self> {
        let expect = |count: usize| {
            if args.params.len() == count {
                Ok(())
            } else {
                Err(CliError::input(format!(
                    "--params needs {count} comma-separated values, got {}",
                    args.params.len()
                )))
            }
        };
        if args.lindblad.is_some() && args.model != ModelKind::Lindblad {
            return Err(CliError::input("--lindblad is only valid with --model lindblad"));
        }
        match args.model {
            ModelKind::TwoLevel => {
                expect(3)?;
                let p = &args.params;
                Ok(Self::TwoLevel(TwoLevelParams::new(p[0], p[1], p[2], args.gamma)))
            }
            ModelKind::ThreeLevel => {
                expect(6)?;
                let mut a = [0.0; 6];
                a.copy_from_slice(&args.params);
                Ok(Self::ThreeLevel(ThreeLevelParams::new(a, args.gamma)))
            }
            ModelKind::Lindblad => {
                if !args.params.is_empty() {
                    return Err(CliError::input("--params is not used by the lindblad model"));
                }
                let path = args
                    .lindblad
                    .as_deref()
                    .ok_or_else(|| CliError::input("--model lindblad requires --lindblad FILE"))?;
                Ok(Self::Lindblad(read_json(path)?))
            }
        }
    }

    pub fn info(&self) -> ModelInfo {
        match self {
            Self::TwoLevel(p) => ModelInfo {
                model: "two-level".into(),
                params: p.weights().to_vec(),
                gamma: Some(p.gamma),
                dim: 2,
            },
            Self::ThreeLevel(p) => ModelInfo {
                model: "three-level".into(),
                params: p.free_weights().to_vec(),
                gamma: Some(p.gamma),
                dim: 3,
            },
            Self::Lindblad(s) => ModelInfo {
                model: "lindblad".into(),
                params: Vec::new(),
                gamma: None,
                dim: s.dim(),
            },
        }
    }

    pub fn validity(&self) -> Option<ValidityReport> {
        match self {
            Self::TwoLevel(p) => Some(p.validate()),
            Self::ThreeLevel(p) => Some(p.validate()),
            Self::Lindblad(_) => None,
        }
    }

    pub fn closed_form_spectrum(&self) -> Option<Vec<f64>> {
        match self {
            Self::TwoLevel(p) => Some(closed_form_spectrum_two_level(p)),
            Self::ThreeLevel(p) => Some(closed_form_spectrum_three_level(p)),
            Self::Lindblad(_) => None,
        }
    }

    /// Fails with exit 1 and the violated constraints when outside the channel domain.
    pub fn require_domain(&self) -> CliResult<()> {
        match self.validity() {
            Some(v) if !v.cptp_domain => Err(CliError::input(format!(
                "parameters outside the channel domain: {}",
                v.violations
                    .iter()
                    .filter(|m| !m.starts_with("distinctness"))
                    .cloned()
                    .collect::<Vec<_>>()
                    .join("; ")
            ))),
            _ => Ok(()),
        }
    }

    pub fn generator(&self) -> CliResult<ComplexMatrix> {
        self.require_domain()?;
        let family = match self {
            Self::TwoLevel(p) => KrausFamily::TwoLevel(*p),
            Self::ThreeLevel(p) => KrausFamily::ThreeLevel(*p),
            Self::Lindblad(s) => KrausFamily::LindbladGeneric(s.clone()),
        };
        Ok(family.generator()?)
    }

    pub fn dim(&self) -> usize {
        self.info().dim
    }
}

pub fn load_observable(args: &ObservableArgs, generator: &ComplexMatrix, tol: Tolerances) -> CliResult<ObservableSpec> {
    if let Some(path) = &args.observable {
        let m: ComplexMatrix = read_json(path)?;
        return Ok(ObservableSpec::new(m)?);
    }
    if let Some(v) = &args.abcd {
        if v.len() != 4 {
            return Err(CliError::input(format!("--abcd needs 4 values, got {}", v.len())));
        }
        return Ok(ObservableSpec::from_abcd(v[0], v[1], v[2], v[3])?);
    }
    let seed = args
        .observable_seed
        .ok_or_else(|| CliError::input("one of --observable, --abcd, --observable-seed is required"))?;
    Ok(random_admissible_observable(generator, seed, tol)?)
}
