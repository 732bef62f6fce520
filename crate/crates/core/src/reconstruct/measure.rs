use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::alpha::{evolve, expectation};
use super::grid::TimeGrid;
use crate::analysis::ObservableSpec;
use crate::error::{Result, StrobeError};
use crate::matcore::{hermitian_eig, ComplexMatrix};

/// Most negative eigenvalue tolerated in a density matrix.
pub const PSD_TOL: f64 = -1e-8;
const STATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ShotsRepr", into = "ShotsRepr")]
pub enum Shots {
    Exact,
    Finite(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ShotsRepr {
    Count(u64),
    Label(String),
}

impl TryFrom<ShotsRepr> for Shots {
    type Error = StrobeError;
    fn try_from(r: ShotsRepr) -> Result<Self> {
        match r {
            ShotsRepr::Count(n) => Shots::finite(n),
            ShotsRepr::Label(s) => s.parse(),
        }
    }
}

impl From<Shots> for ShotsRepr {
    fn from(s: Shots) -> Self {
        match s {
            Shots::Exact => ShotsRepr::Label("exact".into()),
            Shots::Finite(n) => ShotsRepr::Count(n),
        }
    }
}

impl Shots {
    pub fn finite(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(StrobeError::InvalidArgument("shot count must be at least 1".into()));
        }
        Ok(Self::Finite(n))
    }
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact => f.write_str("exact"),
            Self::Finite(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Shots {
    type Err = StrobeError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Self::Exact);
        }
        let n = s
            .parse::<u64>()
            .map_err(|_| StrobeError::InvalidArgument(format!("shots must be \"exact\" or a positive integer, got {s:?}")))?;
        Self::finite(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub t: f64,
    pub value: f64,
    pub shots: Shots,
}

/// Checks Hermiticity, unit trace and positivity to within simulation tolerances.
pub fn validate_density_matrix(rho: &ComplexMatrix) -> Result<()> {
    rho.require_square()?;
    let defect = rho.hermiticity_defect();
    if defect > STATE_TOL {
        return Err(StrobeError::InvalidDensityMatrix(format!("Hermiticity defect {defect:e}")));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
        return Err(StrobeError::InvalidDensityMatrix(format!("trace {trace} is not 1")));
    }
    let min = hermitian_eig(rho, STATE_TOL)?.min_value();
    if min < PSD_TOL {
        return Err(StrobeError::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

fn check_pair(q: &ObservableSpec, rho: &ComplexMatrix) -> Result<()> {
    if q.dim() != rho.rows() || !rho.is_square() {
        return Err(StrobeError::DimensionMismatch(format!(
            "{0}x{0} observable with {1}x{2} state",
            q.dim(),
            rho.rows(),
            rho.cols()
        )));
    }
    validate_density_matrix(rho)
}

/// Mean of `shots` Born-rule draws of an eigenvalue of `q`, or `Tr(Qρ)` when exact.
pub fn measure(t: f64, q: &ObservableSpec, rho: &ComplexMatrix, shots: Shots, seed: u64) -> Result<MeasurementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_with(t, q, rho, shots, &mut rng)
}

fn measure_with(
    t: f64,
    q: &ObservableSpec,
    rho: &ComplexMatrix,
    shots: Shots,
    rng: &mut ChaCha8Rng,
) -> Result<MeasurementRecord> {
    check_pair(q, rho)?;
    let value = match shots {
        Shots::Exact => expectation(q.matrix(), rho)?,
        Shots::Finite(count) => {
            let eig = hermitian_eig(q.matrix(), crate::analysis::HERMITIAN_TOL)?;
            let probs: Vec<f64> = (0..eig.values.len())
                .map(|k| {
                    let v = eig.vector(k);
                    v.dotc(&(rho.as_dmatrix() * &v)).re.max(0.0)
                })
                .collect();
            let counts = multinomial(count, &probs, rng)?;
            let total: f64 = counts.iter().zip(&eig.values).map(|(&c, &x)| c as f64 * x).sum();
            total / count as f64
        }
    };
    Ok(MeasurementRecord { t, value, shots })
}

/// Multinomial counts drawn as a chain of conditional binomials.
fn multinomial(trials: u64, probs: &[f64], rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let mut mass: f64 = probs.iter().sum();
    let mut remaining = trials;
    let mut counts = Vec::with_capacity(probs.len());
    for (k, &p) in probs.iter().enumerate() {
        if k + 1 == probs.len() {
            counts.push(remaining);
            break;
        }
        let share = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = if remaining == 0 {
            0
        } else {
            Binomial::new(remaining, share)
                .map_err(|e| StrobeError::NumericFailure(format!("binomial sampler: {e}")))?
                .sample(rng)
        };
        counts.push(draw);
        remaining -= draw;
        mass -= p;
    }
    Ok(counts)
}

/// Records at every grid instant from fresh copies of `rho0`. The instant
/// with index j samples from stream j of the seeded generator, so results
/// depend only on `(seed, shots)`.
pub fn simulate_records(
    l: &ComplexMatrix,
    q: &ObservableSpec,
    rho0: &ComplexMatrix,
    grid: &TimeGrid,
    shots: Shots,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    validate_density_matrix(rho0)?;
    grid.instants()
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let rho_t = evolve(l, rho0, t)?.hermitian_part();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            measure_with(t, q, &rho_t, shots, &mut rng)
        })
        .collect()
}

fn io_err(e: impl fmt::Display) -> StrobeError {
    StrobeError::Io(e.to_string())
}

/// CSV with header `t,value,shots`; floats use shortest round-trip formatting.
pub fn write_records_csv<W: Write>(out: W, records: &[MeasurementRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "value", "shots"]).map_err(io_err)?;
    for r in records {
        w.write_record([r.t.to_string(), r.value.to_string(), r.shots.to_string()])
            .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<MeasurementRecord>> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rd.headers().map_err(io_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| StrobeError::Io(format!("missing column {name:?}")))
    };
    let (ti, vi, si) = (col("t")?, col("value")?, col("shots")?);
    let mut records: Vec<MeasurementRecord> = Vec::new();
    for (line, row) in rd.records().enumerate() {
        let row = row.map_err(io_err)?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize, name: &str| {
            field(i)
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| StrobeError::Io(format!("row {}: bad {name} {:?}", line + 1, field(i))))
        };
        let t = num(ti, "t")?;
        if records.iter().any(|r| r.t == t) {
            return Err(StrobeError::Io(format!("row {}: duplicate time {t}", line + 1)));
        }
        records.push(MeasurementRecord {
            t,
            value: num(vi, "value")?,
            shots: field(si).parse()?,
        });
    }
    Ok(records)
}

pub fn save_records(path: &Path, records: &[MeasurementRecord]) -> Result<()> {
    write_records_csv(std::fs::File::create(path).map_err(io_err)?, records)
}

pub fn load_records(path: &Path) -> Result<Vec<MeasurementRecord>> {
    read_records_csv(std::fs::File::open(path).map_err(io_err)?)
}
