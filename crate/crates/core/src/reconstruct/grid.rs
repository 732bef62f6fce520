use serde::{Deserialize, Serialize};

use crate::error::{Result, StrobeError};
use crate::matcore::{eig_with, ComplexMatrix, Tolerances};

/// Strictly increasing positive measurement instants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    instants: Vec<f64>,
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = StrobeError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(g: TimeGrid) -> Self {
        g.instants
    }
}

impl TimeGrid {
    pub fn new(instants: Vec<f64>) -> Result<Self> {
        let first = *instants
            .first()
            .ok_or_else(|| StrobeError::InvalidGrid("no instants".into()))?;
        if instants.iter().any(|t| !t.is_finite()) {
            return Err(StrobeError::InvalidGrid("non-finite instant".into()));
        }
        if first <= 0.0 {
            return Err(StrobeError::InvalidGrid(format!("first instant {first} is not positive")));
        }
        if let Some(w) = instants.windows(2).find(|w| w[1] <= w[0]) {
            return Err(StrobeError::InvalidGrid(format!(
                "instants must strictly increase, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self { instants })
    }

    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    pub fn len(&self) -> usize {
        self.instants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }

    /// Last instant.
    pub fn horizon(&self) -> f64 {
        *self.instants.last().expect("nonempty grid")
    }
}

/// `t_j = j T / p` for j = 1..=p, with `T = 1 / max|λ|`.
pub fn default_time_grid(l: &ComplexMatrix, count: usize) -> Result<TimeGrid> {
    default_time_grid_with(l, count, Tolerances::default())
}

pub fn default_time_grid_with(l: &ComplexMatrix, count: usize, tol: Tolerances) -> Result<TimeGrid> {
    if count == 0 {
        return Err(StrobeError::InvalidGrid("at least one instant is required".into()));
    }
    let radius = eig_with(l, tol)?.spectral_radius();
    if !(radius > 0.0) {
        return Err(StrobeError::InvalidGrid("zero spectrum has no decay scale".into()));
    }
    let horizon = 1.0 / radius;
    TimeGrid::new((1..=count).map(|j| j as f64 * horizon / count as f64).collect())
}
