use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum GridError {
    #[error("grid points must be strictly increasing")]
    NotIncreasing,
    #[error("log-spaced grids need strictly positive points")]
    NonPositive,
    #[error("linear grids need non-negative points")]
    Negative,
    #[error("grid point is not finite")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Log,
    Linear,
}

/// Strictly increasing angular frequencies, rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    spacing: Spacing,
}

impl FrequencyGrid {
    pub fn from_points(points: Vec<f64>, spacing: Spacing) -> Result<Self, GridError> {
        if points.iter().any(|w| !w.is_finite()) {
            return Err(GridError::NonFinite);
        }
        match spacing {
            Spacing::Log if points.iter().any(|&w| w <= 0.0) => return Err(GridError::NonPositive),
            Spacing::Linear if points.iter().any(|&w| w < 0.0) => return Err(GridError::Negative),
            _ => {}
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GridError::NotIncreasing);
        }
        Ok(Self { points, spacing })
    }

    /// `count` log-spaced points from `lo` to `hi` inclusive.
    pub fn log(lo: f64, hi: f64, count: usize) -> Result<Self, GridError> {
        if !(lo > 0.0 && hi > 0.0) {
            return Err(GridError::NonPositive);
        }
        let (a, b) = (lo.log10(), hi.log10());
        let points = spaced(a, b, count).map(|e| 10f64.powf(e)).collect();
        Self::from_points(points, Spacing::Log)
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self, GridError> {
        Self::from_points(spaced(lo, hi, count).collect(), Spacing::Linear)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn spaced(a: f64, b: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| match count {
        1 => a,
        _ if i == count - 1 => b,
        _ => a + (b - a) * i as f64 / (count - 1) as f64,
    })
}
