use serde::Serialize;
use thiserror::Error;

use super::{FrequencyResponse, GridMismatch, Spacing};

#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum CompareError {
    #[error(transparent)]
    GridMismatch(#[from] GridMismatch),
    #[error("frequency {0} rad/s lies outside the sampled grid")]
    OutsideGrid(f64),
}

/// Side-by-side summary of two responses on the same grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub omegas: Vec<f64>,
    /// `a − b` in dB at each grid point.
    pub difference_db: Vec<f64>,
    /// Band `(lo, hi)` over which roll-off slopes were measured, rad/s.
    pub slope_band: (f64, f64),
    pub slope_a_db_per_octave: f64,
    pub slope_b_db_per_octave: f64,
    /// Frequencies where the two magnitude curves intersect, rad/s.
    pub crossovers: Vec<f64>,
}

impl Comparison {
    pub fn max_abs_difference_db(&self) -> f64 {
        self.difference_db.iter().fold(0.0, |m, d| m.max(d.abs()))
    }
}

fn coordinate(spacing: Spacing, omega: f64) -> f64 {
    match spacing {
        Spacing::Log => omega.ln(),
        Spacing::Linear => omega,
    }
}

/// Magnitude at `omega`, interpolated between grid points (linearly in
/// log-frequency on log grids). `None` outside the grid.
pub fn interpolate_db(resp: &FrequencyResponse, omega: f64) -> Option<f64> {
    let w = resp.omegas();
    let (first, last) = (*w.first()?, *w.last()?);
    if !(first..=last).contains(&omega) {
        return None;
    }
    let idx = w.partition_point(|&p| p < omega);
    if w[idx] == omega {
        return Some(resp.magnitude_db[idx]);
    }
    let spacing = resp.grid.spacing();
    let (x0, x1) = (coordinate(spacing, w[idx - 1]), coordinate(spacing, w[idx]));
    let t = (coordinate(spacing, omega) - x0) / (x1 - x0);
    let (m0, m1) = (resp.magnitude_db[idx - 1], resp.magnitude_db[idx]);
    Some(m0 + t * (m1 - m0))
}

pub fn slope_db_per_octave(
    resp: &FrequencyResponse,
    lo: f64,
    hi: f64,
) -> Result<f64, CompareError> {
    let m_lo = interpolate_db(resp, lo).ok_or(CompareError::OutsideGrid(lo))?;
    let m_hi = interpolate_db(resp, hi).ok_or(CompareError::OutsideGrid(hi))?;
    Ok((m_hi - m_lo) / (hi / lo).log2())
}

pub fn slope_db_per_decade(
    resp: &FrequencyResponse,
    lo: f64,
    hi: f64,
) -> Result<f64, CompareError> {
    Ok(slope_db_per_octave(resp, lo, hi)? * 10f64.log2())
}

/// Per-point dB difference, roll-off slopes over `slope_band` and the
/// frequencies where the curves cross.
pub fn compare(
    a: &FrequencyResponse,
    b: &FrequencyResponse,
    slope_band: (f64, f64),
) -> Result<Comparison, CompareError> {
    if a.grid != b.grid {
        return Err(GridMismatch.into());
    }
    let difference_db: Vec<f64> = a
        .magnitude_db
        .iter()
        .zip(&b.magnitude_db)
        .map(|(x, y)| x - y)
        .collect();
    let w = a.omegas();
    let spacing = a.grid.spacing();
    let mut crossovers = Vec::new();
    let mut last_nonzero: Option<usize> = None;
    for (i, d) in difference_db.iter().enumerate() {
        if *d == 0.0 {
            continue;
        }
        if let Some(j) = last_nonzero {
            let prev = difference_db[j];
            if prev.signum() != d.signum() {
                let (x0, x1) = (coordinate(spacing, w[j]), coordinate(spacing, w[i]));
                let x = x0 + (x1 - x0) * prev / (prev - d);
                crossovers.push(match spacing {
                    Spacing::Log => x.exp(),
                    Spacing::Linear => x,
                });
            }
        }
        last_nonzero = Some(i);
    }
    let (lo, hi) = slope_band;
    Ok(Comparison {
        omegas: w.to_vec(),
        difference_db,
        slope_band,
        slope_a_db_per_octave: slope_db_per_octave(a, lo, hi)?,
        slope_b_db_per_octave: slope_db_per_octave(b, lo, hi)?,
        crossovers,
    })
}
