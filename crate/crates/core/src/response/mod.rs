//! Frequency response sampling, closed-form magnitude oracles, square-wave
//! transient simulation and design comparison.

mod closed_form;
mod compare;
mod grid;
mod transient;

pub use closed_form::{closed_form_butterworth, closed_form_chebyshev, closed_form_magnitude};
pub use compare::{
    compare, interpolate_db, slope_db_per_decade, slope_db_per_octave, CompareError, Comparison,
};
pub use grid::{FrequencyGrid, GridError, Spacing};
pub use transient::{
    dominant_time_constant, harmonic_amplitude, simulate, simulate_square_wave, Excitation,
    TransientError, TransientTrace, MAX_POLE_STEP, MIN_PERIODS, MIN_STEPS_PER_PERIOD,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::TransferFunction;

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
#[error("responses are sampled on different frequency grids")]
pub struct GridMismatch;

/// Magnitude (dB) and unwrapped phase (degrees) on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResponse {
    pub grid: FrequencyGrid,
    pub magnitude_db: Vec<f64>,
    pub phase_deg: Vec<f64>,
}

impl FrequencyResponse {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn omegas(&self) -> &[f64] {
        self.grid.points()
    }

    /// Highest magnitude on the grid, dB.
    pub fn peak_db(&self) -> f64 {
        self.magnitude_db
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Copy with magnitudes shifted so that the grid maximum is 0 dB.
    pub fn normalized_to_peak(&self) -> Self {
        let peak = self.peak_db();
        Self {
            grid: self.grid.clone(),
            magnitude_db: self.magnitude_db.iter().map(|m| m - peak).collect(),
            phase_deg: self.phase_deg.clone(),
        }
    }
}

/// Unwraps a phase sequence in degrees, removing jumps larger than 180°.
pub fn unwrap_phase_deg(phase: &mut [f64]) {
    let mut offset = 0.0;
    for i in 1..phase.len() {
        let raw_prev = phase[i - 1] - offset;
        let delta = phase[i] - raw_prev;
        if delta > 180.0 {
            offset -= 360.0 * ((delta - 180.0) / 360.0).ceil();
        } else if delta < -180.0 {
            offset += 360.0 * ((-delta - 180.0) / 360.0).ceil();
        }
        phase[i] += offset;
    }
}

pub fn sample_response(tf: &TransferFunction, grid: &FrequencyGrid) -> FrequencyResponse {
    let values: Vec<_> = grid.points().iter().map(|&w| tf.evaluate(w)).collect();
    let magnitude_db = values.iter().map(|h| 20.0 * h.norm().log10()).collect();
    let mut phase_deg: Vec<f64> = values.iter().map(|h| h.arg().to_degrees()).collect();
    unwrap_phase_deg(&mut phase_deg);
    FrequencyResponse {
        grid: grid.clone(),
        magnitude_db,
        phase_deg,
    }
}
