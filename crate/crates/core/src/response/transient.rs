//! Fixed-step time-domain simulation of a cascade.
//!
//! Every stage is put in controllable canonical form and the chained system
//! is integrated with classic fourth-order Runge-Kutta. Sources are
//! piecewise constant, so the input is held at its mid-step value for the
//! whole step; with edges on step boundaries this is exact up to the
//! integrator's own truncation error.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::model::{CascadeStage, TransferFunction};

/// Minimum number of steps per input period.
pub const MIN_STEPS_PER_PERIOD: f64 = 50.0;
/// Largest allowed `dt · |pole|`.
pub const MAX_POLE_STEP: f64 = 0.02;
/// Minimum number of input periods in a square-wave run.
pub const MIN_PERIODS: f64 = 20.0;

#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum TransientError {
    #[error("time step {dt} s exceeds the resolution limit {limit} s")]
    Resolution { dt: f64, limit: f64 },
    #[error("duration {duration} s is shorter than the required {required} s")]
    DurationTooShort { duration: f64, required: f64 },
    #[error("{0} must be finite and positive")]
    InvalidParameter(&'static str),
}

/// Piecewise-constant input source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Excitation {
    /// ±amplitude, 50% duty, high at t = 0.
    Square {
        freq_hz: f64,
        amplitude: f64,
    },
    Constant(f64),
}

impl Excitation {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Excitation::Constant(v) => v,
            Excitation::Square { freq_hz, amplitude } => {
                let cycles = t * freq_hz;
                let mut frac = cycles - cycles.floor();
                // snap values that are an edge up to rounding
                if (1.0 - frac) < 1e-9 {
                    frac = 0.0;
                } else if (frac - 0.5).abs() < 1e-9 {
                    frac = 0.5;
                }
                if frac < 0.5 {
                    amplitude
                } else {
                    -amplitude
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransientTrace {
    pub dt: f64,
    pub samples_in: Vec<f64>,
    pub samples_out: Vec<f64>,
    /// Total number of state variables in the cascade.
    pub state_dim: usize,
}

impl TransientTrace {
    pub fn len(&self) -> usize {
        self.samples_out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_out.is_empty()
    }

    pub fn time(&self, index: usize) -> f64 {
        index as f64 * self.dt
    }

    pub fn peak_output(&self) -> f64 {
        self.samples_out.iter().fold(0.0, |m, y| m.max(y.abs()))
    }
}

fn largest_pole_magnitude(tf: &TransferFunction) -> f64 {
    tf.stages
        .iter()
        .map(|s| match *s {
            // overdamped sections have a real pole above √b
            CascadeStage::SecondOrder { a, b } if a * a > 4.0 * b => {
                a / 2.0 + (a * a / 4.0 - b).sqrt()
            }
            _ => s.natural_frequency(),
        })
        .fold(0.0, f64::max)
}

/// `1 / min|Re(p)|` over all cascade poles, seconds.
pub fn dominant_time_constant(tf: &TransferFunction) -> f64 {
    let slowest = tf
        .poles()
        .iter()
        .map(|p| -p.re)
        .fold(f64::INFINITY, f64::min);
    1.0 / slowest
}

fn check_positive(value: f64, name: &'static str) -> Result<(), TransientError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(TransientError::InvalidParameter(name))
    }
}

/// State offsets of each stage in the flattened state vector.
struct Chain<'a> {
    gain: f64,
    stages: &'a [CascadeStage],
}

impl Chain<'_> {
    fn dim(&self) -> usize {
        self.stages.iter().map(CascadeStage::degree).sum()
    }

    fn output(&self, x: &[f64], u: f64) -> f64 {
        match self.stages.last() {
            None => self.gain * u,
            Some(last) => self.gain * x[self.dim() - last.degree()],
        }
    }

    fn derivative(&self, x: &[f64], u: f64, dx: &mut [f64]) {
        let mut input = u;
        let mut offset = 0;
        for stage in self.stages {
            match *stage {
                CascadeStage::FirstOrder { w0 } => {
                    dx[offset] = w0 * (input - x[offset]);
                    input = x[offset];
                    offset += 1;
                }
                CascadeStage::SecondOrder { a, b } => {
                    let (x1, x2) = (x[offset], x[offset + 1]);
                    dx[offset] = x2;
                    dx[offset + 1] = b * (input - x1) - a * x2;
                    input = x1;
                    offset += 2;
                }
            }
        }
    }
}

/// Integrates `tf` driven by `excitation` from zero initial state.
///
/// Returns `round(duration / dt) + 1` samples including t = 0.
pub fn simulate(
    tf: &TransferFunction,
    excitation: &Excitation,
    duration: f64,
    dt: f64,
) -> Result<TransientTrace, TransientError> {
    check_positive(dt, "dt")?;
    check_positive(duration, "duration")?;
    let pole = largest_pole_magnitude(tf);
    if pole > 0.0 && dt > MAX_POLE_STEP / pole {
        return Err(TransientError::Resolution {
            dt,
            limit: MAX_POLE_STEP / pole,
        });
    }

    let chain = Chain {
        gain: tf.gain,
        stages: &tf.stages,
    };
    let n = chain.dim();
    let steps = (duration / dt).round() as usize;
    let mut x = vec![0.0; n];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut scratch = vec![0.0; n];
    let mut samples_in = Vec::with_capacity(steps + 1);
    let mut samples_out = Vec::with_capacity(steps + 1);

    for i in 0..=steps {
        let t = i as f64 * dt;
        samples_in.push(excitation.value(t));
        samples_out.push(chain.output(&x, excitation.value(t)));
        if i == steps {
            break;
        }
        let u = excitation.value(t + 0.5 * dt);
        chain.derivative(&x, u, &mut k1);
        for j in 0..n {
            scratch[j] = x[j] + 0.5 * dt * k1[j];
        }
        chain.derivative(&scratch, u, &mut k2);
        for j in 0..n {
            scratch[j] = x[j] + 0.5 * dt * k2[j];
        }
        chain.derivative(&scratch, u, &mut k3);
        for j in 0..n {
            scratch[j] = x[j] + dt * k3[j];
        }
        chain.derivative(&scratch, u, &mut k4);
        for j in 0..n {
            x[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }

    Ok(TransientTrace {
        dt,
        samples_in,
        samples_out,
        state_dim: n,
    })
}

/// Square-wave response; enforces at least 50 steps per input period and
/// at least 20 input periods.
pub fn simulate_square_wave(
    tf: &TransferFunction,
    freq_hz: f64,
    amplitude: f64,
    duration: f64,
    dt: f64,
) -> Result<TransientTrace, TransientError> {
    check_positive(freq_hz, "input frequency")?;
    check_positive(dt, "dt")?;
    if !amplitude.is_finite() {
        return Err(TransientError::InvalidParameter("amplitude"));
    }
    let limit = 1.0 / (MIN_STEPS_PER_PERIOD * freq_hz);
    if dt > limit {
        return Err(TransientError::Resolution { dt, limit });
    }
    let required = MIN_PERIODS / freq_hz;
    if duration < required * (1.0 - 1e-9) {
        return Err(TransientError::DurationTooShort { duration, required });
    }
    simulate(tf, &Excitation::Square { freq_hz, amplitude }, duration, dt)
}

/// Amplitude of the `harmonic`-th multiple of `freq_hz` in the output,
/// measured over the last `periods` whole input periods of the trace.
///
/// Returns `None` when the trace is shorter than the analysis window.
pub fn harmonic_amplitude(
    trace: &TransientTrace,
    freq_hz: f64,
    harmonic: usize,
    periods: usize,
) -> Option<f64> {
    let window = (periods as f64 / (freq_hz * trace.dt)).round() as usize;
    if window == 0 || window >= trace.len() {
        return None;
    }
    let start = trace.len() - 1 - window;
    let omega = 2.0 * std::f64::consts::PI * freq_hz * harmonic as f64;
    let sum: Complex64 = (start..start + window)
        .map(|i| {
            let phase = -omega * trace.time(i);
            trace.samples_out[i] * Complex64::new(phase.cos(), phase.sin())
        })
        .sum();
    Some(2.0 * sum.norm() / window as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_spec;
    use crate::{butterworth, chebyshev};
    use std::f64::consts::PI;

    fn butterworth_tf() -> TransferFunction {
        let spec = validate_spec(0.5, 100.0, 20.0, 200.0).unwrap();
        butterworth::design(&spec).transfer_function()
    }

    #[test]
    fn square_wave_levels() {
        let sq = Excitation::Square {
            freq_hz: 10.0,
            amplitude: 2.0,
        };
        assert_eq!(sq.value(0.0), 2.0);
        assert_eq!(sq.value(0.049), 2.0);
        assert_eq!(sq.value(0.05), -2.0);
        assert_eq!(sq.value(0.099), -2.0);
        assert_eq!(sq.value(0.1), 2.0);
        assert_eq!(sq.value(3.0 * 0.1), 2.0);
    }

    #[test]
    fn first_order_step_matches_exponential() {
        let tf = TransferFunction::new(1.0, vec![CascadeStage::FirstOrder { w0: 10.0 }]);
        let trace = simulate(&tf, &Excitation::Constant(1.0), 0.5, 1e-3).unwrap();
        for (i, y) in trace.samples_out.iter().enumerate() {
            let t = trace.time(i);
            assert!((y - (1.0 - (-10.0 * t).exp())).abs() < 1e-10);
        }
        assert_eq!(trace.state_dim, 1);
        assert_eq!(trace.len(), 501);
    }

    #[test]
    fn dc_input_settles_to_dc_gain() {
        let tf = butterworth_tf();
        let tau = dominant_time_constant(&tf);
        let trace = simulate(&tf, &Excitation::Constant(1.5), 10.0 * tau, 1e-4).unwrap();
        let last = *trace.samples_out.last().unwrap();
        assert!((last - 1.5).abs() < 1.5e-3, "{last}");
    }

    #[test]
    fn resolution_guards() {
        let tf = butterworth_tf();
        let err = simulate_square_wave(&tf, 15.91, 1.0, 2.0, 1e-3).unwrap_err();
        assert!(matches!(err, TransientError::Resolution { .. }));
        let err = simulate_square_wave(&tf, 1000.0, 1.0, 1.0, 1e-4).unwrap_err();
        assert!(matches!(err, TransientError::Resolution { .. }));
        let err = simulate_square_wave(&tf, 15.91, 1.0, 0.5, 1e-5).unwrap_err();
        assert!(matches!(err, TransientError::DurationTooShort { .. }));
        assert!(matches!(
            simulate(&tf, &Excitation::Constant(1.0), 1.0, 0.0),
            Err(TransientError::InvalidParameter("dt"))
        ));
    }

    #[test]
    fn fundamental_matches_frequency_response() {
        let tf = chebyshev::design(&validate_spec(0.5, 100.0, 20.0, 200.0).unwrap())
            .unwrap()
            .transfer_function();
        let f = 20.0;
        let dt = 1.0 / (f * 2000.0);
        let trace = simulate_square_wave(&tf, f, 1.0, 40.0 / f, dt).unwrap();
        let measured = harmonic_amplitude(&trace, f, 1, 10).unwrap();
        let expected = 4.0 / PI * tf.evaluate(2.0 * PI * f).norm();
        assert!(
            (measured / expected - 1.0).abs() < 0.02,
            "{measured} vs {expected}"
        );
        assert!(trace.peak_output() <= 5.0);
    }

    #[test]
    fn empty_cascade_passes_input_through_gain() {
        let tf = TransferFunction::new(0.5, vec![]);
        let trace = simulate(&tf, &Excitation::Constant(2.0), 1.0, 0.1).unwrap();
        assert!(trace.samples_out.iter().all(|y| *y == 1.0));
        assert_eq!(trace.state_dim, 0);
    }
}
