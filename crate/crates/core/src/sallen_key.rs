//! Equal-R unity-gain Sallen-Key synthesis.
//!
//! A second-order section with both resistors equal to R, C1 from the
//! resistor junction to the op-amp output and C2 from the non-inverting
//! input to ground has the denominator
//! `s² + (2/(R·C1))·s + 1/(R²·C1·C2)`, so for a target `s² + a·s + b`:
//! `C1 = 2/(a·R)` and `C2 = a/(2·R·b)`, giving `C1/C2 = 4Q²`.
//! First-order sections are a buffered RC divider with `R = 1/(w0·C)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eseries::ESeries;
use crate::model::{CascadeStage, TransferFunction};
use crate::response::FrequencyGrid;

pub const DEFAULT_R_OHMS: f64 = 10e3;
pub const DEFAULT_C_FIRST_FARADS: f64 = 0.1e-6;

#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum SynthError {
    #[error("{0} must be finite and positive")]
    InvalidComponent(&'static str),
    #[error("cascade stage has non-positive coefficients: {0:?}")]
    InvalidStage(CascadeStage),
    #[error("transfer functions have different stage structure")]
    StructureMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SallenKeyStage {
    FirstOrderRc { r: f64, c: f64 },
    SecondOrderSk { r: f64, c1: f64, c2: f64 },
}

impl SallenKeyStage {
    /// The section this network actually realizes.
    pub fn realized_stage(&self) -> CascadeStage {
        match *self {
            SallenKeyStage::FirstOrderRc { r, c } => CascadeStage::FirstOrder { w0: 1.0 / (r * c) },
            SallenKeyStage::SecondOrderSk { r, c1, c2 } => CascadeStage::SecondOrder {
                a: 2.0 / (r * c1),
                b: 1.0 / (r * r * c1 * c2),
            },
        }
    }

    pub fn rounded(&self, series: ESeries) -> Self {
        match *self {
            SallenKeyStage::FirstOrderRc { r, c } => SallenKeyStage::FirstOrderRc {
                r: series.round(r),
                c: series.round(c),
            },
            SallenKeyStage::SecondOrderSk { r, c1, c2 } => SallenKeyStage::SecondOrderSk {
                r: series.round(r),
                c1: series.round(c1),
                c2: series.round(c2),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SallenKeyCascade {
    pub stages: Vec<SallenKeyStage>,
    /// Transfer function recomputed from the component values.
    pub realized_tf: TransferFunction,
}

impl SallenKeyCascade {
    fn from_stages(stages: Vec<SallenKeyStage>, gain: f64) -> Self {
        let realized = stages.iter().map(SallenKeyStage::realized_stage).collect();
        Self {
            stages,
            realized_tf: TransferFunction::new(gain, realized),
        }
    }
}

fn positive(value: f64, name: &'static str) -> Result<f64, SynthError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(SynthError::InvalidComponent(name))
    }
}

pub fn synth_first_order(w0: f64, c: f64) -> Result<SallenKeyStage, SynthError> {
    let w0 = positive(w0, "w0")?;
    let c = positive(c, "capacitance")?;
    Ok(SallenKeyStage::FirstOrderRc {
        r: 1.0 / (w0 * c),
        c,
    })
}

pub fn synth_second_order(a: f64, b: f64, r: f64) -> Result<SallenKeyStage, SynthError> {
    let a = positive(a, "a")?;
    let b = positive(b, "b")?;
    let r = positive(r, "resistance")?;
    Ok(SallenKeyStage::SecondOrderSk {
        r,
        c1: 2.0 / (a * r),
        c2: a / (2.0 * r * b),
    })
}

/// Synthesizes every stage of `tf` in order; the overall gain carries over.
pub fn synth_cascade(
    tf: &TransferFunction,
    r: f64,
    c_first_order: f64,
) -> Result<SallenKeyCascade, SynthError> {
    let stages = tf
        .stages
        .iter()
        .map(|stage| {
            match *stage {
                CascadeStage::FirstOrder { w0 } => synth_first_order(w0, c_first_order),
                CascadeStage::SecondOrder { a, b } => synth_second_order(a, b, r),
            }
            .map_err(|e| match e {
                SynthError::InvalidComponent("w0" | "a" | "b") => SynthError::InvalidStage(*stage),
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SallenKeyCascade::from_stages(stages, tf.gain))
}

/// Snaps every component to the nearest value of `series`.
pub fn round_to_series(cascade: &SallenKeyCascade, series: ESeries) -> SallenKeyCascade {
    if series == ESeries::None {
        return cascade.clone();
    }
    let stages = cascade.stages.iter().map(|s| s.rounded(series)).collect();
    SallenKeyCascade::from_stages(stages, cascade.realized_tf.gain)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationErrorReport {
    pub max_db: f64,
    pub rms_db: f64,
    /// Largest relative pole shift per stage, `|p_realized − p| / |p|`.
    pub pole_displacement: Vec<f64>,
}

pub fn realization_error(
    original: &TransferFunction,
    realized: &TransferFunction,
    grid: &FrequencyGrid,
) -> Result<RealizationErrorReport, SynthError> {
    let same_shape = original.stages.len() == realized.stages.len()
        && original
            .stages
            .iter()
            .zip(&realized.stages)
            .all(|(x, y)| x.degree() == y.degree());
    if !same_shape {
        return Err(SynthError::StructureMismatch);
    }
    let deviations: Vec<f64> = grid
        .points()
        .iter()
        .map(|&w| {
            let ratio = realized.evaluate(w) / original.evaluate(w);
            20.0 * ratio.norm().log10()
        })
        .collect();
    let max_db = deviations.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let rms_db = if deviations.is_empty() {
        0.0
    } else {
        (deviations.iter().map(|d| d * d).sum::<f64>() / deviations.len() as f64).sqrt()
    };
    let pole_displacement = original
        .stages
        .iter()
        .zip(&realized.stages)
        .map(|(x, y)| {
            x.poles()
                .iter()
                .zip(y.poles())
                .map(|(p, q)| (q.to_complex() - p.to_complex()).norm() / p.magnitude())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(RealizationErrorReport {
        max_db,
        rms_db,
        pole_displacement,
    })
}
