//! Butterworth order, cutoff and pole placement.
//!
//! The 2n poles of `|H(s)|²` sit evenly spaced on the circle `|s| = ωc`,
//! 360/(2n) degrees apart. For odd n the first pole lies on the real axis;
//! for even n it is offset by half a step. Only the poles strictly between
//! 90° and 270° (the left half-plane) belong to `H(s)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{ComplexFrequency, FilterFamily, FilterRealization, FilterSpecification};

/// Slack allowed when checking an attenuation corner, dB.
pub(crate) const CORNER_TOLERANCE_DB: f64 = 1e-9;

/// Which attenuation corner the cutoff is solved to meet exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    #[default]
    Passband,
    Stopband,
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corner::Passband => f.write_str("passband"),
            Corner::Stopband => f.write_str("stopband"),
        }
    }
}

impl FromStr for Corner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "passband" => Ok(Corner::Passband),
            "stopband" => Ok(Corner::Stopband),
            other => Err(format!("unknown corner '{other}'")),
        }
    }
}

/// Angular layout of the full 2n-pole Butterworth circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ButterworthGeometry {
    pub total_poles: usize,
    /// Spacing between adjacent poles, degrees.
    pub theta_deg: f64,
    /// Angle of the first pole from the positive real axis, degrees.
    pub first_pole_offset_deg: f64,
    /// Left-half-plane angles in ascending order, degrees.
    pub valid_angles_deg: Vec<f64>,
}

impl ButterworthGeometry {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Butterworth order must be at least 1");
        let n = order as f64;
        let half_step = 90.0 / n;
        // Angles are odd (even n) or even (odd n) multiples of half a step.
        // 90 < m·half_step < 270 is exactly n < m < 3n.
        let parity = if order.is_multiple_of(2) { 1 } else { 0 };
        let valid_angles_deg = (order + 1..3 * order)
            .filter(|m| m % 2 == parity)
            .map(|m| m as f64 * half_step)
            .collect();
        Self {
            total_poles: 2 * order,
            theta_deg: 360.0 / (2.0 * n),
            first_pole_offset_deg: if order.is_multiple_of(2) {
                half_step
            } else {
                0.0
            },
            valid_angles_deg,
        }
    }
}

/// Rounds a real-valued order estimate up, treating values within 1e-9
/// below an integer as that integer. Never returns less than 1.
pub(crate) fn ceil_order(estimate: f64) -> usize {
    if !estimate.is_finite() || estimate <= 1.0 {
        return 1;
    }
    let nearest = estimate.round();
    let snapped = if nearest - estimate >= 0.0 && nearest - estimate <= 1e-9 {
        nearest
    } else {
        estimate.ceil()
    };
    snapped.max(1.0) as usize
}

/// `10·log10(1 + (ω/ωc)^(2n))`, the attenuation in positive dB.
pub fn attenuation_db(order: usize, cutoff: f64, omega: f64) -> f64 {
    let ratio_pow = (omega / cutoff).powi(2 * order as i32);
    10.0 * ratio_pow.ln_1p() / std::f64::consts::LN_10
}

/// Real-valued order from the design equation, before rounding.
pub fn order_estimate(spec: &FilterSpecification) -> f64 {
    let stop = 10f64.powf(spec.as_db() / 10.0) - 1.0;
    let pass = 10f64.powf(spec.ap_db() / 10.0) - 1.0;
    (stop / pass).log10() / (2.0 * (spec.omega_s() / spec.omega_p()).log10())
}

fn meets_corners(spec: &FilterSpecification, order: usize, corner: Corner) -> bool {
    let wc = cutoff_frequency_for(spec, order, corner);
    attenuation_db(order, wc, spec.omega_p()) <= spec.ap_db() + CORNER_TOLERANCE_DB
        && attenuation_db(order, wc, spec.omega_s()) >= spec.as_db() - CORNER_TOLERANCE_DB
}

/// Smallest order whose passband-exact design meets both corners.
pub fn minimal_order(spec: &FilterSpecification) -> usize {
    let mut n = ceil_order(order_estimate(spec));
    while n > 1 && meets_corners(spec, n - 1, Corner::Passband) {
        n -= 1;
    }
    while !meets_corners(spec, n, Corner::Passband) {
        n += 1;
    }
    n
}

/// Cutoff that meets the passband corner with equality.
pub fn cutoff_frequency(spec: &FilterSpecification, order: usize) -> f64 {
    cutoff_frequency_for(spec, order, Corner::Passband)
}

pub fn cutoff_frequency_for(spec: &FilterSpecification, order: usize, corner: Corner) -> f64 {
    let two_n = 2.0 * order as f64;
    match corner {
        Corner::Passband => {
            spec.omega_p() / (10f64.powf(spec.ap_db() / 10.0) - 1.0).powf(1.0 / two_n)
        }
        Corner::Stopband => {
            spec.omega_s() / (10f64.powf(spec.as_db() / 10.0) - 1.0).powf(1.0 / two_n)
        }
    }
}

/// Left-half-plane poles `ωc(cos α ± j sin α)`, in ascending angle order.
///
/// Conjugates are emitted as exact mirror images and the odd-order pole at
/// 180° has an exactly zero imaginary part.
pub fn valid_poles(order: usize, cutoff: f64) -> Vec<ComplexFrequency> {
    let half_step = 90.0 / order as f64;
    let parity = if order.is_multiple_of(2) { 1 } else { 0 };
    // lower-half poles reuse the integer multiple of their upper partner so
    // both sides see the same rounded angle
    (order + 1..3 * order)
        .filter(|m| m % 2 == parity)
        .map(|m| match m.cmp(&(2 * order)) {
            std::cmp::Ordering::Less => {
                ComplexFrequency::from_polar_deg(cutoff, m as f64 * half_step)
            }
            std::cmp::Ordering::Greater => {
                ComplexFrequency::from_polar_deg(cutoff, (4 * order - m) as f64 * half_step).conj()
            }
            std::cmp::Ordering::Equal => ComplexFrequency::new(-cutoff, 0.0),
        })
        .collect()
}

pub fn design(spec: &FilterSpecification) -> FilterRealization {
    design_with_corner(spec, Corner::Passband)
}

pub fn design_with_corner(spec: &FilterSpecification, corner: Corner) -> FilterRealization {
    let order = minimal_order(spec);
    let cutoff = cutoff_frequency_for(spec, order, corner);
    FilterRealization::new(
        FilterFamily::Butterworth,
        cutoff,
        valid_poles(order, cutoff),
        None,
    )
    .expect("Butterworth poles are stable and conjugate-closed")
}
