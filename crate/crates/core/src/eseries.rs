//! IEC 60063 preferred-number series.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const E24: [f64; 24] = [
    1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0, 3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6,
    6.2, 6.8, 7.5, 8.2, 9.1,
];

pub const E96: [f64; 96] = [
    1.00, 1.02, 1.05, 1.07, 1.10, 1.13, 1.15, 1.18, 1.21, 1.24, 1.27, 1.30, 1.33, 1.37, 1.40, 1.43,
    1.47, 1.50, 1.54, 1.58, 1.62, 1.65, 1.69, 1.74, 1.78, 1.82, 1.87, 1.91, 1.96, 2.00, 2.05, 2.10,
    2.15, 2.21, 2.26, 2.32, 2.37, 2.43, 2.49, 2.55, 2.61, 2.67, 2.74, 2.80, 2.87, 2.94, 3.01, 3.09,
    3.16, 3.24, 3.32, 3.40, 3.48, 3.57, 3.65, 3.74, 3.83, 3.92, 4.02, 4.12, 4.22, 4.32, 4.42, 4.53,
    4.64, 4.75, 4.87, 4.99, 5.11, 5.23, 5.36, 5.49, 5.62, 5.76, 5.90, 6.04, 6.19, 6.34, 6.49, 6.65,
    6.81, 6.98, 7.15, 7.32, 7.50, 7.68, 7.87, 8.06, 8.25, 8.45, 8.66, 8.87, 9.09, 9.31, 9.53, 9.76,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ESeries {
    E24,
    E96,
    #[default]
    None,
}

impl ESeries {
    pub fn mantissas(&self) -> &'static [f64] {
        match self {
            ESeries::E24 => &E24,
            ESeries::E96 => &E96,
            ESeries::None => &[],
        }
    }

    /// Nearest series value to `value` in the geometric sense (smallest
    /// |ln ratio|), searching the value's own decade and the next one's
    /// first entry. `ESeries::None` and non-positive values pass through.
    pub fn round(&self, value: f64) -> f64 {
        let table = self.mantissas();
        if table.is_empty() || !(value.is_finite() && value > 0.0) {
            return value;
        }
        let mut decade = value.log10().floor();
        let mut scale = 10f64.powf(decade);
        // guard log10 rounding at exact powers of ten
        if value / scale >= 10.0 {
            decade += 1.0;
            scale = 10f64.powf(decade);
        } else if value / scale < 1.0 {
            decade -= 1.0;
            scale = 10f64.powf(decade);
        }
        let mantissa = value / scale;
        let best = table
            .iter()
            .copied()
            .chain(std::iter::once(10.0))
            .min_by(|a, b| {
                (mantissa / a)
                    .ln()
                    .abs()
                    .total_cmp(&(mantissa / b).ln().abs())
            })
            .expect("non-empty table");
        // multiply with an exact-ish mantissa to keep values like 2.7e-6 clean
        format!("{best}e{decade}").parse().unwrap_or(best * scale)
    }
}

impl fmt::Display for ESeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ESeries::E24 => f.write_str("e24"),
            ESeries::E96 => f.write_str("e96"),
            ESeries::None => f.write_str("none"),
        }
    }
}

impl FromStr for ESeries {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "e24" => Ok(ESeries::E24),
            "e96" => Ok(ESeries::E96),
            "none" => Ok(ESeries::None),
            other => Err(format!("unknown series '{other}'")),
        }
    }
}
