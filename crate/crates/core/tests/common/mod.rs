#![allow(dead_code)]

use lpf_core::model::validate_spec;
use lpf_core::FilterSpecification;
use proptest::prelude::*;

pub fn example_spec() -> FilterSpecification {
    validate_spec(0.5, 100.0, 20.0, 200.0).unwrap()
}

/// Specs whose designs stay below roughly order 20.
pub fn spec_strategy() -> impl Strategy<Value = FilterSpecification> {
    (0.1f64..3.0, 5.0f64..60.0, 0.0f64..4.0, 1.3f64..5.0).prop_map(|(ap, extra, lg_wp, ratio)| {
        let wp = 10f64.powf(lg_wp);
        validate_spec(ap, wp, ap + extra, wp * ratio).unwrap()
    })
}

pub fn log_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}
