//! Chebyshev type-I design by hyperbolic scaling of Butterworth poles.
//!
//! The valid Butterworth poles for order n on the circle of radius ωp are
//! first normalized (real part × tanh k) and then denormalized (whole pole
//! × cosh k), with `k = asinh(1/ε) / n`. The net effect is
//! `re·sinh k + j·im·cosh k`, which places the poles on an ellipse.

use thiserror::Error;

use crate::butterworth::{self, ceil_order, CORNER_TOLERANCE_DB};
use crate::model::{ComplexFrequency, FilterFamily, FilterRealization, FilterSpecification};

#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum ChebyshevError {
    #[error("ripple parameter must be finite and positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("ripple is so large the poles collapse onto the imaginary axis (k = {k})")]
    DegenerateRipple { k: f64 },
}

/// Hyperbolic factors used to move Butterworth poles onto the ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevTransform {
    pub epsilon: f64,
    pub k: f64,
    pub tanh_k: f64,
    pub cosh_k: f64,
    pub sinh_k: f64,
}

/// `ε = √(10^(Ap/10) − 1)`.
pub fn ripple_epsilon(ap_db: f64) -> f64 {
    (10f64.powf(ap_db / 10.0) - 1.0).sqrt()
}

/// Chebyshev polynomial of the first kind, evaluated through its
/// trigonometric form inside [-1, 1] and the hyperbolic form outside.
pub fn chebyshev_polynomial(order: usize, x: f64) -> f64 {
    let n = order as f64;
    if x.abs() <= 1.0 {
        (n * x.acos()).cos()
    } else if x > 1.0 {
        (n * x.acosh()).cosh()
    } else {
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * (n * (-x).acosh()).cosh()
    }
}

/// `10·log10(1 + ε²·Cn²(ω/ωp))`, attenuation in positive dB.
pub fn attenuation_db(order: usize, epsilon: f64, omega_p: f64, omega: f64) -> f64 {
    let c = chebyshev_polynomial(order, omega / omega_p);
    10.0 * (epsilon * epsilon * c * c).ln_1p() / std::f64::consts::LN_10
}

/// Real-valued order `acosh(Cn_required) / acosh(ωs/ωp)`, before rounding.
pub fn order_estimate(spec: &FilterSpecification) -> f64 {
    let epsilon = ripple_epsilon(spec.ap_db());
    let required = (10f64.powf(spec.as_db() / 10.0) - 1.0).sqrt() / epsilon;
    required.acosh() / (spec.omega_s() / spec.omega_p()).acosh()
}

fn meets_corners(spec: &FilterSpecification, order: usize, epsilon: f64) -> bool {
    let wp = spec.omega_p();
    attenuation_db(order, epsilon, wp, wp) <= spec.ap_db() + CORNER_TOLERANCE_DB
        && attenuation_db(order, epsilon, wp, spec.omega_s()) >= spec.as_db() - CORNER_TOLERANCE_DB
}

/// Smallest order meeting both corners, with the passband edge as the
/// characteristic frequency.
pub fn minimal_order(spec: &FilterSpecification) -> usize {
    let epsilon = ripple_epsilon(spec.ap_db());
    let mut n = ceil_order(order_estimate(spec));
    while n > 1 && meets_corners(spec, n - 1, epsilon) {
        n -= 1;
    }
    while !meets_corners(spec, n, epsilon) {
        n += 1;
    }
    n
}

pub fn transform(order: usize, epsilon: f64) -> Result<ChebyshevTransform, ChebyshevError> {
    if order == 0 {
        return Err(ChebyshevError::ZeroOrder);
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(ChebyshevError::InvalidEpsilon(epsilon));
    }
    let k = (1.0 / epsilon).asinh() / order as f64;
    Ok(ChebyshevTransform {
        epsilon,
        k,
        tanh_k: k.tanh(),
        cosh_k: k.cosh(),
        sinh_k: k.sinh(),
    })
}

/// Chebyshev-I poles for passband edge `omega_p`.
pub fn chebyshev_poles(
    order: usize,
    epsilon: f64,
    omega_p: f64,
) -> Result<Vec<ComplexFrequency>, ChebyshevError> {
    let t = transform(order, epsilon)?;
    let poles: Vec<ComplexFrequency> = butterworth::valid_poles(order, omega_p)
        .into_iter()
        .map(|p| {
            let normalized = ComplexFrequency::new(p.re * t.tanh_k, p.im);
            ComplexFrequency::new(normalized.re * t.cosh_k, normalized.im * t.cosh_k)
        })
        .collect();
    // a pole whose real part vanishes at working precision is not a filter
    let collapsed = |p: &ComplexFrequency| {
        !(p.re.is_finite() && p.im.is_finite()) || -p.re <= f64::EPSILON * p.magnitude()
    };
    if poles.iter().any(collapsed) {
        return Err(ChebyshevError::DegenerateRipple { k: t.k });
    }
    Ok(poles)
}

pub fn design(spec: &FilterSpecification) -> Result<FilterRealization, ChebyshevError> {
    let epsilon = ripple_epsilon(spec.ap_db());
    let order = minimal_order(spec);
    let poles = chebyshev_poles(order, epsilon, spec.omega_p())?;
    Ok(FilterRealization::new(
        FilterFamily::ChebyshevI,
        spec.omega_p(),
        poles,
        Some(epsilon),
    )
    .expect("Chebyshev poles are stable and conjugate-closed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_spec, CascadeStage};
    use approx::assert_relative_eq;

    fn example_spec() -> FilterSpecification {
        validate_spec(0.5, 100.0, 20.0, 200.0).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert!((ripple_epsilon(0.5) - 0.34931).abs() < 1e-5);
        assert!((ripple_epsilon(10.0 * 2f64.log10()) - 1.0).abs() < 1e-12);
        assert!((ripple_epsilon(3.0103) - 1.0).abs() < 1e-5);
        assert!((ripple_epsilon(1.0) - 0.50885).abs() < 1e-5);
    }

    #[test]
    fn polynomial_branches() {
        // T4(x) = 8x⁴ − 8x² + 1, T3(x) = 4x³ − 3x
        for &x in &[-3.0, -1.0, -0.7, 0.0, 0.3, 0.9, 1.0, 1.2, 2.0, 10.0] {
            let t4 = 8.0 * x * x * x * x - 8.0 * x * x + 1.0;
            let t3 = 4.0 * x * x * x - 3.0 * x;
            assert_relative_eq!(
                chebyshev_polynomial(4, x),
                t4,
                epsilon = 1e-9,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                chebyshev_polynomial(3, x),
                t3,
                epsilon = 1e-9,
                max_relative = 1e-12
            );
        }
        assert_eq!(chebyshev_polynomial(4, 2.0).round(), 97.0);
    }

    #[test]
    fn minimal_order_examples() {
        assert_eq!(minimal_order(&example_spec()), 4);
        assert_relative_eq!(order_estimate(&example_spec()), 3.069339, max_relative = 1e-6);

        let limit = validate_spec(0.5, 100.0, 0.5 + 1e-9, 200.0).unwrap();
        assert_eq!(minimal_order(&limit), 1);

        // brute force: smallest n with 10·log10(1 + ε²cosh²(n·acosh 3)) ≥ 40
        let spec = validate_spec(1.0, 1.0, 40.0, 3.0).unwrap();
        let eps = ripple_epsilon(1.0);
        let brute = (1..50)
            .find(|&n| {
                let c = (n as f64 * 3f64.acosh()).cosh();
                10.0 * (1.0 + eps * eps * c * c).log10() >= 40.0
            })
            .unwrap();
        assert_eq!(brute, 4);
        assert_eq!(minimal_order(&spec), brute);
    }

    #[test]
    fn transform_examples() {
        let t = transform(4, 0.34931).unwrap();
        assert!((t.k - 0.4436).abs() < 1e-4);
        assert!((t.tanh_k - 0.4166).abs() < 1e-4);
        assert!((t.cosh_k - 1.1000).abs() < 1e-4);
        assert_relative_eq!(t.tanh_k * t.cosh_k, t.sinh_k, max_relative = 1e-12);

        let t = transform(1, 1.0).unwrap();
        assert_relative_eq!(t.k, (1.0 + 2f64.sqrt()).ln(), max_relative = 1e-14);
        assert!((t.k - 0.88137).abs() < 1e-5);

        let t = transform(5, 0.34931).unwrap();
        assert!((t.k - 0.35489).abs() < 1e-4, "{}", t.k);

        assert_eq!(transform(0, 1.0), Err(ChebyshevError::ZeroOrder));
        assert!(matches!(
            transform(3, 0.0),
            Err(ChebyshevError::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn pole_examples() {
        let eps = ripple_epsilon(0.5);
        let poles = chebyshev_poles(4, eps, 100.0).unwrap();
        let expected = [
            (-17.54, 101.63),
            (-42.34, 42.10),
            (-42.34, -42.10),
            (-17.54, -101.63),
        ];
        for (p, (re, im)) in poles.iter().zip(expected) {
            assert!((p.re - re).abs() < 1e-2 && (p.im - im).abs() < 1e-2, "{p}");
        }
        let printed = [(-17.567, 101.64), (-42.383, 42.13)];
        for (p, (re, im)) in poles.iter().zip(printed) {
            assert_relative_eq!(p.re, re, max_relative = 5e-3);
            assert_relative_eq!(p.im, im, max_relative = 5e-3);
        }

        let single = chebyshev_poles(1, 1.0, 1.0).unwrap();
        assert_eq!(single.len(), 1);
        assert_relative_eq!(single[0].re, -1.0, max_relative = 1e-14);
        assert_eq!(single[0].im, 0.0);
    }

    #[test]
    fn huge_ripple_is_rejected_not_nan() {
        assert!(matches!(
            chebyshev_poles(4, f64::INFINITY, 100.0),
            Err(ChebyshevError::InvalidEpsilon(_))
        ));
        // k underflows to zero: poles land on the imaginary axis
        let r = chebyshev_poles(4, 1e308, 100.0);
        assert!(
            matches!(r, Err(ChebyshevError::DegenerateRipple { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn design_examples() {
        let r = design(&example_spec()).unwrap();
        assert_eq!(r.family(), FilterFamily::ChebyshevI);
        assert_eq!(r.order(), 4);
        assert_eq!(r.char_freq(), 100.0);
        let tf = r.transfer_function();
        assert_relative_eq!(tf.numerator_constant(), 37995628.25, max_relative = 5e-3);
        let by_magnitude: f64 = r.poles().iter().map(|p| p.magnitude()).product();
        assert_relative_eq!(tf.numerator_constant(), by_magnitude, max_relative = 1e-12);
        assert!(r.poles().iter().all(|p| p.im != 0.0));

        assert!(butterworth::minimal_order(&example_spec()) > r.order());

        let easy = validate_spec(0.5, 100.0, 1.0, 200.0).unwrap();
        let r = design(&easy).unwrap();
        assert_eq!(r.order(), 1);
        let tf = r.transfer_function();
        assert!(matches!(tf.stages[..], [CascadeStage::FirstOrder { .. }]));
        assert_relative_eq!(tf.evaluate(0.0).re, 1.0);
    }
}
