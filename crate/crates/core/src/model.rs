//! Shared domain types: attenuation specs, s-plane poles, realizations and
//! factored transfer functions.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used when matching a pole with its conjugate.
pub const PAIRING_TOLERANCE: f64 = 1e-9;

#[derive(Error, Debug, Clone, Copy, PartialEq)]
pub enum SpecError {
    #[error("frequencies and attenuations must be finite and positive")]
    NonPositiveFrequency,
    #[error("stopband edge ({omega_s}) must lie above passband edge ({omega_p})")]
    EdgesOutOfOrder { omega_p: f64, omega_s: f64 },
    #[error("stopband attenuation ({as_db} dB) must exceed passband attenuation ({ap_db} dB)")]
    AttenuationsOutOfOrder { ap_db: f64, as_db: f64 },
}

/// Four-corner low-pass attenuation mask.
///
/// Attenuations are stored as positive dB magnitudes: a passband gain of
/// -0.5 dB is `ap_db = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpecification {
    ap_db: f64,
    omega_p: f64,
    as_db: f64,
    omega_s: f64,
}

impl FilterSpecification {
    pub fn new(ap_db: f64, omega_p: f64, as_db: f64, omega_s: f64) -> Result<Self, SpecError> {
        let all_positive = [ap_db, omega_p, as_db, omega_s]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !all_positive {
            return Err(SpecError::NonPositiveFrequency);
        }
        if omega_s <= omega_p {
            return Err(SpecError::EdgesOutOfOrder { omega_p, omega_s });
        }
        if as_db <= ap_db {
            return Err(SpecError::AttenuationsOutOfOrder { ap_db, as_db });
        }
        Ok(Self {
            ap_db,
            omega_p,
            as_db,
            omega_s,
        })
    }

    /// Passband attenuation, dB (positive).
    pub fn ap_db(&self) -> f64 {
        self.ap_db
    }

    /// Passband edge, rad/s.
    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    /// Stopband attenuation, dB (positive).
    pub fn as_db(&self) -> f64 {
        self.as_db
    }

    /// Stopband edge, rad/s.
    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }
}

/// Free-function form of [`FilterSpecification::new`].
pub fn validate_spec(
    ap_db: f64,
    omega_p: f64,
    as_db: f64,
    omega_s: f64,
) -> Result<FilterSpecification, SpecError> {
    FilterSpecification::new(ap_db, omega_p, as_db, omega_s)
}

/// A point in the s-plane, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexFrequency {
    pub re: f64,
    pub im: f64,
}

impl ComplexFrequency {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `magnitude * (cos α + j sin α)` with α in degrees.
    pub fn from_polar_deg(magnitude: f64, angle_deg: f64) -> Self {
        let (sin, cos) = angle_deg.to_radians().sin_cos();
        Self::new(magnitude * cos, magnitude * sin)
    }

    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Angle from the positive real axis in degrees, in `[0, 360)`.
    pub fn angle_deg(&self) -> f64 {
        let deg = self.im.atan2(self.re).to_degrees();
        if deg < 0.0 {
            deg + 360.0
        } else {
            deg
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im.abs() <= PAIRING_TOLERANCE * self.magnitude()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for ComplexFrequency {
    fn from(c: Complex64) -> Self {
        Self::new(c.re, c.im)
    }
}

impl fmt::Display for ComplexFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im > 0.0 {
            write!(f, "{}+{}j", self.re, self.im)
        } else {
            write!(f, "{}{}j", self.re, self.im)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterFamily {
    Butterworth,
    ChebyshevI,
}

impl fmt::Display for FilterFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterFamily::Butterworth => f.write_str("butterworth"),
            FilterFamily::ChebyshevI => f.write_str("chebyshev_i"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RealizationError {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("expected {expected} poles, got {actual}")]
    PoleCount { expected: usize, actual: usize },
    #[error("pole {0} is not in the open left half-plane")]
    Unstable(ComplexFrequency),
    #[error("characteristic frequency must be finite and positive")]
    InvalidCharFreq,
    #[error("epsilon must be present (and positive) exactly for Chebyshev-I realizations")]
    Epsilon,
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("odd order requires exactly one real pole, even order none (found {real_poles})")]
    RealPoleParity { real_poles: usize },
}

/// A designed all-pole low-pass prototype: family, order, characteristic
/// frequency and the stable pole set.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRealization {
    family: FilterFamily,
    order: usize,
    char_freq: f64,
    poles: Vec<ComplexFrequency>,
    epsilon: Option<f64>,
}

impl FilterRealization {
    pub fn new(
        family: FilterFamily,
        char_freq: f64,
        poles: Vec<ComplexFrequency>,
        epsilon: Option<f64>,
    ) -> Result<Self, RealizationError> {
        let order = poles.len();
        if order == 0 {
            return Err(RealizationError::ZeroOrder);
        }
        if !(char_freq.is_finite() && char_freq > 0.0) {
            return Err(RealizationError::InvalidCharFreq);
        }
        match (family, epsilon) {
            (FilterFamily::Butterworth, None) => {}
            (FilterFamily::ChebyshevI, Some(e)) if e.is_finite() && e > 0.0 => {}
            _ => return Err(RealizationError::Epsilon),
        }
        if let Some(p) = poles
            .iter()
            .find(|p| !(p.re.is_finite() && p.im.is_finite() && p.re < 0.0))
        {
            return Err(RealizationError::Unstable(*p));
        }
        let pairing = pair_poles(&poles)?;
        if pairing.real.len() != order % 2 {
            return Err(RealizationError::RealPoleParity {
                real_poles: pairing.real.len(),
            });
        }
        Ok(Self {
            family,
            order,
            char_freq,
            poles,
            epsilon,
        })
    }

    pub fn family(&self) -> FilterFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// ωc for Butterworth, ωp for Chebyshev-I.
    pub fn char_freq(&self) -> f64 {
        self.char_freq
    }

    pub fn poles(&self) -> &[ComplexFrequency] {
        &self.poles
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn transfer_function(&self) -> TransferFunction {
        stages_from_poles(self).expect("realization poles are conjugate-closed by construction")
    }
}

/// One unity-DC-gain section of a cascade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CascadeStage {
    /// `w0 / (s + w0)`
    FirstOrder { w0: f64 },
    /// `b / (s² + a·s + b)`
    SecondOrder { a: f64, b: f64 },
}

impl CascadeStage {
    pub fn degree(&self) -> usize {
        match self {
            CascadeStage::FirstOrder { .. } => 1,
            CascadeStage::SecondOrder { .. } => 2,
        }
    }

    /// Quality factor `√b / a`; a first-order section counts as 0.5.
    pub fn q(&self) -> f64 {
        match *self {
            CascadeStage::FirstOrder { .. } => 0.5,
            CascadeStage::SecondOrder { a, b } => b.sqrt() / a,
        }
    }

    /// Undamped natural frequency, rad/s.
    pub fn natural_frequency(&self) -> f64 {
        match *self {
            CascadeStage::FirstOrder { w0 } => w0,
            CascadeStage::SecondOrder { b, .. } => b.sqrt(),
        }
    }

    /// Numerator constant (equal to the s⁰ denominator coefficient).
    pub fn dc_constant(&self) -> f64 {
        match *self {
            CascadeStage::FirstOrder { w0 } => w0,
            CascadeStage::SecondOrder { b, .. } => b,
        }
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        match *self {
            CascadeStage::FirstOrder { w0 } => w0 / (s + w0),
            CascadeStage::SecondOrder { a, b } => b / (s * s + a * s + b),
        }
    }

    /// Denominator coefficients, highest power first.
    pub fn denominator(&self) -> Vec<f64> {
        match *self {
            CascadeStage::FirstOrder { w0 } => vec![1.0, w0],
            CascadeStage::SecondOrder { a, b } => vec![1.0, a, b],
        }
    }

    /// Roots of the denominator. Complex pairs come back upper-half first.
    pub fn poles(&self) -> Vec<ComplexFrequency> {
        match *self {
            CascadeStage::FirstOrder { w0 } => vec![ComplexFrequency::new(-w0, 0.0)],
            CascadeStage::SecondOrder { a, b } => {
                let re = -a / 2.0;
                let disc = b - re * re;
                if disc >= 0.0 {
                    let im = disc.sqrt();
                    vec![
                        ComplexFrequency::new(re, im),
                        ComplexFrequency::new(re, -im),
                    ]
                } else {
                    // overdamped: two real roots, computed without cancellation
                    let root = (-disc).sqrt();
                    let far = re - root;
                    vec![
                        ComplexFrequency::new(far, 0.0),
                        ComplexFrequency::new(b / far, 0.0),
                    ]
                }
            }
        }
    }
}

/// `gain · Π stage(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    pub gain: f64,
    pub stages: Vec<CascadeStage>,
}

impl TransferFunction {
    pub fn new(gain: f64, stages: Vec<CascadeStage>) -> Self {
        Self { gain, stages }
    }

    pub fn order(&self) -> usize {
        self.stages.iter().map(CascadeStage::degree).sum()
    }

    /// H(jω).
    pub fn evaluate(&self, omega: f64) -> Complex64 {
        self.evaluate_s(Complex64::new(0.0, omega))
    }

    pub fn evaluate_s(&self, s: Complex64) -> Complex64 {
        self.stages
            .iter()
            .fold(Complex64::new(self.gain, 0.0), |acc, st| {
                acc * st.evaluate(s)
            })
    }

    pub fn magnitude_db(&self, omega: f64) -> f64 {
        20.0 * self.evaluate(omega).norm().log10()
    }

    pub fn phase_deg(&self, omega: f64) -> f64 {
        self.evaluate(omega).arg().to_degrees()
    }

    /// Numerator constant of the expanded form, `gain · Π w0 · Π b`.
    pub fn numerator_constant(&self) -> f64 {
        self.gain
            * self
                .stages
                .iter()
                .map(CascadeStage::dc_constant)
                .product::<f64>()
    }

    /// Expanded denominator coefficients, highest power first.
    pub fn denominator(&self) -> Vec<f64> {
        self.stages
            .iter()
            .fold(vec![1.0], |acc, st| poly_mul(&acc, &st.denominator()))
    }

    pub fn poles(&self) -> Vec<ComplexFrequency> {
        self.stages.iter().flat_map(CascadeStage::poles).collect()
    }
}

pub(crate) fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Horner evaluation of a real polynomial (highest power first) at `s`.
pub fn poly_eval(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + c)
}

#[derive(Error, Debug, Clone, PartialEq)]
#[error("pole {unmatched} has no conjugate partner within tolerance")]
pub struct PairingError {
    pub unmatched: ComplexFrequency,
}

pub(crate) struct Pairing {
    pub real: Vec<ComplexFrequency>,
    /// Upper-half-plane representative of each conjugate pair.
    pub pairs: Vec<ComplexFrequency>,
}

pub(crate) fn pair_poles(poles: &[ComplexFrequency]) -> Result<Pairing, PairingError> {
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for p in poles {
        if p.is_real() {
            real.push(*p);
        } else if p.im > 0.0 {
            upper.push(*p);
        } else {
            lower.push(*p);
        }
    }
    let mut pairs = Vec::with_capacity(upper.len());
    for p in upper {
        let tol = PAIRING_TOLERANCE * p.magnitude();
        let pos = lower
            .iter()
            .position(|q| (q.re - p.re).abs() <= tol && (q.im + p.im).abs() <= tol)
            .ok_or(PairingError { unmatched: p })?;
        lower.swap_remove(pos);
        pairs.push(p);
    }
    if let Some(q) = lower.first() {
        return Err(PairingError { unmatched: *q });
    }
    Ok(Pairing { real, pairs })
}

/// Groups a realization's poles into a unity-DC-gain cascade.
///
/// Conjugate pairs become `SecondOrder { a: -2·re, b: |p|² }`, real poles
/// `FirstOrder`. Stages are ordered by ascending Q.
pub fn stages_from_poles(
    realization: &FilterRealization,
) -> Result<TransferFunction, PairingError> {
    cascade_from_poles(realization.poles())
}

/// Same as [`stages_from_poles`] for a bare pole list.
pub fn cascade_from_poles(poles: &[ComplexFrequency]) -> Result<TransferFunction, PairingError> {
    let Pairing { real, pairs } = pair_poles(poles)?;
    let mut stages: Vec<CascadeStage> = real
        .iter()
        .map(|p| CascadeStage::FirstOrder { w0: -p.re })
        .chain(pairs.iter().map(|p| CascadeStage::SecondOrder {
            a: -2.0 * p.re,
            b: p.re * p.re + p.im * p.im,
        }))
        .collect();
    stages.sort_by(|x, y| x.q().total_cmp(&y.q()));
    Ok(TransferFunction::new(1.0, stages))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spec_validation() {
        let s = validate_spec(0.5, 100.0, 20.0, 200.0).unwrap();
        assert_eq!(s.ap_db(), 0.5);
        assert_eq!(s.omega_s(), 200.0);
        assert!(matches!(
            validate_spec(0.5, 200.0, 20.0, 100.0),
            Err(SpecError::EdgesOutOfOrder { .. })
        ));
        assert!(matches!(
            validate_spec(20.0, 100.0, 0.5, 200.0),
            Err(SpecError::AttenuationsOutOfOrder { .. })
        ));
        assert_eq!(
            validate_spec(0.5, -1.0, 20.0, 200.0),
            Err(SpecError::NonPositiveFrequency)
        );
        assert_eq!(
            validate_spec(0.5, 100.0, 20.0, f64::NAN),
            Err(SpecError::NonPositiveFrequency)
        );
        assert!(matches!(
            validate_spec(0.5, 100.0, 20.0, 100.0),
            Err(SpecError::EdgesOutOfOrder { .. })
        ));
    }

    fn pair(re: f64, im: f64) -> [ComplexFrequency; 2] {
        [
            ComplexFrequency::new(re, im),
            ComplexFrequency::new(re, -im),
        ]
    }

    #[test]
    fn butterworth_poles_to_stages() {
        let mut poles = Vec::new();
        poles.extend(pair(-38.136, 117.372));
        poles.extend(pair(-99.842, 72.540));
        poles.push(ComplexFrequency::new(-123.412, 0.0));
        let tf = cascade_from_poles(&poles).unwrap();
        assert_eq!(tf.gain, 1.0);
        assert_eq!(tf.stages.len(), 3);
        assert_eq!(tf.stages[0], CascadeStage::FirstOrder { w0: 123.412 });
        let CascadeStage::SecondOrder { a, b } = tf.stages[1] else {
            panic!("expected biquad")
        };
        assert_relative_eq!(a, 199.684, max_relative = 1e-12);
        assert_relative_eq!(b, 15230.5, max_relative = 1e-4);
        let CascadeStage::SecondOrder { a, b } = tf.stages[2] else {
            panic!("expected biquad")
        };
        assert_relative_eq!(a, 76.272, max_relative = 1e-12);
        assert_relative_eq!(b, 15230.5, max_relative = 1e-4);
    }

    #[test]
    fn single_real_pole() {
        let tf = cascade_from_poles(&[ComplexFrequency::new(-1.0, 0.0)]).unwrap();
        assert_eq!(tf.stages, vec![CascadeStage::FirstOrder { w0: 1.0 }]);
        assert_eq!(tf.gain, 1.0);
    }

    #[test]
    fn chebyshev_rounded_poles_to_stages() {
        let mut poles = Vec::new();
        poles.extend(pair(-17.54, 101.63));
        poles.extend(pair(-42.34, 42.10));
        let tf = cascade_from_poles(&poles).unwrap();
        let coeffs: Vec<(f64, f64)> = tf
            .stages
            .iter()
            .map(|s| match *s {
                CascadeStage::SecondOrder { a, b } => (a, b),
                _ => panic!("unexpected first-order stage"),
            })
            .collect();
        assert_relative_eq!(coeffs[0].0, 84.68, max_relative = 1e-12);
        assert_relative_eq!(coeffs[0].1, 3565.0, max_relative = 1e-4);
        assert_relative_eq!(coeffs[1].0, 35.08, max_relative = 1e-12);
        assert_relative_eq!(coeffs[1].1, 10636.0, max_relative = 1e-4);
        // printed factored-form coefficients (sign-corrected): within 0.3%
        assert_relative_eq!(coeffs[1].0, 35.134, max_relative = 3e-3);
        assert_relative_eq!(coeffs[1].1, 10639.2886, max_relative = 3e-3);
        assert_relative_eq!(coeffs[0].0, 84.766, max_relative = 3e-3);
        assert_relative_eq!(coeffs[0].1, 3571.2569, max_relative = 3e-3);
    }

    #[test]
    fn unmatched_conjugate_is_rejected() {
        let poles = [
            ComplexFrequency::new(-1.0, 1.0),
            ComplexFrequency::new(-1.0, -1.001),
        ];
        assert!(cascade_from_poles(&poles).is_err());
        let lonely = [ComplexFrequency::new(-1.0, -1.0)];
        assert!(cascade_from_poles(&lonely).is_err());
    }

    #[test]
    fn realization_invariants() {
        let poles: Vec<_> = pair(-1.0, 1.0).into();
        assert!(
            FilterRealization::new(FilterFamily::Butterworth, 1.0, poles.clone(), None).is_ok()
        );
        assert_eq!(
            FilterRealization::new(FilterFamily::Butterworth, 1.0, poles.clone(), Some(0.3)),
            Err(RealizationError::Epsilon)
        );
        let unstable = vec![ComplexFrequency::new(0.5, 0.0)];
        assert!(matches!(
            FilterRealization::new(FilterFamily::Butterworth, 1.0, unstable, None),
            Err(RealizationError::Unstable(_))
        ));
        let three_real = vec![
            ComplexFrequency::new(-1.0, 0.0),
            ComplexFrequency::new(-2.0, 0.0),
        ];
        assert!(matches!(
            FilterRealization::new(FilterFamily::Butterworth, 1.0, three_real, None),
            Err(RealizationError::RealPoleParity { real_poles: 2 })
        ));
        assert_eq!(
            FilterRealization::new(FilterFamily::Butterworth, 1.0, vec![], None),
            Err(RealizationError::ZeroOrder)
        );
    }

    #[test]
    fn stage_roots_recover_poles() {
        let st = CascadeStage::SecondOrder { a: 2.0, b: 5.0 };
        let p = st.poles();
        assert_relative_eq!(p[0].re, -1.0);
        assert_relative_eq!(p[0].im, 2.0);
        assert_eq!(p[1], p[0].conj());
        let over = CascadeStage::SecondOrder { a: 5.0, b: 4.0 };
        let mut r: Vec<f64> = over.poles().iter().map(|p| p.re).collect();
        r.sort_by(f64::total_cmp);
        assert_relative_eq!(r[0], -4.0, max_relative = 1e-14);
        assert_relative_eq!(r[1], -1.0, max_relative = 1e-14);
    }

    #[test]
    fn expanded_denominator() {
        let tf = TransferFunction::new(
            1.0,
            vec![
                CascadeStage::FirstOrder { w0: 2.0 },
                CascadeStage::SecondOrder { a: 1.0, b: 3.0 },
            ],
        );
        // (s + 2)(s² + s + 3) = s³ + 3s² + 5s + 6
        assert_eq!(tf.denominator(), vec![1.0, 3.0, 5.0, 6.0]);
        assert_eq!(tf.numerator_constant(), 6.0);
        assert_eq!(tf.order(), 3);
        assert_eq!(tf.evaluate(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn polar_angles() {
        let p = ComplexFrequency::from_polar_deg(2.0, 135.0);
        assert_relative_eq!(p.re, -2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(p.angle_deg(), 135.0, max_relative = 1e-14);
        assert_relative_eq!(p.conj().angle_deg(), 225.0, max_relative = 1e-14);
    }
}
