use crate::chebyshev::chebyshev_polynomial;
use crate::model::{FilterFamily, FilterRealization};

/// `(1 + (ω/ωc)^(2n))^(-1/2)`
pub fn closed_form_butterworth(order: usize, cutoff: f64, omega: f64) -> f64 {
    let x2n = (omega / cutoff).powi(2 * order as i32);
    1.0 / (1.0 + x2n).sqrt()
}

/// `(1 + ε²·Cn²(ω/ωp))^(-1/2)`
pub fn closed_form_chebyshev(order: usize, epsilon: f64, omega_p: f64, omega: f64) -> f64 {
    let c = chebyshev_polynomial(order, omega / omega_p);
    1.0 / (1.0 + epsilon * epsilon * c * c).sqrt()
}

/// Closed-form magnitude for a realization's family, normalized to the
/// realization's unity DC gain.
pub fn closed_form_magnitude(realization: &FilterRealization, omega: f64) -> f64 {
    let n = realization.order();
    let wc = realization.char_freq();
    match (realization.family(), realization.epsilon()) {
        (FilterFamily::Butterworth, _) => closed_form_butterworth(n, wc, omega),
        (FilterFamily::ChebyshevI, Some(eps)) => {
            closed_form_chebyshev(n, eps, wc, omega) / closed_form_chebyshev(n, eps, wc, 0.0)
        }
        (FilterFamily::ChebyshevI, None) => unreachable!("Chebyshev realization without epsilon"),
    }
}
