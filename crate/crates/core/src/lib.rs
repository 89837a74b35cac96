//! Analog Butterworth and Chebyshev type-I low-pass design.
//!
//! From a four-corner attenuation mask this crate computes the minimal
//! order, the characteristic frequency and the stable s-plane poles, groups
//! them into a unity-DC-gain cascade of first- and second-order sections,
//! sizes equal-R Sallen-Key components for each section and verifies the
//! result against closed-form magnitude responses and a time-domain
//! square-wave simulation. Designs can be exported as SPICE netlists, CSV
//! tables, JSON reports and SVG Bode plots.
//!
//! ```
//! use lpf_core::{butterworth, model::validate_spec};
//!
//! let spec = validate_spec(0.5, 100.0, 20.0, 200.0).unwrap();
//! let filter = butterworth::design(&spec);
//! assert_eq!(filter.order(), 5);
//! let tf = filter.transfer_function();
//! assert!((tf.magnitude_db(100.0) + 0.5).abs() < 1e-9);
//! ```

pub mod butterworth;
pub mod chebyshev;
pub mod eseries;
pub mod export;
pub mod model;
pub mod response;
pub mod sallen_key;

use thiserror::Error;

pub use butterworth::Corner;
pub use eseries::ESeries;
pub use model::{
    CascadeStage, ComplexFrequency, FilterFamily, FilterRealization, FilterSpecification,
    SpecError, TransferFunction,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DesignError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Chebyshev(#[from] chebyshev::ChebyshevError),
}

/// Designs a filter of the requested family. `corner` only affects
/// Butterworth designs; Chebyshev-I always meets the passband edge exactly.
pub fn design(
    family: FilterFamily,
    spec: &FilterSpecification,
    corner: Corner,
) -> Result<FilterRealization, DesignError> {
    match family {
        FilterFamily::Butterworth => Ok(butterworth::design_with_corner(spec, corner)),
        FilterFamily::ChebyshevI => Ok(chebyshev::design(spec)?),
    }
}
