//! File emitters: design reports, CSV tables, pole-zero JSON, SPICE
//! netlists and SVG Bode plots. Every emitter is deterministic and formats
//! numbers with nine significant digits.

mod csv;
mod netlist;
mod pole_zero;
mod report;
mod svg;

pub use self::csv::{emit_comparison_csv, emit_response_csv, emit_transient_csv};
pub use netlist::{emit_netlist, Analysis, NetlistError};
pub use pole_zero::{emit_pole_zero_json, PoleZeroDocument};
pub use report::{ComponentReport, DesignReport, SpecEcho};
pub use svg::{emit_bode_svg, SvgError};

/// Rounds to nine significant digits. Zero and non-finite values pass
/// through; negative zero becomes zero.
pub fn round_sig9(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Decimal rendering of [`round_sig9`], switching to scientific notation
/// outside [1e-4, 1e15). The separator is always `.`.
pub fn fmt_sig9(x: f64) -> String {
    let r = round_sig9(x);
    if r != 0.0 && r.is_finite() && !(1e-4..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Scientific rendering of [`round_sig9`] (e.g. `2.62211879e-6`).
pub fn fmt_sig9_sci(x: f64) -> String {
    format!("{:e}", round_sig9(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(123.41201636492526), "123.412016");
        assert_eq!(fmt_sig9(-0.5), "-0.5");
        assert_eq!(fmt_sig9(-0.0), "0");
        assert_eq!(fmt_sig9(1.92865493e-15), "1.92865493e-15");
        assert_eq!(fmt_sig9(-0.1e-6), "-1e-7");
        assert_eq!(fmt_sig9(28627751600.0), "28627751600");
        assert_eq!(fmt_sig9_sci(2.6221187e-6), "2.6221187e-6");
        assert_eq!(fmt_sig9_sci(81029.10148), "8.10291015e4");
        assert_eq!(round_sig9(f64::INFINITY), f64::INFINITY);
    }
}
