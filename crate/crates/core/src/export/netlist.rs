use std::fmt::Write as _;

use thiserror::Error;

use super::fmt_sig9_sci;
use crate::sallen_key::{SallenKeyCascade, SallenKeyStage};

/// Op-amp buffers are modelled as VCVS with this open-loop gain.
const OPEN_LOOP_GAIN: &str = "1e6";
const AC_POINTS_PER_DECADE: u32 = 100;
const TRAN_STEPS_PER_PERIOD: f64 = 200.0;
const EDGE_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analysis {
    Ac {
        f_lo_hz: f64,
        f_hi_hz: f64,
    },
    Tran {
        freq_hz: f64,
        amplitude: f64,
        duration: f64,
    },
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum NetlistError {
    #[error("cascade has no stages")]
    EmptyCascade,
    #[error("invalid analysis: {0}")]
    InvalidAnalysis(&'static str),
}

fn check(analysis: &Analysis) -> Result<(), NetlistError> {
    let ok = |x: f64| x.is_finite() && x > 0.0;
    match *analysis {
        Analysis::Ac { f_lo_hz, f_hi_hz } => {
            if !ok(f_lo_hz) || !ok(f_hi_hz) {
                return Err(NetlistError::InvalidAnalysis("AC bounds must be positive"));
            }
            if f_lo_hz >= f_hi_hz {
                return Err(NetlistError::InvalidAnalysis("AC bounds out of order"));
            }
        }
        Analysis::Tran {
            freq_hz,
            amplitude,
            duration,
        } => {
            if !ok(freq_hz) || !ok(amplitude) || !ok(duration) {
                return Err(NetlistError::InvalidAnalysis(
                    "frequency, amplitude and duration must be positive",
                ));
            }
        }
    }
    Ok(())
}

/// SPICE netlist for a Sallen-Key cascade. Node `in` is the source,
/// `n_<i>_out` the buffered output of stage i (1-based).
pub fn emit_netlist(
    title: &str,
    cascade: &SallenKeyCascade,
    analysis: &Analysis,
) -> Result<String, NetlistError> {
    if cascade.stages.is_empty() {
        return Err(NetlistError::EmptyCascade);
    }
    check(analysis)?;
    let mut out = String::new();
    let title = title.replace(['\n', '\r'], " ");
    let _ = writeln!(out, "* {title}");

    match *analysis {
        Analysis::Ac { .. } => {
            let _ = writeln!(out, "VIN in 0 AC 1");
        }
        Analysis::Tran {
            freq_hz, amplitude, ..
        } => {
            let period = 1.0 / freq_hz;
            let edge = period * EDGE_FRACTION;
            let _ = writeln!(
                out,
                "VIN in 0 PULSE({} {} {} {} {} {} {})",
                fmt_sig9_sci(amplitude),
                fmt_sig9_sci(-amplitude),
                fmt_sig9_sci(period / 2.0),
                fmt_sig9_sci(edge),
                fmt_sig9_sci(edge),
                fmt_sig9_sci(period / 2.0 - edge),
                fmt_sig9_sci(period)
            );
        }
    }

    let mut input = "in".to_string();
    for (idx, stage) in cascade.stages.iter().enumerate() {
        let i = idx + 1;
        let a = format!("n_{i}_a");
        let b = format!("n_{i}_b");
        let o = format!("n_{i}_out");
        match *stage {
            SallenKeyStage::FirstOrderRc { r, c } => {
                let _ = writeln!(out, "* stage {i}: first-order RC");
                let _ = writeln!(out, "R{i}_1 {input} {a} {}", fmt_sig9_sci(r));
                let _ = writeln!(out, "C{i}_1 {a} 0 {}", fmt_sig9_sci(c));
                let _ = writeln!(out, "E{i} {o} 0 {a} {o} {OPEN_LOOP_GAIN}");
            }
            SallenKeyStage::SecondOrderSk { r, c1, c2 } => {
                let q = stage.realized_stage().q();
                let _ = writeln!(out, "* stage {i}: Sallen-Key, Q = {}", super::fmt_sig9(q));
                let _ = writeln!(out, "R{i}_1 {input} {a} {}", fmt_sig9_sci(r));
                let _ = writeln!(out, "R{i}_2 {a} {b} {}", fmt_sig9_sci(r));
                let _ = writeln!(out, "C{i}_1 {a} {o} {}", fmt_sig9_sci(c1));
                let _ = writeln!(out, "C{i}_2 {b} 0 {}", fmt_sig9_sci(c2));
                let _ = writeln!(out, "E{i} {o} 0 {b} {o} {OPEN_LOOP_GAIN}");
            }
        }
        input = o;
    }

    match *analysis {
        Analysis::Ac { f_lo_hz, f_hi_hz } => {
            let _ = writeln!(
                out,
                ".ac dec {AC_POINTS_PER_DECADE} {} {}",
                fmt_sig9_sci(f_lo_hz),
                fmt_sig9_sci(f_hi_hz)
            );
        }
        Analysis::Tran {
            freq_hz, duration, ..
        } => {
            let step = 1.0 / (freq_hz * TRAN_STEPS_PER_PERIOD);
            let _ = writeln!(
                out,
                ".tran {} {}",
                fmt_sig9_sci(step),
                fmt_sig9_sci(duration)
            );
        }
    }
    let _ = writeln!(out, "* output node: {input}");
    let _ = writeln!(out, ".end");
    Ok(out)
}
