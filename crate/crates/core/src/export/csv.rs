use std::fmt::Write as _;

use super::fmt_sig9;
use crate::response::{Comparison, FrequencyResponse, TransientTrace};

/// `omega_rad_s,magnitude_db,phase_deg`, one row per grid point.
pub fn emit_response_csv(resp: &FrequencyResponse) -> String {
    let mut out = String::from("omega_rad_s,magnitude_db,phase_deg\n");
    for ((w, m), p) in resp
        .omegas()
        .iter()
        .zip(&resp.magnitude_db)
        .zip(&resp.phase_deg)
    {
        let _ = writeln!(out, "{},{},{}", fmt_sig9(*w), fmt_sig9(*m), fmt_sig9(*p));
    }
    out
}

/// `t_s,v_in,v_out`, one row per sample.
pub fn emit_transient_csv(trace: &TransientTrace) -> String {
    let mut out = String::from("t_s,v_in,v_out\n");
    for (i, (u, y)) in trace.samples_in.iter().zip(&trace.samples_out).enumerate() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_sig9(trace.time(i)),
            fmt_sig9(*u),
            fmt_sig9(*y)
        );
    }
    out
}

/// `omega_rad_s,magnitude_a_db,magnitude_b_db,difference_db`.
pub fn emit_comparison_csv(
    a: &FrequencyResponse,
    b: &FrequencyResponse,
    comparison: &Comparison,
) -> String {
    let mut out = String::from("omega_rad_s,magnitude_a_db,magnitude_b_db,difference_db\n");
    for (i, w) in comparison.omegas.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_sig9(*w),
            fmt_sig9(a.magnitude_db[i]),
            fmt_sig9(b.magnitude_db[i]),
            fmt_sig9(comparison.difference_db[i])
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butterworth;
    use crate::model::validate_spec;
    use crate::response::{sample_response, FrequencyGrid, Spacing};

    #[test]
    fn three_point_response() {
        let spec = validate_spec(0.5, 100.0, 20.0, 200.0).unwrap();
        let tf = butterworth::design(&spec).transfer_function();
        let grid = FrequencyGrid::from_points(vec![100.0, 123.412, 200.0], Spacing::Log).unwrap();
        let csv = emit_response_csv(&sample_response(&tf, &grid));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "omega_rad_s,magnitude_db,phase_deg");
        let mags: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        for (m, e) in mags.iter().zip([-0.5, -3.0103, -21.0]) {
            assert!((m - e).abs() < 0.01);
        }
        assert!(lines[1].starts_with("100,-0.5"));
        assert!(!csv.contains(';'));
        for line in &lines[1..] {
            for field in line.split(',') {
                assert!(
                    field
                        .chars()
                        .all(|c| c.is_ascii_digit() || "-.".contains(c)),
                    "{field}"
                );
            }
        }
    }
}
