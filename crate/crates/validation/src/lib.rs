//! Acceptance criteria for the filter designs, each reported as one
//! pass/fail outcome. `tests/acceptance.rs` runs them all.

use std::f64::consts::PI;

use lpf_core::chebyshev::{self, transform};
use lpf_core::model::validate_spec;
use lpf_core::response::{
    closed_form_magnitude, harmonic_amplitude, sample_response, simulate_square_wave,
    slope_db_per_decade, slope_db_per_octave, FrequencyGrid,
};
use lpf_core::sallen_key::{synth_cascade, SallenKeyStage, DEFAULT_C_FIRST_FARADS, DEFAULT_R_OHMS};
use lpf_core::{butterworth, ComplexFrequency, FilterRealization, FilterSpecification};

pub struct Check {
    pub what: String,
    pub passed: bool,
}

pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(what: String, passed: bool) -> Check {
    Check { what, passed }
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn within_rel(name: &str, got: f64, want: f64, tol: f64) -> Check {
    let err = rel(got, want);
    check(
        format!("{name} = {got:.6} vs {want} (rel {err:.2e}, tol {tol:e})"),
        err <= tol,
    )
}

fn within_abs(name: &str, got: f64, want: f64, tol: f64) -> Check {
    let err = (got - want).abs();
    check(
        format!("{name} = {got:.6} vs {want} (abs {err:.2e}, tol {tol:e})"),
        err <= tol,
    )
}

fn example_spec() -> FilterSpecification {
    validate_spec(0.5, 100.0, 20.0, 200.0).expect("example spec is valid")
}

fn chebyshev_design() -> FilterRealization {
    chebyshev::design(&example_spec()).expect("example spec has a Chebyshev design")
}

/// Pole closest to `target`.
fn nearest(poles: &[ComplexFrequency], re: f64, im: f64) -> ComplexFrequency {
    *poles
        .iter()
        .min_by(|a, b| {
            let da = (a.re - re).hypot(a.im - im);
            let db = (b.re - re).hypot(b.im - im);
            da.total_cmp(&db)
        })
        .expect("design has poles")
}

fn log_grid(lo: f64, hi: f64, count: usize) -> FrequencyGrid {
    FrequencyGrid::log(lo, hi, count).expect("valid grid")
}

pub fn butterworth_order_and_cutoff() -> Outcome {
    let r = butterworth::design(&example_spec());
    Outcome {
        id: 1,
        title: "Butterworth order and cutoff",
        checks: vec![
            check(format!("order = {} vs 5", r.order()), r.order() == 5),
            within_abs("cutoff", r.char_freq(), 123.4120164, 1e-3),
        ],
    }
}

pub fn butterworth_poles() -> Outcome {
    let r = butterworth::design(&example_spec());
    let expected = [
        (-38.1364, 117.3718),
        (-38.1364, -117.3718),
        (-99.8424, 72.5398),
        (-99.8424, -72.5398),
        (-123.4120, 0.0),
    ];
    let mut checks = vec![check(
        format!("pole count = {}", r.poles().len()),
        r.poles().len() == 5,
    )];
    for (re, im) in expected {
        let p = nearest(r.poles(), re, im);
        let err = (p.re - re).abs().max((p.im - im).abs());
        checks.push(check(
            format!("pole {p} vs {re}{im:+}j (abs {err:.2e}, tol 1e-3)"),
            err <= 1e-3,
        ));
    }
    Outcome {
        id: 2,
        title: "Butterworth poles",
        checks,
    }
}

pub fn chebyshev_order_and_poles() -> Outcome {
    let r = chebyshev_design();
    let mut checks = vec![check(format!("order = {} vs 4", r.order()), r.order() == 4)];
    let t = transform(r.order(), r.epsilon().expect("Chebyshev epsilon")).expect("valid transform");
    checks.push(within_rel("k", t.k, 0.44, 5e-3));
    checks.push(within_rel("tanh k", t.tanh_k, 0.417, 5e-3));
    checks.push(within_rel("cosh k", t.cosh_k, 1.1, 5e-3));
    for (re, im) in [
        (-17.567, 101.64),
        (-17.567, -101.64),
        (-42.383, 42.13),
        (-42.383, -42.13),
    ] {
        let p = nearest(r.poles(), re, im);
        let err = rel(p.re, re).max(rel(p.im, im));
        checks.push(check(
            format!("pole {p} vs {re}{im:+}j (rel {err:.2e}, tol 5e-3)"),
            err <= 5e-3,
        ));
    }
    Outcome {
        id: 3,
        title: "Chebyshev order, k and poles",
        checks,
    }
}

pub fn chebyshev_constant() -> Outcome {
    let p = chebyshev_design().transfer_function().numerator_constant();
    Outcome {
        id: 4,
        title: "Chebyshev transfer-function constant P",
        checks: vec![within_rel("P", p, 37995628.25, 5e-3)],
    }
}

pub fn first_order_resistor() -> Outcome {
    let r = butterworth::design(&example_spec());
    let sk = synth_cascade(
        &r.transfer_function(),
        DEFAULT_R_OHMS,
        DEFAULT_C_FIRST_FARADS,
    )
    .expect("example design synthesizes");
    let checks = match sk.stages.first() {
        Some(SallenKeyStage::FirstOrderRc { r, c }) => vec![
            check(format!("C = {c:e} F"), *c == 0.1e-6),
            within_rel("R", *r, 81.03e3, 5e-4),
        ],
        other => vec![check(format!("first stage is {other:?}"), false)],
    };
    Outcome {
        id: 5,
        title: "First-order component value",
        checks,
    }
}

pub fn closed_form_equivalence() -> Outcome {
    let spec = example_spec();
    let mut checks = Vec::new();
    for r in [butterworth::design(&spec), chebyshev_design()] {
        let tf = r.transfer_function();
        let wc = r.char_freq();
        let grid = log_grid(wc / 100.0, wc * 100.0, 1000);
        let h0 = tf.evaluate(0.0).norm();
        let worst = grid
            .points()
            .iter()
            .map(|&w| rel(tf.evaluate(w).norm() / h0, closed_form_magnitude(&r, w)))
            .fold(0.0, f64::max);
        checks.push(check(
            format!(
                "{} worst rel error {worst:.2e} over 1000 points (tol 1e-6)",
                r.family()
            ),
            worst <= 1e-6,
        ));
    }
    Outcome {
        id: 6,
        title: "Cascade vs closed-form magnitude",
        checks,
    }
}

pub fn corner_guarantees() -> Outcome {
    let spec = example_spec();
    let tf = butterworth::design(&spec).transfer_function();
    let at_wp = tf.magnitude_db(spec.omega_p());
    let at_ws = tf.magnitude_db(spec.omega_s());
    let cheb = chebyshev_design();
    let eps = cheb.epsilon().expect("Chebyshev epsilon");
    let n = cheb.order();
    let c_wp = -chebyshev::attenuation_db(n, eps, spec.omega_p(), spec.omega_p());
    let c_ws = -chebyshev::attenuation_db(n, eps, spec.omega_p(), spec.omega_s());
    Outcome {
        id: 7,
        title: "Corner guarantees",
        checks: vec![
            within_abs("Butterworth dB at 100 rad/s", at_wp, -0.5, 1e-6),
            check(
                format!("Butterworth dB at 200 rad/s = {at_ws:.6} <= -20"),
                at_ws <= -20.0,
            ),
            check(
                format!("Chebyshev dB at 100 rad/s = {c_wp:.6} >= -0.5"),
                c_wp >= -0.5 - 1e-9,
            ),
            check(
                format!("Chebyshev dB at 200 rad/s = {c_ws:.6} <= -20"),
                c_ws <= -20.0,
            ),
        ],
    }
}

pub fn roll_off() -> Outcome {
    let spec = example_spec();
    let b = butterworth::design(&spec);
    let grid = log_grid(1.0, 1e5, 4001);
    let rb = sample_response(&b.transfer_function(), &grid);
    let rc = sample_response(&chebyshev_design().transfer_function(), &grid);
    let sb = slope_db_per_octave(&rb, 100.0, 200.0).expect("band inside grid");
    let sc = slope_db_per_octave(&rc, 100.0, 200.0).expect("band inside grid");
    let wc = b.char_freq();
    let asym = slope_db_per_decade(&rb, 10.0 * wc, 100.0 * wc).expect("band inside grid");
    Outcome {
        id: 8,
        title: "Roll-off comparison",
        checks: vec![
            check(
                format!("slope 100-200 rad/s: Chebyshev {sc:.3} vs Butterworth {sb:.3} dB/octave"),
                sc < sb,
            ),
            within_abs(
                "Butterworth slope over [10wc, 100wc], dB/decade",
                asym,
                -100.0,
                2.0,
            ),
        ],
    }
}

pub fn transient_consistency() -> Outcome {
    let f = 15.91;
    let tf = butterworth::design(&example_spec()).transfer_function();
    // 400 steps per period keeps the analysis window on whole periods
    let dt = 1.0 / (400.0 * f);
    let checks = match simulate_square_wave(&tf, f, 1.0, 40.0 / f, dt) {
        Err(e) => vec![check(format!("simulation failed: {e}"), false)],
        Ok(trace) => {
            let first = harmonic_amplitude(&trace, f, 1, 10).unwrap_or(f64::NAN);
            let third = harmonic_amplitude(&trace, f, 3, 10).unwrap_or(f64::NAN);
            vec![
                within_rel(
                    "fundamental",
                    first,
                    4.0 / PI * tf.evaluate(100.0).norm(),
                    0.02,
                ),
                within_rel(
                    "third harmonic",
                    third,
                    4.0 / (3.0 * PI) * tf.evaluate(300.0).norm(),
                    0.02,
                ),
            ]
        }
    };
    Outcome {
        id: 9,
        title: "Square-wave transient vs frequency response",
        checks,
    }
}

pub fn synthesis_round_trip() -> Outcome {
    let spec = example_spec();
    let mut checks = Vec::new();
    for r in [butterworth::design(&spec), chebyshev_design()] {
        let tf = r.transfer_function();
        let synth = |ohms| synth_cascade(&tf, ohms, DEFAULT_C_FIRST_FARADS).expect("synthesizes");
        let shift = |a: &[ComplexFrequency], b: &[ComplexFrequency]| {
            a.iter()
                .zip(b)
                .map(|(p, q)| (p.to_complex() - q.to_complex()).norm() / p.magnitude())
                .fold(0.0, f64::max)
        };
        let base = synth(DEFAULT_R_OHMS);
        let round_trip = shift(&tf.poles(), &base.realized_tf.poles());
        checks.push(check(
            format!(
                "{} pole round trip rel {round_trip:.2e} (tol 1e-9)",
                r.family()
            ),
            round_trip <= 1e-9,
        ));
        let scaled = synth(DEFAULT_R_OHMS * 3.3);
        let scaling = shift(&base.realized_tf.poles(), &scaled.realized_tf.poles());
        checks.push(check(
            format!(
                "{} R x3.3 pole shift rel {scaling:.2e} (tol 1e-12)",
                r.family()
            ),
            scaling <= 1e-12,
        ));
    }
    Outcome {
        id: 10,
        title: "Synthesis round trip",
        checks,
    }
}

pub fn run_all() -> Vec<Outcome> {
    vec![
        butterworth_order_and_cutoff(),
        butterworth_poles(),
        chebyshev_order_and_poles(),
        chebyshev_constant(),
        first_order_resistor(),
        closed_form_equivalence(),
        corner_guarantees(),
        roll_off(),
        transient_consistency(),
        synthesis_round_trip(),
    ]
}
