mod common;

use common::{log_points, rel_err, spec_strategy};
use lpf_core::model::{cascade_from_poles, poly_eval};
use lpf_core::{butterworth, chebyshev, CascadeStage, FilterRealization, FilterSpecification};
use num_complex::Complex64;
use proptest::prelude::*;

fn both(spec: &FilterSpecification) -> [FilterRealization; 2] {
    [butterworth::design(spec), chebyshev::design(spec).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conjugate_closure_is_exact(spec in spec_strategy()) {
        for r in both(&spec) {
            // adding 0.0 folds -0.0 into 0.0
            let key = |p: &lpf_core::ComplexFrequency| ((p.re + 0.0).to_bits(), (p.im + 0.0).to_bits());
            let mut poles: Vec<_> = r.poles().iter().map(key).collect();
            let mut conj: Vec<_> = r.poles().iter().map(|p| key(&p.conj())).collect();
            poles.sort_unstable();
            conj.sort_unstable();
            prop_assert_eq!(poles, conj);
        }
    }

    #[test]
    fn stages_reconstruct_their_poles(spec in spec_strategy()) {
        for r in both(&spec) {
            let tf = r.transfer_function();
            prop_assert_eq!(tf.order(), r.order());
            prop_assert_eq!(tf.gain, 1.0);
            for recovered in tf.poles() {
                let nearest = r
                    .poles()
                    .iter()
                    .map(|p| (p.to_complex() - recovered.to_complex()).norm() / p.magnitude())
                    .fold(f64::INFINITY, f64::min);
                prop_assert!(nearest < 1e-9, "{recovered}");
            }
        }
    }

    #[test]
    fn unity_dc(spec in spec_strategy()) {
        for r in both(&spec) {
            let tf = r.transfer_function();
            let h0 = tf.evaluate(0.0);
            prop_assert!((h0.re - tf.gain).abs() < 1e-12 && h0.im == 0.0);
        }
    }

    #[test]
    fn ascending_q(spec in spec_strategy()) {
        for r in both(&spec) {
            let q: Vec<f64> = r.transfer_function().stages.iter().map(CascadeStage::q).collect();
            prop_assert!(q.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // expanded polynomials lose accuracy quickly with order
    #[test]
    fn expanded_polynomial_agrees(spec in spec_strategy()) {
        for r in both(&spec) {
            prop_assume!(r.order() <= 10);
            let tf = r.transfer_function();
            let den = tf.denominator();
            let num = tf.numerator_constant();
            let wc = r.char_freq();
            for w in log_points(wc / 100.0, wc * 100.0, 1000) {
                let expanded = num / poly_eval(&den, Complex64::new(0.0, w)).norm();
                prop_assert!(rel_err(tf.evaluate(w).norm(), expanded) < 1e-9, "w={w}");
            }
        }
    }
}

#[test]
fn example_butterworth_stages() {
    let r = butterworth::design(&common::example_spec());
    let tf = cascade_from_poles(r.poles()).unwrap();
    let expected = [(0.0, 123.412), (199.684, 15230.5), (76.272, 15230.5)];
    for (stage, (a, b)) in tf.stages.iter().zip(expected) {
        match *stage {
            CascadeStage::FirstOrder { w0 } => assert!((w0 - b).abs() < 1e-3),
            CascadeStage::SecondOrder { a: sa, b: sb } => {
                assert!((sa - a).abs() < 2e-3, "{sa}");
                assert!((sb - b).abs() < 0.1, "{sb}");
            }
        }
    }
}
