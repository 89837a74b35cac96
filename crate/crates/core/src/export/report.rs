use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{fmt_sig9, round_sig9};
use crate::butterworth::{self, Corner};
use crate::chebyshev;
use crate::eseries::ESeries;
use crate::model::{
    CascadeStage, ComplexFrequency, FilterFamily, FilterRealization, FilterSpecification,
    RealizationError,
};
use crate::sallen_key::{SallenKeyCascade, SallenKeyStage};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub ap_db: f64,
    pub omega_p: f64,
    pub as_db: f64,
    pub omega_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub r_ohms: f64,
    pub c_first_farads: f64,
    pub series: ESeries,
    pub stages: Vec<SallenKeyStage>,
}

/// Everything known about one design, serialized with a fixed key order
/// and nine significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub spec: SpecEcho,
    pub family: FilterFamily,
    pub corner: Option<Corner>,
    pub order: usize,
    pub char_freq: f64,
    pub epsilon: Option<f64>,
    pub poles: Vec<[f64; 2]>,
    pub stages: Vec<CascadeStage>,
    pub numerator_constant: f64,
    pub components: Option<ComponentReport>,
    pub notes: Vec<String>,
}

fn round_stage(stage: &CascadeStage) -> CascadeStage {
    match *stage {
        CascadeStage::FirstOrder { w0 } => CascadeStage::FirstOrder { w0: round_sig9(w0) },
        CascadeStage::SecondOrder { a, b } => CascadeStage::SecondOrder {
            a: round_sig9(a),
            b: round_sig9(b),
        },
    }
}

fn round_component(stage: &SallenKeyStage) -> SallenKeyStage {
    match *stage {
        SallenKeyStage::FirstOrderRc { r, c } => SallenKeyStage::FirstOrderRc {
            r: round_sig9(r),
            c: round_sig9(c),
        },
        SallenKeyStage::SecondOrderSk { r, c1, c2 } => SallenKeyStage::SecondOrderSk {
            r: round_sig9(r),
            c1: round_sig9(c1),
            c2: round_sig9(c2),
        },
    }
}

fn design_notes(spec: &FilterSpecification, realization: &FilterRealization) -> Vec<String> {
    let n = realization.order();
    let wc = realization.char_freq();
    let (estimate, pass_att, stop_att) = match (realization.family(), realization.epsilon()) {
        (FilterFamily::ChebyshevI, Some(eps)) => (
            chebyshev::order_estimate(spec),
            chebyshev::attenuation_db(n, eps, wc, spec.omega_p()),
            chebyshev::attenuation_db(n, eps, wc, spec.omega_s()),
        ),
        _ => (
            butterworth::order_estimate(spec),
            butterworth::attenuation_db(n, wc, spec.omega_p()),
            butterworth::attenuation_db(n, wc, spec.omega_s()),
        ),
    };
    let mut notes = vec![
        format!("order estimate {} rounded up to {n}", fmt_sig9(estimate)),
        format!(
            "passband edge attenuation {} dB (limit {} dB)",
            fmt_sig9(pass_att),
            fmt_sig9(spec.ap_db())
        ),
        format!(
            "stopband edge attenuation {} dB (limit {} dB, margin {} dB)",
            fmt_sig9(stop_att),
            fmt_sig9(spec.as_db()),
            fmt_sig9(stop_att - spec.as_db())
        ),
    ];
    if realization.family() == FilterFamily::ChebyshevI && n.is_multiple_of(2) {
        notes.push(format!(
            "even order with unity DC gain: passband ripple peaks reach +{} dB",
            fmt_sig9(spec.ap_db())
        ));
    }
    notes
}

impl DesignReport {
    pub fn new(
        spec: &FilterSpecification,
        realization: &FilterRealization,
        corner: Option<Corner>,
        components: Option<(&SallenKeyCascade, f64, f64, ESeries)>,
    ) -> Self {
        let tf = realization.transfer_function();
        let mut poles: Vec<[f64; 2]> = realization
            .poles()
            .iter()
            .map(|p| [round_sig9(p.re), round_sig9(p.im)])
            .collect();
        poles.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        Self {
            spec: SpecEcho {
                ap_db: round_sig9(spec.ap_db()),
                omega_p: round_sig9(spec.omega_p()),
                as_db: round_sig9(spec.as_db()),
                omega_s: round_sig9(spec.omega_s()),
            },
            family: realization.family(),
            corner: match realization.family() {
                FilterFamily::Butterworth => corner.or(Some(Corner::Passband)),
                FilterFamily::ChebyshevI => None,
            },
            order: realization.order(),
            char_freq: round_sig9(realization.char_freq()),
            epsilon: realization.epsilon().map(round_sig9),
            poles,
            stages: tf.stages.iter().map(round_stage).collect(),
            numerator_constant: round_sig9(tf.numerator_constant()),
            components: components.map(|(cascade, r, c, series)| ComponentReport {
                r_ohms: round_sig9(r),
                c_first_farads: round_sig9(c),
                series,
                stages: cascade.stages.iter().map(round_component).collect(),
            }),
            notes: design_notes(spec, realization),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Rebuilds the realization from the stored poles.
    pub fn realization(&self) -> Result<FilterRealization, RealizationError> {
        let poles = self
            .poles
            .iter()
            .map(|[re, im]| ComplexFrequency::new(*re, *im))
            .collect();
        FilterRealization::new(self.family, self.char_freq, poles, self.epsilon)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        let _ = writeln!(out, "family:      {}", self.family);
        let _ = writeln!(
            out,
            "spec:        Ap {} dB @ {} rad/s, As {} dB @ {} rad/s",
            fmt_sig9(s.ap_db),
            fmt_sig9(s.omega_p),
            fmt_sig9(s.as_db),
            fmt_sig9(s.omega_s)
        );
        if let Some(corner) = self.corner {
            let _ = writeln!(out, "corner:      {corner}");
        }
        let _ = writeln!(out, "order:       {}", self.order);
        let _ = writeln!(out, "char freq:   {} rad/s", fmt_sig9(self.char_freq));
        if let Some(eps) = self.epsilon {
            let _ = writeln!(out, "epsilon:     {}", fmt_sig9(eps));
        }
        let _ = writeln!(out, "poles:");
        for [re, im] in &self.poles {
            let sign = if *im < 0.0 { '-' } else { '+' };
            let _ = writeln!(
                out,
                "  {:>14} {sign} {:>12}j",
                fmt_sig9(*re),
                fmt_sig9(im.abs())
            );
        }
        let _ = writeln!(out, "stages (ascending Q):");
        for (i, st) in self.stages.iter().enumerate() {
            match *st {
                CascadeStage::FirstOrder { w0 } => {
                    let _ = writeln!(out, "  {}: {w0} / (s + {w0})", i + 1);
                }
                CascadeStage::SecondOrder { a, b } => {
                    let _ = writeln!(
                        out,
                        "  {}: {b} / (s^2 + {a} s + {b})   Q = {}",
                        i + 1,
                        fmt_sig9(st.q())
                    );
                }
            }
        }
        let _ = writeln!(out, "numerator:   {}", fmt_sig9(self.numerator_constant));
        if let Some(c) = &self.components {
            let _ = writeln!(
                out,
                "components (R = {} ohm, first-order C = {} F, series {}):",
                fmt_sig9(c.r_ohms),
                fmt_sig9(c.c_first_farads),
                c.series
            );
            for (i, st) in c.stages.iter().enumerate() {
                match *st {
                    SallenKeyStage::FirstOrderRc { r, c } => {
                        let _ = writeln!(out, "  {}: RC      R = {r:e} ohm, C = {c:e} F", i + 1);
                    }
                    SallenKeyStage::SecondOrderSk { r, c1, c2 } => {
                        let _ = writeln!(
                            out,
                            "  {}: Sallen-Key R = {r:e} ohm, C1 = {c1:e} F, C2 = {c2:e} F",
                            i + 1
                        );
                    }
                }
            }
        }
        let _ = writeln!(out, "notes:");
        for note in &self.notes {
            let _ = writeln!(out, "  - {note}");
        }
        out
    }
}
