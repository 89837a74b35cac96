use serde::{Deserialize, Serialize};

use super::round_sig9;
use crate::model::{FilterFamily, FilterRealization};

/// S-plane map of a realization. Both families here are all-pole, so
/// `zeros` is always empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleZeroDocument {
    pub family: FilterFamily,
    pub order: usize,
    pub char_freq: f64,
    pub epsilon: Option<f64>,
    pub poles: Vec<[f64; 2]>,
    pub zeros: Vec<[f64; 2]>,
}

impl PoleZeroDocument {
    pub fn new(realization: &FilterRealization) -> Self {
        let mut poles: Vec<[f64; 2]> = realization
            .poles()
            .iter()
            .map(|p| [round_sig9(p.re), round_sig9(p.im)])
            .collect();
        poles.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        Self {
            family: realization.family(),
            order: realization.order(),
            char_freq: round_sig9(realization.char_freq()),
            epsilon: realization.epsilon().map(round_sig9),
            poles,
            zeros: Vec::new(),
        }
    }
}

pub fn emit_pole_zero_json(realization: &FilterRealization) -> String {
    let mut s = serde_json::to_string_pretty(&PoleZeroDocument::new(realization))
        .expect("pole-zero document serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_spec;
    use crate::{butterworth, chebyshev};

    fn parse(json: &str) -> PoleZeroDocument {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn butterworth_map() {
        let spec = validate_spec(0.5, 100.0, 20.0, 200.0).unwrap();
        let doc = parse(&emit_pole_zero_json(&butterworth::design(&spec)));
        assert_eq!(doc.poles.len(), 5);
        assert!(doc.zeros.is_empty());
        assert_eq!(doc.poles[0], [-123.412016, 0.0]);
        assert!(doc.poles.windows(2).all(|w| w[0][0] <= w[1][0]));
    }

    #[test]
    fn first_order_map() {
        let spec = validate_spec(3.0, 1.0, 3.5, 10.0).unwrap();
        let doc = parse(&emit_pole_zero_json(&butterworth::design(&spec)));
        assert_eq!(doc.order, 1);
        assert_eq!(doc.poles.len(), 1);
    }

    #[test]
    fn chebyshev_map_has_no_real_axis_pole() {
        let spec = validate_spec(0.5, 100.0, 20.0, 200.0).unwrap();
        let json = emit_pole_zero_json(&chebyshev::design(&spec).unwrap());
        let doc = parse(&json);
        assert_eq!(doc.poles.len(), 4);
        assert!(doc.poles.iter().all(|p| p[1] != 0.0));
        assert!(json.contains("\"zeros\": []"));
        assert!(json.contains("\"epsilon\": 0.3493114"));
    }
}
