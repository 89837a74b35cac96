//! `--config` file: TOML keys mirroring the long flag names.

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Config {
    pub family: Option<String>,
    pub family_b: Option<String>,
    pub ap: Option<f64>,
    pub wp: Option<f64>,
    #[serde(rename = "as")]
    pub as_db: Option<f64>,
    pub ws: Option<f64>,
    pub corner: Option<String>,
    pub hz: Option<bool>,
    pub text: Option<bool>,
    pub grid_lo: Option<f64>,
    pub grid_hi: Option<f64>,
    pub points: Option<usize>,
    pub normalized: Option<bool>,
    pub fin_hz: Option<f64>,
    pub amp: Option<f64>,
    pub duration: Option<f64>,
    pub dt: Option<f64>,
    pub r_ohms: Option<f64>,
    pub c_first: Option<f64>,
    pub series: Option<String>,
    pub analysis: Option<String>,
    pub f_lo_hz: Option<f64>,
    pub f_hi_hz: Option<f64>,
}

#[derive(Debug)]
pub enum ConfigError {
    Read(std::io::Error),
    Parse(toml::de::Error),
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Read)?;
        toml::from_str(&text).map_err(ConfigError::Parse)
    }
}
