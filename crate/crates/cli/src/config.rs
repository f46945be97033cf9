//! Scenario configuration: plain `key = value` files merged with flags.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use vatoms::dynamics::{couplings, CouplingModel, DEFAULT_DT, EVENT_SAMPLE_INTERVAL};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Output {
    Csv,
    States,
    Plot,
}

impl FromStr for Output {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Output::Csv),
            "states" => Ok(Output::States),
            "plot" => Ok(Output::Plot),
            other => Err(CliError::Config(format!(
                "unknown output '{other}' (expected csv, states, plot)"
            ))),
        }
    }
}

pub fn parse_outputs(s: &str) -> Result<BTreeSet<Output>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Every field optional, so a file and the flags can be layered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub state: Option<String>,
    pub model: Option<String>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub sample_every: Option<usize>,
    pub outputs: Option<String>,
    pub out: Option<PathBuf>,
    pub gamma: Option<f64>,
}

impl PartialConfig {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut c = PartialConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| CliError::Config(format!("config line {}: {msg}", n + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (k, v) = (k.trim(), v.trim().to_string());
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(&format!("'{v}' is not a number")));
            match k.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
                "state" | "initialstate" => c.state = Some(v),
                "model" => c.model = Some(v),
                "tend" => c.t_end = Some(num(&v)?),
                "dt" => c.dt = Some(num(&v)?),
                "sampleevery" => c.sample_every = Some(v.parse().map_err(|_| bad(&format!("'{v}' is not a count")))?),
                "outputs" => c.outputs = Some(v),
                "out" | "outpath" => c.out = Some(PathBuf::from(v)),
                "gamma" => c.gamma = Some(num(&v)?),
                _ => return Err(bad(&format!("unknown key '{k}'"))),
            }
        }
        Ok(c)
    }

    /// Fields of `self` win over `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            state: self.state.or(base.state),
            model: self.model.or(base.model),
            t_end: self.t_end.or(base.t_end),
            dt: self.dt.or(base.dt),
            sample_every: self.sample_every.or(base.sample_every),
            outputs: self.outputs.or(base.outputs),
            out: self.out.or(base.out),
            gamma: self.gamma.or(base.gamma),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub initial_state: String,
    pub model: CouplingModel,
    pub t_end: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub outputs: BTreeSet<Output>,
    pub out_path: PathBuf,
    /// Recorded only; all times are in units of `1/gamma`.
    pub gamma: f64,
}

impl ScenarioConfig {
    pub fn resolve(p: PartialConfig) -> Result<Self, CliError> {
        let initial_state = p
            .state
            .ok_or_else(|| CliError::Config("no initial state given".into()))?;
        vatoms::states::resolve(&initial_state).map_err(|e| CliError::Config(e.to_string()))?;
        let model = p
            .model
            .as_deref()
            .unwrap_or("independent")
            .parse::<CouplingModel>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        couplings(model, 1.0).map_err(|e| CliError::Config(e.to_string()))?;
        let t_end = p.t_end.ok_or_else(|| CliError::Config("no end time given".into()))?;
        let dt = p.dt.unwrap_or(DEFAULT_DT);
        if !(t_end > 0.0 && t_end.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::Config(format!(
                "tend = {t_end} and dt = {dt} must be positive"
            )));
        }
        let sample_every = p
            .sample_every
            .unwrap_or(((EVENT_SAMPLE_INTERVAL / dt).round() as usize).max(1));
        if sample_every == 0 {
            return Err(CliError::Config("sample-every must be at least 1".into()));
        }
        let gamma = p.gamma.unwrap_or(1.0);
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(CliError::Config(format!("gamma = {gamma} must be positive")));
        }
        Ok(ScenarioConfig {
            initial_state,
            model,
            t_end,
            dt,
            sample_every,
            outputs: parse_outputs(p.outputs.as_deref().unwrap_or("csv"))?,
            out_path: p.out.unwrap_or_else(|| PathBuf::from(".")),
            gamma,
        })
    }
}
