use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::decimal::{decimal_from_f64, parse_decimal, DecimalError};
use crate::balancer::Method;
use crate::model::Exact;
use crate::simulator::{Release, ServiceModel, SimConfig};

const MAX_GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid run configuration: {0}")]
    Json(String),
    #[error("`{key}`: {message}")]
    Invalid { key: &'static str, message: String },
    #[error("alpha range `{0}` must look like start:stop:step")]
    RangeSyntax(String),
    #[error("alpha range: {0}")]
    Range(String),
    #[error(transparent)]
    Decimal(#[from] DecimalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ServiceKind {
    #[default]
    Deterministic,
    Uniform,
}

impl std::str::FromStr for ServiceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deterministic" => Ok(ServiceKind::Deterministic),
            "uniform" => Ok(ServiceKind::Uniform),
            other => Err(format!("unknown service model `{other}` (expected deterministic or uniform)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub horizon_s: f64,
    #[serde(default)]
    pub warmup_s: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub service_model: ServiceKind,
    #[serde(default)]
    pub queue_capacity: Option<u32>,
    /// Paced release interval; saturated release when absent.
    #[serde(default)]
    pub release_interval_s: Option<f64>,
}

/// JSON run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seats: u32,
    #[serde(default = "default_period")]
    pub period_sec: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub sim: Option<SimSection>,
}

fn default_period() -> f64 {
    3600.0
}

fn default_alpha() -> f64 {
    1.0
}

fn default_method() -> Method {
    Method::Greedy
}

impl RunConfig {
    pub fn parse(data: &[u8]) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_slice(data).map_err(|e| ConfigError::Json(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key, message: &str| ConfigError::Invalid {
            key,
            message: message.to_owned(),
        };
        if self.seats == 0 {
            return Err(invalid("seats", "must be at least 1"));
        }
        self.period()?;
        self.alpha_exact()?;
        if let Some(sim) = &self.sim {
            if !(sim.horizon_s > 0.0 && sim.horizon_s.is_finite()) {
                return Err(invalid("sim.horizon_s", "must be positive"));
            }
            if !(sim.warmup_s >= 0.0 && sim.warmup_s < sim.horizon_s) {
                return Err(invalid("sim.warmup_s", "must be non-negative and below the horizon"));
            }
            if sim.queue_capacity == Some(0) {
                return Err(invalid("sim.queue_capacity", "must be at least 1"));
            }
            if let Some(r) = sim.release_interval_s {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(invalid("sim.release_interval_s", "must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn period(&self) -> Result<Exact, ConfigError> {
        let p = decimal_from_f64(self.period_sec)?;
        if !p.is_positive() {
            return Err(ConfigError::Invalid {
                key: "period_sec",
                message: "must be positive".into(),
            });
        }
        Ok(p)
    }

    pub fn alpha_exact(&self) -> Result<Exact, ConfigError> {
        let a = decimal_from_f64(self.alpha)?;
        if !a.is_positive() || a > Exact::one() {
            return Err(ConfigError::Invalid {
                key: "alpha",
                message: "must lie in (0, 1]".into(),
            });
        }
        Ok(a)
    }

    /// Simulation settings, if the configuration has a `sim` section.
    pub fn sim_config(&self) -> Result<Option<SimConfig>, ConfigError> {
        let Some(sim) = &self.sim else {
            return Ok(None);
        };
        let service = match sim.service_model {
            ServiceKind::Deterministic => ServiceModel::Deterministic,
            ServiceKind::Uniform => ServiceModel::UniformInterval {
                alpha: self.alpha_exact()?,
                deviations: None,
            },
        };
        Ok(Some(SimConfig {
            horizon: sim.horizon_s,
            warmup: sim.warmup_s,
            service,
            seed: sim.seed,
            queue_capacity: sim.queue_capacity,
            release: sim
                .release_interval_s
                .map_or(Release::Saturated, |interval| Release::Paced { interval }),
            ..SimConfig::default()
        }))
    }
}

/// Parses `start:stop:step` into the inclusive grid `start, start+step, ...`
/// up to `stop`. Values are not range-checked here.
pub fn parse_alpha_range(text: &str) -> Result<Vec<Exact>, ConfigError> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(ConfigError::RangeSyntax(text.to_owned()));
    };
    let (start, stop, step) = (parse_decimal(start)?, parse_decimal(stop)?, parse_decimal(step)?);
    if !step.is_positive() {
        return Err(ConfigError::Range("step must be positive".into()));
    }
    if stop < start {
        return Err(ConfigError::Range("stop is below start".into()));
    }
    let count = ((stop - start) / step).floor().to_integer();
    if count >= MAX_GRID_POINTS as i128 {
        return Err(ConfigError::Range(format!("more than {MAX_GRID_POINTS} points")));
    }
    Ok((0..=count).map(|k| start + step * Exact::from_integer(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::parse(br#"{"seats": 32}"#).unwrap();
        assert_eq!(cfg.method, Method::Greedy);
        assert_eq!(cfg.period().unwrap(), Exact::from_integer(3600));
        assert!(cfg.sim_config().unwrap().is_none());
    }

    #[test]
    fn full_config() {
        let text = br#"{
            "seats": 32, "period_sec": 3600, "alpha": 0.5, "method": "optimal",
            "sim": {"horizon_s": 28800, "warmup_s": 3600, "seed": 7,
                    "service_model": "uniform", "queue_capacity": 4}
        }"#;
        let cfg = RunConfig::parse(text).unwrap();
        let sim = cfg.sim_config().unwrap().unwrap();
        assert_eq!(sim.seed, 7);
        assert_eq!(sim.queue_capacity, Some(4));
        assert!(matches!(sim.service, ServiceModel::UniformInterval { alpha, .. } if alpha == Exact::new(1, 2)));
    }

    #[test]
    fn rejects_unknown_and_invalid_keys() {
        assert!(matches!(RunConfig::parse(br#"{"seats": 32, "colour": 1}"#), Err(ConfigError::Json(_))));
        assert!(matches!(
            RunConfig::parse(br#"{"seats": 32, "sim": {"horizon_s": 10, "bogus": 1}}"#),
            Err(ConfigError::Json(_))
        ));
        assert!(RunConfig::parse(br#"{"seats": 0}"#).is_err());
        assert!(RunConfig::parse(br#"{"seats": 3, "alpha": 1.5}"#).is_err());
        assert!(RunConfig::parse(br#"{"seats": 3, "sim": {"horizon_s": 10, "warmup_s": 10}}"#).is_err());
        assert!(RunConfig::parse(b"not json").is_err());
    }

    #[test]
    fn alpha_ranges() {
        let g = parse_alpha_range("0.5:1:0.5").unwrap();
        assert_eq!(g, vec![Exact::new(1, 2), Exact::from_integer(1)]);
        let g = parse_alpha_range("0.1:1.0:0.1").unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(*g.last().unwrap(), Exact::from_integer(1));
        assert_eq!(parse_alpha_range("0.3:0.3:0.1").unwrap().len(), 1);
        assert!(parse_alpha_range("0.1:1").is_err());
        assert!(parse_alpha_range("1:0.1:0.1").is_err());
        assert!(parse_alpha_range("0.1:1:0").is_err());
        assert!(parse_alpha_range("0:1:0.000001").is_err());
    }
}
