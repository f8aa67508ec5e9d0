//! Scenario files.
//!
//! A scenario file is flat TOML. Either the medians are given directly or
//! they are derived from a voter population:
//!
//! ```toml
//! polity = "pr"        # "smd" or "pr"
//! t_f = 0.0            # lobby's ideal tariff
//! t_m = 2.0            # median peak ...
//! # peaks = [1, 2, 3, 4, 5]                       ... or the voters' peaks
//! t_l = 3.0            # PR: party medians ...
//! t_s = 1.0
//! # labels = ["small", "small", "large", "large", "large"]   ... or labels
//! alpha = 0.6          # PR: large party's cabinet share
//! ```
//!
//! Unknown keys are rejected.

use serde::Deserialize;

use crate::actors::PrCoalition;
use crate::error::Error;
use crate::lab::Scenario;
use crate::preference::{partition_parties, Party, VoterPopulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polity {
    Smd,
    Pr,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub polity: Polity,
    pub t_f: f64,
    pub t_m: Option<f64>,
    pub peaks: Option<Vec<f64>>,
    pub t_l: Option<f64>,
    pub t_s: Option<f64>,
    pub labels: Option<Vec<Party>>,
    pub alpha: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: key `{key}`: {message}")]
    Key { path: String, key: &'static str, message: String },
    #[error("{path}: {source}")]
    Model { path: String, source: Error },
}

/// Scenario plus what was derived from a population, if one was given.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub polity: Polity,
    pub scenario: Scenario,
    pub population: Option<VoterPopulation>,
}

impl ScenarioFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse { path: path.into(), message: e.to_string() })
    }

    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        ScenarioFile::parse(&text, path)
    }

    /// Builds and validates the scenario. Conflicting or missing keys are
    /// parse errors; violated model constraints are model errors.
    pub fn resolve(&self, path: &str) -> Result<Resolved, ConfigError> {
        let key =
            |key: &'static str, message: &str| ConfigError::Key { path: path.into(), key, message: message.into() };
        let model = |source: Error| ConfigError::Model { path: path.into(), source };

        let population = match &self.peaks {
            Some(p) if p.is_empty() => return Err(key("peaks", "must list at least one voter")),
            Some(p) => Some(VoterPopulation::new(p.clone()).map_err(model)?),
            None => None,
        };
        let t_m = match (self.t_m, &population) {
            (Some(_), Some(_)) => return Err(key("t_m", "give either t_m or peaks, not both")),
            (Some(t), None) => t,
            (None, Some(pop)) => pop.median(),
            (None, None) => return Err(key("t_m", "missing (or give peaks)")),
        };

        let medians = match (&self.labels, self.t_l, self.t_s) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(key("labels", "give either labels or t_l/t_s, not both"));
            }
            (Some(labels), None, None) => {
                let pop = population.as_ref().ok_or_else(|| key("labels", "labels need peaks"))?;
                let part = partition_parties(pop, labels).map_err(model)?;
                Some((part.t_l, part.t_s))
            }
            (None, Some(l), Some(s)) => Some((l, s)),
            (None, None, None) => None,
            (None, Some(_), None) => return Err(key("t_s", "missing (t_l given)")),
            (None, None, Some(_)) => return Err(key("t_l", "missing (t_s given)")),
        };
        let coalition = match (medians, self.alpha) {
            (Some((l, s)), Some(a)) => Some(PrCoalition::new(l, s, a).map_err(model)?),
            (Some(_), None) => return Err(key("alpha", "missing for coalition")),
            (None, Some(_)) => return Err(key("alpha", "given without party medians")),
            (None, None) => None,
        };
        if self.polity == Polity::Pr && coalition.is_none() {
            return Err(key("polity", "pr needs t_l/t_s (or labels) and alpha"));
        }
        let scenario = Scenario::new(t_m, self.t_f, coalition, path).map_err(model)?;
        Ok(Resolved { polity: self.polity, scenario, population })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> Result<Resolved, ConfigError> {
        ScenarioFile::parse(text, "test.toml")?.resolve("test.toml")
    }

    #[test]
    fn direct_medians() {
        let r = resolve("polity = \"pr\"\nt_m = 2\nt_f = 0\nt_l = 3\nt_s = 1\nalpha = 0.6\n").unwrap();
        assert_eq!(r.polity, Polity::Pr);
        assert_eq!(r.scenario.coalition.unwrap().ideal(), 2.2);
        let r = resolve("polity = \"smd\"\nt_m = 2\nt_f = 0\n").unwrap();
        assert!(r.scenario.coalition.is_none());
    }

    #[test]
    fn derived_from_population() {
        let text = r#"
            polity = "pr"
            t_f = 0.5
            alpha = 0.7
            peaks = [1, 2, 3, 4, 5]
            labels = ["small", "small", "large", "large", "large"]
        "#;
        let r = resolve(text).unwrap();
        let c = r.scenario.coalition.unwrap();
        assert_eq!((r.scenario.t_m, c.t_l, c.t_s, c.ideal()), (3.0, 4.0, 1.5, 3.25));
        assert_eq!(r.scenario.solve_pr().unwrap().t_star, 1.875);

        let err = resolve(&text.replace("0.7", "0.6")).unwrap_err();
        assert!(err.to_string().contains("alpha*t_L + (1-alpha)*t_S > t_m"), "{err}");
    }

    #[test]
    fn rejects_bad_files() {
        let unknown = resolve("polity = \"smd\"\nt_m = 2\nt_f = 0\ncolour = 1\n").unwrap_err();
        assert!(unknown.to_string().contains("colour"), "{unknown}");
        let syntax = resolve("polity = \"smd\"\nt_m = \n").unwrap_err();
        assert!(syntax.to_string().contains("line 2"), "{syntax}");
        assert!(matches!(
            resolve("polity = \"smd\"\nt_f = 0\npeaks = []\n"),
            Err(ConfigError::Key { key: "peaks", .. })
        ));
        assert!(matches!(
            resolve("polity = \"smd\"\nt_m = 2\nt_f = 0\npeaks = [1]\n"),
            Err(ConfigError::Key { key: "t_m", .. })
        ));
        assert!(matches!(resolve("polity = \"pr\"\nt_m = 2\nt_f = 0\n"), Err(ConfigError::Key { key: "polity", .. })));
        assert!(matches!(
            resolve("polity = \"pr\"\nt_m = 2\nt_f = 0\nt_l = 3\nt_s = 1\n"),
            Err(ConfigError::Key { key: "alpha", .. })
        ));
        let order = resolve("polity = \"smd\"\nt_m = 2\nt_f = 3\n").unwrap_err();
        assert!(matches!(order, ConfigError::Model { .. }));
        assert!(order.to_string().contains("0 < t_f < t_m"));
    }
}
