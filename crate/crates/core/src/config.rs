use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::embedding::{lift_solvers, unitri_solvers};
use crate::error::{Error, Result};
use crate::group::{FULL_GROUP_LIMIT, PRODUCT_LIMIT};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Text,
    Records,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "records" => Ok(OutputFormat::Records),
            _ => Err(Error::Unknown {
                kind: "format",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Search nodes per checked item.
    pub budget: u64,
    pub jobs: usize,
    pub max_group_order: usize,
    pub max_product_order: usize,
    pub format: OutputFormat,
    pub seed: u64,
    pub no_cache: bool,
    pub cache_dir: Option<PathBuf>,
    /// Registry name of the solver for unitriangular lifting problems.
    pub unitri_solver: String,
    /// Registry name of the solver for table embedding problems.
    pub lift_solver: String,
}

pub const CACHE_ENV: &str = "MASSEY_LAB_CACHE";

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            budget: 10_000_000,
            jobs: 1,
            max_group_order: FULL_GROUP_LIMIT,
            max_product_order: PRODUCT_LIMIT,
            format: OutputFormat::Text,
            seed: 0,
            no_cache: false,
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            unitri_solver: "layered".into(),
            lift_solver: "fiber".into(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::BadParameter("budget must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(Error::BadParameter("jobs must be at least 1".into()));
        }
        if self.max_group_order == 0 || self.max_group_order > FULL_GROUP_LIMIT {
            return Err(Error::BadParameter(format!(
                "max group order must be in 1..={FULL_GROUP_LIMIT}"
            )));
        }
        if self.max_product_order == 0 || self.max_product_order > PRODUCT_LIMIT {
            return Err(Error::BadParameter(format!(
                "max product order must be in 1..={PRODUCT_LIMIT}"
            )));
        }
        unitri_solvers().get(&self.unitri_solver)?;
        lift_solvers().get(&self.lift_solver)?;
        Ok(())
    }

    /// The cache directory in effect, `None` when caching is off.
    pub fn cache_dir(&self) -> Option<&PathBuf> {
        if self.no_cache {
            None
        } else {
            self.cache_dir.as_ref()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn zero_budget_and_jobs_are_rejected() {
        let c = RunConfig {
            budget: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let c = RunConfig {
            jobs: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn solver_names_are_checked() {
        let c = RunConfig {
            unitri_solver: "psychic".into(),
            ..RunConfig::default()
        };
        assert!(matches!(c.validate(), Err(Error::Unknown { .. })));
    }

    #[test]
    fn no_cache_hides_the_directory() {
        let c = RunConfig {
            cache_dir: Some("/tmp/x".into()),
            no_cache: true,
            ..RunConfig::default()
        };
        assert!(c.cache_dir().is_none());
    }

    #[test]
    fn formats_parse() {
        assert_eq!(
            "records".parse::<OutputFormat>().unwrap(),
            OutputFormat::Records
        );
        assert!("json".parse::<OutputFormat>().is_err());
    }
}
