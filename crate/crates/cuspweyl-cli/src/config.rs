//! JSON configuration: a flat object holding the global keys (`seed`,
//! `tol`, `format`, `out`) and the parameters of one subcommand. Unknown
//! keys are rejected.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::output::Format;
use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileGlobal {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

pub struct ConfigFile {
    pub global: FileGlobal,
    pub args: Map<String, Value>,
}

const GLOBAL_KEYS: [&str; 4] = ["seed", "tol", "format", "out"];

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Config("configuration must be a JSON object".into()));
    };
    let (global, args): (Map<String, Value>, Map<String, Value>) =
        map.into_iter().partition(|(k, _)| GLOBAL_KEYS.contains(&k.as_str()));
    let global = serde_json::from_value(Value::Object(global)).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(ConfigFile { global, args })
}

/// Subcommand parameters from the non-global keys.
pub fn parse_args<T: DeserializeOwned>(args: &Map<String, Value>) -> Result<T, CliError> {
    serde_json::from_value(Value::Object(args.clone())).map_err(|e| CliError::Config(format!("config: {e}")))
}

/// Flag values win over file values, field by field.
pub trait Merge {
    fn merge(self, file: Self) -> Self;
}

#[macro_export]
macro_rules! impl_merge {
    ($t:ty { $($f:ident),* $(,)? }) => {
        impl $crate::config::Merge for $t {
            fn merge(self, file: Self) -> Self {
                Self { $($f: self.$f.or(file.$f)),* }
            }
        }
    };
}
