pub mod eca;
pub mod eco;
pub mod measure;
pub mod rbn;
pub mod traffic;

use std::fs::File;
use std::path::Path;

use emergence::ecology::Dataset;
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub fn read_dataset(path: &Path) -> CliResult<Dataset> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(Dataset::from_reader(std::io::BufReader::new(file))?)
}

/// Parses a kebab-case name through the type's serde representation.
pub fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}
