use std::path::PathBuf;

use emergence::Error;

/// Process exit status for each class of failure.
pub mod exit {
    pub const IO: i32 = 1;
    pub const PARSE: i32 = 3;
    pub const PARAMETER: i32 = 4;
    pub const DOMAIN: i32 = 5;
    pub const CONSERVATION: i32 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {msg}")]
    Config { path: PathBuf, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("failed to encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Encode(_) => exit::IO,
            CliError::Config { .. } => exit::PARSE,
            CliError::Usage(_) => exit::PARAMETER,
            CliError::Core(e) => match e {
                Error::Parse { .. } => exit::PARSE,
                Error::Domain { .. } => exit::DOMAIN,
                Error::Conservation { .. } => exit::CONSERVATION,
                _ => exit::PARAMETER,
            },
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_distinct_codes() {
        let parse = CliError::Core(Error::Parse {
            row: 2,
            col: 1,
            msg: "x".into(),
        });
        let domain = CliError::Core(Error::Domain {
            expr: "√x",
            msg: "negative".into(),
        });
        let conservation = CliError::Core(Error::Conservation {
            tick: 3,
            expected: 10,
            found: 9,
        });
        let param = CliError::Core(Error::Parameter("bad".into()));
        let io = CliError::io(
            "missing.csv",
            std::io::Error::from(std::io::ErrorKind::NotFound),
        );
        let codes = [
            io.exit_code(),
            parse.exit_code(),
            param.exit_code(),
            domain.exit_code(),
            conservation.exit_code(),
        ];
        assert_eq!(codes, [1, 3, 4, 5, 6]);
        assert!(conservation.to_string().contains("tick 3"));
    }
}
