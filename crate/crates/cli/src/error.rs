use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ALGORITHM: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("scenario {id}: {source}")]
    Scenario {
        id: String,
        #[source]
        source: semchan_core::Error,
    },
    #[error("unknown scenario id {0:?}")]
    UnknownScenario(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn scenario(id: &str, source: semchan_core::Error) -> Self {
        CliError::Scenario {
            id: id.to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownScenario(_) => EXIT_CONFIG,
            CliError::Scenario { .. } | CliError::Io { .. } => EXIT_ALGORITHM,
        }
    }
}
