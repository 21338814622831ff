use serde::Serialize;

/// Everything that ends a command with exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliError {
    Usage {
        message: String,
    },
    Io {
        file: String,
        message: String,
    },
    /// Malformed JSON or a value of the wrong type.
    Parse {
        file: String,
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON describing an invalid object.
    Invalid {
        #[serde(skip_serializing_if = "Option::is_none")]
        file: Option<String>,
        path: String,
        message: String,
    },
    Runtime {
        message: String,
    },
}

impl CliError {
    pub fn invalid(path: &str, message: impl Into<String>) -> Self {
        CliError::Invalid {
            file: None,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn in_file(self, name: &str) -> Self {
        match self {
            CliError::Invalid { path, message, .. } => CliError::Invalid {
                file: Some(name.into()),
                path,
                message,
            },
            other => other,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<strongcert::Error> for CliError {
    fn from(e: strongcert::Error) -> Self {
        CliError::Runtime { message: e.to_string() }
    }
}
