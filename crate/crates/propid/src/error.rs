use std::fmt;
use std::process::ExitCode;

use propid_core::adversary::AdversaryError;
use propid_core::identify::{IdentifyError, NotApplicable};
use propid_core::properties::PropertyError;

/// Failures grouped by exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Exit 2: the section does not excite every direction the property needs.
    NotRich(String),
    /// Exit 3: unreadable or inconsistent input.
    Malformed(String),
    /// Exit 4: an internal check failed.
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::NotRich(_) => 2,
            Failure::Malformed(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn context(self, what: &str) -> Failure {
        match self {
            Failure::NotRich(m) => Failure::NotRich(format!("{what}: {m}")),
            Failure::Malformed(m) => Failure::Malformed(format!("{what}: {m}")),
            Failure::Internal(m) => Failure::Internal(format!("{what}: {m}")),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotRich(m) | Failure::Malformed(m) => f.write_str(m),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<PropertyError> for Failure {
    fn from(e: PropertyError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<IdentifyError> for Failure {
    fn from(e: IdentifyError) -> Self {
        match e {
            IdentifyError::NotSufficientlyRich { .. } | IdentifyError::NotIdentifiable { .. } => {
                Failure::NotRich(e.to_string())
            }
            IdentifyError::Property(_) | IdentifyError::DimensionMismatch { .. } | IdentifyError::Inconsistent => {
                Failure::Malformed(e.to_string())
            }
            IdentifyError::Internal(_) => Failure::Internal(e.to_string()),
        }
    }
}

impl From<AdversaryError> for Failure {
    fn from(e: AdversaryError) -> Self {
        match e {
            AdversaryError::Property(_) | AdversaryError::Unsupported | AdversaryError::InfeasibleSigns => {
                Failure::Malformed(e.to_string())
            }
            // a rich section is an answer, handled by the caller; reaching here is a bug
            AdversaryError::SectionIsRich | AdversaryError::EmptyC1 | AdversaryError::Internal(_) => {
                Failure::Internal(e.to_string())
            }
        }
    }
}

impl From<NotApplicable> for Failure {
    fn from(e: NotApplicable) -> Self {
        Failure::Malformed(e.to_string())
    }
}
