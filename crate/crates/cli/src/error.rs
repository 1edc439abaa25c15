use std::fmt;
use std::process::ExitCode;

use kbsynth::config::ConfigError;
use kbsynth::corpus::CorpusError;
use kbsynth::emit::EmitError;
use kbsynth::synthesis::SynthesisError;

/// A failed command, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad flags, config or job file; exit 1.
    Usage(String),
    /// Input content the pipeline cannot use; exit 2.
    Data(String),
    /// Reading or writing files; exit 3.
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Io(m) => m,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

fn chain(err: &dyn std::error::Error) -> String {
    let mut msg = err.to_string();
    let mut source = err.source();
    while let Some(s) = source {
        let text = s.to_string();
        if !msg.ends_with(&text) {
            msg.push_str(": ");
            msg.push_str(&text);
        }
        source = s.source();
    }
    msg
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => Failure::Io(chain(&e)),
            _ => Failure::Data(chain(&e)),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(chain(&e)),
            _ => Failure::Usage(chain(&e)),
        }
    }
}

impl From<SynthesisError> for Failure {
    fn from(e: SynthesisError) -> Self {
        match e {
            SynthesisError::UnknownLayout(_) => Failure::Usage(chain(&e)),
            _ => Failure::Data(chain(&e)),
        }
    }
}

impl From<EmitError> for Failure {
    fn from(e: EmitError) -> Self {
        match e {
            EmitError::Io { .. } | EmitError::Conflict(_) => Failure::Io(chain(&e)),
            _ => Failure::Data(chain(&e)),
        }
    }
}
