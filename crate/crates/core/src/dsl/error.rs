use std::fmt;
use std::sync::Arc;

/// A position in a script file (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Location {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lex,
    Syntax,
    UnboundIdentifier,
    Arity,
    Type,
    Variable,
    Import,
    Runtime,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorKind::Lex => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::UnboundIdentifier => "unbound identifier",
            ErrorKind::Arity => "arity mismatch",
            ErrorKind::Type => "type error",
            ErrorKind::Variable => "unbound variable",
            ErrorKind::Import => "import error",
            ErrorKind::Runtime => "runtime error",
        };
        f.write_str(s)
    }
}

/// A diagnostic from any stage of script processing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptError {
    pub kind: ErrorKind,
    pub location: Option<Location>,
    pub message: String,
}

impl ScriptError {
    pub fn new(kind: ErrorKind, location: Option<Location>, message: impl Into<String>) -> Self {
        Self {
            kind,
            location,
            message: message.into(),
        }
    }

    pub(crate) fn at(kind: ErrorKind, location: &Location, message: impl Into<String>) -> Self {
        Self::new(kind, Some(location.clone()), message)
    }
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{loc}: {}: {}", self.kind, self.message),
            None => write!(f, "{}: {}", self.kind, self.message),
        }
    }
}

impl std::error::Error for ScriptError {}
