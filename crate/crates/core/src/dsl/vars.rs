use std::collections::BTreeMap;

use super::error::{ErrorKind, ScriptError};

/// Values for `$NAME` placeholders in path literals.
///
/// Explicit definitions win; when `env_fallback` is set, names not defined
/// explicitly are looked up in the process environment.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    vars: BTreeMap<String, String>,
    env_fallback: bool,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bindings that fall back to the process environment.
    pub fn with_env() -> Self {
        Self {
            vars: BTreeMap::new(),
            env_fallback: true,
        }
    }

    pub fn define(&mut self, name: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.vars.insert(name.into(), value.into());
        self
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.define(name, value);
        self
    }

    /// Parses a `KEY=VALUE` definition as given on the command line.
    pub fn define_pair(&mut self, pair: &str) -> Result<(), ScriptError> {
        let (k, v) = pair.split_once('=').ok_or_else(|| {
            ScriptError::new(
                ErrorKind::Variable,
                None,
                format!("definition `{pair}` is not of the form KEY=VALUE"),
            )
        })?;
        if !is_ident(k) {
            return Err(ScriptError::new(
                ErrorKind::Variable,
                None,
                format!("`{k}` is not a valid variable name"),
            ));
        }
        self.define(k, v);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<String> {
        self.vars.get(name).cloned().or_else(|| {
            if self.env_fallback {
                std::env::var(name).ok()
            } else {
                None
            }
        })
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Replaces `$IDENT` (longest match) and `${IDENT}` in a path literal.
pub fn substitute_vars(literal: &str, bindings: &Bindings) -> Result<String, ScriptError> {
    let mut out = String::with_capacity(literal.len());
    let mut rest = literal;
    while let Some(i) = rest.find('$') {
        out.push_str(&rest[..i]);
        let after = &rest[i + 1..];
        let (name, consumed) = if let Some(braced) = after.strip_prefix('{') {
            let end = braced.find('}').ok_or_else(|| {
                ScriptError::new(
                    ErrorKind::Variable,
                    None,
                    format!("unterminated `${{` in {literal:?}"),
                )
            })?;
            (&braced[..end], end + 2)
        } else {
            let end = after
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .unwrap_or(after.len());
            (&after[..end], end)
        };
        if !is_ident(name) {
            return Err(ScriptError::new(
                ErrorKind::Variable,
                None,
                format!("malformed variable reference in {literal:?}"),
            ));
        }
        let value = bindings.get(name).ok_or_else(|| {
            ScriptError::new(
                ErrorKind::Variable,
                None,
                format!("variable `{name}` is not defined"),
            )
        })?;
        out.push_str(&value);
        rest = &after[consumed..];
    }
    out.push_str(rest);
    Ok(out)
}
