use std::fmt;

use crate::layout::{simple_uppercase, Special};

/// Resource identifier of a softkey, e.g. `latin_n_tilde` or `latin_Q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeyId(String);

impl KeyId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub(crate) fn with_suffix(&self, n: usize) -> KeyId {
        KeyId(format!("{}_{n}", self.0))
    }
}

impl fmt::Display for KeyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot derive a key id for {character:?} (U+{:04X})", *character as u32)]
pub struct KeyIdError {
    pub character: char,
}

const SMALL_PREFIXES: [&str; 3] = [
    "LATIN SMALL LETTER ",
    "LATIN SMALL LIGATURE ",
    "LATIN LETTER ",
];
const CAPITAL_PREFIXES: [&str; 2] = ["LATIN CAPITAL LETTER ", "LATIN CAPITAL LIGATURE "];

/// Derives the softkey id from the character's Unicode name. With `shifted`
/// the character is first uppercased; basic Latin capitals keep their
/// letter (`latin_Q`), other capitals get an `_upper` suffix.
pub fn key_id_for(character: char, shifted: bool) -> Result<KeyId, KeyIdError> {
    let c = if shifted {
        simple_uppercase(character)
    } else {
        character
    };
    if c.is_ascii_uppercase() {
        return Ok(KeyId(format!("latin_{c}")));
    }
    let name = unicode_names2::name(c)
        .ok_or(KeyIdError { character: c })?
        .to_string();

    let id = if let Some(tail) = strip_any(&name, &CAPITAL_PREFIXES) {
        format!("latin_{}_upper", snake(tail))
    } else if let Some(tail) = strip_any(&name, &SMALL_PREFIXES) {
        format!("latin_{}", snake(tail))
    } else {
        snake(&name)
    };
    if is_valid_id(&id) {
        Ok(KeyId(id))
    } else {
        Err(KeyIdError { character: c })
    }
}

pub fn special_key_id(special: Special) -> KeyId {
    KeyId(format!("key_{}", special.keyword().to_ascii_lowercase()))
}

fn strip_any<'a>(name: &'a str, prefixes: &[&str]) -> Option<&'a str> {
    prefixes.iter().find_map(|p| name.strip_prefix(p))
}

fn snake(tail: &str) -> String {
    let lower = tail.to_ascii_lowercase().replace(" with ", " ");
    let mut out = String::with_capacity(lower.len());
    for ch in lower.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_owned()
}

fn is_valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
