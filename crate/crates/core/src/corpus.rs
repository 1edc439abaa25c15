//! Corpus ingestion.
//!
//! Plain-text corpora and `word<TAB>count` frequency lists are loaded into a
//! uniform, NFC-normalized character stream. Loading is deterministic and
//! idempotent: feeding the text of a loaded document back through the loader
//! yields the same text.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

const BOM: char = '\u{feff}';

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: invalid UTF-8 at byte offset {offset}", path.display())]
    InvalidUtf8 { path: PathBuf, offset: usize },
    #[error("{}:{line}: {kind}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        kind: MalformedLine,
    },
    #[error("document weight must be positive")]
    ZeroWeight,
}

/// What was wrong with a word-frequency line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MalformedLine {
    MissingTab,
    EmptyWord,
    BadCount(String),
    NonPositiveCount,
}

impl fmt::Display for MalformedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MalformedLine::MissingTab => f.write_str("expected `word<TAB>count`"),
            MalformedLine::EmptyWord => f.write_str("empty word"),
            MalformedLine::BadCount(s) => write!(f, "count `{s}` is not an integer"),
            MalformedLine::NonPositiveCount => f.write_str("nonpositive count"),
        }
    }
}

/// A loaded corpus document. The text is NFC, free of BOMs and of control
/// characters other than newline and tab.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDocument {
    pub source_id: String,
    text: String,
    weight: u64,
}

impl CorpusDocument {
    /// Builds a document from raw text, normalizing it the same way the file
    /// loader does.
    pub fn from_text(source_id: impl Into<String>, raw: &str) -> Self {
        CorpusDocument {
            source_id: source_id.into(),
            text: normalize_text(raw),
            weight: 1,
        }
    }

    pub fn with_weight(mut self, weight: u64) -> Result<Self, CorpusError> {
        if weight == 0 {
            return Err(CorpusError::ZeroWeight);
        }
        self.weight = weight;
        Ok(self)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFrequencyEntry {
    pub word: String,
    pub count: u64,
}

/// Loads a UTF-8 plain-text corpus file.
pub fn load_plain_text(path: &Path) -> Result<CorpusDocument, CorpusError> {
    let text = read_utf8(path)?;
    Ok(CorpusDocument::from_text(path.display().to_string(), &text))
}

/// Loads a `word<TAB>count` list. Blank lines and `#` comments are skipped.
pub fn load_word_frequency_list(path: &Path) -> Result<Vec<WordFrequencyEntry>, CorpusError> {
    let text = read_utf8(path)?;
    parse_word_frequency_list(&text).map_err(|(line, kind)| CorpusError::Malformed {
        path: path.to_owned(),
        line,
        kind,
    })
}

/// Parses word-list text; errors carry the 1-based line number.
pub fn parse_word_frequency_list(
    text: &str,
) -> Result<Vec<WordFrequencyEntry>, (usize, MalformedLine)> {
    let text = text.strip_prefix(BOM).unwrap_or(text);
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, count) = line
            .rsplit_once('\t')
            .ok_or((lineno, MalformedLine::MissingTab))?;
        let count = count.trim();
        let count: i64 = count
            .parse()
            .map_err(|_| (lineno, MalformedLine::BadCount(count.to_owned())))?;
        if count <= 0 {
            return Err((lineno, MalformedLine::NonPositiveCount));
        }
        let word = normalize_text(word.trim());
        if word.is_empty() {
            return Err((lineno, MalformedLine::EmptyWord));
        }
        entries.push(WordFrequencyEntry {
            word,
            count: count as u64,
        });
    }
    Ok(entries)
}

fn read_utf8(path: &Path) -> Result<String, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| CorpusError::InvalidUtf8 {
        path: path.to_owned(),
        offset: e.utf8_error().valid_up_to(),
    })
}

/// Strips BOMs and control characters (keeping `\n` and `\t`), composes to
/// NFC, and drops combining marks that have no base character.
pub fn normalize_text(raw: &str) -> String {
    let cleaned: String = raw
        .chars()
        .filter(|&c| c != BOM && (c == '\n' || c == '\t' || !c.is_control()))
        .collect();

    let mut out = String::with_capacity(cleaned.len());
    let mut has_base = false;
    let mut dropped = 0usize;
    for c in cleaned.nfc() {
        if is_mark(c) {
            if !has_base {
                dropped += 1;
                continue;
            }
        } else {
            has_base = !c.is_whitespace();
        }
        out.push(c);
    }
    if dropped > 0 {
        log::warn!("dropped {dropped} orphan combining mark(s)");
    }
    out
}

fn is_mark(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::NonspacingMark
            | GeneralCategory::SpacingMark
            | GeneralCategory::EnclosingMark
    )
}
