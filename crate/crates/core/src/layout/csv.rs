//! Spreadsheet-friendly CSV layout format.
//!
//! ```text
//! Visible layout,,,,,,,,,,
//! press1,1,2,3,4,5,6,7,8,9,0
//! row1,q,w,e,r,t,y,u,i,o,p
//! ...
//! press4,,,,Space,,,,"[punc]",Enter,
//! row4,,",",,,,,,.,,
//! ```
//!
//! Each keyboard row is a `press{i}` line followed by a `row{i}` line. The
//! row line holds the visible character of each key; the press line holds
//! either a special keyword (`Shift`, `Del`, `Space`, `Enter`) or the
//! space-separated long-press characters of the key below it. `[punc]` marks
//! the key that receives corpus punctuation. An optional `Shift layout` block
//! with the same structure gives the shift view explicitly; without it the
//! shift view is derived by uppercasing.
//!
//! Serialization is canonical: `\n` line endings, cells quoted only when they
//! contain `,`, `"` or `[` (so the placeholder is always written `"[punc]"`),
//! and the `Shift layout` block is written only when it differs from the
//! derived one.

use std::fmt;

use super::{KeyContent, KeySlot, Layout, LayoutError, LayoutView, Special};

pub const PUNC_PLACEHOLDER: &str = "[punc]";
const VISIBLE_HEADER: &str = "Visible layout";
const SHIFT_HEADER: &str = "Shift layout";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvError {
    /// 1-based line number in the input.
    pub line: usize,
    pub kind: CsvErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CsvErrorKind {
    Syntax(String),
    MissingHeader,
    UnexpectedLine(String),
    PressWithoutRow(usize),
    RowWithoutPress(usize),
    RaggedRow { expected: usize, found: usize },
    UnknownKeyword(String),
    SpecialOverCharacter(Special),
    LongPressOnEmpty,
    InvalidKeyCell(String),
    DuplicateLongPress(char),
    Shift(LayoutError),
}

impl fmt::Display for CsvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            CsvErrorKind::Syntax(s) => write!(f, "malformed CSV: {s}"),
            CsvErrorKind::MissingHeader => write!(f, "expected `{VISIBLE_HEADER}` header"),
            CsvErrorKind::UnexpectedLine(s) => write!(f, "unexpected line label `{s}`"),
            CsvErrorKind::PressWithoutRow(i) => write!(f, "press{i} is not followed by row{i}"),
            CsvErrorKind::RowWithoutPress(i) => write!(f, "row{i} is not preceded by press{i}"),
            CsvErrorKind::RaggedRow { expected, found } => {
                write!(f, "{found} columns, expected {expected}")
            }
            CsvErrorKind::UnknownKeyword(s) => write!(f, "unknown special keyword `{s}`"),
            CsvErrorKind::SpecialOverCharacter(s) => {
                write!(f, "special key {s} placed over a character cell")
            }
            CsvErrorKind::LongPressOnEmpty => f.write_str("long-press attached to an empty slot"),
            CsvErrorKind::InvalidKeyCell(s) => {
                write!(f, "key cell `{s}` is not a single character")
            }
            CsvErrorKind::DuplicateLongPress(c) => write!(f, "duplicate long-press {c:?}"),
            CsvErrorKind::Shift(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CsvError {}

struct Record {
    line: usize,
    fields: Vec<String>,
}

impl Record {
    fn label(&self) -> &str {
        self.fields.first().map_or("", String::as_str)
    }

    fn err(&self, kind: CsvErrorKind) -> CsvError {
        CsvError {
            line: self.line,
            kind,
        }
    }
}

fn read_records(text: &str) -> Result<Vec<Record>, CsvError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| CsvError {
            line: e.position().map_or(0, |p| p.line() as usize),
            kind: CsvErrorKind::Syntax(e.to_string()),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        records.push(Record {
            line,
            fields: record.iter().map(str::to_owned).collect(),
        });
    }
    Ok(records)
}

/// Parses the CSV layout format. The result is named `custom`.
pub fn parse_csv(text: &str) -> Result<Layout, CsvError> {
    let records = read_records(text)?;
    let mut pos = 0;
    match records.first() {
        Some(r) if r.label() == VISIBLE_HEADER => pos += 1,
        Some(r) => return Err(r.err(CsvErrorKind::MissingHeader)),
        None => {
            return Err(CsvError {
                line: 1,
                kind: CsvErrorKind::MissingHeader,
            })
        }
    }
    let (default_view, next) = parse_block(&records, pos)?;
    pos = next;

    let mut shift_view = None;
    if let Some(r) = records.get(pos) {
        if r.label() == SHIFT_HEADER {
            let (view, next) = parse_block(&records, pos + 1)?;
            shift_view = Some((r.line, view));
            pos = next;
        }
    }
    if let Some(r) = records.get(pos) {
        return Err(r.err(CsvErrorKind::UnexpectedLine(r.label().to_owned())));
    }

    match shift_view {
        None => Ok(Layout::new("custom", default_view)),
        Some((line, shift)) => {
            Layout::with_shift_view("custom", default_view, shift).map_err(|e| CsvError {
                line,
                kind: CsvErrorKind::Shift(e),
            })
        }
    }
}

fn parse_block(records: &[Record], mut pos: usize) -> Result<(LayoutView, usize), CsvError> {
    let mut rows = Vec::new();
    let mut width = None;
    loop {
        let index = rows.len() + 1;
        let Some(press) = records.get(pos) else { break };
        if press.label() == format!("row{index}") {
            return Err(press.err(CsvErrorKind::RowWithoutPress(index)));
        }
        if press.label() != format!("press{index}") {
            break;
        }
        let row = match records.get(pos + 1) {
            Some(r) if r.label() == format!("row{index}") => r,
            _ => return Err(press.err(CsvErrorKind::PressWithoutRow(index))),
        };
        let expected = *width.get_or_insert(press.fields.len() - 1);
        for rec in [press, row] {
            let found = rec.fields.len() - 1;
            if found != expected {
                return Err(rec.err(CsvErrorKind::RaggedRow { expected, found }));
            }
        }
        let slots = press.fields[1..]
            .iter()
            .zip(&row.fields[1..])
            .map(|(p, k)| parse_slot(p, k).map_err(|kind| press.err(kind)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(slots);
        pos += 2;
    }
    // widths were checked line by line above
    Ok((LayoutView { rows }, pos))
}

fn parse_slot(press: &str, key: &str) -> Result<KeySlot, CsvErrorKind> {
    let content = if key.is_empty() {
        KeyContent::Empty
    } else {
        match single_scalar(key) {
            Some(c) if !c.is_whitespace() => KeyContent::Char(c),
            _ => return Err(CsvErrorKind::InvalidKeyCell(key.to_owned())),
        }
    };

    if let Ok(special) = press.parse::<Special>() {
        if content != KeyContent::Empty {
            return Err(CsvErrorKind::SpecialOverCharacter(special));
        }
        return Ok(KeySlot::special(special));
    }

    let mut slot = KeySlot {
        content,
        ..Default::default()
    };
    for token in press.split(' ').filter(|t| !t.is_empty()) {
        if token == PUNC_PLACEHOLDER {
            slot.punc_placeholder = true;
        } else if let Some(c) = single_scalar(token) {
            if !slot.push_long_press(c) {
                return Err(CsvErrorKind::DuplicateLongPress(c));
            }
        } else {
            return Err(CsvErrorKind::UnknownKeyword(token.to_owned()));
        }
    }
    if slot.is_empty() && (slot.punc_placeholder || !slot.long_press.is_empty()) {
        return Err(CsvErrorKind::LongPressOnEmpty);
    }
    Ok(slot)
}

fn single_scalar(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Writes the canonical CSV form.
pub fn serialize_csv(layout: &Layout) -> String {
    let mut out = String::new();
    write_block(&mut out, VISIBLE_HEADER, layout.default_view());
    if !layout.has_derived_shift() {
        write_block(&mut out, SHIFT_HEADER, layout.shift_view());
    }
    out
}

fn write_block(out: &mut String, header: &str, view: &LayoutView) {
    out.push_str(header);
    for _ in 0..view.column_count() {
        out.push(',');
    }
    out.push('\n');
    for (i, row) in view.rows().iter().enumerate() {
        let index = i + 1;
        out.push_str(&format!("press{index}"));
        for slot in row {
            out.push(',');
            out.push_str(&quote(&press_cell(slot)));
        }
        out.push('\n');
        out.push_str(&format!("row{index}"));
        for slot in row {
            out.push(',');
            if let Some(c) = slot.character() {
                out.push_str(&quote(&c.to_string()));
            }
        }
        out.push('\n');
    }
}

fn press_cell(slot: &KeySlot) -> String {
    if let KeyContent::Special(s) = slot.content {
        return s.keyword().to_owned();
    }
    let mut tokens: Vec<String> = Vec::with_capacity(slot.long_press.len() + 1);
    if slot.punc_placeholder {
        tokens.push(PUNC_PLACEHOLDER.to_owned());
    }
    tokens.extend(slot.long_press.iter().map(char::to_string));
    tokens.join(" ")
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '[']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}
