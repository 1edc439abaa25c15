//! In-memory keyboard layouts: a rectangular grid of key slots in a default
//! (lowercase) view and a shift view, plus the CSV codec and the built-in
//! base layouts.

mod builtin;
mod csv;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use self::builtin::{
    builtin_base_layout, identify_base_layout, UnknownLayout, BUILTIN_LAYOUT_NAMES,
};
pub use self::csv::{parse_csv, serialize_csv, CsvError, CsvErrorKind, PUNC_PLACEHOLDER};

/// Non-character keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Special {
    Shift,
    Del,
    Space,
    Enter,
}

impl Special {
    pub const ALL: [Special; 4] = [Special::Shift, Special::Del, Special::Space, Special::Enter];

    pub fn keyword(self) -> &'static str {
        match self {
            Special::Shift => "Shift",
            Special::Del => "Del",
            Special::Space => "Space",
            Special::Enter => "Enter",
        }
    }
}

impl fmt::Display for Special {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Special {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Special::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KeyContent {
    Char(char),
    Special(Special),
    #[default]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KeySlot {
    pub content: KeyContent,
    /// Frequency order, most frequent first. Entries are unique.
    pub long_press: Vec<char>,
    /// Marks the key that receives corpus punctuation during synthesis.
    pub punc_placeholder: bool,
}

impl KeySlot {
    pub fn char(c: char) -> Self {
        KeySlot {
            content: KeyContent::Char(c),
            ..Default::default()
        }
    }

    pub fn special(s: Special) -> Self {
        KeySlot {
            content: KeyContent::Special(s),
            ..Default::default()
        }
    }

    pub fn empty() -> Self {
        KeySlot::default()
    }

    pub fn with_long_press(mut self, chars: impl IntoIterator<Item = char>) -> Self {
        for c in chars {
            self.push_long_press(c);
        }
        self
    }

    pub fn character(&self) -> Option<char> {
        match self.content {
            KeyContent::Char(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.content == KeyContent::Empty
    }

    /// Appends `c` unless already present. Returns whether it was added.
    pub fn push_long_press(&mut self, c: char) -> bool {
        if self.long_press.contains(&c) {
            false
        } else {
            self.long_press.push(c);
            true
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayoutError {
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    ShiftShapeMismatch,
    ShiftKindMismatch {
        row: usize,
        col: usize,
    },
}

impl fmt::Display for LayoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutError::RaggedRows {
                row,
                expected,
                found,
            } => {
                write!(f, "row {row} has {found} columns, expected {expected}")
            }
            LayoutError::ShiftShapeMismatch => {
                f.write_str("shift view dimensions differ from default view")
            }
            LayoutError::ShiftKindMismatch { row, col } => {
                write!(
                    f,
                    "shift view slot ({row},{col}) differs in kind from default view"
                )
            }
        }
    }
}

impl std::error::Error for LayoutError {}

/// A rectangular grid of key slots.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayoutView {
    rows: Vec<Vec<KeySlot>>,
}

impl LayoutView {
    pub fn new(rows: Vec<Vec<KeySlot>>) -> Result<Self, LayoutError> {
        if let Some(first) = rows.first() {
            let expected = first.len();
            if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != expected) {
                return Err(LayoutError::RaggedRows {
                    row,
                    expected,
                    found: r.len(),
                });
            }
        }
        Ok(LayoutView { rows })
    }

    pub fn rows(&self) -> &[Vec<KeySlot>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn slot(&self, row: usize, col: usize) -> Option<&KeySlot> {
        self.rows.get(row)?.get(col)
    }

    pub fn slot_mut(&mut self, row: usize, col: usize) -> Option<&mut KeySlot> {
        self.rows.get_mut(row)?.get_mut(col)
    }

    /// `(row, col, slot)` in row-major order.
    pub fn slots(&self) -> impl Iterator<Item = (usize, usize, &KeySlot)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, s)| (r, c, s)))
    }

    /// Position of the first character slot holding `c`.
    pub fn find_char(&self, c: char) -> Option<(usize, usize)> {
        self.slots()
            .find(|(_, _, s)| s.character() == Some(c))
            .map(|(r, col, _)| (r, col))
    }

    pub fn same_shape(&self, other: &LayoutView) -> bool {
        self.row_count() == other.row_count() && self.column_count() == other.column_count()
    }
}

/// Simple one-scalar uppercase; characters whose uppercase is not a single
/// scalar (`ß` -> `SS`) stay unchanged.
pub fn simple_uppercase(c: char) -> char {
    let mut it = c.to_uppercase();
    match (it.next(), it.next()) {
        (Some(u), None) => u,
        _ => c,
    }
}

pub fn simple_lowercase(c: char) -> char {
    let mut it = c.to_lowercase();
    match (it.next(), it.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Uppercases every character slot and long-press entry.
pub fn derive_shift_view(view: &LayoutView) -> LayoutView {
    let rows = view
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|slot| {
                    let content = match slot.content {
                        KeyContent::Char(c) => KeyContent::Char(simple_uppercase(c)),
                        other => other,
                    };
                    let mut shifted = KeySlot {
                        content,
                        long_press: Vec::with_capacity(slot.long_press.len()),
                        punc_placeholder: slot.punc_placeholder,
                    };
                    for &c in &slot.long_press {
                        shifted.push_long_press(simple_uppercase(c));
                    }
                    shifted
                })
                .collect()
        })
        .collect();
    LayoutView { rows }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub name: String,
    pub language_tag: String,
    pub currency_symbol: Option<char>,
    pub base_layout_name: String,
    default_view: LayoutView,
    shift_view: LayoutView,
}

impl Layout {
    /// A layout whose shift view is derived from `default_view`.
    pub fn new(name: impl Into<String>, default_view: LayoutView) -> Self {
        let name = name.into();
        let shift_view = derive_shift_view(&default_view);
        Layout {
            base_layout_name: name.clone(),
            name,
            language_tag: "und".to_owned(),
            currency_symbol: None,
            default_view,
            shift_view,
        }
    }

    /// A layout with an explicit shift view. Both views must have the same
    /// shape and the same slot kinds position by position.
    pub fn with_shift_view(
        name: impl Into<String>,
        default_view: LayoutView,
        shift_view: LayoutView,
    ) -> Result<Self, LayoutError> {
        check_shift_view(&default_view, &shift_view)?;
        let mut layout = Layout::new(name, default_view);
        layout.shift_view = shift_view;
        Ok(layout)
    }

    pub fn default_view(&self) -> &LayoutView {
        &self.default_view
    }

    pub fn shift_view(&self) -> &LayoutView {
        &self.shift_view
    }

    /// Mutable access to the default view; call [`Layout::rederive_shift`]
    /// afterwards to keep the shift view in step.
    pub fn default_view_mut(&mut self) -> &mut LayoutView {
        &mut self.default_view
    }

    pub fn rederive_shift(&mut self) {
        self.shift_view = derive_shift_view(&self.default_view);
    }

    pub fn has_derived_shift(&self) -> bool {
        self.shift_view == derive_shift_view(&self.default_view)
    }

    pub fn view(&self, which: ViewKind) -> &LayoutView {
        match which {
            ViewKind::Default => &self.default_view,
            ViewKind::Shift => &self.shift_view,
        }
    }
}

fn check_shift_view(default_view: &LayoutView, shift_view: &LayoutView) -> Result<(), LayoutError> {
    if !default_view.same_shape(shift_view) {
        return Err(LayoutError::ShiftShapeMismatch);
    }
    for ((row, col, d), (_, _, s)) in default_view.slots().zip(shift_view.slots()) {
        let same_kind = matches!(
            (d.content, s.content),
            (KeyContent::Char(_), KeyContent::Char(_)) | (KeyContent::Empty, KeyContent::Empty)
        ) || (matches!(d.content, KeyContent::Special(_))
            && d.content == s.content);
        if !same_kind {
            return Err(LayoutError::ShiftKindMismatch { row, col });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViewKind {
    Default,
    Shift,
}

/// Case-folded characters shown on keys of the default view.
pub fn visible_characters(layout: &Layout) -> BTreeSet<char> {
    layout
        .default_view
        .slots()
        .filter_map(|(_, _, s)| s.character())
        .map(simple_lowercase)
        .collect()
}
