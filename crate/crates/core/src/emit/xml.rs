//! Text templates for the five resource files. Indentation is two spaces
//! and attribute order is fixed so output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::key_id::{key_id_for, special_key_id, KeyId};
use super::{EmitConfig, EmitError};
use crate::layout::{KeyContent, Layout, LayoutView, ViewKind};

pub const SOFT_KEY_VIEW: &str = "framework.keyboard.SoftKeyView";
pub const ANDROID_NS: &str = "http://schemas.android.com/apk/res/android";
pub const STANDARD_VARIANTS: [&str; 5] = ["qwerty", "qwertz", "azerty", "dvorak", "colemak"];
pub const SPLITTER: char = ',';

/// Escapes attribute text. Non-ASCII becomes an uppercase hex character
/// reference of at least four digits (`&#x014B;`).
pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            ' '..='~' => out.push(c),
            _ => {
                let _ = write!(out, "&#x{:04X};", c as u32);
            }
        }
    }
    out
}

/// Lowercase, `[a-z0-9_]` form of a language tag for resource names.
pub fn resource_suffix(tag: &str) -> String {
    tag.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

/// Number of keys in each row, skipping empty slots.
pub fn row_key_counts(view: &LayoutView) -> Vec<usize> {
    view.rows()
        .iter()
        .map(|row| row.iter().filter(|s| !s.is_empty()).count())
        .collect()
}

/// Grid shape name such as `10_10_9_4`.
pub fn grid_shape(layout: &Layout) -> Result<String, EmitError> {
    let counts = row_key_counts(layout.default_view());
    if counts.is_empty() {
        return Err(EmitError::NoRows);
    }
    if let Some(row) = counts.iter().position(|&n| n == 0) {
        return Err(EmitError::EmptyRow(row));
    }
    Ok(counts
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("_"))
}

pub fn view_position_id(row: usize, key: usize) -> String {
    format!("key_pos_{row}_{key}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyAction {
    Press(char),
    Function(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftkeyDef {
    pub id: KeyId,
    pub action: KeyAction,
    pub long_press: Vec<char>,
}

/// Key ids for both views plus the deduplicated softkey definitions, in
/// first-use order (row-major, default before shift at each position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyAssignment {
    /// `(row, key index in row) -> id`, one map per view.
    pub default_ids: BTreeMap<(usize, usize), KeyId>,
    pub shift_ids: BTreeMap<(usize, usize), KeyId>,
    pub softkeys: Vec<SoftkeyDef>,
}

pub fn assign_key_ids(layout: &Layout) -> Result<KeyAssignment, EmitError> {
    let mut assignment = KeyAssignment {
        default_ids: BTreeMap::new(),
        shift_ids: BTreeMap::new(),
        softkeys: Vec::new(),
    };
    let mut index: BTreeMap<KeyId, usize> = BTreeMap::new();

    let default_rows = layout.default_view().rows();
    let shift_rows = layout.shift_view().rows();
    for (r, (drow, srow)) in default_rows.iter().zip(shift_rows).enumerate() {
        let mut k = 0;
        for (dslot, sslot) in drow.iter().zip(srow) {
            if dslot.is_empty() {
                continue;
            }
            for (kind, slot) in [(ViewKind::Default, dslot), (ViewKind::Shift, sslot)] {
                let (id, action) = match slot.content {
                    KeyContent::Char(c) => {
                        let id = key_id_for(c, false).map_err(EmitError::KeyId)?;
                        (id, KeyAction::Press(c))
                    }
                    KeyContent::Special(s) => {
                        (special_key_id(s), KeyAction::Function(function_name(s)))
                    }
                    KeyContent::Empty => unreachable!("views share slot kinds"),
                };
                if slot.long_press.contains(&SPLITTER) {
                    return Err(EmitError::SplitterInLongPress {
                        key: id.to_string(),
                    });
                }
                let def = SoftkeyDef {
                    id: id.clone(),
                    action,
                    long_press: slot.long_press.clone(),
                };
                let id = intern(&mut assignment.softkeys, &mut index, def);
                let map = match kind {
                    ViewKind::Default => &mut assignment.default_ids,
                    ViewKind::Shift => &mut assignment.shift_ids,
                };
                map.insert((r, k), id);
            }
            k += 1;
        }
    }
    Ok(assignment)
}

/// Reuses an identical definition; a clashing one gets a numeric suffix.
fn intern(
    defs: &mut Vec<SoftkeyDef>,
    index: &mut BTreeMap<KeyId, usize>,
    mut def: SoftkeyDef,
) -> KeyId {
    let base = def.id.clone();
    let mut n = 1;
    loop {
        match index.get(&def.id) {
            Some(&i) if defs[i] == def => return def.id,
            Some(_) => {
                n += 1;
                def.id = base.with_suffix(n);
            }
            None => {
                index.insert(def.id.clone(), defs.len());
                let id = def.id.clone();
                defs.push(def);
                return id;
            }
        }
    }
}

fn function_name(s: crate::layout::Special) -> &'static str {
    use crate::layout::Special::*;
    match s {
        Shift => "shift",
        Del => "delete",
        Space => "space",
        Enter => "enter",
    }
}

pub fn ime_xml(layout: &Layout, config: &EmitConfig) -> String {
    let res = resource_suffix(&layout.language_tag);
    let ime_name = config.ime_name.clone().unwrap_or_else(|| res.clone());
    let variant = config
        .variant
        .clone()
        .unwrap_or_else(|| layout.base_layout_name.clone());
    let variant_keyboard = config
        .variant_keyboard
        .clone()
        .unwrap_or_else(|| variant.clone());

    let mut out = String::new();
    out.push_str("<framework>\n");
    let _ = writeln!(
        out,
        "  <ime string_id=\"ime_{}\" language=\"{}\" ascii_capable=\"{}\" auto_capital=\"{}\">",
        escape_attr(&ime_name),
        escape_attr(&layout.language_tag),
        config.ascii_capable,
        config.auto_capital
    );
    let fragment = format!("@xml/keyboard_fragment_{res}");
    let mut group = |variant: &str, label: Option<String>, merge: &str| {
        match label {
            Some(label) => {
                let _ = writeln!(
                    out,
                    "    <keyboard_group variant=\"{}\" variant_label=\"{}\">",
                    escape_attr(variant),
                    escape_attr(&label)
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "    <keyboard_group variant=\"{}\">",
                    escape_attr(variant)
                );
            }
        }
        let _ = writeln!(out, "      <keyboard type=\"prime\" def=\"{fragment}\">");
        let _ = writeln!(
            out,
            "        <merge def=\"@xml/keyboard_{}\"/>",
            escape_attr(merge)
        );
        out.push_str("      </keyboard>\n");
        out.push_str("    </keyboard_group>\n");
    };
    group(
        &variant,
        Some(format!("@string/variant_{res}")),
        &variant_keyboard,
    );
    for std_variant in STANDARD_VARIANTS {
        if std_variant != variant {
            group(std_variant, None, std_variant);
        }
    }
    out.push_str("  </ime>\n");
    out.push_str("</framework>\n");
    out
}

pub fn keyboard_xml(layout: &Layout) -> Result<String, EmitError> {
    let res = resource_suffix(&layout.language_tag);
    let shape = grid_shape(layout)?;
    let mut out = String::new();
    out.push_str("<framework>\n");
    out.push_str("  <include href=\"@xml/keyboard_base\"/>\n");
    out.push_str("  <keyboard>\n");
    let _ = writeln!(
        out,
        "    <view type=\"body\" layout=\"@layout/grid_{shape}\">"
    );
    let _ = writeln!(out, "      <include href=\"@xml/keymapping_{res}\"/>");
    let _ = writeln!(out, "      <softkeys href=\"@xml/softkeys_{res}\"/>");
    out.push_str("    </view>\n");
    out.push_str("  </keyboard>\n");
    out.push_str("</framework>\n");
    Ok(out)
}

/// Weights for `n` keys, summing to `total`; any remainder goes one unit at
/// a time to the leading keys.
pub fn row_weights(n: usize, total: usize) -> Vec<usize> {
    let base = total / n;
    let extra = total % n;
    (0..n).map(|i| base + usize::from(i < extra)).collect()
}

pub fn layout_grid_xml(layout: &Layout) -> Result<String, EmitError> {
    grid_shape(layout)?;
    let counts = row_key_counts(layout.default_view());
    let total = 100 * counts.iter().copied().max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "<LinearLayout xmlns:android=\"{ANDROID_NS}\"");
    out.push_str("  style=\"@style/Input.Keyboard\">\n");
    for (r, &n) in counts.iter().enumerate() {
        out.push_str("  <LinearLayout style=\"@style/KeyboardRow\">\n");
        for (k, weight) in row_weights(n, total).into_iter().enumerate() {
            let _ = writeln!(out, "    <{SOFT_KEY_VIEW}");
            let _ = writeln!(out, "      android:id=\"@id/{}\"", view_position_id(r, k));
            out.push_str("      style=\"@style/SoftKey.MiddleInset\"\n");
            let _ = writeln!(out, "      android:layout_weight=\"{weight}\"/>");
        }
        out.push_str("  </LinearLayout>\n");
    }
    out.push_str("</LinearLayout>\n");
    Ok(out)
}

pub fn keymapping_xml(layout: &Layout) -> Result<String, EmitError> {
    grid_shape(layout)?;
    let assignment = assign_key_ids(layout)?;
    let mut out = String::new();
    out.push_str("<framework>\n");
    for (state, ids) in [
        (None, &assignment.default_ids),
        (Some("SHIFT"), &assignment.shift_ids),
    ] {
        match state {
            Some(state) => {
                let _ = writeln!(out, "  <key_mapping state=\"{state}\">");
            }
            None => out.push_str("  <key_mapping>\n"),
        }
        for (&(r, k), id) in ids {
            let _ = writeln!(
                out,
                "    <mapping view_id=\"@id/{}\" key_id=\"@id/{id}\"/>",
                view_position_id(r, k)
            );
        }
        out.push_str("  </key_mapping>\n");
    }
    out.push_str("</framework>\n");
    Ok(out)
}

pub fn softkeys_xml(layout: &Layout) -> Result<String, EmitError> {
    grid_shape(layout)?;
    let assignment = assign_key_ids(layout)?;
    let mut out = String::new();
    out.push_str("<framework>\n");
    out.push_str("  <softkeys>\n");
    out.push_str("    <softkey_template id=\"@id/softkey_default\" hint_label=\"\" content_description=\"\"/>\n");
    let _ = writeln!(out, "    <softkey_list splitter=\"{SPLITTER}\">");
    for def in &assignment.softkeys {
        let _ = write!(out, "      <softkey id=\"@id/{}\"", def.id);
        match def.action {
            KeyAction::Press(c) => {
                let _ = write!(out, " press=\"{}\"", escape_attr(&c.to_string()));
            }
            KeyAction::Function(f) => {
                let _ = write!(out, " function=\"{f}\"");
            }
        }
        if !def.long_press.is_empty() {
            let joined: String = def
                .long_press
                .iter()
                .map(char::to_string)
                .collect::<Vec<_>>()
                .join(&SPLITTER.to_string());
            let _ = write!(out, " long_press=\"{}\"", escape_attr(&joined));
        }
        out.push_str("/>\n");
    }
    out.push_str("    </softkey_list>\n");
    out.push_str("  </softkeys>\n");
    out.push_str("</framework>\n");
    Ok(out)
}
