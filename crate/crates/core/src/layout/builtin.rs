use super::{parse_csv, KeyContent, Layout};

pub const BUILTIN_LAYOUT_NAMES: [&str; 6] = [
    "qwerty",
    "qwerty_n_tilde",
    "azerty",
    "qwertz",
    "dvorak",
    "colemak",
];

const SOURCES: [(&str, &str); 6] = [
    ("qwerty", include_str!("../../data/layouts/qwerty.csv")),
    (
        "qwerty_n_tilde",
        include_str!("../../data/layouts/qwerty_n_tilde.csv"),
    ),
    ("azerty", include_str!("../../data/layouts/azerty.csv")),
    ("qwertz", include_str!("../../data/layouts/qwertz.csv")),
    ("dvorak", include_str!("../../data/layouts/dvorak.csv")),
    ("colemak", include_str!("../../data/layouts/colemak.csv")),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown base layout `{name}` (expected one of: {})", BUILTIN_LAYOUT_NAMES.join(", "))]
pub struct UnknownLayout {
    pub name: String,
}

pub fn builtin_base_layout(name: &str) -> Result<Layout, UnknownLayout> {
    let (_, source) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| UnknownLayout {
            name: name.to_owned(),
        })?;
    let mut layout = parse_csv(source).expect("built-in layouts parse");
    layout.name = name.to_owned();
    layout.base_layout_name = name.to_owned();
    Ok(layout)
}

/// The built-in layout whose visible keys match `layout`'s default view,
/// ignoring long-presses.
pub fn identify_base_layout(layout: &Layout) -> Option<&'static str> {
    let contents = |l: &Layout| -> Vec<Vec<KeyContent>> {
        l.default_view()
            .rows()
            .iter()
            .map(|row| row.iter().map(|s| s.content).collect())
            .collect()
    };
    let wanted = contents(layout);
    BUILTIN_LAYOUT_NAMES
        .into_iter()
        .find(|name| builtin_base_layout(name).is_ok_and(|b| contents(&b) == wanted))
}
