#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use proptest::prelude::*;

use kbsynth::emit::{grid_shape, resource_suffix, EmitManifest, FileRole};
use kbsynth::layout::{builtin_base_layout, KeyContent, Layout, BUILTIN_LAYOUT_NAMES};

/// `press`, `function` and `long_press` attributes.
type SoftkeyAttrs = (Option<String>, Option<String>, Option<String>);

const ANDROID: &str = "http://schemas.android.com/apk/res/android";

/// Test alphabet: basic Latin, 31 accented or fallback letters, and three
/// letters with no base key.
pub const ALPHABET_60: &str = "abcdefghijklmnopqrstuvwxyzñáéíóúàèìòùâêîôûãõçëïüÿøæßðþŋłđɤʞʔ";

pub const UNRESOLVABLE: [char; 3] = ['ɤ', 'ʞ', 'ʔ'];

/// Long-press candidates for random layouts (no `,`).
const EXTRA: &str = "áéíóúàèìòùâêîôûãõçëïüÿøæßðþŋłđǝɛɔƙƴ!?;:'\"-()&<>€$";

/// Checks that the five emitted files reference each other consistently
/// and describe `layout`. Returns a description of the first problem.
pub fn check_closure(
    layout: &Layout,
    manifest: &EmitManifest,
    outdir: &Path,
) -> Result<(), String> {
    let read = |role: FileRole| -> Result<String, String> {
        let f = manifest
            .file(role)
            .ok_or(format!("no {} file", role.label()))?;
        fs::read_to_string(outdir.join(&f.path)).map_err(|e| format!("{}: {e}", f.path))
    };
    let res = resource_suffix(&layout.language_tag);
    let shape = grid_shape(layout).map_err(|e| e.to_string())?;

    let ime_text = read(FileRole::Ime)?;
    let ime = roxmltree::Document::parse(&ime_text).map_err(|e| format!("ime: {e}"))?;
    let fragment = format!("@xml/keyboard_fragment_{res}");
    let defs: Vec<_> = ime
        .descendants()
        .filter(|n| n.has_tag_name("keyboard"))
        .filter_map(|n| n.attribute("def"))
        .collect();
    if defs.is_empty() || defs.iter().any(|d| *d != fragment) {
        return Err(format!(
            "ime keyboards {defs:?} do not all reference {fragment}"
        ));
    }

    let kb_text = read(FileRole::Keyboard)?;
    let kb = roxmltree::Document::parse(&kb_text).map_err(|e| format!("keyboard: {e}"))?;
    let view = kb
        .descendants()
        .find(|n| n.has_tag_name("view"))
        .ok_or("keyboard has no view")?;
    if view.attribute("layout") != Some(format!("@layout/grid_{shape}").as_str()) {
        return Err(format!(
            "keyboard view layout {:?}",
            view.attribute("layout")
        ));
    }
    let hrefs: BTreeSet<_> = view
        .descendants()
        .filter_map(|n| n.attribute("href"))
        .collect();
    for want in [
        format!("@xml/keymapping_{res}"),
        format!("@xml/softkeys_{res}"),
    ] {
        if !hrefs.contains(want.as_str()) {
            return Err(format!("keyboard does not reference {want}"));
        }
    }

    let grid_text = read(FileRole::LayoutGrid)?;
    let grid = roxmltree::Document::parse(&grid_text).map_err(|e| format!("grid: {e}"))?;
    let positions: BTreeSet<String> = grid
        .descendants()
        .filter_map(|n| n.attribute((ANDROID, "id")))
        .map(|id| id.trim_start_matches("@id/").to_owned())
        .collect();

    let sk_text = read(FileRole::Softkeys)?;
    let sk = roxmltree::Document::parse(&sk_text).map_err(|e| format!("softkeys: {e}"))?;
    let splitter = sk
        .descendants()
        .find(|n| n.has_tag_name("softkey_list"))
        .and_then(|n| n.attribute("splitter"))
        .ok_or("softkey_list has no splitter")?
        .to_owned();
    let mut softkeys: BTreeMap<String, SoftkeyAttrs> = BTreeMap::new();
    for n in sk.descendants().filter(|n| n.has_tag_name("softkey")) {
        let id = n.attribute("id").ok_or("softkey without id")?;
        let entry = (
            n.attribute("press").map(str::to_owned),
            n.attribute("function").map(str::to_owned),
            n.attribute("long_press").map(str::to_owned),
        );
        if softkeys
            .insert(id.trim_start_matches("@id/").to_owned(), entry)
            .is_some()
        {
            return Err(format!("softkey {id} defined twice"));
        }
    }

    let km_text = read(FileRole::Keymapping)?;
    let km = roxmltree::Document::parse(&km_text).map_err(|e| format!("keymapping: {e}"))?;
    let mut blocks: BTreeMap<&str, BTreeMap<String, String>> = BTreeMap::new();
    for block in km.descendants().filter(|n| n.has_tag_name("key_mapping")) {
        let state = block.attribute("state").unwrap_or("DEFAULT");
        let map = blocks.entry(state).or_default();
        for m in block.children().filter(|n| n.has_tag_name("mapping")) {
            let view_id = m.attribute("view_id").ok_or("mapping without view_id")?;
            let key_id = m.attribute("key_id").ok_or("mapping without key_id")?;
            map.insert(
                view_id.trim_start_matches("@id/").to_owned(),
                key_id.trim_start_matches("@id/").to_owned(),
            );
        }
    }
    let (Some(default_map), Some(shift_map)) = (blocks.get("DEFAULT"), blocks.get("SHIFT")) else {
        return Err(format!(
            "keymapping blocks {:?}",
            blocks.keys().collect::<Vec<_>>()
        ));
    };
    for (state, map) in [("default", default_map), ("SHIFT", shift_map)] {
        let keys: BTreeSet<String> = map.keys().cloned().collect();
        if keys != positions {
            return Err(format!("{state} block positions differ from the grid"));
        }
        for key_id in map.values() {
            if !softkeys.contains_key(key_id) {
                return Err(format!("{state} block key {key_id} has no softkey"));
            }
        }
    }

    for (view, map) in [
        (layout.default_view(), default_map),
        (layout.shift_view(), shift_map),
    ] {
        for (r, row) in view.rows().iter().enumerate() {
            for (k, slot) in row.iter().filter(|s| !s.is_empty()).enumerate() {
                let pos = format!("key_pos_{r}_{k}");
                let key_id = &map[&pos];
                let (press, function, long_press) = &softkeys[key_id];
                match slot.content {
                    KeyContent::Char(c) => {
                        if press.as_deref() != Some(c.to_string().as_str()) {
                            return Err(format!("{pos}: press {press:?}, expected {c:?}"));
                        }
                    }
                    KeyContent::Special(_) => {
                        if function.is_none() {
                            return Err(format!("{pos}: special key without function"));
                        }
                    }
                    KeyContent::Empty => unreachable!(),
                }
                let expected: Option<String> = (!slot.long_press.is_empty()).then(|| {
                    slot.long_press
                        .iter()
                        .map(char::to_string)
                        .collect::<Vec<_>>()
                        .join(&splitter)
                });
                if *long_press != expected {
                    return Err(format!(
                        "{pos}: long_press {long_press:?}, expected {expected:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every tallied letter at or above `min_count` is a visible key, a
/// long-press, or reported unplaceable, and only one of those.
pub fn check_coverage(
    layout: &Layout,
    report: &kbsynth::synthesis::SynthesisReport,
    letters: &BTreeMap<char, u64>,
    min_count: u64,
) -> Result<(), String> {
    let visible: BTreeSet<char> = layout
        .default_view()
        .slots()
        .filter_map(|(_, _, s)| s.character())
        .collect();
    let mut long_press_hits: BTreeMap<char, usize> = BTreeMap::new();
    for (_, _, s) in layout.default_view().slots() {
        for &c in &s.long_press {
            *long_press_hits.entry(c).or_default() += 1;
        }
    }
    let unplaceable: BTreeSet<char> = report.unplaceable.iter().map(|u| u.character).collect();
    for (&c, &n) in letters {
        if n < min_count {
            continue;
        }
        let lp = long_press_hits.get(&c).copied().unwrap_or(0);
        let hits = usize::from(visible.contains(&c)) + lp + usize::from(unplaceable.contains(&c));
        if hits != 1 {
            return Err(format!(
                "{c:?} (count {n}): visible={} long_press={lp} unplaceable={}",
                visible.contains(&c),
                unplaceable.contains(&c)
            ));
        }
    }
    Ok(())
}

/// Built-in layouts with random letter swaps and random long-press lists.
pub fn arb_layout() -> impl Strategy<Value = Layout> {
    let extra: Vec<char> = EXTRA.chars().collect();
    (
        0..BUILTIN_LAYOUT_NAMES.len(),
        proptest::collection::vec(proptest::sample::subsequence(extra.clone(), 0..6), 40),
        proptest::collection::vec((0usize..40, proptest::sample::select(extra)), 0..4),
        proptest::sample::select(vec!["kl", "pt", "vi", "haw", "sr-Latn", "es"]),
    )
        .prop_map(|(base, lists, swaps, tag)| {
            let mut layout = builtin_base_layout(BUILTIN_LAYOUT_NAMES[base]).unwrap();
            let positions: Vec<(usize, usize)> = layout
                .default_view()
                .slots()
                .filter(|(_, _, s)| s.character().is_some())
                .map(|(r, c, _)| (r, c))
                .collect();
            for (i, &(r, c)) in positions.iter().enumerate() {
                let slot = layout.default_view_mut().slot_mut(r, c).unwrap();
                if let Some(list) = lists.get(i) {
                    for &ch in list {
                        slot.push_long_press(ch);
                    }
                }
            }
            for (i, ch) in swaps {
                let (r, c) = positions[i % positions.len()];
                let slot = layout.default_view_mut().slot_mut(r, c).unwrap();
                slot.long_press.retain(|&x| x != ch);
                slot.content = KeyContent::Char(ch);
            }
            layout.rederive_shift();
            layout.language_tag = tag.to_owned();
            layout
        })
}
