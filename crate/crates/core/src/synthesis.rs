//! Layout synthesis: from a character tally to a finished layout.
//!
//! The pipeline picks a base layout, gathers the Latin letters that the base
//! does not show, hangs each one as a long-press on the key of its base
//! letter (most frequent first), and hangs corpus punctuation on the period
//! key. Everything that could not be placed goes into the report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::layout::{builtin_base_layout, visible_characters, KeySlot, Layout, UnknownLayout};
use crate::stats::{
    latin_letters_by_frequency, punctuation_by_frequency, sort_by_frequency, CharacterTally,
};
use crate::unicode_base::{BaseResolver, Provenance};

pub const DEFAULT_BASE_LAYOUT: &str = "qwerty";
pub const N_TILDE_LAYOUT: &str = "qwerty_n_tilde";

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisConfig {
    pub language_tag: String,
    /// Explicit base layout; overrides the heuristic.
    pub base_layout: Option<String>,
    pub min_count: u64,
    /// Share of all Latin letters `ñ` must reach to select `qwerty_n_tilde`.
    pub special_letter_threshold: f64,
    pub currency_symbol: Option<char>,
    pub punctuation_limit: usize,
    pub long_press_warn: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            language_tag: "und".to_owned(),
            base_layout: None,
            min_count: 1,
            special_letter_threshold: 0.005,
            currency_symbol: None,
            punctuation_limit: 8,
            long_press_warn: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub character: char,
    pub base: char,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unplaceable {
    pub character: char,
    pub count: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynthesisReport {
    pub base_layout_chosen: String,
    pub placements: Vec<Placement>,
    pub unplaceable: Vec<Unplaceable>,
    pub discarded_non_latin: Vec<(char, u64)>,
    /// Latin letters left out because their count is under `min_count`.
    pub below_min_count: Vec<(char, u64)>,
    pub warnings: Vec<String>,
}

impl SynthesisReport {
    /// One record per line: `kind<TAB>fields...`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "base_layout\t{}", self.base_layout_chosen);
        for p in &self.placements {
            let _ = writeln!(out, "placed\t{}\t{}\t{}", p.character, p.base, p.provenance);
        }
        for u in &self.unplaceable {
            let _ = writeln!(
                out,
                "unplaceable\t{}\t{}\t{}",
                u.character, u.count, u.reason
            );
        }
        for (c, n) in &self.discarded_non_latin {
            let _ = writeln!(out, "discarded_non_latin\t{c}\t{n}");
        }
        for (c, n) in &self.below_min_count {
            let _ = writeln!(out, "below_min_count\t{c}\t{n}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning\t{w}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthesisError {
    #[error("no Latin letters in the input; nothing to design from")]
    EmptyTally,
    #[error(transparent)]
    UnknownLayout(#[from] UnknownLayout),
    #[error("layout has no `[punc]` period key")]
    NoPeriodKey,
    #[error("layout has {0} `[punc]` keys; expected exactly one")]
    MultiplePeriodKeys(usize),
}

/// Explicit config wins; otherwise `qwerty_n_tilde` when `ñ` is frequent
/// enough, else `qwerty`.
pub fn choose_base_layout(tally: &CharacterTally, config: &SynthesisConfig) -> String {
    if let Some(name) = &config.base_layout {
        return name.clone();
    }
    let n_tilde = tally.letter_counts.get(&'ñ').copied().unwrap_or(0);
    if tally.total_letters > 0
        && n_tilde as f64 / tally.total_letters as f64 >= config.special_letter_threshold
    {
        N_TILDE_LAYOUT.to_owned()
    } else {
        DEFAULT_BASE_LAYOUT.to_owned()
    }
}

/// Tallied Latin letters (count >= `min_count`) not visible on `base`,
/// most frequent first.
pub fn missing_characters(
    tally: &CharacterTally,
    base: &Layout,
    config: &SynthesisConfig,
) -> Vec<(char, u64)> {
    let visible = visible_characters(base);
    latin_letters_by_frequency(tally, config.min_count)
        .into_iter()
        .filter(|(c, _)| !visible.contains(c))
        .collect()
}

/// What [`assign_long_presses`] adds to the report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssignmentOutcome {
    pub placements: Vec<Placement>,
    pub unplaceable: Vec<Unplaceable>,
    pub warnings: Vec<String>,
}

/// Hangs each missing letter on its base key. `missing` must already be in
/// frequency order; that order is kept within every key.
pub fn assign_long_presses(
    base: &Layout,
    missing: &[(char, u64)],
    config: &SynthesisConfig,
    resolver: &BaseResolver,
) -> (Layout, AssignmentOutcome) {
    let mut layout = base.clone();
    let mut outcome = AssignmentOutcome::default();
    // letters inserted so far per key; they go ahead of pre-existing entries
    let mut inserted: BTreeMap<(usize, usize), usize> = BTreeMap::new();

    for &(c, count) in missing {
        let attribution = match resolver.base_key_for(c) {
            Ok(a) => a,
            Err(e) => {
                outcome.unplaceable.push(Unplaceable {
                    character: c,
                    count,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let Some(pos) = layout.default_view().find_char(attribution.base) else {
            outcome.unplaceable.push(Unplaceable {
                character: c,
                count,
                reason: format!("base key `{}` is not on the layout", attribution.base),
            });
            continue;
        };
        let slot = layout
            .default_view_mut()
            .slot_mut(pos.0, pos.1)
            .expect("position came from find_char");
        if !slot.long_press.contains(&c) {
            let at = inserted.entry(pos).or_default();
            slot.long_press.insert(*at, c);
            *at += 1;
        }
        outcome.placements.push(Placement {
            character: c,
            base: attribution.base,
            provenance: attribution.provenance,
        });
    }

    let view = layout.default_view();
    for (&(row, col), &n) in &inserted {
        let slot = view.slot(row, col).expect("recorded position");
        let key = slot.character().unwrap_or(' ');
        if slot.long_press.len() > n {
            let existing: String = slot.long_press[n..].iter().collect();
            outcome.warnings.push(format!(
                "key `{key}`: letter long-presses placed ahead of existing `{existing}`"
            ));
        }
    }
    for (_, _, slot) in view.slots() {
        if slot.long_press.len() > config.long_press_warn {
            outcome.warnings.push(format!(
                "key `{}` has {} long-presses (warning threshold {})",
                slot.character().unwrap_or(' '),
                slot.long_press.len(),
                config.long_press_warn
            ));
        }
    }
    layout.rederive_shift();
    (layout, outcome)
}

/// Expands the `[punc]` period key with up to `punctuation_limit` corpus
/// punctuation characters not already on the layout, then the currency
/// symbol. Returns the layout and any warnings.
pub fn attach_punctuation(
    layout: &Layout,
    punct: &[char],
    config: &SynthesisConfig,
) -> Result<(Layout, Vec<String>), SynthesisError> {
    let targets: Vec<(usize, usize)> = layout
        .default_view()
        .slots()
        .filter(|(_, _, s)| s.punc_placeholder)
        .map(|(r, c, _)| (r, c))
        .collect();
    let (row, col) = match targets.as_slice() {
        [] => return Err(SynthesisError::NoPeriodKey),
        [one] => *one,
        many => return Err(SynthesisError::MultiplePeriodKeys(many.len())),
    };

    let on_layout: BTreeSet<char> = layout
        .default_view()
        .slots()
        .flat_map(|(_, _, s)| {
            s.character()
                .into_iter()
                .chain(s.long_press.iter().copied())
        })
        .collect();
    let fresh: Vec<char> = punct
        .iter()
        .copied()
        .filter(|c| !on_layout.contains(c))
        .collect();

    let mut warnings = Vec::new();
    if fresh.len() > config.punctuation_limit {
        let dropped: String = fresh[config.punctuation_limit..].iter().collect();
        warnings.push(format!(
            "punctuation limit {} reached; not placed: `{dropped}`",
            config.punctuation_limit
        ));
    }

    let mut out = layout.clone();
    let slot: &mut KeySlot = out
        .default_view_mut()
        .slot_mut(row, col)
        .expect("target came from slots()");
    for &c in fresh.iter().take(config.punctuation_limit) {
        slot.push_long_press(c);
    }
    if let Some(symbol) = config.currency_symbol {
        if !on_layout.contains(&symbol) {
            slot.push_long_press(symbol);
        }
    }
    slot.punc_placeholder = false;
    out.currency_symbol = config.currency_symbol;
    out.rederive_shift();
    Ok((out, warnings))
}

/// Runs the whole design with the shipped fallback table.
pub fn synthesize(
    tally: &CharacterTally,
    config: &SynthesisConfig,
) -> Result<(Layout, SynthesisReport), SynthesisError> {
    synthesize_with(tally, config, &BaseResolver::default())
}

pub fn synthesize_with(
    tally: &CharacterTally,
    config: &SynthesisConfig,
    resolver: &BaseResolver,
) -> Result<(Layout, SynthesisReport), SynthesisError> {
    if tally.letter_counts.is_empty() {
        return Err(SynthesisError::EmptyTally);
    }
    let base_name = choose_base_layout(tally, config);
    let base = builtin_base_layout(&base_name)?;
    let missing = missing_characters(tally, &base, config);
    let (with_letters, outcome) = assign_long_presses(&base, &missing, config, resolver);
    let punct = punctuation_by_frequency(tally);
    let (mut layout, punct_warnings) = attach_punctuation(&with_letters, &punct, config)?;

    layout.name = config.language_tag.clone();
    layout.language_tag = config.language_tag.clone();
    layout.base_layout_name = base_name.clone();

    let below_min_count = sort_by_frequency(
        tally
            .letter_counts
            .iter()
            .filter(|&(_, &n)| n < config.min_count)
            .map(|(&c, &n)| (c, n))
            .collect(),
    );
    let discarded_non_latin = sort_by_frequency(
        tally
            .rejected_letters
            .iter()
            .map(|(&c, &n)| (c, n))
            .collect(),
    );
    let mut warnings = outcome.warnings;
    warnings.extend(punct_warnings);

    let report = SynthesisReport {
        base_layout_chosen: base_name,
        placements: outcome.placements,
        unplaceable: outcome.unplaceable,
        discarded_non_latin,
        below_min_count,
        warnings,
    };
    Ok((layout, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::CorpusDocument;
    use crate::layout::{parse_csv, serialize_csv, KeyContent};
    use crate::stats::tally;

    fn tally_of(pairs: &[(char, u64)]) -> CharacterTally {
        let mut t = CharacterTally::new();
        for &(c, n) in pairs {
            t.add_char(c, n);
        }
        t
    }

    fn long_press_of(layout: &Layout, key: char) -> Vec<char> {
        let (r, c) = layout.default_view().find_char(key).unwrap();
        layout.default_view().slot(r, c).unwrap().long_press.clone()
    }

    fn period_long_press(layout: &Layout) -> Vec<char> {
        long_press_of(layout, '.')
    }

    #[test]
    fn n_tilde_heuristic() {
        let mut t = tally_of(&[('n', 100), ('ñ', 10)]);
        t.add_char('e', 890);
        assert_eq!(t.total_letters, 1000);
        assert_eq!(
            choose_base_layout(&t, &SynthesisConfig::default()),
            "qwerty_n_tilde"
        );

        let t = tally_of(&[('n', 100), ('ñ', 4), ('e', 896)]);
        assert_eq!(
            choose_base_layout(&t, &SynthesisConfig::default()),
            "qwerty"
        );

        let t = tally_of(&[('a', 5), ('b', 3)]);
        assert_eq!(
            choose_base_layout(&t, &SynthesisConfig::default()),
            "qwerty"
        );
        assert_eq!(
            choose_base_layout(&CharacterTally::new(), &SynthesisConfig::default()),
            "qwerty"
        );
    }

    #[test]
    fn explicit_base_layout_wins() {
        let t = tally_of(&[('ñ', 500), ('a', 500)]);
        let config = SynthesisConfig {
            base_layout: Some("azerty".into()),
            ..Default::default()
        };
        assert_eq!(choose_base_layout(&t, &config), "azerty");
    }

    #[test]
    fn missing_in_frequency_order() {
        let t = tally_of(&[('o', 50), ('ó', 30), ('õ', 20), ('á', 10), ('a', 40)]);
        let base = builtin_base_layout("qwerty").unwrap();
        let missing = missing_characters(&t, &base, &SynthesisConfig::default());
        assert_eq!(missing, vec![('ó', 30), ('õ', 20), ('á', 10)]);

        let ascii = tally_of(&[('a', 3), ('z', 1)]);
        assert!(missing_characters(&ascii, &base, &SynthesisConfig::default()).is_empty());

        let ene = tally_of(&[('ñ', 3)]);
        let base_n = builtin_base_layout("qwerty_n_tilde").unwrap();
        assert!(missing_characters(&ene, &base_n, &SynthesisConfig::default()).is_empty());
    }

    #[test]
    fn portuguese_example() {
        let base = builtin_base_layout("qwerty").unwrap();
        let missing = [('ó', 30), ('õ', 20), ('á', 10)];
        let (l, outcome) = assign_long_presses(
            &base,
            &missing,
            &SynthesisConfig::default(),
            &BaseResolver::default(),
        );
        assert_eq!(long_press_of(&l, 'o'), vec!['ó', 'õ']);
        assert_eq!(long_press_of(&l, 'a'), vec!['á']);
        assert_eq!(outcome.placements.len(), 3);
        assert!(outcome.unplaceable.is_empty());
        // shift view follows
        let (r, c) = l.default_view().find_char('o').unwrap();
        assert_eq!(
            l.shift_view().slot(r, c).unwrap().long_press,
            vec!['Ó', 'Õ']
        );
    }

    #[test]
    fn sicilian_grave_first() {
        let t = tally_of(&[('e', 300), ('è', 40), ('é', 5), ('ê', 2)]);
        let (l, _) = synthesize(&t, &SynthesisConfig::default()).unwrap();
        assert_eq!(long_press_of(&l, 'e')[0], 'è');
    }

    #[test]
    fn sharp_s_on_s_key() {
        let base = builtin_base_layout("qwerty").unwrap();
        let (l, outcome) = assign_long_presses(
            &base,
            &[('ß', 4)],
            &SynthesisConfig::default(),
            &BaseResolver::default(),
        );
        assert_eq!(long_press_of(&l, 's'), vec!['ß']);
        assert_eq!(outcome.placements[0].provenance, Provenance::FallbackTable);
    }

    #[test]
    fn unplaceable_is_reported() {
        let base = builtin_base_layout("qwerty").unwrap();
        let (l, outcome) = assign_long_presses(
            &base,
            &[('ʘ', 2)],
            &SynthesisConfig::default(),
            &BaseResolver::default(),
        );
        assert_eq!(l, base);
        assert_eq!(outcome.unplaceable.len(), 1);
        assert_eq!(outcome.unplaceable[0].character, 'ʘ');
    }

    #[test]
    fn base_key_missing_from_layout() {
        let base = parse_csv("Visible layout,,\npress1,,\"[punc]\"\nrow1,a,.\n").unwrap();
        let (_, outcome) = assign_long_presses(
            &base,
            &[('é', 2)],
            &SynthesisConfig::default(),
            &BaseResolver::default(),
        );
        assert!(outcome.unplaceable[0].reason.contains("`e`"));
    }

    #[test]
    fn letters_go_ahead_of_digits_with_warning() {
        let base = parse_csv("Visible layout,\npress1,3\nrow1,e\n").unwrap();
        let (l, outcome) = assign_long_presses(
            &base,
            &[('é', 5), ('è', 2)],
            &SynthesisConfig::default(),
            &BaseResolver::default(),
        );
        assert_eq!(long_press_of(&l, 'e'), vec!['é', 'è', '3']);
        assert_eq!(outcome.warnings.len(), 1);
    }

    #[test]
    fn crowded_key_warns() {
        let base = builtin_base_layout("qwerty").unwrap();
        let missing: Vec<(char, u64)> = "àáâãäåāăą"
            .chars()
            .chain(['ǎ'])
            .enumerate()
            .map(|(i, c)| (c, 100 - i as u64))
            .collect();
        let (_, outcome) = assign_long_presses(
            &base,
            &missing,
            &SynthesisConfig::default(),
            &BaseResolver::default(),
        );
        assert_eq!(outcome.warnings.len(), 1);
        assert!(outcome.warnings[0].contains("10 long-presses"));
    }

    #[test]
    fn punctuation_on_period_key() {
        let base = builtin_base_layout("qwerty").unwrap();
        let config = SynthesisConfig::default();
        let (l, _) = attach_punctuation(&base, &['¿', '¡'], &config).unwrap();
        assert_eq!(period_long_press(&l), vec!['¿', '¡']);
        assert!(l
            .default_view()
            .slots()
            .all(|(_, _, s)| !s.punc_placeholder));

        let (l, _) = attach_punctuation(&base, &[',', '!'], &config).unwrap();
        assert_eq!(period_long_press(&l), vec!['!']);

        let config = SynthesisConfig {
            currency_symbol: Some('₹'),
            ..Default::default()
        };
        let (l, _) = attach_punctuation(&base, &[], &config).unwrap();
        assert_eq!(period_long_press(&l), vec!['₹']);
        assert_eq!(l.currency_symbol, Some('₹'));
    }

    #[test]
    fn punctuation_limit() {
        let base = builtin_base_layout("qwerty").unwrap();
        let config = SynthesisConfig {
            punctuation_limit: 2,
            currency_symbol: Some('€'),
            ..Default::default()
        };
        let (l, warnings) = attach_punctuation(&base, &['!', '?', ';'], &config).unwrap();
        assert_eq!(period_long_press(&l), vec!['!', '?', '€']);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn punctuation_needs_one_period_key() {
        let none = parse_csv("Visible layout,\npress1,\nrow1,.\n").unwrap();
        assert_eq!(
            attach_punctuation(&none, &['!'], &SynthesisConfig::default()).unwrap_err(),
            SynthesisError::NoPeriodKey
        );
        let two = parse_csv("Visible layout,,\npress1,[punc],[punc]\nrow1,.,;\n").unwrap();
        assert_eq!(
            attach_punctuation(&two, &['!'], &SynthesisConfig::default()).unwrap_err(),
            SynthesisError::MultiplePeriodKeys(2)
        );
    }

    #[test]
    fn ascii_only_gets_punctuation_only() {
        let t = tally(
            &[CorpusDocument::from_text("t", "hello world! how are you?")],
            &[],
        );
        let (l, report) = synthesize(&t, &SynthesisConfig::default()).unwrap();
        assert_eq!(report.base_layout_chosen, "qwerty");
        for (_, _, slot) in l.default_view().slots() {
            if slot.character() != Some('.') {
                assert!(slot.long_press.is_empty());
            }
        }
        assert_eq!(period_long_press(&l), vec!['!', '?']);
    }

    #[test]
    fn empty_tally_is_an_error() {
        assert_eq!(
            synthesize(&CharacterTally::new(), &SynthesisConfig::default()).unwrap_err(),
            SynthesisError::EmptyTally
        );
        let digits_only = tally_of(&[('7', 3), ('!', 1)]);
        assert_eq!(
            synthesize(&digits_only, &SynthesisConfig::default()).unwrap_err(),
            SynthesisError::EmptyTally
        );
    }

    #[test]
    fn deterministic() {
        let t = tally(
            &[CorpusDocument::from_text("t", "Ðá þú ŋ é è ê ë. ¿ñ? ǃxóõ")],
            &[],
        );
        let config = SynthesisConfig::default();
        let (a, ra) = synthesize(&t, &config).unwrap();
        let (b, rb) = synthesize(&t, &config).unwrap();
        assert_eq!(serialize_csv(&a), serialize_csv(&b));
        assert_eq!(ra.to_tsv(), rb.to_tsv());
    }

    #[test]
    fn report_lists_discards() {
        let t = tally(&[CorpusDocument::from_text("t", "abc дд ж é")], &[]);
        let config = SynthesisConfig {
            min_count: 2,
            ..Default::default()
        };
        let (_, report) = synthesize(&t, &config).unwrap();
        assert_eq!(report.discarded_non_latin, vec![('д', 2), ('ж', 1)]);
        assert!(report.below_min_count.contains(&('é', 1)));
        assert!(report.to_tsv().starts_with("base_layout\tqwerty\n"));
    }

    #[test]
    fn metadata_is_set() {
        let t = tally_of(&[('a', 1)]);
        let config = SynthesisConfig {
            language_tag: "kl".into(),
            ..Default::default()
        };
        let (l, _) = synthesize(&t, &config).unwrap();
        assert_eq!(l.language_tag, "kl");
        assert_eq!(l.base_layout_name, "qwerty");
        assert!(matches!(
            l.default_view().slot(0, 0).unwrap().content,
            KeyContent::Char('q')
        ));
    }
}
