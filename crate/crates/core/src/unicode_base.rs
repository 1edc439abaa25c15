//! Base-key attribution for extended Latin letters.
//!
//! A long-press character is hosted on the key of its base letter. The base
//! is found by full canonical decomposition when the leading scalar lands in
//! `a-z` (`ó` -> `o` + U+0301); letters without such a decomposition (`æ`,
//! `ß`, `ŋ`, ...) go through a data table. Letters like `ǣ` need both: they
//! decompose to `æ` + macron and the table maps `æ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::char::decompose_canonical;

pub const LATIN_1_SUPPLEMENT: RangeInclusive<char> = '\u{0080}'..='\u{00FF}';
pub const LATIN_EXTENDED_A: RangeInclusive<char> = '\u{0100}'..='\u{017F}';
pub const LATIN_EXTENDED_B: RangeInclusive<char> = '\u{0180}'..='\u{024F}';

/// The three blocks the shipped fallback table is required to cover.
pub fn covered_blocks() -> [RangeInclusive<char>; 3] {
    [LATIN_1_SUPPLEMENT, LATIN_EXTENDED_A, LATIN_EXTENDED_B]
}

const BUILTIN_TABLE: &str = include_str!("../data/fallback_base.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    CanonicalDecomposition,
    FallbackTable,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::CanonicalDecomposition => "canonical-decomposition",
            Provenance::FallbackTable => "fallback-table",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseKeyAttribution {
    pub character: char,
    /// Always in `a-z`.
    pub base: char,
    pub provenance: Provenance,
    /// Combining marks left after removing the leading scalar.
    pub marks: Vec<char>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no base key known for {character:?} (U+{:04X})", *character as u32)]
pub struct UnattributableCharacter {
    pub character: char,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: expected `char<TAB>base`")]
    Syntax { line: usize },
    #[error("line {line}: key must be a single character")]
    BadKey { line: usize },
    #[error("line {line}: base must be one letter a-z")]
    BadBase { line: usize },
}

fn full_decomposition(c: char) -> Vec<char> {
    let mut out = Vec::with_capacity(4);
    decompose_canonical(c, |d| out.push(d));
    out
}

fn simple_lowercase(c: char) -> char {
    let mut it = c.to_lowercase();
    match (it.next(), it.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Resolves `c` through canonical decomposition alone.
pub fn canonical_base(c: char) -> Option<BaseKeyAttribution> {
    let decomposed = full_decomposition(c);
    let (&lead, marks) = decomposed.split_first()?;
    let base = simple_lowercase(lead);
    base.is_ascii_lowercase().then(|| BaseKeyAttribution {
        character: c,
        base,
        provenance: Provenance::CanonicalDecomposition,
        marks: marks.to_vec(),
    })
}

/// Editable `char -> base letter` table for letters that do not decompose
/// onto `a-z`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FallbackTable {
    entries: BTreeMap<char, char>,
}

impl FallbackTable {
    /// The table compiled into the binary.
    pub fn builtin() -> &'static FallbackTable {
        static TABLE: OnceLock<FallbackTable> = OnceLock::new();
        TABLE.get_or_init(|| FallbackTable::parse(BUILTIN_TABLE).expect("shipped table parses"))
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim_end();
            // a lone '#' key would be eaten above; it is not a letter anyway
            if content.trim().is_empty() {
                continue;
            }
            let (key, base) = content
                .split_once('\t')
                .ok_or(TableError::Syntax { line: line_no })?;
            let key = single_char(key.trim()).ok_or(TableError::BadKey { line: line_no })?;
            let base = single_char(base.trim())
                .filter(char::is_ascii_lowercase)
                .ok_or(TableError::BadBase { line: line_no })?;
            entries.insert(key, base);
        }
        Ok(FallbackTable { entries })
    }

    /// Entries from `overrides` replace or extend this table's.
    pub fn with_overrides(&self, overrides: &FallbackTable) -> FallbackTable {
        let mut entries = self.entries.clone();
        entries.extend(overrides.entries.iter().map(|(&k, &v)| (k, v)));
        FallbackTable { entries }
    }

    /// Exact match first, then the simple lowercase.
    pub fn lookup(&self, c: char) -> Option<char> {
        self.entries
            .get(&c)
            .or_else(|| self.entries.get(&simple_lowercase(c)))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Base-key resolver: canonical decomposition backed by a fallback table.
#[derive(Debug, Clone)]
pub struct BaseResolver {
    table: FallbackTable,
}

impl Default for BaseResolver {
    fn default() -> Self {
        BaseResolver {
            table: FallbackTable::builtin().clone(),
        }
    }
}

impl BaseResolver {
    pub fn new(table: FallbackTable) -> Self {
        BaseResolver { table }
    }

    pub fn table(&self) -> &FallbackTable {
        &self.table
    }

    pub fn fallback_base(&self, c: char) -> Option<char> {
        self.table.lookup(c)
    }

    pub fn base_key_for(&self, c: char) -> Result<BaseKeyAttribution, UnattributableCharacter> {
        if let Some(attr) = canonical_base(c) {
            return Ok(attr);
        }
        let decomposed = full_decomposition(c);
        let (&lead, marks) = decomposed
            .split_first()
            .ok_or(UnattributableCharacter { character: c })?;
        let base = self
            .fallback_base(lead)
            .ok_or(UnattributableCharacter { character: c })?;
        Ok(BaseKeyAttribution {
            character: c,
            base,
            provenance: Provenance::FallbackTable,
            marks: marks.to_vec(),
        })
    }

    /// Classifies every letter (general category L*) in `blocks` by the path
    /// that resolves it.
    pub fn decomposition_census(&self, blocks: &[RangeInclusive<char>]) -> Census {
        let mut census = Census::default();
        for c in blocks.iter().flat_map(|r| r.clone()) {
            if !is_letter(c) {
                continue;
            }
            match self.base_key_for(c) {
                Ok(a) if a.provenance == Provenance::CanonicalDecomposition => {
                    census.decomposable += 1
                }
                Ok(_) => census.fallback += 1,
                Err(_) => census.uncovered.push(c),
            }
        }
        census
    }
}

fn is_letter(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        UppercaseLetter | LowercaseLetter | TitlecaseLetter | ModifierLetter | OtherLetter
    )
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census {
    pub decomposable: usize,
    pub fallback: usize,
    pub uncovered: Vec<char>,
}

impl Census {
    pub fn total(&self) -> usize {
        self.decomposable + self.fallback + self.uncovered.len()
    }
}

/// `base_key_for` with the shipped table.
pub fn base_key_for(c: char) -> Result<BaseKeyAttribution, UnattributableCharacter> {
    thread_local! {
        static RESOLVER: BaseResolver = BaseResolver::default();
    }
    RESOLVER.with(|r| r.base_key_for(c))
}

pub fn fallback_base(c: char) -> Option<char> {
    FallbackTable::builtin().lookup(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use unicode_normalization::UnicodeNormalization;

    #[test]
    fn acute_o_decomposes() {
        let a = canonical_base('ó').unwrap();
        assert_eq!(a.base, 'o');
        assert_eq!(a.marks, vec!['\u{301}']);
        assert_eq!(a.provenance, Provenance::CanonicalDecomposition);
    }

    #[test]
    fn basic_latin_is_identity() {
        let a = canonical_base('q').unwrap();
        assert_eq!(a.base, 'q');
        assert!(a.marks.is_empty());
    }

    #[test]
    fn ae_has_no_canonical_base() {
        assert_eq!(canonical_base('æ'), None);
    }

    #[test]
    fn fallback_entries() {
        assert_eq!(fallback_base('æ'), Some('a'));
        assert_eq!(fallback_base('ß'), Some('s'));
        assert_eq!(fallback_base('ŋ'), Some('n'));
        assert_eq!(fallback_base('Ŋ'), Some('n'));
        assert_eq!(fallback_base('ǣ'), None);
        assert_eq!(fallback_base('q'), None);
    }

    #[test]
    fn recursive_decomposition_then_table() {
        let a = base_key_for('ǣ').unwrap();
        assert_eq!(a.base, 'a');
        assert_eq!(a.provenance, Provenance::FallbackTable);
        assert_eq!(a.marks, vec!['\u{304}']);
    }

    #[test]
    fn base_key_examples() {
        let n = base_key_for('ñ').unwrap();
        assert_eq!(
            (n.base, n.provenance),
            ('n', Provenance::CanonicalDecomposition)
        );
        let o = base_key_for('ø').unwrap();
        assert_eq!((o.base, o.provenance), ('o', Provenance::FallbackTable));
        assert_eq!(
            base_key_for('ʘ'),
            Err(UnattributableCharacter { character: 'ʘ' })
        );
    }

    #[test]
    fn census_trivial_inputs() {
        let r = BaseResolver::default();
        assert_eq!(r.decomposition_census(&[]), Census::default());
        let az = r.decomposition_census(&['a'..='z']);
        assert_eq!((az.decomposable, az.fallback), (26, 0));
        assert!(az.uncovered.is_empty());
    }

    #[test]
    fn shipped_table_covers_blocks() {
        let census = BaseResolver::default().decomposition_census(&covered_blocks());
        assert!(census.uncovered.is_empty(), "{:?}", census.uncovered);
    }

    #[test]
    fn table_parse_errors() {
        assert_eq!(
            FallbackTable::parse("æ a"),
            Err(TableError::Syntax { line: 1 })
        );
        assert_eq!(
            FallbackTable::parse("# c\nab\ta"),
            Err(TableError::BadKey { line: 2 })
        );
        assert_eq!(
            FallbackTable::parse("æ\tA"),
            Err(TableError::BadBase { line: 1 })
        );
        assert!(FallbackTable::parse("").unwrap().is_empty());
    }

    #[test]
    fn overrides_replace_defaults() {
        let custom = FallbackTable::parse("ø\te\nʘ\tp\n").unwrap();
        let r = BaseResolver::new(FallbackTable::builtin().with_overrides(&custom));
        assert_eq!(r.base_key_for('ø').unwrap().base, 'e');
        assert_eq!(r.base_key_for('ʘ').unwrap().base, 'p');
        assert_eq!(r.base_key_for('æ').unwrap().base, 'a');
    }

    fn block_letters() -> Vec<char> {
        covered_blocks()
            .into_iter()
            .flatten()
            .filter(|&c| is_letter(c))
            .collect()
    }

    #[test]
    fn case_coherence_over_blocks() {
        for c in block_letters() {
            let mut up = c.to_uppercase();
            let (Some(u), None) = (up.next(), up.next()) else {
                continue;
            };
            if !is_letter(u) {
                continue;
            }
            let (Ok(lower), Ok(upper)) = (base_key_for(c), base_key_for(u)) else {
                // µ uppercases to Greek capital mu, which is outside scope
                continue;
            };
            assert_eq!(lower.base, upper.base, "{c} vs {u}");
        }
    }

    #[test]
    fn canonical_agreement_over_blocks() {
        for c in block_letters() {
            let Some(a) = canonical_base(c) else { continue };
            let lead = full_decomposition(c)[0];
            assert_eq!(simple_lowercase(lead), a.base);
            let recomposed: String = std::iter::once(lead)
                .chain(a.marks.iter().copied())
                .nfc()
                .collect();
            assert_eq!(recomposed, c.to_string(), "U+{:04X}", c as u32);
        }
    }

    proptest! {
        #[test]
        fn attribution_base_is_ascii_lowercase(c in any::<char>()) {
            if let Ok(a) = base_key_for(c) {
                prop_assert!(a.base.is_ascii_lowercase());
                if a.provenance == Provenance::CanonicalDecomposition {
                    prop_assert_eq!(
                        simple_lowercase(full_decomposition(c)[0]),
                        a.base
                    );
                }
            }
        }
    }
}
