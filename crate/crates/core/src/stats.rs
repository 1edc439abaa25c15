//! Case-insensitive character frequency tallies, partitioned by Unicode
//! general category and script.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_script::{Script, UnicodeScript};

use crate::corpus::{CorpusDocument, WordFrequencyEntry};

/// The partition a tallied character lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Partition {
    Latin,
    Rejected,
    Punctuation,
    Digit,
    Other,
}

impl Partition {
    pub fn label(self) -> &'static str {
        match self {
            Partition::Latin => "latin",
            Partition::Rejected => "non_latin",
            Partition::Punctuation => "punct",
            Partition::Digit => "digit",
            Partition::Other => "other",
        }
    }
}

/// Which partition `c` belongs to, or `None` for whitespace (never counted).
pub fn classify(c: char) -> Option<Partition> {
    if c.is_whitespace() {
        return None;
    }
    let gc = get_general_category(c);
    let partition = if is_letter(gc) {
        match c.script() {
            Script::Latin => Partition::Latin,
            Script::Common | Script::Inherited | Script::Unknown => Partition::Other,
            _ => Partition::Rejected,
        }
    } else if is_tallied_punctuation(gc) {
        Partition::Punctuation
    } else if gc == GeneralCategory::DecimalNumber {
        Partition::Digit
    } else {
        Partition::Other
    };
    Some(partition)
}

fn is_letter(gc: GeneralCategory) -> bool {
    use GeneralCategory::*;
    matches!(
        gc,
        UppercaseLetter | LowercaseLetter | TitlecaseLetter | ModifierLetter | OtherLetter
    )
}

/// Po, Pi, Pf, Ps, Pe, Pd, Pc.
pub fn is_tallied_punctuation(gc: GeneralCategory) -> bool {
    use GeneralCategory::*;
    matches!(
        gc,
        OtherPunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | DashPunctuation
            | ConnectorPunctuation
    )
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CharacterTally {
    pub letter_counts: BTreeMap<char, u64>,
    pub rejected_letters: BTreeMap<char, u64>,
    pub punct_counts: BTreeMap<char, (u64, GeneralCategory)>,
    pub digit_counts: BTreeMap<char, u64>,
    pub other_counts: BTreeMap<char, u64>,
    pub total_letters: u64,
}

impl CharacterTally {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts every non-whitespace scalar of the lowercased text, each
    /// occurrence contributing `multiplier`.
    pub fn add_text(&mut self, text: &str, multiplier: u64) {
        for c in text.chars().flat_map(char::to_lowercase) {
            self.add_char(c, multiplier);
        }
    }

    pub fn add_char(&mut self, c: char, n: u64) {
        let Some(partition) = classify(c) else {
            return;
        };
        match partition {
            Partition::Latin => {
                *self.letter_counts.entry(c).or_default() += n;
                self.total_letters += n;
            }
            Partition::Rejected => *self.rejected_letters.entry(c).or_default() += n,
            Partition::Punctuation => {
                self.punct_counts
                    .entry(c)
                    .or_insert((0, get_general_category(c)))
                    .0 += n
            }
            Partition::Digit => *self.digit_counts.entry(c).or_default() += n,
            Partition::Other => *self.other_counts.entry(c).or_default() += n,
        }
    }

    /// Per-key sum. Merging is associative and commutative, so partial
    /// tallies from workers can be combined in any order.
    pub fn merge(&mut self, other: &CharacterTally) {
        fn sum(into: &mut BTreeMap<char, u64>, from: &BTreeMap<char, u64>) {
            for (&c, &n) in from {
                *into.entry(c).or_default() += n;
            }
        }
        sum(&mut self.letter_counts, &other.letter_counts);
        sum(&mut self.rejected_letters, &other.rejected_letters);
        sum(&mut self.digit_counts, &other.digit_counts);
        sum(&mut self.other_counts, &other.other_counts);
        for (&c, &(n, gc)) in &other.punct_counts {
            self.punct_counts.entry(c).or_insert((0, gc)).0 += n;
        }
        self.total_letters += other.total_letters;
    }

    /// Count of `c` in whichever partition holds it.
    pub fn count_of(&self, c: char) -> u64 {
        self.letter_counts
            .get(&c)
            .or_else(|| self.rejected_letters.get(&c))
            .or_else(|| self.digit_counts.get(&c))
            .or_else(|| self.other_counts.get(&c))
            .copied()
            .or_else(|| self.punct_counts.get(&c).map(|p| p.0))
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.letter_counts.is_empty()
            && self.rejected_letters.is_empty()
            && self.punct_counts.is_empty()
            && self.digit_counts.is_empty()
            && self.other_counts.is_empty()
    }

    /// Linguist-facing report: `char<TAB>category<TAB>count`, grouped by
    /// partition, each group in descending frequency.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("char\tcategory\tcount\n");
        let mut section = |partition: Partition, rows: Vec<(char, u64)>| {
            for (c, n) in sort_by_frequency(rows) {
                let gc = get_general_category(c).abbreviation();
                let _ = writeln!(
                    out,
                    "{}\t{}/{}\t{}",
                    escape_tsv(c),
                    partition.label(),
                    gc,
                    n
                );
            }
        };
        section(Partition::Latin, flatten(&self.letter_counts));
        section(Partition::Rejected, flatten(&self.rejected_letters));
        section(
            Partition::Punctuation,
            self.punct_counts
                .iter()
                .map(|(&c, &(n, _))| (c, n))
                .collect(),
        );
        section(Partition::Digit, flatten(&self.digit_counts));
        section(Partition::Other, flatten(&self.other_counts));
        out
    }
}

fn flatten(map: &BTreeMap<char, u64>) -> Vec<(char, u64)> {
    map.iter().map(|(&c, &n)| (c, n)).collect()
}

fn escape_tsv(c: char) -> String {
    if c.is_control() || c == '\\' {
        c.escape_default().to_string()
    } else {
        c.to_string()
    }
}

/// Descending count, ascending code point on ties.
pub fn sort_by_frequency(mut rows: Vec<(char, u64)>) -> Vec<(char, u64)> {
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    rows
}

pub fn tally(
    documents: &[CorpusDocument],
    wordlists: &[Vec<WordFrequencyEntry>],
) -> CharacterTally {
    let mut t = CharacterTally::new();
    for doc in documents {
        t.add_text(doc.text(), doc.weight());
    }
    for entry in wordlists.iter().flatten() {
        t.add_text(&entry.word, entry.count);
    }
    t
}

/// Latin letters with `count >= min_count`, most frequent first.
pub fn latin_letters_by_frequency(tally: &CharacterTally, min_count: u64) -> Vec<(char, u64)> {
    sort_by_frequency(
        tally
            .letter_counts
            .iter()
            .filter(|&(_, &n)| n >= min_count)
            .map(|(&c, &n)| (c, n))
            .collect(),
    )
}

pub fn punctuation_by_frequency(tally: &CharacterTally) -> Vec<char> {
    sort_by_frequency(
        tally
            .punct_counts
            .iter()
            .filter(|(_, (_, gc))| is_tallied_punctuation(*gc))
            .map(|(&c, &(n, _))| (c, n))
            .collect(),
    )
    .into_iter()
    .map(|(c, _)| c)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(s: &str) -> CorpusDocument {
        CorpusDocument::from_text("test", s)
    }

    fn counts(pairs: &[(char, u64)]) -> BTreeMap<char, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn hand_counted_example() {
        // Á b a ␠ á b a .  -> á:2 b:2 a:2, '.':1
        let t = tally(&[doc("Ába ába.")], &[]);
        assert_eq!(t.letter_counts, counts(&[('á', 2), ('b', 2), ('a', 2)]));
        assert_eq!(t.punct_counts.len(), 1);
        assert_eq!(t.punct_counts[&'.'].0, 1);
        assert_eq!(t.total_letters, 6);
    }

    #[test]
    fn case_folds() {
        let t = tally(&[doc("Qq")], &[]);
        assert_eq!(t.letter_counts, counts(&[('q', 2)]));
    }

    #[test]
    fn word_list_counts_multiply() {
        let list = vec![WordFrequencyEntry {
            word: "ñu".into(),
            count: 3,
        }];
        let t = tally(&[], &[list]);
        assert_eq!(t.letter_counts, counts(&[('ñ', 3), ('u', 3)]));
    }

    #[test]
    fn document_weight_multiplies() {
        let t = tally(&[doc("ab a").with_weight(5).unwrap()], &[]);
        assert_eq!(t.letter_counts, counts(&[('a', 10), ('b', 5)]));
    }

    #[test]
    fn partitions() {
        let t = tally(&[doc("aд7 ¿?+ʼ")], &[]);
        assert_eq!(t.letter_counts, counts(&[('a', 1)]));
        assert_eq!(t.rejected_letters, counts(&[('д', 1)]));
        assert_eq!(t.digit_counts, counts(&[('7', 1)]));
        assert!(t.punct_counts.contains_key(&'¿'));
        assert!(t.punct_counts.contains_key(&'?'));
        // '+' is a math symbol; U+02BC is a Common-script modifier letter
        assert_eq!(t.other_counts, counts(&[('+', 1), ('ʼ', 1)]));
    }

    #[test]
    fn frequency_order_and_filters() {
        let mut t = CharacterTally::new();
        t.add_char('o', 5);
        t.add_char('ó', 3);
        t.add_char('õ', 2);
        t.add_char('д', 50);
        let order: Vec<char> = latin_letters_by_frequency(&t, 0)
            .into_iter()
            .map(|p| p.0)
            .collect();
        assert_eq!(order, vec!['o', 'ó', 'õ']);
        let order: Vec<char> = latin_letters_by_frequency(&t, 3)
            .into_iter()
            .map(|p| p.0)
            .collect();
        assert_eq!(order, vec!['o', 'ó']);
    }

    #[test]
    fn code_point_tie_break() {
        let mut t = CharacterTally::new();
        t.add_char('y', 1);
        t.add_char('x', 1);
        let order: Vec<char> = latin_letters_by_frequency(&t, 0)
            .into_iter()
            .map(|p| p.0)
            .collect();
        assert_eq!(order, vec!['x', 'y']);
    }

    #[test]
    fn punctuation_order() {
        let t = tally(&[doc("¿qué? ¡sí!")], &[]);
        let p = punctuation_by_frequency(&t);
        for c in ['¿', '?', '¡', '!'] {
            assert!(p.contains(&c), "{c} missing");
        }
        assert!(punctuation_by_frequency(&CharacterTally::new()).is_empty());

        let mut t = CharacterTally::new();
        t.add_char(',', 3);
        t.add_char('.', 10);
        assert_eq!(punctuation_by_frequency(&t), vec!['.', ',']);
    }

    #[test]
    fn tsv_report() {
        let t = tally(&[doc("aab.")], &[]);
        assert_eq!(
            t.to_tsv(),
            "char\tcategory\tcount\na\tlatin/Ll\t2\nb\tlatin/Ll\t1\n.\tpunct/Po\t1\n"
        );
    }

    fn partition_total(t: &CharacterTally) -> u64 {
        t.letter_counts.values().sum::<u64>()
            + t.rejected_letters.values().sum::<u64>()
            + t.punct_counts.values().map(|p| p.0).sum::<u64>()
            + t.digit_counts.values().sum::<u64>()
            + t.other_counts.values().sum::<u64>()
    }

    proptest! {
        #[test]
        fn case_fold_soundness(s in "\\PC{0,40}") {
            // per-scalar mapping; String::to_lowercase applies final-sigma context
            let lower: String = s.chars().flat_map(char::to_lowercase).collect();
            let mut a = CharacterTally::new();
            a.add_text(&s, 1);
            let mut b = CharacterTally::new();
            b.add_text(&lower, 1);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn partition_totality(s in "\\PC{0,40}") {
            let mut t = CharacterTally::new();
            t.add_text(&s, 1);
            let expected = s
                .chars()
                .flat_map(char::to_lowercase)
                .filter(|c| !c.is_whitespace())
                .count() as u64;
            prop_assert_eq!(partition_total(&t), expected);
            prop_assert_eq!(t.total_letters, t.letter_counts.values().sum::<u64>());
            // no key sits in two partitions
            for c in t.letter_counts.keys() {
                prop_assert!(!t.rejected_letters.contains_key(c));
                prop_assert!(!t.other_counts.contains_key(c));
                prop_assert!(!t.digit_counts.contains_key(c));
                prop_assert!(!t.punct_counts.contains_key(c));
            }
        }

        #[test]
        fn concatenation_additivity(a in "\\PC{0,30}", b in "\\PC{0,30}") {
            let mut whole = CharacterTally::new();
            whole.add_text(&format!("{a}{b}"), 1);
            let mut left = CharacterTally::new();
            left.add_text(&a, 1);
            let mut right = CharacterTally::new();
            right.add_text(&b, 1);
            left.merge(&right);
            prop_assert_eq!(whole, left);
        }
    }
}
