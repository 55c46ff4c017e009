use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::{tokenize, LyricsError};

const DEFAULT_LEXICON: &str = include_str!("../../data/lexicon.tsv");
const DEFAULT_BIGRAMS: &str = include_str!("../../data/bigrams.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    // positive core
    Happy,
    Sexual,
    Insightful,
    Achievement,
    // negative core
    Sad,
    Anger,
    Death,
    // contextual
    Social,
    Feel,
    Family,
    Health,
    Affect,
    Friend,
    Body,
    Cause,
    Inclusion,
    Exclusion,
    Negate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagClass {
    PositiveCore,
    NegativeCore,
    Contextual,
    Negate,
}

impl Tag {
    pub const ALL: [Tag; 18] = [
        Tag::Happy,
        Tag::Sexual,
        Tag::Insightful,
        Tag::Achievement,
        Tag::Sad,
        Tag::Anger,
        Tag::Death,
        Tag::Social,
        Tag::Feel,
        Tag::Family,
        Tag::Health,
        Tag::Affect,
        Tag::Friend,
        Tag::Body,
        Tag::Cause,
        Tag::Inclusion,
        Tag::Exclusion,
        Tag::Negate,
    ];

    pub fn class(self) -> TagClass {
        match self {
            Tag::Happy | Tag::Sexual | Tag::Insightful | Tag::Achievement => TagClass::PositiveCore,
            Tag::Sad | Tag::Anger | Tag::Death => TagClass::NegativeCore,
            Tag::Negate => TagClass::Negate,
            _ => TagClass::Contextual,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tag::Happy => "Happy",
            Tag::Sexual => "Sexual",
            Tag::Insightful => "Insightful",
            Tag::Achievement => "Achievement",
            Tag::Sad => "Sad",
            Tag::Anger => "Anger",
            Tag::Death => "Death",
            Tag::Social => "Social",
            Tag::Feel => "Feel",
            Tag::Family => "Family",
            Tag::Health => "Health",
            Tag::Affect => "Affect",
            Tag::Friend => "Friend",
            Tag::Body => "Body",
            Tag::Cause => "Cause",
            Tag::Inclusion => "Inclusion",
            Tag::Exclusion => "Exclusion",
            Tag::Negate => "Negate",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("friendship") {
            return Ok(Tag::Friend);
        }
        Tag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown tag {s:?}"))
    }
}

/// Word to tag-set dictionary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TagLexicon {
    entries: HashMap<String, BTreeSet<Tag>>,
}

static NO_TAGS: BTreeSet<Tag> = BTreeSet::new();

impl TagLexicon {
    /// The bundled starter lexicon.
    pub fn bundled() -> Self {
        Self::parse_tsv(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LyricsError> {
        Self::parse_tsv(&std::fs::read_to_string(path)?)
    }

    /// Parses `word<TAB>Tag1,Tag2` lines. Blank lines and `#` comments are
    /// skipped; repeated words merge their tags.
    pub fn parse_tsv(text: &str) -> Result<Self, LyricsError> {
        let mut lexicon = TagLexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let bad = |msg: String| LyricsError::Table {
                line: i + 1,
                message: msg,
            };
            let (word, tags) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected word<TAB>tags".into()))?;
            let tags = tags
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.parse::<Tag>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(bad)?;
            let mut words = tokenize(word);
            if words.len() != 1 || tags.is_empty() {
                return Err(bad(format!("bad entry {line:?}")));
            }
            lexicon.insert(words.remove(0), tags);
        }
        Ok(lexicon)
    }

    pub fn insert(&mut self, word: impl Into<String>, tags: impl IntoIterator<Item = Tag>) {
        self.entries.entry(word.into()).or_default().extend(tags);
    }

    pub fn tags(&self, word: &str) -> &BTreeSet<Tag> {
        self.entries.get(word).unwrap_or(&NO_TAGS)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of words carrying `tag`.
    pub fn count_tagged(&self, tag: Tag) -> usize {
        self.entries.values().filter(|t| t.contains(&tag)).count()
    }
}

/// Emotional value of ordered tag pairs, each in [-10, 10].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BigramRuleTable {
    rules: HashMap<(Tag, Tag), f64>,
}

impl BigramRuleTable {
    pub fn bundled() -> Self {
        Self::parse_tsv(DEFAULT_BIGRAMS).expect("bundled bigram rules are valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LyricsError> {
        Self::parse_tsv(&std::fs::read_to_string(path)?)
    }

    /// Parses `Tag1<TAB>Tag2<TAB>value` lines.
    pub fn parse_tsv(text: &str) -> Result<Self, LyricsError> {
        let mut table = BigramRuleTable::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let bad = |msg: String| LyricsError::Table {
                line: i + 1,
                message: msg,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [first, second, value] = fields[..] else {
                return Err(bad("expected tag1<TAB>tag2<TAB>value".into()));
            };
            let value: f64 = value.trim().parse().map_err(|_| bad(format!("bad value {value:?}")))?;
            table
                .insert(first.parse().map_err(bad)?, second.parse().map_err(bad)?, value)
                .map_err(bad)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, first: Tag, second: Tag, value: f64) -> Result<(), String> {
        if !(-10.0..=10.0).contains(&value) {
            return Err(format!("value {value} outside [-10, 10]"));
        }
        self.rules.insert((first, second), value);
        Ok(())
    }

    pub fn get(&self, first: Tag, second: Tag) -> Option<f64> {
        self.rules.get(&(first, second)).copied()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}
