use std::io::Write;

use super::{BigramRuleTable, LyricsDocument, LyricsError, TagClass, TagLexicon};

/// Combined percentages strictly above this are lyrically positive.
pub const POSITIVE_ABOVE: f64 = 60.0;
/// Combined percentages strictly below this are lyrically negative.
pub const NEGATIVE_BELOW: f64 = 40.0;
/// Either side must exceed the other by this factor before contextual tags
/// are credited to it.
const DOMINANCE: f64 = 1.5;
const NO_EVIDENCE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Null,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Null => "null",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Some(Polarity::Positive),
            "negative" => Some(Polarity::Negative),
            "null" => Some(Polarity::Null),
            _ => None,
        }
    }

    pub fn from_combined(pct: f64) -> Self {
        if pct > POSITIVE_ABOVE {
            Polarity::Positive
        } else if pct < NEGATIVE_BELOW {
            Polarity::Negative
        } else {
            Polarity::Null
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyricsVerdict {
    pub bow_positive_pct: f64,
    pub bigram_positive_pct: f64,
    pub combined_pct: f64,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimelinePoint {
    pub timestamp: f64,
    pub combined_pct: f64,
}

fn percentage(positive: f64, negative: f64) -> f64 {
    if positive + negative > 0.0 {
        positive / (positive + negative) * 100.0
    } else {
        NO_EVIDENCE
    }
}

/// Bag-of-words positive percentage of a token run.
///
/// Each token occurrence counts once toward positive if it carries any
/// positive core tag, once toward negative for any negative core tag, and
/// once toward the contextual pool for any contextual tag. The contextual
/// pool is credited to whichever side outnumbers the other by more than
/// 1.5x.
pub fn bow_score(tokens: &[String], lex: &TagLexicon) -> f64 {
    let (mut positive, mut negative, mut contextual) = (0u64, 0u64, 0u64);
    for token in tokens {
        let tags = lex.tags(token);
        let has = |class| tags.iter().any(|t| t.class() == class);
        positive += has(TagClass::PositiveCore) as u64;
        negative += has(TagClass::NegativeCore) as u64;
        contextual += has(TagClass::Contextual) as u64;
    }
    let (mut positive, mut negative) = (positive as f64, negative as f64);
    if positive > DOMINANCE * negative {
        positive += contextual as f64;
    } else if negative > DOMINANCE * positive {
        negative += contextual as f64;
    }
    percentage(positive, negative)
}

/// Bigram positive percentage: every rule matching a tag of one token and
/// a tag of the next adds its value to the positive or negative sum.
pub fn bigram_score(tokens: &[String], lex: &TagLexicon, rules: &BigramRuleTable) -> f64 {
    let (mut positive, mut negative) = (0.0, 0.0);
    for pair in tokens.windows(2) {
        for &first in lex.tags(&pair[0]) {
            for &second in lex.tags(&pair[1]) {
                match rules.get(first, second) {
                    Some(v) if v > 0.0 => positive += v,
                    Some(v) if v < 0.0 => negative += -v,
                    _ => {}
                }
            }
        }
    }
    percentage(positive, negative)
}

/// Blends the two percentages 40/60 and applies the 60/40 polarity bands.
pub fn lyrics_verdict(bow: f64, bigram: f64) -> LyricsVerdict {
    let combined = bow * 0.4 + bigram * 0.6;
    LyricsVerdict {
        bow_positive_pct: bow,
        bigram_positive_pct: bigram,
        combined_pct: combined,
        polarity: Polarity::from_combined(combined),
    }
}

pub fn analyze_lyrics(doc: &LyricsDocument, lex: &TagLexicon, rules: &BigramRuleTable) -> LyricsVerdict {
    lyrics_verdict(bow_score(&doc.tokens, lex), bigram_score(&doc.tokens, lex, rules))
}

/// Combined score of each timed line, in timestamp order.
pub fn lyrics_timeline(
    doc: &LyricsDocument,
    lex: &TagLexicon,
    rules: &BigramRuleTable,
) -> Result<Vec<TimelinePoint>, LyricsError> {
    let lines = doc.lines.as_ref().ok_or(LyricsError::NoTimestamps)?;
    Ok(lines
        .iter()
        .map(|line| {
            let tokens = doc.line_tokens(line);
            TimelinePoint {
                timestamp: line.timestamp,
                combined_pct: lyrics_verdict(bow_score(tokens, lex), bigram_score(tokens, lex, rules)).combined_pct,
            }
        })
        .collect())
}

/// Writes `timestamp_s,combined_pct` rows.
pub fn write_timeline_csv<W: Write>(points: &[TimelinePoint], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["timestamp_s", "combined_pct"])?;
    for p in points {
        writer.write_record([p.timestamp.to_string(), p.combined_pct.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}
