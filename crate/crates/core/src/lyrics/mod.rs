//! Lyric affect on a single positive/negative axis.
//!
//! Two scorers look at the same tagged tokens: a bag-of-words count of
//! positive and negative core tags, and a bigram scorer that assigns values
//! to ordered tag pairs. Their percentages are blended 40/60 into a verdict.

mod lexicon;
mod score;

use std::ops::Range;
use std::path::Path;

use thiserror::Error;

pub use lexicon::{BigramRuleTable, Tag, TagClass, TagLexicon};
pub use score::{
    analyze_lyrics, bigram_score, bow_score, lyrics_timeline, lyrics_verdict, write_timeline_csv, LyricsVerdict,
    Polarity, TimelinePoint, NEGATIVE_BELOW, POSITIVE_ABOVE,
};

#[derive(Debug, Error)]
pub enum LyricsError {
    #[error("no words left after tokenizing")]
    EmptyDocument,
    #[error("document has no timestamps")]
    NoTimestamps,
    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LyricsFormat {
    Plain,
    Lrc,
}

impl LyricsFormat {
    /// `.lrc` files are LRC, anything else is plain text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("lrc") => LyricsFormat::Lrc,
            _ => LyricsFormat::Plain,
        }
    }
}

/// A timed lyric line: its start time and the tokens it contributed.
#[derive(Debug, Clone, PartialEq)]
pub struct LyricLine {
    pub timestamp: f64,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyricsDocument {
    pub tokens: Vec<String>,
    /// Present for LRC input, ordered by timestamp.
    pub lines: Option<Vec<LyricLine>>,
    /// LRC lines that were dropped because they carried no timestamp.
    pub skipped_lines: usize,
}

impl LyricsDocument {
    pub fn line_tokens(&self, line: &LyricLine) -> &[String] {
        &self.tokens[line.span.clone()]
    }
}

/// Lowercases, deletes ASCII punctuation (so "don't" becomes "dont") and
/// splits on whitespace.
pub fn tokenize(text: &str) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .filter(|c| !c.is_ascii_punctuation())
        .flat_map(char::to_lowercase)
        .collect();
    cleaned.split_whitespace().map(str::to_owned).collect()
}

pub fn parse_lyrics(path: impl AsRef<Path>, format: LyricsFormat) -> Result<LyricsDocument, LyricsError> {
    let text = std::fs::read_to_string(path.as_ref())?;
    match format {
        LyricsFormat::Plain => parse_plain(&text),
        LyricsFormat::Lrc => parse_lrc(&text),
    }
}

pub fn parse_plain(text: &str) -> Result<LyricsDocument, LyricsError> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(LyricsError::EmptyDocument);
    }
    Ok(LyricsDocument {
        tokens,
        lines: None,
        skipped_lines: 0,
    })
}

/// Parses `[mm:ss.xx]text` lines. A line may carry several leading
/// timestamps; ID tags such as `[ar:Artist]` are ignored and lines without
/// a timestamp are skipped and counted.
pub fn parse_lrc(text: &str) -> Result<LyricsDocument, LyricsError> {
    let mut timed: Vec<(f64, Vec<String>)> = Vec::new();
    let mut skipped = 0;

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match split_lrc_line(line) {
            LrcLine::Timed(stamps, body) => {
                let words = tokenize(body);
                if words.is_empty() {
                    continue;
                }
                for t in stamps {
                    timed.push((t, words.clone()));
                }
            }
            LrcLine::IdTag => {}
            LrcLine::Malformed => skipped += 1,
        }
    }
    if skipped > 0 {
        log::warn!("skipped {skipped} malformed LRC line(s)");
    }

    timed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut tokens = Vec::new();
    let mut lines = Vec::with_capacity(timed.len());
    for (timestamp, words) in timed {
        let start = tokens.len();
        tokens.extend(words);
        lines.push(LyricLine {
            timestamp,
            span: start..tokens.len(),
        });
    }
    if tokens.is_empty() {
        return Err(LyricsError::EmptyDocument);
    }
    Ok(LyricsDocument {
        tokens,
        lines: Some(lines),
        skipped_lines: skipped,
    })
}

enum LrcLine<'a> {
    Timed(Vec<f64>, &'a str),
    IdTag,
    Malformed,
}

fn split_lrc_line(line: &str) -> LrcLine<'_> {
    let mut rest = line;
    let mut stamps = Vec::new();
    while let Some(inner_start) = rest.strip_prefix('[') {
        let Some(close) = inner_start.find(']') else {
            break;
        };
        let inner = &inner_start[..close];
        match parse_timestamp(inner) {
            Some(t) => stamps.push(t),
            None if stamps.is_empty() && is_id_tag(inner) => return LrcLine::IdTag,
            None => break,
        }
        rest = inner_start[close + 1..].trim_start();
    }
    if stamps.is_empty() {
        LrcLine::Malformed
    } else {
        LrcLine::Timed(stamps, rest)
    }
}

fn is_id_tag(inner: &str) -> bool {
    inner
        .split_once(':')
        .is_some_and(|(key, _)| !key.is_empty() && key.chars().all(|c| c.is_ascii_alphabetic()))
}

/// `mm:ss`, `mm:ss.xx` (any number of fraction digits) or `mm:ss:xx`.
fn parse_timestamp(inner: &str) -> Option<f64> {
    let (minutes, rest) = inner.split_once(':')?;
    let minutes: u32 = digits(minutes)?.parse().ok()?;
    let (secs, frac) = match rest.split_once(['.', ':']) {
        Some((s, f)) => (s, Some(f)),
        None => (rest, None),
    };
    let secs: u32 = digits(secs)?.parse().ok()?;
    if secs >= 60 {
        return None;
    }
    let frac = match frac {
        Some(f) => format!("0.{}", digits(f)?).parse::<f64>().ok()?,
        None => 0.0,
    };
    Some(minutes as f64 * 60.0 + secs as f64 + frac)
}

fn digits(s: &str) -> Option<&str> {
    (!s.is_empty() && s.chars().all(|c| c.is_ascii_digit())).then_some(s)
}
