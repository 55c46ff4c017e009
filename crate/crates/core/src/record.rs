//! Per-song analysis records stored as XML, one `<song_id>.xml` per song.
//!
//! ```xml
//! <song id="..." schema="1">
//!   <source audio="..." lyrics="..."/>
//!   <features intensity="..." timbre="..." rhythm="..."/>
//!   <mood valence="..." arousal="..." label="Q1" pre_valence="..." audio_label="Q14"/>
//!   <lyrics bow="..." bigram="..." combined="..." polarity="positive"/>
//!   <meta likes="..." dislikes="..." rating="..." likeness="..." genre="..."/>
//! </song>
//! ```
//!
//! `<lyrics>` and `<meta>` are optional, and so is every `<meta>` attribute.
//! Unknown elements are skipped on read; everything that is read is
//! validated and never clamped.

use std::borrow::Cow;
use std::collections::HashMap;
use std::path::{Path, PathBuf};

use quick_xml::events::attributes::Attribute;
use quick_xml::events::{BytesDecl, BytesStart, Event};
use quick_xml::{Reader, Writer, XmlVersion};
use thiserror::Error;

use crate::fusion::{fuse_polarity, FusedResult};
use crate::lyrics::{LyricsVerdict, Polarity};
use crate::mood::{in_scale, map_quadrant, MoodCategory, MoodPoint};
use crate::mood_mapper::SongFeatureSummary;
use crate::playlist::SongMetadata;

pub const SCHEMA_VERSION: u32 = 1;
const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("unsupported schema version {0}")]
    UnsupportedVersion(u32),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn violation(msg: impl Into<String>) -> RecordError {
    RecordError::SchemaViolation(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SongRecord {
    pub song_id: String,
    pub audio_path: String,
    pub lyrics_path: Option<String>,
    pub features: SongFeatureSummary,
    pub mood: FusedResult,
    pub lyrics: Option<LyricsVerdict>,
    pub metadata: Option<SongMetadata>,
    pub likeness: Option<f64>,
    pub genre: Option<String>,
    pub schema_version: u32,
}

impl SongRecord {
    /// Checks every field invariant. Parsing runs this on what it read.
    pub fn validate(&self) -> Result<(), RecordError> {
        if self.schema_version < 1 {
            return Err(violation("schema version must be at least 1"));
        }
        if self.schema_version > SCHEMA_VERSION {
            return Err(RecordError::UnsupportedVersion(self.schema_version));
        }
        if self.song_id.is_empty() {
            return Err(violation("empty song id"));
        }
        for text in [
            Some(&self.song_id),
            Some(&self.audio_path),
            self.lyrics_path.as_ref(),
            self.genre.as_ref(),
        ]
        .into_iter()
        .flatten()
        {
            if text.chars().any(|c| c.is_control() && !matches!(c, '\t' | '\n' | '\r')) {
                return Err(violation("control character in text field"));
            }
        }

        let f = &self.features;
        for (name, v) in [("intensity", f.intensity), ("timbre", f.timbre), ("rhythm", f.rhythm)] {
            if !in_scale(v) {
                return Err(violation(format!("{name} {v} outside [-10, 10]")));
            }
        }

        let m = &self.mood;
        if !m.pre_fusion.is_valid() || !m.post_fusion.is_valid() {
            return Err(violation("mood point outside [-10, 10]"));
        }
        let expected_polarity = self.lyrics.map_or(Polarity::Null, |l| l.polarity);
        if m.lyric_polarity != expected_polarity {
            return Err(violation("mood polarity disagrees with lyrics verdict"));
        }
        let refused = fuse_polarity(m.pre_fusion, m.lyric_polarity);
        if m.post_fusion.arousal != m.pre_fusion.arousal
            || (refused.post_fusion.valence - m.post_fusion.valence).abs() > TOLERANCE
        {
            return Err(violation(
                "post-fusion valence is not the lyric shift of pre-fusion valence",
            ));
        }
        if m.audio_label != map_quadrant(m.pre_fusion) || m.final_label != map_quadrant(m.post_fusion) {
            return Err(violation("mood label does not match its point"));
        }

        if let Some(l) = &self.lyrics {
            for (name, v) in [
                ("bow", l.bow_positive_pct),
                ("bigram", l.bigram_positive_pct),
                ("combined", l.combined_pct),
            ] {
                if !(v.is_finite() && (0.0..=100.0).contains(&v)) {
                    return Err(violation(format!("lyrics {name} {v} outside [0, 100]")));
                }
            }
            if (l.bow_positive_pct * 0.4 + l.bigram_positive_pct * 0.6 - l.combined_pct).abs() > TOLERANCE {
                return Err(violation("combined lyric score is not the 40/60 blend"));
            }
            if Polarity::from_combined(l.combined_pct) != l.polarity {
                return Err(violation("lyric polarity disagrees with combined score"));
            }
        }

        if let Some(meta) = &self.metadata {
            if !meta.is_valid() {
                return Err(violation(format!("rating {} outside [0, 10]", meta.album_rating)));
            }
            if meta.song_id != self.song_id {
                return Err(violation("metadata belongs to another song"));
            }
        }
        match (self.likeness, &self.metadata) {
            (Some(_), None) => return Err(violation("likeness without metadata")),
            (Some(l), Some(meta)) if !(l.is_finite() && (0.0..=meta.album_rating).contains(&l)) => {
                return Err(violation(format!("likeness {l} outside [0, rating]")))
            }
            _ => {}
        }
        Ok(())
    }

    /// File name under which the record is stored.
    pub fn file_name(&self) -> String {
        format!("{}.xml", self.song_id)
    }
}

/// Attribute value escaping that also protects whitespace from attribute
/// value normalization.
fn escape_attr(value: &str) -> String {
    quick_xml::escape::escape(value)
        .replace('\t', "&#9;")
        .replace('\n', "&#10;")
        .replace('\r', "&#13;")
}

fn push(el: &mut BytesStart<'_>, key: &str, value: &str) {
    el.push_attribute(Attribute {
        key: quick_xml::name::QName(key),
        value: Cow::Owned(escape_attr(value)),
    });
}

fn num(v: f64) -> String {
    v.to_string()
}

pub fn serialize(record: &SongRecord) -> String {
    let mut writer = Writer::new_with_indent(Vec::new(), b' ', 2);
    let io = |r: std::io::Result<()>| r.expect("writing to memory");

    io(writer.write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None))));
    let mut root = BytesStart::new("song");
    push(&mut root, "id", &record.song_id);
    push(&mut root, "schema", &record.schema_version.to_string());
    io(writer.write_event(Event::Start(root)));

    let mut source = BytesStart::new("source");
    push(&mut source, "audio", &record.audio_path);
    if let Some(lyrics) = &record.lyrics_path {
        push(&mut source, "lyrics", lyrics);
    }
    io(writer.write_event(Event::Empty(source)));

    let mut features = BytesStart::new("features");
    push(&mut features, "intensity", &num(record.features.intensity));
    push(&mut features, "timbre", &num(record.features.timbre));
    push(&mut features, "rhythm", &num(record.features.rhythm));
    io(writer.write_event(Event::Empty(features)));

    let m = &record.mood;
    let mut mood = BytesStart::new("mood");
    push(&mut mood, "valence", &num(m.post_fusion.valence));
    push(&mut mood, "arousal", &num(m.post_fusion.arousal));
    push(&mut mood, "label", m.final_label.category.as_str());
    push(&mut mood, "pre_valence", &num(m.pre_fusion.valence));
    push(&mut mood, "audio_label", m.audio_label.category.as_str());
    io(writer.write_event(Event::Empty(mood)));

    if let Some(l) = &record.lyrics {
        let mut lyrics = BytesStart::new("lyrics");
        push(&mut lyrics, "bow", &num(l.bow_positive_pct));
        push(&mut lyrics, "bigram", &num(l.bigram_positive_pct));
        push(&mut lyrics, "combined", &num(l.combined_pct));
        push(&mut lyrics, "polarity", l.polarity.as_str());
        io(writer.write_event(Event::Empty(lyrics)));
    }

    if record.metadata.is_some() || record.genre.is_some() {
        let mut meta = BytesStart::new("meta");
        if let Some(md) = &record.metadata {
            push(&mut meta, "likes", &md.likes.to_string());
            push(&mut meta, "dislikes", &md.dislikes.to_string());
            push(&mut meta, "rating", &num(md.album_rating));
        }
        if let Some(l) = record.likeness {
            push(&mut meta, "likeness", &num(l));
        }
        if let Some(g) = &record.genre {
            push(&mut meta, "genre", g);
        }
        io(writer.write_event(Event::Empty(meta)));
    }

    io(writer.write_event(Event::End(quick_xml::events::BytesEnd::new("song"))));
    let mut text = String::from_utf8(writer.into_inner()).expect("UTF-8 output");
    text.push('\n');
    text
}

type Attrs = HashMap<String, String>;

fn attributes(el: &BytesStart<'_>) -> Result<Attrs, RecordError> {
    let mut map = HashMap::new();
    for attr in el.attributes() {
        let attr = attr.map_err(|e| RecordError::Xml(e.to_string()))?;
        let key = attr.key.as_ref().to_string();
        let value = attr
            .normalized_value(XmlVersion::Implicit1_0)
            .map_err(|e| RecordError::Xml(e.to_string()))?
            .into_owned();
        map.insert(key, value);
    }
    Ok(map)
}

fn required<'a>(attrs: &'a Attrs, element: &str, key: &str) -> Result<&'a str, RecordError> {
    attrs
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| violation(format!("<{element}> lacks {key}")))
}

fn parse_f64(element: &str, key: &str, raw: &str) -> Result<f64, RecordError> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| violation(format!("<{element} {key}> is not a number: {raw:?}")))
}

fn number(attrs: &Attrs, element: &str, key: &str) -> Result<f64, RecordError> {
    parse_f64(element, key, required(attrs, element, key)?)
}

fn scaled(attrs: &Attrs, element: &str, key: &str) -> Result<f64, RecordError> {
    let v = number(attrs, element, key)?;
    if !in_scale(v) {
        return Err(violation(format!("<{element} {key}> {v} outside [-10, 10]")));
    }
    Ok(v)
}

fn category(attrs: &Attrs, element: &str, key: &str) -> Result<MoodCategory, RecordError> {
    required(attrs, element, key)?
        .parse()
        .map_err(|e: crate::mood::UnknownCategory| violation(e.to_string()))
}

pub fn parse(xml: &str) -> Result<SongRecord, RecordError> {
    let mut reader = Reader::from_str(xml);
    reader.config_mut().trim_text(true);

    let mut root: Option<Attrs> = None;
    let mut children: HashMap<String, Attrs> = HashMap::new();
    let mut depth = 0usize;
    loop {
        let event = reader.read_event().map_err(|e| RecordError::Xml(e.to_string()))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                let name = e.name().as_ref().to_string();
                match depth {
                    0 => {
                        if name != "song" {
                            return Err(violation(format!("root element is <{name}>, expected <song>")));
                        }
                        if root.is_some() {
                            return Err(RecordError::Xml("multiple root elements".into()));
                        }
                        root = Some(attributes(e)?);
                    }
                    1 => {
                        if children.contains_key(&name) {
                            return Err(violation(format!("duplicate <{name}>")));
                        }
                        children.insert(name, attributes(e)?);
                    }
                    _ => {}
                }
                if !is_empty {
                    depth += 1;
                }
            }
            Event::End(_) => depth = depth.saturating_sub(1),
            Event::Eof => break,
            _ => {}
        }
    }

    let root = root.ok_or_else(|| violation("missing <song> root"))?;
    let version_raw = required(&root, "song", "schema")?;
    let schema_version: u32 = version_raw
        .trim()
        .parse()
        .map_err(|_| violation(format!("bad schema version {version_raw:?}")))?;
    if schema_version > SCHEMA_VERSION {
        return Err(RecordError::UnsupportedVersion(schema_version));
    }
    let song_id = required(&root, "song", "id")?.to_string();

    let element = |name: &str| children.get(name).ok_or_else(|| violation(format!("missing <{name}>")));

    let source = element("source")?;
    let audio_path = required(source, "source", "audio")?.to_string();
    let lyrics_path = source.get("lyrics").cloned();

    let f = element("features")?;
    let features = SongFeatureSummary {
        intensity: scaled(f, "features", "intensity")?,
        timbre: scaled(f, "features", "timbre")?,
        rhythm: scaled(f, "features", "rhythm")?,
    };

    let lyrics = children
        .get("lyrics")
        .map(|l| -> Result<LyricsVerdict, RecordError> {
            let raw = required(l, "lyrics", "polarity")?;
            Ok(LyricsVerdict {
                bow_positive_pct: number(l, "lyrics", "bow")?,
                bigram_positive_pct: number(l, "lyrics", "bigram")?,
                combined_pct: number(l, "lyrics", "combined")?,
                polarity: Polarity::parse(raw).ok_or_else(|| violation(format!("bad polarity {raw:?}")))?,
            })
        })
        .transpose()?;

    let m = element("mood")?;
    let arousal = scaled(m, "mood", "arousal")?;
    let pre = MoodPoint::new(scaled(m, "mood", "pre_valence")?, arousal);
    let post = MoodPoint::new(scaled(m, "mood", "valence")?, arousal);
    let mood = FusedResult {
        pre_fusion: pre,
        post_fusion: post,
        audio_label: category(m, "mood", "audio_label")?.into(),
        final_label: category(m, "mood", "label")?.into(),
        lyric_polarity: lyrics.map_or(Polarity::Null, |l| l.polarity),
    };

    let (metadata, likeness, genre) = match children.get("meta") {
        None => (None, None, None),
        Some(meta) => {
            let counts = ["likes", "dislikes", "rating"].map(|k| meta.get(k));
            let metadata = match counts {
                [Some(likes), Some(dislikes), Some(rating)] => {
                    let count = |key: &str, raw: &str| -> Result<u64, RecordError> {
                        raw.trim()
                            .parse()
                            .map_err(|_| violation(format!("<meta {key}> is not a count: {raw:?}")))
                    };
                    Some(SongMetadata {
                        song_id: song_id.clone(),
                        likes: count("likes", likes)?,
                        dislikes: count("dislikes", dislikes)?,
                        album_rating: parse_f64("meta", "rating", rating)?,
                    })
                }
                [None, None, None] => None,
                _ => return Err(violation("<meta> needs likes, dislikes and rating together")),
            };
            let likeness = meta
                .get("likeness")
                .map(|raw| parse_f64("meta", "likeness", raw))
                .transpose()?;
            (metadata, likeness, meta.get("genre").cloned())
        }
    };

    let record = SongRecord {
        song_id,
        audio_path,
        lyrics_path,
        features,
        mood,
        lyrics,
        metadata,
        likeness,
        genre,
        schema_version,
    };
    record.validate()?;
    Ok(record)
}

/// Writes `<dir>/<song_id>.xml` and returns its path.
pub fn write_record(dir: impl AsRef<Path>, record: &SongRecord) -> Result<PathBuf, RecordError> {
    let path = dir.as_ref().join(record.file_name());
    std::fs::write(&path, serialize(record))?;
    Ok(path)
}

pub fn read_record(path: impl AsRef<Path>) -> Result<SongRecord, RecordError> {
    parse(&std::fs::read_to_string(path)?)
}

/// A record file and the outcome of reading it.
pub type DirEntryRecord = (PathBuf, Result<SongRecord, RecordError>);

/// Reads every `*.xml` file of a directory, ordered by file name. Files
/// that fail to parse are returned as errors alongside their path.
pub fn read_record_dir(dir: impl AsRef<Path>) -> Result<Vec<DirEntryRecord>, std::io::Error> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "xml"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let r = read_record(&p);
            (p, r)
        })
        .collect())
}
