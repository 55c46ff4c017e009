//! Likeness factor from listener votes and album rating, and ordering of
//! mood clusters into playlists.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("metadata row {row}: {message}")]
    Invalid { row: usize, message: String },
    #[error("metadata csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SongMetadata {
    pub song_id: String,
    pub likes: u64,
    pub dislikes: u64,
    /// Album rating out of 10.
    pub album_rating: f64,
}

impl SongMetadata {
    pub fn is_valid(&self) -> bool {
        self.album_rating.is_finite() && (0.0..=10.0).contains(&self.album_rating)
    }
}

/// Like ratio times album rating; absent when nobody voted.
pub fn likeness(meta: &SongMetadata) -> Option<f64> {
    let votes = meta.likes + meta.dislikes;
    if votes == 0 {
        return None;
    }
    Some(meta.likes as f64 / votes as f64 * meta.album_rating)
}

/// Where ranking looks up per-song metadata. The CSV loader fills a map;
/// a live web client could implement this as well.
pub trait MetadataSource {
    fn metadata(&self, song_id: &str) -> Option<&SongMetadata>;
}

impl MetadataSource for HashMap<String, SongMetadata> {
    fn metadata(&self, song_id: &str) -> Option<&SongMetadata> {
        self.get(song_id)
    }
}

/// Reads `song_id,likes,dislikes,album_rating` rows (with header).
pub fn read_metadata_csv<R: Read>(input: R) -> Result<HashMap<String, SongMetadata>, MetadataError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let expected = ["song_id", "likes", "dislikes", "album_rating"];
    if headers.iter().ne(expected) {
        return Err(MetadataError::Invalid {
            row: 1,
            message: format!("header must be {}", expected.join(",")),
        });
    }

    let mut map = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2;
        let bad = |message: String| MetadataError::Invalid { row, message };
        let field = |k: usize| record.get(k).ok_or_else(|| bad(format!("missing {}", expected[k])));
        let count = |k: usize| -> Result<u64, MetadataError> {
            let raw = field(k)?;
            raw.parse()
                .map_err(|_| bad(format!("{} {raw:?} is not a count", expected[k])))
        };
        let meta = SongMetadata {
            song_id: field(0)?.to_string(),
            likes: count(1)?,
            dislikes: count(2)?,
            album_rating: field(3)?
                .parse()
                .map_err(|_| bad("album_rating is not a number".into()))?,
        };
        if !meta.is_valid() {
            return Err(bad(format!("album_rating {} outside [0, 10]", meta.album_rating)));
        }
        map.insert(meta.song_id.clone(), meta);
    }
    Ok(map)
}

pub fn load_metadata(path: impl AsRef<Path>) -> Result<HashMap<String, SongMetadata>, MetadataError> {
    read_metadata_csv(std::fs::File::open(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaylistKind {
    Quadrant(u8),
    Boundary,
}

impl PlaylistKind {
    pub fn file_name(self) -> String {
        match self {
            PlaylistKind::Quadrant(q) => format!("quadrant{q}.m3u"),
            PlaylistKind::Boundary => "boundary.m3u".to_string(),
        }
    }
}

impl fmt::Display for PlaylistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaylistKind::Quadrant(q) => write!(f, "quadrant {q}"),
            PlaylistKind::Boundary => f.write_str("boundary"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaylistEntry {
    pub song_id: String,
    pub likeness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Playlist {
    pub kind: PlaylistKind,
    pub entries: Vec<PlaylistEntry>,
}

/// Orders a cluster by likeness, highest first. Songs without a likeness
/// (no metadata, or no votes) go last; ties keep their input order.
pub fn rank<S: AsRef<str>>(kind: PlaylistKind, cluster: &[S], metadata: &impl MetadataSource) -> Playlist {
    let mut entries: Vec<PlaylistEntry> = cluster
        .iter()
        .map(|id| PlaylistEntry {
            song_id: id.as_ref().to_string(),
            likeness: metadata.metadata(id.as_ref()).and_then(likeness),
        })
        .collect();
    entries.sort_by(|a, b| match (a.likeness, b.likeness) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Playlist { kind, entries }
}

/// Writes an extended M3U playlist: a comment with the likeness above each
/// path. `location` maps a song id to the path written for it.
pub fn write_m3u<W: Write>(playlist: &Playlist, location: impl Fn(&str) -> String, mut out: W) -> std::io::Result<()> {
    writeln!(out, "#EXTM3U")?;
    for entry in &playlist.entries {
        match entry.likeness {
            Some(l) => writeln!(out, "# likeness: {l}")?,
            None => writeln!(out, "# likeness: n/a")?,
        }
        writeln!(out, "{}", location(&entry.song_id))?;
    }
    Ok(())
}
