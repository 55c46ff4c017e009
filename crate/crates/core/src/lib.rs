//! Mood tagging for song files.
//!
//! The pipeline reads a WAV file, brings it to 16 kHz mono, extracts eleven
//! sub-features for every ten-second window, folds them into intensity,
//! timbre and rhythm scores on a (-10, 10) scale, and places the song on the
//! valence-arousal plane. Lyrics, when available, nudge the valence by one
//! unit in either direction. Songs are then grouped into four mood
//! quadrants and ordered by a likeness factor built from listener votes and
//! album rating.
//!
//! ```text
//! wav -> audio_io -> features -> mood_mapper --+
//!                                              +-> fusion -> playlist / record
//! lrc -> lyrics -------------------------------+
//! ```

pub mod audio_io;
pub mod evaluation;
pub mod features;
pub mod fusion;
pub mod lyrics;
pub mod mood;
pub mod mood_mapper;
pub mod pipeline;
pub mod playlist;
pub mod record;

pub use audio_io::{canonicalize, decode_wav, AudioClip, AudioError, CANONICAL_RATE};
pub use features::{extract_features, FeatureMatrix, WindowFeatureRow};
pub use fusion::{cluster, fuse, Clusters, FusedResult};
pub use lyrics::{LyricsDocument, LyricsVerdict, Polarity};
pub use mood::{MoodCategory, MoodLabel, MoodPoint};
pub use mood_mapper::{analyze_audio, AudioMood, SongFeatureSummary};
pub use playlist::{likeness, rank, Playlist, SongMetadata};
pub use record::SongRecord;
