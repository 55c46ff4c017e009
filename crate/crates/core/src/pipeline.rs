//! End-to-end analysis of one song: audio, optional lyrics, fusion and the
//! resulting record.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::audio_io::{canonicalize, decode_wav, AudioClip, AudioError};
use crate::features::{extract_features, FeatureMatrix};
use crate::fusion::{fuse, FusedResult};
use crate::lyrics::{
    analyze_lyrics, lyrics_timeline, parse_lyrics, BigramRuleTable, LyricsDocument, LyricsFormat, TagLexicon,
    TimelinePoint,
};
use crate::mood_mapper::analyze_audio;
use crate::playlist::{likeness, MetadataSource};
use crate::record::{SongRecord, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Audio {
        path: PathBuf,
        #[source]
        source: AudioError,
    },
}

/// Lexicon and bigram rules shared by every song of a run.
#[derive(Debug, Clone)]
pub struct LyricModel {
    pub lexicon: TagLexicon,
    pub rules: BigramRuleTable,
}

impl Default for LyricModel {
    fn default() -> Self {
        LyricModel {
            lexicon: TagLexicon::bundled(),
            rules: BigramRuleTable::bundled(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SongAnalysis {
    pub record: SongRecord,
    pub features: FeatureMatrix,
    /// Per-line lyric scores when the lyrics were timed.
    pub timeline: Option<Vec<TimelinePoint>>,
    /// Non-fatal problems, such as unreadable lyrics.
    pub warnings: Vec<String>,
}

/// Song id derived from the audio file name.
pub fn song_id_for(audio_path: &Path) -> String {
    audio_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| audio_path.to_string_lossy().into_owned())
}

/// Looks for `<stem>.lrc`, then `<stem>.txt`, in `dir` or else next to the
/// audio file.
pub fn find_lyrics(audio_path: &Path, dir: Option<&Path>) -> Option<PathBuf> {
    let stem = audio_path.file_stem()?;
    let dir = dir
        .map(Path::to_path_buf)
        .or_else(|| audio_path.parent().map(Path::to_path_buf))?;
    ["lrc", "txt"]
        .iter()
        .map(|ext| dir.join(stem).with_extension(ext))
        .find(|p| p.is_file())
}

/// Analyzes an already canonical clip.
pub fn analyze_clip(
    clip: &AudioClip,
    song_id: &str,
    lyrics: Option<(&LyricsDocument, Option<String>)>,
    model: &LyricModel,
    metadata: Option<&dyn MetadataSource>,
) -> SongAnalysis {
    let features = extract_features(clip, song_id);
    let audio = analyze_audio(&features);

    let (mood, verdict, timeline, lyrics_path) = match lyrics {
        Some((doc, path)) => {
            let verdict = analyze_lyrics(doc, &model.lexicon, &model.rules);
            let timeline = lyrics_timeline(doc, &model.lexicon, &model.rules).ok();
            (fuse(audio.point, &verdict), Some(verdict), timeline, path)
        }
        None => (FusedResult::audio_only(audio.point), None, None, None),
    };

    let meta = metadata.and_then(|m| m.metadata(song_id)).cloned();
    let record = SongRecord {
        song_id: song_id.to_string(),
        audio_path: clip.source_path.to_string_lossy().into_owned(),
        lyrics_path,
        features: audio.summary,
        mood,
        lyrics: verdict,
        likeness: meta.as_ref().and_then(likeness),
        metadata: meta,
        genre: None,
        schema_version: SCHEMA_VERSION,
    };
    SongAnalysis {
        record,
        features,
        timeline,
        warnings: Vec::new(),
    }
}

/// Decodes, canonicalizes and analyzes one WAV file. Lyrics problems are
/// reported as warnings and the song falls back to audio only.
pub fn analyze_file(
    audio_path: &Path,
    lyrics_path: Option<&Path>,
    model: &LyricModel,
    metadata: Option<&dyn MetadataSource>,
) -> Result<SongAnalysis, PipelineError> {
    let wrap = |source| PipelineError::Audio {
        path: audio_path.to_path_buf(),
        source,
    };
    let clip = canonicalize(&decode_wav(audio_path).map_err(wrap)?).map_err(wrap)?;
    let song_id = song_id_for(audio_path);

    let mut warnings = Vec::new();
    let doc = lyrics_path.and_then(|p| match parse_lyrics(p, LyricsFormat::from_path(p)) {
        Ok(doc) => {
            if doc.skipped_lines > 0 {
                warnings.push(format!(
                    "{}: skipped {} malformed line(s)",
                    p.display(),
                    doc.skipped_lines
                ));
            }
            Some((doc, p.to_string_lossy().into_owned()))
        }
        Err(e) => {
            warnings.push(format!("{}: {e}; using audio only", p.display()));
            None
        }
    });

    let mut analysis = analyze_clip(
        &clip,
        &song_id,
        doc.as_ref().map(|(d, p)| (d, Some(p.clone()))),
        model,
        metadata,
    );
    analysis.warnings.extend(warnings);
    Ok(analysis)
}
