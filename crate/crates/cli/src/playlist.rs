use std::collections::HashMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use moodtag_core::evaluation::{read_labels_csv, ConfusionMatrix};
use moodtag_core::playlist::{load_metadata, rank, write_m3u, Playlist, PlaylistKind};
use moodtag_core::record::read_record_dir;
use moodtag_core::{cluster, SongMetadata, SongRecord};

use crate::{PlaylistArgs, Status};

fn write_playlist(out: &Path, playlist: &Playlist, locations: &HashMap<&str, &str>) -> Result<(), String> {
    let path = out.join(playlist.kind.file_name());
    let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    write_m3u(playlist, |id| locations[id].to_string(), BufWriter::new(file))
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn write_confusion(out: &Path, labels: &Path, predictions: &HashMap<String, Option<u8>>) -> Result<(), String> {
    let labels = File::open(labels)
        .map_err(|e| e.to_string())
        .and_then(|f| read_labels_csv(f).map_err(|e| e.to_string()))
        .map_err(|e| format!("{}: {e}", labels.display()))?;
    let matrix = ConfusionMatrix::build(&labels, predictions);
    let path = out.join("confusion.csv");
    let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    matrix.write_csv(file).map_err(|e| format!("{}: {e}", path.display()))?;
    match matrix.accuracy() {
        Some(a) => eprintln!(
            "accuracy {:.1}% over {} quadrant songs",
            a * 100.0,
            matrix.counts.iter().flatten().sum::<u64>()
        ),
        None => eprintln!("accuracy n/a: no labelled song reached a quadrant"),
    }
    if matrix.unmatched > 0 {
        log::warn!("{} labelled song(s) have no record", matrix.unmatched);
    }
    Ok(())
}

pub fn run(args: &PlaylistArgs) -> Status {
    let entries = match read_record_dir(&args.records) {
        Ok(e) => e,
        Err(e) => {
            log::error!("{}: {e}", args.records.display());
            return Status::Failed;
        }
    };
    let mut status = Status::Ok;
    let mut records: Vec<SongRecord> = Vec::new();
    for (path, result) in entries {
        match result {
            Ok(r) => records.push(r),
            Err(e) => {
                log::error!("{}: {e}", path.display());
                status = Status::Partial;
            }
        }
    }

    // Metadata stored in the records, overridden by an explicit CSV.
    let mut metadata: HashMap<String, SongMetadata> = records
        .iter()
        .filter_map(|r| r.metadata.clone())
        .map(|m| (m.song_id.clone(), m))
        .collect();
    if let Some(path) = &args.meta {
        match load_metadata(path) {
            Ok(m) => metadata.extend(m),
            Err(e) => {
                log::error!("{}: {e}", path.display());
                return Status::Failed;
            }
        }
    }
    if let Err(e) = fs::create_dir_all(&args.out) {
        log::error!("{}: {e}", args.out.display());
        return Status::Failed;
    }

    let clusters = cluster(
        records.iter().map(|r| (r.song_id.as_str(), r.mood)),
        args.force_quadrant,
    );
    let locations: HashMap<&str, &str> = records
        .iter()
        .map(|r| (r.song_id.as_str(), r.audio_path.as_str()))
        .collect();
    let mut playlists: Vec<Playlist> = (1..=4u8)
        .map(|q| rank(PlaylistKind::Quadrant(q), clusters.quadrant(q), &metadata))
        .collect();
    if !args.force_quadrant {
        playlists.push(rank(PlaylistKind::Boundary, &clusters.boundary, &metadata));
    }
    for playlist in &playlists {
        if let Err(e) = write_playlist(&args.out, playlist, &locations) {
            log::error!("{e}");
            return Status::Failed;
        }
        eprintln!("{}: {} song(s)", playlist.kind, playlist.entries.len());
    }

    if let Some(labels) = &args.labels {
        let mut predictions: HashMap<String, Option<u8>> = HashMap::new();
        for q in 1..=4u8 {
            predictions.extend(clusters.quadrant(q).iter().map(|id| (id.to_string(), Some(q))));
        }
        predictions.extend(clusters.boundary.iter().map(|id| (id.to_string(), None)));
        if let Err(e) = write_confusion(&args.out, labels, &predictions) {
            log::error!("{e}");
            return Status::Failed;
        }
    }
    status
}
