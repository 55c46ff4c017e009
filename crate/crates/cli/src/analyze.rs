use std::collections::{HashMap, HashSet};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use moodtag_core::lyrics::{write_timeline_csv, BigramRuleTable, TagLexicon};
use moodtag_core::pipeline::{analyze_file, find_lyrics, LyricModel, SongAnalysis};
use moodtag_core::playlist::{load_metadata, MetadataSource};
use moodtag_core::record::write_record;
use moodtag_core::SongMetadata;
use rayon::prelude::*;

use crate::{AnalyzeArgs, Status};

struct Config {
    model: LyricModel,
    metadata: Option<HashMap<String, SongMetadata>>,
}

fn load_config(args: &AnalyzeArgs) -> Result<Config, String> {
    let lexicon = match &args.lexicon {
        Some(p) => TagLexicon::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => TagLexicon::bundled(),
    };
    let rules = match &args.bigrams {
        Some(p) => BigramRuleTable::load(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => BigramRuleTable::bundled(),
    };
    let metadata = args
        .meta
        .as_ref()
        .map(|p| load_metadata(p).map_err(|e| format!("{}: {e}", p.display())))
        .transpose()?;
    fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    Ok(Config {
        model: LyricModel { lexicon, rules },
        metadata,
    })
}

/// Expands directories to their `*.wav` files, sorted by name.
fn expand_inputs(inputs: &[PathBuf]) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut wavs: Vec<PathBuf> = fs::read_dir(input)
                .map(|entries| {
                    entries
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("wav")))
                        .collect()
                })
                .unwrap_or_default();
            wavs.sort();
            files.extend(wavs);
        } else {
            files.push(input.clone());
        }
    }
    files
}

fn write_outputs(args: &AnalyzeArgs, analysis: &SongAnalysis) -> Result<(), String> {
    let id = &analysis.record.song_id;
    write_record(&args.out, &analysis.record).map_err(|e| e.to_string())?;
    let create = |name: String| {
        let path = args.out.join(name);
        File::create(&path)
            .map(BufWriter::new)
            .map_err(|e| format!("{}: {e}", path.display()))
    };
    if args.emit_feature_csv {
        analysis
            .features
            .write_csv(create(format!("{id}.features.csv"))?)
            .map_err(|e| e.to_string())?;
    }
    if args.emit_timelines {
        if let Some(points) = &analysis.timeline {
            write_timeline_csv(points, create(format!("{id}.timeline.csv"))?).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn analyze_one(path: &Path, args: &AnalyzeArgs, config: &Config) -> Result<SongAnalysis, String> {
    let lyrics = find_lyrics(path, args.lyrics_dir.as_deref());
    let metadata = config.metadata.as_ref().map(|m| m as &dyn MetadataSource);
    analyze_file(path, lyrics.as_deref(), &config.model, metadata).map_err(|e| e.to_string())
}

pub fn run(args: &AnalyzeArgs) -> Status {
    let config = match load_config(args) {
        Ok(c) => c,
        Err(e) => {
            log::error!("{e}");
            return Status::Failed;
        }
    };
    let inputs = expand_inputs(&args.inputs);
    if inputs.is_empty() {
        log::error!("no WAV inputs found");
        return Status::Failed;
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        pool = pool.num_threads(jobs as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            log::error!("thread pool: {e}");
            return Status::Failed;
        }
    };
    let results: Vec<Result<SongAnalysis, String>> =
        pool.install(|| inputs.par_iter().map(|p| analyze_one(p, args, &config)).collect());

    // Outputs are written in input order so that runs are reproducible.
    let mut seen = HashSet::new();
    let mut failures = 0;
    for (path, result) in inputs.iter().zip(results) {
        let analysis = match result {
            Ok(a) => a,
            Err(e) => {
                log::error!("{e}");
                failures += 1;
                continue;
            }
        };
        for w in &analysis.warnings {
            log::warn!("{w}");
        }
        let record = &analysis.record;
        let written = if seen.insert(record.song_id.clone()) {
            write_outputs(args, &analysis)
        } else {
            Err(format!("duplicate song id {:?}", record.song_id))
        };
        match written {
            Ok(()) => {
                let label = record.mood.final_label;
                println!("{}\t{}\t{}", record.song_id, label.category, label.descriptors());
            }
            Err(e) => {
                log::error!("{}: {e}", path.display());
                failures += 1;
            }
        }
    }

    match failures {
        0 => Status::Ok,
        n if n == inputs.len() => Status::Failed,
        _ => Status::Partial,
    }
}
