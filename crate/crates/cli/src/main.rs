//! `moodtag`: analyze songs into mood records, build playlists from them,
//! and dump per-window features.

mod analyze;
mod features;
mod playlist;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "moodtag",
    version,
    about = "Mood tagging and mood playlists for WAV collections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze WAV files and write one XML mood record per song.
    Analyze(AnalyzeArgs),
    /// Cluster a directory of records into ranked M3U playlists.
    Playlist(PlaylistArgs),
    /// Print the per-window feature table of one WAV file as CSV.
    Features(FeaturesArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// WAV files, or directories searched for `*.wav`.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Word-to-tag lexicon (TSV); the bundled lexicon by default.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Tag bigram rules (TSV); the bundled rules by default.
    #[arg(long)]
    pub bigrams: Option<PathBuf>,
    /// Listener votes and album ratings (CSV).
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Directory searched for `<name>.lrc` / `<name>.txt` lyrics instead of
    /// the audio file's own directory.
    #[arg(long)]
    pub lyrics_dir: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write `<id>.timeline.csv` for timed lyrics.
    #[arg(long)]
    pub emit_timelines: bool,
    /// Also write `<id>.features.csv`.
    #[arg(long)]
    pub emit_feature_csv: bool,
    /// Worker threads; all cores by default.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
}

#[derive(Args)]
pub struct PlaylistArgs {
    /// Directory of `<id>.xml` records.
    pub records: PathBuf,
    /// Listener votes and album ratings (CSV); overrides values stored in
    /// the records.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Snap boundary songs into a quadrant instead of `boundary.m3u`.
    #[arg(long)]
    pub force_quadrant: bool,
    /// Human `song_id,quadrant` labels; writes `confusion.csv`.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Args)]
pub struct FeaturesArgs {
    pub wav: PathBuf,
}

/// Process exit status shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Partial,
    Failed,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::Partial => 1,
            Status::Failed => 2,
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => analyze::run(&args),
        Command::Playlist(args) => playlist::run(&args),
        Command::Features(args) => features::run(&args),
    }
    .into()
}
