use moodtag_core::pipeline::song_id_for;
use moodtag_core::{canonicalize, decode_wav, extract_features};

use crate::{FeaturesArgs, Status};

pub fn run(args: &FeaturesArgs) -> Status {
    let clip = match decode_wav(&args.wav).and_then(|c| canonicalize(&c)) {
        Ok(clip) => clip,
        Err(e) => {
            log::error!("{}: {e}", args.wav.display());
            return Status::Failed;
        }
    };
    let matrix = extract_features(&clip, song_id_for(&args.wav));
    if let Err(e) = matrix.write_csv(std::io::stdout().lock()) {
        log::error!("writing CSV: {e}");
        return Status::Failed;
    }
    Status::Ok
}
