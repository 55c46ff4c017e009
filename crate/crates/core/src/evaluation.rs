//! Confusion matrix of predicted quadrants against human labels.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::playlist::MetadataError;

/// Rows are the labelled quadrant, columns the predicted one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 4]; 4],
    /// Labelled songs per true quadrant that landed on a boundary band.
    pub boundary: [u64; 4],
    /// Labelled songs with no prediction at all.
    pub unmatched: u64,
}

impl ConfusionMatrix {
    /// `predictions` maps song id to a predicted quadrant (1-4) or `None`
    /// for a boundary song.
    pub fn build(labels: &HashMap<String, u8>, predictions: &HashMap<String, Option<u8>>) -> Self {
        let mut m = ConfusionMatrix::default();
        for (song, &truth) in labels {
            let row = (truth - 1) as usize;
            match predictions.get(song) {
                Some(Some(q)) => m.counts[row][(q - 1) as usize] += 1,
                Some(None) => m.boundary[row] += 1,
                None => m.unmatched += 1,
            }
        }
        m
    }

    /// Row-normalized percentages over songs that reached a quadrant.
    pub fn percentages(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (row, counts) in self.counts.iter().enumerate() {
            let total: u64 = counts.iter().sum();
            if total > 0 {
                for (col, &c) in counts.iter().enumerate() {
                    out[row][col] = 100.0 * c as f64 / total as f64;
                }
            }
        }
        out
    }

    /// Fraction of quadrant-assigned songs on the diagonal.
    pub fn accuracy(&self) -> Option<f64> {
        let total: u64 = self.counts.iter().flatten().sum();
        let hits: u64 = (0..4).map(|i| self.counts[i][i]).sum();
        (total > 0).then(|| hits as f64 / total as f64)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["quadrant", "1", "2", "3", "4"])?;
        for (row, pct) in self.percentages().iter().enumerate() {
            let mut fields = vec![(row + 1).to_string()];
            fields.extend(pct.iter().map(|v| format!("{v:.1}")));
            writer.write_record(&fields)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Reads `song_id,quadrant` rows; the quadrant may be written `3` or `Q3`.
pub fn read_labels_csv<R: Read>(input: R) -> Result<HashMap<String, u8>, MetadataError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut labels = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |message: String| MetadataError::Invalid { row: i + 2, message };
        let (Some(id), Some(q)) = (record.get(0), record.get(1)) else {
            return Err(bad("expected song_id,quadrant".into()));
        };
        let q: u8 = q
            .trim_start_matches(['Q', 'q'])
            .parse()
            .ok()
            .filter(|q| (1..=4).contains(q))
            .ok_or_else(|| bad(format!("quadrant {q:?} is not 1-4")))?;
        labels.insert(id.to_string(), q);
    }
    Ok(labels)
}
