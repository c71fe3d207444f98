//! Machine-readable run reports and scoreboard exports.

use std::fs;
use std::path::Path;

use palmid_core::{Gallery, Scoreboard};

use crate::error::{DataError, DataResult};

/// One evaluation row. `k` is `None` when all raw features were used.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scenario: String,
    pub split: String,
    pub k: Option<usize>,
    pub accuracy: f64,
    pub probes: usize,
    pub seconds: f64,
}

impl ReportRow {
    fn csv_line(&self) -> String {
        let k = match self.k {
            Some(k) => k.to_string(),
            None => "all".to_string(),
        };
        format!(
            "{},{},{},{},{},{:.3}",
            self.scenario, self.split, k, self.accuracy, self.probes, self.seconds
        )
    }

    /// The row without its wall-clock field, for reproducibility checks.
    pub fn deterministic_part(&self) -> String {
        let line = self.csv_line();
        line.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap_or(line)
    }
}

/// An ordered set of report rows with a fixed CSV header.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

pub const REPORT_HEADER: &str = "scenario,split,k,accuracy,probes,seconds";

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> DataResult<()> {
        fs::write(path, self.to_csv()).map_err(|e| DataError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

/// Scoreboard export: `entry_index,person_id,score,tiebreak_distance`,
/// sorted by descending score.
pub fn scoreboard_to_csv(board: &Scoreboard, gallery: &Gallery) -> String {
    let mut out = String::from("entry_index,person_id,score,tiebreak_distance\n");
    for e in board.ranking() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e,
            gallery.person_id(e),
            board.scores()[e],
            board.tiebreak_distances()[e]
        ));
    }
    out
}
