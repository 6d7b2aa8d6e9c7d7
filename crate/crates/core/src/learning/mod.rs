//! Learning per-class R-K bands under the silhouette heuristic.

mod extraction;
mod hillclimb;
mod log;

pub use extraction::{class_path_matrix, extract_boundary_bands, BandKind, Extraction, PathMatrix};
pub use hillclimb::{
    best_warping_window, hillclimb_learn, iterative_learn, HillClimbConfig, SegmentTask,
};
pub use log::{Direction, LearnEvent, LearningLog};

use std::fmt;

use crate::band::{sakoe_chiba_width, BandSet};
use crate::error::Result;
use crate::series::LabeledDataset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Learner {
    Extraction(BandKind),
    Iterative,
}

impl fmt::Display for Learner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Learner::Extraction(kind) => write!(f, "extraction ({kind} band)"),
            Learner::Iterative => f.write_str("iterative"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LearnOutcome {
    pub bands: BandSet,
    pub heuristic: f64,
    pub winner: Learner,
    pub extraction_heuristic: f64,
    pub iterative_heuristic: f64,
    /// Best uniform warping window, in percent, that seeded iterative learning.
    pub window_percent: u32,
}

/// Runs boundary extraction and iterative learning and keeps the better
/// band set; extraction wins ties.
pub fn learn_best_band(
    data: &LabeledDataset,
    bound_percent: u32,
    seed: u64,
    log: &mut LearningLog,
) -> Result<LearnOutcome> {
    let extraction = extract_boundary_bands(data)?;
    log.note(format!(
        "extraction: {} band heuristic {}",
        extraction.kind, extraction.heuristic
    ));
    let (window_percent, window_score) = best_warping_window(data, bound_percent)?;
    log.note(format!(
        "best warping window: {window_percent}% heuristic {window_score}"
    ));
    let bound = sakoe_chiba_width(data.series_length(), bound_percent);
    let (iter_bands, iter_score) = iterative_learn(data, window_percent, bound, seed, log)?;

    let mut outcome = LearnOutcome {
        bands: extraction.bands,
        heuristic: extraction.heuristic,
        winner: Learner::Extraction(extraction.kind),
        extraction_heuristic: extraction.heuristic,
        iterative_heuristic: iter_score,
        window_percent,
    };
    if iter_score > outcome.heuristic {
        outcome.bands = iter_bands;
        outcome.heuristic = iter_score;
        outcome.winner = Learner::Iterative;
    }
    log.note(format!(
        "winner: {} heuristic {}",
        outcome.winner, outcome.heuristic
    ));
    Ok(outcome)
}
