//! Warping-window search and randomized segment hill-climbing.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::log::{Direction, LearnEvent, LearningLog};
use crate::band::{sakoe_chiba_width, Adjustment, BandSet, RkBand};
use crate::error::{Error, Result};
use crate::series::{Label, LabeledDataset};
use crate::silhouette::{evaluate, Evaluator};

/// Best uniform Sakoe-Chiba width, in percent of the series length, among
/// `bound_percent` down to 0. Returns the width and its heuristic; the
/// smaller width wins ties.
pub fn best_warping_window(data: &LabeledDataset, bound_percent: u32) -> Result<(u32, f64)> {
    if bound_percent > 100 {
        return Err(Error::InvalidBand(format!(
            "warping window bound {bound_percent}% outside 0..=100"
        )));
    }
    let n = data.series_length();
    let mut seen: HashMap<usize, f64> = HashMap::new();
    let mut best = (bound_percent, f64::NEG_INFINITY);
    for percent in (0..=bound_percent).rev() {
        let width = sakoe_chiba_width(n, percent);
        let score = match seen.get(&width) {
            Some(&s) => s,
            None => {
                let set = BandSet::uniform(data.labels(), &RkBand::uniform(n, width))?;
                let s = evaluate(data, &set)?;
                seen.insert(width, s);
                s
            }
        };
        if score >= best.1 {
            best = (percent, score);
        }
    }
    Ok(best)
}

/// A pending band adjustment: widths `start..=end` of class `label`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentTask {
    pub start: usize,
    pub end: usize,
    pub label: Label,
}

#[derive(Clone, Copy, Debug)]
pub struct HillClimbConfig {
    /// Minimum half-length a rejected segment needs to be split further.
    pub threshold: usize,
    /// Upper limit for any width when growing.
    pub bound: usize,
    pub direction: Direction,
    pub seed: u64,
}

/// Randomized single-queue hill-climbing over band segments.
///
/// Each dequeued segment of one class's band is moved by one step. The move
/// is kept only if the silhouette strictly improves, in which case the same
/// segment is queued again; otherwise (including blocked moves) the segment
/// is split in two when `(end - start) / 2 >= threshold`. Returns the final
/// bands and their heuristic, never worse than `initial`.
pub fn hillclimb_learn(
    data: &LabeledDataset,
    initial: &BandSet,
    config: HillClimbConfig,
    log: &mut LearningLog,
) -> Result<(BandSet, f64)> {
    let n = data.series_length();
    let threshold = config.threshold.max(1);
    let adjustment = match config.direction {
        Direction::Forward => Adjustment::Grow,
        Direction::Backward => Adjustment::Shrink,
    };
    let run = log.start_run();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluator = Evaluator::new(data, initial.clone())?;
    let mut queue: Vec<SegmentTask> = data
        .labels()
        .iter()
        .map(|&label| SegmentTask {
            start: 0,
            end: n - 1,
            label,
        })
        .collect();

    let cap = 10 * data.num_classes() * n;
    let mut dequeued = 0;
    let mut step = 0;
    while !queue.is_empty() {
        if dequeued == cap {
            log.note(format!(
                "run {run}: dequeue cap {cap} reached with {} segments left",
                queue.len()
            ));
            break;
        }
        dequeued += 1;
        let task = queue.swap_remove(rng.random_range(0..queue.len()));
        let current = evaluator.bands().band(task.label)?;
        let (moved, adjustable) =
            current.adjust_segment(task.start, task.end, adjustment, config.bound)?;
        if adjustable {
            let before = evaluator.score();
            let proposal = evaluator.propose(task.label, moved)?;
            let after = proposal.score;
            let accepted = after > before;
            log.push(LearnEvent {
                run,
                step,
                direction: config.direction,
                start: task.start,
                end: task.end,
                label: task.label,
                before,
                after,
                accepted,
            });
            step += 1;
            if accepted {
                evaluator.commit(proposal)?;
                queue.push(task);
                continue;
            }
        }
        if task.end - task.start >= 2 * threshold {
            let mid = (task.start + task.end) / 2;
            queue.push(SegmentTask {
                end: mid - 1,
                ..task
            });
            queue.push(SegmentTask { start: mid, ..task });
        }
    }
    let score = evaluator.score();
    Ok((evaluator.into_bands(), score))
}

/// Repeated forward and backward hill-climbing from the uniform band of
/// `r_percent`, halving the split threshold whenever a round brings no
/// improvement, until the threshold drops below 1.
pub fn iterative_learn(
    data: &LabeledDataset,
    r_percent: u32,
    bound: usize,
    seed: u64,
    log: &mut LearningLog,
) -> Result<(BandSet, f64)> {
    let n = data.series_length();
    let mut bands = BandSet::uniform(data.labels(), &RkBand::sakoe_chiba(n, r_percent)?)?;
    let mut best = evaluate(data, &bands)?;
    let mut threshold = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    log.note(format!(
        "iterative: start width {r_percent}% bound {bound} heuristic {best}"
    ));
    while threshold >= 1 {
        let mut climb = |direction| {
            let config = HillClimbConfig {
                threshold,
                bound,
                direction,
                seed: rng.next_u64(),
            };
            hillclimb_learn(data, &bands, config, log)
        };
        let forward = climb(Direction::Forward)?;
        let backward = climb(Direction::Backward)?;
        let (candidate, heuristic) = if backward.1 > forward.1 {
            backward
        } else {
            forward
        };
        if heuristic > best {
            best = heuristic;
            bands = candidate;
        } else {
            threshold /= 2;
        }
        log.note(format!("iterative: threshold {threshold} heuristic {best}"));
    }
    Ok((bands, best))
}
