//! Synthetic labeled datasets for tests and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::series::{Label, LabeledDataset, TimeSeries};

/// Cylinder-bell-funnel shapes, scaled from the classic length-128 layout
/// to `length` samples. Labels 1, 2, 3 (cylinder, bell, funnel) cycle
/// through the items.
pub fn cylinder_bell_funnel(count: usize, length: usize, seed: u64) -> Result<LabeledDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = length as f64 / 128.0;
    let items = (0..count)
        .map(|k| {
            let label = (k % 3) as Label + 1;
            let onset = rng.random_range(16.0..32.0) * scale;
            let span = rng.random_range(32.0..96.0) * scale;
            let end = (onset + span).min(length as f64 - 1.0);
            let amp = 6.0 + rng.sample::<f64, _>(StandardNormal);
            let values = (0..length)
                .map(|t| {
                    let t = t as f64;
                    let noise: f64 = rng.sample(StandardNormal);
                    let shape = if t < onset || t > end {
                        0.0
                    } else {
                        match label {
                            1 => 1.0,
                            2 => (t - onset) / (end - onset),
                            _ => (end - t) / (end - onset),
                        }
                    };
                    amp * shape + noise
                })
                .collect();
            Ok((TimeSeries::new(values)?, label))
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledDataset::new(items)
}

/// Random-walk series with random labels in `1..=classes`.
pub fn random_walks(count: usize, length: usize, classes: usize, seed: u64) -> Result<LabeledDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..count)
        .map(|k| {
            // guarantee every class appears when count allows
            let label = if k < classes {
                k as Label + 1
            } else {
                rng.random_range(1..=classes as Label)
            };
            let mut level = 0.0;
            let values = (0..length)
                .map(|_| {
                    level += rng.sample::<f64, _>(StandardNormal);
                    level
                })
                .collect();
            Ok((TimeSeries::new(values)?, label))
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledDataset::new(items)
}
