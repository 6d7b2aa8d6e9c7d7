#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rkband::{LabeledDataset, RkBand, TimeSeries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimum squared cost over every monotone, continuous path inside `band`,
/// found by exhaustive depth-first enumeration.
pub fn brute_force_dtw(q: &[f64], c: &[f64], band: &RkBand) -> f64 {
    fn inside(band: &RkBand, i: usize, j: usize) -> bool {
        // independent restatement of the band rule
        let w = band.widths();
        if j >= i {
            j - i <= w[i]
        } else {
            i - j <= w[j]
        }
    }
    fn walk(q: &[f64], c: &[f64], band: &RkBand, i: usize, j: usize, acc: f64, best: &mut f64) {
        let n = q.len();
        let acc = acc + (q[i] - c[j]).powi(2);
        if i == n - 1 && j == n - 1 {
            *best = best.min(acc);
            return;
        }
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            let (a, b) = (i + di, j + dj);
            if a < n && b < n && inside(band, a, b) {
                walk(q, c, band, a, b, acc, best);
            }
        }
    }
    let mut best = f64::INFINITY;
    walk(q, c, band, 0, 0, 0.0, &mut best);
    best.sqrt()
}

pub fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()
}

pub fn random_band(rng: &mut ChaCha8Rng, n: usize) -> RkBand {
    RkBand::new((0..n).map(|_| rng.random_range(0..=n)).collect()).unwrap()
}

/// Pointwise-wider copy of `band`.
pub fn widen(rng: &mut ChaCha8Rng, band: &RkBand) -> RkBand {
    let n = band.len();
    RkBand::new(
        band.widths()
            .iter()
            .map(|&r| (r + rng.random_range(0..=2)).min(n))
            .collect(),
    )
    .unwrap()
}

pub fn euclid(q: &[f64], c: &[f64]) -> f64 {
    q.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Classes built from a per-class prototype plus noise and a random shift.
pub fn shifted_prototypes(
    rng: &mut ChaCha8Rng,
    classes: usize,
    per_class: usize,
    length: usize,
) -> LabeledDataset {
    let mut items = Vec::new();
    let protos: Vec<Vec<f64>> = (0..classes).map(|_| random_values(rng, length)).collect();
    for (k, proto) in protos.iter().enumerate() {
        for _ in 0..per_class {
            let shift = rng.random_range(0..=2usize);
            let v: Vec<f64> = (0..length)
                .map(|t| proto[(t + shift).min(length - 1)] + rng.random_range(-0.3..0.3))
                .collect();
            items.push((TimeSeries::new(v).unwrap(), k as i64 + 1));
        }
    }
    LabeledDataset::new(items).unwrap()
}

/// Two classes, one a positive bump and one a negative bump, both jittered in
/// time inside `region`; everything else is a fixed class-specific marker.
pub fn local_shift_classes(rng: &mut ChaCha8Rng, per_class: usize, length: usize) -> LabeledDataset {
    let mut items = Vec::new();
    for (label, sign, marker) in [(1i64, 1.0, 0.75), (2, -1.0, 0.80)] {
        for _ in 0..per_class {
            let center = 0.25 * length as f64 + rng.random_range(-4.0..4.0);
            let marker_at = marker * length as f64;
            let v: Vec<f64> = (0..length)
                .map(|t| {
                    let t = t as f64;
                    sign * 3.0 * (-((t - center) / 2.0).powi(2)).exp()
                        + 2.0 * (-((t - marker_at) / 1.0).powi(2)).exp()
                        + rng.random_range(-0.05..0.05)
                })
                .collect();
            items.push((TimeSeries::new(v).unwrap(), label));
        }
    }
    LabeledDataset::new(items).unwrap()
}
