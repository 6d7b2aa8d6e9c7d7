//! Boundary band extraction: bands derived from the envelope of within-class
//! optimal warping paths.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::band::{BandSet, RkBand};
use crate::dtw::{dtw_path, WarpingPath};
use crate::error::Result;
use crate::series::{Label, LabeledDataset};
use crate::silhouette::evaluate;

/// Visit counts of warping paths over an `n x n` grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathMatrix {
    n: usize,
    label: Label,
    counts: Vec<u64>,
}

impl PathMatrix {
    pub fn new(n: usize, label: Label) -> Self {
        Self {
            n,
            label,
            counts: vec![0; n * n],
        }
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, path: &WarpingPath) {
        for &(i, j) in path.cells() {
            self.counts[i * self.n + j] += 1;
        }
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.n + j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Visit-weighted histogram of distances from the diagonal over row `i`
    /// and column `i` (the diagonal cell counted once).
    pub fn offsets_at(&self, i: usize) -> BTreeMap<usize, u64> {
        let mut hist = BTreeMap::new();
        for k in 0..self.n {
            let row = self.count(i, k);
            let col = if k == i { 0 } else { self.count(k, i) };
            let total = row + col;
            if total > 0 {
                *hist.entry(k.abs_diff(i)).or_insert(0) += total;
            }
        }
        hist
    }

    pub fn max_band(&self) -> RkBand {
        self.band_from(|hist| hist.keys().next_back().copied().unwrap_or(0))
    }

    /// Weighted mean offset, rounded up.
    pub fn mean_band(&self) -> RkBand {
        self.band_from(|hist| {
            let weight: u64 = hist.values().sum();
            if weight == 0 {
                return 0;
            }
            let sum: u64 = hist.iter().map(|(&o, &c)| o as u64 * c).sum();
            sum.div_ceil(weight) as usize
        })
    }

    /// Most visited offset; the smaller offset wins ties.
    pub fn mode_band(&self) -> RkBand {
        self.band_from(|hist| {
            let mut best = (0, 0);
            for (&offset, &count) in hist {
                if count > best.1 {
                    best = (offset, count);
                }
            }
            best.0
        })
    }

    fn band_from<F>(&self, stat: F) -> RkBand
    where
        F: Fn(&BTreeMap<usize, u64>) -> usize,
    {
        let widths = (0..self.n).map(|i| stat(&self.offsets_at(i))).collect();
        RkBand::new(widths).expect("offsets never exceed n - 1")
    }
}

/// Accumulates unconstrained optimal paths over all ordered pairs of
/// distinct members of one class.
pub fn class_path_matrix(data: &LabeledDataset, label: Label, members: &[usize]) -> Result<PathMatrix> {
    let n = data.series_length();
    let full = RkBand::full(n);
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .flat_map(|&a| members.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        .collect();
    let paths = pairs
        .par_iter()
        .map(|&(a, b)| dtw_path(data.series(a), data.series(b), &full))
        .collect::<Result<Vec<_>>>()?;
    let mut matrix = PathMatrix::new(n, label);
    for path in &paths {
        matrix.add(path);
    }
    Ok(matrix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandKind {
    Max,
    Mean,
    Mode,
}

impl fmt::Display for BandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BandKind::Max => "max",
            BandKind::Mean => "mean",
            BandKind::Mode => "mode",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Extraction {
    pub bands: BandSet,
    pub heuristic: f64,
    pub kind: BandKind,
    /// Every candidate with its heuristic, in evaluation order.
    pub candidates: Vec<(BandKind, BandSet, f64)>,
}

/// Builds max, mean and mode band sets from within-class warping paths and
/// returns the one with the best silhouette (earlier kind wins ties).
pub fn extract_boundary_bands(data: &LabeledDataset) -> Result<Extraction> {
    let n = data.series_length();
    let mut max = BTreeMap::new();
    let mut mean = BTreeMap::new();
    let mut mode = BTreeMap::new();
    for (label, members) in data.class_members() {
        if members.len() < 2 {
            max.insert(label, RkBand::zeros(n));
            mean.insert(label, RkBand::zeros(n));
            mode.insert(label, RkBand::zeros(n));
            continue;
        }
        let matrix = class_path_matrix(data, label, &members)?;
        max.insert(label, matrix.max_band());
        mean.insert(label, matrix.mean_band());
        mode.insert(label, matrix.mode_band());
    }

    let mut candidates = Vec::with_capacity(3);
    for (kind, bands) in [
        (BandKind::Max, max),
        (BandKind::Mean, mean),
        (BandKind::Mode, mode),
    ] {
        let set = BandSet::new(bands)?;
        let score = evaluate(data, &set)?;
        candidates.push((kind, set, score));
    }
    let mut best = 0;
    for (idx, candidate) in candidates.iter().enumerate().skip(1) {
        if candidate.2 > candidates[best].2 {
            best = idx;
        }
    }
    let (kind, bands, heuristic) = candidates[best].clone();
    Ok(Extraction {
        bands,
        heuristic,
        kind,
        candidates,
    })
}
