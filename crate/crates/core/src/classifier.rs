//! 1-NN classification under per-class band-constrained DTW.
//!
//! Each training item is compared under the band of its own class, and its
//! LB_Keogh envelope is built with that same band. Candidates are visited in
//! ascending lower-bound order, so the search stops at the first bound that
//! exceeds the best exact distance found.

use rayon::prelude::*;

use crate::band::{BandSet, RkBand};
use crate::dtw::{dtw_squared, row_spans, Envelope};
use crate::error::{Error, Result};
use crate::learning::{learn_best_band, LearnOutcome, LearningLog};
use crate::series::{preprocess, Label, LabeledDataset, TimeSeries};

/// Result of a nearest-neighbor search.
#[derive(Clone, Debug, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub label: Label,
    pub distance: f64,
    /// Number of exact DTW computations performed.
    pub exact: usize,
    /// Candidates skipped by the lower bound, with their bounds.
    pub pruned: Vec<(usize, f64)>,
}

/// Training data with per-class bands and precomputed envelopes.
#[derive(Clone, Debug)]
pub struct NearestNeighbor {
    train: LabeledDataset,
    bands: BandSet,
    envelopes: Vec<Envelope>,
    spans: Vec<Vec<(usize, usize)>>,
}

impl NearestNeighbor {
    pub fn new(train: LabeledDataset, bands: BandSet) -> Result<Self> {
        bands.check_covers(train.labels(), train.series_length())?;
        let mut envelopes = Vec::with_capacity(train.len());
        let mut spans = Vec::with_capacity(train.len());
        for (series, label) in train.items() {
            let band = bands.band(*label)?;
            envelopes.push(Envelope::new(series, band)?);
            spans.push(row_spans(band));
        }
        Ok(Self {
            train,
            bands,
            envelopes,
            spans,
        })
    }

    pub fn train(&self) -> &LabeledDataset {
        &self.train
    }

    pub fn bands(&self) -> &BandSet {
        &self.bands
    }

    fn band_of(&self, idx: usize) -> &RkBand {
        self.bands
            .get(self.train.label(idx))
            .expect("bands cover every class")
    }

    fn exact(&self, query: &[f64], idx: usize) -> f64 {
        dtw_squared(query, self.train.series(idx), self.band_of(idx), &self.spans[idx]).sqrt()
    }

    fn check_query(&self, query: &[f64]) -> Result<()> {
        if query.len() != self.train.series_length() {
            return Err(Error::Dimension {
                expected: self.train.series_length(),
                actual: query.len(),
            });
        }
        Ok(())
    }

    /// Nearest training item to `query`, optionally ignoring item `exclude`.
    /// Distance ties go to the earliest item.
    pub fn nearest(&self, query: &[f64], exclude: Option<usize>) -> Result<Neighbor> {
        self.check_query(query)?;
        let mut order: Vec<(f64, usize)> = (0..self.train.len())
            .filter(|&i| Some(i) != exclude)
            .map(|i| Ok((self.envelopes[i].lower_bound(query)?, i)))
            .collect::<Result<_>>()?;
        if order.is_empty() {
            return Err(Error::InvalidDataset("no candidates to search".into()));
        }
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut best = (f64::INFINITY, usize::MAX);
        let mut exact = 0;
        let mut pruned = Vec::new();
        for (pos, &(lb, idx)) in order.iter().enumerate() {
            if lb > best.0 {
                pruned.extend(order[pos..].iter().map(|&(b, i)| (i, b)));
                break;
            }
            let d = self.exact(query, idx);
            exact += 1;
            if d < best.0 || (d == best.0 && idx < best.1) {
                best = (d, idx);
            }
        }
        Ok(Neighbor {
            index: best.1,
            label: self.train.label(best.1),
            distance: best.0,
            exact,
            pruned,
        })
    }

    /// Exhaustive search without lower bounds.
    pub fn nearest_exhaustive(&self, query: &[f64], exclude: Option<usize>) -> Result<Neighbor> {
        self.check_query(query)?;
        let mut best = (f64::INFINITY, usize::MAX);
        let mut exact = 0;
        for idx in (0..self.train.len()).filter(|&i| Some(i) != exclude) {
            let d = self.exact(query, idx);
            exact += 1;
            if d < best.0 {
                best = (d, idx);
            }
        }
        if best.1 == usize::MAX {
            return Err(Error::InvalidDataset("no candidates to search".into()));
        }
        Ok(Neighbor {
            index: best.1,
            label: self.train.label(best.1),
            distance: best.0,
            exact,
            pruned: Vec::new(),
        })
    }

    pub fn predict(&self, query: &[f64]) -> Result<Label> {
        Ok(self.nearest(query, None)?.label)
    }

    pub fn predict_all(&self, queries: &[TimeSeries]) -> Result<Vec<Label>> {
        queries.par_iter().map(|q| self.predict(q)).collect()
    }

    /// Leave-one-out 1-NN accuracy over the training set.
    pub fn loo_accuracy(&self) -> Result<f64> {
        let n = self.train.len();
        if n < 2 {
            return Err(Error::UndefinedAccuracy(n));
        }
        let correct = (0..n)
            .into_par_iter()
            .map(|i| {
                let hit = self.nearest(self.train.series(i), Some(i))?.label == self.train.label(i);
                Ok(usize::from(hit))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum::<usize>();
        Ok(correct as f64 / n as f64)
    }
}

/// Leave-one-out 1-NN accuracy of `data` under `bands`.
pub fn loo_accuracy(data: &LabeledDataset, bands: &BandSet) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::UndefinedAccuracy(data.len()));
    }
    NearestNeighbor::new(data.clone(), bands.clone())?.loo_accuracy()
}

/// A trained classifier together with its leave-one-out accuracy.
#[derive(Clone, Debug)]
pub struct ClassifierModel {
    search: NearestNeighbor,
    pub predicted_accuracy: f64,
}

impl ClassifierModel {
    pub fn new(train: LabeledDataset, bands: BandSet) -> Result<Self> {
        let search = NearestNeighbor::new(train, bands)?;
        let predicted_accuracy = search.loo_accuracy()?;
        Ok(Self {
            search,
            predicted_accuracy,
        })
    }

    pub fn train(&self) -> &LabeledDataset {
        self.search.train()
    }

    pub fn bands(&self) -> &BandSet {
        self.search.bands()
    }

    pub fn search(&self) -> &NearestNeighbor {
        &self.search
    }

    pub fn predict(&self, query: &[f64]) -> Result<Label> {
        self.search.predict(query)
    }

    pub fn predict_all(&self, queries: &[TimeSeries]) -> Result<Vec<Label>> {
        self.search.predict_all(queries)
    }
}

pub fn predict_1nn(model: &ClassifierModel, query: &[f64]) -> Result<Label> {
    model.predict(query)
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    pub complexity_threshold: f64,
    pub bound_percent: u32,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            complexity_threshold: 9.0,
            bound_percent: 100,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub predictions: Vec<Label>,
    pub predicted_accuracy: f64,
    pub model: ClassifierModel,
    pub learning: LearnOutcome,
    /// Series length after preprocessing.
    pub length: usize,
    /// Preprocessed test series.
    pub test: Vec<TimeSeries>,
}

/// Preprocess, learn bands, measure leave-one-out accuracy and predict `test`.
pub fn run_pipeline(
    train: LabeledDataset,
    test: Vec<TimeSeries>,
    config: PipelineConfig,
    log: &mut LearningLog,
) -> Result<PipelineOutput> {
    let pre = preprocess(train, test, config.complexity_threshold)?;
    log.note(format!(
        "preprocess: length {} after {} halvings",
        pre.length, pre.halvings
    ));
    let learning = learn_best_band(&pre.train, config.bound_percent, config.seed, log)?;
    let model = ClassifierModel::new(pre.train, learning.bands.clone())?;
    let predictions = model.predict_all(&pre.test)?;
    Ok(PipelineOutput {
        predictions,
        predicted_accuracy: model.predicted_accuracy,
        model,
        learning,
        length: pre.length,
        test: pre.test,
    })
}
