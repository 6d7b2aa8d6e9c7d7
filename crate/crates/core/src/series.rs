//! Time series, labeled datasets and the length-reduction preprocessing step.

use std::collections::BTreeMap;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Class identifier. Dataset files carry integer labels in their first column.
pub type Label = i64;

/// Standard deviations below this are treated as a constant series.
const FLAT_STD: f64 = 1e-12;

/// A real-valued sequence of at least two samples.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 samples, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "non-finite sample at index {pos}"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Z-normalized copy: zero mean, unit population standard deviation.
    /// A (numerically) constant series maps to all zeros.
    pub fn znormalize(&self) -> TimeSeries {
        let n = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        let values = if std < FLAT_STD {
            vec![0.0; self.values.len()]
        } else {
            self.values.iter().map(|v| (v - mean) / std).collect()
        };
        TimeSeries { values }
    }

    /// Linearly interpolates the series down to `floor(len / 2)` samples,
    /// mapping the first and last samples onto themselves.
    pub fn resample_half(&self) -> Result<TimeSeries> {
        let len = self.values.len();
        if len < 4 {
            return Err(Error::InvalidSeries(format!(
                "cannot halve a series of length {len}"
            )));
        }
        Ok(TimeSeries {
            values: resample(&self.values, len / 2),
        })
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

fn resample(values: &[f64], new_len: usize) -> Vec<f64> {
    let last = values.len() - 1;
    let step = last as f64 / (new_len - 1) as f64;
    (0..new_len)
        .map(|k| {
            if k == new_len - 1 {
                return values[last];
            }
            let pos = k as f64 * step;
            let lo = pos.floor() as usize;
            let frac = pos - lo as f64;
            if lo >= last {
                values[last]
            } else {
                values[lo] + frac * (values[lo + 1] - values[lo])
            }
        })
        .collect()
}

/// `log10(n² · m²)`, the approximate cost of learning on `n` series of length `m`.
pub fn complexity(n: usize, m: usize) -> f64 {
    2.0 * (n as f64).log10() + 2.0 * (m as f64).log10()
}

/// Equal-length labeled series.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    items: Vec<(TimeSeries, Label)>,
    labels: Vec<Label>,
    series_length: usize,
}

impl LabeledDataset {
    pub fn new(items: Vec<(TimeSeries, Label)>) -> Result<Self> {
        let Some((first, _)) = items.first() else {
            return Err(Error::InvalidDataset("dataset is empty".into()));
        };
        let series_length = first.len();
        if let Some(idx) = items.iter().position(|(s, _)| s.len() != series_length) {
            return Err(Error::InvalidDataset(format!(
                "item {idx} has length {}, expected {series_length}",
                items[idx].0.len()
            )));
        }
        let mut labels: Vec<Label> = items.iter().map(|(_, l)| *l).collect();
        labels.sort_unstable();
        labels.dedup();
        Ok(Self {
            items,
            labels,
            series_length,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Distinct labels in ascending order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn series_length(&self) -> usize {
        self.series_length
    }

    pub fn items(&self) -> &[(TimeSeries, Label)] {
        &self.items
    }

    pub fn series(&self, idx: usize) -> &TimeSeries {
        &self.items[idx].0
    }

    pub fn label(&self, idx: usize) -> Label {
        self.items[idx].1
    }

    pub fn item_labels(&self) -> Vec<Label> {
        self.items.iter().map(|(_, l)| *l).collect()
    }

    /// Item indices grouped by class, in dataset order.
    pub fn class_members(&self) -> BTreeMap<Label, Vec<usize>> {
        let mut out: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (idx, (_, label)) in self.items.iter().enumerate() {
            out.entry(*label).or_default().push(idx);
        }
        out
    }

    /// Copy of the dataset without item `idx`.
    pub fn without(&self, idx: usize) -> Result<LabeledDataset> {
        let items = self
            .items
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, item)| item.clone())
            .collect();
        LabeledDataset::new(items)
    }

    pub fn map_series<F>(&self, f: F) -> Result<LabeledDataset>
    where
        F: Fn(&TimeSeries) -> Result<TimeSeries>,
    {
        let items = self
            .items
            .iter()
            .map(|(s, l)| Ok((f(s)?, *l)))
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::new(items)
    }

    pub fn znormalize(&self) -> LabeledDataset {
        let items = self
            .items
            .iter()
            .map(|(s, l)| (s.znormalize(), *l))
            .collect();
        LabeledDataset {
            items,
            labels: self.labels.clone(),
            series_length: self.series_length,
        }
    }
}

/// Output of [`preprocess`].
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub train: LabeledDataset,
    pub test: Vec<TimeSeries>,
    pub length: usize,
    pub halvings: usize,
}

/// Halves every series until `complexity(N, L) <= threshold`.
pub fn preprocess(
    train: LabeledDataset,
    test: Vec<TimeSeries>,
    threshold: f64,
) -> Result<Preprocessed> {
    let n = train.len();
    let mut length = train.series_length();
    if let Some(bad) = test.iter().find(|s| s.len() != length) {
        return Err(Error::Dimension {
            expected: length,
            actual: bad.len(),
        });
    }
    let mut train = train;
    let mut test = test;
    let mut halvings = 0;
    let mut alpha = complexity(n, length);
    while alpha > threshold {
        if length < 4 {
            return Err(Error::ComplexityUnreachable {
                threshold,
                length,
                complexity: alpha,
            });
        }
        train = train.map_series(TimeSeries::resample_half)?;
        test = test
            .iter()
            .map(TimeSeries::resample_half)
            .collect::<Result<_>>()?;
        length = train.series_length();
        halvings += 1;
        alpha = complexity(n, length);
    }
    Ok(Preprocessed {
        train,
        test,
        length,
        halvings,
    })
}
