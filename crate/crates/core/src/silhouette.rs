//! Silhouette index and its band-parameterized form used as the learning heuristic.
//!
//! Distances are directed: `d(i, j)` is the DTW distance from item `i` to item
//! `j` under the band of `j`'s class, so the cached table is indexed by ordered
//! pairs.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::band::{BandSet, RkBand};
use crate::dtw::{dtw_squared, row_spans};
use crate::error::{Error, Result};
use crate::series::{Label, LabeledDataset};

#[derive(Clone, Debug, PartialEq)]
pub struct SilhouetteReport {
    /// Mean of the per-class values.
    pub global_index: f64,
    pub per_class: BTreeMap<Label, f64>,
    pub per_item: Vec<f64>,
}

fn check_classes(labels: &[Label]) -> Result<()> {
    let first = labels.first().copied();
    if labels.iter().all(|&l| Some(l) == first) {
        return Err(Error::EvaluationUndefined(
            "need at least 2 classes".into(),
        ));
    }
    Ok(())
}

fn item_score<D>(i: usize, labels: &[Label], dist: &D) -> f64
where
    D: Fn(usize, usize) -> f64,
{
    let own = labels[i];
    // per class: (sum, count)
    let mut sums: BTreeMap<Label, (f64, usize)> = BTreeMap::new();
    for (j, &label) in labels.iter().enumerate() {
        if j == i {
            continue;
        }
        let entry = sums.entry(label).or_insert((0.0, 0));
        entry.0 += dist(i, j);
        entry.1 += 1;
    }
    let Some(&(own_sum, own_count)) = sums.get(&own) else {
        // singleton class
        return 0.0;
    };
    let a = own_sum / own_count as f64;
    let b = sums
        .iter()
        .filter(|(l, _)| **l != own)
        .map(|(_, (s, c))| s / *c as f64)
        .fold(f64::INFINITY, f64::min);
    let denom = a.max(b);
    if denom == 0.0 {
        0.0
    } else {
        (b - a) / denom
    }
}

/// Silhouette of item `i` given the item labels and a distance function.
pub fn silhouette_item<D>(i: usize, labels: &[Label], dist: D) -> Result<f64>
where
    D: Fn(usize, usize) -> f64,
{
    if i >= labels.len() {
        return Err(Error::Index(format!("item {i} of {}", labels.len())));
    }
    check_classes(labels)?;
    Ok(item_score(i, labels, &dist))
}

/// Per-item, per-class and global silhouette. Sums run in item order.
pub fn silhouette<D>(labels: &[Label], dist: D) -> Result<SilhouetteReport>
where
    D: Fn(usize, usize) -> f64,
{
    check_classes(labels)?;
    let per_item: Vec<f64> = (0..labels.len())
        .map(|i| item_score(i, labels, &dist))
        .collect();
    let mut class_sums: BTreeMap<Label, (f64, usize)> = BTreeMap::new();
    for (&label, &s) in labels.iter().zip(&per_item) {
        let e = class_sums.entry(label).or_insert((0.0, 0));
        e.0 += s;
        e.1 += 1;
    }
    let per_class: BTreeMap<Label, f64> = class_sums
        .into_iter()
        .map(|(l, (s, c))| (l, s / c as f64))
        .collect();
    let global_index = per_class.values().sum::<f64>() / per_class.len() as f64;
    Ok(SilhouetteReport {
        global_index,
        per_class,
        per_item,
    })
}

/// Ordered-pair DTW distance table for a dataset under a band set.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    values: Vec<f64>,
}

impl DistanceTable {
    pub fn compute(data: &LabeledDataset, bands: &BandSet) -> Result<Self> {
        bands.check_covers(data.labels(), data.series_length())?;
        let n = data.len();
        let mut values = vec![0.0; n * n];
        for (label, members) in data.class_members() {
            let column = column_for(data, &members, bands.band(label)?);
            for (k, &j) in members.iter().enumerate() {
                for i in 0..n {
                    values[i * n + j] = column[k * n + i];
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Distances from every item to each of `members` under `band`, laid out
/// member-major: `out[k * n + i] = d(i, members[k])`.
fn column_for(data: &LabeledDataset, members: &[usize], band: &RkBand) -> Vec<f64> {
    let n = data.len();
    let spans = row_spans(band);
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .flat_map(|&j| (0..n).map(move |i| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            if i == j {
                0.0
            } else {
                dtw_squared(data.series(i), data.series(j), band, &spans).sqrt()
            }
        })
        .collect()
}

/// Global silhouette of `data` under per-class bands.
pub fn evaluate(data: &LabeledDataset, bands: &BandSet) -> Result<f64> {
    Ok(evaluate_report(data, bands)?.global_index)
}

pub fn evaluate_report(data: &LabeledDataset, bands: &BandSet) -> Result<SilhouetteReport> {
    check_classes(&data.item_labels())?;
    let table = DistanceTable::compute(data, bands)?;
    silhouette(&data.item_labels(), |i, j| table.get(i, j))
}

/// Incremental evaluator: keeps the distance table for the current band set
/// and recomputes only one class's columns when that class's band changes.
pub struct Evaluator<'a> {
    data: &'a LabeledDataset,
    labels: Vec<Label>,
    members: BTreeMap<Label, Vec<usize>>,
    bands: BandSet,
    table: DistanceTable,
    score: f64,
}

/// A scored but uncommitted band change.
pub struct Proposal {
    label: Label,
    band: RkBand,
    column: Vec<f64>,
    pub score: f64,
}

impl<'a> Evaluator<'a> {
    pub fn new(data: &'a LabeledDataset, bands: BandSet) -> Result<Self> {
        let labels = data.item_labels();
        check_classes(&labels)?;
        let table = DistanceTable::compute(data, &bands)?;
        let score = silhouette(&labels, |i, j| table.get(i, j))?.global_index;
        Ok(Self {
            data,
            labels,
            members: data.class_members(),
            bands,
            table,
            score,
        })
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn bands(&self) -> &BandSet {
        &self.bands
    }

    pub fn into_bands(self) -> BandSet {
        self.bands
    }

    /// Scores the band set with `label`'s band replaced, leaving state untouched.
    pub fn propose(&self, label: Label, band: RkBand) -> Result<Proposal> {
        let members = self.members.get(&label).ok_or(Error::MissingBand(label))?;
        if band.len() != self.bands.n() {
            return Err(Error::Dimension {
                expected: self.bands.n(),
                actual: band.len(),
            });
        }
        let n = self.data.len();
        let column = column_for(self.data, members, &band);
        let mut patched = vec![usize::MAX; n];
        for (k, &j) in members.iter().enumerate() {
            patched[j] = k;
        }
        let table = &self.table;
        let lookup = |i: usize, j: usize| match patched[j] {
            usize::MAX => table.get(i, j),
            k => column[k * n + i],
        };
        let score = silhouette(&self.labels, lookup)?.global_index;
        Ok(Proposal {
            label,
            band,
            column,
            score,
        })
    }

    pub fn commit(&mut self, proposal: Proposal) -> Result<()> {
        let n = self.data.len();
        let members = &self.members[&proposal.label];
        for (k, &j) in members.iter().enumerate() {
            for i in 0..n {
                self.table.values[i * n + j] = proposal.column[k * n + i];
            }
        }
        self.bands = self.bands.with_band(proposal.label, proposal.band)?;
        self.score = proposal.score;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::TimeSeries;
    use approx::assert_abs_diff_eq;

    fn four_points() -> LabeledDataset {
        let items = [(0.0, 1), (1.0, 1), (10.0, 2), (11.0, 2)]
            .into_iter()
            .map(|(v, l)| (TimeSeries::new(vec![v, v]).unwrap(), l))
            .collect();
        LabeledDataset::new(items).unwrap()
    }

    #[test]
    fn four_point_item_scores() {
        let labels = [1, 1, 2, 2];
        let xs = [0.0f64, 1.0, 10.0, 11.0];
        let d = |i: usize, j: usize| (xs[i] - xs[j]).abs();
        // a = 1, b = (10 + 11) / 2
        assert_abs_diff_eq!(silhouette_item(0, &labels, d).unwrap(), 9.5 / 10.5, epsilon = 1e-12);
        assert_abs_diff_eq!(silhouette_item(1, &labels, d).unwrap(), 8.5 / 9.5, epsilon = 1e-12);
        let report = silhouette(&labels, d).unwrap();
        assert_abs_diff_eq!(report.global_index, 0.899749373433584, epsilon = 1e-12);
    }

    #[test]
    fn four_point_evaluate_with_zero_bands() {
        let data = four_points();
        let bands = BandSet::uniform(data.labels(), &RkBand::zeros(2)).unwrap();
        // every distance is scaled by sqrt(2); the ratios are unchanged
        assert_abs_diff_eq!(evaluate(&data, &bands).unwrap(), 0.899749373433584, epsilon = 1e-12);
    }

    #[test]
    fn identical_members_score_one() {
        let labels = [1, 1, 2, 2, 2];
        let xs = [0.0f64, 0.0, 3.0, 3.0, 3.0];
        let report = silhouette(&labels, |i, j| (xs[i] - xs[j]).abs()).unwrap();
        assert!(report.per_item.iter().all(|&s| s == 1.0));
        assert_eq!(report.global_index, 1.0);
    }

    #[test]
    fn singleton_scores_zero() {
        let labels = [1, 2, 2];
        let xs = [0.0f64, 5.0, 6.0];
        assert_eq!(silhouette_item(0, &labels, |i, j| (xs[i] - xs[j]).abs()).unwrap(), 0.0);
    }

    #[test]
    fn one_class_is_undefined() {
        let err = silhouette_item(0, &[3, 3], |_, _| 1.0).unwrap_err();
        assert!(matches!(err, Error::EvaluationUndefined(_)));
    }

    #[test]
    fn missing_band_is_reported() {
        let data = four_points();
        let bands = BandSet::uniform(&[1], &RkBand::zeros(2)).unwrap();
        assert!(matches!(evaluate(&data, &bands), Err(Error::MissingBand(2))));
    }

    #[test]
    fn evaluator_matches_fresh_evaluation() {
        let items = (0..9)
            .map(|k| {
                let v = (0..8).map(|t| ((t * (k + 1)) as f64 * 0.37).sin() + k as f64 * 0.1).collect();
                (TimeSeries::new(v).unwrap(), (k % 3) as Label)
            })
            .collect();
        let data = LabeledDataset::new(items).unwrap();
        let start = BandSet::uniform(data.labels(), &RkBand::zeros(8)).unwrap();
        let mut ev = Evaluator::new(&data, start).unwrap();
        let wider = RkBand::new(vec![2, 3, 1, 0, 4, 2, 0, 1]).unwrap();
        let prop = ev.propose(1, wider.clone()).unwrap();
        let expected_bands = ev.bands().with_band(1, wider).unwrap();
        let expected = evaluate(&data, &expected_bands).unwrap();
        assert_eq!(prop.score, expected);
        ev.commit(prop).unwrap();
        assert_eq!(ev.score(), expected);
        assert_eq!(ev.bands(), &expected_bands);
    }
}
