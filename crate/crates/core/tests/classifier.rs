mod common;

use std::collections::BTreeMap;

use common::*;
use rkband::classifier::NearestNeighbor;
use rkband::synthetic::random_walks;
use rkband::{dtw_distance, loo_accuracy, BandSet, RkBand};

fn random_bandset(rng: &mut rand_chacha::ChaCha8Rng, labels: &[i64], n: usize) -> BandSet {
    let bands: BTreeMap<_, _> = labels.iter().map(|&l| (l, random_band(rng, n))).collect();
    BandSet::new(bands).unwrap()
}

#[test]
fn pruned_search_matches_exhaustive() {
    let mut rng = rng(20);
    let train = random_walks(60, 24, 4, 1).unwrap();
    let bands = random_bandset(&mut rng, train.labels(), 24);
    let nn = NearestNeighbor::new(train, bands).unwrap();
    let queries = random_walks(200, 24, 4, 2).unwrap();
    let mut exact_total = 0;
    for (q, _) in queries.items() {
        let pruned = nn.nearest(q, None).unwrap();
        let full = nn.nearest_exhaustive(q, None).unwrap();
        assert_eq!(pruned.index, full.index);
        assert_eq!(pruned.label, full.label);
        assert_eq!(pruned.distance, full.distance);
        exact_total += pruned.exact;
    }
    assert!(exact_total < 200 * 60, "lower bound never pruned");
}

#[test]
fn skipped_candidates_are_never_better() {
    let mut rng = rng(21);
    let train = random_walks(40, 20, 3, 3).unwrap();
    let bands = random_bandset(&mut rng, train.labels(), 20);
    let nn = NearestNeighbor::new(train.clone(), bands.clone()).unwrap();
    let queries = random_walks(100, 20, 3, 4).unwrap();
    for (q, _) in queries.items() {
        let hit = nn.nearest(q, None).unwrap();
        assert_eq!(hit.exact + hit.pruned.len(), train.len());
        for &(idx, lb) in &hit.pruned {
            let band = bands.band(train.label(idx)).unwrap();
            let d = dtw_distance(q, train.series(idx), band).unwrap();
            assert!(lb > hit.distance);
            assert!(d >= hit.distance, "skipped {idx} at {d} < {}", hit.distance);
        }
    }
}

#[test]
fn zero_band_loo_is_euclidean_loo() {
    let data = random_walks(30, 16, 3, 5).unwrap();
    let zero = BandSet::uniform(data.labels(), &RkBand::zeros(16)).unwrap();
    let mut correct = 0;
    for i in 0..data.len() {
        let mut best = (f64::INFINITY, 0);
        for j in (0..data.len()).filter(|&j| j != i) {
            let d = euclid(data.series(i), data.series(j));
            if d < best.0 {
                best = (d, j);
            }
        }
        if data.label(best.1) == data.label(i) {
            correct += 1;
        }
    }
    let expected = correct as f64 / data.len() as f64;
    assert_eq!(loo_accuracy(&data, &zero).unwrap(), expected);
}

#[test]
fn band_set_must_cover_training_classes() {
    let data = random_walks(10, 8, 3, 6).unwrap();
    let partial = BandSet::uniform(&[1, 2], &RkBand::zeros(8)).unwrap();
    assert!(NearestNeighbor::new(data.clone(), partial).is_err());
    let short = BandSet::uniform(data.labels(), &RkBand::zeros(7)).unwrap();
    assert!(NearestNeighbor::new(data, short).is_err());
}
