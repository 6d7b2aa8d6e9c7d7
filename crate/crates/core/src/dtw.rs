//! Band-constrained dynamic time warping.
//!
//! Local cost is the squared difference `(q[i] - c[j])²`; the cumulative cost
//! is accumulated over the band and the square root is taken once at the end.

use crate::band::RkBand;
use crate::error::{Error, Result};

/// Column span `[lo, hi]` of every row of `band`, in O(n).
pub(crate) fn row_spans(band: &RkBand) -> Vec<(usize, usize)> {
    let n = band.len();
    let widths = band.widths();
    let mut lo = 0;
    (0..n)
        .map(|i| {
            // rows reachable from column `lo` only shrink as `i` grows
            while lo < i && lo + widths[lo] < i {
                lo += 1;
            }
            (lo, (i + widths[i]).min(n - 1))
        })
        .collect()
}

fn check_lengths(q: &[f64], c: &[f64], band: &RkBand) -> Result<()> {
    let n = band.len();
    for len in [q.len(), c.len()] {
        if len != n {
            return Err(Error::Dimension {
                expected: n,
                actual: len,
            });
        }
    }
    Ok(())
}

/// Squared DTW cost using two rolling rows. `spans` must come from [`row_spans`].
pub(crate) fn dtw_squared(q: &[f64], c: &[f64], band: &RkBand, spans: &[(usize, usize)]) -> f64 {
    let n = q.len();
    let mut prev = vec![f64::INFINITY; n];
    let mut cur = vec![f64::INFINITY; n];
    let mut prev_span = (1, 0); // empty

    for (i, &(lo, hi)) in spans.iter().enumerate() {
        let qi = q[i];
        for j in lo..=hi {
            if !band.allows(i, j) {
                cur[j] = f64::INFINITY;
                continue;
            }
            let d = (qi - c[j]) * (qi - c[j]);
            if i == 0 && j == 0 {
                cur[j] = d;
                continue;
            }
            let in_prev = |k: usize| k >= prev_span.0 && k <= prev_span.1;
            let mut best = f64::INFINITY;
            if j > 0 && in_prev(j - 1) {
                best = prev[j - 1];
            }
            if in_prev(j) {
                best = best.min(prev[j]);
            }
            if j > lo {
                best = best.min(cur[j - 1]);
            }
            cur[j] = d + best;
        }
        std::mem::swap(&mut prev, &mut cur);
        prev_span = (lo, hi);
    }
    prev[n - 1]
}

/// DTW distance between `q` and `c` restricted to the cells of `band`.
pub fn dtw_distance(q: &[f64], c: &[f64], band: &RkBand) -> Result<f64> {
    check_lengths(q, c, band)?;
    Ok(dtw_squared(q, c, band, &row_spans(band)).sqrt())
}

/// Plain Euclidean distance.
pub fn euclidean(q: &[f64], c: &[f64]) -> Result<f64> {
    if q.len() != c.len() {
        return Err(Error::Dimension {
            expected: q.len(),
            actual: c.len(),
        });
    }
    Ok(q.iter()
        .zip(c)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Full cumulative-cost grid; disallowed cells hold `+inf`.
#[derive(Clone, Debug)]
pub struct CostMatrix {
    n: usize,
    gamma: Vec<f64>,
}

impl CostMatrix {
    pub fn new(q: &[f64], c: &[f64], band: &RkBand) -> Result<Self> {
        check_lengths(q, c, band)?;
        let n = q.len();
        let mut gamma = vec![f64::INFINITY; n * n];
        for (i, (lo, hi)) in row_spans(band).into_iter().enumerate() {
            for j in lo..=hi {
                if !band.allows(i, j) {
                    continue;
                }
                let d = (q[i] - c[j]) * (q[i] - c[j]);
                let best = if i == 0 && j == 0 {
                    0.0
                } else {
                    let mut best = f64::INFINITY;
                    if i > 0 && j > 0 {
                        best = gamma[(i - 1) * n + j - 1];
                    }
                    if i > 0 {
                        best = best.min(gamma[(i - 1) * n + j]);
                    }
                    if j > 0 {
                        best = best.min(gamma[i * n + j - 1]);
                    }
                    best
                };
                gamma[i * n + j] = d + best;
            }
        }
        Ok(Self { n, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.gamma[i * self.n + j]
    }

    /// Rooted cost of the optimal path.
    pub fn distance(&self) -> f64 {
        self.get(self.n - 1, self.n - 1).sqrt()
    }

    /// Backtracks from the last cell, preferring the diagonal predecessor,
    /// then the left one, then the one below on ties.
    pub fn backtrack(&self) -> WarpingPath {
        let (mut i, mut j) = (self.n - 1, self.n - 1);
        let mut cells = vec![(i, j)];
        while (i, j) != (0, 0) {
            let mut step = None;
            let mut best = f64::INFINITY;
            let candidates = [
                (i > 0 && j > 0).then(|| (i - 1, j - 1)),
                (j > 0).then(|| (i, j - 1)),
                (i > 0).then(|| (i - 1, j)),
            ];
            for (a, b) in candidates.into_iter().flatten() {
                let g = self.get(a, b);
                if step.is_none() || g < best {
                    best = g;
                    step = Some((a, b));
                }
            }
            (i, j) = step.expect("at least one predecessor exists off the origin");
            cells.push((i, j));
        }
        cells.reverse();
        WarpingPath { cells }
    }
}

/// Monotone, continuous alignment from `(0, 0)` to `(n-1, n-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarpingPath {
    cells: Vec<(usize, usize)>,
}

impl WarpingPath {
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Squared cost of aligning `q` to `c` along this path.
    pub fn cost(&self, q: &[f64], c: &[f64]) -> f64 {
        self.cells
            .iter()
            .map(|&(i, j)| (q[i] - c[j]) * (q[i] - c[j]))
            .sum()
    }

    /// Whether consecutive cells only use (+1,0), (0,+1) or (+1,+1) steps.
    pub fn is_continuous(&self) -> bool {
        self.cells.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            matches!((b.0 - a.0, b.1 - a.1), (1, 0) | (0, 1) | (1, 1))
        })
    }
}

pub fn dtw_path(q: &[f64], c: &[f64], band: &RkBand) -> Result<WarpingPath> {
    Ok(CostMatrix::new(q, c, band)?.backtrack())
}

/// Upper and lower envelope of a candidate series under a band.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl Envelope {
    pub fn new(c: &[f64], band: &RkBand) -> Result<Self> {
        if c.len() != band.len() {
            return Err(Error::Dimension {
                expected: band.len(),
                actual: c.len(),
            });
        }
        let mut upper = Vec::with_capacity(c.len());
        let mut lower = Vec::with_capacity(c.len());
        for (i, (lo, hi)) in row_spans(band).into_iter().enumerate() {
            let (mut u, mut l) = (f64::NEG_INFINITY, f64::INFINITY);
            for (j, &v) in c.iter().enumerate().take(hi + 1).skip(lo) {
                if band.allows(i, j) {
                    u = u.max(v);
                    l = l.min(v);
                }
            }
            upper.push(u);
            lower.push(l);
        }
        Ok(Self { upper, lower })
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// LB_Keogh of `q` against this envelope.
    pub fn lower_bound(&self, q: &[f64]) -> Result<f64> {
        if q.len() != self.upper.len() {
            return Err(Error::Dimension {
                expected: self.upper.len(),
                actual: q.len(),
            });
        }
        let sum: f64 = q
            .iter()
            .zip(self.upper.iter().zip(&self.lower))
            .map(|(&v, (&u, &l))| {
                if v > u {
                    (v - u) * (v - u)
                } else if v < l {
                    (v - l) * (v - l)
                } else {
                    0.0
                }
            })
            .sum();
        Ok(sum.sqrt())
    }
}

/// LB_Keogh lower bound of `dtw_distance(q, c, band)`.
pub fn lb_keogh(q: &[f64], c: &[f64], band: &RkBand) -> Result<f64> {
    check_lengths(q, c, band)?;
    Envelope::new(c, band)?.lower_bound(q)
}
