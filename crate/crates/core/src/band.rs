//! Global warping constraints.
//!
//! An [`RkBand`] stores one width `r[i]` per diagonal index. Cell `(i, j)` of
//! the alignment matrix is inside the band when it lies above the diagonal
//! within `r[i]` columns, or below it within `r[j]` rows, so the allowed
//! region is symmetric and always contains the diagonal. All indices here are
//! 0-based.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Label;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RkBand {
    widths: Vec<usize>,
}

/// Direction of a segment adjustment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjustment {
    Grow,
    Shrink,
}

impl Adjustment {
    pub fn opposite(self) -> Self {
        match self {
            Adjustment::Grow => Adjustment::Shrink,
            Adjustment::Shrink => Adjustment::Grow,
        }
    }
}

impl RkBand {
    pub fn new(widths: Vec<usize>) -> Result<Self> {
        let n = widths.len();
        if n == 0 {
            return Err(Error::InvalidBand("band has no widths".into()));
        }
        if let Some(i) = widths.iter().position(|&r| r > n) {
            return Err(Error::InvalidBand(format!(
                "width {} at index {i} exceeds length {n}",
                widths[i]
            )));
        }
        Ok(Self { widths })
    }

    /// The Euclidean band: only the diagonal is allowed.
    pub fn zeros(n: usize) -> Self {
        Self { widths: vec![0; n] }
    }

    /// The unconstrained band.
    pub fn full(n: usize) -> Self {
        Self { widths: vec![n; n] }
    }

    pub fn uniform(n: usize, width: usize) -> Self {
        Self {
            widths: vec![width.min(n); n],
        }
    }

    /// Sakoe-Chiba band whose width is `percent` of `n`, rounded half-up.
    pub fn sakoe_chiba(n: usize, percent: u32) -> Result<Self> {
        if percent > 100 {
            return Err(Error::InvalidBand(format!(
                "warping window {percent}% outside 0..=100"
            )));
        }
        Ok(Self::uniform(n, sakoe_chiba_width(n, percent)))
    }

    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths.is_empty()
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn width(&self, i: usize) -> usize {
        self.widths[i]
    }

    /// Unchecked membership test for hot loops.
    #[inline]
    pub fn allows(&self, i: usize, j: usize) -> bool {
        if j >= i {
            j - i <= self.widths[i]
        } else {
            i - j <= self.widths[j]
        }
    }

    pub fn cell_allowed(&self, i: usize, j: usize) -> Result<bool> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::Index(format!("cell ({i}, {j}) outside {n}x{n}")));
        }
        Ok(self.allows(i, j))
    }

    /// Column range `[lo, hi]` bounding the allowed cells of row `i`.
    /// Cells left of the diagonal inside the range may still be disallowed.
    pub fn row_span(&self, i: usize) -> (usize, usize) {
        let n = self.len();
        let hi = (i + self.widths[i]).min(n - 1);
        let lo = (0..i)
            .find(|&j| j + self.widths[j] >= i)
            .unwrap_or(i);
        (lo, hi)
    }

    /// Moves every width in `start..=end` one step in `direction`.
    ///
    /// The adjustment is all-or-nothing: if any width would leave `[0, bound]`
    /// the band is returned unchanged together with `false`.
    pub fn adjust_segment(
        &self,
        start: usize,
        end: usize,
        direction: Adjustment,
        bound: usize,
    ) -> Result<(RkBand, bool)> {
        if start > end || end >= self.len() {
            return Err(Error::Index(format!(
                "segment [{start}, {end}] invalid for length {}",
                self.len()
            )));
        }
        let bound = bound.min(self.len());
        let segment = &self.widths[start..=end];
        let blocked = match direction {
            Adjustment::Grow => segment.iter().any(|&r| r >= bound),
            Adjustment::Shrink => segment.contains(&0),
        };
        if blocked {
            return Ok((self.clone(), false));
        }
        let mut widths = self.widths.clone();
        for r in &mut widths[start..=end] {
            match direction {
                Adjustment::Grow => *r += 1,
                Adjustment::Shrink => *r -= 1,
            }
        }
        Ok((RkBand { widths }, true))
    }
}

/// `round(n * percent / 100)` with halves rounded up, clamped to `n`.
pub fn sakoe_chiba_width(n: usize, percent: u32) -> usize {
    ((n * percent as usize + 50) / 100).min(n)
}

/// One band per class, all of the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandSet {
    n: usize,
    bands: BTreeMap<Label, RkBand>,
}

#[derive(Serialize, Deserialize)]
struct BandSetFile {
    n: usize,
    bands: BTreeMap<Label, Vec<usize>>,
}

impl BandSet {
    pub fn new(bands: BTreeMap<Label, RkBand>) -> Result<Self> {
        let Some(first) = bands.values().next() else {
            return Err(Error::InvalidBand("band set is empty".into()));
        };
        let n = first.len();
        if let Some((label, band)) = bands.iter().find(|(_, b)| b.len() != n) {
            return Err(Error::InvalidBand(format!(
                "band for class {label} has length {}, expected {n}",
                band.len()
            )));
        }
        Ok(Self { n, bands })
    }

    /// The same band for every label.
    pub fn uniform(labels: &[Label], band: &RkBand) -> Result<Self> {
        Self::new(labels.iter().map(|&l| (l, band.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.bands.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &RkBand)> {
        self.bands.iter().map(|(l, b)| (*l, b))
    }

    pub fn get(&self, label: Label) -> Option<&RkBand> {
        self.bands.get(&label)
    }

    pub fn band(&self, label: Label) -> Result<&RkBand> {
        self.bands.get(&label).ok_or(Error::MissingBand(label))
    }

    /// Copy with the band of `label` replaced.
    pub fn with_band(&self, label: Label, band: RkBand) -> Result<Self> {
        if band.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: band.len(),
            });
        }
        let mut bands = self.bands.clone();
        bands.insert(label, band);
        Ok(Self { n: self.n, bands })
    }

    /// Checks that every label has a band of length `n`.
    pub fn check_covers(&self, labels: &[Label], n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::Dimension {
                expected: n,
                actual: self.n,
            });
        }
        for &label in labels {
            self.band(label)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = BandSetFile {
            n: self.n,
            bands: self
                .bands
                .iter()
                .map(|(l, b)| (*l, b.widths.clone()))
                .collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BandSetFile = serde_json::from_str(text)?;
        let bands = file
            .bands
            .into_iter()
            .map(|(l, w)| Ok((l, RkBand::new(w)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let set = Self::new(bands)?;
        if set.n != file.n {
            return Err(Error::InvalidBand(format!(
                "declared n = {} but bands have length {}",
                file.n, set.n
            )));
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}
