//! First-order texture similarity.
//!
//! A voxel's neighbourhood histogram is compared with the histogram of a
//! sample region by Pearson correlation. The map is built row by row: the
//! window histogram is seeded at the start of each row, then slid one
//! column at a time by removing the leaving column and adding the entering
//! one. Rows are independent, so they run in parallel without affecting
//! results.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{BoolImage, ScalarImage};

/// Bin layout shared by both histograms of a comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Binning {
    min: f64,
    max: f64,
    bins: usize,
    width: f64,
}

impl Binning {
    pub fn new(min: f64, max: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidArgument("histogram needs at least one bin".into()));
        }
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::InvalidArgument(format!(
                "histogram range must satisfy min < max, got [{min}, {max}]"
            )));
        }
        let width = (max - min) / bins as f64;
        if width.is_nan() || width <= 0.0 {
            return Err(Error::InvalidArgument("histogram bin width underflows".into()));
        }
        Ok(Self {
            min,
            max,
            bins,
            width,
        })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// Zero-based bin of `v`: the `i` with `iΔ ≤ v − min < (i+1)Δ`. The
    /// maximum itself falls into the last bin; anything outside the range
    /// has no bin.
    #[inline]
    pub fn bin_of(&self, v: f64) -> Option<usize> {
        if !(v >= self.min && v <= self.max) {
            return None;
        }
        let offset = v - self.min;
        let last = self.bins - 1;
        let mut i = ((offset / self.width) as usize).min(last);
        // settle rounding at bin edges against the defining inequality
        while i > 0 && (i as f64) * self.width > offset {
            i -= 1;
        }
        while i < last && ((i + 1) as f64) * self.width <= offset {
            i += 1;
        }
        Some(i)
    }
}

/// Counts of values per bin over some region.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    binning: Binning,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn empty(binning: Binning) -> Self {
        Self {
            binning,
            counts: vec![0; binning.bins],
        }
    }

    pub fn from_counts(binning: Binning, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != binning.bins {
            return Err(Error::InvalidArgument(format!(
                "expected {} counts, got {}",
                binning.bins,
                counts.len()
            )));
        }
        Ok(Self { binning, counts })
    }

    pub fn binning(&self) -> Binning {
        self.binning
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        if let Some(i) = self.binning.bin_of(v) {
            self.counts[i] += 1;
        }
    }

    #[inline]
    pub fn remove(&mut self, v: f64) {
        if let Some(i) = self.binning.bin_of(v) {
            self.counts[i] -= 1;
        }
    }

    pub fn mean(&self) -> f64 {
        hist_mean(&self.counts)
    }

    pub fn is_constant(&self) -> bool {
        is_constant(&self.counts)
    }
}

fn hist_mean(counts: &[u64]) -> f64 {
    counts.iter().map(|&c| c as f64).sum::<f64>() / counts.len() as f64
}

fn is_constant(counts: &[u64]) -> bool {
    counts.windows(2).all(|w| w[0] == w[1])
}

/// Histogram of `a` over the voxels where `mask` is true.
pub fn region_histogram(a: &ScalarImage, mask: &BoolImage, binning: Binning) -> Result<Histogram> {
    a.dims().check(&mask.dims())?;
    let mut h = Histogram::empty(binning);
    for (&v, &m) in a.values().iter().zip(mask.bits()) {
        if m {
            h.add(v);
        }
    }
    Ok(h)
}

/// Pearson correlation of two histograms with the same bin count. Both
/// constant gives 1, exactly one constant gives 0.
pub fn pearson(h1: &Histogram, h2: &Histogram) -> Result<f64> {
    if h1.counts.len() != h2.counts.len() {
        return Err(Error::InvalidArgument(format!(
            "bin count mismatch: {} vs {}",
            h1.counts.len(),
            h2.counts.len()
        )));
    }
    Ok(Reference::new(&h2.counts).correlate(&h1.counts))
}

/// Moments of a fixed histogram, correlated against many others.
///
/// Sums are kept as exact integers, so the special cases (a constant
/// histogram, perfect correlation) are decided without rounding.
struct Reference {
    counts: Vec<i128>,
    sum: i128,
    /// `k Σb² − (Σb)²`, which is zero iff the histogram is constant.
    spread: i128,
}

impl Reference {
    fn new(counts: &[u64]) -> Self {
        let counts: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        let k = counts.len() as i128;
        let sum: i128 = counts.iter().sum();
        let sq: i128 = counts.iter().map(|c| c * c).sum();
        Self {
            counts,
            sum,
            spread: k * sq - sum * sum,
        }
    }

    #[inline]
    fn correlate(&self, counts: &[u64]) -> f64 {
        let k = counts.len() as i128;
        let (mut sum, mut sq, mut cross) = (0i128, 0i128, 0i128);
        for (&a, &b) in counts.iter().zip(&self.counts) {
            let a = a as i128;
            sum += a;
            sq += a * a;
            cross += a * b;
        }
        let spread = k * sq - sum * sum;
        match (spread == 0, self.spread == 0) {
            (true, true) => return 1.0,
            (true, false) | (false, true) => return 0.0,
            _ => {}
        }
        let num = k * cross - sum * self.sum;
        if num
            .checked_mul(num)
            .zip(spread.checked_mul(self.spread))
            .is_some_and(|(n2, d2)| n2 == d2)
        {
            return num.signum() as f64;
        }
        let r = num as f64 / ((spread as f64).sqrt() * (self.spread as f64).sqrt());
        r.clamp(-1.0, 1.0)
    }
}

/// Square neighbourhood of half-width `floor(radius)` around each voxel,
/// clipped to the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec {
    radius: f64,
}

impl WindowSpec {
    pub fn new(radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "window radius must be finite and non-negative, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn half_width(&self) -> usize {
        self.radius.floor() as usize
    }
}

/// Which algorithm computes the correlation map. Both give identical maps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TextureMode {
    /// Incremental column updates along each row.
    #[default]
    Sliding,
    /// A fresh window histogram for every voxel.
    Naive,
}

/// Per-voxel correlation between the histogram of `a` in the window around
/// the voxel and the histogram of `b` over `region`.
pub fn cross_correlation_map(
    window: WindowSpec,
    a: &ScalarImage,
    b: &ScalarImage,
    region: &BoolImage,
    binning: Binning,
    mode: TextureMode,
) -> Result<ScalarImage> {
    a.dims().check(&b.dims())?;
    a.dims().check(&region.dims())?;
    let reference = Reference::new(region_histogram(b, region, binning)?.counts());
    let dims = a.dims();
    let (w, h) = (dims.width(), dims.height());
    let half = window.half_width();
    let values = a.values();
    let mut out = vec![0.0; dims.len()];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let y0 = y.saturating_sub(half);
        let y1 = (y + half).min(h - 1);
        let mut hist = Histogram::empty(binning);
        match mode {
            TextureMode::Naive => {
                for (x, slot) in row.iter_mut().enumerate() {
                    hist.counts.iter_mut().for_each(|c| *c = 0);
                    let x0 = x.saturating_sub(half);
                    let x1 = (x + half).min(w - 1);
                    for yy in y0..=y1 {
                        for &v in &values[yy * w + x0..=yy * w + x1] {
                            hist.add(v);
                        }
                    }
                    *slot = reference.correlate(&hist.counts);
                }
            }
            TextureMode::Sliding => {
                for yy in y0..=y1 {
                    for &v in &values[yy * w..=yy * w + half.min(w - 1)] {
                        hist.add(v);
                    }
                }
                row[0] = reference.correlate(&hist.counts);
                #[allow(clippy::needless_range_loop)]
                for x in 1..w {
                    if x > half {
                        let leaving = x - half - 1;
                        for yy in y0..=y1 {
                            hist.remove(values[yy * w + leaving]);
                        }
                    }
                    let entering = x + half;
                    if entering < w {
                        for yy in y0..=y1 {
                            hist.add(values[yy * w + entering]);
                        }
                    }
                    row[x] = reference.correlate(&hist.counts);
                }
            }
        }
    });
    Ok(ScalarImage::from_vec_unchecked(dims, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDims;

    fn binning(m: f64, big_m: f64, k: usize) -> Binning {
        Binning::new(m, big_m, k).unwrap()
    }

    fn hist(counts: &[u64]) -> Histogram {
        Histogram::from_counts(binning(0.0, 1.0, counts.len()), counts.to_vec()).unwrap()
    }

    #[test]
    fn region_histogram_top_edge_rule() {
        let d = GridDims::new(3, 1).unwrap();
        let a = ScalarImage::new(d, vec![0.0, 0.5, 1.0]).unwrap();
        let all = BoolImage::filled(d, true);
        let h = region_histogram(&a, &all, binning(0.0, 1.0, 2)).unwrap();
        assert_eq!(h.counts(), &[1, 2]);
        let none = BoolImage::filled(d, false);
        let h = region_histogram(&a, &none, binning(0.0, 1.0, 2)).unwrap();
        assert_eq!(h.counts(), &[0, 0]);
    }

    #[test]
    fn constant_image_fills_first_bin() {
        let d = GridDims::new(4, 2).unwrap();
        let a = ScalarImage::filled(d, 3.0);
        let all = BoolImage::filled(d, true);
        let h = region_histogram(&a, &all, binning(3.0, 9.0, 4)).unwrap();
        assert_eq!(h.counts(), &[8, 0, 0, 0]);
    }

    #[test]
    fn out_of_range_values_are_dropped() {
        let b = binning(0.0, 10.0, 5);
        assert_eq!(b.bin_of(-0.1), None);
        assert_eq!(b.bin_of(10.1), None);
        assert_eq!(b.bin_of(f64::INFINITY), None);
        assert_eq!(b.bin_of(2.0), Some(1));
        assert_eq!(b.bin_of(10.0), Some(4));
    }

    #[test]
    fn binning_rejects_bad_ranges() {
        assert!(Binning::new(1.0, 1.0, 3).is_err());
        assert!(Binning::new(2.0, 1.0, 3).is_err());
        assert!(Binning::new(0.0, 1.0, 0).is_err());
        assert!(Binning::new(0.0, f64::INFINITY, 3).is_err());
    }

    #[test]
    fn histogram_means() {
        assert_eq!(hist(&[1, 2, 3]).mean(), 2.0);
        assert_eq!(hist(&[0, 0, 0]).mean(), 0.0);
        assert_eq!(hist(&[5]).mean(), 5.0);
    }

    #[test]
    fn pearson_special_cases() {
        let h = hist(&[1, 4, 2, 7]);
        assert!((pearson(&h, &h).unwrap() - 1.0).abs() < 1e-15);
        let up = hist(&[5, 11, 7, 17]); // 2h + 3
        assert!((pearson(&h, &up).unwrap() - 1.0).abs() < 1e-12);
        let down = hist(&[20, 11, 17, 2]); // 23 - 3h
        assert!((pearson(&h, &down).unwrap() + 1.0).abs() < 1e-12);
        let flat = hist(&[3, 3, 3, 3]);
        assert_eq!(pearson(&flat, &hist(&[0, 0, 0, 0])).unwrap(), 1.0);
        assert_eq!(pearson(&flat, &h).unwrap(), 0.0);
        assert_eq!(pearson(&h, &flat).unwrap(), 0.0);
        assert!(pearson(&h, &hist(&[1, 2])).is_err());
    }

    #[test]
    fn constant_image_map_is_one() {
        let d = GridDims::new(7, 5).unwrap();
        let a = ScalarImage::filled(d, 2.0);
        let region = BoolImage::from_fn(d, |x, _| x < 3);
        let window = WindowSpec::new(2.0).unwrap();
        for mode in [TextureMode::Sliding, TextureMode::Naive] {
            let map =
                cross_correlation_map(window, &a, &a, &region, binning(0.0, 4.0, 3), mode).unwrap();
            assert!(map.values().iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn empty_region_gives_zero_or_one() {
        let d = GridDims::new(6, 6).unwrap();
        let a = ScalarImage::from_fn(d, |x, _| if x < 3 { 0.0 } else { 3.0 });
        let region = BoolImage::filled(d, false);
        let window = WindowSpec::new(1.0).unwrap();
        let bins = binning(0.0, 4.0, 4);
        let map = cross_correlation_map(window, &a, &a, &region, bins, TextureMode::Sliding).unwrap();
        // every window holds at least one value, so no window histogram is all-equal
        assert!(map.values().iter().all(|&v| v == 0.0));
        let single = binning(0.0, 4.0, 1);
        let map =
            cross_correlation_map(window, &a, &a, &region, single, TextureMode::Sliding).unwrap();
        assert!(map.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn window_radius_validation() {
        assert!(WindowSpec::new(-1.0).is_err());
        assert_eq!(WindowSpec::new(4.99).unwrap().half_width(), 4);
    }
}
