//! Overlap indexes between a predicted mask and a ground-truth mask, and
//! the Polsby-Popper compactness of a region.
//!
//! Vacuous denominators (nothing to agree on) score 1. A region without an
//! internal boundary has compactness 0.

use crate::error::Result;
use crate::grid::{Adjacency, BoolImage};
use crate::spatial::{closure, interior};

/// π as used by the compactness measure; thresholds were tuned with it.
#[allow(clippy::approx_constant)]
pub const PPM_PI: f64 = 3.14;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn dice(&self) -> f64 {
        ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }

    pub fn jaccard(&self) -> f64 {
        let d = self.dice();
        d / (2.0 - d)
    }

    pub fn sensitivity(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn specificity(&self) -> f64 {
        ratio(self.tn, self.tn + self.fp)
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// `pred` against `truth`.
pub fn confusion(pred: &BoolImage, truth: &BoolImage) -> Result<Confusion> {
    pred.dims().check(&truth.dims())?;
    let mut c = Confusion::default();
    for (&p, &t) in pred.bits().iter().zip(truth.bits()) {
        match (p, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Confusion counts with the five derived indexes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsRecord {
    pub counts: Confusion,
    pub dice: f64,
    pub jaccard: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
}

impl From<Confusion> for MetricsRecord {
    fn from(c: Confusion) -> Self {
        Self {
            counts: c,
            dice: c.dice(),
            jaccard: c.jaccard(),
            sensitivity: c.sensitivity(),
            specificity: c.specificity(),
            accuracy: c.accuracy(),
        }
    }
}

impl MetricsRecord {
    pub fn compare(pred: &BoolImage, truth: &BoolImage) -> Result<Self> {
        Ok(confusion(pred, truth)?.into())
    }
}

pub fn dice(x: &BoolImage, y: &BoolImage) -> Result<f64> {
    Ok(confusion(x, y)?.dice())
}

pub fn jaccard(x: &BoolImage, y: &BoolImage) -> Result<f64> {
    Ok(confusion(x, y)?.jaccard())
}

pub fn sensitivity(x: &BoolImage, y: &BoolImage) -> Result<f64> {
    Ok(confusion(x, y)?.sensitivity())
}

pub fn specificity(x: &BoolImage, y: &BoolImage) -> Result<f64> {
    Ok(confusion(x, y)?.specificity())
}

pub fn accuracy(x: &BoolImage, y: &BoolImage) -> Result<f64> {
    Ok(confusion(x, y)?.accuracy())
}

/// Inner boundary: `near(interior(x)) ∧ ¬interior(x)`.
pub fn iboundary(x: &BoolImage, adj: Adjacency) -> BoolImage {
    let inner = interior(x, adj);
    closure(&inner, adj)
        .and_not(&inner)
        .expect("same dims")
}

/// Polsby-Popper compactness `4πA / P²`, with `P` the inner boundary size.
pub fn ppm(x: &BoolImage, adj: Adjacency) -> f64 {
    let perimeter = iboundary(x, adj).volume();
    if perimeter == 0.0 {
        return 0.0;
    }
    (x.volume() * 4.0 * PPM_PI) / (perimeter * perimeter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDims;
    use proptest::prelude::*;

    fn dims(w: usize, h: usize) -> GridDims {
        GridDims::new(w, h).unwrap()
    }

    #[test]
    fn hand_counted_two_by_two() {
        let d = dims(2, 2);
        let pred = BoolImage::from_fn(d, |x, _| x == 0);
        let truth = BoolImage::from_fn(d, |_, y| y == 1);
        let c = confusion(&pred, &truth).unwrap();
        assert_eq!(c, Confusion { tp: 1, tn: 1, fp: 1, fn_: 1 });
        let m = MetricsRecord::from(c);
        assert_eq!(m.dice, 0.5);
        assert!((m.jaccard - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!((m.sensitivity, m.specificity, m.accuracy), (0.5, 0.5, 0.5));
    }

    #[test]
    fn identical_and_complementary() {
        let d = dims(4, 4);
        let x = BoolImage::from_fn(d, |x, y| x < 2 && y < 3);
        let c = confusion(&x, &x).unwrap();
        assert_eq!((c.fp, c.fn_), (0, 0));
        let m = MetricsRecord::from(c);
        assert_eq!((m.dice, m.sensitivity, m.specificity, m.accuracy), (1.0, 1.0, 1.0, 1.0));
        let c = confusion(&x, &x.not()).unwrap();
        assert_eq!((c.tp, c.tn), (0, 0));
        assert_eq!(c.dice(), 0.0);
    }

    #[test]
    fn vacuous_agreement() {
        let none = BoolImage::filled(dims(3, 3), false);
        assert_eq!(dice(&none, &none).unwrap(), 1.0);
        assert_eq!(jaccard(&none, &none).unwrap(), 1.0);
        assert_eq!(sensitivity(&none, &none).unwrap(), 1.0);
    }

    fn block(size: usize, margin: usize) -> BoolImage {
        let n = size + 2 * margin;
        BoolImage::from_fn(dims(n, n), |x, y| {
            (margin..margin + size).contains(&x) && (margin..margin + size).contains(&y)
        })
    }

    #[test]
    fn block_boundary_and_compactness() {
        let b = block(10, 3);
        assert_eq!(iboundary(&b, Adjacency::Orthodiagonal).volume(), 36.0);
        let p = ppm(&b, Adjacency::Orthodiagonal);
        assert!((p - 1256.0 / 1296.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_shapes() {
        let full = BoolImage::filled(dims(5, 5), true);
        assert!(iboundary(&full, Adjacency::Orthodiagonal).is_all_false());
        let mut single = BoolImage::filled(dims(5, 5), false);
        single.set(2, 2, true);
        assert!(iboundary(&single, Adjacency::Orthodiagonal).is_all_false());
        assert_eq!(ppm(&BoolImage::filled(dims(5, 5), false), Adjacency::Orthodiagonal), 0.0);
        let line = BoolImage::from_fn(dims(22, 3), |x, y| y == 1 && (1..21).contains(&x));
        assert_eq!(ppm(&line, Adjacency::Orthodiagonal), 0.0);
    }

    fn pair() -> impl Strategy<Value = (BoolImage, BoolImage)> {
        (1usize..10, 1usize..10).prop_flat_map(|(w, h)| {
            (
                proptest::collection::vec(any::<bool>(), w * h),
                proptest::collection::vec(any::<bool>(), w * h),
            )
                .prop_map(move |(a, b)| {
                    let d = GridDims::new(w, h).unwrap();
                    (BoolImage::new(d, a).unwrap(), BoolImage::new(d, b).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn index_properties((x, y) in pair()) {
            let m = MetricsRecord::compare(&x, &y).unwrap();
            let n = MetricsRecord::compare(&y, &x).unwrap();
            prop_assert_eq!(m.dice, n.dice);
            prop_assert_eq!(m.jaccard, n.jaccard);
            prop_assert!((m.jaccard - m.dice / (2.0 - m.dice)).abs() < 1e-12);
            prop_assert_eq!(m.counts.total() as usize, x.dims().len());
            let c = m.counts;
            prop_assert_eq!(m.accuracy, (c.tp + c.tn) as f64 / c.total() as f64);
            for v in [m.dice, m.jaccard, m.sensitivity, m.specificity, m.accuracy] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
