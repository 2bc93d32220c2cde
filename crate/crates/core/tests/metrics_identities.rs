mod common;

use common::*;
use imgql::metrics::{confusion, iboundary, ppm, MetricsRecord};
use imgql::{Adjacency, BoolImage, GridDims};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counts_and_indexes(seed in any::<u64>(), density in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = random_dims(&mut rng, 20);
        let x = random_mask(&mut rng, dims, density);
        let y = random_mask(&mut rng, dims, 0.5);
        let c = confusion(&x, &y).unwrap();
        prop_assert_eq!((c.tp, c.tn, c.fp, c.fn_), confusion_oracle(&x, &y));
        prop_assert_eq!(c.total() as usize, dims.len());
        let m = MetricsRecord::from(c);
        prop_assert!((m.jaccard - m.dice / (2.0 - m.dice)).abs() < 1e-12);
        for v in [m.dice, m.jaccard, m.sensitivity, m.specificity, m.accuracy] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert_eq!(MetricsRecord::compare(&x, &x).unwrap().dice, 1.0);
        if !x.is_all_false() && x.count() < dims.len() {
            prop_assert_eq!(MetricsRecord::compare(&x, &x.not()).unwrap().dice, 0.0);
        }
    }

    #[test]
    fn inner_boundary_by_neighbourhoods(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = random_dims(&mut rng, 12);
        let x = random_mask(&mut rng, dims, 0.7);
        for adj in [Adjacency::Orthogonal, Adjacency::Orthodiagonal] {
            let inner = BoolImage::from_fn(dims, |px, py| {
                x.get(px, py) && neighbours(dims, adj, px, py).iter().all(|&(nx, ny)| x.get(nx, ny))
            });
            let want = BoolImage::from_fn(dims, |px, py| {
                !inner.get(px, py)
                    && (neighbours(dims, adj, px, py).iter().any(|&(nx, ny)| inner.get(nx, ny)))
            });
            prop_assert_eq!(iboundary(&x, adj), want);
        }
    }
}

#[test]
fn square_block_compactness() {
    let dims = GridDims::new(16, 16).unwrap();
    let block = BoolImage::from_fn(dims, |x, y| (3..13).contains(&x) && (3..13).contains(&y));
    let adj = Adjacency::Orthodiagonal;
    assert_eq!(iboundary(&block, adj).count(), 36);
    assert!((ppm(&block, adj) - 1256.0 / 1296.0).abs() < 1e-12);
}
