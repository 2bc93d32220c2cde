//! Overlap indexes and compactness of two masks.

use imgql::metrics::{iboundary, ppm, MetricsRecord};
use imgql::{Adjacency, BoolImage, GridDims};

fn main() -> imgql::Result<()> {
    let dims = GridDims::new(40, 40)?;
    let disk = |cx: f64, cy: f64, r: f64| {
        BoolImage::from_fn(dims, move |x, y| (x as f64 - cx).hypot(y as f64 - cy) <= r)
    };
    let truth = disk(20.0, 20.0, 12.0);
    let pred = disk(22.0, 20.0, 11.0);
    let m = MetricsRecord::compare(&pred, &truth)?;
    println!("{:?}", m.counts);
    println!(
        "dice {:.4}  jaccard {:.4}  sensitivity {:.4}  specificity {:.4}  accuracy {:.4}",
        m.dice, m.jaccard, m.sensitivity, m.specificity, m.accuracy
    );

    let adj = Adjacency::Orthodiagonal;
    let bar = BoolImage::from_fn(dims, |x, y| (5..35).contains(&x) && (18..22).contains(&y));
    for (name, shape) in [("disk", &truth), ("bar", &bar)] {
        println!(
            "{name}: area {}, inner boundary {}, ppM {:.3}",
            shape.count(),
            iboundary(shape, adj).count(),
            ppm(shape, adj)
        );
    }
    Ok(())
}
