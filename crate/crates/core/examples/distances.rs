//! City-block distances, distance predicates and smoothing.

use imgql::spatial::{dist_predicate, distance_transform, maxvol, smoothen, Comparator, DistInterval};
use imgql::{Adjacency, BoolImage, GridDims};

fn main() -> imgql::Result<()> {
    let dims = GridDims::new(24, 12)?;
    // a blob with a one-voxel spur and a detached speck
    let shape = BoolImage::from_fn(dims, |x, y| {
        let blob = x.abs_diff(8) + y.abs_diff(6) <= 4;
        let spur = y == 6 && (12..18).contains(&x);
        let speck = x == 21 && y == 2;
        blob || spur || speck
    });
    println!("shape:\n{shape:?}");

    let dt = distance_transform(&shape);
    for y in 0..dims.height() {
        let row: String = (0..dims.width())
            .map(|x| match dt.get(x, y) {
                d if d < 10.0 => char::from(b'0' + d as u8),
                _ => '+',
            })
            .collect();
        println!("{row}");
    }

    let near = dist_predicate(&shape, DistInterval::new(Comparator::Leq, 2.0)?);
    println!("within 2 of shape:\n{near:?}");
    println!("smoothen(2) drops the spur and the speck:\n{:?}", smoothen(2.0, &shape)?);
    println!("maxvol keeps the largest component:\n{:?}", maxvol(&shape, Adjacency::Orthodiagonal));
    Ok(())
}
