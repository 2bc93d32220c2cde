//! The reachability family on a hand-drawn scene.
//!
//! `#` is the region under test; the scene is printed after each operator.

use imgql::spatial::{closure, connected_components, grow, interior, surrounded, touch};
use imgql::{Adjacency, BoolImage, GridDims};

const SCENE: &[&str] = &[
    "..........",
    ".rrrrr....",
    ".rbbbr..b.",
    ".rbbbr....",
    ".rrrrr.bb.",
    ".......bb.",
    "..rr......",
    "..rrbb....",
];

fn layer(c: char) -> imgql::Result<BoolImage> {
    let dims = GridDims::new(SCENE[0].len(), SCENE.len())?;
    Ok(BoolImage::from_fn(dims, |x, y| SCENE[y].as_bytes()[x] == c as u8))
}

fn main() -> imgql::Result<()> {
    let adj = Adjacency::Orthodiagonal;
    let red = layer('r')?;
    let blue = layer('b')?;
    println!("blue:\n{blue:?}");
    println!("near(blue):\n{:?}", closure(&blue, adj));
    println!("interior(blue):\n{:?}", interior(&blue, adj));
    println!(
        "blue has {} components",
        connected_components(&blue, adj).count()
    );
    println!("blue S red (blue enclosed by red):\n{:?}", surrounded(&blue, &red, adj)?);
    println!("touch(blue, red):\n{:?}", touch(&blue, &red, adj)?);
    println!("grow(red, blue):\n{:?}", grow(&red, &blue, adj)?);
    Ok(())
}
