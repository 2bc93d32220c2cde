//! Local texture similarity to a sample region.
//!
//! The left half of the image mixes dark and bright speckle, the right
//! half is mid-grey noise. Sampling the left half and correlating every
//! voxel's neighbourhood histogram with it separates the two textures.

use imgql::texture::{cross_correlation_map, Binning, TextureMode, WindowSpec};
use imgql::{BoolImage, GridDims, ScalarImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> imgql::Result<()> {
    let dims = GridDims::new(64, 32)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let img = ScalarImage::from_fn(dims, |x, _| {
        if x < 32 {
            if rng.gen_bool(0.5) {
                rng.gen_range(5.0..20.0)
            } else {
                rng.gen_range(80.0..95.0)
            }
        } else {
            rng.gen_range(40.0..60.0)
        }
    });
    let sample = BoolImage::from_fn(dims, |x, y| x < 16 && y < 16);
    let binning = Binning::new(img.min(), img.max(), 10)?;
    let score = cross_correlation_map(
        WindowSpec::new(3.0)?,
        &img,
        &img,
        &sample,
        binning,
        TextureMode::Sliding,
    )?;
    for y in (0..dims.height()).step_by(4) {
        let row: String = (0..dims.width())
            .map(|x| match score.get(x, y) {
                s if s > 0.5 => '#',
                s if s > 0.0 => '+',
                _ => '.',
            })
            .collect();
        println!("{row}");
    }
    let naive = cross_correlation_map(
        WindowSpec::new(3.0)?,
        &img,
        &img,
        &sample,
        binning,
        TextureMode::Naive,
    )?;
    assert_eq!(score, naive);
    println!("sliding and naive maps agree");
    Ok(())
}
