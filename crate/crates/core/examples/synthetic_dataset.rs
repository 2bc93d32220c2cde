//! Writes a small synthetic dataset of lesion images with ground truth.
//!
//! ```text
//! cargo run --release --example synthetic_dataset -- target/fixtures 3
//! cargo run --release -- batch target/fixtures --spec nevus_v0.imgql --output target/out
//! ```

use std::path::PathBuf;

use imgql::harness::synthetic::Fixture;

fn main() -> imgql::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "target/fixtures".into()));
    let count: u64 = args.next().and_then(|n| n.parse().ok()).unwrap_or(3);
    std::fs::create_dir_all(&dir).map_err(|e| imgql::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    for i in 0..count {
        let fixture = Fixture {
            seed: i,
            centre: (0.45 + 0.05 * (i % 3) as f64, 0.5),
            lesion_radius: 130.0 + 10.0 * (i % 4) as f64,
            patch_radius: if i % 2 == 0 { 40.0 } else { 0.0 },
            ..Fixture::default()
        };
        let name = format!("fx{i}");
        let scene = fixture.write(&dir, &name)?;
        println!(
            "{name}: {}x{}, lesion {} voxels, patch {} voxels",
            fixture.width,
            fixture.height,
            scene.lesion.count(),
            scene.patch.count()
        );
    }
    Ok(())
}
