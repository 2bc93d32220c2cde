//! The embedded nevus specification on one synthetic image.
//!
//! Writes the fixture and the segmentation into a temporary directory and
//! prints the scores against the fixture's ground truth.

use std::time::Instant;

use imgql::harness::synthetic::Fixture;
use imgql::harness::{run_case, RunConfig, SpecSource};

fn main() -> imgql::Result<()> {
    let dir = std::env::temp_dir().join("imgql-nevus-pipeline");
    std::fs::create_dir_all(&dir).map_err(|e| imgql::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let fixture = Fixture::default();
    fixture.write(&dir, "lesion")?;

    let spec = SpecSource::embedded("nevus_v0.imgql").expect("embedded corpus");
    let config = RunConfig {
        timing: true,
        ..RunConfig::default()
    };
    let start = Instant::now();
    let case = run_case(&spec, &dir, "lesion", &dir, &config);
    println!("{} in {:.2?}: {}", case.name, start.elapsed(), case.status.label());
    if let Some(m) = case.metrics {
        println!("{:?}", m.counts);
        println!("dice {:.4}  jaccard {:.4}", m.dice, m.jaccard);
    }
    println!("segmentation: {}", dir.join("lesion_nevSegV0.png").display());
    Ok(())
}
