//! A global spatial model checker for 2D raster images.
//!
//! Formulas of a spatial logic over closure spaces are evaluated for every
//! voxel at once, producing boolean images. On top of the logic sit
//! quantitative primitives (intensity, thresholds, texture correlation),
//! segmentation metrics, and ImgQL, a small declarative script language
//! whose programs are compiled into a shared expression DAG and evaluated
//! in parallel with every subexpression computed once.
//!
//! ```
//! use imgql::{spatial, Adjacency, BoolImage, GridDims};
//!
//! let dims = GridDims::new(7, 7)?;
//! let ring = BoolImage::from_fn(dims, |x, y| x.abs_diff(3).max(y.abs_diff(3)) == 2);
//! let inside = BoolImage::from_fn(dims, |x, y| x.abs_diff(3).max(y.abs_diff(3)) < 2);
//! let s = spatial::surrounded(&inside, &ring, Adjacency::Orthodiagonal)?;
//! assert_eq!(s, inside);
//! # Ok::<(), imgql::Error>(())
//! ```

pub mod dsl;
mod error;
pub mod grid;
pub mod harness;
pub mod imaging;
pub mod metrics;
pub mod spatial;
pub mod texture;

pub use error::{Error, Result};
pub use grid::{Adjacency, BoolImage, ColorImage, GridDims, ScalarImage};
pub use imaging::IntensityMode;
pub use metrics::MetricsRecord;
pub use texture::TextureMode;
