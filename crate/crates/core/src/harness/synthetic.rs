//! Seeded synthetic dermoscopy-like images with exact ground truth.
//!
//! The scene is light noisy skin with a dark disk-shaped lesion, optional
//! near-black quarter circles in the corners (the vignetting of many
//! dermoscopes) and an optional saturated blue patch touching the bottom
//! edge.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{BoolImage, ColorImage, GridDims};
use crate::imaging::{save_color_png, save_png};
use crate::Result;

use super::GROUND_TRUTH_SUFFIX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fixture {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    /// Lesion centre as fractions of width and height.
    pub centre: (f64, f64),
    pub lesion_radius: f64,
    /// Radius of the dark corner quarter circles; 0 disables them.
    pub corner_radius: f64,
    /// Radius of the blue patch disk; 0 disables it.
    pub patch_radius: f64,
    /// Half-width of the uniform per-channel noise.
    pub noise: u8,
}

impl Default for Fixture {
    fn default() -> Self {
        Fixture {
            width: 1022,
            height: 767,
            seed: 7,
            centre: (0.5, 0.5),
            lesion_radius: 150.0,
            corner_radius: 120.0,
            patch_radius: 40.0,
            noise: 14,
        }
    }
}

const SKIN: [u8; 3] = [220, 170, 150];
const LESION: [u8; 3] = [100, 70, 50];
const CORNER: [u8; 3] = [8, 8, 8];
const PATCH: [u8; 3] = [30, 60, 230];

/// What a fixture is made of, voxel by voxel.
#[derive(Clone, Debug)]
pub struct Scene {
    pub image: ColorImage,
    pub lesion: BoolImage,
    pub corners: BoolImage,
    pub patch: BoolImage,
}

impl Fixture {
    pub fn dims(&self) -> Result<GridDims> {
        GridDims::new(self.width, self.height)
    }

    fn patch_centre(&self) -> (f64, f64) {
        // centred horizontally at three quarters, cut by the bottom edge
        (
            0.75 * self.width as f64,
            self.height as f64 - 1.0 - 0.5 * self.patch_radius,
        )
    }

    pub fn render(&self) -> Result<Scene> {
        let dims = self.dims()?;
        let (w, h) = (self.width as f64, self.height as f64);
        let (cx, cy) = (self.centre.0 * w, self.centre.1 * h);
        let lesion = BoolImage::from_fn(dims, |x, y| {
            (x as f64 - cx).hypot(y as f64 - cy) <= self.lesion_radius
        });
        let corners = BoolImage::from_fn(dims, |x, y| {
            let dx = (x as f64).min(w - 1.0 - x as f64);
            let dy = (y as f64).min(h - 1.0 - y as f64);
            self.corner_radius > 0.0 && dx.hypot(dy) <= self.corner_radius
        });
        let (px, py) = self.patch_centre();
        let patch = BoolImage::from_fn(dims, |x, y| {
            self.patch_radius > 0.0 && (x as f64 - px).hypot(y as f64 - py) <= self.patch_radius
        });
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let noise = self.noise as i16;
        let image = ColorImage::from_fn(dims, |x, y| {
            let base = if corners.get(x, y) {
                CORNER
            } else if patch.get(x, y) {
                PATCH
            } else if lesion.get(x, y) {
                LESION
            } else {
                SKIN
            };
            let jitter: i16 = if noise == 0 { 0 } else { rng.gen_range(-noise..=noise) };
            base.map(|c| (c as i16 + jitter).clamp(0, 255) as u8)
        });
        Ok(Scene {
            image,
            lesion,
            corners,
            patch,
        })
    }

    /// Writes `<name>.png` and `<name>_seg_RGB.png` into `dir`.
    pub fn write(&self, dir: &Path, name: &str) -> Result<Scene> {
        let scene = self.render()?;
        save_color_png(dir.join(format!("{name}.png")), &scene.image)?;
        save_png(dir.join(format!("{name}{GROUND_TRUTH_SUFFIX}")), &scene.lesion)?;
        Ok(scene)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_layers_are_disjoint_where_it_matters() {
        let f = Fixture {
            width: 200,
            height: 150,
            lesion_radius: 30.0,
            corner_radius: 20.0,
            patch_radius: 10.0,
            ..Fixture::default()
        };
        let s = f.render().unwrap();
        assert!(s.lesion.and(&s.corners).unwrap().is_all_false());
        assert!(s.lesion.and(&s.patch).unwrap().is_all_false());
        assert!(s.patch.get(150, 149));
        assert!(s.corners.get(0, 0) && s.corners.get(199, 149));
        assert_eq!(f.render().unwrap().image, s.image);
    }
}
