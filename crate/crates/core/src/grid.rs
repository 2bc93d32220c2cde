//! Finite 2D grids and the images that live on them.
//!
//! A grid is a quasi-discrete closure space: its points are the voxels and
//! its relation is the (reflexive, symmetric) adjacency chosen at runtime.
//! Storage is row-major with `x` growing rightward and `y` downward, which
//! is also PNG scanline order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Width and height of a 2D voxel grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridDims {
    width: usize,
    height: usize,
}

impl GridDims {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || width.checked_mul(height).is_none() {
            return Err(Error::InvalidDims { width, height });
        }
        Ok(Self { width, height })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    /// Never true: a grid has at least one voxel.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.width, index / self.width)
    }

    pub(crate) fn check(&self, other: &GridDims) -> Result<()> {
        if self != other {
            return Err(Error::DimsMismatch {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Voxel adjacency relation. Every voxel is also adjacent to itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Adjacency {
    /// Edge-sharing neighbours (4-neighbourhood).
    Orthogonal,
    /// Edge- or corner-sharing neighbours (8-neighbourhood).
    #[default]
    Orthodiagonal,
}

impl Adjacency {
    /// Neighbour offsets, excluding the voxel itself.
    pub fn offsets(self) -> &'static [(isize, isize)] {
        const ORTHO: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
        const DIAG: [(isize, isize); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        match self {
            Adjacency::Orthogonal => &ORTHO,
            Adjacency::Orthodiagonal => &DIAG,
        }
    }

    /// Calls `f` with the linear index of every in-grid neighbour of `(x, y)`.
    #[inline]
    pub fn for_each_neighbour(self, dims: GridDims, x: usize, y: usize, mut f: impl FnMut(usize)) {
        for &(dx, dy) in self.offsets() {
            let nx = x as isize + dx;
            let ny = y as isize + dy;
            if nx >= 0 && ny >= 0 && (nx as usize) < dims.width && (ny as usize) < dims.height {
                f(dims.index(nx as usize, ny as usize));
            }
        }
    }
}

impl FromStr for Adjacency {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "4" | "orthogonal" => Ok(Adjacency::Orthogonal),
            "8" | "orthodiagonal" => Ok(Adjacency::Orthodiagonal),
            other => Err(format!("unknown adjacency `{other}` (expected 4 or 8)")),
        }
    }
}

/// A satisfaction set: one boolean per voxel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolImage {
    dims: GridDims,
    bits: Vec<bool>,
}

impl BoolImage {
    pub fn new(dims: GridDims, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != dims.len() {
            return Err(Error::BufferLength {
                dims,
                len: bits.len(),
            });
        }
        Ok(Self { dims, bits })
    }

    pub fn filled(dims: GridDims, value: bool) -> Self {
        Self {
            dims,
            bits: vec![value; dims.len()],
        }
    }

    pub fn from_fn(dims: GridDims, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(dims.len());
        for y in 0..dims.height {
            for x in 0..dims.width {
                bits.push(f(x, y));
            }
        }
        Self { dims, bits }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[self.dims.index(x, y)]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        let i = self.dims.index(x, y);
        self.bits[i] = value;
    }

    /// Number of true voxels, as a real so it can join script arithmetic.
    pub fn volume(&self) -> f64 {
        self.count() as f64
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_all_false(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn not(&self) -> BoolImage {
        BoolImage {
            dims: self.dims,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn and(&self, other: &BoolImage) -> Result<BoolImage> {
        self.zip(other, |a, b| a && b)
    }

    pub fn or(&self, other: &BoolImage) -> Result<BoolImage> {
        self.zip(other, |a, b| a || b)
    }

    /// `self ∧ ¬other`
    pub fn and_not(&self, other: &BoolImage) -> Result<BoolImage> {
        self.zip(other, |a, b| a && !b)
    }

    /// True iff every voxel of `self` is also true in `other`.
    pub fn is_subset(&self, other: &BoolImage) -> bool {
        self.dims == other.dims && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    fn zip(&self, other: &BoolImage, f: impl Fn(bool, bool) -> bool) -> Result<BoolImage> {
        self.dims.check(&other.dims)?;
        Ok(BoolImage {
            dims: self.dims,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

impl fmt::Debug for BoolImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolImage {}", self.dims)?;
        if self.dims.len() <= 4096 {
            for row in self.bits.chunks(self.dims.width) {
                let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

/// Pointwise boolean operator over any number of images of equal dims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Not,
}

/// Applies `op` pointwise. `Not` takes exactly one argument; `And`/`Or`
/// take at least one.
pub fn bool_algebra(op: BoolOp, args: &[&BoolImage]) -> Result<BoolImage> {
    let (first, rest) = args
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("boolean operator needs an argument".into()))?;
    match op {
        BoolOp::Not => {
            if !rest.is_empty() {
                return Err(Error::InvalidArgument("not takes one argument".into()));
            }
            Ok(first.not())
        }
        BoolOp::And | BoolOp::Or => {
            let mut acc = (*first).clone();
            for img in rest {
                acc = if op == BoolOp::And {
                    acc.and(img)?
                } else {
                    acc.or(img)?
                };
            }
            Ok(acc)
        }
    }
}

/// The frame of the grid: voxels on the first or last row or column.
pub fn border(dims: GridDims) -> BoolImage {
    let (w, h) = (dims.width, dims.height);
    BoolImage::from_fn(dims, |x, y| x == 0 || y == 0 || x + 1 == w || y + 1 == h)
}

/// A quantitative image: one real per voxel. May hold `+∞`, never NaN.
#[derive(Clone, PartialEq)]
pub struct ScalarImage {
    dims: GridDims,
    values: Vec<f64>,
}

impl ScalarImage {
    pub fn new(dims: GridDims, values: Vec<f64>) -> Result<Self> {
        if values.len() != dims.len() {
            return Err(Error::BufferLength {
                dims,
                len: values.len(),
            });
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Arithmetic("image value is NaN".into()));
        }
        Ok(Self { dims, values })
    }

    pub fn filled(dims: GridDims, value: f64) -> Self {
        Self {
            dims,
            values: vec![value; dims.len()],
        }
    }

    pub fn from_fn(dims: GridDims, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(dims.len());
        for y in 0..dims.height {
            for x in 0..dims.width {
                values.push(f(x, y));
            }
        }
        Self { dims, values }
    }

    /// Skips the NaN scan; callers guarantee the invariant.
    pub(crate) fn from_vec_unchecked(dims: GridDims, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), dims.len());
        Self { dims, values }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[self.dims.index(x, y)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl fmt::Debug for ScalarImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ScalarImage {} [min {}, max {}]",
            self.dims,
            self.min(),
            self.max()
        )
    }
}

/// An 8-bit RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct ColorImage {
    dims: GridDims,
    rgb: Vec<[u8; 3]>,
}

impl ColorImage {
    pub fn new(dims: GridDims, rgb: Vec<[u8; 3]>) -> Result<Self> {
        if rgb.len() != dims.len() {
            return Err(Error::BufferLength {
                dims,
                len: rgb.len(),
            });
        }
        Ok(Self { dims, rgb })
    }

    pub fn from_fn(dims: GridDims, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        let mut rgb = Vec::with_capacity(dims.len());
        for y in 0..dims.height {
            for x in 0..dims.width {
                rgb.push(f(x, y));
            }
        }
        Self { dims, rgb }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.rgb
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.rgb[self.dims.index(x, y)]
    }
}

impl fmt::Debug for ColorImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColorImage {}", self.dims)
    }
}

/// Shared handles used by the evaluator; images are immutable once built.
pub type SharedBool = Arc<BoolImage>;
pub type SharedScalar = Arc<ScalarImage>;
