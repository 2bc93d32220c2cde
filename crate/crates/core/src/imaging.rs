//! PNG input/output and the quantitative primitives scripts are built from.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{BoolImage, ColorImage, GridDims, ScalarImage};

fn image_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Image {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Reads an 8-bit PNG as RGB. Gray is replicated into all three channels,
/// palettes are expanded and alpha is discarded.
pub fn load_png(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut decoder = png::Decoder::new(file);
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder
        .read_info()
        .map_err(|e| image_err(path, format!("cannot decode PNG: {e}")))?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| image_err(path, format!("cannot decode PNG: {e}")))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(image_err(
            path,
            format!("unsupported bit depth {:?}; only 8-bit PNG is read", info.bit_depth),
        ));
    }
    let dims = GridDims::new(info.width as usize, info.height as usize)?;
    let channels = info.color_type.samples();
    let mut rgb = Vec::with_capacity(dims.len());
    for y in 0..dims.height() {
        let row = &buf[y * info.line_size..][..dims.width() * channels];
        for px in row.chunks_exact(channels) {
            rgb.push(match info.color_type {
                png::ColorType::Grayscale | png::ColorType::GrayscaleAlpha => [px[0]; 3],
                png::ColorType::Rgb | png::ColorType::Rgba => [px[0], px[1], px[2]],
                png::ColorType::Indexed => {
                    return Err(image_err(path, "palette was not expanded"));
                }
            });
        }
    }
    ColorImage::new(dims, rgb)
}

/// Anything that can be written as an 8-bit grayscale PNG.
pub enum SaveImage<'a> {
    Bool(&'a BoolImage),
    Scalar(&'a ScalarImage),
}

impl<'a> From<&'a BoolImage> for SaveImage<'a> {
    fn from(b: &'a BoolImage) -> Self {
        SaveImage::Bool(b)
    }
}

impl<'a> From<&'a ScalarImage> for SaveImage<'a> {
    fn from(s: &'a ScalarImage) -> Self {
        SaveImage::Scalar(s)
    }
}

/// Gray levels for a scalar image: finite values rescaled min–max onto
/// 0..=255 (rounding half away from zero), `+∞` to 255 and `−∞` to 0. An
/// image whose finite values are all equal maps to 0.
pub fn rescale_to_gray(img: &ScalarImage) -> Vec<u8> {
    let finite = img.values().iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    img.values()
        .iter()
        .map(|&v| {
            if v == f64::INFINITY {
                255
            } else if v == f64::NEG_INFINITY || hi <= lo {
                0
            } else {
                ((v - lo) / (hi - lo) * 255.0).round() as u8
            }
        })
        .collect()
}

/// Writes `img` as 8-bit grayscale, creating missing parent directories.
/// Boolean images become 255 (true) / 0 (false).
pub fn save_png<'a>(path: impl AsRef<Path>, img: impl Into<SaveImage<'a>>) -> Result<()> {
    let path = path.as_ref();
    let (dims, gray) = match img.into() {
        SaveImage::Bool(b) => (
            b.dims(),
            b.bits().iter().map(|&t| if t { 255 } else { 0 }).collect(),
        ),
        SaveImage::Scalar(s) => (s.dims(), rescale_to_gray(s)),
    };
    write_gray_png(path, dims, &gray)
}

pub(crate) fn write_gray_png(path: &Path, dims: GridDims, gray: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io_err)?;
    }
    let file = File::create(path).map_err(io_err)?;
    let mut encoder = png::Encoder::new(
        BufWriter::new(file),
        dims.width() as u32,
        dims.height() as u32,
    );
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| image_err(path, e.to_string()))?;
    writer
        .write_image_data(gray)
        .map_err(|e| image_err(path, e.to_string()))?;
    writer.finish().map_err(|e| image_err(path, e.to_string()))
}

/// Writes an RGB PNG; used for fixtures and overlays.
pub fn save_color_png(path: impl AsRef<Path>, img: &ColorImage) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io_err)?;
    }
    let file = File::create(path).map_err(io_err)?;
    let dims = img.dims();
    let mut encoder = png::Encoder::new(
        BufWriter::new(file),
        dims.width() as u32,
        dims.height() as u32,
    );
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| image_err(path, e.to_string()))?;
    let data: Vec<u8> = img.pixels().iter().flatten().copied().collect();
    writer
        .write_image_data(&data)
        .map_err(|e| image_err(path, e.to_string()))?;
    writer.finish().map_err(|e| image_err(path, e.to_string()))
}

/// How RGB collapses to a single intensity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IntensityMode {
    /// 0.299 R + 0.587 G + 0.114 B
    #[default]
    Rec601,
    /// (R + G + B) / 3
    Mean,
}

impl FromStr for IntensityMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rec601" => Ok(IntensityMode::Rec601),
            "mean" => Ok(IntensityMode::Mean),
            other => Err(format!("unknown intensity mode `{other}` (expected rec601 or mean)")),
        }
    }
}

pub fn intensity(c: &ColorImage, mode: IntensityMode) -> ScalarImage {
    let values = c
        .pixels()
        .iter()
        .map(|&[r, g, b]| {
            let (r, g, b) = (r as f64, g as f64, b as f64);
            match mode {
                IntensityMode::Rec601 => 0.299 * r + 0.587 * g + 0.114 * b,
                IntensityMode::Mean => (r + g + b) / 3.0,
            }
        })
        .collect();
    ScalarImage::from_vec_unchecked(c.dims(), values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

/// One colour channel as reals in `[0, 255]`.
pub fn color_proj(c: &ColorImage, channel: Channel) -> ScalarImage {
    let idx = channel as usize;
    let values = c.pixels().iter().map(|px| px[idx] as f64).collect();
    ScalarImage::from_vec_unchecked(c.dims(), values)
}

/// Voxelwise arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Voxelwise comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Leq,
    Gt,
    Geq,
}

impl CmpOp {
    #[inline]
    fn holds(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Leq => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Geq => a >= b,
        }
    }
}

/// Right-hand operand of a voxelwise operation.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    Image(&'a ScalarImage),
    Number(f64),
}

fn rhs_values<'a>(lhs: &ScalarImage, rhs: Operand<'a>) -> Result<Box<dyn Fn(usize) -> f64 + 'a>> {
    match rhs {
        Operand::Image(img) => {
            lhs.dims().check(&img.dims())?;
            let values = img.values();
            Ok(Box::new(move |i| values[i]))
        }
        Operand::Number(n) => Ok(Box::new(move |_| n)),
    }
}

pub fn voxel_arith(op: ArithOp, lhs: &ScalarImage, rhs: Operand<'_>) -> Result<ScalarImage> {
    let r = rhs_values(lhs, rhs)?;
    let mut out = Vec::with_capacity(lhs.values().len());
    for (i, &a) in lhs.values().iter().enumerate() {
        let b = r(i);
        let v = match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
        };
        if v.is_nan() {
            return Err(Error::Arithmetic(format!(
                "{a} {op:?} {b} is undefined at voxel {:?}",
                lhs.dims().coords(i)
            )));
        }
        out.push(v);
    }
    Ok(ScalarImage::from_vec_unchecked(lhs.dims(), out))
}

pub fn voxel_cmp(op: CmpOp, lhs: &ScalarImage, rhs: Operand<'_>) -> Result<BoolImage> {
    let r = rhs_values(lhs, rhs)?;
    let bits = lhs
        .values()
        .iter()
        .enumerate()
        .map(|(i, &a)| op.holds(a, r(i)))
        .collect();
    BoolImage::new(lhs.dims(), bits)
}

/// Arithmetic on plain numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NumOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `x op y` on numbers. Division of a non-zero number by zero yields a
/// signed infinity; `0/0` and other NaN-producing forms are errors.
pub fn num_arith(op: NumOp, x: f64, y: f64) -> Result<f64> {
    let v = match op {
        NumOp::Add => x + y,
        NumOp::Sub => x - y,
        NumOp::Mul => x * y,
        NumOp::Div => x / y,
    };
    if v.is_nan() {
        return Err(Error::Arithmetic(format!("{x} {op:?} {y} is undefined")));
    }
    Ok(v)
}

pub fn num_cmp(op: CmpOp, x: f64, y: f64) -> bool {
    op.holds(x, y)
}

/// Selects `t` or `f`; both are already evaluated.
pub fn if_b(cond: bool, t: &BoolImage, f: &BoolImage) -> Result<BoolImage> {
    t.dims().check(&f.dims())?;
    Ok(if cond { t.clone() } else { f.clone() })
}
