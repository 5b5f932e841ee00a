//! Binary portable graymap (P5) encoding and decoding.
//!
//! Output layout is fixed byte for byte: `P5\n<width> <height>\n255\n`
//! followed by `width * height` bytes, rows from the top (largest y) down.

use crate::error::{Error, Result};
use crate::grid::{GridSpec, RealGrid};
use crate::scan::DetectorScan;

/// Largest image accepted by the decoder.
pub const MAX_PIXELS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    /// Complete P5 file contents.
    pub bytes: Vec<u8>,
    /// Set when the scan had no contrast (`min == max`) and was emitted black.
    pub degenerate: bool,
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    debug_assert_eq!(pixels.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Linear gray map, min to 0 and max to 255, brighter is more intense.
pub fn to_grayscale_bitmap(scan: &DetectorScan) -> Bitmap {
    let (lo, hi) = (scan.min(), scan.max());
    let degenerate = !(hi > lo) || !lo.is_finite() || !hi.is_finite();
    let mut pixels = Vec::with_capacity(scan.n_x * scan.n_y);
    for j in (0..scan.n_y).rev() {
        for i in 0..scan.n_x {
            let p = if degenerate {
                0
            } else {
                ((scan.at(i, j) - lo) / (hi - lo) * 255.0)
                    .round()
                    .clamp(0.0, 255.0) as u8
            };
            pixels.push(p);
        }
    }
    Bitmap {
        width: scan.n_x,
        height: scan.n_y,
        bytes: encode_pgm(scan.n_x, scan.n_y, &pixels),
        degenerate,
    }
}

/// Decoded graymap; samples are stored top row first, as in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

impl GrayImage {
    /// Intensity grid with `pixel_size` per pixel; row 0 of the file becomes
    /// the largest y.
    pub fn to_real_grid(&self, pixel_size: f64) -> Result<RealGrid> {
        let g = GridSpec::new(
            self.width,
            self.height,
            self.width as f64 * pixel_size,
            self.height as f64 * pixel_size,
        )?;
        let mut values = Vec::with_capacity(self.pixels.len());
        for j in 0..self.height {
            let row = self.height - 1 - j;
            values.extend(
                self.pixels[row * self.width..(row + 1) * self.width]
                    .iter()
                    .map(|&p| p as f64),
            );
        }
        RealGrid::new(g, values)
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
            if self.pos - start > 9 {
                return Err(Error::Format(format!("{what} is too large")));
            }
        }
        if start == self.pos {
            return Err(Error::Format(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad {what}")))
    }
}

/// Parse a binary (P5) graymap with 8- or 16-bit samples.
pub fn parse_pgm(data: &[u8]) -> Result<GrayImage> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(Error::Format("missing P5 magic number".into()));
    }
    let mut cur = Cursor { data, pos: 2 };
    if !cur
        .data
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(Error::Format(
            "magic number must be followed by whitespace".into(),
        ));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format("image dimensions must be positive".into()));
    }
    if maxval == 0 || maxval > u16::MAX as usize {
        return Err(Error::Format(format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width
        .checked_mul(height)
        .filter(|&c| c <= MAX_PIXELS)
        .ok_or_else(|| Error::Format("image is too large".into()))?;
    match cur.data.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::Format("missing whitespace before raster".into())),
    }
    let bytes_per = if maxval < 256 { 1 } else { 2 };
    let raster = &data[cur.pos..];
    if raster.len() != count * bytes_per {
        return Err(Error::Format(format!(
            "raster has {} bytes, expected {}",
            raster.len(),
            count * bytes_per
        )));
    }
    let pixels: Vec<u16> = if bytes_per == 1 {
        raster.iter().map(|&b| b as u16).collect()
    } else {
        raster
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    };
    if let Some(&p) = pixels.iter().find(|&&p| p as usize > maxval) {
        return Err(Error::Format(format!("sample {p} exceeds maxval {maxval}")));
    }
    Ok(GrayImage {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}
