//! Binary PGM (`P5`), 8-bit, square.

use std::path::Path;

use crate::error::{MomentError, Result};
use crate::image::Image;

fn format_err(msg: impl Into<String>) -> MomentError {
    MomentError::Format(msg.into())
}

/// Reads the next header token, skipping whitespace and `#` comments.
fn token(bytes: &[u8], pos: &mut usize) -> Result<String> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while bytes.get(*pos).is_some_and(|&b| b != b'\n') {
                    *pos += 1;
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
            None => return Err(format_err("PGM header is truncated")),
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| !b.is_ascii_whitespace()) {
        *pos += 1;
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let t = token(bytes, pos)?;
    t.parse()
        .map_err(|_| format_err(format!("PGM {what} '{t}' is not a non-negative integer")))
}

/// Decodes a `P5` file. Intensities become `v / maxval`.
pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    let magic = token(bytes, &mut pos)?;
    if magic != "P5" {
        return Err(format_err(format!("expected a binary PGM (P5), found magic '{magic}'")));
    }
    let width = number(bytes, &mut pos, "width")?;
    let height = number(bytes, &mut pos, "height")?;
    let maxval = number(bytes, &mut pos, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(MomentError::Unsupported(format!(
            "PGM maxval {maxval}: only 8-bit rasters are supported"
        )));
    }
    if width != height {
        return Err(MomentError::InvalidImage(format!(
            "image must be square (got {width}x{height})"
        )));
    }
    // Exactly one whitespace byte separates the header from the payload.
    if !bytes.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
        return Err(format_err("PGM header is truncated"));
    }
    pos += 1;
    let payload = &bytes[pos..];
    let need = width * height;
    if payload.len() < need {
        return Err(format_err(format!(
            "PGM payload has {} bytes, expected {need}",
            payload.len()
        )));
    }
    let scale = maxval as f64;
    let pixels = payload[..need]
        .iter()
        .map(|&v| {
            if v as usize > maxval {
                Err(format_err(format!("PGM sample {v} exceeds maxval {maxval}")))
            } else {
                Ok(v as f64 / scale)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Image::new(width, pixels)
}

/// Encodes as 8-bit `P5`, rounding half up.
pub fn encode_pgm(image: &Image) -> Vec<u8> {
    let n = image.size();
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    out.extend(image.pixels().iter().map(|v| (v * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8));
    out
}

pub fn read_image(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&std::fs::read(path)?)
}

pub fn write_image(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_pgm(image))?;
    Ok(())
}
