//! JSON moment files. Every value is stored as the hexadecimal bit pattern of
//! its 64-bit float, with a decimal mirror for reading by eye; only the hex
//! field is parsed back.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::{order_set, MethodSpec, OrderIndex};
use crate::engine::{MomentSet, Scheme};
use crate::error::{MomentError, Result};
use crate::image::Image;

pub const MOMENT_FORMAT: &str = "momentkit-moments";
pub const MOMENT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub n: i32,
    pub m: i32,
    /// `0x` followed by the 16 hex digits of the IEEE-754 bits.
    pub re: String,
    pub im: String,
    /// Decimal mirrors; `null` when the value is not finite.
    #[serde(default)]
    pub re_decimal: Option<f64>,
    #[serde(default)]
    pub im_decimal: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentFile {
    pub format: String,
    pub version: u32,
    pub method: MethodSpec,
    pub k: usize,
    pub scheme: Scheme,
    pub image_size: usize,
    /// SHA-256 of the source raster, when known.
    #[serde(default)]
    pub image_sha256: Option<String>,
    pub records: Vec<MomentRecord>,
}

fn hex(v: f64) -> String {
    format!("0x{:016x}", v.to_bits())
}

fn unhex(s: &str) -> Result<f64> {
    let digits = s
        .strip_prefix("0x")
        .ok_or_else(|| MomentError::Format(format!("value '{s}' lacks the 0x prefix")))?;
    if digits.len() != 16 {
        return Err(MomentError::Format(format!("value '{s}' must have 16 hex digits")));
    }
    u64::from_str_radix(digits, 16)
        .map(f64::from_bits)
        .map_err(|_| MomentError::Format(format!("value '{s}' is not hexadecimal")))
}

/// SHA-256 over the size and the bit patterns of every pixel, as hex.
pub fn image_hash(image: &Image) -> String {
    let mut h = Sha256::new();
    h.update((image.size() as u64).to_le_bytes());
    for v in image.pixels() {
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl MomentFile {
    pub fn from_moments(moments: &MomentSet, source: Option<&Image>) -> MomentFile {
        MomentFile {
            format: MOMENT_FORMAT.to_string(),
            version: MOMENT_FORMAT_VERSION,
            method: moments.method,
            k: moments.k,
            scheme: moments.scheme,
            image_size: moments.image_size,
            image_sha256: source.map(image_hash),
            records: moments
                .iter()
                .map(|(OrderIndex { n, m }, v)| MomentRecord {
                    n,
                    m,
                    re: hex(v.re),
                    im: hex(v.im),
                    re_decimal: v.re.is_finite().then_some(v.re),
                    im_decimal: v.im.is_finite().then_some(v.im),
                })
                .collect(),
        }
    }

    /// Rebuilds the moment set; records must list the order set exactly, in
    /// order.
    pub fn to_moments(&self) -> Result<MomentSet> {
        if self.format != MOMENT_FORMAT {
            return Err(MomentError::Format(format!("not a moment file (format '{}')", self.format)));
        }
        if self.version != MOMENT_FORMAT_VERSION {
            return Err(MomentError::Unsupported(format!("moment file version {}", self.version)));
        }
        let expected = order_set(&self.method, self.k).indices;
        if expected.len() != self.records.len() {
            return Err(MomentError::DimensionMismatch {
                expected: expected.len(),
                got: self.records.len(),
            });
        }
        let values = expected
            .iter()
            .zip(&self.records)
            .map(|(idx, r)| {
                if (idx.n, idx.m) != (r.n, r.m) {
                    return Err(MomentError::Format(format!(
                        "record (n={}, m={}) found where (n={}, m={}) was expected",
                        r.n, r.m, idx.n, idx.m
                    )));
                }
                Ok(Complex64::new(unhex(&r.re)?, unhex(&r.im)?))
            })
            .collect::<Result<Vec<_>>>()?;
        MomentSet::from_values(self.method, self.k, self.scheme, self.image_size, values)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| MomentError::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<MomentFile> {
        serde_json::from_str(text).map_err(|e| MomentError::Format(format!("moment file: {e}")))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<MomentFile> {
        MomentFile::from_json(&std::fs::read_to_string(path)?)
    }
}
