//! File formats: binary PGM rasters and JSON moment files.

mod moments;
mod pgm;

pub use moments::{image_hash, MomentFile, MomentRecord, MOMENT_FORMAT, MOMENT_FORMAT_VERSION};
pub use pgm::{decode_pgm, encode_pgm, read_image, write_image};
