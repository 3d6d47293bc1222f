//! Orthogonal moments on the unit disk.
//!
//! The crate covers the whole pipeline for circular orthogonal moments of
//! grayscale images: radial/angular kernel evaluation ([`basis`]), mapping of
//! the pixel grid onto the disk and integration weights ([`geometry`]),
//! decomposition and reconstruction under several calculation schemes
//! ([`engine`]), rotation invariants and a minimum-distance classifier
//! ([`invariants`]), evaluation measures ([`metrics`]) and an experiment
//! harness that emits CSV/JSON reports ([`harness`]).
//!
//! ```
//! use momentkit::{basis::{Family, MethodSpec}, engine, image::Image};
//!
//! let method = MethodSpec::new(Family::Zm).unwrap();
//! let img = Image::constant(32, 1.0).unwrap();
//! let scheme = engine::Scheme::default_for(&method, 4);
//! let moments = engine::decompose(&img, &method, 4, &scheme).unwrap();
//! assert_eq!(moments.len(), 15);
//! ```

pub mod basis;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod image;
pub mod invariants;
pub mod io;
pub mod metrics;

pub use error::{MomentError, Result};
pub use num_complex::Complex64;
