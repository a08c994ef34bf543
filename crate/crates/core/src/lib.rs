//! Steganographic channels in STL design files, and a sanitizer that erases them.
//!
//! * [`stl`]: ASCII/binary parsing and canonical writers.
//! * [`codecs`]: one concrete encoding per channel (facet order, vertex
//!   rotation, normal orientation, number notation, indentation, and a
//!   canonical-pair codebook).
//! * [`sanitizer`]: Fisher-Yates facet shuffle, random vertex rotation and
//!   normal recomputation, followed by a canonical re-save.
//! * [`eval`]: repeated embed/sanitize/extract trials with CSV and SVG output.

pub mod codecs;
pub mod eval;
pub mod sanitizer;
pub mod stl;

pub use codecs::{BitSequence, Carrier, ChannelId, CodecError};
pub use sanitizer::{sanitize_all, OutputFormat, RandomSource, SanitizeReport};
pub use stl::{Facet, StlError, StlFormat, StlModel, Vec3};
