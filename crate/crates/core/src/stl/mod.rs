//! In-memory STL model plus the ASCII and binary readers/writers.
//!
//! Coordinates are stored as `f32`, the native precision of binary STL.
//! ASCII tokens are rounded to the nearest single-precision value on parse.

mod ascii;
mod binary;
mod mesh;

use std::fmt;

pub use ascii::{parse_ascii, parse_ascii_with_spans, write_canonical_ascii};
pub use binary::{parse_binary, write_binary, BINARY_FACET_SIZE, BINARY_HEADER_SIZE};
pub use mesh::generate_test_mesh;

/// Maximum length of a solid name after canonical normalization.
pub const MAX_SOLID_NAME_LEN: usize = 64;

/// A point or direction with single-precision components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f32,
    pub y: f32,
    pub z: f32,
}

pub type Vertex = Vec3;
pub type Normal = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f32, y: f32, z: f32) -> Self {
        Vec3 { x, y, z }
    }

    pub fn to_array(self) -> [f32; 3] {
        [self.x, self.y, self.z]
    }

    /// Raw IEEE-754 bit patterns; distinguishes `-0.0` from `0.0`.
    pub fn to_bits(self) -> [u32; 3] {
        [self.x.to_bits(), self.y.to_bits(), self.z.to_bits()]
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl From<[f32; 3]> for Vec3 {
    fn from(a: [f32; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

/// One triangle: three vertices, the stored normal and the binary attribute word.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Facet {
    pub vertices: [Vertex; 3],
    pub normal: Normal,
    /// Binary STL "attribute byte count" word; always 0 for ASCII sources.
    pub attribute: u16,
}

impl Facet {
    pub fn new(vertices: [Vertex; 3], normal: Normal) -> Self {
        Facet {
            vertices,
            normal,
            attribute: 0,
        }
    }

    /// Cyclic rotation `(v1, v2, v3) -> (v2, v3, v1)`.
    pub fn rotated_left(mut self) -> Self {
        self.vertices.rotate_left(1);
        self
    }

    /// Cyclic rotation `(v1, v2, v3) -> (v3, v1, v2)`.
    pub fn rotated_right(mut self) -> Self {
        self.vertices.rotate_right(1);
        self
    }

    /// Rotation that lists the vertex at `first` first, keeping the cyclic order.
    pub fn rotated_to(mut self, first: usize) -> Self {
        self.vertices.rotate_left(first % 3);
        self
    }

    /// Unit normal implied by the listed vertex order (right-hand rule),
    /// or `None` for zero-area facets.
    pub fn rhr_normal(&self) -> Option<Normal> {
        rhr_normal(&self.vertices)
    }

    /// Bit patterns of all twelve floats plus the attribute word.
    pub fn to_bits(&self) -> ([u32; 12], u16) {
        let mut out = [0u32; 12];
        let parts = [self.normal, self.vertices[0], self.vertices[1], self.vertices[2]];
        for (i, p) in parts.iter().enumerate() {
            out[i * 3..i * 3 + 3].copy_from_slice(&p.to_bits());
        }
        (out, self.attribute)
    }
}

/// `normalize(cross(v2 - v1, v3 - v1))`, evaluated in double precision.
pub fn rhr_normal(v: &[Vertex; 3]) -> Option<Normal> {
    let p = |a: Vec3| [a.x as f64, a.y as f64, a.z as f64];
    let (a, b, c) = (p(v[0]), p(v[1]), p(v[2]));
    let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [
        e1[1] * e2[2] - e1[2] * e2[1],
        e1[2] * e2[0] - e1[0] * e2[2],
        e1[0] * e2[1] - e1[1] * e2[0],
    ];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if len == 0.0 || !len.is_finite() {
        return None;
    }
    Some(Vec3::new(
        (n[0] / len) as f32,
        (n[1] / len) as f32,
        (n[2] / len) as f32,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StlFormat {
    Ascii,
    Binary,
}

impl fmt::Display for StlFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StlFormat::Ascii => f.write_str("ascii"),
            StlFormat::Binary => f.write_str("binary"),
        }
    }
}

/// A single STL solid. Facet order is significant: it carries the facet channel.
#[derive(Debug, Clone, PartialEq)]
pub struct StlModel {
    pub solid_name: String,
    pub facets: Vec<Facet>,
    pub source_format: StlFormat,
}

impl StlModel {
    pub fn new(solid_name: impl Into<String>, facets: Vec<Facet>, source_format: StlFormat) -> Self {
        StlModel {
            solid_name: solid_name.into(),
            facets,
            source_format,
        }
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Sorted multiset of facets reduced to their vertex geometry, each in the
    /// rotation whose bit pattern is smallest. Stored normals and attributes
    /// are ignored. Two models describe the same surface iff these are equal.
    pub fn geometry_signature(&self) -> Vec<[u32; 9]> {
        let mut out: Vec<[u32; 9]> = self
            .facets
            .iter()
            .map(|f| {
                (0..3)
                    .map(|k| {
                        let r = f.rotated_to(k);
                        let mut key = [0u32; 9];
                        for (i, v) in r.vertices.iter().enumerate() {
                            key[i * 3..i * 3 + 3].copy_from_slice(&v.to_bits());
                        }
                        key
                    })
                    .min()
                    .unwrap()
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// True if both models hold the same facets in the same order, compared
    /// on raw bit patterns (attribute words included).
    pub fn bit_identical(&self, other: &StlModel) -> bool {
        self.facets.len() == other.facets.len()
            && self
                .facets
                .iter()
                .zip(&other.facets)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Restrict a solid name to `[A-Za-z0-9_-]`, at most [`MAX_SOLID_NAME_LEN`] chars.
///
/// Runs of other characters collapse to a single `_`; leading and trailing
/// underscores are trimmed.
pub fn sanitize_solid_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len().min(MAX_SOLID_NAME_LEN));
    let mut pending_sep = false;
    for c in name.chars() {
        if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
            if pending_sep && !out.is_empty() {
                out.push('_');
            }
            pending_sep = false;
            out.push(c);
        } else {
            pending_sep = true;
        }
    }
    let trimmed = out.trim_matches('_');
    trimmed.chars().take(MAX_SOLID_NAME_LEN).collect::<String>().trim_end_matches('_').to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found:?}")]
    Unexpected { expected: &'static str, found: String },
    #[error("unknown keyword {0:?}")]
    UnknownKeyword(String),
    #[error("facet has {0} vertices, expected 3")]
    WrongVertexCount(usize),
    #[error("missing endsolid")]
    MissingEndSolid,
    #[error("invalid number {0:?}")]
    InvalidNumber(String),
    #[error("non-finite number {0:?}")]
    NonFinite(String),
    #[error("multiple solids in one file are not supported")]
    MultipleSolids,
    #[error("trailing content after endsolid: {0:?}")]
    TrailingContent(String),
}

/// ASCII parse failure with 1-based line and column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StlError {
    #[error("ASCII STL: {0}")]
    Parse(#[from] ParseError),
    #[error("ASCII STL is not valid UTF-8")]
    NotText,
    #[error("binary STL too short: {0} bytes, need at least 84")]
    TooShort(usize),
    #[error("binary STL length mismatch: header declares {count} facets ({expected} bytes), file has {actual} bytes")]
    LengthMismatch { count: u32, expected: u64, actual: usize },
    #[error("binary STL facet count {0} overflows addressable size")]
    CountOverflow(u32),
    #[error("binary STL facet {facet} contains a non-finite value")]
    NonFinite { facet: usize },
    #[error("input is neither a well-formed ASCII solid nor a consistent binary STL")]
    Unrecognized,
}

fn looks_ascii(bytes: &[u8]) -> bool {
    let start = bytes.iter().position(|b| !b.is_ascii_whitespace()).unwrap_or(bytes.len());
    let rest = &bytes[start..];
    rest.len() >= 5
        && rest[..5].eq_ignore_ascii_case(b"solid")
        && rest.get(5).is_none_or(|b| b.is_ascii_whitespace())
}

fn binary_length_consistent(bytes: &[u8]) -> bool {
    binary::declared_len(bytes).is_some_and(|n| n == bytes.len() as u64)
}

/// Classify raw bytes as ASCII or binary STL.
///
/// A file is ASCII iff it starts (after whitespace) with the token `solid`
/// and parses completely under the ASCII grammar. Otherwise it is binary iff
/// its length equals `84 + 50 * count`.
pub fn detect_format(bytes: &[u8]) -> Result<StlFormat, StlError> {
    if looks_ascii(bytes) {
        if let Ok(text) = std::str::from_utf8(bytes) {
            if parse_ascii(text).is_ok() {
                return Ok(StlFormat::Ascii);
            }
        }
    }
    if binary_length_consistent(bytes) {
        Ok(StlFormat::Binary)
    } else {
        Err(StlError::Unrecognized)
    }
}

/// Detect the format and parse. An input that looks like ASCII but fails the
/// grammar and the binary length check reports the ASCII parse error.
pub fn parse(bytes: &[u8]) -> Result<StlModel, StlError> {
    let mut ascii_err = None;
    if looks_ascii(bytes) {
        match std::str::from_utf8(bytes) {
            Ok(text) => match parse_ascii(text) {
                Ok(m) => return Ok(m),
                Err(e) => ascii_err = Some(StlError::Parse(e)),
            },
            Err(_) => ascii_err = Some(StlError::NotText),
        }
    }
    if binary_length_consistent(bytes) {
        return parse_binary(bytes);
    }
    match ascii_err {
        Some(e) => Err(e),
        None if bytes.len() < BINARY_HEADER_SIZE + 4 => Err(StlError::TooShort(bytes.len())),
        None => parse_binary(bytes),
    }
}

/// Serialize in the requested format using the canonical writers.
pub fn write(model: &StlModel, format: StlFormat) -> Vec<u8> {
    match format {
        StlFormat::Ascii => write_canonical_ascii(model).into_bytes(),
        StlFormat::Binary => write_binary(model),
    }
}
