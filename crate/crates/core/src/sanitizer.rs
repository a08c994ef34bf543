//! Channel sanitizers and the full sanitizing pipeline.
//!
//! None of these passes look at decoded bit values or take an encoding
//! parameter. The randomness they consume depends only on the facet count.
//! Geometry is preserved: facets are only permuted, vertices only rotated
//! cyclically, and coordinates are never modified.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::stl::{self, Normal, StlError, StlFormat, StlModel};

/// Where the sanitizer draws its randomness from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomSource {
    /// ChaCha20 keyed from the operating system's entropy source.
    #[default]
    Cryptographic,
    /// Reproducible stream, for evaluation only.
    Seeded(u64),
}

impl RandomSource {
    pub fn rng(&self) -> ChaCha20Rng {
        match *self {
            RandomSource::Cryptographic => ChaCha20Rng::from_os_rng(),
            RandomSource::Seeded(seed) => ChaCha20Rng::seed_from_u64(seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Ascii,
    Binary,
    Preserve,
}

impl OutputFormat {
    pub fn resolve(self, source: StlFormat) -> StlFormat {
        match self {
            OutputFormat::Ascii => StlFormat::Ascii,
            OutputFormat::Binary => StlFormat::Binary,
            OutputFormat::Preserve => source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SanitizeReport {
    pub facet_count: usize,
    /// Facets that ended up at a different index.
    pub facets_shuffled: usize,
    /// Facets that received a left or right rotation.
    pub vertices_rotated: usize,
    /// Non-degenerate facets whose normal was recomputed.
    pub normals_recomputed: usize,
    /// Facets whose attribute word was non-zero.
    pub attributes_zeroed: usize,
    pub format_written: StlFormat,
}

impl fmt::Display for SanitizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "facets: {}, shuffled: {}, rotated: {}, normals recomputed: {}, attributes zeroed: {}, written as {}",
            self.facet_count,
            self.facets_shuffled,
            self.vertices_rotated,
            self.normals_recomputed,
            self.attributes_zeroed,
            self.format_written
        )
    }
}

/// Fisher-Yates shuffle of the facet list. Returns how many facets moved.
pub fn sanitize_facet_channel<R: Rng + ?Sized>(model: &mut StlModel, rng: &mut R) -> usize {
    let n = model.facets.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let moved = perm.iter().enumerate().filter(|&(i, &k)| i != k).count();
    model.facets = perm.iter().map(|&k| model.facets[k]).collect();
    moved
}

/// Give every facet a rotation drawn uniformly from {left, right, none}.
/// Returns how many facets were rotated.
pub fn sanitize_vertex_channel<R: Rng + ?Sized>(model: &mut StlModel, rng: &mut R) -> usize {
    let mut rotated = 0;
    for f in &mut model.facets {
        match rng.random_range(0..3u8) {
            0 => *f = f.rotated_left(),
            1 => *f = f.rotated_right(),
            _ => continue,
        }
        rotated += 1;
    }
    rotated
}

/// Replace every stored normal by the RHR unit normal of its listed vertex
/// order (zero for zero-area facets) and clear attribute words.
///
/// Returns `(normals_recomputed, attributes_zeroed)`.
pub fn sanitize_normal_channel(model: &mut StlModel) -> (usize, usize) {
    let mut recomputed = 0;
    let mut zeroed = 0;
    for f in &mut model.facets {
        f.normal = match f.rhr_normal() {
            Some(n) => {
                recomputed += 1;
                n
            }
            None => Normal::ZERO,
        };
        if f.attribute != 0 {
            zeroed += 1;
            f.attribute = 0;
        }
    }
    (recomputed, zeroed)
}

/// Facet, vertex, then normal pass over a parsed model.
pub fn sanitize_model<R: Rng + ?Sized>(model: &mut StlModel, rng: &mut R) -> SanitizeReport {
    let facets_shuffled = sanitize_facet_channel(model, rng);
    let vertices_rotated = sanitize_vertex_channel(model, rng);
    let (normals_recomputed, attributes_zeroed) = sanitize_normal_channel(model);
    SanitizeReport {
        facet_count: model.facets.len(),
        facets_shuffled,
        vertices_rotated,
        normals_recomputed,
        attributes_zeroed,
        format_written: model.source_format,
    }
}

/// Parse, sanitize every channel, and re-serialize with the canonical writer.
///
/// The number-notation and whitespace channels are erased by the canonical
/// ASCII writer; the binary header is rewritten from the sanitized name.
pub fn sanitize_all(
    input: &[u8],
    source: &RandomSource,
    output_format: OutputFormat,
) -> Result<(Vec<u8>, SanitizeReport), StlError> {
    let mut model = stl::parse(input)?;
    let format = output_format.resolve(model.source_format);
    let mut rng = source.rng();
    let mut report = sanitize_model(&mut model, &mut rng);
    report.format_written = format;
    Ok((stl::write(&model, format), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stl::{generate_test_mesh, Facet, Vec3};

    const A: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    const B: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    const C: Vec3 = Vec3::new(0.0, 1.0, 0.0);

    fn one(f: Facet) -> StlModel {
        StlModel::new("s", vec![f], StlFormat::Binary)
    }

    #[test]
    fn single_facet_shuffle_is_identity() {
        let mut m = one(Facet::new([A, B, C], Vec3::ZERO));
        let before = m.clone();
        assert_eq!(sanitize_facet_channel(&mut m, &mut RandomSource::Seeded(1).rng()), 0);
        assert_eq!(m, before);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut m = generate_test_mesh(3);
        let before = m.clone();
        let moved = sanitize_facet_channel(&mut m, &mut RandomSource::Seeded(5).rng());
        assert!(moved > 1200, "only {moved} facets moved");
        let mut a: Vec<_> = before.facets.iter().map(Facet::to_bits).collect();
        let mut b: Vec<_> = m.facets.iter().map(Facet::to_bits).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn rotation_states() {
        let f = Facet::new([A, B, C], Vec3::ZERO);
        assert_eq!(f.rotated_left().vertices, [B, C, A]);
        assert_eq!(f.rotated_right().vertices, [C, A, B]);
        let mut counts = [0usize; 3];
        let mut rng = RandomSource::Seeded(9).rng();
        for _ in 0..9999 {
            let mut m = one(f);
            sanitize_vertex_channel(&mut m, &mut rng);
            let first = m.facets[0].vertices[0];
            counts[[A, B, C].iter().position(|&v| v == first).unwrap()] += 1;
        }
        for c in counts {
            let frac = c as f64 / 9999.0;
            assert!((frac - 1.0 / 3.0).abs() < 0.05, "{counts:?}");
        }
    }

    #[test]
    fn normal_recomputed() {
        let mut f = Facet::new([A, B, C], Vec3::new(0.0, 0.0, -1.0));
        f.attribute = 0xBEEF;
        let mut m = one(f);
        assert_eq!(sanitize_normal_channel(&mut m), (1, 1));
        assert_eq!(m.facets[0].normal, Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(m.facets[0].attribute, 0);
        let again = m.clone();
        sanitize_normal_channel(&mut m);
        assert!(m.bit_identical(&again));
    }

    #[test]
    fn degenerate_normal_is_zero() {
        let mut m = one(Facet::new([A, A, B], Vec3::new(1.0, 2.0, 3.0)));
        assert_eq!(sanitize_normal_channel(&mut m), (0, 0));
        assert_eq!(m.facets[0].normal, Vec3::ZERO);
    }

    #[test]
    fn empty_solid() {
        let input = b"solid e\nendsolid e\n";
        let (out, report) = sanitize_all(input, &RandomSource::Seeded(0), OutputFormat::Preserve).unwrap();
        assert_eq!(out, b"solid e\nendsolid e\n");
        assert_eq!(report.facet_count, 0);
        assert_eq!(report.facets_shuffled + report.vertices_rotated + report.normals_recomputed, 0);
        assert_eq!(report.format_written, StlFormat::Ascii);
    }

    #[test]
    fn parse_errors_propagate() {
        assert!(sanitize_all(b"solid x\n facet", &RandomSource::Seeded(0), OutputFormat::Preserve).is_err());
        assert!(sanitize_all(&[1, 2, 3], &RandomSource::Cryptographic, OutputFormat::Binary).is_err());
    }

    #[test]
    fn twice_keeps_geometry() {
        let m = generate_test_mesh(2);
        let input = stl::write_binary(&m);
        let (once, r1) = sanitize_all(&input, &RandomSource::Seeded(1), OutputFormat::Preserve).unwrap();
        let (twice, r2) = sanitize_all(&once, &RandomSource::Seeded(2), OutputFormat::Ascii).unwrap();
        assert_eq!(r1.facet_count, r2.facet_count);
        assert_eq!(r2.format_written, StlFormat::Ascii);
        let out = stl::parse(&twice).unwrap();
        assert_eq!(out.geometry_signature(), m.geometry_signature());
    }

    #[test]
    fn seeded_is_reproducible() {
        let input = stl::write_binary(&generate_test_mesh(1));
        let a = sanitize_all(&input, &RandomSource::Seeded(42), OutputFormat::Preserve).unwrap();
        let b = sanitize_all(&input, &RandomSource::Seeded(42), OutputFormat::Preserve).unwrap();
        assert_eq!(a, b);
        let c = sanitize_all(&input, &RandomSource::Cryptographic, OutputFormat::Preserve).unwrap();
        assert_ne!(a.0, c.0);
    }
}
