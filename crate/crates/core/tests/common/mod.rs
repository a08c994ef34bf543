//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlsan::stl::{self, Facet, StlFormat, StlModel, Vec3};

pub const LUCY: &str = "solid StanfordLucy
  facet normal -0.1128 -0.818 -0.5641
    outer loop
      vertex -13.101 0.527998 52.206
      vertex -13.035 0.791999 51.81
      vertex -12.771 0.527998 52.14
    endloop
  endfacet
  facet normal -0.0573 0.774 0.6306
    outer loop
      vertex 5.906999 7.589998 50.886
      vertex 5.972999 7.325997 51.216
      vertex 6.236998 7.722    50.754
    endloop
  endfacet
endsolid StanfordLucy
";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hand-rolled binary STL assembler, independent of the crate's writer.
pub struct BinaryBuilder {
    bytes: Vec<u8>,
}

impl BinaryBuilder {
    pub fn new(name: &str, count: u32) -> Self {
        let mut bytes = name.as_bytes().to_vec();
        bytes.resize(80, 0);
        bytes.extend_from_slice(&count.to_le_bytes());
        BinaryBuilder { bytes }
    }

    pub fn facet(mut self, floats: [f32; 12], attribute: u16) -> Self {
        for f in floats {
            self.bytes.extend_from_slice(&f.to_bits().to_le_bytes());
        }
        self.bytes.push((attribute & 0xFF) as u8);
        self.bytes.push((attribute >> 8) as u8);
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

fn random_float(r: &mut ChaCha8Rng) -> f32 {
    match r.random_range(0..10) {
        0 => 0.0,
        1 => -0.0,
        2 => f32::from_bits(r.random_range(1..0x0080_0000)), // subnormal
        3 => r.random_range(-1.0e30f32..1.0e30),
        _ => r.random_range(-500.0f32..500.0),
    }
}

/// Binary fixture `k`: canonical header name, arbitrary finite floats and attributes.
pub fn binary_fixture(k: u64) -> Vec<u8> {
    let mut r = rng(1000 + k);
    let n = r.random_range(0..40u32);
    let name = format!("fixture_{k}-bin");
    let mut b = BinaryBuilder::new(&name, n);
    for _ in 0..n {
        let mut fl = [0f32; 12];
        for f in &mut fl {
            *f = random_float(&mut r);
        }
        b = b.facet(fl, r.random());
    }
    b.finish()
}

fn random_vertex(r: &mut ChaCha8Rng, grid: bool) -> Vec3 {
    if grid {
        Vec3::new(r.random_range(-3i8..3) as f32, r.random_range(-3i8..3) as f32, r.random_range(-3i8..3) as f32)
    } else {
        Vec3::new(r.random_range(-50.0f32..50.0), r.random_range(-50.0f32..50.0), r.random_range(-50.0f32..50.0))
    }
}

/// Unstructured triangle soup. With `grid`, coordinates come from a tiny lattice
/// so repeated and degenerate facets occur; attributes are random.
pub fn triangle_soup(seed: u64, n: usize, grid: bool) -> StlModel {
    let mut r = rng(seed);
    let facets = (0..n)
        .map(|_| {
            let v = [random_vertex(&mut r, grid), random_vertex(&mut r, grid), random_vertex(&mut r, grid)];
            let mut f = Facet::new(v, random_vertex(&mut r, false));
            f.attribute = r.random();
            f
        })
        .collect();
    StlModel::new("soup", facets, StlFormat::Binary)
}

/// Re-spell canonical ASCII with tabs, mixed notation and uneven spacing.
pub fn messy_ascii(model: &StlModel, seed: u64) -> String {
    let mut r = rng(seed);
    let mut s = format!("solid {}\n", model.solid_name);
    let num = |v: f32, r: &mut ChaCha8Rng| if r.random() { format!("{v:e}") } else { format!("{v}") };
    let ws = |r: &mut ChaCha8Rng| if r.random() { "\t".to_string() } else { " ".repeat(r.random_range(1..4)) };
    for f in &model.facets {
        s += &format!("{}facet normal", ws(&mut r));
        for c in f.normal.to_array() {
            s += &format!("{}{}", ws(&mut r), num(c, &mut r));
        }
        s += &format!("\n{}outer loop\n", ws(&mut r));
        for v in &f.vertices {
            s += &format!("{}vertex", ws(&mut r));
            for c in v.to_array() {
                s += &format!("{}{}", ws(&mut r), num(c, &mut r));
            }
            s += "\n";
        }
        s += &format!("{}endloop\n{}endfacet\n", ws(&mut r), ws(&mut r));
    }
    s += &format!("endsolid {}\n", model.solid_name);
    s
}

pub fn ascii_icosphere(subdivisions: u32) -> String {
    let mut m = stl::generate_test_mesh(subdivisions);
    m.source_format = StlFormat::Ascii;
    stl::write_canonical_ascii(&m)
}

/// Unit normal from `(v2 - v1) x (v3 - v2)`, a different edge pair than the
/// production code uses; same direction for any non-degenerate triangle.
pub fn oracle_normal(v: &[Vec3; 3]) -> [f64; 3] {
    let d = |a: Vec3| [a.x as f64, a.y as f64, a.z as f64];
    let (a, b, c) = (d(v[0]), d(v[1]), d(v[2]));
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let w = [c[0] - b[0], c[1] - b[1], c[2] - b[2]];
    let n = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
    let l = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    [n[0] / l, n[1] / l, n[2] / l]
}

/// Pearson statistic for a 2 x k contingency table given as two count rows
/// over the same categories; columns with a zero margin are dropped.
/// Returns `(statistic, degrees_of_freedom)`.
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> (f64, usize) {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let mut stat = 0.0;
    let mut cols = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cols += 1;
        let ea = na * col / total;
        let eb = nb * col / total;
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    (stat, cols.saturating_sub(1))
}

pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - alpha)
}
