//! Order relations on vertices and facets, and the canonical forms built on them.

use std::cmp::Ordering;

use super::CodecError;
use crate::stl::{Facet, Vertex};

/// Lexicographic order on `(x, y, z)` with numeric comparison; `-0.0 == 0.0`.
pub fn vertex_cmp(a: &Vertex, b: &Vertex) -> Ordering {
    let c = |p: f32, q: f32| p.partial_cmp(&q).unwrap_or(Ordering::Equal);
    c(a.x, b.x).then(c(a.y, b.y)).then(c(a.z, b.z))
}

/// The larger of two vertices; `a` on a full tie.
pub fn max_vertex(a: Vertex, b: Vertex) -> Vertex {
    if vertex_cmp(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

pub fn is_degenerate(f: &Facet) -> bool {
    let [a, b, c] = &f.vertices;
    vertex_cmp(a, b).is_eq() || vertex_cmp(b, c).is_eq() || vertex_cmp(a, c).is_eq()
}

pub(crate) fn min_index(f: &Facet) -> usize {
    (0..3).min_by(|&i, &j| vertex_cmp(&f.vertices[i], &f.vertices[j])).unwrap()
}

pub(crate) fn max_index(f: &Facet) -> usize {
    (0..3).max_by(|&i, &j| vertex_cmp(&f.vertices[i], &f.vertices[j])).unwrap()
}

/// Rotate the vertices cyclically until the smallest one is listed first.
pub fn canonical_vertex_rotation(f: &Facet) -> Result<Facet, CodecError> {
    if is_degenerate(f) {
        return Err(CodecError::DegenerateFacet);
    }
    Ok(f.rotated_to(min_index(f)))
}

/// Compare non-degenerate canonical vertex triples, `v1` then `v2` then `v3`.
pub(crate) fn canonical_cmp(f: &Facet, g: &Facet) -> Ordering {
    f.vertices
        .iter()
        .zip(&g.vertices)
        .map(|(a, b)| vertex_cmp(a, b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Order two facets by their canonical vertex rotations.
pub fn compare_facets(f: &Facet, g: &Facet) -> Result<Ordering, CodecError> {
    Ok(canonical_cmp(&canonical_vertex_rotation(f)?, &canonical_vertex_rotation(g)?))
}

/// Indices of non-degenerate facets, in model order.
pub(crate) fn usable_indices(facets: &[Facet]) -> Vec<usize> {
    facets
        .iter()
        .enumerate()
        .filter(|(_, f)| !is_degenerate(f))
        .map(|(i, _)| i)
        .collect()
}
