use super::{Facet, StlFormat, StlModel, Vec3};

const RADIUS: f64 = 10.0;

type P = [f64; 3];

fn normalized(p: P) -> P {
    let l = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / l, p[1] / l, p[2] / l]
}

fn midpoint(a: P, b: P) -> P {
    // symmetric in (a, b), so both triangles sharing an edge get the same point
    normalized([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0])
}

fn icosahedron() -> Vec<[P; 3]> {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let v: Vec<P> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalized)
    .collect();
    const FACES: [[usize; 3]; 20] = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    FACES.iter().map(|f| [v[f[0]], v[f[1]], v[f[2]]]).collect()
}

/// Icosphere of radius 10 with `20 * 4^subdivisions` outward-facing facets
/// and stored normals equal to the right-hand-rule normals.
///
/// Panics if `subdivisions > 6`.
pub fn generate_test_mesh(subdivisions: u32) -> StlModel {
    assert!(subdivisions <= 6, "subdivisions must be in 0..=6, got {subdivisions}");
    let mut tris = icosahedron();
    for _ in 0..subdivisions {
        tris = tris
            .into_iter()
            .flat_map(|[a, b, c]| {
                let (ab, bc, ca) = (midpoint(a, b), midpoint(b, c), midpoint(c, a));
                [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
            })
            .collect();
    }
    let to_f32 = |p: P| Vec3::new((p[0] * RADIUS) as f32, (p[1] * RADIUS) as f32, (p[2] * RADIUS) as f32);
    let facets = tris
        .into_iter()
        .map(|t| {
            let vertices = t.map(to_f32);
            let normal = super::rhr_normal(&vertices).expect("icosphere facets have positive area");
            Facet::new(vertices, normal)
        })
        .collect();
    StlModel::new(format!("icosphere_{subdivisions}"), facets, StlFormat::Binary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facet_counts() {
        assert_eq!(generate_test_mesh(0).facets.len(), 20);
        assert_eq!(generate_test_mesh(1).facets.len(), 80);
        assert_eq!(generate_test_mesh(4).facets.len(), 5120);
    }

    #[test]
    fn normals_point_outward_and_match_rhr() {
        let m = generate_test_mesh(3);
        for f in &m.facets {
            let n = f.rhr_normal().unwrap();
            assert!((n.x - f.normal.x).abs() < 1e-6);
            assert!((n.y - f.normal.y).abs() < 1e-6);
            assert!((n.z - f.normal.z).abs() < 1e-6);
            let c = f.vertices.iter().fold([0f32; 3], |acc, v| [acc[0] + v.x, acc[1] + v.y, acc[2] + v.z]);
            assert!(c[0] * n.x + c[1] * n.y + c[2] * n.z > 0.0);
        }
    }

    #[test]
    fn vertices_distinct_per_facet() {
        for f in &generate_test_mesh(4).facets {
            let [a, b, c] = f.vertices;
            assert!(a != b && b != c && a != c);
        }
    }

    #[test]
    fn mesh_is_closed() {
        // every directed edge appears once and its reverse once
        use std::collections::HashMap;
        let m = generate_test_mesh(2);
        let mut edges: HashMap<([u32; 3], [u32; 3]), i32> = HashMap::new();
        for f in &m.facets {
            for k in 0..3 {
                let a = f.vertices[k].to_bits();
                let b = f.vertices[(k + 1) % 3].to_bits();
                *edges.entry((a, b)).or_default() += 1;
            }
        }
        for (&(a, b), &n) in &edges {
            assert_eq!(n, 1);
            assert_eq!(edges.get(&(b, a)), Some(&1));
        }
    }
}
