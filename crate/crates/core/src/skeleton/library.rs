use super::SimplicialComplex;

fn build(tops: Vec<Vec<usize>>) -> SimplicialComplex {
    let labelled: Vec<Vec<String>> = tops.iter().map(|t| t.iter().map(|v| v.to_string()).collect()).collect();
    SimplicialComplex::from_labelled(&labelled).expect("library complex")
}

/// The standard k-simplex on vertices 0..=k.
pub fn single_simplex(k: usize) -> SimplicialComplex {
    build(vec![(0..=k).collect()])
}

/// Boundary of the (n+1)-simplex: a triangulated S^n with n+2 vertices.
pub fn boundary_of_simplex(n: usize) -> SimplicialComplex {
    let all: Vec<usize> = (0..n + 2).collect();
    build((0..n + 2).map(|skip| all.iter().copied().filter(|v| *v != skip).collect()).collect())
}

/// Vertices 2i and 2i+1 are antipodal; each triangle picks one from each pair.
pub fn octahedron() -> SimplicialComplex {
    let tops = (0..8usize).map(|m| (0..3).map(|i| 2 * i + (m >> i & 1)).collect()).collect();
    build(tops)
}

/// Apex 0, upper ring 1..=5, lower ring 6..=10, apex 11.
pub fn icosahedron() -> SimplicialComplex {
    let mut tops = Vec::new();
    for i in 0..5 {
        let (u, u1) = (1 + i, 1 + (i + 1) % 5);
        let (l, l1) = (6 + i, 6 + (i + 1) % 5);
        tops.push(vec![0, u, u1]);
        tops.push(vec![11, l, l1]);
        tops.push(vec![u, u1, l]);
        tops.push(vec![u1, l, l1]);
    }
    build(tops)
}

/// The 3×3 grid on the torus, each square cut along the same diagonal.
pub fn torus_3x3() -> SimplicialComplex {
    let v = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
    let mut tops = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            tops.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            tops.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    build(tops)
}

/// The named library complexes, in a fixed order.
pub fn library() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("triangle", single_simplex(2)),
        ("octahedron", octahedron()),
        ("icosahedron", icosahedron()),
        ("boundary-4-simplex", boundary_of_simplex(3)),
        ("torus-18", torus_3x3()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        assert_eq!(octahedron().f_vector(), vec![6, 12, 8]);
        assert_eq!(icosahedron().f_vector(), vec![12, 30, 20]);
        assert_eq!(boundary_of_simplex(3).f_vector(), vec![5, 10, 10, 5]);
        assert_eq!(torus_3x3().f_vector(), vec![9, 27, 18]);
    }

    #[test]
    fn closed_surfaces_and_spheres() {
        for k in [octahedron(), icosahedron(), boundary_of_simplex(3), torus_3x3()] {
            assert!(k.is_closed_pseudomanifold());
        }
        assert!(!single_simplex(2).is_closed_pseudomanifold());
        assert_eq!(octahedron().euler_characteristic(), 2);
        assert_eq!(icosahedron().euler_characteristic(), 2);
        assert_eq!(boundary_of_simplex(3).euler_characteristic(), 0);
        assert_eq!(torus_3x3().euler_characteristic(), 0);
    }

    #[test]
    fn icosahedron_vertices_have_degree_five() {
        let k = icosahedron();
        let edges = k.faces_of_dim(1);
        for v in 0..12 {
            assert_eq!(edges.iter().filter(|e| e.contains(&v)).count(), 5);
        }
    }
}
