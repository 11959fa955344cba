use std::collections::{BTreeMap, BTreeSet};

use orientcalc::skeleton::*;

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

#[test]
fn subdivision_cell_counts_and_euler() {
    for (name, k) in library() {
        let sd = barycentric_subdivision(&k);
        let expect: usize = k.maximal().iter().map(|s| factorial(s.len())).sum();
        assert_eq!(sd.complex.maximal().len(), expect, "{name}");
        assert_eq!(sd.complex.vertex_count(), k.faces().len(), "{name}");
        assert_eq!(sd.complex.euler_characteristic(), k.euler_characteristic(), "{name}");
    }
    assert_eq!(barycentric_subdivision(&octahedron()).complex.maximal().len(), 48);
}

#[test]
fn dual_and_primal_skeletons_are_disjoint() {
    for (name, k) in library() {
        let n = k.dim();
        let sd = barycentric_subdivision(&k);
        for d in 1..=n {
            let y = relative_skeleton(&k, n - d).unwrap();
            let y_sd = sd.embed(&y);
            let c = dual_skeleton(&k, &sd, d).unwrap();
            assert!(c.is_closed() && y_sd.is_closed(), "{name} d={d}");
            assert!(c.is_disjoint_from(&y_sd) && c.shares_no_face_with(&y_sd), "{name} d={d}");
            assert!(c.dim().unwrap() < d, "{name} d={d}");
            assert!(y.dim().unwrap() <= n - d, "{name} d={d}");
            assert!(retracts_onto(&sd, &y_sd, &c), "{name} d={d}");
        }
    }
}

#[test]
fn icosahedron_dual_is_the_dodecahedron() {
    let k = icosahedron();
    let sd = barycentric_subdivision(&k);
    let cells = dual_cells(&k, &sd, 2).unwrap();
    let edges: Vec<&DualCell> = cells.iter().filter(|c| c.dim == 1).collect();
    let verts: Vec<&DualCell> = cells.iter().filter(|c| c.dim == 0).collect();
    assert_eq!((edges.len(), verts.len()), (30, 20));
    // Each dual edge crosses one primal edge and joins the two triangles on it.
    let mut degree: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for e in &edges {
        assert_eq!(e.pieces.len(), 2);
        let ends: BTreeSet<Vec<usize>> =
            e.pieces.iter().flat_map(|p| p.iter().map(|v| sd.barycenter_of[*v].clone())).filter(|f| f.len() == 3).collect();
        assert_eq!(ends.len(), 2);
        for f in ends {
            *degree.entry(f).or_default() += 1;
        }
    }
    assert_eq!(degree.len(), 20);
    assert!(degree.values().all(|d| *d == 3));
    // The dual 1-skeleton misses all 12 original vertices.
    let c = dual_skeleton(&k, &sd, 2).unwrap();
    for v in 0..12 {
        assert!(!c.vertices().contains(&sd.vertex_of(&[v]).unwrap()));
    }
}

#[test]
fn boundary_4_simplex_dual_graph() {
    let k = boundary_of_simplex(3);
    let sd = barycentric_subdivision(&k);
    let c = dual_skeleton(&k, &sd, 2).unwrap();
    let dims: Vec<usize> = c.vertices().iter().map(|v| sd.barycenter_of[*v].len() - 1).collect();
    assert_eq!(dims.iter().filter(|d| **d == 2).count(), 10);
    assert_eq!(dims.iter().filter(|d| **d == 3).count(), 5);
    assert_eq!(c.dim(), Some(1));
    let y = relative_skeleton(&k, 1).unwrap();
    assert_eq!((y.count_of_dim(0), y.count_of_dim(1)), (5, 10));
}

#[test]
fn octahedron_zero_skeleton() {
    let y = relative_skeleton(&octahedron(), 0).unwrap();
    assert_eq!(y.simplices.len(), 6);
}

fn strip(f: &[usize]) -> Vec<usize> {
    f.iter().map(|v| v / 2).collect::<Vec<_>>()
}

#[test]
fn prism_ends_and_relative_constructions() {
    for (name, k) in library() {
        let n = k.dim();
        let p = prism_triangulation(&k).unwrap();
        assert_eq!(p.complex.maximal().len(), (n + 1) * k.maximal().len(), "{name}");
        assert_eq!(p.end_complex(0), k, "{name}");
        assert_eq!(p.end_complex(1), k, "{name}");
        assert_eq!(p.complex.euler_characteristic(), k.euler_characteristic(), "{name}");
        if k.is_closed_pseudomanifold() {
            // Boundary of the prism over a closed complex is exactly the two ends.
            let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for s in p.complex.maximal() {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    *count.entry(f).or_default() += 1;
                }
            }
            let boundary: BTreeSet<Vec<usize>> = count.into_iter().filter(|(_, c)| *c == 1).map(|(f, _)| f).collect();
            let ends = p.ends();
            let end_tops: BTreeSet<Vec<usize>> = ends.simplices.iter().filter(|f| f.len() == n + 1).cloned().collect();
            assert_eq!(boundary, end_tops, "{name}");
        }

        let sdp = barycentric_subdivision(&p.complex);
        let sdk = barycentric_subdivision(&k);
        let ends = p.ends();
        for d in 1..=n {
            let z = relative_skeleton_rel(&p.complex, n + 1 - d, &ends).unwrap();
            let dd = relative_dual_skeleton(&p.complex, &sdp, d, &ends).unwrap();
            assert!(dd.is_disjoint_from(&sdp.embed(&z)), "{name} d={d}");
            assert!(retracts_onto(&sdp, &sdp.embed(&z), &dd), "{name} d={d}");

            let y = relative_skeleton(&k, n - d).unwrap();
            let c = dual_skeleton(&k, &sdk, d).unwrap();
            for end in [&p.end0, &p.end1] {
                // Z meets each end in Y.
                let z_end: BTreeSet<Vec<usize>> =
                    z.simplices.iter().filter(|f| end.simplices.contains(*f)).map(|f| strip(f)).collect();
                assert_eq!(z_end, y.simplices, "{name} d={d}");
                // D meets each end in C, compared through barycenter faces.
                let d_end: BTreeSet<Vec<usize>> = dd
                    .vertices()
                    .iter()
                    .map(|v| &sdp.barycenter_of[*v])
                    .filter(|f| end.simplices.contains(*f))
                    .map(|f| strip(f))
                    .collect();
                let c_faces: BTreeSet<Vec<usize>> = c.vertices().iter().map(|v| sdk.barycenter_of[*v].clone()).collect();
                assert_eq!(d_end, c_faces, "{name} d={d}");
            }
        }
    }
}

#[test]
fn text_round_trip_for_library_and_subdivisions() {
    for (name, k) in library() {
        let t = write_complex(&k);
        assert_eq!(parse_complex(&t).unwrap(), k, "{name}");
        assert_eq!(write_complex(&parse_complex(&t).unwrap()), t, "{name}");
        let sd = barycentric_subdivision(&k).complex;
        let back = parse_complex(&write_complex(&sd)).unwrap();
        assert_eq!(back.f_vector(), sd.f_vector(), "{name}");
    }
}
