//! Fixture complexes built by enumeration.

use super::{quotient, GroupAction, SimplicialComplex, VertexId, VertexMap};
use crate::error::{Error, Result};

/// Boundary of the regular icosahedron. Vertex `v` and `v + 6` are antipodal.
pub const ICOSAHEDRON_FACETS: [[VertexId; 3]; 20] = [
    [0, 1, 2],
    [0, 1, 10],
    [0, 2, 9],
    [0, 5, 9],
    [0, 5, 10],
    [1, 2, 11],
    [1, 3, 10],
    [1, 3, 11],
    [2, 4, 9],
    [2, 4, 11],
    [3, 6, 8],
    [3, 6, 11],
    [3, 8, 10],
    [4, 6, 7],
    [4, 6, 11],
    [4, 7, 9],
    [5, 7, 8],
    [5, 7, 9],
    [5, 8, 10],
    [6, 7, 8],
];

pub fn point() -> SimplicialComplex {
    SimplicialComplex::from_facets("point", vec![vec![0]]).expect("valid")
}

/// Boundary of the `(n+1)`-simplex on vertices `0..=n+1`, an `n`-sphere.
pub fn simplex_sphere(n: usize) -> SimplicialComplex {
    let verts: Vec<VertexId> = (0..=(n as VertexId + 1)).collect();
    let facets = (0..verts.len()).map(|skip| {
        verts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| *v)
            .collect::<Vec<_>>()
    });
    SimplicialComplex::from_facets(format!("S{n}"), facets).expect("valid")
}

/// The full `n`-simplex on `0..=n`.
pub fn solid_simplex(n: usize) -> SimplicialComplex {
    let verts: Vec<VertexId> = (0..=n as VertexId).collect();
    SimplicialComplex::from_facets(format!("D{n}"), vec![verts]).expect("valid")
}

/// Cycle on `n ≥ 3` vertices.
pub fn circle(n: usize) -> SimplicialComplex {
    assert!(n >= 3, "a simplicial circle needs at least three vertices");
    let n = n as VertexId;
    SimplicialComplex::from_facets(format!("C{n}"), (0..n).map(|i| vec![i, (i + 1) % n]))
        .expect("valid")
}

/// Boundary of the `(n+1)`-dimensional cross-polytope, an `n`-sphere.
///
/// Axis `i` contributes vertex `2i` (positive side) and `2i + 1` (negative
/// side). Facets pick one side per axis.
pub fn cross_polytope_sphere(n: usize) -> SimplicialComplex {
    assert!(n >= 1);
    let axes = n + 1;
    let facets = (0u64..(1u64 << axes)).map(|signs| {
        (0..axes)
            .map(|i| 2 * i as VertexId + ((signs >> i) & 1) as VertexId)
            .collect::<Vec<_>>()
    });
    SimplicialComplex::from_facets(format!("X{n}"), facets).expect("valid")
}

/// Reflection of a cross-polytope sphere in the hyperplane orthogonal to `axis`.
pub fn cross_polytope_reflection(k: &SimplicialComplex, axis: u32) -> VertexMap {
    VertexMap::from_fn(k, |v| if v / 2 == axis { v ^ 1 } else { v })
}

/// The antipodal map `x -> -x` of a cross-polytope sphere.
pub fn cross_polytope_antipodal(k: &SimplicialComplex) -> VertexMap {
    VertexMap::from_fn(k, |v| v ^ 1)
}

/// Icosahedron from explicit facet data; the data must describe a 2-sphere
/// with 12 vertices, 30 edges and 20 triangles.
pub fn icosahedron_from(facets: &[[VertexId; 3]]) -> Result<SimplicialComplex> {
    let k = SimplicialComplex::from_facets("icosahedron", facets.iter().map(|f| f.to_vec()))?;
    if k.f_vector() != [12, 30, 20] || k.euler() != 2 {
        return Err(Error::MalformedInput(format!(
            "icosahedron data has f-vector {:?} and Euler characteristic {}",
            k.f_vector(),
            k.euler()
        )));
    }
    Ok(k)
}

pub fn icosahedron() -> SimplicialComplex {
    icosahedron_from(&ICOSAHEDRON_FACETS).expect("embedded icosahedron is valid")
}

pub fn icosahedron_antipodal(k: &SimplicialComplex) -> VertexMap {
    VertexMap::from_fn(k, |v| (v + 6) % 12)
}

/// Real projective plane as the antipodal quotient of the icosahedron.
pub fn rp2() -> SimplicialComplex {
    rp2_from(&ICOSAHEDRON_FACETS).expect("embedded icosahedron is valid")
}

/// Antipodal quotient of an icosahedron given by explicit facet data.
pub fn rp2_from(facets: &[[VertexId; 3]]) -> Result<SimplicialComplex> {
    let ico = icosahedron_from(facets)?;
    let action = GroupAction::new(&ico, vec![icosahedron_antipodal(&ico)])?;
    Ok(quotient(&ico, &action)?.with_name("RP2"))
}

/// Staircase triangulation of the product of two 3-cycles.
pub fn torus() -> SimplicialComplex {
    super::product(&circle(3), &circle(3)).with_name("T2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn simplex_sphere_counts() {
        assert_eq!(simplex_sphere(0).f_vector(), vec![2]);
        assert_eq!(simplex_sphere(0).euler(), 2);
        assert_eq!(simplex_sphere(2).f_vector(), vec![4, 6, 4]);
        assert_eq!(simplex_sphere(3).f_vector(), vec![5, 10, 10, 5]);
        assert_eq!(simplex_sphere(3).euler(), 0);
        for n in 0..6 {
            let f = simplex_sphere(n).f_vector();
            for (k, fk) in f.iter().enumerate() {
                assert_eq!(*fk, binom(n + 2, k + 1));
            }
        }
    }

    #[test]
    fn cross_polytope_counts() {
        assert_eq!(cross_polytope_sphere(1).f_vector(), vec![4, 4]);
        assert_eq!(cross_polytope_sphere(2).f_vector(), vec![6, 12, 8]);
        assert_eq!(cross_polytope_sphere(2).euler(), 2);
        assert_eq!(cross_polytope_sphere(3).f_vector(), vec![8, 24, 32, 16]);
        assert_eq!(cross_polytope_sphere(3).euler(), 0);
        for n in 1..5 {
            let f = cross_polytope_sphere(n).f_vector();
            for (k, fk) in f.iter().enumerate() {
                assert_eq!(*fk, (1 << (k + 1)) * binom(n + 1, k + 1));
            }
        }
    }

    #[test]
    fn icosahedron_data() {
        let k = icosahedron();
        assert_eq!(k.f_vector(), vec![12, 30, 20]);
        let mut corrupted = ICOSAHEDRON_FACETS;
        corrupted[0] = [0, 1, 3];
        assert!(icosahedron_from(&corrupted).is_err());
    }

    #[test]
    fn rp2_counts() {
        let p = rp2();
        assert_eq!(p.f_vector(), vec![6, 15, 10]);
        assert_eq!(p.euler(), 1);
    }

    #[test]
    fn torus_counts() {
        let t = torus();
        assert_eq!(t.f_vector(), vec![9, 27, 18]);
        assert_eq!(t.euler(), 0);
    }

    #[test]
    fn maps_are_automorphisms() {
        let x = cross_polytope_sphere(3);
        assert!(cross_polytope_antipodal(&x).validate_simplicial(&x).is_ok());
        assert!(cross_polytope_reflection(&x, 0).validate_simplicial(&x).is_ok());
        let ico = icosahedron();
        assert!(icosahedron_antipodal(&ico).validate_simplicial(&ico).is_ok());
    }
}
