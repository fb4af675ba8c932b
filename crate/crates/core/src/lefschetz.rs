//! Lefschetz numbers of simplicial self-maps, at chain level and on
//! rational cohomology, and the vertex-fixed subcomplex.

use num_rational::BigRational;
use num_traits::Zero;

use crate::chain::assemble_boundaries;
use crate::cohomology::{coboundary_columns, cocycle_basis};
use crate::complex::{Simplex, SimplicialComplex, VertexMap};
use crate::error::{Error, Result};
use crate::exact;

/// A vertex map that sends every simplex onto a simplex.
#[derive(Clone, Debug)]
pub struct SimplicialSelfMap {
    map: VertexMap,
}

impl SimplicialSelfMap {
    pub fn new(k: &SimplicialComplex, map: VertexMap) -> Result<Self> {
        map.validate_simplicial(k)?;
        Ok(SimplicialSelfMap { map })
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialSelfMap {
            map: VertexMap::identity(k),
        }
    }

    pub fn vertex_map(&self) -> &VertexMap {
        &self.map
    }

    /// Image of a simplex under the induced chain map: the target simplex
    /// and the sign of the permutation sorting the image, or `None` when the
    /// image is degenerate.
    pub fn push_simplex(&self, s: &Simplex) -> Option<(Simplex, i64)> {
        let mut img = self.map.image(s)?;
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..img.len() {
            let mut j = i;
            while j > 0 && img[j - 1] > img[j] {
                img.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && img[j - 1] == img[j] {
                return None;
            }
        }
        if img.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Simplex::from_sorted(img), sign))
    }
}

#[derive(Clone, Debug)]
pub struct LefschetzReport {
    pub chain_supertrace: i64,
    pub homology_supertrace: BigRational,
    pub fixed_subcomplex: SimplicialComplex,
    pub chi_fixed: i64,
    /// Simplices mapped onto themselves as sets but not vertex by vertex.
    pub setwise_fixed_only: Vec<Simplex>,
}

/// Supertrace of the induced chain map.
pub fn lefschetz_chain(k: &SimplicialComplex, map: &SimplicialSelfMap) -> i64 {
    (0..=k.dim().unwrap_or(0))
        .map(|deg| {
            let tr: i64 = k
                .simplices(deg)
                .iter()
                .filter_map(|s| match map.push_simplex(s) {
                    Some((img, sign)) if &img == s => Some(sign),
                    _ => None,
                })
                .sum();
            if deg % 2 == 0 { tr } else { -tr }
        })
        .sum()
}

/// Supertrace of the induced map on rational cohomology, from cocycle bases.
pub fn lefschetz_homology(k: &SimplicialComplex, map: &SimplicialSelfMap) -> Result<BigRational> {
    let cs = assemble_boundaries(k);
    let mut total = BigRational::zero();
    let Some(d) = k.dim() else { return Ok(total) };
    for deg in 0..=d {
        let basis = cocycle_basis(&cs, deg)?;
        if basis.is_empty() {
            continue;
        }
        // pullback (T*u)(σ) = ± u(T σ)
        let pulled: Vec<Vec<BigRational>> = basis
            .representatives
            .iter()
            .map(|u| {
                k.simplices(deg)
                    .iter()
                    .map(|s| match map.push_simplex(s) {
                        Some((img, sign)) => {
                            let c = u.coefficients()[k.index_of(&img).expect("image is a simplex")].clone();
                            if sign > 0 { c } else { -c }
                        }
                        None => BigRational::zero(),
                    })
                    .collect()
            })
            .collect();
        let gens: Vec<Vec<BigRational>> = coboundary_columns(&cs, deg)
            .into_iter()
            .map(|c| c.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let reps: Vec<Vec<BigRational>> =
            basis.representatives.iter().map(|u| u.coefficients().to_vec()).collect();
        let coords = exact::solve_in_span(&gens, &reps, &pulled, k.count(deg)).ok_or_else(|| {
            Error::MalformedInput(format!("pullback in degree {deg} left the cocycle space"))
        })?;
        let trace = coords
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (i, c)| acc + c[i].clone());
        if deg % 2 == 0 {
            total += trace;
        } else {
            total -= trace;
        }
    }
    Ok(total)
}

/// Subcomplex of simplices whose vertices are all fixed.
pub fn fixed_subcomplex(k: &SimplicialComplex, map: &SimplicialSelfMap) -> SimplicialComplex {
    k.induced_subcomplex(format!("Fix({})", k.name()), |v| map.map.get(v) == Some(v))
}

pub fn lefschetz_report(k: &SimplicialComplex, map: &SimplicialSelfMap) -> Result<LefschetzReport> {
    let fixed = fixed_subcomplex(k, map);
    let setwise_fixed_only = (0..=k.dim().unwrap_or(0))
        .flat_map(|deg| k.simplices(deg).iter())
        .filter(|s| {
            matches!(map.push_simplex(s), Some((img, _)) if &img == *s)
                && s.vertices().iter().any(|&v| map.map.get(v) != Some(v))
        })
        .cloned()
        .collect();
    Ok(LefschetzReport {
        chain_supertrace: lefschetz_chain(k, map),
        homology_supertrace: lefschetz_homology(k, map)?,
        chi_fixed: fixed.euler(),
        fixed_subcomplex: fixed,
        setwise_fixed_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn identity_gives_euler_characteristic() {
        for k in [torus(), rp2(), simplex_sphere(3), cross_polytope_sphere(2)] {
            let id = SimplicialSelfMap::identity(&k);
            assert_eq!(lefschetz_chain(&k, &id), k.euler());
            assert_eq!(lefschetz_homology(&k, &id).unwrap(), q(k.euler()));
        }
    }

    #[test]
    fn reflection_of_three_sphere() {
        let k = cross_polytope_sphere(3);
        let t = SimplicialSelfMap::new(&k, cross_polytope_reflection(&k, 0)).unwrap();
        let r = lefschetz_report(&k, &t).unwrap();
        assert_eq!(r.chain_supertrace, 2);
        assert_eq!(r.homology_supertrace, q(2));
        assert_eq!(r.fixed_subcomplex.f_vector(), vec![6, 12, 8]);
        assert_eq!(r.chi_fixed, 2);
        assert!(r.setwise_fixed_only.is_empty());
    }

    #[test]
    fn antipodal_on_three_sphere() {
        let k = cross_polytope_sphere(3);
        let t = SimplicialSelfMap::new(&k, cross_polytope_antipodal(&k)).unwrap();
        let r = lefschetz_report(&k, &t).unwrap();
        assert_eq!(r.chain_supertrace, 0);
        assert_eq!(r.homology_supertrace, q(0));
        assert!(r.fixed_subcomplex.is_empty());
        assert_eq!(r.chi_fixed, 0);
    }

    #[test]
    fn reflection_of_octahedron() {
        let k = cross_polytope_sphere(2);
        let t = SimplicialSelfMap::new(&k, cross_polytope_reflection(&k, 2)).unwrap();
        assert_eq!(lefschetz_homology(&k, &t).unwrap(), q(0));
        assert_eq!(lefschetz_chain(&k, &t), 0);
        assert_eq!(fixed_subcomplex(&k, &t).f_vector(), vec![4, 4]);
    }

    #[test]
    fn rotation_of_hexagon() {
        let k = circle(6);
        let t = SimplicialSelfMap::new(&k, VertexMap::from_fn(&k, |v| (v + 1) % 6)).unwrap();
        assert_eq!(lefschetz_chain(&k, &t), 0);
        assert_eq!(lefschetz_homology(&k, &t).unwrap(), q(0));
    }

    #[test]
    fn setwise_fixed_edge_is_flagged() {
        // reflection of a square circle swapping 0 and 1 fixes edge [0,1] setwise
        let k = circle(4);
        let t = SimplicialSelfMap::new(
            &k,
            VertexMap::from_fn(&k, |v| match v {
                0 => 1,
                1 => 0,
                2 => 3,
                _ => 2,
            }),
        )
        .unwrap();
        let r = lefschetz_report(&k, &t).unwrap();
        assert_eq!(r.setwise_fixed_only.len(), 2);
        assert_eq!(r.homology_supertrace, q(r.chain_supertrace));
        // degree -1 on H¹ gives 1 + 1
        assert_eq!(r.chain_supertrace, 2);
    }

    #[test]
    fn constant_map() {
        let k = torus();
        let t = SimplicialSelfMap::new(&k, VertexMap::from_fn(&k, |_| 0)).unwrap();
        assert_eq!(lefschetz_chain(&k, &t), 1);
        assert_eq!(lefschetz_homology(&k, &t).unwrap(), q(1));
    }

    #[test]
    fn invalid_map_rejected() {
        let k = circle(4);
        // swapping 0 and 1 sends edge [1,2] to the diagonal [0,2]
        let bad = VertexMap::from_fn(&k, |v| match v {
            0 => 1,
            1 => 0,
            v => v,
        });
        assert!(matches!(SimplicialSelfMap::new(&k, bad), Err(Error::MapInvalid { .. })));
    }

    #[test]
    fn push_simplex_signs() {
        let k = solid_simplex(2);
        let t = SimplicialSelfMap::new(&k, VertexMap::from_fn(&k, |v| [1, 0, 2][v as usize])).unwrap();
        let s = Simplex::new(vec![0, 1, 2]).unwrap();
        assert_eq!(t.push_simplex(&s), Some((s.clone(), -1)));
        let c = SimplicialSelfMap::new(&k, VertexMap::from_fn(&k, |v| v.min(1))).unwrap();
        assert_eq!(c.push_simplex(&s), None);
    }
}
