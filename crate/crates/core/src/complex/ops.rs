use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::{simplex_sphere, GroupAction, Simplex, SimplicialComplex, VertexId, VertexMap};
use crate::error::{Error, Result};

/// Upper bound on the order of a group accepted by [`quotient`].
const MAX_GROUP_ORDER: usize = 1 << 16;

/// Staircase triangulation of `|K| × |L|`.
///
/// Vertices are pairs `(a, b)` labelled `pos(a) * |V(L)| + pos(b)` where
/// `pos` is the position in the sorted vertex list, so the product order on
/// pairs agrees with label order. Each pair of facets `σ × τ` contributes one
/// top simplex per monotone lattice path through its vertex grid.
pub fn product(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let kv: HashMap<VertexId, VertexId> =
        k.vertices().into_iter().enumerate().map(|(i, v)| (v, i as VertexId)).collect();
    let lv: HashMap<VertexId, VertexId> =
        l.vertices().into_iter().enumerate().map(|(i, v)| (v, i as VertexId)).collect();
    let width = l.num_vertices() as VertexId;
    let mut facets = Vec::new();
    for s in k.facets() {
        for t in l.facets() {
            let a: Vec<VertexId> = s.vertices().iter().map(|v| kv[v]).collect();
            let b: Vec<VertexId> = t.vertices().iter().map(|v| lv[v]).collect();
            lattice_paths(a.len() - 1, b.len() - 1, &mut |path| {
                facets.push(path.iter().map(|&(i, j)| a[i] * width + b[j]).collect::<Vec<_>>());
            });
        }
    }
    SimplicialComplex::from_facets(format!("{}x{}", k.name(), l.name()), facets)
        .expect("product facets have distinct vertices")
}

type PathSink<'a> = &'a mut dyn FnMut(&[(usize, usize)]);

fn lattice_paths(p: usize, q: usize, emit: PathSink<'_>) {
    fn walk(
        i: usize,
        j: usize,
        p: usize,
        q: usize,
        path: &mut Vec<(usize, usize)>,
        emit: PathSink<'_>,
    ) {
        path.push((i, j));
        if i == p && j == q {
            emit(path);
        } else {
            if i < p {
                walk(i + 1, j, p, q, path, emit);
            }
            if j < q {
                walk(i, j + 1, p, q, path, emit);
            }
        }
        path.pop();
    }
    walk(0, 0, p, q, &mut Vec::new(), emit);
}

/// Orbit complex `K/G` for a group acting freely on simplices.
pub fn quotient(k: &SimplicialComplex, action: &GroupAction) -> Result<SimplicialComplex> {
    let verts = k.vertices();
    let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let gens: Vec<Vec<usize>> = action
        .generators()
        .iter()
        .map(|g| verts.iter().map(|v| pos[&g.get(*v).expect("validated")]).collect())
        .collect();

    let identity: Vec<usize> = (0..verts.len()).collect();
    let mut group: Vec<Vec<usize>> = vec![identity.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity]);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next: Vec<usize> = group[i].iter().map(|&x| g[x]).collect();
            if seen.insert(next.clone()) {
                if group.len() >= MAX_GROUP_ORDER {
                    return Err(Error::MalformedInput(format!(
                        "group generated by the action exceeds order {MAX_GROUP_ORDER}"
                    )));
                }
                group.push(next);
                queue.push_back(group.len() - 1);
            }
        }
    }

    let mut rep: Vec<VertexId> = verts.clone();
    for g in &group {
        for (i, &j) in g.iter().enumerate() {
            rep[i] = rep[i].min(verts[j]);
        }
    }

    let order = group.len();
    for kdim in 0..=k.dim().unwrap_or(0) {
        let mut preimages: HashMap<Vec<VertexId>, Vec<&Simplex>> = HashMap::new();
        for s in k.simplices(kdim) {
            let p: Vec<usize> = s.vertices().iter().map(|v| pos[v]).collect();
            for g in group.iter().skip(1) {
                let mut img: Vec<usize> = p.iter().map(|&x| g[x]).collect();
                img.sort_unstable();
                if img == p {
                    return Err(Error::QuotientInvalid {
                        simplex: s.clone(),
                        reason: "fixed by a nontrivial group element".into(),
                    });
                }
            }
            let mut orbit: Vec<VertexId> = p.iter().map(|&x| rep[x]).collect();
            orbit.sort_unstable();
            if orbit.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::QuotientInvalid {
                    simplex: s.clone(),
                    reason: "contains two vertices of the same orbit".into(),
                });
            }
            preimages.entry(orbit).or_default().push(s);
        }
        if let Some(collided) = preimages.values().find(|v| v.len() != order) {
            return Err(Error::QuotientInvalid {
                simplex: collided[0].clone(),
                reason: format!(
                    "{} simplices share one orbit image, expected the group order {order}",
                    collided.len()
                ),
            });
        }
    }

    let facets = k.facets().iter().map(|s| {
        s.vertices().iter().map(|v| rep[pos[v]]).collect::<Vec<_>>()
    });
    SimplicialComplex::from_facets(format!("{}/G", k.name()), facets)
}

/// Barycentric subdivision. New vertex `i` is the `i`-th simplex of `K` in
/// (dimension, lexicographic) order.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> SimplicialComplex {
    let mut label: HashMap<&Simplex, VertexId> = HashMap::new();
    for kdim in 0..=k.dim().unwrap_or(0) {
        for s in k.simplices(kdim) {
            let next = label.len() as VertexId;
            label.insert(s, next);
        }
    }
    let mut facets = Vec::new();
    for f in k.facets() {
        let n = f.len();
        let mut perm: Vec<usize> = (0..n).collect();
        // Heap's algorithm over vertex orders; each order is one maximal flag
        let mut c = vec![0usize; n];
        let mut emit = |perm: &[usize]| {
            let mut chain = Vec::with_capacity(n);
            let mut acc: Vec<VertexId> = Vec::with_capacity(n);
            for &i in perm {
                acc.push(f.vertices()[i]);
                let mut face = acc.clone();
                face.sort_unstable();
                let face = Simplex::from_sorted(face);
                chain.push(*label.get(&face).expect("face of a facet is in the complex"));
            }
            facets.push(chain);
        };
        emit(&perm);
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                emit(&perm);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
    }
    if k.is_empty() {
        return SimplicialComplex::empty(format!("sd({})", k.name()));
    }
    SimplicialComplex::from_facets(format!("sd({})", k.name()), facets)
        .expect("flags have distinct vertices")
}

/// Join `K * L`; vertices of `L` are shifted past the largest label of `K`.
pub fn join(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let name = format!("{}*{}", k.name(), l.name());
    let shift = k.vertices().last().map_or(0, |v| v + 1);
    let lshift = |s: &Simplex| s.vertices().iter().map(|v| v + shift).collect::<Vec<_>>();
    if k.is_empty() {
        return SimplicialComplex::from_facets(name, l.facets().iter().map(lshift)).expect("valid");
    }
    if l.is_empty() {
        return SimplicialComplex::from_facets(name, k.facet_lists()).expect("valid");
    }
    let mut facets = Vec::new();
    for s in k.facets() {
        for t in l.facets() {
            let mut v = s.vertices().to_vec();
            v.extend(lshift(t));
            facets.push(v);
        }
    }
    SimplicialComplex::from_facets(name, facets).expect("join of disjoint vertex sets")
}

/// Suspension: join with the 0-sphere.
pub fn suspension(k: &SimplicialComplex) -> SimplicialComplex {
    join(k, &simplex_sphere(0)).with_name(format!("S({})", k.name()))
}

/// Applies an injective vertex relabelling.
pub fn relabel(k: &SimplicialComplex, map: &VertexMap) -> Result<SimplicialComplex> {
    let image: BTreeMap<VertexId, VertexId> = k
        .vertices()
        .into_iter()
        .map(|v| {
            map.get(v)
                .map(|w| (v, w))
                .ok_or_else(|| Error::MalformedInput(format!("relabelling misses vertex {v}")))
        })
        .collect::<Result<_>>()?;
    let distinct: HashSet<&VertexId> = image.values().collect();
    if distinct.len() != image.len() {
        return Err(Error::MalformedInput("relabelling is not injective".into()));
    }
    SimplicialComplex::from_facets(
        k.name().to_string(),
        k.facets().iter().map(|s| s.vertices().iter().map(|v| image[v]).collect::<Vec<_>>()),
    )
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn two_points() -> SimplicialComplex {
        simplex_sphere(0)
    }

    #[test]
    fn torus_product() {
        let t = product(&circle(3), &circle(3));
        assert_eq!(t.f_vector(), vec![9, 27, 18]);
        assert_eq!(t.euler(), 0);
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let k = simplex_sphere(2);
        let p = product(&point(), &k);
        assert_eq!(p.f_vector(), k.f_vector());
        let q = product(&k, &point());
        assert_eq!(q.f_vector(), k.f_vector());
    }

    #[test]
    fn circle_times_two_points() {
        let p = product(&circle(3), &two_points());
        assert_eq!(p.f_vector(), vec![6, 6]);
        assert_eq!(p.euler(), 0);
    }

    #[test]
    fn prism_over_triangle() {
        // Δ² × Δ¹ has 3 tetrahedra in the staircase triangulation
        let p = product(&solid_simplex(2), &solid_simplex(1));
        assert_eq!(p.count(3), 3);
        assert_eq!(p.euler(), 1);
    }

    #[test]
    fn rp2_by_quotient() {
        let ico = icosahedron();
        let g = GroupAction::new(&ico, vec![icosahedron_antipodal(&ico)]).unwrap();
        let q = quotient(&ico, &g).unwrap();
        assert_eq!(q.f_vector(), vec![6, 15, 10]);
        assert_eq!(q.euler(), 1);
    }

    #[test]
    fn trivial_quotient_is_identity() {
        let k = torus();
        let q = quotient(&k, &GroupAction::trivial()).unwrap();
        assert_eq!(q, k);
        let id = GroupAction::new(&k, vec![VertexMap::identity(&k)]).unwrap();
        assert_eq!(quotient(&k, &id).unwrap(), k);
    }

    #[test]
    fn no_free_involution_on_tetrahedron_boundary() {
        // every vertex permutation of ∂Δ³ is an automorphism; no involution acts freely
        let k = simplex_sphere(2);
        let perms = permutations(4);
        let mut involutions = 0;
        for p in perms {
            let is_involution = (0..4).all(|i| p[p[i]] == i) && (0..4).any(|i| p[i] != i);
            if !is_involution {
                continue;
            }
            involutions += 1;
            let g = VertexMap::from_fn(&k, |v| p[v as usize] as VertexId);
            let action = GroupAction::new(&k, vec![g]).unwrap();
            assert!(matches!(quotient(&k, &action), Err(Error::QuotientInvalid { .. })));
        }
        assert_eq!(involutions, 9);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn quotient_collapsing_orbits_rejected() {
        // rotation of C6 by 2 identifies vertices 0, 2, 4 — the edge [0,1] and [2,3]
        // map to the same orbit edge; quotient has 2 vertices so edges collide
        let k = circle(6);
        let rot = VertexMap::from_fn(&k, |v| (v + 2) % 6);
        let g = GroupAction::new(&k, vec![rot]).unwrap();
        assert!(matches!(quotient(&k, &g), Err(Error::QuotientInvalid { .. })));
    }

    #[test]
    fn circle_double_cover_quotient() {
        let k = circle(6);
        let rot = VertexMap::from_fn(&k, |v| (v + 3) % 6);
        let g = GroupAction::new(&k, vec![rot]).unwrap();
        let q = quotient(&k, &g).unwrap();
        assert_eq!(q.f_vector(), vec![3, 3]);
    }

    #[test]
    fn subdivision_counts() {
        let tri = solid_simplex(2);
        assert_eq!(barycentric_subdivision(&tri).f_vector(), vec![7, 12, 6]);
        let s = barycentric_subdivision(&simplex_sphere(2));
        assert_eq!(s.f_vector(), vec![14, 36, 24]);
        assert_eq!(s.euler(), 2);
        assert_eq!(barycentric_subdivision(&point()).f_vector(), vec![1]);
    }

    #[test]
    fn join_and_suspension() {
        let s = suspension(&simplex_sphere(1));
        assert_eq!(s.euler(), 2);
        assert_eq!(s.f_vector(), vec![5, 9, 6]);
        let k = circle(4);
        let l = rp2();
        let j = join(&k, &l);
        assert_eq!(j.euler(), k.euler() + l.euler() - k.euler() * l.euler());
    }

    #[test]
    fn relabel_preserves_counts() {
        let k = torus();
        let m = VertexMap::from_fn(&k, |v| 100 - v);
        let r = relabel(&k, &m).unwrap();
        assert_eq!(r.f_vector(), k.f_vector());
        let collapse = VertexMap::from_fn(&k, |_| 0);
        assert!(relabel(&k, &collapse).is_err());
    }
}
