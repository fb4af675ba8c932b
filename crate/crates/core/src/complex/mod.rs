//! Abstract simplicial complexes.
//!
//! A [`SimplicialComplex`] is stored as its full face poset: for every
//! dimension `k` the sorted list of `k`-simplices plus a lookup table from
//! simplex to position. Positions in these lists are the canonical bases used
//! by every chain and cochain computation downstream.

mod generators;
mod ops;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

pub use generators::{
    circle, cross_polytope_reflection, cross_polytope_sphere, cross_polytope_antipodal,
    icosahedron, icosahedron_antipodal, icosahedron_from, point, rp2, simplex_sphere,
    rp2_from, solid_simplex, torus, ICOSAHEDRON_FACETS,
};
pub use ops::{barycentric_subdivision, join, product, quotient, relabel, suspension};

pub type VertexId = u32;

/// Largest facet accepted by [`SimplicialComplex::from_facets`]; face
/// enumeration is exponential in facet size.
pub const MAX_FACET_VERTICES: usize = 24;

/// An oriented simplex in canonical form: strictly ascending vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts the vertices. Fails if a vertex repeats.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput(format!(
                "vertex {} repeated inside one simplex",
                w[0]
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees strictly ascending order.
    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The face opposite the `i`-th vertex.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    /// Codimension-one faces paired with their boundary sign `(-1)^i`.
    pub fn boundary(&self) -> impl Iterator<Item = (i64, Simplex)> + '_ {
        (0..self.0.len()).map(move |i| (if i % 2 == 0 { 1 } else { -1 }, self.face(i)))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    name: String,
    facets: Vec<Simplex>,
    skeleton: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.skeleton == other.skeleton
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Closes the given facets under taking faces. Duplicate facets and
    /// facets contained in other facets are absorbed.
    pub fn from_facets<I, F>(name: impl Into<String>, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: Into<Vec<VertexId>>,
    {
        let mut top: Vec<Simplex> = Vec::new();
        for f in facets {
            let v = f.into();
            if v.is_empty() {
                return Err(Error::MalformedInput("empty facet".into()));
            }
            if v.len() > MAX_FACET_VERTICES {
                return Err(Error::MalformedInput(format!(
                    "facet with {} vertices exceeds the limit of {MAX_FACET_VERTICES}",
                    v.len()
                )));
            }
            top.push(Simplex::new(v)?);
        }
        Ok(Self::close(name.into(), top))
    }

    fn close(name: String, top: Vec<Simplex>) -> Self {
        let max_len = top.iter().map(Simplex::len).max().unwrap_or(0);
        let mut levels: Vec<HashSet<Simplex>> = vec![HashSet::new(); max_len];
        for s in top {
            if levels[s.dim()].contains(&s) {
                continue;
            }
            let n = s.len();
            // every nonempty subset, via bitmask
            for mask in 1u32..(1u32 << n) {
                let face: Vec<VertexId> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| s.0[i])
                    .collect();
                levels[face.len() - 1].insert(Simplex(face));
            }
        }
        let skeleton: Vec<Vec<Simplex>> = levels
            .into_iter()
            .map(|set| {
                let mut v: Vec<Simplex> = set.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        Self::from_skeleton(name, skeleton)
    }

    fn from_skeleton(name: String, skeleton: Vec<Vec<Simplex>>) -> Self {
        let index: Vec<HashMap<Simplex, usize>> = skeleton
            .iter()
            .map(|level| level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut covered: HashSet<&Simplex> = HashSet::new();
        for level in skeleton.iter().skip(1) {
            for s in level {
                for i in 0..s.len() {
                    // faces are owned temporaries; look them up to borrow from the skeleton
                    let f = s.face(i);
                    if let Some((k, _)) = index[f.dim()].get_key_value(&f) {
                        covered.insert(k);
                    }
                }
            }
        }
        let facets: Vec<Simplex> = skeleton
            .iter()
            .flatten()
            .filter(|s| !covered.contains(s))
            .cloned()
            .collect();
        SimplicialComplex {
            name,
            facets,
            skeleton,
            index,
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self::close(name.into(), Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Maximal simplices, ordered by dimension then lexicographically.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.skeleton.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.skeleton.is_empty()
    }

    /// The sorted `k`-simplices; empty above the dimension.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.skeleton.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.skeleton.iter().map(Vec::len).collect()
    }

    pub fn euler(&self) -> i64 {
        self.skeleton
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.count(0)
    }

    /// Position of `s` in the canonical basis of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    pub fn total_simplices(&self) -> usize {
        self.skeleton.iter().map(Vec::len).sum()
    }

    /// Facet lists as plain vertex vectors, in canonical order.
    pub fn facet_lists(&self) -> Vec<Vec<VertexId>> {
        self.facets.iter().map(|s| s.0.clone()).collect()
    }

    /// Subcomplex spanned by the simplices all of whose vertices satisfy `keep`.
    pub fn induced_subcomplex(&self, name: impl Into<String>, keep: impl Fn(VertexId) -> bool) -> Self {
        let mut skeleton: Vec<Vec<Simplex>> = self
            .skeleton
            .iter()
            .map(|l| l.iter().filter(|s| s.0.iter().all(|&v| keep(v))).cloned().collect())
            .collect();
        while skeleton.last().is_some_and(Vec::is_empty) {
            skeleton.pop();
        }
        Self::from_skeleton(name.into(), skeleton)
    }
}

/// A map on vertex labels. Used both for self-maps and for group generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap(BTreeMap<VertexId, VertexId>);

impl VertexMap {
    pub fn new(map: BTreeMap<VertexId, VertexId>) -> Self {
        VertexMap(map)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        VertexMap(k.vertices().into_iter().map(|v| (v, v)).collect())
    }

    pub fn from_fn(k: &SimplicialComplex, f: impl Fn(VertexId) -> VertexId) -> Self {
        VertexMap(k.vertices().into_iter().map(|v| (v, f(v))).collect())
    }

    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.0.get(&v).copied()
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.0
    }

    /// Image vertices in the order of `s`, not sorted.
    pub fn image(&self, s: &Simplex) -> Option<Vec<VertexId>> {
        s.0.iter().map(|v| self.get(*v)).collect()
    }

    /// Checks that every vertex of `k` is mapped into the vertex set of `k`
    /// and that every simplex maps onto a simplex.
    pub fn validate_simplicial(&self, k: &SimplicialComplex) -> Result<()> {
        for v in k.vertices() {
            match self.get(v) {
                None => {
                    return Err(Error::MalformedInput(format!("map has no image for vertex {v}")))
                }
                Some(w) if !k.contains(&Simplex(vec![w])) => {
                    return Err(Error::MalformedInput(format!(
                        "vertex {v} maps to {w}, which is not a vertex of the complex"
                    )))
                }
                _ => {}
            }
        }
        if let Some(&extra) = self.0.keys().find(|v| !k.contains(&Simplex(vec![**v]))) {
            return Err(Error::MalformedInput(format!(
                "map lists vertex {extra}, which is not in the complex"
            )));
        }
        for s in k.facets() {
            let mut img = self.image(s).expect("validated above");
            img.sort_unstable();
            img.dedup();
            if !k.contains(&Simplex(img)) {
                return Err(Error::MapInvalid { simplex: s.clone() });
            }
        }
        Ok(())
    }

    /// True if the map is a bijection of the vertex set.
    pub fn is_permutation(&self) -> bool {
        let targets: HashSet<VertexId> = self.0.values().copied().collect();
        targets.len() == self.0.len() && self.0.keys().all(|v| targets.contains(v))
    }
}

/// A finite group acting by simplicial automorphisms, given by generators.
#[derive(Clone, Debug)]
pub struct GroupAction {
    generators: Vec<VertexMap>,
}

impl GroupAction {
    /// Each generator must be a vertex permutation of `k` that maps simplices
    /// to simplices.
    pub fn new(k: &SimplicialComplex, generators: Vec<VertexMap>) -> Result<Self> {
        for g in &generators {
            g.validate_simplicial(k)?;
            if !g.is_permutation() {
                return Err(Error::MalformedInput(
                    "group generator is not a permutation of the vertices".into(),
                ));
            }
        }
        Ok(GroupAction { generators })
    }

    pub fn trivial() -> Self {
        GroupAction { generators: Vec::new() }
    }

    pub fn generators(&self) -> &[VertexMap] {
        &self.generators
    }
}
