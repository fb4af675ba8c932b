//! Signed boundary operators, orientation and storage accounting.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Largest row or column count accepted by [`SparseIntMatrix::parse_triplets`].
pub const MAX_PARSED_DIMENSION: usize = 1 << 24;

/// Integer matrix in compressed sparse column form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<i64>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(row, col, value)` triplets. Zero values are dropped;
    /// out-of-range indices and repeated positions are rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, i64)> = triplets.into_iter().collect();
        for &(r, c, _) in &t {
            if r >= rows || c >= cols {
                return Err(Error::MalformedInput(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
        }
        t.sort_unstable_by_key(|&(r, c, _)| (c, r));
        if let Some(w) = t.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::MalformedInput(format!(
                "duplicate entry at ({}, {})",
                w[0].0, w[0].1
            )));
        }
        t.retain(|e| e.2 != 0);
        let mut col_ptr = vec![0usize; cols + 1];
        for &(_, c, _) in &t {
            col_ptr[c + 1] += 1;
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        Ok(SparseIntMatrix {
            rows,
            cols,
            col_ptr,
            row_idx: t.iter().map(|e| e.0).collect(),
            values: t.iter().map(|e| e.2).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros of column `j` as `(row, value)`, rows ascending.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    /// Triplets in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.cols).flat_map(move |j| self.column(j).map(move |(i, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        SparseIntMatrix::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v)))
            .expect("transpose of a valid matrix")
    }

    /// Exact sparse product `self * rhs`.
    pub fn matmul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Vec::new();
        for j in 0..rhs.cols {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (k, b) in rhs.column(j) {
                for (i, a) in self.column(k) {
                    *acc.entry(i).or_insert(0) += a * b;
                }
            }
            out.extend(acc.into_iter().filter(|e| e.1 != 0).map(|(i, v)| (i, j, v)));
        }
        SparseIntMatrix::from_triplets(self.rows, rhs.cols, out)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        for (j, xj) in x.iter().enumerate().take(self.cols) {
            for (i, v) in self.column(j) {
                y[i] += v as f64 * xj;
            }
        }
        y
    }

    pub fn transpose_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|j| self.column(j).map(|(i, v)| v as f64 * x[i]).sum())
            .collect()
    }

    /// Exact `y = self * x` over the integers.
    pub fn mul_vec_int(&self, x: &[i64]) -> Vec<i64> {
        let mut y = vec![0; self.rows];
        for (j, xj) in x.iter().enumerate().take(self.cols) {
            for (i, v) in self.column(j) {
                y[i] += v * xj;
            }
        }
        y
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v as f64;
        }
        m
    }

    /// Writes the matrix in the triplet text format: a header line
    /// `k rows cols nnz` followed by one `row col value` line per nonzero.
    pub fn write_triplets(&self, k: usize) -> String {
        let mut s = format!("{k} {} {} {}\n", self.rows, self.cols, self.nnz());
        for (i, j, v) in self.triplets() {
            writeln!(s, "{i} {j} {v}").expect("writing to a String");
        }
        s
    }

    /// Parses the triplet text format produced by [`write_triplets`](Self::write_triplets).
    pub fn parse_triplets(text: &str) -> Result<(usize, SparseIntMatrix)> {
        let bad = |msg: String| Error::MalformedInput(msg);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header line".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| bad(format!("header field `{t}`: {e}"))))
            .collect::<Result<_>>()?;
        let [k, rows, cols, nnz] = h[..] else {
            return Err(bad(format!("header must be `k rows cols nnz`, got `{header}`")));
        };
        if rows > MAX_PARSED_DIMENSION || cols > MAX_PARSED_DIMENSION {
            return Err(bad(format!(
                "matrix shape {rows}x{cols} exceeds the parser limit of {MAX_PARSED_DIMENSION}"
            )));
        }
        let mut triplets = Vec::new();
        for (n, line) in lines.enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = f[..] else {
                return Err(bad(format!("line {}: expected `row col value`", n + 2)));
            };
            let parse_idx = |t: &str| t.parse::<usize>().map_err(|e| bad(format!("line {}: {e}", n + 2)));
            let value = v.parse::<i64>().map_err(|e| bad(format!("line {}: {e}", n + 2)))?;
            if value == 0 {
                return Err(bad(format!("line {}: explicit zero entry", n + 2)));
            }
            triplets.push((parse_idx(r)?, parse_idx(c)?, value));
        }
        if triplets.len() != nnz {
            return Err(bad(format!("header declares {nnz} entries, found {}", triplets.len())));
        }
        Ok((k, SparseIntMatrix::from_triplets(rows, cols, triplets)?))
    }
}

/// Canonical chain bases of a complex together with its boundary operators.
///
/// `boundary(k)` is `∂_k : C_k → C_{k-1}`, an `f_{k-1} × f_k` matrix; `∂_0`
/// has zero rows and `∂_{dim+1}` has zero columns. The coboundary
/// `d_k : C^k → C^{k+1}` is the transpose of `∂_{k+1}`.
#[derive(Clone, Debug)]
pub struct ChainSystem<'a> {
    complex: &'a SimplicialComplex,
    boundary: Vec<SparseIntMatrix>,
}

impl<'a> ChainSystem<'a> {
    pub fn complex(&self) -> &'a SimplicialComplex {
        self.complex
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.complex.dim()
    }

    pub fn basis(&self, k: usize) -> &'a [Simplex] {
        self.complex.simplices(k)
    }

    pub fn boundary(&self, k: usize) -> SparseIntMatrix {
        match self.boundary.get(k) {
            Some(m) => m.clone(),
            None => SparseIntMatrix::zeros(self.complex.count(k.saturating_sub(1)), 0),
        }
    }

    pub fn boundary_ref(&self, k: usize) -> Option<&SparseIntMatrix> {
        self.boundary.get(k)
    }

    /// `d_k : C^k → C^{k+1}`, the transpose of `∂_{k+1}`.
    pub fn coboundary(&self, k: usize) -> SparseIntMatrix {
        self.boundary(k + 1).transpose()
    }
}

/// Builds `∂_k[σ̂_i, σ] = (-1)^i` for every degree. Degrees are assembled in
/// parallel; the result does not depend on scheduling.
pub fn assemble_boundaries(k: &SimplicialComplex) -> ChainSystem<'_> {
    let top = match k.dim() {
        Some(d) => d + 1,
        None => 0,
    };
    let boundary: Vec<SparseIntMatrix> = (0..=top)
        .into_par_iter()
        .map(|deg| boundary_matrix(k, deg))
        .collect();
    ChainSystem { complex: k, boundary }
}

fn boundary_matrix(k: &SimplicialComplex, deg: usize) -> SparseIntMatrix {
    let rows = if deg == 0 { 0 } else { k.count(deg - 1) };
    let cols = k.count(deg);
    if deg == 0 {
        return SparseIntMatrix::zeros(0, cols);
    }
    let triplets = k.simplices(deg).iter().enumerate().flat_map(|(j, s)| {
        s.boundary()
            .map(move |(sign, f)| (k.index_of(&f).expect("faces are present"), j, sign))
            .collect::<Vec<_>>()
    });
    SparseIntMatrix::from_triplets(rows, cols, triplets).expect("boundary entries are in range")
}

/// Coherent orientation of the facets of an orientable pseudomanifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalClass {
    dim: usize,
    signs: Vec<i8>,
}

impl FundamentalClass {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Orientation sign of the `i`-th top simplex.
    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The fundamental cycle as an integer chain.
    pub fn chain(&self) -> Vec<i64> {
        self.signs.iter().map(|&s| s as i64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    Orientable(FundamentalClass),
    /// A closed walk of adjacent facets along which the sign constraints
    /// contradict each other.
    NonOrientable { witness: Vec<Simplex> },
}

impl Orientation {
    pub fn fundamental_class(self) -> Result<FundamentalClass> {
        match self {
            Orientation::Orientable(fc) => Ok(fc),
            Orientation::NonOrientable { .. } => Err(Error::NotOrientable),
        }
    }
}

/// Propagates facet signs across shared ridges so that the ridge terms of
/// the boundary cancel.
pub fn orient(k: &SimplicialComplex) -> Result<Orientation> {
    let d = k
        .dim()
        .ok_or_else(|| Error::NotPseudomanifoldShape("complex is empty".into()))?;
    if let Some(f) = k.facets().iter().find(|f| f.dim() != d) {
        return Err(Error::NotPseudomanifoldShape(format!(
            "facet {f} has dimension {} but the complex has dimension {d}",
            f.dim()
        )));
    }
    let facets = k.simplices(d);
    if d == 0 {
        if facets.len() != 1 {
            return Err(Error::NotPseudomanifoldShape(format!(
                "0-dimensional complex with {} points is not connected",
                facets.len()
            )));
        }
        return Ok(Orientation::Orientable(FundamentalClass { dim: 0, signs: vec![1] }));
    }

    // ridge -> [(facet, incidence sign)]
    let mut cofaces: Vec<Vec<(usize, i8)>> = vec![Vec::new(); k.count(d - 1)];
    for (j, f) in facets.iter().enumerate() {
        for (sign, r) in f.boundary() {
            cofaces[k.index_of(&r).expect("ridge present")].push((j, sign as i8));
        }
    }
    for (r, c) in cofaces.iter().enumerate() {
        if c.len() != 2 {
            return Err(Error::NotPseudomanifold {
                ridge: k.simplices(d - 1)[r].clone(),
                facet_count: c.len(),
            });
        }
    }
    let mut adjacency: Vec<Vec<(usize, i8)>> = vec![Vec::new(); facets.len()];
    for c in &cofaces {
        let ((a, sa), (b, sb)) = (c[0], c[1]);
        // ε_b = -ε_a · s_a · s_b
        let rel = -sa * sb;
        adjacency[a].push((b, rel));
        adjacency[b].push((a, rel));
    }

    let mut signs: Vec<i8> = vec![0; facets.len()];
    let mut parent: Vec<usize> = vec![usize::MAX; facets.len()];
    signs[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    let mut conflict: Option<(usize, usize)> = None;
    while let Some(a) = queue.pop_front() {
        for &(b, rel) in &adjacency[a] {
            let want = signs[a] * rel;
            if signs[b] == 0 {
                signs[b] = want;
                parent[b] = a;
                queue.push_back(b);
            } else if signs[b] != want && conflict.is_none() {
                conflict = Some((a, b));
            }
        }
    }
    if let Some(unreached) = signs.iter().position(|&s| s == 0) {
        return Err(Error::NotPseudomanifoldShape(format!(
            "facet adjacency graph is disconnected; {} is unreachable",
            facets[unreached]
        )));
    }
    if let Some((a, b)) = conflict {
        let path_to_root = |mut x: usize| {
            let mut p = vec![x];
            while parent[x] != usize::MAX {
                x = parent[x];
                p.push(x);
            }
            p
        };
        let pa = path_to_root(a);
        let pb = path_to_root(b);
        let on_a: BTreeSet<usize> = pa.iter().copied().collect();
        let meet = *pb.iter().find(|x| on_a.contains(x)).expect("common root");
        let mut cycle: Vec<usize> = pa.iter().copied().take_while(|&x| x != meet).collect();
        cycle.push(meet);
        let back: Vec<usize> = pb.iter().copied().take_while(|&x| x != meet).collect();
        cycle.extend(back.into_iter().rev());
        return Ok(Orientation::NonOrientable {
            witness: cycle.into_iter().map(|i| facets[i].clone()).collect(),
        });
    }
    Ok(Orientation::Orientable(FundamentalClass { dim: d, signs }))
}

/// Size of the `k`-th boundary matrix stored as 64-bit triplets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StorageEstimate {
    pub k: usize,
    pub nnz: u128,
    pub index_width_bytes: u32,
    pub value_width_bytes: u32,
    pub bytes: u128,
}

pub const INDEX_WIDTH_BYTES: u32 = 8;
pub const VALUE_WIDTH_BYTES: u32 = 8;

/// Nonzeros of `∂_k` are `(k+1)·f_k`; each is stored as two indices and a value.
pub fn estimate_storage(f_vector: &[usize], k: usize) -> Result<StorageEstimate> {
    if k == 0 || k >= f_vector.len() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            dim: f_vector.len().checked_sub(1),
        });
    }
    let nnz = (k as u128 + 1) * f_vector[k] as u128;
    let per_entry = 2 * INDEX_WIDTH_BYTES as u128 + VALUE_WIDTH_BYTES as u128;
    Ok(StorageEstimate {
        k,
        nnz,
        index_width_bytes: INDEX_WIDTH_BYTES,
        value_width_bytes: VALUE_WIDTH_BYTES,
        bytes: nnz * per_entry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::*;

    #[test]
    fn edge_boundary_of_tetrahedron_boundary() {
        let k = simplex_sphere(2);
        let cs = assemble_boundaries(&k);
        let d1 = cs.boundary(1);
        assert_eq!((d1.rows(), d1.cols()), (4, 6));
        for j in 0..6 {
            let mut col: Vec<i64> = d1.column(j).map(|e| e.1).collect();
            col.sort();
            assert_eq!(col, vec![-1, 1]);
        }
    }

    #[test]
    fn boundary_squared_vanishes() {
        let k = simplex_sphere(3);
        let cs = assemble_boundaries(&k);
        assert!(cs.boundary(2).matmul(&cs.boundary(3)).unwrap().is_zero());
    }

    #[test]
    fn point_has_empty_boundaries() {
        let k = point();
        let cs = assemble_boundaries(&k);
        assert_eq!(cs.boundary(0).nnz(), 0);
        assert_eq!(cs.boundary(1).nnz(), 0);
        assert_eq!(cs.boundary(1).cols(), 0);
    }

    #[test]
    fn column_weights() {
        let k = torus();
        let cs = assemble_boundaries(&k);
        for deg in 1..=2 {
            let b = cs.boundary(deg);
            for j in 0..b.cols() {
                assert_eq!(b.column(j).count(), deg + 1);
            }
        }
    }

    #[test]
    fn sphere_is_orientable() {
        let k = simplex_sphere(2);
        let o = orient(&k).unwrap();
        let fc = o.fundamental_class().unwrap();
        let cs = assemble_boundaries(&k);
        assert!(cs.boundary(2).mul_vec_int(&fc.chain()).iter().all(|&x| x == 0));
    }

    #[test]
    fn torus_is_orientable() {
        let k = torus();
        let fc = orient(&k).unwrap().fundamental_class().unwrap();
        assert_eq!(fc.signs().len(), 18);
        let cs = assemble_boundaries(&k);
        assert!(cs.boundary(2).mul_vec_int(&fc.chain()).iter().all(|&x| x == 0));
    }

    #[test]
    fn rp2_is_not_orientable() {
        let k = rp2();
        match orient(&k).unwrap() {
            Orientation::NonOrientable { witness } => {
                assert!(witness.len() >= 3);
                // consecutive witness facets share a ridge, and the walk closes
                for i in 0..witness.len() {
                    let a = &witness[i];
                    let b = &witness[(i + 1) % witness.len()];
                    let shared = a.vertices().iter().filter(|v| b.contains_vertex(**v)).count();
                    assert_eq!(shared, 2);
                }
            }
            other => panic!("expected non-orientable, got {other:?}"),
        }
    }

    #[test]
    fn wedge_is_not_a_pseudomanifold() {
        let k = SimplicialComplex::from_facets(
            "wedge",
            vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![0, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap();
        assert!(matches!(orient(&k), Err(Error::NotPseudomanifold { .. })));
        let two_circles = product(&circle(3), &simplex_sphere(0));
        assert!(matches!(orient(&two_circles), Err(Error::NotPseudomanifoldShape(_))));
    }

    #[test]
    fn storage_estimates() {
        let e = estimate_storage(&simplex_sphere(2).f_vector(), 2).unwrap();
        assert_eq!(e.nnz, 12);
        assert_eq!(e.bytes, 12 * 24);
        let e = estimate_storage(&cross_polytope_sphere(3).f_vector(), 3).unwrap();
        assert_eq!(e.nnz, 64);
        assert!(estimate_storage(&[4, 6, 4], 0).is_err());
        assert!(estimate_storage(&[4, 6, 4], 3).is_err());
    }

    #[test]
    fn storage_matches_triplets_on_subdivision() {
        let k = barycentric_subdivision(&barycentric_subdivision(&simplex_sphere(3)));
        let cs = assemble_boundaries(&k);
        let e = estimate_storage(&k.f_vector(), 3).unwrap();
        assert_eq!(e.nnz, cs.boundary(3).nnz() as u128);
        // 5 facets of ∂Δ⁴, each split into 4! and then 4! again
        assert_eq!(e.nnz, 4 * 5 * 24 * 24);
    }

    #[test]
    fn triplet_text_roundtrip() {
        let k = torus();
        let cs = assemble_boundaries(&k);
        let b = cs.boundary(2);
        let text = b.write_triplets(2);
        assert!(text.starts_with("2 27 18 54\n"));
        let (deg, parsed) = SparseIntMatrix::parse_triplets(&text).unwrap();
        assert_eq!(deg, 2);
        assert_eq!(parsed, b);
    }

    #[test]
    fn triplet_parse_errors() {
        assert!(SparseIntMatrix::parse_triplets("").is_err());
        assert!(SparseIntMatrix::parse_triplets("1 2 2 1\n5 0 1\n").is_err());
        assert!(SparseIntMatrix::parse_triplets("1 2 2 2\n0 0 1\n").is_err());
        assert!(SparseIntMatrix::parse_triplets("1 2 2 2\n0 0 1\n0 0 1\n").is_err());
        assert!(SparseIntMatrix::parse_triplets("1 2 2 1\n0 0 0\n").is_err());
    }
}
