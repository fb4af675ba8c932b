//! Exact linear algebra over the integers and rationals.
//!
//! Ranks use fraction-free column reduction on sparse columns, first in
//! `i128` with overflow detection and then in arbitrary precision if needed.
//! Lattice routines work on dense column-major `BigInt` matrices and are
//! meant for the cochain spaces of small complexes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

use crate::chain::SparseIntMatrix;

type SparseCol<T> = Vec<(usize, T)>;

/// Rank over the rationals.
pub fn rank(m: &SparseIntMatrix) -> usize {
    let cols = |m: &SparseIntMatrix| -> Vec<Vec<(usize, i64)>> {
        (0..m.cols()).map(|j| m.column(j).collect()).collect()
    };
    rank_of_columns(cols(m), m.rows())
}

/// Rank over the rationals of integer columns given as sparse `(row, value)`
/// lists with ascending rows.
pub fn rank_of_columns(columns: Vec<Vec<(usize, i64)>>, rows: usize) -> usize {
    let narrow: Vec<SparseCol<i128>> = columns
        .iter()
        .map(|c| c.iter().map(|&(i, v)| (i, v as i128)).collect())
        .collect();
    if let Some(r) = reduce::<i128>(narrow, rows) {
        return r;
    }
    let wide: Vec<SparseCol<BigInt>> = columns
        .into_iter()
        .map(|c| c.into_iter().map(|(i, v)| (i, BigInt::from(v))).collect())
        .collect();
    reduce::<BigInt>(wide, rows).expect("arbitrary precision cannot overflow")
}

/// Column reduction keyed by the lowest nonzero row. Returns `None` on
/// arithmetic overflow.
fn reduce<T>(columns: Vec<SparseCol<T>>, rows: usize) -> Option<usize>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let mut pivots: Vec<Option<SparseCol<T>>> = vec![None; rows];
    let mut rank = 0;
    for mut col in columns {
        col.retain(|e| !e.1.is_zero());
        while let Some((low, _)) = col.last().cloned() {
            let Some(p) = &pivots[low] else { break };
            col = eliminate(&col, p)?;
        }
        if let Some(low) = col.last().map(|e| e.0) {
            pivots[low] = Some(col);
            rank += 1;
        }
    }
    Some(rank)
}

/// `a·c - b·p` where `a`, `b` are the lowest entries of `p` and `c`; divides
/// out the content of the result.
fn eliminate<T>(c: &SparseCol<T>, p: &SparseCol<T>) -> Option<SparseCol<T>>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let a = p.last()?.1.clone();
    let b = c.last()?.1.clone();
    let g = a.gcd(&b);
    let (a, b) = (a / g.clone(), b / g);
    let mut out: SparseCol<T> = Vec::with_capacity(c.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < c.len() || j < p.len() {
        let (row, val) = match (c.get(i), p.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, a.checked_mul(&x.1)?.checked_sub(&b.checked_mul(&y.1)?)?)
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, a.checked_mul(&x.1)?)
            }
            (Some(x), None) => {
                i += 1;
                (x.0, a.checked_mul(&x.1)?)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, T::zero().checked_sub(&b.checked_mul(&y.1)?)?)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((row, val));
        }
    }
    let content = out.iter().fold(T::zero(), |acc, e| acc.gcd(&e.1));
    if !content.is_zero() && !content.is_one() {
        for e in &mut out {
            e.1 = e.1.clone() / content.clone();
        }
    }
    Some(out)
}

/// Dense integer matrix stored as a list of columns.
pub type IntColumns = Vec<Vec<BigInt>>;

/// Elementary unimodular column operation.
#[derive(Clone, Debug)]
enum ColumnOp {
    /// `col[a] += q · col[b]`
    AddMultiple { a: usize, b: usize, q: BigInt },
    Swap(usize, usize),
    Negate(usize),
}

fn apply(cols: &mut [Vec<BigInt>], op: &ColumnOp) {
    match op {
        ColumnOp::AddMultiple { a, b, q } => {
            let src = cols[*b].clone();
            for (x, y) in cols[*a].iter_mut().zip(src) {
                *x += q * y;
            }
        }
        ColumnOp::Swap(a, b) => cols.swap(*a, *b),
        ColumnOp::Negate(a) => {
            for x in &mut cols[*a] {
                *x = -x.clone();
            }
        }
    }
}

/// Brings `cols` to column echelon form by unimodular column operations,
/// reporting each operation to `record`. Pivot columns end up first;
/// returns their count. All later columns are zero.
fn column_echelon(cols: &mut [Vec<BigInt>], rows: usize, mut record: impl FnMut(&ColumnOp)) -> usize {
    let n = cols.len();
    let mut piv = 0;
    let mut op = |cols: &mut [Vec<BigInt>], o: ColumnOp| {
        apply(cols, &o);
        record(&o);
    };
    for r in 0..rows {
        if piv == n {
            break;
        }
        loop {
            // smallest nonzero |entry| in row r among active columns
            let best = (piv..n)
                .filter(|&j| !cols[j][r].is_zero())
                .min_by(|&x, &y| cols[x][r].abs().cmp(&cols[y][r].abs()));
            let Some(best) = best else { break };
            let mut done = true;
            for j in piv..n {
                if j != best && !cols[j][r].is_zero() {
                    let q = -cols[j][r].div_floor(&cols[best][r]);
                    op(cols, ColumnOp::AddMultiple { a: j, b: best, q });
                    if !cols[j][r].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if best != piv {
                    op(cols, ColumnOp::Swap(piv, best));
                }
                if cols[piv][r].is_negative() {
                    op(cols, ColumnOp::Negate(piv));
                }
                piv += 1;
                break;
            }
        }
    }
    piv
}

fn identity(n: usize) -> IntColumns {
    (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn dense_columns(m: &SparseIntMatrix) -> IntColumns {
    (0..m.cols())
        .map(|j| {
            let mut c = vec![BigInt::zero(); m.rows()];
            for (i, v) in m.column(j) {
                c[i] = BigInt::from(v);
            }
            c
        })
        .collect()
}

/// A basis of the integer lattice `{x ∈ Zⁿ : m·x = 0}`.
pub fn integer_kernel(m: &SparseIntMatrix) -> IntColumns {
    let mut a = dense_columns(m);
    let mut u = identity(m.cols());
    let r = column_echelon(&mut a, m.rows(), |op| apply(&mut u, op));
    u.split_off(r)
}

/// Given a lattice basis `kernel` (columns, full rank) and integer vectors
/// `sub` lying in its span, returns integer vectors whose classes form a basis
/// of the free part of `span_Z(kernel) / span_Z(sub)`.
pub fn free_quotient_basis(kernel: &IntColumns, sub: &IntColumns) -> IntColumns {
    let m = kernel.len();
    if m == 0 {
        return Vec::new();
    }
    let dim = kernel[0].len();
    // coordinates of each sub vector in the kernel basis
    let coords = solve_columns(kernel, sub, dim).expect("sub vectors lie in the lattice span");
    // Yᵀ stored as columns: one column per kernel basis vector, one row per sub vector
    let mut yt: IntColumns = (0..m)
        .map(|i| {
            coords
                .iter()
                .map(|y| {
                    assert!(y[i].is_integer(), "sub vector is not an integer combination");
                    y[i].to_integer()
                })
                .collect()
        })
        .collect();
    let mut basis = kernel.clone();
    let r = column_echelon(&mut yt, sub.len(), |op| match op {
        ColumnOp::AddMultiple { a, b, q } => apply(
            &mut basis,
            &ColumnOp::AddMultiple { a: *b, b: *a, q: -q.clone() },
        ),
        other => apply(&mut basis, other),
    });
    basis.split_off(r)
}

/// Solves `basis · y = target` for every target column, with `basis` of full
/// column rank. `None` if some target is outside the span.
fn solve_columns(basis: &IntColumns, targets: &IntColumns, rows: usize) -> Option<Vec<Vec<BigRational>>> {
    let to_q = |c: &Vec<BigInt>| c.iter().cloned().map(BigRational::from_integer).collect::<Vec<_>>();
    let b: Vec<Vec<BigRational>> = basis.iter().map(to_q).collect();
    let t: Vec<Vec<BigRational>> = targets.iter().map(to_q).collect();
    let sol = solve_in_span(&[], &b, &t, rows)?;
    Some(sol)
}

/// Expresses each target as `B·β + U·α` and returns the `α` coefficients.
///
/// `generators` (the `B` block) may be linearly dependent; `basis` (the `U`
/// block) must be linearly independent modulo their span, which makes `α`
/// unique. `None` if some target is not in the combined span.
pub fn solve_in_span(
    generators: &[Vec<BigRational>],
    basis: &[Vec<BigRational>],
    targets: &[Vec<BigRational>],
    rows: usize,
) -> Option<Vec<Vec<BigRational>>> {
    let ng = generators.len();
    let nb = basis.len();
    let cols: Vec<&Vec<BigRational>> = generators.iter().chain(basis).chain(targets).collect();
    let width = cols.len();
    // row-major augmented matrix
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; ng + nb];
    let mut row = 0;
    for col in 0..ng + nb {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..width {
                    let d = &f * &a[row][j];
                    a[i][j] -= d;
                }
            }
        }
        pivot_row_of_col[col] = Some(row);
        row += 1;
    }
    // consistency: rows without a pivot must be zero in the target block
    for a_row in a.iter().skip(row) {
        if a_row[ng + nb..].iter().any(|x| !x.is_zero()) {
            return None;
        }
    }
    let mut out = Vec::with_capacity(targets.len());
    for t in 0..targets.len() {
        let tc = ng + nb + t;
        let alpha = (ng..ng + nb)
            .map(|c| match pivot_row_of_col[c] {
                Some(r) => a[r][tc].clone(),
                None => panic!("basis column {} is dependent on the generators", c - ng),
            })
            .collect();
        out.push(alpha);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseIntMatrix {
        SparseIntMatrix::from_triplets(rows, cols, entries.iter().copied()).unwrap()
    }

    /// Dense rational Gaussian elimination, independent of the sparse path.
    fn dense_rank(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> usize {
        let mut a = vec![vec![BigRational::zero(); cols]; rows];
        for &(i, j, v) in entries {
            a[i][j] = BigRational::from_integer(v.into());
        }
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..rows {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&mat(2, 2, &[(0, 0, 1), (1, 1, 1)])), 2);
        assert_eq!(rank(&mat(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2)])), 1);
        assert_eq!(rank(&SparseIntMatrix::zeros(3, 0)), 0);
        assert_eq!(rank(&SparseIntMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // Hilbert-like integer matrix with huge entries
        let big = i64::MAX / 3;
        let e = [(0, 0, big), (0, 1, big - 1), (1, 0, big - 7), (1, 1, big - 5), (2, 0, 3), (2, 1, big)];
        assert_eq!(rank(&mat(3, 2, &e)), dense_rank(3, 2, &e));
    }

    #[test]
    fn kernel_of_edge_boundary() {
        // boundary of a triangle's edges: kernel is the cycle (1,-1,1)
        let d1 = mat(3, 3, &[(1, 0, 1), (0, 0, -1), (2, 1, 1), (0, 1, -1), (2, 2, 1), (1, 2, -1)]);
        let k = integer_kernel(&d1);
        assert_eq!(k.len(), 1);
        let dense: Vec<i64> = d1.mul_vec_int(&k[0].iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>());
        assert!(dense.iter().all(|&x| x == 0));
        assert!(k[0].iter().all(|x| x.abs() == BigInt::one()));
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 4y = 0 has integer kernel generated by (2, 1)
        let m = mat(1, 2, &[(0, 0, 2), (0, 1, -4)]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!(v == vec![2, 1] || v == vec![-2, -1]);
    }

    #[test]
    fn free_quotient_drops_torsion() {
        // Z² / <(2, 0)> has free part generated by (0, 1)
        let kernel = identity(2);
        let sub = vec![vec![BigInt::from(2), BigInt::zero()]];
        let q = free_quotient_basis(&kernel, &sub);
        assert_eq!(q.len(), 1);
        assert!(q[0][1].abs().is_one());
    }

    #[test]
    fn solve_modulo_generators() {
        let q = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        let gens = vec![q(&[1, 1, 0]), q(&[2, 2, 0])];
        let basis = vec![q(&[0, 1, 0]), q(&[0, 0, 1])];
        let targets = vec![q(&[3, 5, 7])];
        let a = solve_in_span(&gens, &basis, &targets, 3).unwrap();
        assert_eq!(a[0], q(&[2, 7]));
        assert!(solve_in_span(&gens, &basis[..1], &targets, 3).is_none());
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(entries in proptest::collection::vec((0usize..6, 0usize..7, -3i64..=3), 0..30)) {
            let mut seen = std::collections::HashSet::new();
            let e: Vec<(usize, usize, i64)> = entries.into_iter().filter(|t| seen.insert((t.0, t.1))).collect();
            prop_assert_eq!(rank(&mat(6, 7, &e)), dense_rank(6, 7, &e));
        }

        #[test]
        fn kernel_vectors_annihilate(entries in proptest::collection::vec((0usize..4, 0usize..6, -3i64..=3), 0..20)) {
            let mut seen = std::collections::HashSet::new();
            let e: Vec<(usize, usize, i64)> = entries.into_iter().filter(|t| seen.insert((t.0, t.1))).collect();
            let m = mat(4, 6, &e);
            let k = integer_kernel(&m);
            prop_assert_eq!(k.len(), 6 - dense_rank(4, 6, &e));
            for v in k {
                let v: Vec<i64> = v.iter().map(|x| i64::try_from(x).unwrap()).collect();
                prop_assert!(m.mul_vec_int(&v).iter().all(|&x| x == 0));
            }
        }
    }
}
