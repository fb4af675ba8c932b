//! Cocycles, the Alexander-Whitney cup product and pairing with the
//! fundamental class.
//!
//! Cohomology bases are chosen integrally: the representatives are integer
//! cocycles whose classes generate the torsion-free part of `H^k(K; Z)`. With
//! such bases the pairing matrices of closed orientable manifolds are
//! unimodular.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chain::{ChainSystem, Orientation};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exact;

/// A rational `k`-cochain, one coefficient per `k`-simplex in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    coefficients: Vec<BigRational>,
}

impl Cochain {
    pub fn new(k: &SimplicialComplex, degree: usize, coefficients: Vec<BigRational>) -> Result<Self> {
        if coefficients.len() != k.count(degree) {
            return Err(Error::DimensionMismatch {
                expected: k.count(degree),
                got: coefficients.len(),
            });
        }
        Ok(Cochain { degree, coefficients })
    }

    pub fn from_integers(k: &SimplicialComplex, degree: usize, coefficients: &[i64]) -> Result<Self> {
        Self::new(
            k,
            degree,
            coefficients.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    pub fn zero(k: &SimplicialComplex, degree: usize) -> Self {
        Cochain {
            degree,
            coefficients: vec![BigRational::zero(); k.count(degree)],
        }
    }

    /// The constant 0-cochain 1, unit of the cup product.
    pub fn unit(k: &SimplicialComplex) -> Self {
        Cochain {
            degree: 0,
            coefficients: vec![BigRational::one(); k.count(0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    /// True when the degree exceeds the complex's dimension, so the cochain
    /// space itself is zero.
    pub fn is_trivially_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || self.coefficients.len() != other.coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coefficients.len(),
                got: other.coefficients.len(),
            });
        }
        Ok(Cochain {
            degree: self.degree,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Cochain {
        Cochain {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }

    /// `(du)(τ) = Σ_i (-1)^i u(τ without vertex i)`.
    pub fn coboundary(&self, k: &SimplicialComplex) -> Cochain {
        let coefficients = k
            .simplices(self.degree + 1)
            .iter()
            .map(|t| {
                t.boundary()
                    .map(|(sign, f)| {
                        let c = &self.coefficients[k.index_of(&f).expect("face present")];
                        if sign > 0 { c.clone() } else { -c.clone() }
                    })
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect();
        Cochain {
            degree: self.degree + 1,
            coefficients,
        }
    }

    pub fn is_cocycle(&self, k: &SimplicialComplex) -> bool {
        self.coboundary(k).is_zero()
    }
}

/// Cocycle representatives of a basis of `H^k`.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: usize,
    pub representatives: Vec<Cochain>,
}

impl CohomologyBasis {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// Integer cocycles whose classes form a basis of `H^k(K; Q)` and generate
/// the free part of `H^k(K; Z)`.
pub fn cocycle_basis(cs: &ChainSystem<'_>, degree: usize) -> Result<CohomologyBasis> {
    let k = cs.complex();
    match k.dim() {
        Some(d) if degree <= d => {}
        dim => return Err(Error::DegreeOutOfRange { degree, dim }),
    }
    let kernel = exact::integer_kernel(&cs.coboundary(degree));
    let coboundaries = coboundary_columns(cs, degree);
    let reps = exact::free_quotient_basis(&kernel, &coboundaries);

    // independence modulo coboundaries, checked by exact rank
    let sparse = |cols: &[Vec<BigInt>]| -> Vec<Vec<(usize, i64)>> {
        cols.iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (i, i64::try_from(x).expect("cocycle entries fit in i64")))
                    .collect()
            })
            .collect()
    };
    let n = k.count(degree);
    let rank_b = exact::rank_of_columns(sparse(&coboundaries), n);
    let mut all = coboundaries.clone();
    all.extend(reps.iter().cloned());
    let rank_all = exact::rank_of_columns(sparse(&all), n);
    assert_eq!(
        rank_all,
        rank_b + reps.len(),
        "cocycle representatives are dependent modulo coboundaries"
    );

    let representatives = reps
        .iter()
        .map(|r| Cochain {
            degree,
            coefficients: to_rational(r),
        })
        .collect::<Vec<_>>();
    debug_assert!(representatives.iter().all(|c| c.is_cocycle(k)));
    Ok(CohomologyBasis {
        degree,
        representatives,
    })
}

/// Columns of `d_{k-1}`: coboundaries of the `(k-1)`-simplices.
pub(crate) fn coboundary_columns(cs: &ChainSystem<'_>, degree: usize) -> Vec<Vec<BigInt>> {
    if degree == 0 {
        return Vec::new();
    }
    let d = cs.coboundary(degree - 1);
    (0..d.cols())
        .map(|j| {
            let mut c = vec![BigInt::zero(); d.rows()];
            for (i, v) in d.column(j) {
                c[i] = BigInt::from(v);
            }
            c
        })
        .collect()
}

/// `(u ⌣ v)(v_0 < … < v_{p+q}) = u(v_0…v_p) · v(v_p…v_{p+q})`.
pub fn cup(k: &SimplicialComplex, u: &Cochain, v: &Cochain) -> Result<Cochain> {
    for c in [u, v] {
        if c.coefficients.len() != k.count(c.degree) {
            return Err(Error::DimensionMismatch {
                expected: k.count(c.degree),
                got: c.coefficients.len(),
            });
        }
    }
    let (p, q) = (u.degree, v.degree);
    let coefficients = k
        .simplices(p + q)
        .iter()
        .map(|s| {
            let front = Simplex::from_sorted(s.vertices()[..=p].to_vec());
            let back = Simplex::from_sorted(s.vertices()[p..].to_vec());
            let a = &u.coefficients[k.index_of(&front).expect("front face present")];
            if a.is_zero() {
                return BigRational::zero();
            }
            a * &v.coefficients[k.index_of(&back).expect("back face present")]
        })
        .collect();
    Ok(Cochain {
        degree: p + q,
        coefficients,
    })
}

/// `⟨w, [M]⟩ = Σ_facets ε(facet)·w(facet)`.
pub fn pair_with_fundamental(w: &Cochain, orientation: &Orientation) -> Result<BigRational> {
    let Orientation::Orientable(fc) = orientation else {
        return Err(Error::NotOrientable);
    };
    if w.degree != fc.dim() || w.coefficients.len() != fc.signs().len() {
        return Err(Error::DimensionMismatch {
            expected: fc.dim(),
            got: w.degree,
        });
    }
    Ok(w
        .coefficients
        .iter()
        .zip(fc.signs())
        .fold(BigRational::zero(), |acc, (c, &s)| if s > 0 { acc + c } else { acc - c }))
}

/// Pairing matrix `P[i][j] = ⟨u_i ⌣ v_j, [M]⟩` between bases of `H^p` and `H^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub p: usize,
    pub q: usize,
    pub entries: Vec<Vec<BigRational>>,
}

impl PairingMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    /// Determinant of a square matrix; `None` otherwise. The empty matrix has
    /// determinant 1.
    pub fn determinant(&self) -> Option<BigRational> {
        let n = self.rows();
        if self.entries.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(determinant(self.entries.clone()))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.rows();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == -self.entries[j][i].clone()))
    }
}

fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

/// Pairing of `H^p` against `H^q` with `p + q = dim`.
pub fn pairing_matrix(cs: &ChainSystem<'_>, p: usize, q: usize, orientation: &Orientation) -> Result<PairingMatrix> {
    let Orientation::Orientable(_) = orientation else {
        return Err(Error::NotOrientable);
    };
    let dim = cs.dim();
    if dim != Some(p + q) {
        return Err(Error::DegreeOutOfRange { degree: p + q, dim });
    }
    let k = cs.complex();
    let left = cocycle_basis(cs, p)?;
    let right = cocycle_basis(cs, q)?;
    let entries = left
        .representatives
        .iter()
        .map(|u| {
            right
                .representatives
                .iter()
                .map(|v| pair_with_fundamental(&cup(k, u, v)?, orientation))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PairingMatrix { p, q, entries })
}

/// Middle-degree intersection form, `2k = dim`.
pub fn intersection_matrix(cs: &ChainSystem<'_>, degree: usize, orientation: &Orientation) -> Result<PairingMatrix> {
    pairing_matrix(cs, degree, degree, orientation)
}

/// Absolute value of a rational, for reporting.
pub fn abs(x: &BigRational) -> BigRational {
    x.abs()
}
