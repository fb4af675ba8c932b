//! Hodge Laplacians `L_k = ∂_kᵀ∂_k + ∂_{k+1}∂_{k+1}ᵀ` with the standard
//! inner product on cochains, and the quantities read off their spectra.

use std::fmt;

use nalgebra::SymmetricEigen;
use rayon::prelude::*;

use crate::chain::{ChainSystem, SparseIntMatrix};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::exact;
use crate::lanczos::{lowest_eigenvalues, LanczosConfig, LinearOperator};

/// Relative factor applied to the spectral scale to separate harmonic forms.
pub const DEFAULT_ZERO_FACTOR: f64 = 1e-9;
pub const DEFAULT_DENSE_CUTOFF: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeLaplacian {
    degree: usize,
    matrix: SparseIntMatrix,
}

impl HodgeLaplacian {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &SparseIntMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.cols()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        self.matrix.to_dense()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.transpose() == self.matrix
    }
}

fn check_degree(k: &SimplicialComplex, degree: usize) -> Result<()> {
    match k.dim() {
        Some(d) if degree <= d => Ok(()),
        dim => Err(Error::DegreeOutOfRange { degree, dim }),
    }
}

/// Exact integer assembly of `L_k`.
pub fn laplacian(cs: &ChainSystem<'_>, degree: usize) -> Result<HodgeLaplacian> {
    check_degree(cs.complex(), degree)?;
    let down = cs.boundary(degree);
    let up = cs.boundary(degree + 1);
    let lower = down.transpose().matmul(&down)?;
    let upper = up.matmul(&up.transpose())?;
    let mut entries: std::collections::BTreeMap<(usize, usize), i64> = Default::default();
    for (i, j, v) in lower.triplets().chain(upper.triplets()) {
        *entries.entry((i, j)).or_insert(0) += v;
    }
    let n = cs.complex().count(degree);
    let matrix = SparseIntMatrix::from_triplets(n, n, entries.into_iter().map(|((i, j), v)| (i, j, v)))?;
    let l = HodgeLaplacian { degree, matrix };
    debug_assert!(l.is_symmetric());
    Ok(l)
}

/// `L_k` as a matrix-free operator: every application walks the `k`- and
/// `(k+1)`-simplices and their faces. No matrix is stored.
pub struct ImplicitLaplacian<'a> {
    complex: &'a SimplicialComplex,
    degree: usize,
}

impl<'a> ImplicitLaplacian<'a> {
    pub fn new(complex: &'a SimplicialComplex, degree: usize) -> Result<Self> {
        check_degree(complex, degree)?;
        Ok(ImplicitLaplacian { complex, degree })
    }
}

impl LinearOperator for ImplicitLaplacian<'_> {
    fn dim(&self) -> usize {
        self.complex.count(self.degree)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let k = self.complex;
        let deg = self.degree;
        y.iter_mut().for_each(|v| *v = 0.0);
        if deg > 0 {
            // ∂_kᵀ ∂_k x
            let mut down = vec![0.0; k.count(deg - 1)];
            for (j, s) in k.simplices(deg).iter().enumerate() {
                for (sign, f) in s.boundary() {
                    down[k.index_of(&f).expect("face present")] += sign as f64 * x[j];
                }
            }
            for (j, s) in k.simplices(deg).iter().enumerate() {
                y[j] += s
                    .boundary()
                    .map(|(sign, f)| sign as f64 * down[k.index_of(&f).expect("face present")])
                    .sum::<f64>();
            }
        }
        // ∂_{k+1} ∂_{k+1}ᵀ x
        for t in k.simplices(deg + 1) {
            let c: f64 = t
                .boundary()
                .map(|(sign, f)| sign as f64 * x[k.index_of(&f).expect("face present")])
                .sum();
            if c != 0.0 {
                for (sign, f) in t.boundary() {
                    y[k.index_of(&f).expect("face present")] += sign as f64 * c;
                }
            }
        }
    }
}

/// `L_k · x` without materializing `L_k`.
pub fn implicit_matvec(cs: &ChainSystem<'_>, degree: usize, x: &[f64]) -> Result<Vec<f64>> {
    let op = ImplicitLaplacian::new(cs.complex(), degree)?;
    if x.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: x.len(),
        });
    }
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y);
    Ok(y)
}

/// The `count` lowest eigenvalues of `L_k`, by Lanczos over [`ImplicitLaplacian`].
pub fn lanczos_extremes(
    cs: &ChainSystem<'_>,
    degree: usize,
    count: usize,
    config: &LanczosConfig,
) -> Result<Vec<f64>> {
    let op = ImplicitLaplacian::new(cs.complex(), degree)?;
    if op.dim() == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    lowest_eigenvalues(&op, count, config)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Rational Betti numbers `b_k = f_k - rank ∂_k - rank ∂_{k+1}`, exact.
pub fn betti_exact(cs: &ChainSystem<'_>) -> BettiVector {
    let Some(d) = cs.dim() else {
        return BettiVector(Vec::new());
    };
    let ranks: Vec<usize> = (0..=d + 1)
        .into_par_iter()
        .map(|k| cs.boundary_ref(k).map_or(0, exact::rank))
        .collect();
    BettiVector(
        (0..=d)
            .map(|k| cs.complex().count(k) - ranks[k] - ranks[k + 1])
            .collect(),
    )
}

/// Eigenvalues of `L_k`, ascending, with repeated values kept.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub degree: usize,
    pub eigenvalues: Vec<f64>,
    pub zero_threshold: f64,
    /// Size of `L_k`. Larger than `eigenvalues.len()` when only the low end
    /// was computed.
    pub size: usize,
}

impl SpectrumResult {
    pub fn zero_multiplicity(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < self.zero_threshold).count()
    }

    pub fn is_complete(&self) -> bool {
        self.eigenvalues.len() == self.size
    }

    pub fn nonzero(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().copied().filter(move |&l| l >= self.zero_threshold)
    }
}

#[derive(Clone, Debug)]
pub struct SpectralConfig {
    /// Fixed threshold; when `None`, `DEFAULT_ZERO_FACTOR` times the spectral scale.
    pub zero_threshold: Option<f64>,
    pub dense_cutoff: usize,
    /// Eigenvalues requested per degree when above the dense cutoff.
    pub lanczos_count: usize,
    pub lanczos: LanczosConfig,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            zero_threshold: None,
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            lanczos_count: 10,
            lanczos: LanczosConfig::default(),
        }
    }
}

fn default_threshold(scale: f64) -> f64 {
    let scale = if scale > DEFAULT_ZERO_FACTOR { scale } else { 1.0 };
    DEFAULT_ZERO_FACTOR * scale
}

/// Upper bound on the absolute row sums of `L_k`, hence on its spectral radius.
fn gershgorin_bound(cs: &ChainSystem<'_>, degree: usize) -> f64 {
    let k = cs.complex();
    // cofaces of each (k-1)-simplex and of each k-simplex
    let mut down_share = vec![0usize; if degree > 0 { k.count(degree - 1) } else { 0 }];
    if degree > 0 {
        for s in k.simplices(degree) {
            for (_, f) in s.boundary() {
                down_share[k.index_of(&f).expect("face present")] += 1;
            }
        }
    }
    let mut cofaces = vec![0usize; k.count(degree)];
    for t in k.simplices(degree + 1) {
        for (_, f) in t.boundary() {
            cofaces[k.index_of(&f).expect("face present")] += 1;
        }
    }
    k.simplices(degree)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let down: usize = if degree > 0 {
                s.boundary().map(|(_, f)| down_share[k.index_of(&f).expect("face present")]).sum()
            } else {
                0
            };
            (down + cofaces[i] * (degree + 2)) as f64
        })
        .fold(0.0, f64::max)
}

/// Spectrum of `L_k`: dense when `f_k` is at most the cutoff, otherwise the
/// lowest `lanczos_count` eigenvalues by Lanczos.
pub fn spectrum(cs: &ChainSystem<'_>, degree: usize, config: &SpectralConfig) -> Result<SpectrumResult> {
    check_degree(cs.complex(), degree)?;
    let size = cs.complex().count(degree);
    let (eigenvalues, scale) = if size <= config.dense_cutoff {
        let l = laplacian(cs, degree)?;
        let mut ev: Vec<f64> = SymmetricEigen::new(l.to_dense()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let scale = ev.last().copied().unwrap_or(0.0);
        (ev, scale)
    } else {
        let ev = lanczos_extremes(cs, degree, config.lanczos_count, &config.lanczos)?;
        (ev, gershgorin_bound(cs, degree))
    };
    Ok(SpectrumResult {
        degree,
        eigenvalues,
        zero_threshold: config.zero_threshold.unwrap_or_else(|| default_threshold(scale)),
        size,
    })
}

/// Spectra for every degree, computed in parallel and returned in degree order.
pub fn spectra(cs: &ChainSystem<'_>, config: &SpectralConfig) -> Result<Vec<SpectrumResult>> {
    let Some(d) = cs.dim() else { return Ok(Vec::new()) };
    (0..=d).into_par_iter().map(|k| spectrum(cs, k, config)).collect()
}

/// Betti numbers as harmonic-space dimensions.
pub fn betti_from_spectra(spectra: &[SpectrumResult]) -> BettiVector {
    BettiVector(spectra.iter().map(SpectrumResult::zero_multiplicity).collect())
}

/// Harmonic-space dimensions, checked against the exact Betti numbers.
pub fn betti_spectral(spectra: &[SpectrumResult], exact: &BettiVector) -> Result<BettiVector> {
    let b = betti_from_spectra(spectra);
    for (s, (&got, &want)) in spectra.iter().zip(b.0.iter().zip(&exact.0)) {
        if got != want || !s.is_complete() && got == s.eigenvalues.len() {
            let i = got.min(want).min(s.eigenvalues.len().saturating_sub(1));
            return Err(Error::ThresholdFailure {
                degree: s.degree,
                exact: want,
                spectral: got,
                threshold: s.zero_threshold,
                gap_eigenvalue: s.eigenvalues.get(i).copied().unwrap_or(f64::NAN),
            });
        }
    }
    if b.0.len() != exact.0.len() {
        return Err(Error::DimensionMismatch {
            expected: exact.0.len(),
            got: b.0.len(),
        });
    }
    Ok(b)
}

/// Smallest eigenvalue at or above the zero threshold.
pub fn ground_state(spectrum: &SpectrumResult) -> Option<f64> {
    spectrum.nonzero().next()
}

fn require_complete(spectra: &[SpectrumResult]) -> Result<()> {
    match spectra.iter().find(|s| !s.is_complete()) {
        Some(s) => Err(Error::PartialSpectrum { degree: s.degree }),
        None => Ok(()),
    }
}

/// `Σ_k (-1)^k tr exp(-t L_k)`.
pub fn heat_supertrace(spectra: &[SpectrumResult], t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::MalformedInput(format!("heat time must be positive, got {t}")));
    }
    require_complete(spectra)?;
    Ok(spectra
        .iter()
        .map(|s| {
            let tr: f64 = s.eigenvalues.iter().map(|l| (-l * t).exp()).sum();
            if s.degree % 2 == 0 { tr } else { -tr }
        })
        .sum())
}

/// `Σ log λ` over the nonzero eigenvalues.
pub fn log_det_nonzero(spectrum: &SpectrumResult) -> Result<f64> {
    let mut any = false;
    let sum = spectrum
        .nonzero()
        .inspect(|_| any = true)
        .map(f64::ln)
        .sum();
    if any {
        Ok(sum)
    } else {
        Err(Error::UndefinedDeterminant { degree: spectrum.degree })
    }
}

/// Sorted nonzero eigenvalues over even and over odd degrees.
pub fn graded_nonzero_spectra(spectra: &[SpectrumResult]) -> Result<(Vec<f64>, Vec<f64>)> {
    require_complete(spectra)?;
    let collect = |parity: usize| {
        let mut v: Vec<f64> = spectra
            .iter()
            .filter(|s| s.degree % 2 == parity)
            .flat_map(SpectrumResult::nonzero)
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    Ok((collect(0), collect(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::assemble_boundaries;
    use crate::complex::*;

    fn spec(k: &SimplicialComplex) -> Vec<SpectrumResult> {
        spectra(&assemble_boundaries(k), &SpectralConfig::default()).unwrap()
    }

    #[test]
    fn graph_laplacian_of_k4() {
        let k = simplex_sphere(2);
        let cs = assemble_boundaries(&k);
        let l = laplacian(&cs, 0).unwrap();
        let d = l.to_dense();
        for i in 0..4 {
            assert_eq!(d[(i, i)], 3.0);
        }
        assert!(l.is_symmetric());
    }

    #[test]
    fn point_laplacian_is_zero() {
        let k = point();
        let cs = assemble_boundaries(&k);
        let l = laplacian(&cs, 0).unwrap();
        assert_eq!(l.size(), 1);
        assert_eq!(l.matrix().nnz(), 0);
        assert!(laplacian(&cs, 1).is_err());
    }

    #[test]
    fn circle_edge_spectrum() {
        let s = spec(&circle(3));
        let ev = &s[1].eigenvalues;
        for (a, b) in ev.iter().zip([0.0, 3.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn betti_numbers() {
        let cases: Vec<(SimplicialComplex, Vec<usize>)> = vec![
            (torus(), vec![1, 2, 1]),
            (simplex_sphere(2), vec![1, 0, 1]),
            (rp2(), vec![1, 0, 0]),
            (simplex_sphere(3), vec![1, 0, 0, 1]),
            (cross_polytope_sphere(2), vec![1, 0, 1]),
            (point(), vec![1]),
        ];
        for (k, want) in cases {
            let cs = assemble_boundaries(&k);
            let exact = betti_exact(&cs);
            assert_eq!(exact.0, want, "{}", k.name());
            let spectral = betti_spectral(&spec(&k), &exact).unwrap();
            assert_eq!(spectral, exact);
        }
    }

    #[test]
    fn threshold_failure_reports_gap() {
        let k = circle(3);
        let mut s = spec(&k);
        s[1].zero_threshold = 10.0;
        let exact = betti_exact(&assemble_boundaries(&k));
        match betti_spectral(&s, &exact) {
            Err(Error::ThresholdFailure { degree, gap_eigenvalue, .. }) => {
                assert_eq!(degree, 1);
                assert!((gap_eigenvalue - 3.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ground_states() {
        let s = spec(&simplex_sphere(2));
        assert!((ground_state(&s[0]).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(ground_state(&spec(&point())[0]), None);
        assert!((ground_state(&spec(&cross_polytope_sphere(2))[0]).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn log_determinants() {
        let s = spec(&simplex_sphere(2));
        assert!((log_det_nonzero(&s[0]).unwrap() - 3.0 * 4f64.ln()).abs() < 1e-12);
        let c = spec(&circle(3));
        assert!((log_det_nonzero(&c[0]).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-12);
        assert!(matches!(
            log_det_nonzero(&spec(&point())[0]),
            Err(Error::UndefinedDeterminant { degree: 0 })
        ));
    }

    #[test]
    fn heat_supertrace_values() {
        assert!((heat_supertrace(&spec(&simplex_sphere(2)), 1.0).unwrap() - 2.0).abs() < 1e-10);
        assert!(heat_supertrace(&spec(&torus()), 0.5).unwrap().abs() < 1e-10);
        assert!((heat_supertrace(&spec(&rp2()), 2.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(heat_supertrace(&spec(&torus()), 0.0).is_err());
    }

    #[test]
    fn implicit_matches_materialized() {
        let k = barycentric_subdivision(&simplex_sphere(2));
        let cs = assemble_boundaries(&k);
        for deg in 0..=2 {
            let n = k.count(deg);
            let x: Vec<f64> = (0..n).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
            let y = implicit_matvec(&cs, deg, &x).unwrap();
            let dense = laplacian(&cs, deg).unwrap().to_dense() * nalgebra::DVector::from_vec(x);
            for (a, b) in y.iter().zip(dense.iter()) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
        assert!(matches!(
            implicit_matvec(&cs, 0, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn implicit_unit_vector_gives_column() {
        let k = simplex_sphere(2);
        let cs = assemble_boundaries(&k);
        let y = implicit_matvec(&cs, 0, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y, vec![3.0, -1.0, -1.0, -1.0]);
        assert_eq!(implicit_matvec(&cs, 0, &[0.0; 4]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn lanczos_small_cases() {
        let cfg = LanczosConfig::default();
        let oct = cross_polytope_sphere(2);
        let got = lanczos_extremes(&assemble_boundaries(&oct), 0, 2, &cfg).unwrap();
        assert!(got[0].abs() < 1e-9 && (got[1] - 4.0).abs() < 1e-9, "{got:?}");
        let s = simplex_sphere(2);
        let got = lanczos_extremes(&assemble_boundaries(&s), 0, 1, &cfg).unwrap();
        assert!(got[0].abs() < 1e-9);
        let t = torus();
        let cs = assemble_boundaries(&t);
        let got = lanczos_extremes(&cs, 1, 3, &cfg).unwrap();
        let dense = &spectrum(&cs, 1, &SpectralConfig::default()).unwrap().eigenvalues;
        for (a, b) in got.iter().zip(dense) {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "{got:?} vs {dense:?}");
        }
    }

    #[test]
    fn lanczos_path_above_cutoff() {
        let k = torus();
        let cs = assemble_boundaries(&k);
        let cfg = SpectralConfig {
            dense_cutoff: 5,
            lanczos_count: 4,
            ..Default::default()
        };
        let s = spectrum(&cs, 1, &cfg).unwrap();
        assert!(!s.is_complete());
        assert_eq!(s.eigenvalues.len(), 4);
        assert_eq!(s.zero_multiplicity(), 2);
        assert!(matches!(heat_supertrace(&[s], 1.0), Err(Error::PartialSpectrum { .. })));
    }

    #[test]
    fn supersymmetric_pairing() {
        for k in [torus(), rp2(), simplex_sphere(3), cross_polytope_sphere(2)] {
            let (even, odd) = graded_nonzero_spectra(&spec(&k)).unwrap();
            assert_eq!(even.len(), odd.len());
            for (a, b) in even.iter().zip(&odd) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }
}
