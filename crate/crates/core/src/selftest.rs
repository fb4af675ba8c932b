//! Built-in fixture suite. Each criterion runs a fixed set of checks and
//! reports pass or fail; output contains no timings, so repeated runs give
//! identical reports.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, builtin_catalog, Catalog, ExtensionGroup, ExtensionRecord, Rule, Verdict};
use crate::chain::{assemble_boundaries, estimate_storage, orient, Orientation};
use crate::cohomology::{cocycle_basis, cup, pair_with_fundamental, Cochain};
use crate::complex::*;
use crate::error::{Error, Result};
use crate::hodge::{
    betti_exact, betti_spectral, graded_nonzero_spectra, heat_supertrace, lanczos_extremes, spectra, spectrum,
    SpectralConfig,
};
use crate::lanczos::LanczosConfig;
use crate::lefschetz::{lefschetz_report, SimplicialSelfMap};

/// Criterion names, in report order.
pub const CRITERIA: [&str; 7] = [
    "betti-fixtures",
    "quotient-rp2",
    "mckean-singer",
    "lefschetz",
    "cup-pairing",
    "rule-engine",
    "scaling-path",
];

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    /// Case-insensitive substring; only matching criteria run.
    pub filter: Option<String>,
    /// Icosahedron facets used for every projective plane fixture.
    pub icosahedron: Vec<[VertexId; 3]>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            filter: None,
            icosahedron: ICOSAHEDRON_FACETS.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub results: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let _ = writeln!(s, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        let _ = writeln!(s, "{passed}/{} criteria passed", self.results.len());
        s
    }
}

/// Runs every criterion selected by the filter. A filter matching nothing is
/// an input error.
pub fn run_selftest(config: &SelftestConfig) -> Result<SelftestReport> {
    let selected: Vec<&'static str> = CRITERIA
        .iter()
        .copied()
        .filter(|name| match &config.filter {
            Some(f) => name.contains(&f.to_lowercase()),
            None => true,
        })
        .collect();
    if selected.is_empty() {
        return Err(Error::MalformedInput(format!(
            "filter `{}` matches no criterion; known: {}",
            config.filter.as_deref().unwrap_or(""),
            CRITERIA.join(", ")
        )));
    }
    let results = selected
        .into_iter()
        .map(|name| {
            let outcome = match name {
                "betti-fixtures" => betti_fixtures(config),
                "quotient-rp2" => quotient_rp2(config),
                "mckean-singer" => mckean_singer(config),
                "lefschetz" => lefschetz_suite(),
                "cup-pairing" => cup_pairing(),
                "rule-engine" => rule_engine(),
                "scaling-path" => scaling_path(),
                _ => unreachable!("criterion list is fixed"),
            };
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CriterionResult { name, passed, detail }
        })
        .collect();
    Ok(SelftestReport { results })
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn projective_plane(config: &SelftestConfig) -> std::result::Result<SimplicialComplex, String> {
    rp2_from(&config.icosahedron).map_err(|e| format!("projective plane: {e}"))
}

fn sphere_betti(n: usize) -> Vec<usize> {
    (0..=n).map(|k| usize::from(k == 0 || k == n)).collect()
}

fn betti_fixtures(config: &SelftestConfig) -> Outcome {
    let mut cases: Vec<(SimplicialComplex, Vec<usize>)> = vec![(torus(), vec![1, 2, 1])];
    for n in 1..=4 {
        cases.push((simplex_sphere(n), sphere_betti(n)));
    }
    cases.push((projective_plane(config)?, vec![1, 0, 0]));
    let mut seen = Vec::new();
    for (k, want) in &cases {
        let cs = assemble_boundaries(k);
        let exact = betti_exact(&cs);
        ensure(&exact.0 == want, || format!("b({}) = {exact}, expected {want:?}", k.name()))?;
        let sp = spectra(&cs, &SpectralConfig::default()).map_err(err)?;
        betti_spectral(&sp, &exact).map_err(|e| format!("{}: {e}", k.name()))?;
        seen.push(format!("{}={exact}", k.name()));
    }
    Ok(format!("exact and spectral agree: {}", seen.join(" ")))
}

fn quotient_rp2(config: &SelftestConfig) -> Outcome {
    let k = projective_plane(config)?;
    ensure(k.f_vector() == [6, 15, 10], || format!("f-vector {:?}", k.f_vector()))?;
    let b = betti_exact(&assemble_boundaries(&k));
    ensure(b.0 == [1, 0, 0], || format!("rational Betti {b}"))?;
    match orient(&k).map_err(err)? {
        Orientation::NonOrientable { witness } => Ok(format!(
            "f=(6,15,10) chi=1 b={b}, non-orientable with a {}-facet witness",
            witness.len()
        )),
        Orientation::Orientable(_) => Err("quotient reported orientable".into()),
    }
}

fn mckean_singer(config: &SelftestConfig) -> Outcome {
    let fixtures = vec![
        point(),
        circle(5),
        simplex_sphere(2),
        simplex_sphere(3),
        cross_polytope_sphere(3),
        torus(),
        projective_plane(config)?,
        barycentric_subdivision(&simplex_sphere(2)),
    ];
    let mut worst_trace: f64 = 0.0;
    let mut worst_pair: f64 = 0.0;
    for k in &fixtures {
        let cs = assemble_boundaries(k);
        let sp = spectra(&cs, &SpectralConfig::default()).map_err(err)?;
        for t in [0.1, 1.0, 10.0] {
            let str = heat_supertrace(&sp, t).map_err(err)?;
            let e = (str - k.euler() as f64).abs();
            worst_trace = worst_trace.max(e);
            ensure(e < 1e-8, || format!("{}: supertrace {str} at t={t}, chi {}", k.name(), k.euler()))?;
        }
        let (even, odd) = graded_nonzero_spectra(&sp).map_err(err)?;
        ensure(even.len() == odd.len(), || {
            format!("{}: {} even vs {} odd nonzero eigenvalues", k.name(), even.len(), odd.len())
        })?;
        for (a, b) in even.iter().zip(&odd) {
            worst_pair = worst_pair.max((a - b).abs());
        }
        ensure(worst_pair < 1e-8, || format!("{}: even/odd spectra differ by {worst_pair:.1e}", k.name()))?;
    }
    Ok(format!(
        "{} fixtures, t in {{0.1,1,10}}: max |str - chi| {worst_trace:.1e}, max even/odd gap {worst_pair:.1e}",
        fixtures.len()
    ))
}

fn lefschetz_suite() -> Outcome {
    let q = |n: i64| BigRational::from_integer(n.into());
    let s3 = cross_polytope_sphere(3);
    let mut cases: Vec<(String, SimplicialComplex, VertexMap, i64, Option<i64>)> = Vec::new();
    for k in [torus(), simplex_sphere(3), circle(4), rp2()] {
        let id = VertexMap::identity(&k);
        let chi = k.euler();
        cases.push((format!("id on {}", k.name()), k, id, chi, Some(chi)));
    }
    cases.push(("reflection on X3".into(), s3.clone(), cross_polytope_reflection(&s3, 0), 2, Some(2)));
    cases.push(("antipodal on X3".into(), s3.clone(), cross_polytope_antipodal(&s3), 0, None));
    for (label, k, map, want, fixed_chi) in cases {
        let t = SimplicialSelfMap::new(&k, map).map_err(err)?;
        let r = lefschetz_report(&k, &t).map_err(err)?;
        ensure(r.homology_supertrace == q(r.chain_supertrace), || {
            format!("{label}: chain {} vs homology {}", r.chain_supertrace, r.homology_supertrace)
        })?;
        ensure(r.chain_supertrace == want, || format!("{label}: L = {}, expected {want}", r.chain_supertrace))?;
        match fixed_chi {
            Some(c) => ensure(r.chi_fixed == c, || format!("{label}: chi(Fix) = {}", r.chi_fixed))?,
            None => ensure(r.fixed_subcomplex.is_empty(), || format!("{label}: fixed set not empty"))?,
        }
    }
    Ok("identity gives chi; reflection L=2=chi(Fix); antipodal L=0, Fix empty; chain = homology".into())
}

fn cup_pairing() -> Outcome {
    let k = torus();
    let cs = assemble_boundaries(&k);
    let o = orient(&k).map_err(err)?;
    let basis = cocycle_basis(&cs, 1).map_err(err)?;
    let pair = |reps: &[Cochain]| -> std::result::Result<Vec<Vec<BigRational>>, String> {
        reps.iter()
            .map(|u| {
                reps.iter()
                    .map(|v| pair_with_fundamental(&cup(&k, u, v).map_err(err)?, &o).map_err(err))
                    .collect()
            })
            .collect()
    };
    let m = pair(&basis.representatives)?;
    ensure(m.len() == 2, || format!("H^1 has {} generators", m.len()))?;
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    ensure(m[0][0] == -m[0][0].clone() && m[1][1] == -m[1][1].clone() && m[0][1] == -m[1][0].clone(), || {
        "intersection form is not antisymmetric".into()
    })?;
    let one = BigRational::from_integer(1.into());
    ensure(det.abs() == one, || format!("|det| = {}", det.abs()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let n0 = k.count(0);
    for round in 0..20 {
        let shifted: Vec<Cochain> = basis
            .representatives
            .iter()
            .map(|u| {
                let c: Vec<i64> = (0..n0).map(|_| rng.random_range(-5..=5)).collect();
                let b = Cochain::from_integers(&k, 0, &c).map_err(err)?.coboundary(&k);
                u.add(&b).map_err(err)
            })
            .collect::<std::result::Result<_, _>>()?;
        ensure(pair(&shifted)? == m, || format!("pairing changed after coboundary shift {round}"))?;
    }
    Ok(format!("T2 intersection form antisymmetric, det {det}, unchanged by 20 coboundary shifts"))
}

fn rule_engine() -> Outcome {
    let c: Catalog = builtin_catalog(catalog::DEFAULT_MAX_FAMILY_INDEX);
    let check = |comps: &[&str], g: ExtensionGroup, t: &str| {
        catalog::check_record(&c, &ExtensionRecord::new(comps, g, t)).map_err(err)
    };
    let r = check(&["S2", "S2", "S0"], ExtensionGroup::SU2, "W6")?;
    ensure(r.passed(), || "S2+S2+S0 -> W6 rejected".into())?;
    let r = check(&["CP2", "CP2"], ExtensionGroup::U1, "W6")?;
    ensure(r.failures() == [Rule::Frankel], || format!("CP2+CP2 -> W6 failures {:?}", r.failures()))?;
    let r = check(&["W6"], ExtensionGroup::U1, "W12")?;
    ensure(r.passed(), || "W6 -> W12 rejected".into())?;
    let r = check(&["S2", "RP0"], ExtensionGroup::U1, "CP2")?;
    ensure(r.passed(), || "S2+RP0 -> CP2 rejected".into())?;
    for e in c.entries() {
        if e.dim < 2 {
            continue;
        }
        let mut rec = ExtensionRecord::new(&[], ExtensionGroup::U1, &e.name);
        for comp in c.entries().iter().filter(|x| x.dim + 2 == e.dim) {
            rec.components = vec![comp.name.clone()];
            let v = catalog::check_record(&c, &rec).map_err(err)?;
            let gs = v.verdict(Rule::GroveSearle);
            ensure(gs.is_fail() != comp.family.is_sphere_or_projective(), || {
                format!("Grove-Searle verdict {gs} for {} in {}", comp.name, e.name)
            })?;
        }
    }
    let mut checked = 0;
    for e in c.entries() {
        e.validate().map_err(err)?;
        let quoted = ["W6", "E6", "W12", "W24", "OP2"].contains(&e.name.as_str()) || e.name.starts_with("CP");
        if quoted {
            let b = e.betti.as_ref().ok_or_else(|| format!("{} has no Betti vector", e.name))?;
            let alt: i64 = b.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            ensure(alt == e.euler, || format!("{}: alternating sum {alt} vs chi {}", e.name, e.euler))?;
            checked += 1;
        }
    }
    ensure(catalog::check_synge_entry(c.get("RP4").map_err(err)?) == Verdict::Pass, || "Synge on RP4".into())?;
    Ok(format!(
        "named extensions reproduced; Grove-Searle on all codim-2 pairs; {checked} quoted Betti vectors consistent"
    ))
}

fn scaling_path() -> Outcome {
    let k = barycentric_subdivision(&barycentric_subdivision(&simplex_sphere(2)));
    let cs = assemble_boundaries(&k);
    let f = k.f_vector();
    let cfg = LanczosConfig::default();
    let mut worst: f64 = 0.0;
    for deg in 0..=2 {
        let dense = spectrum(&cs, deg, &SpectralConfig::default()).map_err(err)?;
        let got = lanczos_extremes(&cs, deg, 8, &cfg).map_err(err)?;
        for (a, b) in got.iter().zip(&dense.eigenvalues) {
            let rel = (a - b).abs() / b.abs().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= 1e-6, || format!("degree {deg}: Lanczos {a} vs dense {b}"))?;
        }
    }
    for deg in 1..=2 {
        let est = estimate_storage(&f, deg).map_err(err)?;
        let actual = cs.boundary(deg).nnz() as u128;
        ensure(est.nnz == actual, || format!("degree {deg}: estimate {} vs {actual}", est.nnz))?;
    }
    Ok(format!(
        "sd^2 of the tetrahedron boundary f={f:?}: 8 lowest per degree within {worst:.1e} relative; nnz estimates exact"
    ))
}
