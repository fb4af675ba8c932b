//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 on success, 1 on domain errors,
//! 2 on malformed input or flags.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hodgeforge::catalog::{
    builtin_catalog, check_record, enumerate_extensions, periodic_table, table_csv, table_svg, Catalog,
    EnumerationOptions, RuleReport, Verdict, DEFAULT_MAX_FAMILY_INDEX,
};
use hodgeforge::chain::{assemble_boundaries, estimate_storage, orient, Orientation};
use hodgeforge::cohomology::pairing_matrix;
use hodgeforge::complex::{self as cx, GroupAction, SimplicialComplex};
use hodgeforge::hodge::{
    betti_exact, betti_spectral, ground_state, heat_supertrace, log_det_nonzero, spectra, spectrum, SpectralConfig,
    SpectrumResult,
};
use hodgeforge::lefschetz::{lefschetz_report, SimplicialSelfMap};
use hodgeforge::selftest::{run_selftest, SelftestConfig};
use hodgeforge::{io, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "hodgeforge", version, about = "Homology, Hodge spectra and extension rules on simplicial complexes")]
struct Cli {
    /// Write data to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, inspect and transform complexes.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Boundary matrix in triplet text form.
    ExportBoundary {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Betti vector as a JSON array.
    Betti {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_enum, default_value_t = BettiMethod::Exact)]
        method: BettiMethod,
        #[command(flatten)]
        spectral: SpectralFlags,
    },
    /// Hodge Laplacian eigenvalues as CSV.
    Spectrum {
        #[arg(long)]
        complex: PathBuf,
        /// Only this degree; all degrees when omitted.
        #[arg(long)]
        degree: Option<usize>,
        #[command(flatten)]
        spectral: SpectralFlags,
    },
    /// Heat-kernel supertrace at the given times.
    HeatTrace {
        #[arg(long)]
        complex: PathBuf,
        /// Heat time; repeat for several.
        #[arg(long = "t", value_parser = positive_f64, default_values_t = [1.0])]
        times: Vec<f64>,
        #[command(flatten)]
        spectral: SpectralFlags,
    },
    /// Smallest nonzero eigenvalue per degree.
    Groundstate {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        spectral: SpectralFlags,
    },
    /// Logarithm of the product of nonzero eigenvalues per degree.
    Logdet {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        spectral: SpectralFlags,
    },
    /// Lefschetz number of a simplicial self-map.
    Lefschetz {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_enum, default_value_t = LefschetzFormat::Number)]
        format: LefschetzFormat,
    },
    /// Cup-product pairing matrix of H^p against H^q.
    Cup {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        degrees: Vec<usize>,
    },
    /// Catalog of the periodic system and extension rules.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Storage needed for boundary matrices in triplet form.
    EstimateMemory {
        #[arg(long, conflicts_with = "f_vector", required_unless_present = "f_vector")]
        complex: Option<PathBuf>,
        /// Comma-separated face counts f_0,f_1,...
        #[arg(long, value_delimiter = ',')]
        f_vector: Option<Vec<usize>>,
        /// Only this degree; all degrees 1..=dim when omitted.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Run the built-in fixture suite.
    Selftest {
        /// Only run criteria whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexCommand {
    /// Canonical complex file from a file or a named fixture.
    Build {
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        complex: Option<PathBuf>,
        /// point, circle:N, sphere:N, cross:N, icosahedron, rp2 or torus.
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Summary as JSON.
    Info {
        #[arg(long)]
        complex: PathBuf,
    },
    Subdivide {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    Product {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        with: PathBuf,
    },
    Quotient {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        action: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List {
        #[command(flatten)]
        source: CatalogSource,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
    },
    /// Rule verdicts for one record or a list of records.
    Check {
        #[command(flatten)]
        source: CatalogSource,
        #[arg(long)]
        record: PathBuf,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
    },
    Enumerate {
        #[command(flatten)]
        source: CatalogSource,
        #[arg(long, default_value_t = 24)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_components: usize,
        #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
        format: DataFormat,
    },
    Table {
        #[command(flatten)]
        source: CatalogSource,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
}

#[derive(Args, Debug)]
struct CatalogSource {
    /// Catalog JSON file; the built-in catalog when omitted.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Largest family index d of the built-in catalog.
    #[arg(long, default_value_t = DEFAULT_MAX_FAMILY_INDEX)]
    max_index: usize,
}

#[derive(Args, Debug)]
struct SpectralFlags {
    /// Eigenvalues below this count as zero; relative to the spectrum when omitted.
    #[arg(long, value_parser = positive_f64)]
    zero_threshold: Option<f64>,
    /// Largest matrix size solved densely; Lanczos above.
    #[arg(long, default_value_t = hodgeforge::hodge::DEFAULT_DENSE_CUTOFF)]
    dense_cutoff: usize,
    /// Eigenvalues computed per degree on the Lanczos path.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    count: u32,
}

impl SpectralFlags {
    fn config(&self) -> SpectralConfig {
        SpectralConfig {
            zero_threshold: self.zero_threshold,
            dense_cutoff: self.dense_cutoff,
            lanczos_count: self.count as usize,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BettiMethod {
    Exact,
    Spectral,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LefschetzFormat {
    Number,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Svg,
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive finite number, got {s}"))
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::MalformedInput(format!("cannot read {}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex> {
    io::parse_complex(&read(path)?)
}

fn load_catalog(src: &CatalogSource) -> Result<Catalog> {
    match &src.catalog {
        Some(p) => io::parse_catalog(&read(p)?),
        None => Ok(builtin_catalog(src.max_index)),
    }
}

fn fixture(spec: &str) -> Result<SimplicialComplex> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let n = || -> Result<usize> {
        arg.ok_or_else(|| Error::MalformedInput(format!("fixture `{name}` needs a size, as in `{name}:2`")))?
            .parse()
            .map_err(|e| Error::MalformedInput(format!("fixture size: {e}")))
    };
    let bad = |msg: String| Err(Error::MalformedInput(msg));
    match name {
        "point" => Ok(cx::point()),
        "icosahedron" => Ok(cx::icosahedron()),
        "rp2" => Ok(cx::rp2()),
        "torus" => Ok(cx::torus()),
        "circle" => match n()? {
            m if m >= 3 => Ok(cx::circle(m)),
            m => bad(format!("a circle needs at least 3 vertices, got {m}")),
        },
        "sphere" => match n()? {
            m if m <= 20 => Ok(cx::simplex_sphere(m)),
            m => bad(format!("sphere dimension {m} above 20")),
        },
        "cross" => match n()? {
            m if m <= 12 => Ok(cx::cross_polytope_sphere(m)),
            m => bad(format!("cross-polytope dimension {m} above 12")),
        },
        _ => bad(format!("unknown fixture `{spec}`")),
    }
}

fn csv_rows<T>(header: &str, rows: impl IntoIterator<Item = T>, line: impl Fn(&T) -> String) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        s.push_str(&line(&r));
        s.push('\n');
    }
    s
}

fn all_spectra(k: &SimplicialComplex, flags: &SpectralFlags) -> Result<Vec<SpectrumResult>> {
    spectra(&assemble_boundaries(k), &flags.config())
}

fn verdict_fields(v: &Verdict) -> (&'static str, String) {
    match v {
        Verdict::Pass => ("pass", String::new()),
        Verdict::Fail(r) => ("fail", r.clone()),
        Verdict::NotApplicable => ("not-applicable", String::new()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report_json(rep: &RuleReport) -> serde_json::Value {
    let verdicts: serde_json::Map<String, serde_json::Value> = rep
        .verdicts
        .iter()
        .map(|(r, v)| {
            let (tag, reason) = verdict_fields(v);
            let mut o = serde_json::Map::new();
            o.insert("verdict".into(), tag.into());
            if !reason.is_empty() {
                o.insert("reason".into(), reason.into());
            }
            (r.name().to_string(), serde_json::Value::Object(o))
        })
        .collect();
    serde_json::json!({ "passed": rep.passed(), "rules": verdicts })
}

fn json_doc(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Output of a successful command and whether it counts as success.
struct Outcome {
    data: String,
    ok: bool,
}

impl From<String> for Outcome {
    fn from(data: String) -> Self {
        Outcome { data, ok: true }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Complex(c) => complex_command(c)?.into(),
        Command::ExportBoundary { complex, degree } => {
            let k = load_complex(&complex)?;
            let dim = k.dim();
            if dim.is_none_or(|d| degree > d + 1) {
                return Err(Error::DegreeOutOfRange { degree, dim });
            }
            assemble_boundaries(&k).boundary(degree).write_triplets(degree).into()
        }
        Command::Betti { complex, method, spectral } => {
            let k = load_complex(&complex)?;
            let cs = assemble_boundaries(&k);
            let exact = betti_exact(&cs);
            let b = match method {
                BettiMethod::Exact => exact,
                BettiMethod::Spectral => betti_spectral(&spectra(&cs, &spectral.config())?, &exact)?,
            };
            format!("{}\n", serde_json::to_string(&b.0).expect("serialize")).into()
        }
        Command::Spectrum { complex, degree, spectral } => {
            let k = load_complex(&complex)?;
            let sp = match degree {
                Some(d) => vec![spectrum(&assemble_boundaries(&k), d, &spectral.config())?],
                None => all_spectra(&k, &spectral)?,
            };
            let rows = sp
                .iter()
                .flat_map(|s| s.eigenvalues.iter().enumerate().map(move |(i, l)| (s.degree, i, *l)));
            csv_rows("degree,index,eigenvalue", rows, |(d, i, l)| format!("{d},{i},{}", fmt_f64(*l))).into()
        }
        Command::HeatTrace { complex, times, spectral } => {
            let k = load_complex(&complex)?;
            let sp = all_spectra(&k, &spectral)?;
            let values = times
                .iter()
                .map(|&t| Ok((t, heat_supertrace(&sp, t)?)))
                .collect::<Result<Vec<_>>>()?;
            csv_rows("t,supertrace,euler", values, |(t, s)| {
                format!("{},{},{}", fmt_f64(*t), fmt_f64(*s), k.euler())
            })
            .into()
        }
        Command::Groundstate { complex, spectral } => {
            let k = load_complex(&complex)?;
            let sp = all_spectra(&k, &spectral)?;
            csv_rows("degree,ground_state", sp, |s| {
                format!("{},{}", s.degree, ground_state(s).map(fmt_f64).unwrap_or_default())
            })
            .into()
        }
        Command::Logdet { complex, spectral } => {
            let k = load_complex(&complex)?;
            let sp = all_spectra(&k, &spectral)?;
            let rows = sp
                .iter()
                .map(|s| match log_det_nonzero(s) {
                    Ok(v) => Ok((s.degree, fmt_f64(v))),
                    Err(Error::UndefinedDeterminant { .. }) => Ok((s.degree, String::new())),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            csv_rows("degree,log_det", rows, |(d, v)| format!("{d},{v}")).into()
        }
        Command::Lefschetz { complex, map, format } => {
            let k = load_complex(&complex)?;
            let t = SimplicialSelfMap::new(&k, io::parse_vertex_map(&read(&map)?)?)?;
            let r = lefschetz_report(&k, &t)?;
            match format {
                LefschetzFormat::Number => format!("{}\n", r.homology_supertrace),
                LefschetzFormat::Json => json_doc(&serde_json::json!({
                    "lefschetz_number": r.homology_supertrace.to_string(),
                    "chain_supertrace": r.chain_supertrace,
                    "fixed_f_vector": r.fixed_subcomplex.f_vector(),
                    "fixed_euler": r.chi_fixed,
                    "fixed_facets": r.fixed_subcomplex.facet_lists(),
                    "setwise_fixed_only": r.setwise_fixed_only.iter().map(|s| s.vertices().to_vec()).collect::<Vec<_>>(),
                })),
            }
            .into()
        }
        Command::Cup { complex, degrees } => {
            let k = load_complex(&complex)?;
            let cs = assemble_boundaries(&k);
            let o = orient(&k)?;
            let m = pairing_matrix(&cs, degrees[0], degrees[1], &o)?;
            let mut s = String::from("row");
            for j in 0..m.cols() {
                let _ = write!(s, ",{j}");
            }
            s.push('\n');
            for (i, row) in m.entries.iter().enumerate() {
                let _ = write!(s, "{i}");
                for v in row {
                    let _ = write!(s, ",{v}");
                }
                s.push('\n');
            }
            match m.determinant() {
                Some(d) => {
                    let _ = writeln!(s, "determinant,{d}");
                }
                None => s.push_str("determinant,\n"),
            }
            s.into()
        }
        Command::Catalog(c) => return catalog_command(c),
        Command::EstimateMemory { complex, f_vector, degree } => {
            let f = match (complex, f_vector) {
                (Some(p), _) => load_complex(&p)?.f_vector(),
                (None, Some(f)) => f,
                (None, None) => unreachable!("clap requires one source"),
            };
            let degrees: Vec<usize> = match degree {
                Some(d) => vec![d],
                None => (1..f.len()).collect(),
            };
            let rows = degrees
                .into_iter()
                .map(|d| estimate_storage(&f, d))
                .collect::<Result<Vec<_>>>()?;
            csv_rows("degree,nnz,index_width_bytes,value_width_bytes,bytes", rows, |e| {
                format!("{},{},{},{},{}", e.k, e.nnz, e.index_width_bytes, e.value_width_bytes, e.bytes)
            })
            .into()
        }
        Command::Selftest { filter } => {
            let report = run_selftest(&SelftestConfig {
                filter,
                ..Default::default()
            })?;
            Outcome {
                data: report.render(),
                ok: report.all_passed(),
            }
        }
    })
}

fn complex_command(c: ComplexCommand) -> Result<String> {
    let k = match c {
        ComplexCommand::Build { complex, fixture: fx } => match (complex, fx) {
            (Some(p), _) => load_complex(&p)?,
            (None, Some(f)) => fixture(&f)?,
            (None, None) => unreachable!("clap requires one source"),
        },
        ComplexCommand::Info { complex } => {
            let k = load_complex(&complex)?;
            let (pseudo, orientable) = match orient(&k) {
                Ok(Orientation::Orientable(_)) => (true, Some(true)),
                Ok(Orientation::NonOrientable { .. }) => (true, Some(false)),
                Err(Error::NotPseudomanifold { .. } | Error::NotPseudomanifoldShape(_)) => (false, None),
                Err(e) => return Err(e),
            };
            return Ok(json_doc(&serde_json::json!({
                "name": k.name(),
                "dim": k.dim(),
                "f_vector": k.f_vector(),
                "euler": k.euler(),
                "facets": k.facets().len(),
                "pseudomanifold": pseudo,
                "orientable": orientable,
            })));
        }
        ComplexCommand::Subdivide { complex, times } => {
            let mut k = load_complex(&complex)?;
            for _ in 0..times {
                k = cx::barycentric_subdivision(&k);
            }
            k
        }
        ComplexCommand::Product { complex, with } => cx::product(&load_complex(&complex)?, &load_complex(&with)?),
        ComplexCommand::Quotient { complex, action } => {
            let k = load_complex(&complex)?;
            let g: GroupAction = io::parse_action(&read(&action)?, &k)?;
            cx::quotient(&k, &g)?
        }
    };
    Ok(io::write_complex(&k))
}

fn catalog_command(c: CatalogCommand) -> Result<Outcome> {
    Ok(match c {
        CatalogCommand::List { source, format } => {
            let cat = load_catalog(&source)?;
            match format {
                DataFormat::Json => format!("{}\n", cat.to_json()),
                DataFormat::Csv => csv_rows(
                    "name,dim,euler,betti,family,division_algebra,fundamental_group,boson,mass_gev",
                    cat.entries(),
                    |e| {
                        let betti = match &e.betti {
                            Some(b) => {
                                format!("({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                            }
                            None => "unknown".into(),
                        };
                        let enum_name = |v: serde_json::Value| v.as_str().unwrap_or_default().to_string();
                        format!(
                            "{},{},{},{},{},{},{},{},{}",
                            csv_field(&e.name),
                            e.dim,
                            e.euler,
                            csv_field(&betti),
                            enum_name(serde_json::to_value(e.family).expect("serialize")),
                            enum_name(serde_json::to_value(e.division_algebra).expect("serialize")),
                            e.fundamental_group,
                            csv_field(e.boson.as_ref().map(|b| b.name.as_str()).unwrap_or("")),
                            e.boson.as_ref().and_then(|b| b.mass_gev).map(fmt_f64).unwrap_or_default()
                        )
                    },
                ),
            }
            .into()
        }
        CatalogCommand::Check { source, record, format } => {
            let cat = load_catalog(&source)?;
            let records = io::parse_records(&read(&record)?)?;
            let reports = records
                .iter()
                .map(|r| Ok((r, check_record(&cat, r)?)))
                .collect::<Result<Vec<_>>>()?;
            match format {
                DataFormat::Json => json_doc(&serde_json::Value::Array(
                    reports
                        .iter()
                        .map(|(r, rep)| {
                            let mut v = report_json(rep);
                            v["record"] = serde_json::to_value(r).expect("serialize");
                            v
                        })
                        .collect(),
                )),
                DataFormat::Csv => {
                    let mut s = String::from("record,rule,verdict,reason\n");
                    for (r, rep) in &reports {
                        let label = csv_field(&r.to_string());
                        for (rule, v) in &rep.verdicts {
                            let (tag, reason) = verdict_fields(v);
                            let _ = writeln!(s, "{label},{rule},{tag},{}", csv_field(&reason));
                        }
                        let overall = if rep.passed() { "pass" } else { "fail" };
                        let _ = writeln!(s, "{label},overall,{overall},");
                    }
                    s
                }
            }
            .into()
        }
        CatalogCommand::Enumerate { source, max_dim, max_components, format } => {
            let cat = load_catalog(&source)?;
            let out = enumerate_extensions(
                &cat,
                &EnumerationOptions {
                    max_dim,
                    max_components,
                    include_reference: true,
                },
            );
            match format {
                DataFormat::Json => json_doc(&serde_json::Value::Array(
                    out.iter()
                        .map(|(r, rep)| {
                            let mut v = report_json(rep);
                            v["record"] = serde_json::to_value(r).expect("serialize");
                            v
                        })
                        .collect(),
                )),
                DataFormat::Csv => csv_rows("target,group,components,overall,failed_rules", &out, |(r, rep)| {
                    let failed = rep.failures().iter().map(|f| f.name()).collect::<Vec<_>>().join(";");
                    format!(
                        "{},{},{},{},{}",
                        csv_field(&r.target),
                        r.group,
                        csv_field(&r.components.join("+")),
                        if rep.passed() { "pass" } else { "fail" },
                        failed
                    )
                }),
            }
            .into()
        }
        CatalogCommand::Table { source, format } => {
            let rows = periodic_table(&load_catalog(&source)?);
            match format {
                TableFormat::Csv => table_csv(&rows),
                TableFormat::Svg => table_svg(&rows),
            }
            .into()
        }
    })
}

/// Runs one command. Data goes to `out` (or the `--out` file), diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    if let Err(e) = hodgeforge::init_threads_from_env() {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    match execute(cli.command) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &outcome.data).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => out.write_all(outcome.data.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: {msg}");
                return 1;
            }
            if outcome.ok {
                0
            } else {
                let _ = writeln!(err, "error: some criteria failed");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}
