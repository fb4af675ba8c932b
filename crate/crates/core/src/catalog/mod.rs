//! The periodic system of positive curvature manifolds: catalog entries,
//! extension records and the rules an extension `N₁ ∪ … ∪ N_k → M` must obey.

mod rules;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use rules::{
    check_berger, check_dimensions, check_euler_lefschetz, check_frankel, check_group,
    check_grove_searle, check_record, check_synge, check_synge_entry, enumerate_extensions,
    reference_records, EnumerationOptions, ExtensionGroup, ExtensionRecord, ResolvedRecord, Rule, RuleReport,
    Verdict,
};
pub use table::{periodic_table, table_csv, table_svg, TableRow};

/// Default upper index `d` for the families `S^{2d}`, `RP^{2d}`, `CP^d`, `HP^d`.
pub const DEFAULT_MAX_FAMILY_INDEX: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "sphere")]
    Sphere,
    RP,
    CP,
    HP,
    OP,
    Wallach,
    Eschenburg,
    #[serde(rename = "odd-space-form")]
    OddSpaceForm,
    #[serde(rename = "Aloff-Wallach")]
    AloffWallach,
    Bazaikin,
    Berger,
    /// Not a positive curvature manifold; kept for its Betti vector.
    #[serde(rename = "Lie-group")]
    LieGroup,
}

impl Family {
    /// Spheres and the projective spaces over the four division algebras.
    pub fn is_sphere_or_projective(self) -> bool {
        matches!(self, Family::Sphere | Family::RP | Family::CP | Family::HP | Family::OP)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DivisionAlgebra {
    R,
    C,
    H,
    O,
    #[serde(rename = "none")]
    None,
}

/// Fundamental group tag: trivial, or cyclic of the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FundamentalGroup {
    Trivial,
    Cyclic(u32),
}

impl fmt::Display for FundamentalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FundamentalGroup::Trivial => write!(f, "0"),
            FundamentalGroup::Cyclic(m) => write!(f, "Z{m}"),
        }
    }
}

impl FromStr for FundamentalGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" | "1" | "trivial" => Ok(FundamentalGroup::Trivial),
            _ => s
                .strip_prefix('Z')
                .and_then(|m| m.parse::<u32>().ok())
                .filter(|&m| m >= 2)
                .map(FundamentalGroup::Cyclic)
                .ok_or_else(|| Error::MalformedInput(format!("unknown fundamental group tag `{s}`"))),
        }
    }
}

impl TryFrom<String> for FundamentalGroup {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FundamentalGroup> for String {
    fn from(g: FundamentalGroup) -> String {
        g.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boson {
    pub name: String,
    /// Rest mass in GeV/c²; `None` when not recorded.
    pub mass_gev: Option<f64>,
    pub spin: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    pub euler: i64,
    /// `None` when the Betti numbers are not known.
    pub betti: Option<Vec<usize>>,
    pub family: Family,
    pub division_algebra: DivisionAlgebra,
    pub fundamental_group: FundamentalGroup,
    #[serde(default)]
    pub symmetry_note: String,
    #[serde(default)]
    pub boson: Option<Boson>,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, dim: usize, euler: i64, betti: Option<Vec<usize>>, family: Family) -> Self {
        let division_algebra = match family {
            Family::RP => DivisionAlgebra::R,
            Family::CP => DivisionAlgebra::C,
            Family::HP => DivisionAlgebra::H,
            Family::OP => DivisionAlgebra::O,
            _ => DivisionAlgebra::None,
        };
        CatalogEntry {
            name: name.into(),
            dim,
            euler,
            betti,
            family,
            division_algebra,
            fundamental_group: FundamentalGroup::Trivial,
            symmetry_note: String::new(),
            boson: None,
        }
    }

    fn algebra(mut self, a: DivisionAlgebra) -> Self {
        self.division_algebra = a;
        self
    }

    fn pi1(mut self, g: FundamentalGroup) -> Self {
        self.fundamental_group = g;
        self
    }

    fn note(mut self, n: &str) -> Self {
        self.symmetry_note = n.to_string();
        self
    }

    fn boson(mut self, name: &str, mass_gev: f64, spin: u32) -> Self {
        self.boson = Some(Boson {
            name: name.to_string(),
            mass_gev: Some(mass_gev),
            spin,
        });
        self
    }

    pub fn is_even_dimensional(&self) -> bool {
        self.dim.is_multiple_of(2)
    }

    /// Checks the Betti vector against dimension and Euler characteristic.
    pub fn validate(&self) -> Result<()> {
        if let Some(b) = &self.betti {
            if b.len() != self.dim + 1 {
                return Err(Error::MalformedInput(format!(
                    "{}: Betti vector has {} entries for dimension {}",
                    self.name,
                    b.len(),
                    self.dim
                )));
            }
            let alt: i64 = b
                .iter()
                .enumerate()
                .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum();
            if alt != self.euler {
                return Err(Error::MalformedInput(format!(
                    "{}: alternating Betti sum {alt} differs from Euler characteristic {}",
                    self.name, self.euler
                )));
            }
        } else if self.dim % 2 == 1 && self.euler != 0 {
            return Err(Error::MalformedInput(format!(
                "{}: odd-dimensional entry with Euler characteristic {}",
                self.name, self.euler
            )));
        }
        Ok(())
    }
}

fn betti_with(dim: usize, ones_every: usize) -> Vec<usize> {
    (0..=dim).map(|k| usize::from(k % ones_every == 0)).collect()
}

fn sphere_betti(dim: usize) -> Vec<usize> {
    if dim == 0 {
        return vec![2];
    }
    (0..=dim).map(|k| usize::from(k == 0 || k == dim)).collect()
}

/// Catalog entries, looked up by name.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Validates every entry and rejects duplicate names.
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for e in &entries {
            e.validate()?;
            if !names.insert(e.name.as_str()) {
                return Err(Error::MalformedInput(format!("duplicate catalog entry `{}`", e.name)));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("catalog: {e}")))?;
        Catalog::new(entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("catalog entries serialize")
    }
}

/// The known even-dimensional positive curvature manifolds, a few
/// odd-dimensional families with unknown Betti numbers, and `SU(3)`.
pub fn builtin_catalog(max_family_index: usize) -> Catalog {
    use DivisionAlgebra as A;
    use FundamentalGroup::*;
    let mut v = Vec::new();
    for d in 0..=max_family_index {
        let n = 2 * d;
        v.push(CatalogEntry::new(format!("S{n}"), n, 2, Some(sphere_betti(n)), Family::Sphere));
    }
    for d in 0..=max_family_index {
        let n = 2 * d;
        let mut b = vec![0; n + 1];
        b[0] = 1;
        let pi1 = if d == 0 { Trivial } else { Cyclic(2) };
        v.push(CatalogEntry::new(format!("RP{n}"), n, 1, Some(b), Family::RP).pi1(pi1));
    }
    for d in 1..=max_family_index {
        v.push(
            CatalogEntry::new(format!("CP{d}"), 2 * d, d as i64 + 1, Some(betti_with(2 * d, 2)), Family::CP)
                .note("U(1) extensions")
                .boson("photon", 0.0, 1),
        );
    }
    for d in 1..=max_family_index {
        v.push(
            CatalogEntry::new(format!("HP{d}"), 4 * d, d as i64 + 1, Some(betti_with(4 * d, 4)), Family::HP)
                .note("SU(2) extensions")
                .boson("gluon", 0.0, 1),
        );
    }
    v.push(CatalogEntry::new("OP1", 8, 2, Some(sphere_betti(8)), Family::OP).note("homeomorphic to S8"));
    v.push(
        CatalogEntry::new("OP2", 16, 3, Some(betti_with(16, 8)), Family::OP)
            .note("Moufang-Cayley plane F4/Spin(9); terminal octonionic entry")
            .boson("graviton", 0.0, 2),
    );
    let w6 = vec![1, 0, 2, 0, 2, 0, 1];
    v.push(
        CatalogEntry::new("W6", 6, 6, Some(w6.clone()), Family::Wallach)
            .algebra(A::C)
            .note("flag manifold SU(3)/T2; same Betti vector as E6 with a different cohomology ring; E12 in the boson lineup is read as W12")
            .boson("W+-", 80.39, 1),
    );
    v.push(
        CatalogEntry::new("E6", 6, 6, Some(w6), Family::Eschenburg)
            .algebra(A::C)
            .note("biquotient of SU(3) by T2 acting as g -> z1 g z2^-1; shares the W+- association with W6")
            .boson("W+-", 80.39, 1),
    );
    v.push(
        CatalogEntry::new("W12", 12, 6, Some(vec![1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 1]), Family::Wallach)
            .algebra(A::H)
            .note("flag manifold Sp(3)/Sp(1)^3; a circle action fixes W6")
            .boson("Z0", 91.19, 1),
    );
    let mut w24 = vec![0; 25];
    w24[0] = 1;
    w24[8] = 2;
    w24[16] = 2;
    w24[24] = 1;
    v.push(
        CatalogEntry::new("W24", 24, 6, Some(w24), Family::Wallach)
            .algebra(A::O)
            .note("flag manifold F4/Spin(8); F4 symmetry shared with OP2")
            .boson("Higgs", 125.35, 0),
    );
    v.push(
        CatalogEntry::new("SU3", 8, 0, Some(vec![1, 0, 0, 1, 0, 1, 0, 0, 1]), Family::LieGroup)
            .note("auxiliary: W6 = SU(3)/T2"),
    );
    for n in [3usize, 5, 7] {
        v.push(
            CatalogEntry::new(format!("S{n}/Z3"), n, 0, None, Family::OddSpaceForm)
                .pi1(Cyclic(3))
                .note("lens space quotient of a round sphere"),
        );
    }
    v.push(CatalogEntry::new("AloffWallach7", 7, 0, None, Family::AloffWallach).note("SU(3)/U(1)"));
    v.push(CatalogEntry::new("Bazaikin13", 13, 0, None, Family::Bazaikin).note("biquotient of SU(5)"));
    v.push(CatalogEntry::new("Berger7", 7, 0, None, Family::Berger).note("SO(5)/SO(3)"));
    v.push(CatalogEntry::new("Berger13", 13, 0, None, Family::Berger).note("SU(5)/Sp(2)U(1)"));
    Catalog::new(v).expect("builtin catalog is consistent")
}
