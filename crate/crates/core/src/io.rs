//! JSON readers and writers for complexes, vertex maps, group actions,
//! catalogs and extension records. Readers never panic on bad input.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::catalog::{Catalog, ExtensionRecord};
use crate::complex::{GroupAction, SimplicialComplex, VertexId, VertexMap};
use crate::error::{Error, Result};

/// Upper bound on `Σ (2^|F| − 1)` over the facets of a complex read from a
/// file, the number of faces enumerated while closing it.
pub const MAX_FACE_ENUMERATION: u64 = 1 << 23;

fn malformed(what: &str, e: impl fmt::Display) -> Error {
    Error::MalformedInput(format!("{what}: {e}"))
}

fn utf8<'a>(what: &str, bytes: &'a [u8]) -> Result<&'a str> {
    std::str::from_utf8(bytes).map_err(|e| malformed(what, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    #[serde(default)]
    name: Option<String>,
    facets: Vec<Vec<VertexId>>,
}

pub fn parse_complex(bytes: &[u8]) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(utf8("complex", bytes)?).map_err(|e| malformed("complex", e))?;
    let mut work: u64 = 0;
    for f in &file.facets {
        if f.len() > 62 {
            return Err(Error::MalformedInput(format!("facet with {} vertices", f.len())));
        }
        work = work.saturating_add((1u64 << f.len()) - 1);
    }
    if work > MAX_FACE_ENUMERATION {
        return Err(Error::MalformedInput(format!(
            "closing these facets would enumerate {work} faces, above the limit of {MAX_FACE_ENUMERATION}"
        )));
    }
    SimplicialComplex::from_facets(file.name.unwrap_or_else(|| "K".into()), file.facets)
}

/// Facets in canonical order, one per line.
pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut s = String::from("{\n");
    let _ = writeln!(s, "  \"name\": {},", serde_json::Value::String(k.name().to_string()));
    s.push_str("  \"facets\": [");
    let facets = k.facet_lists();
    for (i, f) in facets.iter().enumerate() {
        let body = f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
        let sep = if i + 1 < facets.len() { "," } else { "" };
        let _ = write!(s, "\n    [{body}]{sep}");
    }
    if !facets.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

/// A JSON object from vertex labels to vertex labels that rejects repeated keys.
struct StrictVertexMap(BTreeMap<VertexId, VertexId>);

impl<'de> Deserialize<'de> for StrictVertexMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = StrictVertexMap;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping vertex labels to vertex labels")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
                let mut m = BTreeMap::new();
                while let Some((k, v)) = access.next_entry::<String, VertexId>()? {
                    let key: VertexId = k
                        .parse()
                        .map_err(|_| de::Error::custom(format!("`{k}` is not a vertex label")))?;
                    if m.insert(key, v).is_some() {
                        return Err(de::Error::custom(format!("vertex {key} listed twice")));
                    }
                }
                Ok(StrictVertexMap(m))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    map: StrictVertexMap,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    generators: Vec<StrictVertexMap>,
}

/// Reads `{"map": {"v": w, ...}}`. Checking it against a complex is left to
/// the consumer.
pub fn parse_vertex_map(bytes: &[u8]) -> Result<VertexMap> {
    let file: MapFile = serde_json::from_str(utf8("map", bytes)?).map_err(|e| malformed("map", e))?;
    Ok(VertexMap::new(file.map.0))
}

pub fn write_vertex_map(map: &VertexMap) -> String {
    format!("{{\"map\": {}}}\n", map_object(map))
}

fn map_object(map: &VertexMap) -> String {
    let body = map
        .as_map()
        .iter()
        .map(|(v, w)| format!("\"{v}\": {w}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{body}}}")
}

/// Reads `{"generators": [{"v": w, ...}, ...]}`, unchecked.
pub fn parse_generators(bytes: &[u8]) -> Result<Vec<VertexMap>> {
    let file: ActionFile = serde_json::from_str(utf8("action", bytes)?).map_err(|e| malformed("action", e))?;
    Ok(file.generators.into_iter().map(|m| VertexMap::new(m.0)).collect())
}

pub fn parse_action(bytes: &[u8], k: &SimplicialComplex) -> Result<GroupAction> {
    GroupAction::new(k, parse_generators(bytes)?)
}

pub fn write_action(action: &GroupAction) -> String {
    let gens = action.generators().iter().map(map_object).collect::<Vec<_>>().join(",\n    ");
    format!("{{\n  \"generators\": [\n    {gens}\n  ]\n}}\n")
}

pub fn parse_catalog(bytes: &[u8]) -> Result<Catalog> {
    Catalog::from_json(utf8("catalog", bytes)?)
}

pub fn parse_record(bytes: &[u8]) -> Result<ExtensionRecord> {
    ExtensionRecord::from_json(utf8("extension record", bytes)?)
}

/// A record file holds a single record or a list of them.
pub fn parse_records(bytes: &[u8]) -> Result<Vec<ExtensionRecord>> {
    let text = utf8("extension records", bytes)?;
    if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| malformed("extension records", e))
    } else {
        Ok(vec![ExtensionRecord::from_json(text)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cross_polytope_antipodal, cross_polytope_sphere, icosahedron, icosahedron_antipodal, torus};
    use proptest::prelude::*;

    #[test]
    fn complex_roundtrip() {
        for k in [torus(), cross_polytope_sphere(3), icosahedron(), SimplicialComplex::empty("E")] {
            let text = write_complex(&k);
            let back = parse_complex(text.as_bytes()).unwrap();
            assert_eq!(back, k);
            assert_eq!(back.name(), k.name());
            assert_eq!(write_complex(&back), text);
        }
    }

    #[test]
    fn writer_is_canonical() {
        let a = parse_complex(br#"{"name": "t", "facets": [[2,1,0],[3,2,0],[1,2,3],[0,1,3]]}"#).unwrap();
        let text = write_complex(&a);
        assert!(text.contains("[0, 1, 2],\n    [0, 1, 3],\n    [0, 2, 3],\n    [1, 2, 3]\n"));
        assert_eq!(parse_complex(br#"{"facets": [[0]]}"#).unwrap().name(), "K");
    }

    #[test]
    fn complex_errors() {
        for bad in [
            &b"not json"[..],
            br#"{"facets": [[0, 0]]}"#,
            br#"{"facets": [[]]}"#,
            br#"{"facets": [[-1, 2]]}"#,
            br#"{"facets": [[1.5]]}"#,
            br#"{"name": "x"}"#,
            br#"{"facets": [], "extra": 1}"#,
            br#"{"facets": [[0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23,24]]}"#,
            b"\xff\xfe",
        ] {
            assert!(
                matches!(parse_complex(bad), Err(Error::MalformedInput(_))),
                "{}",
                String::from_utf8_lossy(bad)
            );
        }
    }

    #[test]
    fn map_roundtrip_and_errors() {
        let k = cross_polytope_sphere(3);
        let m = cross_polytope_antipodal(&k);
        let text = write_vertex_map(&m);
        assert_eq!(parse_vertex_map(text.as_bytes()).unwrap(), m);
        assert!(parse_vertex_map(br#"{"map": {"0": 1, "0": 2}}"#).is_err());
        assert!(parse_vertex_map(br#"{"map": {"a": 1}}"#).is_err());
        assert!(parse_vertex_map(br#"{"map": [1, 2]}"#).is_err());
        assert!(parse_vertex_map(br#"{"map": {"0": -1}}"#).is_err());
    }

    #[test]
    fn action_roundtrip() {
        let k = icosahedron();
        let g = GroupAction::new(&k, vec![icosahedron_antipodal(&k)]).unwrap();
        let text = write_action(&g);
        let back = parse_action(text.as_bytes(), &k).unwrap();
        assert_eq!(back.generators(), g.generators());
        // a non-permutation generator
        assert!(parse_action(br#"{"generators": [{"0": 0}]}"#, &k).is_err());
    }

    #[test]
    fn records() {
        let one = parse_records(br#"{"components": ["W6"], "group": "U1", "target": "W12"}"#).unwrap();
        assert_eq!(one.len(), 1);
        let two = parse_records(
            br#"[{"components": ["W6"], "group": "U1", "target": "W12"},
                 {"components": ["S2", "S2", "S0"], "group": "SU2", "target": "W6"}]"#,
        )
        .unwrap();
        assert_eq!(two.len(), 2);
        assert!(parse_records(b"[1]").is_err());
        assert!(parse_record(b"").is_err());
    }

    proptest! {
        #[test]
        fn parsers_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
            let _ = parse_complex(&bytes);
            let _ = parse_vertex_map(&bytes);
            let _ = parse_generators(&bytes);
            let _ = parse_catalog(&bytes);
            let _ = parse_records(&bytes);
        }

        #[test]
        fn random_complexes_roundtrip(facets in proptest::collection::vec(proptest::collection::btree_set(0u32..9, 1..5), 0..8)) {
            let k = SimplicialComplex::from_facets("p", facets.into_iter().map(|f| f.into_iter().collect::<Vec<_>>())).unwrap();
            prop_assert_eq!(parse_complex(write_complex(&k).as_bytes()).unwrap(), k);
        }
    }
}
