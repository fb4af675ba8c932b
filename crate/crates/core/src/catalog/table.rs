use std::fmt::Write as _;

use super::{Catalog, CatalogEntry, Family};

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub name: String,
    pub dim: usize,
    pub euler: i64,
    pub betti: Option<Vec<usize>>,
    pub boson: Option<String>,
    pub mass_gev: Option<f64>,
}

impl TableRow {
    fn from_entry(e: &CatalogEntry) -> Self {
        TableRow {
            name: e.name.clone(),
            dim: e.dim,
            euler: e.euler,
            betti: e.betti.clone(),
            boson: e.boson.as_ref().map(|b| b.name.clone()),
            mass_gev: e.boson.as_ref().and_then(|b| b.mass_gev),
        }
    }

    pub fn betti_string(&self) -> String {
        match &self.betti {
            Some(b) => format!("({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            None => "unknown".into(),
        }
    }
}

/// Rows of the dimension-Euler characteristic plane, sorted by (dim, χ, name).
/// The auxiliary Lie group entries are left out.
pub fn periodic_table(catalog: &Catalog) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = catalog
        .entries()
        .iter()
        .filter(|e| e.family != Family::LieGroup)
        .map(TableRow::from_entry)
        .collect();
    rows.sort_by(|a, b| (a.dim, a.euler, &a.name).cmp(&(b.dim, b.euler, &b.name)));
    rows
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("name,dim,euler,betti,boson,mass_gev\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_field(&r.name),
            r.dim,
            r.euler,
            csv_field(&r.betti_string()),
            csv_field(r.boson.as_deref().unwrap_or("")),
            r.mass_gev.map(|m| m.to_string()).unwrap_or_default()
        );
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Scatter of the rows with dimension on the x axis and χ on the y axis.
/// Entries sharing a point are listed in one label.
pub fn table_svg(rows: &[TableRow]) -> String {
    const W: f64 = 960.0;
    const H: f64 = 640.0;
    const MARGIN: f64 = 60.0;
    let max_dim = rows.iter().map(|r| r.dim).max().unwrap_or(0).max(1) as f64;
    let min_chi = rows.iter().map(|r| r.euler).min().unwrap_or(0).min(0) as f64;
    let max_chi = rows.iter().map(|r| r.euler).max().unwrap_or(1).max(min_chi as i64 + 1) as f64;
    let x = |d: usize| MARGIN + (d as f64 / max_dim) * (W - 2.0 * MARGIN);
    let y = |c: i64| H - MARGIN - ((c as f64 - min_chi) / (max_chi - min_chi)) * (H - 2.0 * MARGIN);

    let mut points: Vec<((usize, i64), Vec<&str>)> = Vec::new();
    for r in rows {
        match points.iter_mut().find(|(k, _)| *k == (r.dim, r.euler)) {
            Some((_, names)) => names.push(&r.name),
            None => points.push(((r.dim, r.euler), vec![&r.name])),
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (x0, y0) = (MARGIN, H - MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, W - MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}" stroke="black"/>"#);
    for d in (0..=max_dim as usize).step_by(2) {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{d}</text>"#, x(d), y0 + 16.0);
    }
    for c in min_chi as i64..=max_chi as i64 {
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{c}</text>"#, x0 - 8.0, y(c) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">dimension</text>"#, W / 2.0, H - 16.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">Euler characteristic</text>"#,
        H / 2.0,
        H / 2.0
    );
    for ((d, c), names) in &points {
        let (px, py) = (x(*d), y(*c));
        let _ = writeln!(s, r#"<circle cx="{px:.1}" cy="{py:.1}" r="3"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            px + 5.0,
            py - 5.0,
            xml_escape(&names.join(" "))
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_catalog, DEFAULT_MAX_FAMILY_INDEX};
    use super::*;

    #[test]
    fn rows_match_catalog() {
        let rows = periodic_table(&builtin_catalog(DEFAULT_MAX_FAMILY_INDEX));
        let w6 = rows.iter().find(|r| r.name == "W6").unwrap();
        assert_eq!((w6.dim, w6.euler), (6, 6));
        assert_eq!(w6.betti_string(), "(1,0,2,0,2,0,1)");
        assert_eq!(w6.boson.as_deref(), Some("W+-"));
        assert_eq!(w6.mass_gev, Some(80.39));
        let s2 = rows.iter().find(|r| r.name == "S2").unwrap();
        assert_eq!((s2.boson.clone(), s2.mass_gev), (None, None));
        let op2 = rows.iter().find(|r| r.name == "OP2").unwrap();
        assert_eq!((op2.boson.as_deref(), op2.mass_gev), (Some("graviton"), Some(0.0)));
        assert!(rows.iter().all(|r| r.name != "SU3"));
    }

    #[test]
    fn csv_layout() {
        let rows = periodic_table(&builtin_catalog(1));
        let csv = table_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("name,dim,euler,betti,boson,mass_gev"));
        assert!(csv.contains("W6,6,6,\"(1,0,2,0,2,0,1)\",W+-,80.39\n"));
        assert!(csv.contains("S2,2,2,\"(1,0,1)\",,\n"));
        assert!(csv.contains("Berger7,7,0,unknown,,\n"));
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = table_svg(&periodic_table(&builtin_catalog(2)));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("W6 E6") || svg.contains("E6 W6"));
        assert_eq!(svg, table_svg(&periodic_table(&builtin_catalog(2))));
    }
}
