//! Tree JSON and point CSV.
//!
//! Trees serialize as
//!
//! ```text
//! {"version": "1.0", "n", "d", "k", "alpha", "rule",
//!  "events": [{"r", "kind": "birth", "point"} | {"r", "kind": "merge", "a", "b"}],
//!  "provenance": {"C_delta"?, "delta"?, "eps_tilde"?, "seed"?, "pruning"?}}
//! ```
//!
//! Radii are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly. Readers accept any `1.x` version
//! and reject other major versions.

use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::estimators::Rule;
use crate::geometry::PointSet;
use crate::tree::{ClusterTree, EventKind, MergeEvent, Provenance, TreeMeta};

pub const TREE_SCHEMA_VERSION: &str = "1.0";

#[derive(Serialize)]
struct TreeOut<'a> {
    version: &'static str,
    n: usize,
    d: usize,
    k: usize,
    alpha: f64,
    rule: Rule,
    events: Vec<EventOut>,
    provenance: &'a Provenance,
}

#[derive(Serialize)]
struct EventOut {
    r: Box<RawValue>,
    #[serde(flatten)]
    kind: KindJson,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum KindJson {
    Birth { point: usize },
    Merge { a: usize, b: usize },
}

#[derive(Deserialize)]
struct TreeIn {
    n: usize,
    d: usize,
    k: usize,
    alpha: f64,
    rule: Rule,
    events: Vec<EventIn>,
    #[serde(default)]
    provenance: Provenance,
}

#[derive(Deserialize)]
struct EventIn {
    r: f64,
    #[serde(flatten)]
    kind: KindJson,
}

/// A radius as a JSON number with 17 significant digits.
pub fn format_radius(r: f64) -> String {
    format!("{r:.16e}")
}

/// Serializes `tree` as pretty-printed JSON ending in a newline.
pub fn tree_to_json(tree: &ClusterTree) -> Result<String> {
    let events = tree
        .events()
        .iter()
        .map(|e| {
            let r = RawValue::from_string(format_radius(e.radius))
                .map_err(|err| Error::Serialization(err.to_string()))?;
            let kind = match e.kind {
                EventKind::Birth { point } => KindJson::Birth { point },
                EventKind::Merge { a, b } => KindJson::Merge { a, b },
            };
            Ok(EventOut { r, kind })
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = tree.meta();
    let out = TreeOut {
        version: TREE_SCHEMA_VERSION,
        n: tree.n(),
        d: meta.d,
        k: meta.k,
        alpha: meta.alpha,
        rule: meta.rule,
        events,
        provenance: &tree.provenance,
    };
    let mut s =
        serde_json::to_string_pretty(&out).map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses and validates a tree written by [`tree_to_json`].
pub fn tree_from_json(json: &str) -> Result<ClusterTree> {
    // Check the version before the rest of the schema, so a future layout
    // fails as a version problem rather than a parse error.
    #[derive(Deserialize)]
    struct VersionOnly {
        version: String,
    }
    let v: VersionOnly =
        serde_json::from_str(json).map_err(|e| Error::MalformedTree(e.to_string()))?;
    let major = v.version.split('.').next().unwrap_or("");
    if major != "1" {
        return Err(Error::UnsupportedVersion(v.version));
    }
    let t: TreeIn = serde_json::from_str(json).map_err(|e| Error::MalformedTree(e.to_string()))?;
    let events = t
        .events
        .into_iter()
        .map(|e| match e.kind {
            KindJson::Birth { point } => MergeEvent::birth(e.r, point),
            KindJson::Merge { a, b } => MergeEvent::merge(e.r, a, b),
        })
        .collect();
    let meta = TreeMeta {
        d: t.d,
        k: t.k,
        alpha: t.alpha,
        rule: t.rule,
    };
    Ok(ClusterTree::new(t.n, meta, events)?.with_provenance(t.provenance))
}

/// Reads points from comma-separated text, one point per row.
///
/// A first row that does not parse as numbers is taken as a header.
/// Fields are trimmed; blank lines are skipped. Errors name the 1-based
/// line of the offending row.
pub fn read_points_csv<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Data {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if idx == 0 => continue,
            Err(_) => {
                let bad = rec.iter().find(|f| f.parse::<f64>().is_err()).unwrap_or("");
                return Err(Error::Data {
                    line,
                    message: format!("`{bad}` is not a number"),
                });
            }
        };
        if let Some(axis) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data {
                line,
                message: format!("non-finite value in column {}", axis + 1),
            });
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(Error::Data {
                    line,
                    message: format!("expected {w} columns, found {}", values.len()),
                })
            }
            _ => {}
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::Data {
            line: 0,
            message: "no data rows".into(),
        });
    }
    PointSet::new(rows)
}

/// Writes points as CSV with a `x1,...,xd` header.
pub fn points_to_csv(ps: &PointSet) -> String {
    let mut out: String = (1..=ps.dim())
        .map(|j| format!("x{j}"))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for p in ps.iter() {
        let row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes one `index,label` row per point; unborn points get `unborn`.
pub fn labels_to_csv(labels: &[Option<usize>]) -> String {
    let mut out = String::from("index,label\n");
    for (i, l) in labels.iter().enumerate() {
        match l {
            Some(id) => out.push_str(&format!("{i},{id}\n")),
            None => out.push_str(&format!("{i},unborn\n")),
        }
    }
    out
}
